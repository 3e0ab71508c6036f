#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qbias/matrix.hpp"
#include "qbias/states.hpp"

namespace qbias {

// A noise channel at fixed strength p as an explicit Kraus decomposition.
struct KrausChannel {
    std::string label;
    double p = 0.0;
    int dim = 2;
    std::vector<ComplexMatrix> kraus;
};

inline double completeness_defect(const KrausChannel& c) {
    ComplexMatrix sum(c.dim);
    for (const ComplexMatrix& k : c.kraus) sum += dagger(k) * k;
    return max_abs_diff(sum, ComplexMatrix::identity(c.dim));
}

inline KrausChannel make_kraus_channel(std::string label, double p, int dim,
                                       std::vector<ComplexMatrix> ops) {
    KrausChannel c{std::move(label), p, dim, std::move(ops)};
    if (c.kraus.empty()) throw std::invalid_argument("make_kraus_channel: no Kraus operators");
    for (const ComplexMatrix& k : c.kraus)
        if (k.dim() != dim)
            throw std::invalid_argument("make_kraus_channel: operator dimension mismatch");
    if (completeness_defect(c) > 1e-10)
        throw std::invalid_argument("make_kraus_channel: Kraus completeness violated");
    return c;
}

namespace detail {

inline void check_strength(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("channel strength p must lie in [0,1]");
}

} // namespace detail

// (1-p) rho + (p/d) I. Pauli Kraus set for d = 2, Weyl shift/clock set above.
inline KrausChannel depolarizing(double p, int d = 2) {
    detail::check_strength(p);
    if (d < 2) throw std::invalid_argument("depolarizing: need d >= 2");
    std::vector<ComplexMatrix> ops;
    if (d == 2) {
        ops.push_back(std::sqrt(1.0 - 0.75 * p) * ComplexMatrix::identity(2));
        const double w = std::sqrt(0.25 * p);
        ops.push_back(w * pauli_x());
        ops.push_back(w * pauli_y());
        ops.push_back(w * pauli_z());
    } else {
        const double d2 = static_cast<double>(d) * d;
        ops.push_back(std::sqrt(1.0 - p * (d2 - 1.0) / d2) * ComplexMatrix::identity(d));
        const double w = std::sqrt(p / d2);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                if (a == 0 && b == 0) continue;
                ComplexMatrix m(d);  // X^a Z^b
                for (int j = 0; j < d; ++j)
                    m((j + a) % d, j) = w * std::polar(1.0, 2.0 * std::numbers::pi * b * j / d);
                ops.push_back(std::move(m));
            }
    }
    return make_kraus_channel("dc", p, d, std::move(ops));
}

inline KrausChannel amplitude_damping(double p) {
    detail::check_strength(p);
    ComplexMatrix k0{{1.0, 0.0}, {0.0, std::sqrt(1.0 - p)}};
    ComplexMatrix k1{{0.0, std::sqrt(p)}, {0.0, 0.0}};
    return make_kraus_channel("ad", p, 2, {std::move(k0), std::move(k1)});
}

namespace detail {

inline KrausChannel pauli_mix(std::string label, double p, const ComplexMatrix& sigma) {
    check_strength(p);
    std::vector<ComplexMatrix> ops;
    ops.push_back(std::sqrt(1.0 - 0.5 * p) * ComplexMatrix::identity(2));
    ops.push_back(std::sqrt(0.5 * p) * sigma);
    return make_kraus_channel(std::move(label), p, 2, std::move(ops));
}

} // namespace detail

inline KrausChannel bit_flip(double p) { return detail::pauli_mix("bf", p, pauli_x()); }
inline KrausChannel phase_flip(double p) { return detail::pauli_mix("pf", p, pauli_z()); }
inline KrausChannel bit_phase_flip(double p) { return detail::pauli_mix("bpf", p, pauli_y()); }

struct ChannelFamily {
    std::string label;
    std::function<KrausChannel(double)> make;
};

// Canonical families in label order: ad, bf, bpf, dc, pf.
inline const std::vector<ChannelFamily>& canonical_families() {
    static const std::vector<ChannelFamily> families = {
        {"ad", [](double p) { return amplitude_damping(p); }},
        {"bf", [](double p) { return bit_flip(p); }},
        {"bpf", [](double p) { return bit_phase_flip(p); }},
        {"dc", [](double p) { return depolarizing(p); }},
        {"pf", [](double p) { return phase_flip(p); }},
    };
    return families;
}

inline const ChannelFamily& family_by_label(std::string_view label) {
    for (const ChannelFamily& f : canonical_families())
        if (f.label == label) return f;
    throw std::invalid_argument("unknown channel family: " + std::string(label));
}

inline DensityMatrix apply(const KrausChannel& c, const DensityMatrix& rho) {
    if (c.dim != rho.dim()) throw std::invalid_argument("apply: dimension mismatch");
    ComplexMatrix out(c.dim);
    for (const ComplexMatrix& k : c.kraus) out += k * rho.matrix() * dagger(k);
    return DensityMatrix(std::move(out));
}

// Lambda (x) Lambda as an explicit product Kraus set; precompute once before
// optimizer loops, the 16 kron products dominate a naive per-call build.
inline KrausChannel tensor_square(const KrausChannel& c) {
    KrausChannel out;
    out.label = c.label + "*" + c.label;
    out.p = c.p;
    out.dim = c.dim * c.dim;
    out.kraus.reserve(c.kraus.size() * c.kraus.size());
    for (const ComplexMatrix& a : c.kraus)
        for (const ComplexMatrix& b : c.kraus) out.kraus.push_back(kron(a, b));
    return out;
}

inline DensityMatrix local_apply(const KrausChannel& c, const DensityMatrix& rho) {
    if (c.dim * c.dim != rho.dim())
        throw std::invalid_argument("local_apply: dimension mismatch");
    return apply(tensor_square(c), rho);
}

inline PureState max_entangled(int d) {
    std::vector<Complex> amp(static_cast<std::size_t>(d) * d);
    const double r = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) amp[static_cast<std::size_t>(i) * d + i] = r;
    return PureState(std::move(amp));
}

// CJKS state (I (x) Lambda)(|phi+><phi+|); the channel acts on the second factor.
inline DensityMatrix choi_state(const KrausChannel& c) {
    const int d = c.dim;
    const ComplexMatrix phi = density_from_pure(max_entangled(d)).matrix();
    const ComplexMatrix eye = ComplexMatrix::identity(d);
    ComplexMatrix out(d * d);
    for (const ComplexMatrix& k : c.kraus) {
        const ComplexMatrix lifted = kron(eye, k);
        out += lifted * phi * dagger(lifted);
    }
    return DensityMatrix(std::move(out));
}

// Inverts the isomorphism: d * Tr_1[(rho^T (x) I) choi] reproduces apply(c, rho).
// Kept as an independent oracle against the direct Kraus path.
inline DensityMatrix choi_apply(const DensityMatrix& choi, int d, const DensityMatrix& rho) {
    if (choi.dim() != d * d || rho.dim() != d)
        throw std::invalid_argument("choi_apply: dimension mismatch");
    const ComplexMatrix lifted = kron(rho.matrix().transpose(), ComplexMatrix::identity(d));
    ComplexMatrix out = partial_trace(lifted * choi.matrix(), d, d, Subsystem::second);
    out *= Complex(static_cast<double>(d));
    return DensityMatrix(std::move(out));
}

inline double channel_distance(const KrausChannel& a, const KrausChannel& b) {
    if (a.dim != b.dim) throw std::invalid_argument("channel_distance: dimension mismatch");
    return l1_norm(choi_state(a).matrix() - choi_state(b).matrix());
}

inline double covariance_defect(const KrausChannel& c, const ComplexMatrix& u,
                                const DensityMatrix& rho) {
    if (u.dim() != c.dim || rho.dim() != c.dim)
        throw std::invalid_argument("covariance_defect: dimension mismatch");
    const DensityMatrix lhs = apply(c, apply_unitary(u, rho));
    const DensityMatrix rhs = apply_unitary(u, apply(c, rho));
    return l1_norm(lhs.matrix() - rhs.matrix());
}

} // namespace qbias
