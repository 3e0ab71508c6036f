#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "qbias/eig.hpp"
#include "qbias/matrix.hpp"
#include "qbias/rng.hpp"

namespace qbias {

inline const ComplexMatrix& pauli_x() {
    static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
    return m;
}

inline const ComplexMatrix& pauli_y() {
    static const ComplexMatrix m{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
    return m;
}

inline const ComplexMatrix& pauli_z() {
    static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
    return m;
}

// Normalized pure state; amplitudes in the computational basis.
class PureState {
public:
    explicit PureState(std::vector<Complex> amplitudes) : amp_(std::move(amplitudes)) {
        if (amp_.size() < 2) throw std::invalid_argument("PureState: need dimension >= 2");
        double n2 = 0.0;
        for (const Complex& a : amp_) n2 += std::norm(a);
        if (std::abs(std::sqrt(n2) - 1.0) > 1e-10)
            throw std::invalid_argument("PureState: amplitudes are not normalized");
    }

    int dim() const { return static_cast<int>(amp_.size()); }
    const Complex& operator[](int i) const { return amp_[static_cast<std::size_t>(i)]; }
    const std::vector<Complex>& amplitudes() const { return amp_; }

private:
    std::vector<Complex> amp_;
};

// Density matrix. Construction checks the cheap invariants (Hermiticity and
// unit trace, both to 1e-10); positivity is an eigensolve, so it is a separate
// check used at boundaries and in tests rather than on every hot-path call.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
        if (hermiticity_defect(m_) > 1e-10)
            throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-10");
        if (std::abs(m_.trace() - Complex{1.0}) > 1e-10)
            throw std::invalid_argument("DensityMatrix: trace differs from 1 beyond 1e-10");
    }

    int dim() const { return m_.dim(); }
    const ComplexMatrix& matrix() const { return m_; }
    const Complex& operator()(int r, int c) const { return m_(r, c); }

    double min_eigenvalue() const { return qbias::min_eigenvalue(m_); }

    bool is_valid_state(double psd_tol = 1e-8) const { return min_eigenvalue() >= -psd_tol; }

private:
    ComplexMatrix m_;
};

inline DensityMatrix density_from_pure(const PureState& psi) {
    const int n = psi.dim();
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = psi[i] * std::conj(psi[j]);
    return DensityMatrix(std::move(m));
}

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline DensityMatrix bloch_to_density(const BlochVector& v) {
    if (v.norm() > 1.0 + 1e-10)
        throw std::invalid_argument("bloch_to_density: vector leaves the Bloch ball");
    ComplexMatrix m(2);
    m(0, 0) = 0.5 * (1.0 + v.z);
    m(1, 1) = 0.5 * (1.0 - v.z);
    m(0, 1) = 0.5 * Complex(v.x, -v.y);
    m(1, 0) = 0.5 * Complex(v.x, v.y);
    return DensityMatrix(std::move(m));
}

inline BlochVector density_to_bloch(const DensityMatrix& rho) {
    if (rho.dim() != 2) throw std::invalid_argument("density_to_bloch: need a qubit state");
    BlochVector v;
    v.x = (rho.matrix() * pauli_x()).trace().real();
    v.y = (rho.matrix() * pauli_y()).trace().real();
    v.z = (rho.matrix() * pauli_z()).trace().real();
    return v;
}

// U(theta, phi, lambda); theta in [0, pi], phi and lambda in [0, 2*pi).
// U(pi, 0, pi) is sigma_x to machine precision, U(0, 0, lambda) a phase gate.
struct UnitaryAngles {
    double theta = 0.0;
    double phi = 0.0;
    double lambda = 0.0;
};

inline ComplexMatrix unitary_from_angles(const UnitaryAngles& a) {
    const double c = std::cos(a.theta / 2.0);
    const double s = std::sin(a.theta / 2.0);
    ComplexMatrix u(2);
    u(0, 0) = c;
    u(0, 1) = -std::polar(s, a.lambda);
    u(1, 0) = std::polar(s, a.phi);
    u(1, 1) = std::polar(c, a.phi + a.lambda);
    return u;
}

// Hyperspherical parametrization of a pure state modulo global phase.
// dim 2 takes (a, phase1); dim 4 takes (a1, a2, a3, phase1, phase2, phase3).
// Magnitude angles in [0, pi/2], phases in [0, 2*pi); the map stays valid
// (unit norm) for out-of-range inputs so simplex steps never leave its domain.
inline PureState pure_from_angles(std::span<const double> params, int dim) {
    std::vector<Complex> amp;
    if (dim == 2) {
        if (params.size() != 2)
            throw std::invalid_argument("pure_from_angles: dim 2 needs 2 parameters");
        amp = {Complex(std::cos(params[0])), std::polar(std::sin(params[0]), params[1])};
    } else if (dim == 4) {
        if (params.size() != 6)
            throw std::invalid_argument("pure_from_angles: dim 4 needs 6 parameters");
        const double s1 = std::sin(params[0]), c1 = std::cos(params[0]);
        const double s2 = std::sin(params[1]), c2 = std::cos(params[1]);
        const double s3 = std::sin(params[2]), c3 = std::cos(params[2]);
        amp = {Complex(c1), std::polar(s1 * c2, params[3]), std::polar(s1 * s2 * c3, params[4]),
               std::polar(s1 * s2 * s3, params[5])};
    } else {
        throw std::invalid_argument("pure_from_angles: only dims 2 and 4 are supported");
    }
    // Fix the global phase: rotate so the first non-negligible amplitude is
    // real and nonnegative.
    for (const Complex& a : amp) {
        if (std::abs(a) > 1e-12) {
            const Complex rot = std::polar(1.0, -std::arg(a));
            for (Complex& b : amp) b *= rot;
            break;
        }
    }
    return PureState(std::move(amp));
}

inline constexpr int pure_param_count(int dim) { return dim == 2 ? 2 : 6; }

inline PureState bell_phi_plus() {
    const double r = 1.0 / std::numbers::sqrt2;
    return PureState({r, 0.0, 0.0, r});
}

inline PureState bell_phi_minus() {
    const double r = 1.0 / std::numbers::sqrt2;
    return PureState({r, 0.0, 0.0, -r});
}

inline PureState bell_psi_plus() {
    const double r = 1.0 / std::numbers::sqrt2;
    return PureState({0.0, r, r, 0.0});
}

inline PureState bell_psi_minus() {
    const double r = 1.0 / std::numbers::sqrt2;
    return PureState({0.0, r, -r, 0.0});
}

// Haar random pure state: normalized vector of i.i.d. complex Gaussians.
inline PureState random_pure(int dim, RandomStream& rs) {
    std::vector<Complex> amp(static_cast<std::size_t>(dim));
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (Complex& a : amp) {
            a = rs.normal_complex();
            n2 += std::norm(a);
        }
    } while (n2 < 1e-24);
    const double inv = 1.0 / std::sqrt(n2);
    for (Complex& a : amp) a *= inv;
    return PureState(std::move(amp));
}

// Haar random 2x2 unitary: Gram-Schmidt of a Ginibre matrix with the R factor
// kept positive on the diagonal.
inline ComplexMatrix random_unitary(RandomStream& rs) {
    while (true) {
        Complex g00 = rs.normal_complex(), g10 = rs.normal_complex();
        Complex g01 = rs.normal_complex(), g11 = rs.normal_complex();
        const double n0 = std::sqrt(std::norm(g00) + std::norm(g10));
        if (n0 < 1e-12) continue;
        const Complex q00 = g00 / n0, q10 = g10 / n0;
        const Complex overlap = std::conj(q00) * g01 + std::conj(q10) * g11;
        const Complex r01 = g01 - overlap * q00;
        const Complex r11 = g11 - overlap * q10;
        const double n1 = std::sqrt(std::norm(r01) + std::norm(r11));
        if (n1 < 1e-12) continue;
        ComplexMatrix u(2);
        u(0, 0) = q00;
        u(1, 0) = q10;
        u(0, 1) = r01 / n1;
        u(1, 1) = r11 / n1;
        return u;
    }
}

inline DensityMatrix apply_unitary(const ComplexMatrix& u, const DensityMatrix& rho) {
    return DensityMatrix(u * rho.matrix() * dagger(u));
}

} // namespace qbias
