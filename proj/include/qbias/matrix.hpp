#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qbias {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major. Everything in this library lives in
// dimension 2 or 4, so no attempt is made at sparse or fixed-size cleverness.
class ComplexMatrix {
public:
    ComplexMatrix() : dim_(0) {}

    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {
        if (dim <= 0) throw std::invalid_argument("ComplexMatrix: dim must be positive");
    }

    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
        : dim_(static_cast<int>(rows.size())) {
        if (dim_ == 0) throw std::invalid_argument("ComplexMatrix: empty initializer");
        a_.reserve(static_cast<std::size_t>(dim_) * dim_);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != dim_)
                throw std::invalid_argument("ComplexMatrix: initializer is not square");
            a_.insert(a_.end(), r.begin(), r.end());
        }
    }

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return dim_; }

    Complex& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * dim_ + c]; }
    const Complex& operator()(int r, int c) const {
        return a_[static_cast<std::size_t>(r) * dim_ + c];
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_dim(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_dim(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }

    ComplexMatrix& operator*=(Complex s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        a.check_same_dim(b);
        const int n = a.dim_;
        ComplexMatrix out(n);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{}) continue;
                for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
            }
        }
        return out;
    }

    Complex trace() const {
        Complex t{};
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix out(dim_);
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = std::conj(a_[i]);
        return out;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix out(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

private:
    void check_same_dim(const ComplexMatrix& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    }

    int dim_;
    std::vector<Complex> a_;
};

// Conjugate transpose.
inline ComplexMatrix dagger(const ComplexMatrix& m) {
    const int n = m.dim();
    ComplexMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(j, i) = std::conj(m(i, j));
    return out;
}

// Kronecker product; block (i,j) of the result is a(i,j) * b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int na = a.dim(), nb = b.dim();
    ComplexMatrix out(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return out;
}

// Induced l1 norm: max over columns of the column sum of absolute values.
// Basis dependent by design; all callers use the fixed computational basis.
inline double l1_norm(const ComplexMatrix& m) {
    double best = 0.0;
    for (int j = 0; j < m.dim(); ++j) {
        double col = 0.0;
        for (int i = 0; i < m.dim(); ++i) col += std::abs(m(i, j));
        if (col > best) best = col;
    }
    return best;
}

enum class Subsystem { first, second };

// Partial trace of an operator on H_A (x) H_B with dims (da, db).
// keep selects the surviving factor.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, int da, int db, Subsystem keep) {
    if (da <= 0 || db <= 0 || da * db != m.dim())
        throw std::invalid_argument("partial_trace: dimensions do not factor the matrix");
    if (keep == Subsystem::first) {
        ComplexMatrix out(da);
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < da; ++j)
                for (int k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
        return out;
    }
    ComplexMatrix out(db);
    for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l)
            for (int i = 0; i < da; ++i) out(k, l) += m(i * db + k, i * db + l);
    return out;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double best = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) best = std::max(best, std::abs(a(i, j) - b(i, j)));
    return best;
}

inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    return a.dim() == b.dim() && max_abs_diff(a, b) <= tol;
}

inline double hermiticity_defect(const ComplexMatrix& m) {
    double best = 0.0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = i; j < m.dim(); ++j)
            best = std::max(best, std::abs(m(i, j) - std::conj(m(j, i))));
    return best;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10) {
    return hermiticity_defect(m) <= tol;
}

} // namespace qbias
