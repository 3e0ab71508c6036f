#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbias/matrix.hpp"

namespace qbias {

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

// Thrown when the backend eigensolver fails to converge; carries the operand
// so the failure can be reproduced offline.
class EigenSolveError : public std::runtime_error {
public:
    EigenSolveError(std::string what, ComplexMatrix m)
        : std::runtime_error(std::move(what)), matrix(std::move(m)) {}

    ComplexMatrix matrix;
};

namespace detail {

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    const int n = m.dim();
    Eigen::MatrixXcd e(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) e(i, j) = m(i, j);
    return e;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd& e) {
    if (e.rows() != e.cols()) throw std::invalid_argument("from_eigen: not square");
    ComplexMatrix m(static_cast<int>(e.rows()));
    for (int i = 0; i < e.rows(); ++i)
        for (int j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
    return m;
}

inline std::string format_matrix(const ComplexMatrix& m) {
    std::ostringstream os;
    os.precision(17);
    for (int i = 0; i < m.dim(); ++i) {
        for (int j = 0; j < m.dim(); ++j) {
            const Complex v = m(i, j);
            os << '(' << v.real() << ',' << v.imag() << ") ";
        }
        os << '\n';
    }
    return os.str();
}

} // namespace detail

struct HermitianEig {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // eigenvectors as columns, same order
};

inline HermitianEig eig_hermitian(const ComplexMatrix& m, double tol = kHermitianTol) {
    if (!is_hermitian(m, tol))
        throw std::invalid_argument("eig_hermitian: input is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(detail::to_eigen(m));
    if (solver.info() != Eigen::Success)
        throw EigenSolveError("eig_hermitian: solver did not converge on\n" +
                                  detail::format_matrix(m),
                              m);
    HermitianEig out;
    out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m.dim());
    out.vectors = detail::from_eigen(solver.eigenvectors());
    return out;
}

inline double min_eigenvalue(const ComplexMatrix& m, double tol = kHermitianTol) {
    if (!is_hermitian(m, tol))
        throw std::invalid_argument("min_eigenvalue: input is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(detail::to_eigen(m),
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw EigenSolveError("min_eigenvalue: solver did not converge on\n" +
                                  detail::format_matrix(m),
                              m);
    return solver.eigenvalues()(0);
}

// Principal square root of a positive semidefinite matrix. Eigenvalues in
// [-1e-10, 0) are clamped to zero; anything lower is rejected.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    HermitianEig eig = eig_hermitian(m);
    ComplexMatrix out(m.dim());
    for (int k = 0; k < m.dim(); ++k) {
        double lambda = eig.values[k];
        if (lambda < -kPsdTol)
            throw std::invalid_argument("psd_sqrt: matrix is not positive semidefinite");
        if (lambda < 0.0) lambda = 0.0;
        const double s = std::sqrt(lambda);
        for (int i = 0; i < m.dim(); ++i)
            for (int j = 0; j < m.dim(); ++j)
                out(i, j) += s * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }
    return out;
}

// Eigenvalues of a general (non-Hermitian) matrix, unordered.
inline std::vector<Complex> eigvals_general(const ComplexMatrix& m) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(detail::to_eigen(m), false);
    if (solver.info() != Eigen::Success)
        throw EigenSolveError("eigvals_general: solver did not converge on\n" +
                                  detail::format_matrix(m),
                              m);
    std::vector<Complex> out(m.dim());
    for (int i = 0; i < m.dim(); ++i) out[i] = solver.eigenvalues()(i);
    return out;
}

} // namespace qbias
