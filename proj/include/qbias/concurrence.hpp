#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qbias/eig.hpp"
#include "qbias/matrix.hpp"
#include "qbias/states.hpp"

namespace qbias {

// rho~ = (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y), conjugation taken in
// the computational basis.
inline ComplexMatrix spin_flip(const DensityMatrix& rho) {
    if (rho.dim() != 4) throw std::invalid_argument("spin_flip: need a two-qubit state");
    static const ComplexMatrix yy = kron(pauli_y(), pauli_y());
    return yy * rho.matrix().conjugate() * yy;
}

// Concurrence C = max{0, l1 - l2 - l3 - l4} with l_i the decreasing square
// roots of the eigenvalues of rho * rho~. The product is non-Hermitian but has
// real nonnegative spectrum up to noise; tiny negative or imaginary parts are
// clamped. Result clamped to [0,1] so downstream maximizers never see 1+1e-12.
inline double concurrence(const DensityMatrix& rho) {
    const ComplexMatrix product = rho.matrix() * spin_flip(rho);
    std::vector<Complex> vals = eigvals_general(product);
    double l[4];
    for (int i = 0; i < 4; ++i) l[i] = std::sqrt(std::max(vals[i].real(), 0.0));
    std::sort(l, l + 4, std::greater<>());
    const double c = l[0] - l[1] - l[2] - l[3];
    return std::clamp(c, 0.0, 1.0);
}

// Textbook route via omega = sqrt(sqrt(rho) rho~ sqrt(rho)); slower (three
// Hermitian eigensolves) and kept as a cross-check oracle.
inline double concurrence_via_omega(const DensityMatrix& rho) {
    const ComplexMatrix root = psd_sqrt(rho.matrix());
    const ComplexMatrix omega = psd_sqrt(root * spin_flip(rho) * root);
    const HermitianEig eig = eig_hermitian(omega);
    const double c = eig.values[3] - eig.values[2] - eig.values[1] - eig.values[0];
    return std::clamp(c, 0.0, 1.0);
}

} // namespace qbias
