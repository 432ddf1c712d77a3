#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>

namespace cfota {

template <typename Real>
using VecR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using VecC = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using MatR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using MatC = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using cvec = VecC<double>;
using cmat = MatC<double>;
using rvec = VecR<double>;
using rmat = MatR<double>;
using cplx = std::complex<double>;

/// Solves A x = b for Hermitian positive definite A. Falls back to a
/// pivoted LDL^T when the Cholesky factorization breaks down numerically.
template <typename Derived, typename Rhs>
auto hermitian_solve(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Rhs>& b) {
    using Plain = typename Derived::PlainObject;
    Eigen::LLT<Plain> llt(a);
    if (llt.info() == Eigen::Success) {
        return typename Rhs::PlainObject(llt.solve(b));
    }
    Eigen::LDLT<Plain> ldlt(a);
    return typename Rhs::PlainObject(ldlt.solve(b));
}

template <typename Derived>
typename Derived::PlainObject hermitian_part(const Eigen::MatrixBase<Derived>& a) {
    return (a + a.adjoint()) / typename Derived::RealScalar(2);
}

/// Principal square root of a Hermitian PSD matrix; negative eigenvalues
/// (floating-point PSD violations) are clamped to zero.
template <typename Derived>
typename Derived::PlainObject psd_sqrt(const Eigen::MatrixBase<Derived>& a) {
    using Plain = typename Derived::PlainObject;
    using Real = typename Derived::RealScalar;
    Eigen::SelfAdjointEigenSolver<Plain> eig(hermitian_part(a));
    auto root = eig.eigenvalues().unaryExpr([](Real x) { return std::sqrt(std::max(x, Real(0))); });
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().adjoint();
}

template <typename Derived>
typename Derived::RealScalar min_eigenvalue(const Eigen::MatrixBase<Derived>& a) {
    using Plain = typename Derived::PlainObject;
    Eigen::SelfAdjointEigenSolver<Plain> eig(hermitian_part(a), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace cfota
