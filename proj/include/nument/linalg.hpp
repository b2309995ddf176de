#pragma once

// Small dense helpers shared by every module. All spectral work goes through
// hermitize() first so 1e-16 asymmetries never reach the eigensolver.

#include "nument/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace nument::linalg {

inline CMatrix hermitize(const CMatrix &m) { return 0.5 * (m + m.adjoint()); }

inline double max_abs(const CMatrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double hermiticity_defect(const CMatrix &m) { return max_abs(m - m.adjoint()); }

inline RVector eigvalsh(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(m), Eigen::EigenvaluesOnly);
    if(solver.info() != Eigen::Success) throw Error(ErrorCode::numerical_failure, "hermitian eigensolver did not converge");
    return solver.eigenvalues();
}

struct Eigensystem {
    RVector values;
    CMatrix vectors;
};

inline Eigensystem eigh(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(m));
    if(solver.info() != Eigen::Success) throw Error(ErrorCode::numerical_failure, "hermitian eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// V f(λ) V† for a hermitian matrix.
template<class F>
CMatrix hermitian_function(const CMatrix &m, F &&f) {
    auto es = eigh(m);
    RVector fv = es.values.unaryExpr(std::forward<F>(f));
    return es.vectors * fv.asDiagonal() * es.vectors.adjoint();
}

inline CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for(Eigen::Index i = 0; i < a.rows(); ++i)
        for(Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline CMatrix commutator(const CMatrix &a, const CMatrix &b) { return a * b - b * a; }

/// Commutator with a diagonal operator, [M, diag(d)]_ij = M_ij (d_j - d_i).
inline CMatrix commutator_with_diagonal(const CMatrix &m, const RVector &d) {
    CMatrix out(m.rows(), m.cols());
    for(Eigen::Index j = 0; j < m.cols(); ++j)
        for(Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = m(i, j) * (d(j) - d(i));
    return out;
}

/// Sum of singular values (trace norm).
inline double trace_norm(const CMatrix &m) {
    Eigen::BDCSVD<CMatrix> svd(m);
    return svd.singularValues().sum();
}

/// Complex log-determinant via partial-pivot LU; the imaginary part is the
/// phase accumulated along the pivots.
inline cplx log_det(const CMatrix &m) {
    Eigen::PartialPivLU<CMatrix> lu(m);
    const CMatrix &packed = lu.matrixLU();
    cplx acc{0.0, 0.0};
    for(Eigen::Index i = 0; i < packed.rows(); ++i) acc += std::log(packed(i, i));
    if(lu.permutationP().determinant() < 0) acc += cplx(0.0, pi);
    return acc;
}

} // namespace nument::linalg
