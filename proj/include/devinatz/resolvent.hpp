#pragma once

// Quasiself-adjoint extensions A_C of A for constant contractions C: H2 -> H4
// and the generalized resolvents they define:
//
//   domain  g = f + C psi - psi,     f in D(A), psi in H2
//   action  A_C g = A f + i C psi + i psi
//
//   R_lambda = (A_C - lambda)^{-1}     for Im lambda > 0,
//   R_lambda = (A_{C*} - lambda)^{-1}  for Im lambda < 0,
//
// where A_{C*} uses the adjoint C*: H4 -> H2 with the mirrored rule
// g = f + C* phi - phi, A_{C*} g = A f - i C* phi - i phi.

#include "devinatz/extension.hpp"
#include "devinatz/moments.hpp"

namespace devinatz {

/// C as a d x d matrix from dd.h2 coordinates to dd.h4 coordinates.
struct ContractionParameter {
    Matrix C;
    double norm = 0.0;
    double commutation_residual = 0.0;  // ||B C~ - C~ B||, C~ = Q4 C Q2^*

    bool commutes(double tol = kIdentityTol) const noexcept { return commutation_residual <= tol; }
};

/// Throws DomainError on a size mismatch or ||C|| > 1 + 1e-12. Commutation
/// with B is measured, not enforced.
ContractionParameter make_contraction(const OperatorSystem& sys, const DeficiencyData& dd, Matrix C);

/// C = U24 U2 expressed in H4 coordinates (the canonical, unitary case).
ContractionParameter canonical_contraction(const OperatorSystem& sys, const DeficiencyData& dd, const Matrix& U24,
                                           const Matrix& U2);

struct QuasiExtension {
    Matrix A_C;
    int domain_dim = 0;
    ResidualRecord residuals;
};

/// Throws DeficientDomain when D(A) + (C - I)H2 is not all of C^r.
QuasiExtension build_quasi_extension(const OperatorSystem& sys, const DeficiencyData& dd,
                                     const ContractionParameter& C);

/// The extension A_{C*} used below the real axis; equals A_C^* in finite dimensions.
QuasiExtension build_adjoint_quasi_extension(const OperatorSystem& sys, const DeficiencyData& dd,
                                             const ContractionParameter& C);

/// Throws DomainError for real lambda and SingularPencil when the shifted
/// operator has condition number above 1e12.
Matrix generalized_resolvent(const OperatorSystem& sys, const DeficiencyData& dd, const ContractionParameter& C,
                             Complex lambda);

struct ResolventProperties {
    double norm = 0.0;             // ||R_lambda||
    double norm_bound_excess = 0.0;  // ||R_lambda|| - 1/|Im lambda|
    double adjoint_symmetry = 0.0;   // ||R_lambda^* - R_{conj lambda}||
    double b_commutation = 0.0;      // ||B R_lambda - R_lambda B||
};

ResolventProperties resolvent_properties(const OperatorSystem& sys, const DeficiencyData& dd,
                                         const ContractionParameter& C, Complex lambda);

struct MomentSplit {
    int m1 = 0, m2 = 0, n1 = 0, n2 = 0;
};

/// |<R_z x_{m1,n2}, x_{m2,-n1}> - sum_j w_j x_j^{m1+m2} e^{i(n1+n2)phi_j} / (x_j - z)|.
/// Throws IndexOutOfWindow when either embedding index leaves the window.
double resolvent_moment_check(const OperatorSystem& sys, const DeficiencyData& dd, const ContractionParameter& C,
                              Complex z, const MomentSplit& split, const AtomicMeasure& measure);

}  // namespace devinatz
