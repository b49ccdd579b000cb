#pragma once

// Power shift A, frequency shift B and frequency reflection J, realized as
// matrices on GNS coordinates.
//
//   A x_{m,n} = x_{m+1,n}   (partial: defined on D = span{x_{m,n} : m <= M-1})
//   B x_{m,n} = x_{m,n+1}   (unitary)
//   J x_{m,n} = x_{m,-n}    (antilinear: J(sum a_t x_t) = sum conj(a_t) J x_t)

#include <vector>

#include "devinatz/errors.hpp"
#include "devinatz/gns.hpp"
#include "devinatz/linalg.hpp"

namespace devinatz {

/// Linear operator known only on a subspace D of C^r.
struct PartialOperator {
    int ambient_dim = 0;
    Matrix domain_basis;      // r x dim D, orthonormal columns
    Matrix action;            // r x r; zero on the orthogonal complement of D
    Matrix domain_projector;  // r x r
    double well_defined_residual = 0.0;

    int domain_dim() const noexcept { return static_cast<int>(domain_basis.cols()); }
    /// ||(I - P_D) v|| / ||v||; 0 for v = 0.
    double off_domain(const Vector& v) const;
};

/// v -> matrix * conj(v).
struct AntilinearOperator {
    Matrix matrix;

    Vector apply(const Vector& v) const { return matrix * v.conjugate(); }
    /// Matrix of the linear map J o T for linear T.
    Matrix after(const Matrix& linear) const { return matrix * linear.conjugate(); }
    double involution_defect() const;  // ||M conj(M) - I||
    double isometry_defect() const;    // ||M^* M - I||
};

struct OperatorSystem {
    GnsSpace gns;
    PartialOperator A;
    Matrix B;
    AntilinearOperator J;
    Vector x00;
    ResidualRecord residuals;

    int rank() const noexcept { return gns.rank(); }
};

inline constexpr double kWellDefinedTol = 1e-8;
inline constexpr double kIdentityTol = 1e-9;

/// Throws IllDefined if ||action X - Y|| / (1 + ||Y||) > 1e-8.
PartialOperator build_shift_A(const GnsSpace& gns);

/// Throws DomainError for N = 0, NotSaturated when the |n| <= N-1 vectors do
/// not span C^r, IsometryViolation when the least-squares B is further than
/// 1e-6 from an isometry. The result is snapped to the nearest unitary.
Matrix build_shift_B(const GnsSpace& gns, double* isometry_defect = nullptr,
                     double* well_defined_residual = nullptr);

AntilinearOperator build_conjugation_J(const GnsSpace& gns, double* well_defined_residual = nullptr);

/// Computes every residual of the operator identities and throws
/// ValidationFailed when one exceeds its threshold.
OperatorSystem validate_system(PartialOperator A, Matrix B, AntilinearOperator J, const GnsSpace& gns);

/// build_shift_A/B/J + validate_system. When max_freq = 0 the data say
/// nothing about B and it is taken to be the identity.
OperatorSystem build_operator_system(const GnsSpace& gns);

struct CyclicityReport {
    double max_vector_error = 0.0;  // max ||A^m B^n x00 - x_{m,n}||
    double max_moment_error = 0.0;  // max |<A^m B^n x00, x00> - s_{m,n}| / (1 + |s_{m,n}|)
    std::vector<MomentIndex> checked;
    std::vector<MomentIndex> skipped;  // an intermediate image left D
};

/// Walks B^n then A^m from x00 with a domain check before every A step.
CyclicityReport check_cyclicity(const OperatorSystem& sys, const MomentTable& table,
                                double domain_tol = 1e-8);

}  // namespace devinatz
