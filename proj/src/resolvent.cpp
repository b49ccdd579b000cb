#include "devinatz/resolvent.hpp"

#include <cmath>
#include <limits>

namespace devinatz {

namespace {

QuasiExtension extension_from_rules(const OperatorSystem& sys, const Matrix& extra_domain, const Matrix& extra_image,
                                    const char* context) {
    const auto r = static_cast<Eigen::Index>(sys.rank());
    const Matrix& qd = sys.A.domain_basis;
    Matrix domain(r, qd.cols() + extra_domain.cols());
    domain << qd, extra_domain;
    Matrix image(r, domain.cols());
    image << sys.A.action * qd, extra_image;

    Eigen::JacobiSVD<Matrix> svd(domain);
    const RealVector& s = svd.singularValues();
    const double thr = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
    int rank = static_cast<int>((s.array() > thr).count());
    if (domain.cols() != r || rank < r)
        throw DeficientDomain(std::string(context) + ": domain has dimension " + std::to_string(rank) + " of " +
                                  std::to_string(r) + " (the parameter fixes part of H2)",
                              rank, static_cast<int>(r));

    QuasiExtension q;
    q.domain_dim = rank;
    q.A_C = image * domain.partialPivLu().inverse();
    q.residuals.push_back({"agrees_with_a", op_norm((q.A_C - sys.A.action) * qd), kIdentityTol});
    q.residuals.push_back({"defect_rule", op_norm(q.A_C * extra_domain - extra_image), kIdentityTol});
    return q;
}

}  // namespace

ContractionParameter make_contraction(const OperatorSystem& sys, const DeficiencyData& dd, Matrix C) {
    const auto d = dd.h2.cols();
    if (C.rows() != dd.h4.cols() || C.cols() != d)
        throw DomainError("contraction must be a " + std::to_string(dd.h4.cols()) + "x" + std::to_string(d) +
                          " matrix");
    ContractionParameter p;
    p.norm = op_norm(C);
    if (p.norm > 1.0 + 1e-12) throw DomainError("contraction norm " + std::to_string(p.norm) + " exceeds 1");
    Matrix ambient = dd.h4 * C * dd.h2.adjoint();
    p.commutation_residual = op_norm(sys.B * ambient - ambient * sys.B);
    p.C = std::move(C);
    return p;
}

ContractionParameter canonical_contraction(const OperatorSystem& sys, const DeficiencyData& dd, const Matrix& U24,
                                           const Matrix& U2) {
    Matrix c = dd.h4.adjoint() * U24 * U2;
    // Unitary up to rounding; pull the norm back onto the unit sphere.
    if (c.size()) c = nearest_unitary(c);
    return make_contraction(sys, dd, std::move(c));
}

QuasiExtension build_quasi_extension(const OperatorSystem& sys, const DeficiencyData& dd,
                                     const ContractionParameter& C) {
    Matrix c_psi = dd.h4 * C.C;  // columns C psi for the H2 basis psi
    const Matrix& psi = dd.h2;
    return extension_from_rules(sys, c_psi - psi, kI * (c_psi + psi), "quasiself-adjoint extension");
}

QuasiExtension build_adjoint_quasi_extension(const OperatorSystem& sys, const DeficiencyData& dd,
                                             const ContractionParameter& C) {
    Matrix c_phi = dd.h2 * C.C.adjoint();  // columns C* phi for the H4 basis phi
    const Matrix& phi = dd.h4;
    return extension_from_rules(sys, c_phi - phi, -kI * (c_phi + phi), "adjoint quasiself-adjoint extension");
}

Matrix generalized_resolvent(const OperatorSystem& sys, const DeficiencyData& dd, const ContractionParameter& C,
                             Complex lambda) {
    if (lambda.imag() == 0.0) throw DomainError("z must be non-real");
    QuasiExtension q = lambda.imag() > 0.0 ? build_quasi_extension(sys, dd, C)
                                           : build_adjoint_quasi_extension(sys, dd, C);
    const auto r = q.A_C.rows();
    Matrix shifted = q.A_C - lambda * Matrix::Identity(r, r);
    Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    if (r == 0) return shifted;
    double cond = s(r - 1) > 0.0 ? s(0) / s(r - 1) : std::numeric_limits<double>::infinity();
    if (cond > 1e12) throw SingularPencil("A_C - z is numerically singular", cond);
    return svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
}

ResolventProperties resolvent_properties(const OperatorSystem& sys, const DeficiencyData& dd,
                                         const ContractionParameter& C, Complex lambda) {
    Matrix r = generalized_resolvent(sys, dd, C, lambda);
    Matrix r_conj = generalized_resolvent(sys, dd, C, std::conj(lambda));
    ResolventProperties p;
    p.norm = op_norm(r);
    p.norm_bound_excess = p.norm - 1.0 / std::abs(lambda.imag());
    p.adjoint_symmetry = op_norm(r.adjoint() - r_conj);
    p.b_commutation = op_norm(sys.B * r - r * sys.B);
    return p;
}

double resolvent_moment_check(const OperatorSystem& sys, const DeficiencyData& dd, const ContractionParameter& C,
                              Complex z, const MomentSplit& split, const AtomicMeasure& measure) {
    Vector left = sys.gns.vector({split.m1, split.n2});
    Vector right = sys.gns.vector({split.m2, -split.n1});
    Matrix r = generalized_resolvent(sys, dd, C, z);
    Complex lhs = right.dot(r * left);  // <R_z x_{m1,n2}, x_{m2,-n1}>
    Complex rhs{};
    const int m = split.m1 + split.m2;
    const int n = split.n1 + split.n2;
    for (const auto& a : measure.atoms()) rhs += a.weight * std::pow(a.x, m) * std::polar(1.0, n * a.phi) / (a.x - z);
    return std::abs(lhs - rhs);
}

}  // namespace devinatz
