#include "devinatz/operators.hpp"

#include <cmath>

namespace devinatz {

namespace {

std::vector<MomentIndex> select(const IndexWindow& w, int max_m, int max_abs_n) {
    std::vector<MomentIndex> out;
    for (const auto& idx : w.indices())
        if (idx.m <= max_m && std::abs(idx.n) <= max_abs_n) out.push_back(idx);
    return out;
}

std::vector<MomentIndex> shifted(std::vector<MomentIndex> idx, int dm, int dn) {
    for (auto& i : idx) {
        i.m += dm;
        i.n += dn;
    }
    return idx;
}

double relative_residual(const Matrix& fitted, const Matrix& target) {
    return op_norm(fitted - target) / (1.0 + op_norm(target));
}

}  // namespace

double PartialOperator::off_domain(const Vector& v) const {
    double norm = v.norm();
    if (norm == 0.0) return 0.0;
    return (v - domain_projector * v).norm() / norm;
}

double AntilinearOperator::involution_defect() const {
    const auto r = matrix.rows();
    return op_norm(matrix * matrix.conjugate() - Matrix::Identity(r, r));
}

double AntilinearOperator::isometry_defect() const {
    const auto r = matrix.rows();
    return op_norm(matrix.adjoint() * matrix - Matrix::Identity(r, r));
}

PartialOperator build_shift_A(const GnsSpace& gns) {
    const auto& w = gns.window();
    if (w.max_power() < 1) throw DomainError("the power shift needs max_power >= 1");
    auto dom = select(w, w.max_power() - 1, w.max_freq());
    Matrix x = gns.columns(dom);
    Matrix y = gns.columns(shifted(dom, 1, 0));

    const double thr = gns.span_threshold();
    ColumnSpace cs = column_space(x, thr);

    PartialOperator a;
    a.ambient_dim = gns.rank();
    a.domain_basis = cs.basis;
    a.domain_projector = cs.basis * cs.basis.adjoint();
    a.action = y * pseudo_inverse(x, thr);
    a.well_defined_residual = relative_residual(a.action * x, y);
    if (a.well_defined_residual > kWellDefinedTol)
        throw IllDefined("power shift is not well defined on the embedded span", a.well_defined_residual);
    return a;
}

Matrix build_shift_B(const GnsSpace& gns, double* isometry_defect, double* well_defined_residual) {
    const auto& w = gns.window();
    if (w.max_freq() < 1) throw DomainError("the frequency shift needs max_freq >= 1");
    auto dom = select(w, w.max_power(), w.max_freq() - 1);
    Matrix x = gns.columns(dom);
    Matrix y = gns.columns(shifted(dom, 0, 1));

    const double thr = gns.span_threshold();
    const int sub_rank = column_space(x, thr).rank;
    if (sub_rank != gns.rank())
        throw NotSaturated("frequency sub-window spans rank " + std::to_string(sub_rank) + " of " +
                               std::to_string(gns.rank()) + "; increase the max_freq window",
                           sub_rank, gns.rank());

    Matrix b = y * pseudo_inverse(x, thr);
    const auto r = b.rows();
    double residual = relative_residual(b * x, y);
    double defect = op_norm(b.adjoint() * b - Matrix::Identity(r, r));
    if (well_defined_residual) *well_defined_residual = residual;
    if (isometry_defect) *isometry_defect = defect;
    if (residual > kWellDefinedTol) throw IllDefined("frequency shift is not well defined", residual);
    if (defect > 1e-6) throw IsometryViolation("least-squares frequency shift is not an isometry", defect);
    return nearest_unitary(b);
}

AntilinearOperator build_conjugation_J(const GnsSpace& gns, double* well_defined_residual) {
    const auto& idx = gns.window().indices();
    std::vector<MomentIndex> flipped;
    flipped.reserve(idx.size());
    for (const auto& i : idx) flipped.push_back({i.m, -i.n});

    Matrix x = gns.coords();
    Matrix y = gns.columns(flipped);
    AntilinearOperator j;
    j.matrix = y * pseudo_inverse(x.conjugate(), gns.span_threshold());
    double residual = relative_residual(j.matrix * x.conjugate(), y);
    if (well_defined_residual) *well_defined_residual = residual;
    if (residual > kWellDefinedTol) throw IllDefined("frequency reflection is not well defined", residual);
    return j;
}

OperatorSystem validate_system(PartialOperator A, Matrix B, AntilinearOperator J, const GnsSpace& gns) {
    const auto r = static_cast<Eigen::Index>(gns.rank());
    if (A.ambient_dim != r || B.rows() != r || J.matrix.rows() != r)
        throw DomainError("operators were not built from the same GNS space");
    const Matrix id = Matrix::Identity(r, r);
    const Matrix& pd = A.domain_projector;
    const Matrix& qd = A.domain_basis;
    const Matrix& a = A.action;
    const Matrix& m = J.matrix;

    ResidualRecord rec;
    rec.push_back({"a_well_defined", A.well_defined_residual, kWellDefinedTol});
    rec.push_back({"a_symmetry", op_norm(pd * (a - a.adjoint()) * pd), kIdentityTol});
    rec.push_back({"b_unitarity", op_norm(B.adjoint() * B - id), kIdentityTol});
    rec.push_back({"b_domain_invariance", op_norm((id - pd) * B * pd), kIdentityTol});
    rec.push_back({"ab_commutation", op_norm((a * B - B * a) * qd), kIdentityTol});
    rec.push_back({"j_involution", J.involution_defect(), kIdentityTol});
    rec.push_back({"j_isometry", J.isometry_defect(), kIdentityTol});
    rec.push_back({"j_domain_invariance", op_norm((id - pd) * m * pd.conjugate()), kIdentityTol});
    rec.push_back({"aj_commutation", op_norm(a * m * qd.conjugate() - m * (a * qd).conjugate()), kIdentityTol});
    rec.push_back({"jb_relation", op_norm(m * B.conjugate() - B.adjoint() * m), kIdentityTol});
    require_all(rec, "operator system validation failed");

    OperatorSystem sys{gns, std::move(A), std::move(B), std::move(J), gns.vector({0, 0}), std::move(rec)};
    return sys;
}

OperatorSystem build_operator_system(const GnsSpace& gns) {
    PartialOperator a = build_shift_A(gns);
    Matrix b;
    double b_defect = 0.0;
    double b_residual = 0.0;
    if (gns.window().max_freq() == 0)
        b = Matrix::Identity(gns.rank(), gns.rank());
    else
        b = build_shift_B(gns, &b_defect, &b_residual);
    double j_residual = 0.0;
    AntilinearOperator j = build_conjugation_J(gns, &j_residual);
    OperatorSystem sys = validate_system(std::move(a), std::move(b), std::move(j), gns);
    sys.residuals.push_back({"b_well_defined", b_residual, kWellDefinedTol});
    sys.residuals.push_back({"b_isometry_before_polar", b_defect, 1e-6});
    sys.residuals.push_back({"j_well_defined", j_residual, kWellDefinedTol});
    return sys;
}

CyclicityReport check_cyclicity(const OperatorSystem& sys, const MomentTable& table, double domain_tol) {
    CyclicityReport rep;
    const Vector& x00 = sys.x00;
    for (const auto& idx : sys.gns.window().indices()) {
        Vector v = x00;
        for (int k = 0; k < std::abs(idx.n); ++k) v = idx.n > 0 ? Vector(sys.B * v) : Vector(sys.B.adjoint() * v);
        bool in_domain = true;
        for (int k = 0; k < idx.m; ++k) {
            if (sys.A.off_domain(v) > domain_tol && v.norm() > domain_tol) {
                in_domain = false;
                break;
            }
            v = sys.A.action * v;
        }
        if (!in_domain) {
            rep.skipped.push_back(idx);
            continue;
        }
        rep.checked.push_back(idx);
        rep.max_vector_error = std::max(rep.max_vector_error, (v - sys.gns.vector(idx)).norm());
        Complex s = table.at(idx);
        Complex inner = x00.dot(v);  // <v, x00> = x00^* v
        rep.max_moment_error = std::max(rep.max_moment_error, std::abs(inner - s) / (1.0 + std::abs(s)));
    }
    return rep;
}

}  // namespace devinatz
