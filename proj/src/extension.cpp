#include "devinatz/extension.hpp"

#include <cmath>
#include <limits>

namespace devinatz {

namespace {

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

// Deterministic orthonormal eigenbasis of a normal matrix: eigenvalues sorted
// by argument, each cluster re-orthonormalized by canonical_basis.
struct ClusteredEigenbasis {
    Matrix basis;
    std::vector<std::vector<int>> clusters;  // column positions in `basis`
    std::vector<Complex> values;
};

ClusteredEigenbasis clustered_eigenbasis(const Matrix& b, double tol) {
    NormalEigen ne = normal_eigen(b);
    std::vector<double> angles;
    for (Eigen::Index i = 0; i < ne.values.size(); ++i) angles.push_back(std::arg(ne.values(i)));
    auto groups = cluster_angles(angles, tol);

    ClusteredEigenbasis out;
    out.basis.resize(b.rows(), b.rows());
    Eigen::Index col = 0;
    for (const auto& g : groups) {
        Matrix q(b.rows(), static_cast<Eigen::Index>(g.size()));
        for (std::size_t k = 0; k < g.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = ne.vectors.col(g[k]);
        Matrix canon = canonical_basis(q);
        std::vector<int> positions;
        for (Eigen::Index k = 0; k < canon.cols(); ++k) {
            out.basis.col(col) = canon.col(k);
            out.values.push_back(ne.values(g[static_cast<std::size_t>(k)]));
            positions.push_back(static_cast<int>(col));
            ++col;
        }
        out.clusters.push_back(std::move(positions));
    }
    return out;
}

}  // namespace

Matrix DeficiencyData::projector(int which) const {
    const Matrix* q = nullptr;
    switch (which) {
        case 1: q = &h1; break;
        case 2: q = &h2; break;
        case 3: q = &h3; break;
        case 4: q = &h4; break;
        default: throw DomainError("deficiency subspace index must be 1..4");
    }
    return *q * q->adjoint();
}

DeficiencyData cayley_decompose(const OperatorSystem& sys) {
    const auto r = static_cast<Eigen::Index>(sys.rank());
    const Matrix& qd = sys.A.domain_basis;
    const auto dim_d = qd.cols();
    Matrix minus = sys.A.action * qd - kI * qd;  // (A - i) D
    Matrix plus = sys.A.action * qd + kI * qd;   // (A + i) D

    auto span_of = [&](const Matrix& f, const char* name) {
        const double thr = 1e-8 * std::max(1.0, op_norm(f));
        ColumnSpace cs = column_space(f, thr);
        double smallest = dim_d ? cs.singular_values(dim_d - 1) : std::numeric_limits<double>::infinity();
        if (cs.rank != dim_d || smallest < 10.0 * thr)
            throw NumericalRankAmbiguity(std::string("rank of ") + name + " is tolerance-sensitive (rank " +
                                         std::to_string(cs.rank) + " of " + std::to_string(dim_d) + ")");
        return cs;
    };
    ColumnSpace s1 = span_of(minus, "(A - i)D");
    ColumnSpace s3 = span_of(plus, "(A + i)D");

    DeficiencyData dd;
    dd.h1 = s1.basis;
    dd.h2 = s1.complement;
    dd.h3 = s3.basis;
    dd.h4 = s3.complement;
    dd.defect = static_cast<int>(r - dim_d);
    dd.cayley = dim_d ? Matrix(plus * pseudo_inverse(minus, 0.0)) : Matrix(Matrix::Zero(r, r));
    Matrix v1 = dd.cayley * dd.h1;
    dd.cayley_isometry_defect = op_norm(v1.adjoint() * v1 - identity(dim_d));
    return dd;
}

ResidualRecord verify_reduction(const OperatorSystem& sys, const DeficiencyData& dd, double tol) {
    const Matrix& b = sys.B;
    const auto r = b.rows();
    ResidualRecord rec;
    for (int i = 1; i <= 4; ++i) {
        Matrix p = dd.projector(i);
        rec.push_back({"b_reduces_h" + std::to_string(i), op_norm(p * b - b * p), tol});
    }
    rec.push_back({"b_commutes_with_cayley", op_norm((b * dd.cayley - dd.cayley * b) * dd.projector(1)), tol});
    rec.push_back({"j_maps_h2_to_h4", op_norm((identity(r) - dd.projector(4)) * sys.J.after(dd.projector(2))), tol});
    rec.push_back({"cayley_isometry", dd.cayley_isometry_defect, 1e-10});
    return rec;
}

Matrix restrict_to_h2(const OperatorSystem& sys, const DeficiencyData& dd) {
    return dd.h2.adjoint() * sys.B * dd.h2;
}

ConjugationPair godic_lucenko_factor(const Matrix& b_on_h2) {
    if (b_on_h2.rows() == 0) return {};
    ClusteredEigenbasis eb = clustered_eigenbasis(b_on_h2, 1e-8);
    const Matrix& q = eb.basis;
    // L v = Q conj(Q^* v) = (Q Q^T) conj(v);  K = B o L.
    ConjugationPair pair;
    pair.L.matrix = q * q.transpose();
    pair.K.matrix = b_on_h2 * pair.L.matrix;
    return pair;
}

Matrix build_U24(const OperatorSystem& sys, const AntilinearOperator& K, const DeficiencyData& dd) {
    const auto r = static_cast<Eigen::Index>(sys.rank());
    const auto d = dd.h2.cols();
    if (d == 0) return Matrix(r, 0);
    // c -> J(Q2 K c) = M_J conj(Q2) conj(M_K) c.
    Matrix u24 = sys.J.matrix * dd.h2.conjugate() * K.matrix.conjugate();
    Matrix b2 = restrict_to_h2(sys, dd);
    ResidualRecord rec{
        {"u24_lands_in_h4", op_norm((identity(r) - dd.projector(4)) * u24), 1e-9},
        {"u24_isometry", op_norm(u24.adjoint() * u24 - identity(d)), 1e-9},
        {"u24_commutation", op_norm(sys.B * u24 - u24 * b2), kIdentityTol},
    };
    require_all(rec, "U24 = J K validation failed");
    return u24;
}

std::string ExtensionParameter::describe() const {
    switch (kind) {
        case Kind::Identity: return "identity";
        case Kind::Seed: return "seed:" + std::to_string(seed) + "#" + std::to_string(index);
        case Kind::Explicit: return "explicit";
    }
    return "unknown";
}

ExtensionData assemble_extension(const OperatorSystem& sys, const DeficiencyData& dd, const Matrix& U24,
                                 const Matrix& U2, ExtensionParameter parameter) {
    const auto r = static_cast<Eigen::Index>(sys.rank());
    const auto d = dd.h2.cols();
    if (U2.rows() != d || U2.cols() != d || U24.cols() != d)
        throw DomainError("commutant parameter has the wrong size for the defect space");
    const Matrix id = identity(r);

    if (d > 0) {
        Matrix b2 = restrict_to_h2(sys, dd);
        double unitarity = op_norm(U2.adjoint() * U2 - identity(d));
        if (unitarity > 1e-10)
            throw ValidationFailed("commutant parameter is not unitary", {{"u2_unitarity", unitarity, 1e-10}});
        double comm = op_norm(U2 * b2 - b2 * U2);
        if (comm > kIdentityTol)
            throw CommutationFailed("commutant parameter does not commute with B on H2", comm);
    }

    ExtensionData ext;
    ext.U2 = U2;
    ext.parameter = parameter;
    ext.U = dd.cayley * dd.projector(1) + U24 * U2 * dd.h2.adjoint();

    const double bu = op_norm(sys.B * ext.U - ext.U * sys.B);
    if (bu > kIdentityTol) throw CommutationFailed("assembled U does not commute with B", bu);

    Eigen::ComplexEigenSolver<Matrix> ces(ext.U, false);
    if (ces.info() != Eigen::Success) throw ComputationError("eigensolver failed on U");
    double dist_one = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ces.eigenvalues().size(); ++i)
        dist_one = std::min(dist_one, std::abs(ces.eigenvalues()(i) - 1.0));
    if (dist_one <= kOnePointTol)
        throw OnePointSpectrum("1 is an eigenvalue of U (distance " + std::to_string(dist_one) +
                                   "); choose another commutant parameter",
                               dist_one);

    Eigen::PartialPivLU<Matrix> lu(ext.U - id);
    Matrix raw = kI * (ext.U + id) * lu.inverse();
    double hermitian_defect = op_norm(raw - raw.adjoint());
    ext.A_U = (raw + raw.adjoint()) * 0.5;

    Eigen::PartialPivLU<Matrix> lu2(ext.A_U - kI * id);
    Matrix roundtrip = (ext.A_U + kI * id) * lu2.inverse();
    const Matrix& qd = sys.A.domain_basis;

    ext.one_point_distance = dist_one;
    ext.diagnostics = {
        {"u_unitarity", op_norm(ext.U.adjoint() * ext.U - id), 1e-10},
        {"bu_commutation", bu, kIdentityTol},
        {"a_u_hermitian_defect", hermitian_defect, 1e-8},
        {"a_u_extends_a", op_norm((ext.A_U - sys.A.action) * qd), 1e-8},
        {"cayley_roundtrip", op_norm(roundtrip - ext.U), 1e-8},
        {"u_restricts_to_cayley", op_norm((ext.U - dd.cayley) * dd.projector(1)), 1e-12},
    };
    require_all(ext.diagnostics, "extension validation failed");
    return ext;
}

std::vector<Matrix> enumerate_commutant_unitaries(const Matrix& b_on_h2, int count, std::uint64_t seed) {
    if (count < 1) throw DomainError("count must be at least 1");
    const auto d = b_on_h2.rows();
    if (d < 1) throw DomainError("the defect space is trivial");
    ClusteredEigenbasis eb = clustered_eigenbasis(b_on_h2, 1e-8);

    std::mt19937_64 rng(seed);
    std::vector<Matrix> out;
    out.push_back(identity(d));
    for (int k = 1; k < count; ++k) {
        Matrix u = Matrix::Zero(d, d);
        for (const auto& cluster : eb.clusters) {
            const auto size = static_cast<Eigen::Index>(cluster.size());
            Matrix q(d, size);
            for (Eigen::Index j = 0; j < size; ++j) q.col(j) = eb.basis.col(cluster[static_cast<std::size_t>(j)]);
            u += q * haar_unitary(static_cast<int>(size), rng) * q.adjoint();
        }
        out.push_back(std::move(u));
    }
    return out;
}

}  // namespace devinatz
