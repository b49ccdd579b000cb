#include "devinatz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace devinatz {

namespace {

Matrix power_columns(const GnsSpace& gns) {
    std::vector<MomentIndex> idx;
    for (int m = 0; m <= gns.window().max_power(); ++m) idx.push_back({m, 0});
    return gns.columns(idx);
}

}  // namespace

JointSpectrum joint_diagonalize(const Matrix& A_U, const Matrix& B, double tol) {
    const auto r = A_U.rows();
    const double comm = op_norm(A_U * B - B * A_U);
    if (comm > 1e-8 * (1.0 + op_norm(A_U)))
        throw CommutationTooLarge("A_U and B do not commute", comm);

    NormalEigen ne = normal_eigen(B);
    std::vector<double> angles;
    for (Eigen::Index i = 0; i < ne.values.size(); ++i) angles.push_back(std::arg(ne.values(i)));
    double min_gap = 0.0;
    auto clusters = cluster_angles(angles, tol, &min_gap);
    if (min_gap <= 10.0 * tol)
        throw ClusterAmbiguity("two eigenvalue clusters of B are separated by " + std::to_string(min_gap) +
                                   "; choose the clustering tolerance explicitly",
                               min_gap);

    JointSpectrum js;
    for (const auto& cluster : clusters) {
        const auto k = static_cast<Eigen::Index>(cluster.size());
        Matrix q(r, k);
        for (Eigen::Index j = 0; j < k; ++j) q.col(j) = ne.vectors.col(cluster[static_cast<std::size_t>(j)]);
        Matrix h = q.adjoint() * A_U * q;
        h = (h + h.adjoint()) * 0.5;
        Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
        if (eig.info() != Eigen::Success) throw ComputationError("Hermitian eigensolver failed on a cluster");
        Matrix vecs = q * eig.eigenvectors();
        normalize_column_phases(vecs);
        for (Eigen::Index j = 0; j < k; ++j) {
            Vector v = vecs.col(j);
            Complex rayleigh = v.dot(B * v);
            js.triples.push_back({eig.eigenvalues()(j), wrap_angle(std::arg(rayleigh)), v});
        }
    }

    Matrix all(r, static_cast<Eigen::Index>(js.triples.size()));
    for (std::size_t j = 0; j < js.triples.size(); ++j) {
        const auto& t = js.triples[j];
        all.col(static_cast<Eigen::Index>(j)) = t.vec;
        js.a_residual = std::max(js.a_residual, (A_U * t.vec - t.s * t.vec).norm());
        js.b_residual = std::max(js.b_residual, (B * t.vec - std::polar(1.0, t.phi) * t.vec).norm());
    }
    js.orthonormality = op_norm(all.adjoint() * all - Matrix::Identity(all.cols(), all.cols()));
    return js;
}

VerifyReport verify_solution(const MomentTable& table, const AtomicMeasure& measure, double tol, int max_m,
                             int max_abs_n) {
    VerifyReport rep;
    for (const auto& idx : table.indices()) {
        if (max_m >= 0 && idx.m > max_m) continue;
        if (max_abs_n >= 0 && std::abs(idx.n) > max_abs_n) continue;
        Complex sum{};
        for (const auto& a : measure.atoms()) sum += a.weight * std::pow(a.x, idx.m) * std::polar(1.0, idx.n * a.phi);
        Complex s = table.at(idx);
        double res = std::abs(sum - s) / (1.0 + std::abs(s));
        rep.per_index[idx] = res;
        if (rep.per_index.size() == 1 || res > rep.max_residual) {
            rep.max_residual = res;
            rep.worst = idx;
        }
    }
    rep.pass = rep.max_residual <= tol;
    return rep;
}

SolutionMeasure synthesize_solution(const JointSpectrum& js, const Matrix& powers, const MomentTable& src,
                                    double weight_floor) {
    if (powers.cols() < 1 || powers.cols() > src.max_power() + 1)
        throw DomainError("powers must hold x_{0,0} .. x_{k,0} with k <= max_power");
    const double mass = src.at({0, 0}).real();
    SolutionMeasure out;
    std::vector<Atom> atoms;
    for (const auto& t : js.triples) {
        Complex amp = powers.col(0).dot(t.vec);
        double best = std::abs(amp) / powers.col(0).norm();
        for (Eigen::Index m = 1; m < powers.cols(); ++m) {
            Complex c = powers.col(m).dot(t.vec);
            double seen = std::abs(c) / powers.col(m).norm();
            if (seen > best && t.s != 0.0) {
                best = seen;
                amp = c / std::pow(t.s, static_cast<double>(m));
            }
        }
        double w = std::norm(amp);
        // far atoms with tiny weight still carry the top moments: floor the contribution, not w
        double reach = std::pow(std::max(1.0, std::abs(t.s)), src.stored_power());
        if (w * reach < weight_floor * mass) {
            out.dropped_mass += w;
            continue;
        }
        atoms.push_back({t.s, t.phi, w});
    }
    out.measure = AtomicMeasure::ingest(std::move(atoms));
    out.fit = verify_solution(src, out.measure).max_residual;
    out.residuals = {
        {"joint_a_residual", js.a_residual, 1e-8},
        {"joint_b_residual", js.b_residual, 1e-8},
        {"joint_orthonormality", js.orthonormality, 1e-10},
        {"mass_defect", std::abs(out.measure.total_mass() - mass), 1e-9 * mass + out.dropped_mass},
    };
    return out;
}

SolutionMeasure canonical_solution(const OperatorSystem& sys, const DeficiencyData& dd, const Matrix& U24,
                                   const Matrix& U2, const ExtensionParameter& parameter, const MomentTable& table,
                                   ExtensionData* extension, double weight_floor) {
    ExtensionData ext = assemble_extension(sys, dd, U24, U2, parameter);
    JointSpectrum js = joint_diagonalize(ext.A_U, sys.B);
    SolutionMeasure sol = synthesize_solution(js, power_columns(sys.gns), table, weight_floor);
    sol.provenance = parameter.describe();
    sol.residuals.insert(sol.residuals.begin(), ext.diagnostics.begin(), ext.diagnostics.end());
    if (extension) *extension = std::move(ext);
    return sol;
}

std::vector<SolutionMeasure> canonical_family(const OperatorSystem& sys, const DeficiencyData& dd, int count,
                                              std::uint64_t seed, const MomentTable& table, double weight_floor) {
    if (count < 1) throw DomainError("count must be at least 1");
    const auto d = dd.h2.cols();
    std::vector<SolutionMeasure> family;
    if (d == 0) {
        family.push_back(canonical_solution(sys, dd, Matrix(sys.rank(), 0), Matrix(0, 0), {}, table, nullptr, weight_floor));
        return family;
    }
    Matrix b2 = restrict_to_h2(sys, dd);
    ConjugationPair kl = godic_lucenko_factor(b2);
    Matrix u24 = build_U24(sys, kl.K, dd);
    auto params = enumerate_commutant_unitaries(b2, count, seed);
    for (std::size_t k = 0; k < params.size(); ++k) {
        ExtensionParameter p;
        p.kind = k == 0 ? ExtensionParameter::Kind::Identity : ExtensionParameter::Kind::Seed;
        p.seed = seed;
        p.index = static_cast<int>(k);
        try {
            family.push_back(canonical_solution(sys, dd, u24, params[k], p, table, nullptr, weight_floor));
        } catch (const OnePointSpectrum& e) {
            throw OnePointSpectrum("family member " + std::to_string(k) + " (" + p.describe() + "): " + e.what(),
                                   e.distance());
        }
    }
    return family;
}

namespace {

bool augment(int u, double limit, const std::vector<std::vector<double>>& cost, std::vector<int>& match_right,
             std::vector<char>& seen) {
    for (std::size_t v = 0; v < cost.size(); ++v) {
        if (cost[static_cast<std::size_t>(u)][v] > limit || seen[v]) continue;
        seen[v] = 1;
        if (match_right[v] < 0 || augment(match_right[v], limit, cost, match_right, seen)) {
            match_right[v] = u;
            return true;
        }
    }
    return false;
}

bool perfect_matching(double limit, const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    std::vector<int> match_right(n, -1);
    for (std::size_t u = 0; u < n; ++u) {
        std::vector<char> seen(n, 0);
        if (!augment(static_cast<int>(u), limit, cost, match_right, seen)) return false;
    }
    return true;
}

}  // namespace

double measure_distance(const AtomicMeasure& a, const AtomicMeasure& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    const std::size_t n = a.size();
    if (n == 0) return 0.0;
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    std::vector<double> values;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto& p = a.atoms()[i];
            const auto& q = b.atoms()[j];
            cost[i][j] = std::max(atom_distance(p, q), std::abs(p.weight - q.weight));
            values.push_back(cost[i][j]);
        }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::size_t lo = 0, hi = values.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (perfect_matching(values[mid], cost))
            hi = mid;
        else
            lo = mid + 1;
    }
    return values[lo];
}

DensityDiagnostic polynomial_density(const AtomicMeasure& measure, int max_power, int max_freq) {
    const auto k = static_cast<Eigen::Index>(measure.size());
    IndexWindow w(max_power, max_freq);
    Matrix eval(w.size(), k);
    for (int i = 0; i < w.size(); ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            const auto& a = measure.atoms()[static_cast<std::size_t>(j)];
            eval(i, j) = std::sqrt(a.weight) * std::pow(a.x, w[i].m) * std::polar(1.0, w[i].n * a.phi);
        }
    double thr = 1e-10 * std::max(1.0, op_norm(eval));
    return {column_space(eval, thr).rank, static_cast<int>(k)};
}

}  // namespace devinatz
