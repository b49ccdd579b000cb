#pragma once

// Joint spectral decomposition of the commuting pair (A_U, B) and the atomic
// solution measure mu(delta) = <(E x F)(delta) x00, x00> it induces.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "devinatz/extension.hpp"
#include "devinatz/moments.hpp"

namespace devinatz {

inline constexpr double kVerifyTol = 1e-8;
inline constexpr double kDefaultWeightFloor = 1e-12;
inline constexpr double kClusterTol = 1e-8;

struct SpectralTriple {
    double s = 0.0;    // eigenvalue of A_U
    double phi = 0.0;  // argument of the B eigenvalue, in [-pi, pi)
    Vector vec;
};

struct JointSpectrum {
    std::vector<SpectralTriple> triples;
    double a_residual = 0.0;  // max ||A_U v - s v||
    double b_residual = 0.0;  // max ||B v - e^{i phi} v||
    double orthonormality = 0.0;
};

/// Diagonalizes B, groups its eigenvalues into clusters of angular width
/// `tol`, then diagonalizes the compression of A_U to each cluster.
/// Throws CommutationTooLarge, or ClusterAmbiguity when two clusters are
/// separated by less than 10 tol.
JointSpectrum joint_diagonalize(const Matrix& A_U, const Matrix& B, double tol = kClusterTol);

struct VerifyReport {
    double max_residual = 0.0;
    MomentIndex worst{};
    bool pass = false;
    std::map<MomentIndex, double> per_index;
};

/// |sum_j w_j x_j^m e^{i n phi_j} - s_{m,n}| / (1 + |s_{m,n}|) over the stored
/// rectangle, optionally clipped to m <= max_m, |n| <= max_abs_n.
VerifyReport verify_solution(const MomentTable& table, const AtomicMeasure& measure, double tol = kVerifyTol,
                             int max_m = -1, int max_abs_n = -1);

struct SolutionMeasure {
    AtomicMeasure measure;
    std::string provenance;
    double fit = 0.0;
    double dropped_mass = 0.0;
    ResidualRecord residuals;
};

/// Atoms at the joint eigenvalues with weights |<x00, v_j>|^2; atoms whose
/// reach w_j max(1,|s_j|)^{2M} is below weight_floor * s_{0,0} are dropped and
/// coincident atoms merged.
///
/// `powers` holds x_{0,0}, x_{1,0}, ..., x_{k,0} with k <= M as columns. Since
/// <v_j, x_{m,0}> = s_j^m <v_j, x_{0,0}> for these, each amplitude is read off
/// the column that sees v_j best; far atoms keep their digits that way.
SolutionMeasure synthesize_solution(const JointSpectrum& js, const Matrix& powers, const MomentTable& src,
                                    double weight_floor = kDefaultWeightFloor);

/// Solutions built from U24 U2 for the enumerated commutant parameters (a
/// single member when the defect is 0). Each member's `fit` is its maximal
/// moment residual. A OnePointSpectrum failure is rethrown naming the member.
std::vector<SolutionMeasure> canonical_family(const OperatorSystem& sys, const DeficiencyData& dd, int count,
                                              std::uint64_t seed, const MomentTable& table,
                                              double weight_floor = kDefaultWeightFloor);

/// One member of the family for an explicit commutant parameter.
SolutionMeasure canonical_solution(const OperatorSystem& sys, const DeficiencyData& dd, const Matrix& U24,
                                   const Matrix& U2, const ExtensionParameter& parameter, const MomentTable& table,
                                   ExtensionData* extension = nullptr, double weight_floor = kDefaultWeightFloor);

/// Bottleneck distance between atom sets under max(|dx|, wrapped |dphi|, |dw|)
/// with an optimal one-to-one matching; +inf when the atom counts differ.
double measure_distance(const AtomicMeasure& a, const AtomicMeasure& b);

/// Rank of the window monomials x^m e^{i n phi} (m <= M, |n| <= N) in L^2(mu)
/// next to the number of atoms; equality means the monomials are dense.
struct DensityDiagnostic {
    int monomial_rank = 0;
    int atoms = 0;
};

DensityDiagnostic polynomial_density(const AtomicMeasure& measure, int max_power, int max_freq);

}  // namespace devinatz
