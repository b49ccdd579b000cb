#pragma once

// Moment tables s_{m,n} = \int x^m e^{i n phi} dmu and the finitely atomic
// measures on the strip R x [-pi, pi) that generate them.

#include <complex>
#include <string>
#include <vector>

namespace devinatz {

struct MomentIndex {
    int m = 0;  // power of x, >= 0
    int n = 0;  // frequency of e^{i phi}

    friend bool operator==(const MomentIndex&, const MomentIndex&) = default;
    friend auto operator<=>(const MomentIndex&, const MomentIndex&) = default;
};

/// Moments s_{m,n} on the full rectangle 0 <= m <= 2M, |n| <= 2N, which is
/// what the Gram matrix of the (M, N) index window needs.
class MomentTable {
public:
    MomentTable(int max_power, int max_freq);

    int max_power() const noexcept { return max_power_; }
    int max_freq() const noexcept { return max_freq_; }
    int stored_power() const noexcept { return 2 * max_power_; }
    int stored_freq() const noexcept { return 2 * max_freq_; }

    bool contains(MomentIndex idx) const noexcept;

    /// Throws IndexOutOfWindow outside the stored rectangle.
    std::complex<double> at(MomentIndex idx) const;
    void set(MomentIndex idx, std::complex<double> value);

    /// Every stored index, m ascending then n ascending.
    std::vector<MomentIndex> indices() const;

    /// Largest |s_{m,n}| over the stored rectangle.
    double max_abs() const;

private:
    std::size_t offset(MomentIndex idx) const;

    int max_power_;
    int max_freq_;
    std::vector<std::complex<double>> values_;
};

struct Atom {
    double x = 0.0;
    double phi = 0.0;
    double weight = 0.0;
};

/// Finitely many positive point masses on the strip. The constructor checks
/// the invariants strictly; `ingest` normalizes raw data first.
class AtomicMeasure {
public:
    /// Atoms closer than this in (x, phi), max-norm with wraparound, are merged.
    static constexpr double kMergeDistance = 1e-9;

    AtomicMeasure() = default;
    explicit AtomicMeasure(std::vector<Atom> atoms);

    /// Wraps angles into [-pi, pi), merges near-duplicate atoms and validates.
    static AtomicMeasure ingest(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }
    double total_mass() const noexcept;

private:
    std::vector<Atom> atoms_;
};

/// Distance between two atom positions: max(|dx|, wrapped |dphi|).
double atom_distance(const Atom& a, const Atom& b);

MomentTable compute_moments(const AtomicMeasure& measure, int max_power, int max_freq);

/// K((m,n),(k,l)) = s_{m+k, n-l}.
std::complex<double> kernel_value(const MomentTable& table, MomentIndex t, MomentIndex r);

struct Violation {
    std::string invariant;  // "conjugate_symmetry" | "mass_real" | "mass_nonnegative" | "finite"
    MomentIndex index;
    double magnitude = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

/// Checks the table invariants entrywise to an absolute tolerance. Each
/// conjugate pair is reported once, at its n > 0 member.
ValidationReport validate_table(const MomentTable& table, double tol);

}  // namespace devinatz
