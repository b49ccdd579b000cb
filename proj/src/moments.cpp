#include "devinatz/moments.hpp"

#include <algorithm>
#include <cmath>

#include "devinatz/errors.hpp"
#include "devinatz/linalg.hpp"

namespace devinatz {

MomentTable::MomentTable(int max_power, int max_freq) : max_power_(max_power), max_freq_(max_freq) {
    if (max_power < 1) throw DomainError("max_power must be at least 1");
    if (max_freq < 0) throw DomainError("max_freq must be non-negative");
    values_.assign(static_cast<std::size_t>(stored_power() + 1) * (2 * stored_freq() + 1), {});
}

bool MomentTable::contains(MomentIndex idx) const noexcept {
    return idx.m >= 0 && idx.m <= stored_power() && std::abs(idx.n) <= stored_freq();
}

std::size_t MomentTable::offset(MomentIndex idx) const {
    if (!contains(idx))
        throw IndexOutOfWindow("moment index (" + std::to_string(idx.m) + "," + std::to_string(idx.n) +
                               ") outside stored rectangle");
    return static_cast<std::size_t>(idx.m) * (2 * stored_freq() + 1) +
           static_cast<std::size_t>(idx.n + stored_freq());
}

std::complex<double> MomentTable::at(MomentIndex idx) const { return values_[offset(idx)]; }

void MomentTable::set(MomentIndex idx, std::complex<double> value) { values_[offset(idx)] = value; }

std::vector<MomentIndex> MomentTable::indices() const {
    std::vector<MomentIndex> out;
    out.reserve(values_.size());
    for (int m = 0; m <= stored_power(); ++m)
        for (int n = -stored_freq(); n <= stored_freq(); ++n) out.push_back({m, n});
    return out;
}

double MomentTable::max_abs() const {
    double best = 0.0;
    for (const auto& v : values_) best = std::max(best, std::abs(v));
    return best;
}

namespace {

void check_atom(const Atom& a) {
    if (!std::isfinite(a.x) || !std::isfinite(a.phi) || !std::isfinite(a.weight))
        throw DomainError("atom coordinates and weight must be finite");
    if (!(a.weight > 0.0)) throw DomainError("weight must be positive");
}

}  // namespace

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        check_atom(atoms_[i]);
        if (atoms_[i].phi < -kPi || atoms_[i].phi >= kPi) throw DomainError("phi must lie in [-pi, pi)");
        for (std::size_t j = 0; j < i; ++j)
            if (atoms_[i].x == atoms_[j].x && atoms_[i].phi == atoms_[j].phi)
                throw DomainError("atoms must have distinct (x, phi) positions");
    }
}

AtomicMeasure AtomicMeasure::ingest(std::vector<Atom> atoms) {
    std::vector<Atom> merged;
    for (auto a : atoms) {
        check_atom(a);
        a.phi = wrap_angle(a.phi);
        auto hit = std::find_if(merged.begin(), merged.end(),
                                [&](const Atom& b) { return atom_distance(a, b) < kMergeDistance; });
        if (hit != merged.end())
            hit->weight += a.weight;
        else
            merged.push_back(a);
    }
    return AtomicMeasure(std::move(merged));
}

double AtomicMeasure::total_mass() const noexcept {
    double mass = 0.0;
    for (const auto& a : atoms_) mass += a.weight;
    return mass;
}

double atom_distance(const Atom& a, const Atom& b) {
    return std::max(std::abs(a.x - b.x), angular_distance(a.phi, b.phi));
}

MomentTable compute_moments(const AtomicMeasure& measure, int max_power, int max_freq) {
    if (measure.empty()) throw DomainError("measure must contain at least one atom");
    MomentTable table(max_power, max_freq);
    const int mp = table.stored_power();
    const int nf = table.stored_freq();
    for (const auto& a : measure.atoms()) {
        if (a.phi < -kPi || a.phi >= kPi) throw DomainError("phi must lie in [-pi, pi)");
    }
    for (int m = 0; m <= mp; ++m) {
        for (int n = 0; n <= nf; ++n) {
            std::complex<double> sum{};
            for (const auto& a : measure.atoms())
                sum += a.weight * std::pow(a.x, m) * std::polar(1.0, n * a.phi);
            table.set({m, n}, sum);
            // Negative frequencies are exact conjugates, not recomputed.
            if (n > 0) table.set({m, -n}, std::conj(sum));
        }
        table.set({m, 0}, {table.at({m, 0}).real(), 0.0});
    }
    return table;
}

std::complex<double> kernel_value(const MomentTable& table, MomentIndex t, MomentIndex r) {
    return table.at({t.m + r.m, t.n - r.n});
}

ValidationReport validate_table(const MomentTable& table, double tol) {
    ValidationReport report;
    for (const auto& idx : table.indices()) {
        auto v = table.at(idx);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            report.violations.push_back({"finite", idx, std::abs(v)});
            continue;
        }
        if (idx.n == 0 && idx.m > 0 && std::abs(v.imag()) > tol) {
            report.violations.push_back({"conjugate_symmetry", idx, std::abs(v.imag())});
        } else if (idx.n > 0) {
            double d = std::abs(table.at({idx.m, -idx.n}) - std::conj(v));
            if (d > tol) report.violations.push_back({"conjugate_symmetry", idx, d});
        }
    }
    auto mass = table.at({0, 0});
    if (std::abs(mass.imag()) > tol) report.violations.push_back({"mass_real", {0, 0}, std::abs(mass.imag())});
    if (mass.real() < -tol) report.violations.push_back({"mass_nonnegative", {0, 0}, -mass.real()});
    return report;
}

}  // namespace devinatz
