#include <doctest.h>

#include <cmath>
#include <random>

#include "devinatz/errors.hpp"
#include "devinatz/linalg.hpp"
#include "devinatz/moments.hpp"
#include "generators.hpp"

using namespace devinatz;

namespace {

MomentTable constant_table(int M, int N, std::complex<double> v = 1.0) {
    MomentTable t(M, N);
    for (auto idx : t.indices()) t.set(idx, v);
    return t;
}

}  // namespace

TEST_CASE("single atom at x=1, phi=0 gives all-ones moments") {
    auto t = compute_moments(AtomicMeasure({{1.0, 0.0, 1.0}}), 1, 1);
    CHECK(t.stored_power() == 2);
    CHECK(t.stored_freq() == 2);
    for (auto idx : t.indices()) CHECK(std::abs(t.at(idx) - 1.0) == doctest::Approx(0.0));
}

TEST_CASE("single atom at the origin kills every m >= 1") {
    auto t = compute_moments(AtomicMeasure({{0.0, 0.0, 1.0}}), 2, 1);
    for (auto idx : t.indices()) {
        double expected = idx.m == 0 ? 1.0 : 0.0;
        CHECK(std::abs(t.at(idx) - expected) < 1e-15);
    }
}

TEST_CASE("symmetric pair cancels odd powers") {
    auto t = compute_moments(AtomicMeasure({{-1.0, 0.0, 0.5}, {1.0, 0.0, 0.5}}), 2, 0);
    for (int m = 0; m <= 4; ++m) CHECK(std::abs(t.at({m, 0}) - (m % 2 == 0 ? 1.0 : 0.0)) < 1e-15);
}

TEST_CASE("atom at (2, pi/2) gives 2^m i^n") {
    auto t = compute_moments(AtomicMeasure({{2.0, kPi / 2, 1.0}}), 1, 1);
    CHECK(std::abs(t.at({1, 1}) - Complex(0, 2)) < 1e-14);
    CHECK(std::abs(t.at({1, -1}) - Complex(0, -2)) < 1e-14);
    for (auto idx : t.indices()) {
        Complex expected = std::pow(2.0, idx.m) * std::pow(Complex(0, 1), idx.n);
        CHECK(std::abs(t.at(idx) - expected) < 1e-13);
    }
}

TEST_CASE("kernel values") {
    auto ones = compute_moments(AtomicMeasure({{1.0, 0.0, 1.0}}), 1, 1);
    CHECK(std::abs(kernel_value(ones, {1, 0}, {1, 0}) - 1.0) < 1e-15);

    auto t = compute_moments(AtomicMeasure({{2.0, kPi / 2, 1.0}}), 1, 1);
    CHECK(std::abs(kernel_value(t, {1, 1}, {0, 0}) - Complex(0, 2)) < 1e-14);
}

TEST_CASE("kernel is Hermitian on random tables") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto mu = testing::random_measure(rng);
        int M = 1 + trial % 3, N = trial % 3;
        auto t = compute_moments(mu, M, N);
        double scale = std::max(1.0, t.max_abs());
        for (int m = 0; m <= M; ++m)
            for (int n = -N; n <= N; ++n)
                for (int k = 0; k <= M; ++k)
                    for (int l = -N; l <= N; ++l) {
                        auto a = kernel_value(t, {m, n}, {k, l});
                        auto b = kernel_value(t, {k, l}, {m, n});
                        CHECK(std::abs(a - std::conj(b)) <= 1e-14 * scale);
                    }
    }
}

TEST_CASE("compute_moments agrees with the brute-force oracle") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        auto mu = testing::random_measure(rng);
        auto t = compute_moments(mu, 3, 2);
        for (auto idx : t.indices()) {
            auto expected = testing::moment_oracle(mu, idx.m, idx.n);
            CHECK(std::abs(t.at(idx) - expected) <= 1e-12 * (1.0 + std::abs(expected)));
        }
    }
}

TEST_CASE("generated tables satisfy every invariant") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        auto mu = testing::random_measure(rng);
        auto t = compute_moments(mu, 1 + trial % 3, trial % 3);
        CHECK(validate_table(t, 1e-12 * std::max(1.0, t.max_abs())).ok());
        // negative frequencies are stored as exact conjugates
        for (auto idx : t.indices())
            if (idx.n < 0) CHECK(t.at(idx) == std::conj(t.at({idx.m, -idx.n})));
    }
}

TEST_CASE("validate_table reports broken conjugate symmetry once") {
    auto t = constant_table(1, 1);
    t.set({0, 1}, Complex(0, 1));
    t.set({0, -1}, Complex(0, 1));
    auto report = validate_table(t, 1e-12);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].invariant == "conjugate_symmetry");
    CHECK(report.violations[0].index == MomentIndex{0, 1});
    CHECK(report.violations[0].magnitude == doctest::Approx(2.0));
}

TEST_CASE("validate_table reports a negative mass") {
    auto t = constant_table(1, 0, -1.0);
    auto report = validate_table(t, 1e-12);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].invariant == "mass_nonnegative");
    CHECK(report.violations[0].index == MomentIndex{0, 0});
}

TEST_CASE("validate_table reports complex mass and non-finite entries") {
    auto t = constant_table(1, 0);
    t.set({0, 0}, Complex(1, 0.5));
    t.set({2, 0}, Complex(std::nan(""), 0));
    auto report = validate_table(t, 1e-12);
    bool mass_real = false, finite = false;
    for (const auto& v : report.violations) {
        mass_real |= v.invariant == "mass_real" && v.index == MomentIndex{0, 0};
        finite |= v.invariant == "finite" && v.index == MomentIndex{2, 0};
    }
    CHECK(mass_real);
    CHECK(finite);
}

TEST_CASE("moment table window bounds") {
    MomentTable t(1, 1);
    CHECK(t.contains({2, -2}));
    CHECK_FALSE(t.contains({3, 0}));
    CHECK_FALSE(t.contains({0, 3}));
    CHECK_FALSE(t.contains({-1, 0}));
    CHECK_THROWS_AS(t.at({3, 0}), IndexOutOfWindow);
    CHECK_THROWS_AS(t.set({0, -3}, 1.0), IndexOutOfWindow);
    CHECK(t.indices().size() == 15u);
    CHECK_THROWS_AS(MomentTable(-1, 0), DomainError);
}

TEST_CASE("measure construction rejects bad atoms") {
    CHECK_THROWS_WITH_AS(AtomicMeasure({{0.0, 0.0, -1.0}}), doctest::Contains("weight must be positive"), DomainError);
    CHECK_THROWS_AS(AtomicMeasure({{0.0, 4.0, 1.0}}), DomainError);
    CHECK_THROWS_AS(AtomicMeasure({{0.0, kPi, 1.0}}), DomainError);
    CHECK_THROWS_AS(AtomicMeasure({{std::nan(""), 0.0, 1.0}}), DomainError);
    CHECK_THROWS_AS(AtomicMeasure({{1.0, 0.0, 1.0}, {1.0, 0.0, 2.0}}), DomainError);
    CHECK_THROWS_WITH_AS(compute_moments(AtomicMeasure(), 1, 0),
                         doctest::Contains("measure must contain at least one atom"), DomainError);
}

TEST_CASE("ingest wraps angles and merges near-duplicates") {
    auto mu = AtomicMeasure::ingest({{1.0, kPi, 1.0}, {1.0, -kPi + 1e-12, 0.5}, {2.0, 3 * kPi / 2, 1.0}});
    REQUIRE(mu.size() == 2u);
    CHECK(mu.total_mass() == doctest::Approx(2.5));
    for (const auto& a : mu.atoms()) {
        CHECK(a.phi >= -kPi);
        CHECK(a.phi < kPi);
    }
}

TEST_CASE("atom distance wraps the angle") {
    Atom a{0.0, -kPi + 0.1, 1.0}, b{0.0, kPi - 0.1, 1.0};
    CHECK(atom_distance(a, b) == doctest::Approx(0.2));
    CHECK(atom_distance({1.0, 0.0, 1.0}, {1.5, 0.1, 1.0}) == doctest::Approx(0.5));
}
