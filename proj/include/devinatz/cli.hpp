#pragma once

// Command-line front end: gen, check, solve, verify, probe.
//
// Exit codes: 0 success, 1 mathematical negative (not PSD, verification
// failed), 2 input error, 3 solvable but the window or parameter must change.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "devinatz/linalg.hpp"

namespace devinatz::cli {

enum ExitCode : int { kSuccess = 0, kNegative = 1, kInputError = 2, kNeedsParameters = 3 };

struct GenConfig {
    std::filesystem::path measure;
    int max_power = 1;
    int max_freq = 0;
    std::filesystem::path output;
};

struct CheckConfig {
    std::filesystem::path moments;
    double tol = 1e-10;
    bool spectrum = false;
};

struct SolveConfig {
    std::filesystem::path moments;
    std::filesystem::path output;
    int count = 1;
    std::uint64_t seed = 0;
    std::string param = "identity";
    bool dump_operators = false;
    double tol = 1e-8;
    double rank_tol = 1e-10;
    double weight_floor = 1e-12;
};

struct VerifyConfig {
    std::filesystem::path moments;
    std::filesystem::path solution;
    double tol = 1e-8;
};

struct ProbeConfig {
    std::filesystem::path moments;
    Complex z{0.0, 1.0};
    std::string contraction = "canonical";
    std::optional<std::array<int, 4>> indices;  // m1, m2, n1, n2
    std::optional<std::filesystem::path> measure;
    double tol = 1e-8;
    double rank_tol = 1e-10;
};

int run_gen(const GenConfig& config, std::ostream& out, std::ostream& err);
int run_check(const CheckConfig& config, std::ostream& out, std::ostream& err);
int run_solve(const SolveConfig& config, std::ostream& out, std::ostream& err);
int run_verify(const VerifyConfig& config, std::ostream& out, std::ostream& err);
int run_probe(const ProbeConfig& config, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace devinatz::cli
