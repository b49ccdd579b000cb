#include "devinatz/cli.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "devinatz/errors.hpp"
#include "devinatz/gns.hpp"
#include "devinatz/io.hpp"
#include "devinatz/pipeline.hpp"
#include "devinatz/resolvent.hpp"
#include "devinatz/spectral.hpp"

namespace devinatz::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

MomentTable load_table(const fs::path& path) {
    MomentTable table = io::moment_table_from_json(io::read_file(path));
    const double tol = 1e-10 * std::max(1.0, table.max_abs());
    ValidationReport rep = validate_table(table, tol);
    if (!rep.ok()) {
        const auto& v = rep.violations.front();
        throw DomainError("moment table violates " + v.invariant + " at (" + std::to_string(v.index.m) + "," +
                          std::to_string(v.index.n) + ")");
    }
    return table;
}

json residuals_json(const ResidualRecord& rec) {
    json j = json::object();
    for (const auto& r : rec) j[r.name] = r.value;
    return j;
}

json window_json(int max_power, int max_freq) { return {{"max_power", max_power}, {"max_freq", max_freq}}; }

json solution_json(const SolutionMeasure& sol, const Model& model) {
    json j = io::to_json(sol.measure);
    j["diagnostics"] = {
        {"fit", sol.fit},
        {"dropped_mass", sol.dropped_mass},
        {"parameter", sol.provenance},
        {"residuals", residuals_json(sol.residuals)},
        {"window", window_json(model.table.max_power(), model.table.max_freq())},
        {"defect", model.defect()},
        {"rank", model.gns().rank()},
    };
    return j;
}

json operators_json(const Model& model) {
    const auto& sys = model.system;
    const auto& w = sys.gns.window();
    json domain = json::array();
    for (const auto& idx : w.indices())
        if (idx.m <= w.max_power() - 1) domain.push_back(json::array({idx.m, idx.n}));
    json x00 = json::array();
    for (Eigen::Index i = 0; i < sys.x00.size(); ++i) x00.push_back(json::array({sys.x00(i).real(), sys.x00(i).imag()}));
    return {
        {"rank", sys.rank()},
        {"window", window_json(w.max_power(), w.max_freq())},
        {"A", {{"action", io::to_json(sys.A.action)}, {"domain", domain},
               {"domain_projector", io::to_json(sys.A.domain_projector)}}},
        {"B", io::to_json(sys.B)},
        {"J", io::to_json(sys.J.matrix)},
        {"x00", x00},
        {"residuals", residuals_json(sys.residuals)},
        {"defect", model.defect()},
    };
}

// Maps library errors onto the exit-code contract.
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const NotSaturated& e) {
        err << "error: " << e.what() << "\nhint: increase --max-freq window\n";
        return kNeedsParameters;
    } catch (const OnePointSpectrum& e) {
        err << "error: " << e.what() << "\nhint: try another seed\n";
        return kNeedsParameters;
    } catch (const NotPositive& e) {
        err << "error: " << e.what() << " (min eigenvalue " << e.min_eigenvalue() << ")\n";
        return kNegative;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const IndexOutOfWindow& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const ComputationError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\nhint: enlarge the moment window or change the parameter\n";
        return kNeedsParameters;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

std::optional<json> positivity_failure(const MomentTable& table, double tol) {
    PositivityReport rep = check_positivity(build_gram(table), tol);
    if (rep.is_psd) return std::nullopt;
    return json{{"is_psd", false}, {"min_eigenvalue", rep.min_eigenvalue}, {"rank", rep.numeric_rank}};
}

Matrix explicit_matrix(const std::string& choice, const char* prefix) {
    return io::matrix_from_json(io::read_file(choice.substr(std::string(prefix).size())));
}

}  // namespace

int run_gen(const GenConfig& config, std::ostream& /*out*/, std::ostream& err) {
    return guarded(err, [&] {
        AtomicMeasure measure = io::measure_from_json(io::read_file(config.measure));
        MomentTable table = compute_moments(measure, config.max_power, config.max_freq);
        io::write_file_atomic(config.output, io::dump(io::to_json(table)));
        return kSuccess;
    });
}

int run_check(const CheckConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!(config.tol > 0.0)) throw DomainError("tol must be positive");
        MomentTable table = load_table(config.moments);
        Matrix gram = build_gram(table);
        PositivityReport rep = check_positivity(gram, config.tol);
        json j = {
            {"is_psd", rep.is_psd},
            {"min_eigenvalue", rep.min_eigenvalue},
            {"rank", rep.numeric_rank},
            {"window", window_json(table.max_power(), table.max_freq())},
            {"spectral_norm", rep.spectral_norm},
            {"max_abs_moment", table.max_abs()},
        };
        if (config.spectrum) {
            json values = json::array();
            for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) values.push_back(rep.eigenvalues(i));
            j["spectrum"] = values;
        }
        out << io::dump(j);
        return rep.is_psd ? kSuccess : kNegative;
    });
}

int run_solve(const SolveConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (config.count < 1) throw DomainError("count must be at least 1");
        if (!(config.tol > 0.0) || !(config.rank_tol > 0.0)) throw DomainError("tolerances must be positive");
        if (!(config.weight_floor >= 0.0)) throw DomainError("weight floor must be non-negative");
        if (config.output.empty()) throw DomainError("an output path is required");
        MomentTable table = load_table(config.moments);
        if (auto failure = positivity_failure(table, config.rank_tol)) {
            out << io::dump(*failure);
            return kNegative;
        }
        Model model = build_model(table, config.rank_tol);
        const auto& sys = model.system;
        const auto& dd = model.deficiency;

        std::vector<SolutionMeasure> family;
        if (config.count == 1) {
            ExtensionParameter param;
            Matrix u2;
            if (config.param.rfind("file:", 0) == 0) {
                u2 = explicit_matrix(config.param, "file:");
                param.kind = ExtensionParameter::Kind::Explicit;
            } else {
                u2 = commutant_parameter(model, config.param, &param);
            }
            SolutionMeasure sol = canonical_solution(sys, dd, model.U24, u2, param, table, nullptr, config.weight_floor);
            family.push_back(std::move(sol));
        } else {
            if (config.param != "identity") throw DomainError("--param applies to single solutions; use --seed");
            family = canonical_family(sys, dd, config.count, config.seed, table, config.weight_floor);
        }
        for (auto& sol : family) {
            if (sol.measure.size() == 0) continue;
            sol.fit = verify_solution(table, sol.measure, config.tol).max_residual;
        }

        bool all_pass = true;
        for (const auto& sol : family) all_pass = all_pass && sol.fit <= config.tol;

        if (family.size() == 1 && config.count == 1) {
            io::write_file_atomic(config.output, io::dump(solution_json(family.front(), model)));
            if (config.dump_operators) {
                fs::path ops = config.output;
                ops += ".operators.json";
                io::write_file_atomic(ops, io::dump(operators_json(model)));
            }
        } else {
            fs::create_directories(config.output);
            json fits = json::array();
            json files = json::array();
            json distances = json::array();
            int distinct = 0;
            for (std::size_t k = 0; k < family.size(); ++k) {
                char name[48];
                std::snprintf(name, sizeof name, "solution_%03zu.json", k);
                io::write_file_atomic(config.output / name, io::dump(solution_json(family[k], model)));
                files.push_back(name);
                fits.push_back(family[k].fit);
                json row = json::array();
                bool is_new = true;
                for (std::size_t l = 0; l < family.size(); ++l) {
                    double dist = measure_distance(family[k].measure, family[l].measure);
                    row.push_back(dist);
                    if (l < k && !(dist > 1e-6)) is_new = false;
                }
                distances.push_back(row);
                if (is_new) ++distinct;
            }
            json summary = {
                {"count", static_cast<int>(family.size())},
                {"requested", config.count},
                {"seed", config.seed},
                {"defect", model.defect()},
                {"rank", model.gns().rank()},
                {"fits", fits},
                {"files", files},
                {"pairwise_distances", distances},
                {"distinct_members", distinct},
                {"tol", config.tol},
                {"all_pass", all_pass},
            };
            io::write_file_atomic(config.output / "summary.json", io::dump(summary));
            if (config.dump_operators) io::write_file_atomic(config.output / "operators.json", io::dump(operators_json(model)));
        }
        out << io::dump({{"defect", model.defect()},
                         {"rank", model.gns().rank()},
                         {"solutions", static_cast<int>(family.size())},
                         {"all_pass", all_pass}});
        return all_pass ? kSuccess : kNegative;
    });
}

int run_verify(const VerifyConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!(config.tol > 0.0)) throw DomainError("tol must be positive");
        MomentTable table = load_table(config.moments);
        json sol = io::read_file(config.solution);
        AtomicMeasure measure = io::measure_from_json(sol);
        int max_m = -1;
        int max_n = -1;
        if (sol.contains("diagnostics") && sol["diagnostics"].contains("window")) {
            const json& w = sol["diagnostics"]["window"];
            int sp = 2 * w.value("max_power", table.max_power());
            int sf = 2 * w.value("max_freq", table.max_freq());
            if (sp != table.stored_power() || sf != table.stored_freq()) {
                err << "warning: solution window differs from the table; verifying on the intersection\n";
                max_m = std::min(sp, table.stored_power());
                max_n = std::min(sf, table.stored_freq());
            }
        }
        VerifyReport rep = verify_solution(table, measure, config.tol, max_m, max_n);
        out << io::dump({{"max_residual", rep.max_residual},
                         {"pass", rep.pass},
                         {"worst", {{"m", rep.worst.m}, {"n", rep.worst.n}}},
                         {"checked", static_cast<int>(rep.per_index.size())},
                         {"tol", config.tol}});
        return rep.pass ? kSuccess : kNegative;
    });
}

int run_probe(const ProbeConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (config.z.imag() == 0.0) throw DomainError("z must be non-real");
        if (!(config.tol > 0.0)) throw DomainError("tol must be positive");
        MomentTable table = load_table(config.moments);
        if (auto failure = positivity_failure(table, config.rank_tol)) {
            out << io::dump(*failure);
            return kNegative;
        }
        Model model = build_model(table, config.rank_tol);
        const auto& sys = model.system;
        const auto& dd = model.deficiency;
        const auto d = dd.h2.cols();
        const std::string& choice = config.contraction;

        ContractionParameter c;
        std::optional<Matrix> canonical_u2;
        if (choice == "canonical" || choice.rfind("canonical:", 0) == 0) {
            std::string param = choice == "canonical" ? "identity" : "seed:" + choice.substr(10);
            canonical_u2 = commutant_parameter(model, param);
            c = canonical_contraction(sys, dd, model.U24, *canonical_u2);
        } else if (choice == "zero") {
            c = make_contraction(sys, dd, Matrix::Zero(d, d));
        } else if (choice.rfind("scale:", 0) == 0) {
            double t = 0.0;
            try {
                std::size_t used = 0;
                t = std::stod(choice.substr(6), &used);
                if (used != choice.size() - 6) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw DomainError("invalid scale in contraction \"" + choice + "\"");
            }
            if (t < 0.0 || t > 1.0) throw DomainError("scale must lie in [0, 1]");
            c = make_contraction(sys, dd, t * (dd.h4.adjoint() * model.U24));
        } else if (choice.rfind("file:", 0) == 0) {
            c = make_contraction(sys, dd, explicit_matrix(choice, "file:"));
        } else {
            throw DomainError("contraction must be canonical[:seed], zero, scale:<t> or file:<path>");
        }

        ResolventProperties props = resolvent_properties(sys, dd, c, config.z);
        json j = {
            {"z", json::array({config.z.real(), config.z.imag()})},
            {"contraction", choice},
            {"contraction_norm", c.norm},
            {"contraction_commutation", c.commutation_residual},
            {"resolvent_norm", props.norm},
            {"norm_bound_excess", props.norm_bound_excess},
            {"adjoint_symmetry", props.adjoint_symmetry},
            {"b_commutation", props.b_commutation},
            {"defect", model.defect()},
            {"tol", config.tol},
        };
        bool pass = props.norm_bound_excess <= config.tol && props.adjoint_symmetry <= config.tol &&
                    props.b_commutation <= config.tol;

        std::optional<AtomicMeasure> measure;
        if (config.measure) {
            measure = io::measure_from_json(io::read_file(*config.measure));
        } else if (canonical_u2) {
            measure = canonical_solution(sys, dd, model.U24, *canonical_u2, {}, table).measure;
        }
        if (measure) {
            auto idx = config.indices.value_or(std::array<int, 4>{0, 0, 0, 0});
            MomentSplit split{idx[0], idx[1], idx[2], idx[3]};
            double residual = resolvent_moment_check(sys, dd, c, config.z, split, *measure);
            j["indices"] = json::array({idx[0], idx[1], idx[2], idx[3]});
            j["moment_residual"] = residual;
            pass = pass && residual <= config.tol;
        }
        j["pass"] = pass;
        out << io::dump(j);
        return pass ? kSuccess : kNegative;
    });
}

namespace {

template <std::size_t N>
std::array<double, N> parse_numbers(const std::string& text) {
    std::array<double, N> out{};
    std::stringstream ss(text);
    std::string item;
    std::size_t k = 0;
    while (std::getline(ss, item, ',')) {
        if (k >= N) throw DomainError("too many comma-separated values in \"" + text + "\"");
        try {
            std::size_t used = 0;
            out[k++] = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw DomainError("invalid number \"" + item + "\"");
        }
    }
    if (k != N) throw DomainError("expected " + std::to_string(N) + " comma-separated values in \"" + text + "\"");
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Devinatz moment problem on the strip R x [-pi, pi): solvability, canonical solutions, resolvents"};
    app.require_subcommand(1);

    GenConfig gen;
    auto* gen_cmd = app.add_subcommand("gen", "compute the moment table of an atomic measure");
    gen_cmd->add_option("--measure", gen.measure, "measure JSON {\"atoms\": [{x, phi, weight}]}")->required();
    gen_cmd->add_option("--max-power", gen.max_power, "power window M (moments stored up to 2M)")->required();
    gen_cmd->add_option("--max-freq", gen.max_freq, "frequency window N (moments stored up to |n| = 2N)")->required();
    gen_cmd->add_option("-o,--output", gen.output, "output moment-table JSON")->required();

    CheckConfig check;
    auto* check_cmd = app.add_subcommand("check", "test the Gram matrix of a moment table for positivity");
    check_cmd->add_option("moments", check.moments, "moment-table JSON")->required();
    check_cmd->add_option("--tol", check.tol, "relative eigenvalue tolerance")->capture_default_str();
    check_cmd->add_flag("--spectrum", check.spectrum, "include the Gram spectrum");

    SolveConfig solve;
    auto* solve_cmd = app.add_subcommand("solve", "construct canonical solutions");
    solve_cmd->add_option("moments", solve.moments, "moment-table JSON")->required();
    solve_cmd->add_option("-o,--output", solve.output, "solution file (count 1) or directory")->required();
    solve_cmd->add_option("--count", solve.count, "number of family members")->capture_default_str();
    solve_cmd->add_option("--seed", solve.seed, "seed for the commutant parameters")->capture_default_str();
    solve_cmd->add_option("--param", solve.param, "identity | seed:<u64> | file:<path>")->capture_default_str();
    solve_cmd->add_flag("--dump-operators", solve.dump_operators, "also write A, B, J and residuals as JSON");
    solve_cmd->add_option("--tol", solve.tol, "moment verification tolerance")->capture_default_str();
    solve_cmd->add_option("--rank-tol", solve.rank_tol, "relative rank/PSD tolerance")->capture_default_str();
    solve_cmd->add_option("--weight-floor", solve.weight_floor, "drop atoms with w max(1,|x|)^{2M} below this times s00")->capture_default_str();

    VerifyConfig verify;
    auto* verify_cmd = app.add_subcommand("verify", "check a measure against a moment table");
    verify_cmd->add_option("moments", verify.moments, "moment-table JSON")->required();
    verify_cmd->add_option("solution", verify.solution, "measure or solution JSON")->required();
    verify_cmd->add_option("--tol", verify.tol, "relative moment tolerance")->capture_default_str();

    ProbeConfig probe;
    std::string z_text = "0,1";
    std::string indices_text;
    std::string measure_text;
    auto* probe_cmd = app.add_subcommand("probe", "evaluate generalized resolvents");
    probe_cmd->add_option("moments", probe.moments, "moment-table JSON")->required();
    probe_cmd->add_option("--z", z_text, "spectral parameter <re>,<im> (non-real)")->capture_default_str();
    probe_cmd->add_option("--contraction", probe.contraction, "canonical[:seed] | zero | scale:<t> | file:<path>")
        ->capture_default_str();
    probe_cmd->add_option("--indices", indices_text, "m1,m2,n1,n2 for the moment-resolvent identity");
    probe_cmd->add_option("--measure", measure_text, "solution JSON for the moment-resolvent identity");
    probe_cmd->add_option("--tol", probe.tol, "residual tolerance")->capture_default_str();
    probe_cmd->add_option("--rank-tol", probe.rank_tol, "relative rank/PSD tolerance")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    if (gen_cmd->parsed()) return run_gen(gen, out, err);
    if (check_cmd->parsed()) return run_check(check, out, err);
    if (solve_cmd->parsed()) return run_solve(solve, out, err);
    if (verify_cmd->parsed()) return run_verify(verify, out, err);
    return guarded(err, [&] {
        auto z = parse_numbers<2>(z_text);
        probe.z = Complex(z[0], z[1]);
        if (!indices_text.empty()) {
            auto v = parse_numbers<4>(indices_text);
            std::array<int, 4> idx{};
            for (int k = 0; k < 4; ++k) {
                if (v[k] != std::floor(v[k])) throw DomainError("indices must be integers");
                idx[k] = static_cast<int>(v[k]);
            }
            probe.indices = idx;
        }
        if (!measure_text.empty()) probe.measure = measure_text;
        return run_probe(probe, out, err);
    });
}

}  // namespace devinatz::cli
