// tightspan command line: instance generation, the two solvers, the exact
// oracle, assignment verification, and batch benchmarking.
//
// Exit codes: 0 ok, 1 internal error, 2 bound/invariant violation,
// 3 parse or usage error, 4 infeasible as requested.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tightspan/tightspan.hpp"

namespace {

using namespace tightspan;

constexpr int kOk = 0;
constexpr int kInternalError = 1;
constexpr int kViolation = 2;
constexpr int kParseError = 3;
constexpr int kInfeasible = 4;

Instance load_instance(const std::string& path) {
    return parse_instance(read_file(path));
}

void print_report(const SolveReport& report, bool as_json) {
    if (as_json) {
        std::cout << report_json(report).dump(2) << '\n';
        return;
    }
    auto line = [](const std::string& key, const std::string& value) {
        std::cout << "  " << key << ": " << value << '\n';
    };
    std::cout << report.mode << " solve of " << report.instance_id << '\n';
    line("machines", std::to_string(report.m));
    line("jobs", std::to_string(report.n));
    if (report.threshold) line("T", std::to_string(*report.threshold));
    if (report.avg_load) line("L", report.avg_load->str() + " (" + std::to_string(report.avg_load->to_double()) + ")");
    if (report.epsilon) line("epsilon", report.epsilon->str());
    if (report.q) line("q", report.q->str());
    if (report.result_makespan) line("makespan", std::to_string(*report.result_makespan));
    if (report.certified_bound)
        line("certified bound",
             report.certified_bound->str() + " (" + std::to_string(report.certified_bound->to_double()) + ")");
    if (report.bound_kind) line("bound kind", bound_kind_name(*report.bound_kind));
    if (report.ratio_vs_opt) line("ratio vs opt", report.ratio_vs_opt->str());
    if (report.beats_33_17) line("beats 33/17", *report.beats_33_17 ? "yes" : "no");
    if (report.moves) line("moves", std::to_string(report.moves));
    if (report.pivots) line("pivots", std::to_string(report.pivots));
    if (report.nodes) line("nodes", std::to_string(report.nodes));
    line("wall ms", std::to_string(report.wall_ms));
    if (!report.error.empty()) line("error", report.error);
}

int run_gen(const GeneratorSpec& spec, const std::string& out) {
    Instance inst = generate(spec);
    write_file(out, write_instance(inst) + "\n");
    std::cout << "wrote " << out << " (m=" << spec.m << " n=" << spec.n << " k=" << spec.k
              << " pmax=" << spec.p_max << " seed=" << spec.seed
              << (spec.restricted ? " restricted" : "") << ")\n";
    return kOk;
}

int run_solve_general(const std::string& path, std::optional<Time> threshold, const std::string& avg_text,
                      bool auto_mode, bool as_json, const std::string& save_assignment) {
    Instance inst = load_instance(path);
    detail::Stopwatch watch;
    Time t = 0;
    Rational avg;
    GeneralSolveResult res;
    if (threshold && !avg_text.empty()) {
        t = *threshold;
        avg = Rational::parse(avg_text);
        res = solve_general(inst, t, avg);
    } else if (auto_mode || (!threshold && avg_text.empty())) {
        AutoDriveResult drive = auto_drive_general(inst);
        t = drive.threshold;
        avg = drive.avg_target;
        res = drive.solve;
    } else {
        std::cerr << "error: supply both --T and --L, or neither (auto mode)\n";
        return kParseError;
    }
    SolveReport report = report_general(path, inst, t, avg, res, watch.ms());
    print_report(report, as_json);
    if (!res.feasible) {
        if (!as_json)
            std::cout << "no schedule with makespan " << t << " and average load " << avg.str()
                      << " exists (relaxation residual " << res.infeasibility << ")\n";
        return kInfeasible;
    }
    if (!save_assignment.empty()) write_file(save_assignment, write_assignment(res.assignment) + "\n");
    return report.bound_violated() ? kViolation : kOk;
}

int run_solve_restricted(const std::string& path, const std::string& strategy, bool as_json,
                         const std::string& save_assignment) {
    Instance inst = load_instance(path);
    if (!inst.restricted()) {
        std::cerr << "error: " << path << " is not a restricted instance\n";
        return kParseError;
    }
    RestrictedStrategy strat =
        strategy == "path-push" ? RestrictedStrategy::kPathPush : RestrictedStrategy::kDescent;
    detail::Stopwatch watch;
    RestrictedSolveResult res = solve_restricted(inst, strat);
    SolveReport report = report_restricted(path, inst, res, watch.ms());
    print_report(report, as_json);
    if (!save_assignment.empty()) write_file(save_assignment, write_assignment(res.assignment) + "\n");
    return report.bound_violated() ? kViolation : kOk;
}

int run_oracle(const std::string& path, std::optional<Time> threshold, const std::string& avg_text,
               int max_jobs, int max_machines) {
    Instance inst = load_instance(path);
    OracleLimits limits{max_jobs, max_machines};
    if (threshold) {
        Rational avg = avg_text.empty() ? Rational(*threshold) : Rational::parse(avg_text);
        long nodes = 0;
        bool exists = schedule_exists(inst, *threshold, avg, limits, &nodes);
        std::cout << "schedule with makespan <= " << *threshold << " and average load <= " << avg.str()
                  << (exists ? " EXISTS" : " DOES NOT EXIST") << " (" << nodes << " nodes)\n";
        return exists ? kOk : kInfeasible;
    }
    detail::Stopwatch watch;
    OracleResult res = optimal_makespan(inst, limits);
    SolveReport report = report_oracle(path, inst, res, watch.ms());
    print_report(report, false);
    return kOk;
}

int run_check(const std::string& instance_path, const std::string& assignment_path,
              std::optional<Time> threshold, const std::string& avg_text) {
    Instance inst = load_instance(instance_path);
    Assignment a = parse_assignment(read_file(assignment_path), inst);
    int violations = 0;
    auto verdict = [&](bool ok, const std::string& name, const std::string& detail) {
        std::cout << (ok ? "[ok]        " : "[VIOLATION] ") << name;
        if (!detail.empty()) std::cout << ": " << detail;
        std::cout << '\n';
        if (!ok) ++violations;
    };

    bool valid = assignment_valid(inst, a);
    verdict(valid, "assignment is total and feasible", "");
    if (!valid) return kViolation;

    Time ms = makespan(inst, a);
    std::cout << "  makespan " << ms << ", average load " << average_load(inst, a).str() << '\n';

    if (threshold) {
        Time t = *threshold;
        verdict(max_residual_load(inst, a) <= t, "load minus largest job <= T on every machine", "");
        if (!avg_text.empty()) {
            Rational avg = Rational::parse(avg_text);
            Rational eps = feasibility_factor(inst, t);
            Rational both = std::min(Rational(t) + avg / eps, Rational(2 * t));
            verdict(Rational(ms) <= both, "makespan within min{T + L/eps, 2T}",
                    "bound " + both.str() + ", epsilon " + eps.str());
            if (eps * Rational(t) > avg && !eps.is_zero()) {
                Rational gamma = eps.reciprocal();
                MachineClassification cls = classify(inst, a, t, avg, gamma);
                TransferGraph g = build_transfer_graph(inst, a, cls, t);
                verdict(check_hall(g).ok, "overloaded machines can shed their largest jobs",
                        std::to_string(cls.bad.size()) + " overloaded, " + std::to_string(cls.good.size()) +
                            " lightly loaded");
                bool preconditions = ms <= 2 * t && average_load(inst, a) <= avg;
                CountAudit audit = audit_counts(cls, t, avg, gamma, inst.machines());
                if (preconditions) {
                    verdict(audit.bad_count_ok, "overloaded-count bound |bad|*(gamma+1) < m", "");
                    verdict(audit.good_count_ge, "lightly-loaded-count bound",
                            audit.good_count_equality ? "holds with equality" : "");
                } else {
                    std::cout << "  (count bounds not applicable: makespan or average load beyond targets)\n";
                }
            }
        }
    }

    if (inst.restricted() && inst.jobs() > 0) {
        RestrictedProfile prof = restricted_profile(inst);
        RestrictedPartition part = partition_machines(inst, a, prof.p_max, prof.delta);
        std::cout << "  partition at w=" << prof.p_max << ", delta=" << prof.delta.str() << ": "
                  << part.m_plus.size() << " overloaded, " << part.m_zero.size() << " middle, "
                  << part.m_minus.size() << " underloaded\n";
        verdict(part.m_plus.empty(), "no machine above w + delta", "");
        verdict(ms * prof.k_min <= prof.p_max * prof.k_min + prof.total,
                "makespan within p_max + L/eps", "");
    }

    return violations == 0 ? kOk : kViolation;
}

int run_bench(const std::string& dir, const std::string& modes_text, const std::string& out,
              int max_jobs, int max_machines, bool quiet) {
    std::vector<std::string> modes;
    std::string token;
    std::istringstream in(modes_text);
    while (std::getline(in, token, ','))
        if (!token.empty()) modes.push_back(token);
    if (modes.empty()) {
        std::cerr << "error: --modes must name at least one of general,restricted,oracle\n";
        return kParseError;
    }

    std::vector<std::string> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());

    std::vector<std::pair<std::string, Instance>> instances;
    std::vector<SolveReport> parse_failures;
    for (const std::string& path : paths) {
        try {
            instances.emplace_back(path, load_instance(path));
        } catch (const ParseError& e) {
            SolveReport row;
            row.instance_id = path;
            row.mode = "parse";
            row.error = e.what();
            parse_failures.push_back(std::move(row));
        }
    }

    BenchOptions options;
    options.modes = modes;
    options.oracle_limits = OracleLimits{max_jobs, max_machines};
    options.stream = quiet ? nullptr : &std::cout;
    BenchResult result = bench(instances, options);
    result.rows.insert(result.rows.end(), parse_failures.begin(), parse_failures.end());

    std::ofstream csv(out);
    if (!csv) throw Error("cannot write " + out);
    write_csv(csv, result);
    std::cerr << "bench: " << result.rows.size() << " rows, " << result.bound_violations
              << " bound violations";
    if (result.max_ratio) std::cerr << ", max ratio " << result.max_ratio->str();
    std::cerr << " -> " << out << '\n';
    return result.bound_violations == 0 ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"makespan minimization on unrelated machines with certified bounds"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a seeded instance file");
    GeneratorSpec spec;
    spec.seed = default_seed();
    std::string gen_out;
    gen->add_option("--m", spec.m, "machine count")->required();
    gen->add_option("--n", spec.n, "job count")->required();
    gen->add_option("--k", spec.k, "feasible machines per job")->required();
    gen->add_option("--pmax", spec.p_max, "largest processing time")->required();
    gen->add_option("--seed", spec.seed, "rng seed (default: TIGHTSPAN_SEED or 1)");
    gen->add_flag("--restricted", spec.restricted, "one size per job across its feasible set");
    gen->add_option("--out", gen_out, "output instance file")->required();

    // solve general | restricted
    auto* solve = app.add_subcommand("solve", "run a solver on an instance");
    solve->require_subcommand(1);
    auto* general = solve->add_subcommand("general", "relaxation rounding plus rebalancing");
    std::string instance_path, avg_text, save_assignment;
    std::optional<Time> threshold;
    bool auto_mode = false, as_json = false;
    general->add_option("--instance", instance_path, "instance file")->required();
    general->add_option("--T", threshold, "makespan target");
    general->add_option("--L", avg_text, "average load target, n or n/d");
    general->add_flag("--auto", auto_mode, "choose minimal T and optimal L (default when T,L absent)");
    general->add_flag("--json", as_json, "emit the report as JSON");
    general->add_option("--save-assignment", save_assignment, "write the schedule to this file");

    auto* restricted = solve->add_subcommand("restricted", "combinatorial balancer");
    std::string restricted_path, strategy = "descent", restricted_save;
    bool restricted_json = false;
    restricted->add_option("--instance", restricted_path, "instance file")->required();
    restricted->add_option("--strategy", strategy, "descent | path-push")
        ->check(CLI::IsMember({"descent", "path-push"}));
    restricted->add_flag("--json", restricted_json, "emit the report as JSON");
    restricted->add_option("--save-assignment", restricted_save, "write the schedule to this file");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact optimum or (T, L) feasibility");
    std::string oracle_path, oracle_avg;
    std::optional<Time> oracle_threshold;
    int max_jobs = 12, max_machines = 4;
    oracle->add_option("--instance", oracle_path, "instance file")->required();
    oracle->add_option("--T", oracle_threshold, "makespan to test");
    oracle->add_option("--L", oracle_avg, "average load to test, n or n/d");
    oracle->add_option("--max-n", max_jobs, "job-count limit");
    oracle->add_option("--max-m", max_machines, "machine-count limit");

    // check
    auto* check = app.add_subcommand("check", "re-verify an assignment against an instance");
    std::string check_instance, check_assignment, check_avg;
    std::optional<Time> check_threshold;
    check->add_option("--instance", check_instance, "instance file")->required();
    check->add_option("--assignment", check_assignment, "assignment file")->required();
    check->add_option("--T", check_threshold, "makespan target the schedule claims");
    check->add_option("--L", check_avg, "average load target, n or n/d");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "run modes over a directory of instances");
    std::string bench_dir, bench_modes = "general", bench_out;
    int bench_max_jobs = 12, bench_max_machines = 4;
    bool bench_quiet = false;
    bench_cmd->add_option("--dir", bench_dir, "directory of .json instances")->required();
    bench_cmd->add_option("--modes", bench_modes, "comma-separated: general,restricted,oracle");
    bench_cmd->add_option("--out", bench_out, "CSV output path")->required();
    bench_cmd->add_option("--max-n", bench_max_jobs, "oracle job-count limit");
    bench_cmd->add_option("--max-m", bench_max_machines, "oracle machine-count limit");
    bench_cmd->add_flag("--quiet", bench_quiet, "suppress the JSON-lines stream on stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_gen(spec, gen_out);
        if (solve->parsed() && general->parsed())
            return run_solve_general(instance_path, threshold, avg_text, auto_mode, as_json, save_assignment);
        if (solve->parsed() && restricted->parsed())
            return run_solve_restricted(restricted_path, strategy, restricted_json, restricted_save);
        if (oracle->parsed()) return run_oracle(oracle_path, oracle_threshold, oracle_avg, max_jobs, max_machines);
        if (check->parsed()) return run_check(check_instance, check_assignment, check_threshold, check_avg);
        if (bench_cmd->parsed())
            return run_bench(bench_dir, bench_modes, bench_out, bench_max_jobs, bench_max_machines, bench_quiet);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParseError;
    } catch (const LimitExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const MatchingFailure& e) {
        std::cerr << "hard error (this contradicts the matching guarantee): " << e.what() << '\n';
        return kInternalError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternalError;
    }
    return kInternalError;
}
