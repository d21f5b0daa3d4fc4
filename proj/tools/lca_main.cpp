// Command-line front end: plan computation, simulation, and the regime
// comparison table.
//
// Exit codes: 0 success, 2 usage, 3 analytically infeasible, 4 solver
// failure, 5 validation failure or analytic mismatch.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lca/io.hpp"
#include "lca/sim.hpp"
#include "lca/table.hpp"
#include "lca/unverifiable.hpp"
#include "lca/verifiable.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kInfeasible = 3;
constexpr int kSolverFailure = 4;
constexpr int kValidation = 5;

int map_exception(const std::exception& e) {
    if (dynamic_cast<const lca::ValidationError*>(&e)) return kValidation;
    if (dynamic_cast<const lca::InfeasibleError*>(&e)) return kInfeasible;
    if (dynamic_cast<const lca::SolverError*>(&e)) return kSolverFailure;
    return kUsage;
}

void report_exception(const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (const auto* v = dynamic_cast<const lca::ValidationError*>(&e))
        for (const std::string& s : v->violations) std::cerr << "  violation: " << s << "\n";
    if (const auto* s = dynamic_cast<const lca::SolverError*>(&e))
        std::cerr << "  residual norm: " << s->residual_norm << "\n";
}

std::string read_file_or_stdin(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open plan file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct PlanVerifiableArgs {
    double ma = 0.0;
    int blocks = 0;
    double deficit = 0.0;
    bool has_blocks = false;
    bool has_deficit = false;
};

int run_plan_verifiable(const PlanVerifiableArgs& a) {
    if (a.has_blocks == a.has_deficit) {
        std::cerr << "error: give exactly one of --blocks or --deficit\n";
        return kUsage;
    }
    int k = a.blocks;
    if (a.has_deficit) {
        const lca::MinBlocksResult r =
            lca::min_blocks_for_deficit(lca::MiningPower(a.ma), a.deficit);
        if (!r.feasible) {
            nlohmann::json j{{"infeasible", true},
                             {"capacity", a.ma},
                             {"deficit", a.deficit},
                             {"max_overcomable_deficit", r.max_overcomable_deficit}};
            std::cout << j.dump() << "\n";
            std::cerr << "error: a capacity of " << a.ma
                      << " can never erase a head start of " << a.deficit
                      << " (ceiling ln(ma) = " << r.max_overcomable_deficit << ")\n";
            return kInfeasible;
        }
        k = static_cast<int>(r.blocks);
    }
    std::cout << lca::plan_to_json(lca::make_verifiable_plan(lca::MiningPower(a.ma), k)) << "\n";
    return kOk;
}

struct SimulateArgs {
    double deficit = 0.0;
    double ma = 0.0;
    bool has_ma = false;
    std::string plan_path;
    bool naive = false;
    int blocks = 0;
    bool has_blocks = false;
    std::string regime;
    std::string mode = "idealized";
    std::string height = "continuous";
    std::uint64_t seed = 0;
    bool has_seed = false;
    bool check = false;
    std::string format = "json";
};

int run_simulate(const SimulateArgs& a) {
    lca::AttackScenario sc;
    sc.deficit = a.deficit;
    sc.mode = a.mode == "faithful" ? lca::DifficultyMode::faithful
                                   : lca::DifficultyMode::idealized;
    sc.height_model = a.height == "integer" ? lca::HeightModel::integer_blocks
                                            : lca::HeightModel::continuous;

    const int sources = (!a.plan_path.empty() ? 1 : 0) + (a.naive ? 1 : 0) +
                        (!a.regime.empty() ? 1 : 0);
    if (sources != 1) {
        std::cerr << "error: give exactly one of --plan, --naive, or --regime\n";
        return kUsage;
    }

    if (!a.plan_path.empty()) {
        try {
            sc.plan = lca::plan_from_json(read_file_or_stdin(a.plan_path));
        } catch (const std::exception& e) {
            std::cerr << "error: invalid plan: " << e.what() << "\n";
            return kValidation;
        }
        if (const auto* v = std::get_if<lca::VerifiablePlan>(&sc.plan))
            sc.capacity = v->schedule.capacity;
        else
            sc.capacity = std::get<lca::UnverifiablePlan>(sc.plan).capacity;
        if (a.has_ma && std::abs(sc.capacity - a.ma) > 1e-12 * std::max(1.0, a.ma)) {
            std::cerr << "error: --ma disagrees with the plan's capacity\n";
            return kUsage;
        }
    } else if (a.naive) {
        if (!a.has_ma || !a.has_blocks) {
            std::cerr << "error: --naive needs --ma and --blocks\n";
            return kUsage;
        }
        sc.capacity = a.ma;
        sc.plan = lca::NaivePlan{a.blocks};
    } else {
        if (!a.has_ma || !a.has_blocks) {
            std::cerr << "error: --regime needs --ma and --blocks\n";
            return kUsage;
        }
        sc.capacity = a.ma;
        if (a.regime == "verifiable") {
            sc.plan = lca::make_verifiable_plan(lca::MiningPower(a.ma), a.blocks);
        } else if (a.regime == "unverifiable") {
            lca::SolveOptions opt;
            if (a.has_seed) {
                opt.seed = a.seed;
                opt.random_init = true;
            }
            sc.plan = lca::make_unverifiable_plan(lca::MiningPower(a.ma), a.blocks, opt);
        } else {
            std::cerr << "error: --regime must be verifiable or unverifiable\n";
            return kUsage;
        }
    }

    const lca::AttackOutcome outcome = lca::simulate(sc);
    if (a.check) {
        const lca::ComparisonReport rep = lca::verify_against_analytic(outcome, sc);
        if (!rep.ok) {
            std::cerr << "error: simulated outcome diverges from the closed form\n";
            std::cerr << "  duration expected " << lca::format_double(rep.duration_expected)
                      << " simulated " << lca::format_double(rep.duration_simulated)
                      << " (rel err " << rep.duration_rel_error << ")\n";
            for (const lca::ComparisonRow& r : rep.difficulty_mismatches)
                std::cerr << "  difficulty at height " << r.height << ": expected "
                          << lca::format_double(r.expected) << " simulated "
                          << lca::format_double(r.simulated) << "\n";
            return kValidation;
        }
    }
    std::cout << (a.format == "csv" ? lca::outcome_to_csv(outcome, sc)
                                    : lca::outcome_to_json(outcome, sc) + "\n");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"longest-chain attack planning and simulation under per-block retargeting"};
    app.require_subcommand(1);

    PlanVerifiableArgs pv;
    auto* plan_v = app.add_subcommand(
        "plan-verifiable", "optimal power ramp for a k-block attack with honest timestamps");
    plan_v->add_option("--ma", pv.ma, "attacker capacity (honest network = 1)")->required();
    auto* pv_blocks = plan_v->add_option("--blocks", pv.blocks, "blocks to mine");
    auto* pv_deficit =
        plan_v->add_option("--deficit", pv.deficit, "head start to erase (picks the smallest k)");

    double pu_ma = 0.0;
    int pu_blocks = 0;
    std::uint64_t pu_seed = 0;
    auto* plan_u = app.add_subcommand(
        "plan-unverifiable", "optimal claimed inter-block times for an n-block attack");
    plan_u->add_option("--ma", pu_ma, "attacker capacity (honest network = 1)")->required();
    plan_u->add_option("--blocks", pu_blocks, "blocks to mine (n >= 2)")->required();
    auto* pu_seed_opt =
        plan_u->add_option("--seed", pu_seed, "random solver start (default: uniform start)");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "run a plan against the honest chain");
    simulate->add_option("--deficit", sim.deficit, "honest head start in blocks")->required();
    auto* sim_ma = simulate->add_option("--ma", sim.ma, "attacker capacity");
    simulate->add_option("--plan", sim.plan_path, "plan JSON file ('-' for stdin)");
    simulate->add_flag("--naive", sim.naive, "flat full-power plan (needs --ma and --blocks)");
    auto* sim_blocks = simulate->add_option("--blocks", sim.blocks, "blocks to mine");
    simulate->add_option("--regime", sim.regime,
                         "compute the optimal plan inline: verifiable|unverifiable");
    simulate->add_option("--mode", sim.mode, "retarget mode: idealized|faithful")
        ->check(CLI::IsMember({"idealized", "faithful"}));
    simulate->add_option("--height", sim.height, "honest height model: continuous|integer")
        ->check(CLI::IsMember({"continuous", "integer"}));
    auto* sim_seed = simulate->add_option("--seed", sim.seed, "random solver start");
    simulate->add_flag("--check", sim.check, "verify the outcome against the closed forms");
    simulate->add_option("--format", sim.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    bool table_display = false;
    std::uint64_t table_seed = 0;
    auto* table = app.add_subcommand("table", "duration and erasable head start, both regimes, "
                                              "ma in {3,99}, n in {3,5,10,20,100}");
    table->add_flag("--display", table_display, "round to 2 decimals instead of full precision");
    auto* table_seed_opt =
        table->add_option("--seed", table_seed, "random solver start (default: uniform start)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (plan_v->parsed()) {
            pv.has_blocks = pv_blocks->count() > 0;
            pv.has_deficit = pv_deficit->count() > 0;
            return run_plan_verifiable(pv);
        }
        if (plan_u->parsed()) {
            lca::SolveOptions opt;
            if (pu_seed_opt->count() > 0) {
                opt.seed = pu_seed;
                opt.random_init = true;
            }
            std::cout << lca::plan_to_json(
                             lca::make_unverifiable_plan(lca::MiningPower(pu_ma), pu_blocks, opt))
                      << "\n";
            return kOk;
        }
        if (simulate->parsed()) {
            sim.has_ma = sim_ma->count() > 0;
            sim.has_blocks = sim_blocks->count() > 0;
            sim.has_seed = sim_seed->count() > 0;
            return run_simulate(sim);
        }
        if (table->parsed()) {
            lca::SolveOptions opt;
            if (table_seed_opt->count() > 0) {
                opt.seed = table_seed;
                opt.random_init = true;
            }
            std::cout << lca::comparison_table_csv(table_display, opt);
            return kOk;
        }
    } catch (const std::exception& e) {
        report_exception(e);
        return map_exception(e);
    }
    return kUsage;
}
