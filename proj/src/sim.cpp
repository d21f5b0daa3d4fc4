#include "lca/sim.hpp"

#include <cmath>

namespace lca {

namespace {

struct MiningStep {
    double difficulty;
    double power;
    double duration;
    double claimed_interval;  // feeds the next retarget
};

// Pure-duration plans (ramp / flat power): difficulty 1 on the first block,
// then d_{i+1} = d_i / claim_i.  The first claim carries the idle gap in
// faithful mode.
std::vector<MiningStep> run_power_plan(std::span<const double> powers, double deficit,
                                       DifficultyMode mode) {
    std::vector<MiningStep> steps;
    steps.reserve(powers.size());
    double difficulty = 1.0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        MiningStep s{};
        s.difficulty = difficulty;
        s.power = powers[i];
        s.duration = difficulty / powers[i];
        s.claimed_interval = (i == 0 && mode == DifficultyMode::faithful)
                                 ? (deficit - 1.0) + s.duration
                                 : s.duration;
        if (!(s.claimed_interval > 0.0))
            throw std::invalid_argument(
                "faithful mode needs a deficit of at least 1 (non-positive first interval)");
        difficulty /= s.claimed_interval;
        steps.push_back(s);
    }
    return steps;
}

std::vector<MiningStep> run_report_plan(const UnverifiablePlan& plan) {
    std::vector<MiningStep> steps;
    const auto& claims = plan.schedule.claimed_intervals;
    steps.reserve(claims.size() + 1);
    double difficulty = 1.0;
    for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(plan.schedule.n_blocks); ++i) {
        MiningStep s{};
        s.difficulty = difficulty;
        s.power = plan.capacity;
        s.duration = difficulty / plan.capacity;
        s.claimed_interval = claims[i];
        difficulty /= s.claimed_interval;
        steps.push_back(s);
    }
    MiningStep last{};
    last.difficulty = difficulty;
    last.power = plan.capacity;
    last.duration = difficulty / plan.capacity;
    last.claimed_interval = plan.schedule.terminal_claim;
    steps.push_back(last);
    return steps;
}

TimestampRegime default_regime(const AttackPlan& plan) {
    if (const auto* u = std::get_if<UnverifiablePlan>(&plan))
        return UnverifiableRegime{static_cast<double>(u->schedule.n_blocks), 1.0};
    return VerifiableRegime{};
}

}  // namespace

AttackOutcome simulate(const AttackScenario& scenario) {
    if (!(std::isfinite(scenario.capacity) && scenario.capacity > 1.0))
        throw std::invalid_argument("attacker capacity must exceed the honest rate of 1");
    if (!(std::isfinite(scenario.deficit) && scenario.deficit > 0.0))
        throw std::invalid_argument("deficit must be positive");

    std::vector<MiningStep> steps;
    if (const auto* v = std::get_if<VerifiablePlan>(&scenario.plan)) {
        if (std::abs(v->schedule.capacity - scenario.capacity) >
            1e-12 * std::max(1.0, scenario.capacity))
            throw std::invalid_argument("plan capacity disagrees with the scenario capacity");
        steps = run_power_plan(v->schedule.powers, scenario.deficit, scenario.mode);
    } else if (const auto* nv = std::get_if<NaivePlan>(&scenario.plan)) {
        if (nv->n_blocks < 1) throw std::invalid_argument("naive plan needs at least one block");
        const std::vector<double> powers(static_cast<std::size_t>(nv->n_blocks),
                                         scenario.capacity);
        steps = run_power_plan(powers, scenario.deficit, scenario.mode);
    } else {
        const auto& u = std::get<UnverifiablePlan>(scenario.plan);
        if (std::abs(u.capacity - scenario.capacity) > 1e-12 * std::max(1.0, scenario.capacity))
            throw std::invalid_argument("plan capacity disagrees with the scenario capacity");
        steps = run_report_plan(u);
    }

    AttackOutcome out;
    // Reported stamps accumulate the claims from the fork-point stamp 1.  The
    // found-time clock is the real one except for idealized power plans,
    // where the trace lives on the gap-excised clock (stamps equal parent
    // discoveries there, so the emitted chain stays regime-consistent).
    const bool report_plan = std::holds_alternative<UnverifiablePlan>(scenario.plan);
    const double found_clock_start =
        (!report_plan && scenario.mode == DifficultyMode::idealized) ? 1.0 : scenario.deficit;

    double stamp = 1.0;
    double mined = 0.0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const MiningStep& s = steps[i];
        mined += s.duration;
        out.adversary_chain.append(stamp, found_clock_start + mined, s.difficulty);
        stamp += s.claimed_interval;
        out.trace.push_back(BlockTraceRow{s.difficulty, s.power, s.duration, s.claimed_interval});
    }
    // Claim accumulation shifts every stamp one block late relative to the
    // trace on purpose: a stamp must be fixed before its block is mined.

    out.total_duration = mined;
    out.reveal_time = scenario.deficit + mined;
    out.honest_height_continuous = out.reveal_time;
    out.honest_height_at_reveal = static_cast<long long>(std::floor(out.reveal_time));
    out.adversary_height = out.adversary_chain.height();

    const double honest = scenario.height_model == HeightModel::continuous
                              ? out.honest_height_continuous
                              : static_cast<double>(out.honest_height_at_reveal);
    out.success = static_cast<double>(out.adversary_height) > honest;

    const TimestampRegime regime =
        scenario.regime ? *scenario.regime : default_regime(scenario.plan);
    const Verdict verdict = validate_chain(out.adversary_chain, regime);
    if (!verdict.ok())
        throw ValidationError("plan violates its timestamp regime", verdict.violations);
    return out;
}

ComparisonReport verify_against_analytic(const AttackOutcome& outcome,
                                         const AttackScenario& scenario) {
    std::vector<double> expected_difficulties;
    double expected_duration = 0.0;

    if (const auto* v = std::get_if<VerifiablePlan>(&scenario.plan)) {
        if (scenario.mode != DifficultyMode::idealized)
            throw std::invalid_argument("ramp plans have closed forms in idealized mode only");
        const int k = v->blocks;
        for (int i = 1; i <= k; ++i)
            expected_difficulties.push_back(
                std::pow(scenario.capacity, static_cast<double>(i - 1) / k));
        expected_duration = attack_duration(MiningPower(scenario.capacity), k).value;
    } else if (std::get_if<NaivePlan>(&scenario.plan)) {
        const std::size_t n = outcome.trace.size();
        const NaiveTrace t = naive_attack_trace(MiningPower(scenario.capacity), scenario.deficit);
        expected_duration = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = 0.0;
            if (i == 0)
                d = 1.0;
            else if (i == 1)
                d = scenario.mode == DifficultyMode::faithful ? t.second_difficulty
                                                              : scenario.capacity;
            else
                d = scenario.capacity;
            expected_difficulties.push_back(d);
            expected_duration += d / scenario.capacity;
        }
    } else {
        const auto& u = std::get<UnverifiablePlan>(scenario.plan);
        double running = 1.0;
        expected_difficulties.push_back(1.0);
        for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(u.schedule.n_blocks); ++i) {
            running /= u.schedule.claimed_intervals[i];
            expected_difficulties.push_back(running);
        }
        expected_duration =
            unverifiable_objective(u.schedule, MiningPower(scenario.capacity)).value;
    }

    ComparisonReport rep;
    rep.duration_expected = expected_duration;
    rep.duration_simulated = outcome.total_duration;
    rep.duration_rel_error = std::abs(outcome.total_duration - expected_duration) /
                             std::max(std::abs(expected_duration), 1e-300);

    constexpr double kRelTol = 1e-9;
    const std::size_t n = std::min(expected_difficulties.size(), outcome.trace.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double e = expected_difficulties[i];
        const double s = outcome.trace[i].difficulty;
        if (std::abs(s - e) > kRelTol * std::max(std::abs(e), std::abs(s))) {
            if (rep.first_divergent_height < 0)
                rep.first_divergent_height = static_cast<long long>(i) + 1;
            rep.difficulty_mismatches.push_back(
                ComparisonRow{static_cast<long long>(i) + 1, e, s});
        }
    }
    if (expected_difficulties.size() != outcome.trace.size() &&
        rep.first_divergent_height < 0)
        rep.first_divergent_height = static_cast<long long>(n) + 1;

    rep.ok = rep.duration_rel_error <= kRelTol && rep.difficulty_mismatches.empty() &&
             expected_difficulties.size() == outcome.trace.size();
    return rep;
}

}  // namespace lca
