#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "lca/chain.hpp"
#include "lca/unverifiable.hpp"
#include "lca/verifiable.hpp"

// Deterministic execution of an attack plan against the honest chain, which
// grows one block per time unit.  The attack starts when the honest chain is
// `deficit` blocks ahead; the attacker mines its planned blocks back to back
// and reveals as soon as the last nonce is found.

namespace lca {

/// Flat-power plan: every block mined at full capacity.
struct NaivePlan {
    int n_blocks = 0;
};

using AttackPlan = std::variant<VerifiablePlan, UnverifiablePlan, NaivePlan>;

/// How the retarget treats the attacker's first block.  `faithful` feeds the
/// real gap between the fork-point stamp and the first discovery into the
/// rule (the attacker inherits a one-off easy retarget from its idle start);
/// `idealized` starts the clock at the fork-point stamp so every interval is
/// a pure mining duration.  Claimed-interval plans drive the retarget with
/// their claims either way.
enum class DifficultyMode { idealized, faithful };

/// Honest height used in reporting: the block count floor(t), or the fluid
/// approximation t itself.  The race verdict is the same under both.
enum class HeightModel { continuous, integer_blocks };

struct AttackScenario {
    double deficit = 0.0;   // honest head start, in blocks; attack starts at this time
    double capacity = 0.0;  // attacker capacity M_a > 1
    AttackPlan plan;
    DifficultyMode mode = DifficultyMode::idealized;
    HeightModel height_model = HeightModel::continuous;
    std::optional<TimestampRegime> regime;  // defaults derived from the plan
};

/// Raised when the chain a plan produces violates its timestamp regime.
struct ValidationError : std::runtime_error {
    ValidationError(const std::string& msg, std::vector<std::string> violations_)
        : std::runtime_error(msg), violations(std::move(violations_)) {}
    std::vector<std::string> violations;
};

struct BlockTraceRow {
    double difficulty = 0.0;
    double power_applied = 0.0;
    double actual_duration = 0.0;
    double reported_interval = 0.0;  // the claim that retargets the next block
};

struct AttackOutcome {
    Chain adversary_chain = Chain::genesis();
    double total_duration = 0.0;         // sum of real mining times
    double reveal_time = 0.0;            // attack start + total_duration
    long long honest_height_at_reveal = 0;
    double honest_height_continuous = 0.0;
    long long adversary_height = 0;
    bool success = false;  // strictly taller than the honest chain at reveal
    std::vector<BlockTraceRow> trace;
};

AttackOutcome simulate(const AttackScenario& scenario);

/// Per-block diff of a simulated outcome against the closed-form predictions
/// for the scenario's plan.  Supports idealized optimal-ramp outcomes,
/// claimed-interval outcomes (either mode), and flat-power outcomes.
struct ComparisonRow {
    long long height = 0;
    double expected = 0.0;
    double simulated = 0.0;
};

struct ComparisonReport {
    bool ok = false;
    double duration_expected = 0.0;
    double duration_simulated = 0.0;
    double duration_rel_error = 0.0;
    long long first_divergent_height = -1;
    std::vector<ComparisonRow> difficulty_mismatches;
};

ComparisonReport verify_against_analytic(const AttackOutcome& outcome,
                                         const AttackScenario& scenario);

}  // namespace lca
