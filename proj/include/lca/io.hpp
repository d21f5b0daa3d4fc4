#pragma once

#include <string>

#include "lca/sim.hpp"

// Serialization.  Decimal output carries 17 significant digits so every
// double round-trips exactly, in both the line-record format and JSON.

namespace lca {

/// One block per line: height, reported_timestamp, difficulty,
/// actual_found_time, space-separated.
std::string chain_to_records(const Chain& chain);
Chain chain_from_records(const std::string& text);

std::string chain_to_json(const Chain& chain);
Chain chain_from_json(const std::string& text);

std::string plan_to_json(const VerifiablePlan& plan);
std::string plan_to_json(const UnverifiablePlan& plan);

/// Accepts either plan form, keyed on "powers" vs "claimed_intervals".
AttackPlan plan_from_json(const std::string& text);

std::string outcome_to_json(const AttackOutcome& outcome, const AttackScenario& scenario);

/// Header plus one summary row.
std::string outcome_to_csv(const AttackOutcome& outcome, const AttackScenario& scenario);

/// %.17g rendering used across all text output.
std::string format_double(double v);

}  // namespace lca
