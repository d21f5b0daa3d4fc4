#pragma once

#include <span>
#include <vector>

#include "lca/chain.hpp"

// Closed-form attack planning under verifiable timestamps.  The attacker can
// only choose how much power to dedicate per block; the geometric ramp
// M_i = M_a^(i/k) minimizes the time to mine k blocks, and
// k * (1 - M_a^(-1/k)) is the head start it can erase.

namespace lca {

/// Thrown when the requested attack is analytically impossible.  `bound` is
/// the quantity that limits it (e.g. the largest deficit this capacity can
/// ever erase, or the smallest capacity that could work).
struct InfeasibleError : std::runtime_error {
    InfeasibleError(const std::string& msg, double bound_) : std::runtime_error(msg), bound(bound_) {}
    double bound;
};

struct PowerSchedule {
    std::vector<double> powers;  // per-block power, each in (0, capacity]
    double capacity = 0.0;

    static PowerSchedule make(std::vector<double> powers, double capacity);
};

struct VerifiablePlan {
    PowerSchedule schedule;
    int blocks = 0;
    double duration = 0.0;          // total mining time of the schedule
    double deficit_overcome = 0.0;  // blocks - duration
};

/// Geometric power ramp [M_a^(1/k), ..., M_a].  Requires m_a > 1.
PowerSchedule optimal_power_schedule(MiningPower m_a, int k);

/// Time the optimal ramp needs for k blocks: k * m_a^(-1/k).
TimeUnit attack_duration(MiningPower m_a, int k);

/// Head start erased by the optimal k-block ramp: k * (1 - m_a^(-1/k)).
/// Strictly increasing in k with supremum ln(m_a).
double deficit_overcome(MiningPower m_a, long long k);

/// Capacity needed to erase deficit a in exactly k blocks: (k/(k-a))^k.
/// Requires 0 < a < k; erasing a in a blocks or fewer needs infinite power.
MiningPower required_power(double a, long long k);

struct MinBlocksResult {
    bool feasible = false;
    long long blocks = 0;               // smallest k, when feasible
    double max_overcomable_deficit = 0;  // ln(m_a), the hard ceiling
};

/// Smallest k with deficit_overcome(m_a, k) >= a, or infeasible when
/// a >= ln(m_a).  Infeasibility is an ordinary result, not an error.
MinBlocksResult min_blocks_for_deficit(MiningPower m_a, double a);

/// Flat-power attack from deficit a: after two cheap blocks the retarget
/// pins the attacker to one block per unit, leaving a perpetual gap of a-2.
struct NaiveTrace {
    double first_interval;     // (a-1) + 1/m_a
    double second_difficulty;  // m_a / (1 + m_a (a-1))
    double second_interval;    // 1 / (1 + m_a (a-1))
    double third_difficulty;   // m_a, and every block after
    double terminal_rate = 1.0;
    double terminal_deficit;   // a - 2
};

NaiveTrace naive_attack_trace(MiningPower m_a, double a);

/// Mining time of an arbitrary feasible schedule with the retarget applied to
/// actual durations: 1/M_1 + M_1/M_2 + ... + M_{k-1}/M_k.
double schedule_duration(std::span<const double> powers);

VerifiablePlan make_verifiable_plan(MiningPower m_a, int k);

}  // namespace lca
