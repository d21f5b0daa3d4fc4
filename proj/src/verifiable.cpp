#include "lca/verifiable.hpp"

#include <cmath>

namespace lca {

namespace {

void check_attack_capacity(double m_a) {
    if (!(m_a > 1.0))
        throw InfeasibleError("attacker capacity must exceed the honest rate of 1", 1.0);
}

}  // namespace

PowerSchedule PowerSchedule::make(std::vector<double> powers, double capacity) {
    if (powers.empty()) throw std::invalid_argument("schedule needs at least one block");
    if (!(std::isfinite(capacity) && capacity > 0.0))
        throw std::invalid_argument("capacity must be finite and positive");
    for (double m : powers)
        if (!(std::isfinite(m) && m > 0.0 && m <= capacity * (1.0 + 1e-12)))
            throw std::invalid_argument("each power must lie in (0, capacity]");
    PowerSchedule s;
    s.powers = std::move(powers);
    s.capacity = capacity;
    return s;
}

PowerSchedule optimal_power_schedule(MiningPower m_a, int k) {
    check_attack_capacity(m_a.value);
    if (k < 1) throw std::invalid_argument("block count must be positive");
    std::vector<double> powers(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i)
        powers[static_cast<std::size_t>(i - 1)] = std::pow(m_a.value, static_cast<double>(i) / k);
    powers.back() = m_a.value;  // exact at the top of the ramp
    return PowerSchedule::make(std::move(powers), m_a.value);
}

TimeUnit attack_duration(MiningPower m_a, int k) {
    check_attack_capacity(m_a.value);
    if (k < 1) throw std::invalid_argument("block count must be positive");
    return TimeUnit(k * std::pow(m_a.value, -1.0 / k));
}

double deficit_overcome(MiningPower m_a, long long k) {
    check_attack_capacity(m_a.value);
    if (k < 1) throw std::invalid_argument("block count must be positive");
    // -k*expm1(-ln(m)/k) keeps full precision when k is large and the
    // per-block factor is within an ulp of 1.
    return -static_cast<double>(k) * std::expm1(-std::log(m_a.value) / static_cast<double>(k));
}

MiningPower required_power(double a, long long k) {
    if (!(std::isfinite(a) && a > 0.0)) throw std::invalid_argument("deficit must be positive");
    if (k < 1) throw std::invalid_argument("block count must be positive");
    const double kd = static_cast<double>(k);
    if (!(a < kd))
        throw InfeasibleError("erasing a deficit of a blocks in a blocks or fewer needs infinite power", kd);
    return MiningPower(std::pow(kd / (kd - a), kd));
}

MinBlocksResult min_blocks_for_deficit(MiningPower m_a, double a) {
    check_attack_capacity(m_a.value);
    if (!(std::isfinite(a) && a > 0.0)) throw std::invalid_argument("deficit must be positive");
    MinBlocksResult r;
    r.max_overcomable_deficit = std::log(m_a.value);
    if (a >= r.max_overcomable_deficit) return r;  // infeasible

    // Roundoff slack so exact boundaries (erasable deficit equal to a) count
    // as reached.
    const double threshold = a - 1e-12 * std::max(1.0, a);
    const auto reaches = [&](long long k) { return deficit_overcome(m_a, k) >= threshold; };

    long long hi = 1;
    while (!reaches(hi)) {
        if (hi > (1LL << 60)) return r;  // numeric safety net near the ceiling
        hi *= 2;
    }
    long long lo = hi / 2;  // !reaches(lo) && reaches(hi)
    while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        (reaches(mid) ? hi : lo) = mid;
    }
    r.feasible = true;
    r.blocks = hi;
    return r;
}

NaiveTrace naive_attack_trace(MiningPower m_a, double a) {
    check_attack_capacity(m_a.value);
    if (!(std::isfinite(a) && a >= 1.0)) throw std::invalid_argument("deficit must be at least 1");
    NaiveTrace t;
    t.first_interval = (a - 1.0) + 1.0 / m_a.value;
    t.second_difficulty = 1.0 / t.first_interval;
    t.second_interval = t.second_difficulty / m_a.value;
    t.third_difficulty = m_a.value;
    t.terminal_deficit = a - 2.0;
    return t;
}

double schedule_duration(std::span<const double> powers) {
    if (powers.empty()) throw std::invalid_argument("schedule needs at least one block");
    double total = 1.0 / powers[0];
    for (std::size_t i = 1; i < powers.size(); ++i) total += powers[i - 1] / powers[i];
    return total;
}

VerifiablePlan make_verifiable_plan(MiningPower m_a, int k) {
    VerifiablePlan p;
    p.schedule = optimal_power_schedule(m_a, k);
    p.blocks = k;
    p.duration = attack_duration(m_a, k).value;
    p.deficit_overcome = lca::deficit_overcome(m_a, k);
    return p;
}

}  // namespace lca
