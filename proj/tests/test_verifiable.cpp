#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lca/verifiable.hpp"

using namespace lca;

TEST_CASE("optimal schedule is the geometric ramp") {
    const PowerSchedule s = optimal_power_schedule(MiningPower(16), 4);
    REQUIRE(s.powers.size() == 4);
    CHECK(s.powers[0] == 2.0);
    CHECK(s.powers[1] == 4.0);
    CHECK(s.powers[2] == 8.0);
    CHECK(s.powers[3] == 16.0);

    const PowerSchedule one = optimal_power_schedule(MiningPower(3), 1);
    REQUIRE(one.powers.size() == 1);
    CHECK(one.powers[0] == 3.0);

    const PowerSchedule s27 = optimal_power_schedule(MiningPower(27), 3);
    CHECK(s27.powers[0] == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(s27.powers[1] == doctest::Approx(9.0).epsilon(1e-13));
    CHECK(s27.powers[2] == 27.0);

    CHECK_THROWS_AS(optimal_power_schedule(MiningPower(1.0), 3), InfeasibleError);
    CHECK_THROWS_AS(optimal_power_schedule(MiningPower(0.8), 3), InfeasibleError);
    CHECK_THROWS_AS(optimal_power_schedule(MiningPower(2.0), 0), std::invalid_argument);
}

TEST_CASE("schedule entries ramp strictly up to capacity") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> cap(1.0 + 1e-6, 120.0);
    std::uniform_int_distribution<int> kk(1, 60);
    for (int rep = 0; rep < 200; ++rep) {
        const double m = cap(rng);
        const int k = kk(rng);
        const PowerSchedule s = optimal_power_schedule(MiningPower(m), k);
        CHECK(s.powers.back() == m);
        for (int i = 1; i < k; ++i) CHECK(s.powers[i] > s.powers[i - 1]);
        for (double p : s.powers) CHECK(p > 0.0);
    }
}

TEST_CASE("attack duration") {
    CHECK(attack_duration(MiningPower(16), 4).value == 2.0);
    CHECK(attack_duration(MiningPower(3), 3).value ==
          doctest::Approx(2.080083823051904).epsilon(1e-14));
    CHECK(std::abs(attack_duration(MiningPower(3), 3).value - 2.08) <= 0.005);
    CHECK(std::abs(attack_duration(MiningPower(99), 3).value - 0.65) <= 0.005);
    CHECK_THROWS_AS(attack_duration(MiningPower(0.9), 3), InfeasibleError);
}

TEST_CASE("attack duration asymptotics") {
    // decreasing in capacity at fixed k
    double prev = attack_duration(MiningPower(1.01), 7).value;
    for (double m : {1.5, 2.0, 5.0, 20.0, 500.0}) {
        const double d = attack_duration(MiningPower(m), 7).value;
        CHECK(d < prev);
        prev = d;
    }
    // grows in k but approaches one block per unit
    CHECK(attack_duration(MiningPower(9), 1000).value >
          attack_duration(MiningPower(9), 100).value);
    CHECK(attack_duration(MiningPower(99), 1000000).value / 1000000.0 ==
          doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("erasable head start") {
    CHECK(deficit_overcome(MiningPower(16), 4) == 2.0);
    CHECK(std::abs(deficit_overcome(MiningPower(3), 3) - 0.92) <= 0.005);
    CHECK(std::abs(deficit_overcome(MiningPower(99), 100) - 4.49) <= 0.005);
}

TEST_CASE("erasable head start grows in k and in capacity, below ln(ma)") {
    for (double m : {1.5, 3.0, 16.0}) {
        const double ceiling = std::log(m);
        double prev = 0.0;
        for (long long k = 1; k <= 4096; k *= 2) {
            const double a = deficit_overcome(MiningPower(m), k);
            CHECK(a > prev);
            CHECK(a < ceiling);
            prev = a;
        }
    }
    CHECK(deficit_overcome(MiningPower(4), 11) > deficit_overcome(MiningPower(3), 11));
}

TEST_CASE("required power anchors") {
    CHECK(required_power(2, 3).value == 27.0);
    CHECK(required_power(2, 4).value == 16.0);
    CHECK(required_power(3, 4).value == 256.0);
    CHECK_THROWS_AS(required_power(3, 3), InfeasibleError);
    CHECK_THROWS_AS(required_power(5, 3), InfeasibleError);
}

TEST_CASE("required power inverts the erasable head start") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> frac(0.05, 0.75);
    std::uniform_int_distribution<long long> kk(1, 200);
    for (int rep = 0; rep < 300; ++rep) {
        const long long k = kk(rng);
        const double a = frac(rng) * static_cast<double>(k);
        const MiningPower m = required_power(a, k);
        CHECK(deficit_overcome(m, k) == doctest::Approx(a).epsilon(1e-12));
    }
    // past the representable range the needed capacity is effectively infinite
    CHECK_THROWS_AS(required_power(1900.0, 2000), std::invalid_argument);
}

TEST_CASE("smallest block count for a head start") {
    const MinBlocksResult r = min_blocks_for_deficit(MiningPower(16), 2.0);
    REQUIRE(r.feasible);
    // independent check: the k=3 ramp erases 3*(1 - 16^(-1/3)) < 2, the k=4
    // ramp exactly 2
    CHECK(3.0 * (1.0 - std::pow(16.0, -1.0 / 3.0)) < 2.0);
    CHECK(r.blocks == 4);

    const MinBlocksResult r27 = min_blocks_for_deficit(MiningPower(27), 2.0);
    REQUIRE(r27.feasible);
    CHECK(r27.blocks == 3);

    const MinBlocksResult inf3 = min_blocks_for_deficit(MiningPower(3), 2.0);
    CHECK_FALSE(inf3.feasible);
    CHECK(inf3.max_overcomable_deficit == doctest::Approx(std::log(3.0)).epsilon(1e-15));

    // boundary: the ceiling is approached, never attained
    CHECK_FALSE(min_blocks_for_deficit(MiningPower(std::exp(2.0)), 2.0).feasible);

    // threshold capacity for a head start of 2 sits between 7.38 and 7.40
    CHECK_FALSE(min_blocks_for_deficit(MiningPower(7.38), 2.0).feasible);
    CHECK(min_blocks_for_deficit(MiningPower(7.40), 2.0).feasible);
}

TEST_CASE("smallest block count is consistent with the closed form") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> cap(1.1, 200.0);
    for (int rep = 0; rep < 200; ++rep) {
        const double m = cap(rng);
        const double a = std::uniform_real_distribution<double>(0.01, 0.97 * std::log(m))(rng);
        const MinBlocksResult r = min_blocks_for_deficit(MiningPower(m), a);
        REQUIRE(r.feasible);
        CHECK(deficit_overcome(MiningPower(m), r.blocks) >= a - 1e-9);
        if (r.blocks > 1) CHECK(deficit_overcome(MiningPower(m), r.blocks - 1) < a);
    }
}

TEST_CASE("flat-power trace") {
    const NaiveTrace t = naive_attack_trace(MiningPower(3), 2.0);
    CHECK(t.first_interval == 4.0 / 3.0);
    CHECK(t.second_difficulty == 0.75);
    CHECK(t.second_interval == 0.25);
    CHECK(t.third_difficulty == 3.0);
    CHECK(t.terminal_rate == 1.0);
    CHECK(t.terminal_deficit == 0.0);

    // head start of 1 succeeds trivially: the first block alone erases it
    const NaiveTrace t1 = naive_attack_trace(MiningPower(5), 1.0);
    CHECK(t1.first_interval == doctest::Approx(0.2));
    CHECK(t1.second_difficulty == doctest::Approx(5.0));
    CHECK(t1.second_interval == doctest::Approx(1.0));
    CHECK(t1.third_difficulty == 5.0);
    CHECK(t1.terminal_deficit == -1.0);

    const NaiveTrace t3 = naive_attack_trace(MiningPower(3), 3.0);
    CHECK(t3.second_difficulty == doctest::Approx(3.0 / 7.0).epsilon(1e-15));
    CHECK(t3.second_interval == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
    CHECK(t3.terminal_deficit == 1.0);

    CHECK_THROWS_AS(naive_attack_trace(MiningPower(3), 0.5), std::invalid_argument);
}

TEST_CASE("no feasible schedule beats the geometric ramp") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> cap(1.2, 64.0);
    std::uniform_int_distribution<int> kk(2, 20);
    std::uniform_real_distribution<double> jitter(-0.35, 0.35);
    for (int rep = 0; rep < 500; ++rep) {
        const double m = cap(rng);
        const int k = kk(rng);
        const PowerSchedule opt = optimal_power_schedule(MiningPower(m), k);
        const double best = attack_duration(MiningPower(m), k).value;

        std::vector<double> perturbed = opt.powers;
        for (double& p : perturbed) p = std::min(m, std::max(1e-6, p * (1.0 + jitter(rng))));
        const double d = schedule_duration(perturbed);
        CHECK(d >= best - 1e-9);
    }
}

TEST_CASE("plan bundles the closed forms") {
    const VerifiablePlan p = make_verifiable_plan(MiningPower(16), 4);
    CHECK(p.blocks == 4);
    CHECK(p.duration == 2.0);
    CHECK(p.deficit_overcome == 2.0);
    CHECK(p.duration ==
          doctest::Approx(p.blocks * std::pow(p.schedule.capacity, -1.0 / p.blocks))
              .epsilon(1e-12));
}
