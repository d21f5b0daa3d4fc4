#include "lca/chain.hpp"

#include <cmath>
#include <cstdio>

namespace lca {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::string at_height(const char* what, long long h) {
    return std::string(what) + " at height " + std::to_string(h);
}

}  // namespace

TimeUnit::TimeUnit(double v) : value(v) {
    require(std::isfinite(v) && v >= 0.0, "TimeUnit must be finite and non-negative");
}

Difficulty::Difficulty(double v) : value(v) {
    require(std::isfinite(v) && v > 0.0, "Difficulty must be finite and positive");
}

MiningPower::MiningPower(double v) : value(v) {
    require(std::isfinite(v) && v > 0.0, "MiningPower must be finite and positive");
}

Chain Chain::genesis() {
    Chain c;
    c.blocks_.push_back(Block{0, 0.0, 0.0, 1.0});
    return c;
}

Chain Chain::from_blocks(std::vector<Block> blocks) {
    require(!blocks.empty(), "chain needs at least the genesis block");
    const Block& g = blocks.front();
    require(g.height == 0 && g.reported_timestamp == 0.0 && g.difficulty == 1.0,
            "genesis must be height 0, timestamp 0, difficulty 1");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        require(blocks[i].height == static_cast<long long>(i), "heights must be consecutive from 0");
        require(std::isfinite(blocks[i].difficulty) && blocks[i].difficulty > 0.0,
                "block difficulty must be finite and positive");
        require(std::isfinite(blocks[i].reported_timestamp) && std::isfinite(blocks[i].actual_found_time),
                "block timestamps must be finite");
    }
    Chain c;
    c.blocks_ = std::move(blocks);
    return c;
}

void Chain::append(double reported_timestamp, double actual_found_time, double difficulty) {
    require(std::isfinite(reported_timestamp) && reported_timestamp > tip().reported_timestamp,
            "reported timestamp must exceed the parent's");
    require(std::isfinite(difficulty) && difficulty > 0.0, "difficulty must be finite and positive");
    require(std::isfinite(actual_found_time) && actual_found_time >= 0.0,
            "found time must be finite and non-negative");
    blocks_.push_back(Block{tip().height + 1, reported_timestamp, actual_found_time, difficulty});
}

TimeUnit block_find_time(Difficulty d, MiningPower m) {
    return TimeUnit(d.value / m.value);
}

Difficulty next_difficulty(Difficulty d, TimeUnit t, TimeUnit t_next) {
    const double interval = t_next.value - t.value;
    if (!(interval > 0.0))
        throw std::invalid_argument("non-positive block interval (zero interval implies infinite power)");
    return Difficulty(d.value / interval);
}

Difficulty difficulty_from_intervals(std::span<const double> intervals) {
    double prod = 1.0;
    for (double t : intervals) {
        if (!(std::isfinite(t) && t > 0.0))
            throw std::invalid_argument("intervals must be finite and positive");
        prod *= t;
    }
    return Difficulty(1.0 / prod);
}

Chain build_honest_chain(long long n) {
    if (n < 0) throw std::invalid_argument("chain height must be non-negative");
    Chain c = Chain::genesis();
    for (long long i = 1; i <= n; ++i)
        c.append(static_cast<double>(i), static_cast<double>(i), 1.0);
    return c;
}

namespace {

void check_retarget_rule(const std::vector<Block>& b, double rel_tol, Verdict& out) {
    for (std::size_t i = 1; i < b.size(); ++i) {
        const double interval = b[i].reported_timestamp - b[i - 1].reported_timestamp;
        if (!(interval > 0.0)) continue;  // reported separately
        const double expected = b[i - 1].difficulty / interval;
        if (std::abs(b[i].difficulty - expected) > rel_tol * std::max(expected, b[i].difficulty))
            out.violations.push_back(at_height("difficulty mismatch", b[i].height));
    }
}

void check_increasing(const std::vector<Block>& b, Verdict& out) {
    for (std::size_t i = 1; i < b.size(); ++i)
        if (!(b[i].reported_timestamp > b[i - 1].reported_timestamp))
            out.violations.push_back(at_height("non-increasing timestamps", b[i].height));
}

}  // namespace

Verdict validate_chain(const Chain& chain, const TimestampRegime& regime) {
    Verdict out;
    const auto& b = chain.blocks();
    check_increasing(b, out);

    if (const auto* v = std::get_if<VerifiableRegime>(&regime)) {
        // Truthful reporting admits two stamping disciplines, both tied to
        // real events: a block may report its own discovery time (honest
        // mining, where the next discovery is known a block in advance), or
        // the discovery time of its parent (attack chains, where a stamp must
        // be fixed before the nonce is known).  Every block of a chain must
        // follow one discipline; the height-1 stamp under the parent
        // discipline is pinned by the retarget rule instead.
        bool own = true, parent = true;
        for (std::size_t i = 1; i < b.size(); ++i) {
            if (std::abs(b[i].reported_timestamp - b[i].actual_found_time) > v->tolerance) own = false;
            if (i >= 2 && std::abs(b[i].reported_timestamp - b[i - 1].actual_found_time) > v->tolerance)
                parent = false;
        }
        if (!own && !parent)
            out.violations.push_back("reported timestamps diverge from actual event times");
        check_retarget_rule(b, std::max(v->tolerance, 1e-12), out);
    } else {
        const auto& u = std::get<UnverifiableRegime>(regime);
        constexpr double slack = 1e-9;
        if (b.size() > 1) {
            if (b[1].reported_timestamp < u.earliest_first_timestamp - slack)
                out.violations.push_back("first timestamp predates the fork bound");
            if (b.back().reported_timestamp > u.reveal_time + slack)
                out.violations.push_back("future-dated reveal");
        }
        check_retarget_rule(b, 1e-9, out);
    }
    return out;
}

}  // namespace lca
