#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// Core domain model: a proof-of-work chain with deterministic mining and
// per-block difficulty retargeting.  One honest block per time unit; honest
// capacity is the unit of mining power; genesis difficulty is 1.

namespace lca {

// ---------------------------------------------------------------------------
// Value types.  Construction validates the domain, after that they are plain
// immutable values.

struct TimeUnit {
    double value;
    explicit TimeUnit(double v);
};

struct Difficulty {
    double value;
    explicit Difficulty(double v);
};

/// Block-finding capacity, normalized so the honest network has capacity 1.
struct MiningPower {
    double value;
    explicit MiningPower(double v);
};

struct Block {
    long long height = 0;
    double reported_timestamp = 0.0;  // what the block claims
    double actual_found_time = 0.0;   // simulation-internal truth
    double difficulty = 1.0;
};

/// Contiguous chain from genesis (height 0, timestamp 0, difficulty 1).
/// Structural shape is enforced here; timestamp/difficulty *rules* are the
/// validator's job so that malformed chains can be inspected, not just
/// rejected at construction.
class Chain {
  public:
    static Chain genesis();

    /// Deserialization path: checks heights are consecutive from 0 and the
    /// genesis block has the canonical shape, nothing more.
    static Chain from_blocks(std::vector<Block> blocks);

    /// Builder path: appends one block, requiring a strictly later reported
    /// timestamp and a positive finite difficulty.
    void append(double reported_timestamp, double actual_found_time, double difficulty);

    const std::vector<Block>& blocks() const { return blocks_; }
    const Block& tip() const { return blocks_.back(); }
    long long height() const { return tip().height; }

  private:
    Chain() = default;
    std::vector<Block> blocks_;
};

// ---------------------------------------------------------------------------
// Timestamp regimes.

/// Reported times must match actual event times; `tolerance` absorbs
/// floating-point noise from simulation (absolute, in time units).  The same
/// value doubles as the relative tolerance of the difficulty-rule check.
struct VerifiableRegime {
    double tolerance = 1e-9;
};

/// Any strictly increasing reported sequence is accepted, bounded below by
/// the fork point and above by the reveal time.
struct UnverifiableRegime {
    double reveal_time;
    double earliest_first_timestamp = 1.0;
};

using TimestampRegime = std::variant<VerifiableRegime, UnverifiableRegime>;

struct Verdict {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// ---------------------------------------------------------------------------
// Operations.

/// Time to find one block: difficulty / power.
TimeUnit block_find_time(Difficulty d, MiningPower m);

/// Per-block retarget: d / (t_next - t).  A non-positive interval is a hard
/// error; a zero claimed interval would imply infinite mining power.
Difficulty next_difficulty(Difficulty d, TimeUnit t, TimeUnit t_next);

/// Product form of the retarget rule: 1 / prod(intervals), starting from
/// genesis difficulty 1.  Agrees with iterating next_difficulty up to
/// floating-point roundoff.
Difficulty difficulty_from_intervals(std::span<const double> intervals);

/// Honest chain of height n: timestamps 0..n, every difficulty exactly 1.
Chain build_honest_chain(long long n);

/// Checks the chain against the regime's timestamp rules plus the retarget
/// rule on reported intervals.  Returns all violations rather than throwing.
Verdict validate_chain(const Chain& chain, const TimestampRegime& regime);

}  // namespace lca
