#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lca/chain.hpp"

// Attack planning under unverifiable timestamps.  The attacker always mines
// at full power and instead chooses the claimed inter-block times, which
// drive the retarget rule.  Minimizing the real mining time of N blocks
// reduces to minimizing
//
//     g(T) = 1 + 1/T_1 + 1/(T_1 T_2) + ... + 1/(T_1 ... T_{N-1})
//
// over claimed intervals T > 0 with sum T = N - 1; the real duration is then
// g / M_a, independent of how g's minimizer was found.

namespace lca {

/// Non-convergence of the interval solver.  Carries the best iterate so the
/// failure is diagnosable.
struct SolverError : std::runtime_error {
    SolverError(const std::string& msg, std::vector<double> best_, double residual_norm_)
        : std::runtime_error(msg), best(std::move(best_)), residual_norm(residual_norm_) {}
    std::vector<double> best;
    double residual_norm;
};

/// Claimed inter-block times for an N-block chain.  The N-1 intervals cover
/// consecutive mined blocks; the terminal claim is the near-zero interval the
/// attacker would assert for anything past the last block.  Uncapped
/// schedules use the whole budget (sum = N-1, terminal claim epsilon);
/// capped ones reserve the terminal claim out of the budget.
struct ReportSchedule {
    int n_blocks = 0;
    std::vector<double> claimed_intervals;
    double terminal_claim = 1e-9;

    static ReportSchedule make(int n_blocks, std::vector<double> intervals,
                               double terminal_claim = 1e-9);
};

/// g(T) as above, accumulated with running products.
double reduced_objective(std::span<const double> intervals);

/// Real mining time of the schedule at capacity m_a: reduced objective / m_a.
TimeUnit unverifiable_objective(const ReportSchedule& schedule, MiningPower m_a);

/// Stationarity system of the constrained minimization, in recurrence form:
///   interior (x = 2..N-2):  T_x (T_x - T_{x+1}) - (T_{x-1} - T_x)
///   boundary:               T_{N-1}^2 - (T_{N-2} - T_{N-1})
///   constraint:             sum T - (N - 1)
struct FocResiduals {
    std::vector<double> interior;
    double boundary = 0.0;
    bool has_boundary = false;  // absent for N = 2
    double constraint = 0.0;
    double norm() const;
};

FocResiduals foc_residuals(const ReportSchedule& schedule);

struct SolveOptions {
    std::uint64_t seed = 0;
    bool random_init = false;      // perturbed start instead of the uniform one
    double target_residual = 1e-10;
    long long max_iterations = 100000;
    /// Largest capacity the honest side would believe; reserves a terminal
    /// claim of (final difficulty)/cap out of the interval budget.
    std::optional<double> honest_power_cap;
};

/// Unique minimizer of the reduced objective.  Descent on log g projected
/// onto the budget hyperplane, finished by a damped Newton pass on the
/// stationarity system; throws SolverError if the residual target is missed.
ReportSchedule solve_optimal_reports(int n, const SolveOptions& options = {});

/// Independent cross-check: the stationarity recurrence collapses the system
/// to a one-dimensional shoot on the last interval, solved by bisection.
ReportSchedule solve_reports_by_shooting(int n);

/// Exhaustive lattice minimization of g over interval grids of the given
/// step (n in [3,5] only).  Implemented as exact dynamic programming over
/// (position, remaining budget), which visits the same minimum as plain
/// enumeration of the grid.
ReportSchedule brute_force_reports(int n, double grid_step);

/// Largest head start the N-block fake-timestamp attack can erase:
/// n - g*(n)/m_a.
double max_deficit_unverifiable(MiningPower m_a, int n);

struct UnverifiablePlan {
    ReportSchedule schedule;
    double capacity = 0.0;
    double actual_duration = 0.0;   // reduced_objective / capacity
    double reduced_objective = 0.0;
    double max_deficit = 0.0;       // n_blocks - actual_duration
    double foc_residual_norm = 0.0;
    std::uint64_t seed = 0;
};

UnverifiablePlan make_unverifiable_plan(MiningPower m_a, int n, const SolveOptions& options = {});

}  // namespace lca
