#include "lca/unverifiable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace lca {

namespace {

constexpr double kEpsilonClaim = 1e-9;

void check_intervals(std::span<const double> t) {
    for (double v : t)
        if (!(std::isfinite(v) && v > 0.0))
            throw std::invalid_argument("claimed intervals must be finite and positive");
}

// --- objective in log space -------------------------------------------------
// ln g and d(ln g)/dT.  The running products can dip far below 1 for long
// schedules, so sums are carried as logsumexp.

struct LogObjective {
    double ln_g;
    std::vector<double> grad;
};

double logaddexp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

LogObjective eval_log_objective(const std::vector<double>& t) {
    const std::size_t m = t.size();
    std::vector<double> ln_p(m + 1);  // ln of term j, j = 0..m
    ln_p[0] = 0.0;
    for (std::size_t j = 0; j < m; ++j) ln_p[j + 1] = ln_p[j] - std::log(t[j]);

    std::vector<double> suffix(m + 2);
    suffix[m + 1] = -std::numeric_limits<double>::infinity();
    for (std::size_t j = m + 1; j-- > 0;) suffix[j] = logaddexp(suffix[j + 1], ln_p[j]);

    LogObjective out;
    out.ln_g = suffix[0];
    out.grad.resize(m);
    for (std::size_t x = 0; x < m; ++x)
        out.grad[x] = -std::exp(suffix[x + 1] - out.ln_g) / t[x];
    return out;
}

double foc_norm_with_budget(const std::vector<double>& t, double budget) {
    const std::size_t m = t.size();
    double s2 = 0.0;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double r = t[i] * (t[i] - t[i + 1]) - (t[i - 1] - t[i]);
        s2 += r * r;
    }
    if (m >= 2) {
        const double rb = t[m - 1] * t[m - 1] - (t[m - 2] - t[m - 1]);
        s2 += rb * rb;
    }
    const double rc = std::accumulate(t.begin(), t.end(), 0.0) - budget;
    s2 += rc * rc;
    return std::sqrt(s2);
}

// --- phase 1: projected L-BFGS on ln g over {sum T = budget, T > 0} ---------

struct DescentResult {
    std::vector<double> t;
    long long iterations = 0;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void project_zero_sum(std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (double& x : v) x -= mean;
}

DescentResult descend(std::vector<double> t, double budget, long long max_iter) {
    const std::size_t m = t.size();
    DescentResult out;
    if (m <= 1) {
        out.t = std::move(t);
        return out;
    }

    constexpr std::size_t kHistory = 10;
    std::vector<std::vector<double>> hist_s, hist_y;
    LogObjective cur = eval_log_objective(t);
    std::vector<double> gp = cur.grad;
    project_zero_sum(gp);

    for (long long it = 0; it < max_iter; ++it) {
        if (foc_norm_with_budget(t, budget) < 1e-6) break;

        // two-loop recursion
        std::vector<double> q = gp;
        std::vector<double> alpha(hist_s.size());
        for (std::size_t h = hist_s.size(); h-- > 0;) {
            const double ys = dot(hist_y[h], hist_s[h]);
            alpha[h] = dot(hist_s[h], q) / ys;
            for (std::size_t i = 0; i < m; ++i) q[i] -= alpha[h] * hist_y[h][i];
        }
        if (!hist_s.empty()) {
            const double scale =
                dot(hist_y.back(), hist_s.back()) / dot(hist_y.back(), hist_y.back());
            for (double& x : q) x *= scale;
        }
        for (std::size_t h = 0; h < hist_s.size(); ++h) {
            const double ys = dot(hist_y[h], hist_s[h]);
            const double beta = dot(hist_y[h], q) / ys;
            for (std::size_t i = 0; i < m; ++i) q[i] += (alpha[h] - beta) * hist_s[h][i];
        }
        std::vector<double> p(m);
        for (std::size_t i = 0; i < m; ++i) p[i] = -q[i];
        project_zero_sum(p);

        double d0 = dot(gp, p);
        if (!(d0 < 0.0)) {  // fall back to steepest descent in the hyperplane
            for (std::size_t i = 0; i < m; ++i) p[i] = -gp[i];
            project_zero_sum(p);
            d0 = dot(gp, p);
            if (!(d0 < 0.0)) break;
        }

        double step = 1.0;
        for (std::size_t i = 0; i < m; ++i)
            if (p[i] < 0.0) step = std::min(step, -0.9 * t[i] / p[i]);

        bool accepted = false;
        std::vector<double> tn(m);
        LogObjective next{};
        for (int bt = 0; bt < 60 && step > 0.0; ++bt) {
            for (std::size_t i = 0; i < m; ++i) tn[i] = t[i] + step * p[i];
            next = eval_log_objective(tn);
            if (next.ln_g <= cur.ln_g + 1e-4 * step * d0) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        std::vector<double> gn = next.grad;
        project_zero_sum(gn);
        std::vector<double> s(m), y(m);
        for (std::size_t i = 0; i < m; ++i) {
            s[i] = tn[i] - t[i];
            y[i] = gn[i] - gp[i];
        }
        if (dot(y, s) > 0.0) {
            hist_s.push_back(std::move(s));
            hist_y.push_back(std::move(y));
            if (hist_s.size() > kHistory) {
                hist_s.erase(hist_s.begin());
                hist_y.erase(hist_y.begin());
            }
        }
        t = tn;
        cur = next;
        gp = std::move(gn);
        out.iterations = it + 1;
    }
    out.t = std::move(t);
    return out;
}

// --- phase 2: damped Newton on the stationarity system ----------------------
// The Jacobian is tridiagonal apart from the dense budget row, so the step
// splits into delta = a + b * delta_last by back-substitution; the budget row
// then fixes delta_last.  O(m) per iteration.

bool newton_polish(std::vector<double>& t, double budget, double target, int max_steps) {
    const std::size_t m = t.size();
    if (m == 1) {
        t[0] = budget;
        return true;
    }
    double res = foc_norm_with_budget(t, budget);
    for (int step_no = 0; step_no < max_steps && res > target; ++step_no) {
        std::vector<double> a(m, 0.0), b(m, 0.0);
        b[m - 1] = 1.0;
        const double rb = t[m - 1] * t[m - 1] - (t[m - 2] - t[m - 1]);
        a[m - 2] = rb + (2.0 * t[m - 1] + 1.0) * a[m - 1];
        b[m - 2] = (2.0 * t[m - 1] + 1.0) * b[m - 1];
        for (std::size_t i = m - 2; i >= 1; --i) {
            const double rx = t[i] * (t[i] - t[i + 1]) - (t[i - 1] - t[i]);
            const double c1 = 2.0 * t[i] - t[i + 1] + 1.0;
            const double c2 = -t[i];
            a[i - 1] = c1 * a[i] + c2 * a[i + 1] + rx;
            b[i - 1] = c1 * b[i] + c2 * b[i + 1];
        }
        const double rc = std::accumulate(t.begin(), t.end(), 0.0) - budget;
        const double sum_a = std::accumulate(a.begin(), a.end(), 0.0);
        const double sum_b = std::accumulate(b.begin(), b.end(), 0.0);
        if (sum_b == 0.0 || !std::isfinite(sum_b)) return false;
        const double d_last = (-rc - sum_a) / sum_b;

        std::vector<double> delta(m);
        for (std::size_t i = 0; i < m; ++i) delta[i] = a[i] + b[i] * d_last;

        double scale = 1.0;
        for (std::size_t i = 0; i < m; ++i)
            if (delta[i] < 0.0) scale = std::min(scale, -0.95 * t[i] / delta[i]);

        bool improved = false;
        for (int bt = 0; bt < 60; ++bt) {
            std::vector<double> tn(m);
            bool positive = true;
            for (std::size_t i = 0; i < m; ++i) {
                tn[i] = t[i] + scale * delta[i];
                positive = positive && tn[i] > 0.0;
            }
            if (positive) {
                const double rn = foc_norm_with_budget(tn, budget);
                if (rn < res) {
                    t = std::move(tn);
                    res = rn;
                    improved = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if (!improved) return res <= target;
    }
    return res <= target;
}

std::vector<double> solve_intervals(int n, double budget, const SolveOptions& opt) {
    const std::size_t m = static_cast<std::size_t>(n - 1);
    std::vector<double> t(m, budget / static_cast<double>(m));
    if (opt.random_init) {
        std::mt19937_64 rng(opt.seed);
        std::uniform_real_distribution<double> u(0.1, 1.9);
        double sum = 0.0;
        for (double& x : t) sum += (x = u(rng));
        for (double& x : t) x *= budget / sum;
    }
    if (m == 1) {
        t[0] = budget;
        return t;
    }

    const DescentResult d = descend(std::move(t), budget, opt.max_iterations);
    t = d.t;
    if (!newton_polish(t, budget, opt.target_residual, 200)) {
        const double res = foc_norm_with_budget(t, budget);
        throw SolverError("interval solver missed residual target " +
                              std::to_string(opt.target_residual) + " (reached " +
                              std::to_string(res) + ")",
                          t, res);
    }
    return t;
}

}  // namespace

ReportSchedule ReportSchedule::make(int n_blocks, std::vector<double> intervals,
                                    double terminal_claim) {
    if (n_blocks < 2) throw std::invalid_argument("a report schedule needs at least 2 blocks");
    if (intervals.size() != static_cast<std::size_t>(n_blocks - 1))
        throw std::invalid_argument("expected n_blocks - 1 claimed intervals");
    check_intervals(intervals);
    if (!(std::isfinite(terminal_claim) && terminal_claim > 0.0))
        throw std::invalid_argument("terminal claim must be finite and positive");
    // Budget conformance (sum = n-1) is deliberately not enforced here; the
    // constraint residual and the regime validator report deviations.
    ReportSchedule s;
    s.n_blocks = n_blocks;
    s.claimed_intervals = std::move(intervals);
    s.terminal_claim = terminal_claim;
    return s;
}

double reduced_objective(std::span<const double> intervals) {
    check_intervals(intervals);
    double g = 1.0;
    double running = 1.0;
    for (double t : intervals) {
        running /= t;
        g += running;
    }
    return g;
}

TimeUnit unverifiable_objective(const ReportSchedule& schedule, MiningPower m_a) {
    if (!(m_a.value > 1.0))
        throw std::invalid_argument("attacker capacity must exceed the honest rate of 1");
    return TimeUnit(reduced_objective(schedule.claimed_intervals) / m_a.value);
}

double FocResiduals::norm() const {
    double s2 = constraint * constraint;
    if (has_boundary) s2 += boundary * boundary;
    for (double r : interior) s2 += r * r;
    return std::sqrt(s2);
}

FocResiduals foc_residuals(const ReportSchedule& schedule) {
    const auto& t = schedule.claimed_intervals;
    const int n = schedule.n_blocks;
    FocResiduals out;
    for (int x = 2; x <= n - 2; ++x)
        out.interior.push_back(t[x - 1] * (t[x - 1] - t[x]) - (t[x - 2] - t[x - 1]));
    if (n >= 3) {
        out.boundary = t[n - 2] * t[n - 2] - (t[n - 3] - t[n - 2]);
        out.has_boundary = true;
    }
    out.constraint = std::accumulate(t.begin(), t.end(), 0.0) - static_cast<double>(n - 1);
    return out;
}

ReportSchedule solve_optimal_reports(int n, const SolveOptions& options) {
    if (n < 2) throw std::invalid_argument("need at least 2 blocks");
    const double full_budget = static_cast<double>(n - 1);

    if (!options.honest_power_cap) {
        auto t = solve_intervals(n, full_budget, options);
        return ReportSchedule::make(n, std::move(t), kEpsilonClaim);
    }

    // With a believability cap the terminal claim must look like capacity
    // <= cap, so it is carved out of the budget.  The claim depends on the
    // final difficulty, which depends on the budget: iterate to the fixed
    // point (contraction for any sensible cap).
    const double cap = *options.honest_power_cap;
    if (!(std::isfinite(cap) && cap > 1.0)) throw std::invalid_argument("power cap must exceed 1");
    double claim = kEpsilonClaim;
    std::vector<double> t;
    for (int pass = 0; pass < 80; ++pass) {
        t = solve_intervals(n, full_budget - claim, options);
        double final_difficulty = 1.0;
        for (double v : t) final_difficulty /= v;
        const double next_claim = std::max(kEpsilonClaim, final_difficulty / cap);
        const bool settled = std::abs(next_claim - claim) <= 1e-12 * std::max(1.0, claim);
        claim = next_claim;
        if (settled) break;
    }
    return ReportSchedule::make(n, std::move(t), claim);
}

ReportSchedule solve_reports_by_shooting(int n) {
    if (n < 2) throw std::invalid_argument("need at least 2 blocks");
    const std::size_t m = static_cast<std::size_t>(n - 1);
    std::vector<double> t(m);
    if (m == 1) {
        t[0] = 1.0;
        return ReportSchedule::make(n, std::move(t), kEpsilonClaim);
    }

    // Backward recurrence from a trial last interval z; the solution's sum
    // matches the budget at exactly one z in (0, 1).
    const auto fill = [&](double z) -> double {  // returns the sum (inf on blow-up)
        t[m - 1] = z;
        double next = 0.0;
        for (std::size_t i = m - 1; i >= 1; --i) {
            const double v = t[i] * (1.0 + t[i] - next);
            if (!(v > 0.0) || v > 1e18) return std::numeric_limits<double>::infinity();
            t[i - 1] = v;
            next = t[i];
        }
        return std::accumulate(t.begin(), t.end(), 0.0);
    };

    const double budget = static_cast<double>(n - 1);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (fill(mid) < budget ? lo : hi) = mid;
    }
    fill(0.5 * (lo + hi));
    return ReportSchedule::make(n, std::move(t), kEpsilonClaim);
}

ReportSchedule brute_force_reports(int n, double grid_step) {
    if (n < 3 || n > 5)
        throw std::invalid_argument("exhaustive search is limited to 3..5 blocks");
    if (!(grid_step > 0.0 && grid_step <= 1e-2))
        throw std::invalid_argument("grid step must be in (0, 0.01]");

    const int m = n - 1;                                                  // intervals
    const int units = static_cast<int>(std::llround((n - 1) / grid_step));  // budget in steps
    if (units < m) throw std::invalid_argument("grid step too coarse for the budget");

    // tail[p][b]: minimal sum of the trailing product terms when intervals
    // p..m-1 get budget b (in grid units, each interval >= 1 unit), as seen
    // from a running product of 1.  choice[p][b] records the argmin.
    const int rows = m;
    std::vector<std::vector<double>> tail(rows, std::vector<double>(units + 1, 0.0));
    std::vector<std::vector<int>> choice(rows, std::vector<int>(units + 1, 0));
    for (int b = 1; b <= units; ++b) tail[rows - 1][b] = 1.0 / (b * grid_step);

    for (int p = rows - 2; p >= 0; --p) {
        const int remaining = rows - 1 - p;  // intervals after p
        for (int b = remaining + 1; b <= units; ++b) {
            double best = std::numeric_limits<double>::infinity();
            int best_q = 0;
            for (int q = 1; q <= b - remaining; ++q) {
                const double inv = 1.0 / (q * grid_step);
                const double v = inv * (1.0 + tail[p + 1][b - q]);
                if (v < best) {
                    best = v;
                    best_q = q;
                }
            }
            tail[p][b] = best;
            choice[p][b] = best_q;
        }
    }

    std::vector<double> intervals(m);
    int b = units;
    for (int p = 0; p < m - 1; ++p) {
        const int q = choice[p][b];
        intervals[p] = q * grid_step;
        b -= q;
    }
    intervals[m - 1] = b * grid_step;
    return ReportSchedule::make(n, std::move(intervals), kEpsilonClaim);
}

double max_deficit_unverifiable(MiningPower m_a, int n) {
    const ReportSchedule s = solve_optimal_reports(n);
    return static_cast<double>(n) - unverifiable_objective(s, m_a).value;
}

UnverifiablePlan make_unverifiable_plan(MiningPower m_a, int n, const SolveOptions& options) {
    if (!(m_a.value > 1.0))
        throw std::invalid_argument("attacker capacity must exceed the honest rate of 1");
    UnverifiablePlan p;
    p.schedule = solve_optimal_reports(n, options);
    p.capacity = m_a.value;
    p.reduced_objective = reduced_objective(p.schedule.claimed_intervals);
    p.actual_duration = p.reduced_objective / m_a.value;
    p.max_deficit = static_cast<double>(n) - p.actual_duration;
    p.foc_residual_norm = foc_residuals(p.schedule).norm();
    p.seed = options.seed;
    return p;
}

}  // namespace lca
