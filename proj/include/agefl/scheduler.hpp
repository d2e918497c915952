// The six scheduling-and-noise schemes: exhaustive schedule enumeration,
// bound-guided selection, simulation-guided selection, and random baselines,
// under adaptive or constant noise.
#pragma once

#include "agefl/bound.hpp"
#include "agefl/clients.hpp"
#include "agefl/fl_sim.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace agefl {

enum class SchemeId {
    random_constant,
    random_adaptive,
    proposed_constant,
    proposed_adaptive,
    optimal_constant,
    optimal_adaptive,
};

std::string to_string(SchemeId scheme);
SchemeId parse_scheme(const std::string& name);
bool scheme_uses_adaptive_noise(SchemeId scheme);

// All schedules in [1, t_agg]^m in lexicographic order. Refuses (with the
// would-be count in the message) when t_agg^m exceeds the budget.
std::vector<Schedule> enumerate_schedules(std::size_t m, int t_agg,
                                          std::size_t budget = 1'000'000);

// Index of the smallest score; earliest index wins ties, so with
// lexicographic enumeration the tie-break is the lexicographically smallest
// schedule.
std::size_t argmin_lex(std::span<const double> scores);

struct ScheduleChoice {
    Schedule schedule;
    NoisePlan plan;
    double score = 0.0;            // bound total or simulated mean
    double achieved_eps_bar = 0.0; // max over clients of the achieved age-dependent eps
};

struct SearchOptions {
    std::size_t trials = 1000;  // Monte-Carlo trials per candidate
    std::uint64_t seed = 0;     // shared across candidates (paired comparisons)
    DeltaMode delta_mode = DeltaMode::spectral;
    FseMode fse_mode = FseMode::paper;
    BoundMode bound_mode = BoundMode::cancelled;
};

// Pre-computed per-schedule baseline statistics, indexed like
// enumerate_schedules output; lets callers amortize the Monte-Carlo baseline
// across privacy levels and noise modes.
std::vector<BaselineStats> compute_baseline_table(std::span<const ClientSpec> clients,
                                                  std::span<const Schedule> schedules,
                                                  std::size_t trials, std::uint64_t seed);

// Argmin of the evaluated bound over all schedules.
ScheduleChoice choose_schedule_bound(std::span<const ClientSpec> clients,
                                     PrivacyRequirement req, int t_agg, NoiseMode mode,
                                     const SearchOptions& options,
                                     const std::vector<BaselineStats>* baseline_table = nullptr);

// Argmin of the simulated mean loss difference over all schedules.
ScheduleChoice choose_schedule_sim(std::span<const ClientSpec> clients,
                                   PrivacyRequirement req, int t_agg, NoiseMode mode,
                                   const SearchOptions& options);

struct SchemeResult {
    SchemeId scheme;
    ScheduleChoice choice;
    McSummary evaluation;     // common evaluation pass, fresh seed
    double bound_total = 0.0; // bound of the chosen schedule (selection seed)
};

// Runs one scheme end to end: selection (random draw, bound argmin, or
// simulation argmin) followed by a common Monte-Carlo evaluation with a
// fresh seed derived from `seed`. The same `seed` therefore yields paired
// evaluations across schemes.
SchemeResult run_scheme(SchemeId scheme, std::span<const ClientSpec> clients,
                        PrivacyRequirement req, int t_agg, std::size_t trials,
                        std::uint64_t seed, const SearchOptions& options,
                        const std::vector<BaselineStats>* baseline_table = nullptr);

// Fixed-noise-level reading of the constant-noise scheme: schedule by bound
// under a given Laplace scale, then report the privacy level that scale
// achieves for the chosen schedule.
struct EtaSweepPoint {
    double eta = 0.0;
    Schedule schedule;
    double bound_total = 0.0;
    double achieved_eps_bar = 0.0;
};

std::vector<EtaSweepPoint> constant_noise_sweep(std::span<const ClientSpec> clients,
                                                std::span<const double> eta_grid, int t_agg,
                                                const SearchOptions& options);

} // namespace agefl
