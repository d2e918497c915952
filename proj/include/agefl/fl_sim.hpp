// Monte-Carlo simulator of the one-shot FL protocol: trajectory generation,
// local ERM, noisy aggregation, and empirical loss-difference measurement
// against the ideal fresh-data model.
#pragma once

#include "agefl/age_dp.hpp"
#include "agefl/clients.hpp"
#include "agefl/random.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace agefl {

// Per-sample state paths from collection time to aggregation time
// (path_len = gap + 1 snapshots per sample).
struct Trajectories {
    std::size_t n_samples = 0;
    std::size_t path_len = 0;
    std::vector<int> states; // row-major: sample * path_len + step

    int at(std::size_t sample, std::size_t step) const {
        return states[sample * path_len + step];
    }
};

// n_samples independent chain trajectories: the state at collection time is
// drawn from collection_dist, each later step from the transition row.
Trajectories generate_trajectories(const ClientSpec& client, int gap, UniformStream& rng);

// Arithmetic mean: the empirical MSE minimizer.
double local_erm(std::span<const double> samples);

// Weighted sum of client weights (p must sum to 1).
double aggregate(std::span<const double> weights, std::span<const double> p);

struct TrialOutcome {
    double loss_diff = 0.0;   // empirical loss of the noisy aggregate minus
                              // the fresh-data minimizer's, on fresh data
    double noise_power = 0.0; // realized (1/m) sum N_i^2
    double w_tilde = 0.0;
    double w_star = 0.0;
};

// One protocol round. Per-trial randomness is fully determined by trial_seed;
// client trajectory and noise streams are seeded independently so paired
// comparisons across schedules and noise plans stay aligned.
TrialOutcome run_trial(std::span<const ClientSpec> clients, const Schedule& schedule,
                       const NoisePlan& plan, std::uint64_t trial_seed);

// Trials with per-trial seeds seed ^ trial_index; outcomes are therefore
// independent of execution order and thread count.
std::vector<TrialOutcome> run_trials(std::span<const ClientSpec> clients,
                                     const Schedule& schedule, const NoisePlan& plan,
                                     std::size_t trials, std::uint64_t seed,
                                     bool parallel = true);

struct McSummary {
    double mean = 0.0;
    double std_err = 0.0;
    double mean_noise_power = 0.0;
};

McSummary monte_carlo_loss_diff(std::span<const ClientSpec> clients, const Schedule& schedule,
                                const NoisePlan& plan, std::size_t trials, std::uint64_t seed,
                                bool parallel = true);

// Schedule-dependent constants of the bound: the expected population risk of
// the noise-free aggregate and the expected empirical loss of the fresh-data
// minimizer (plus the latter's population risk, needed by the literal bound
// form). Population risk is evaluated analytically against the age-gap
// marginals; trial seeds match run_trials for the same seed.
struct BaselineStats {
    double e_pop_risk_w = 0.0;      // E[pop risk of noise-free aggregate]
    double e_emp_loss_wstar = 0.0;  // E[empirical loss of fresh minimizer]
    double e_pop_risk_wstar = 0.0;  // E[pop risk of fresh minimizer]
};

BaselineStats baseline_stats(std::span<const ClientSpec> clients, const Schedule& schedule,
                             std::size_t trials, std::uint64_t seed, bool parallel = true);

} // namespace agefl
