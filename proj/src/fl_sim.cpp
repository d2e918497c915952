#include "agefl/fl_sim.hpp"

#include "agefl/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace agefl {

namespace {

// Inverse-CDF draw from a finite distribution. Zero-probability states have
// empty intervals and are never selected (u is strictly inside (0,1)).
int sample_state(std::span<const double> probs, UniformStream& rng) {
    const double u = rng.next_unit();
    double cum = 0.0;
    int last_positive = -1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) {
            continue;
        }
        last_positive = static_cast<int>(i);
        cum += probs[i];
        if (u < cum) {
            return static_cast<int>(i);
        }
    }
    return last_positive; // cum fell short of 1 by rounding
}

// Sufficient statistics of one trial: per-client means of the collected
// snapshot and first/second moments of the fresh snapshot.
struct TrialData {
    std::vector<double> stale_mean;
    std::vector<double> fresh_mean;
    std::vector<double> fresh_sq_mean;
    std::vector<std::uint64_t> noise_seeds;
};

TrialData simulate_trial_data(std::span<const ClientSpec> clients, const Schedule& schedule,
                              std::uint64_t trial_seed) {
    const std::size_t m = clients.size();
    UniformStream master(trial_seed);
    std::vector<std::uint64_t> traj_seeds(m);
    for (auto& s : traj_seeds) {
        s = master.next_u64();
    }
    TrialData data;
    data.noise_seeds.resize(m);
    for (auto& s : data.noise_seeds) {
        s = master.next_u64();
    }

    data.stale_mean.resize(m);
    data.fresh_mean.resize(m);
    data.fresh_sq_mean.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const ClientSpec& client = clients[i];
        UniformStream rng(traj_seeds[i]);
        const Trajectories paths = generate_trajectories(client, schedule.gap(i), rng);

        double stale = 0.0;
        double fresh = 0.0;
        double fresh_sq = 0.0;
        for (std::size_t s = 0; s < paths.n_samples; ++s) {
            const double born = client.chain.state_values[static_cast<std::size_t>(
                paths.at(s, 0))];
            const double now = client.chain.state_values[static_cast<std::size_t>(
                paths.at(s, paths.path_len - 1))];
            stale += born;
            fresh += now;
            fresh_sq += now * now;
        }
        const double inv_n = 1.0 / static_cast<double>(paths.n_samples);
        data.stale_mean[i] = stale * inv_n;
        data.fresh_mean[i] = fresh * inv_n;
        data.fresh_sq_mean[i] = fresh_sq * inv_n;
    }
    return data;
}

// Empirical MSE of weight w on a dataset summarized by its first two moments.
double mse_from_moments(double w, double mean, double sq_mean) {
    return w * w - 2.0 * w * mean + sq_mean;
}

// Population MSE of w against a finite distribution over the state labels.
double population_mse(double w, std::span<const double> dist,
                      std::span<const double> values) {
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double d = w - values[i];
        acc += dist[i] * d * d;
    }
    return acc;
}

} // namespace

Trajectories generate_trajectories(const ClientSpec& client, int gap, UniformStream& rng) {
    if (gap < 0) {
        throw std::invalid_argument("generate_trajectories: negative age gap");
    }
    if (client.n_samples == 0) {
        throw std::invalid_argument("generate_trajectories: client has no samples");
    }
    Trajectories out;
    out.n_samples = client.n_samples;
    out.path_len = static_cast<std::size_t>(gap) + 1;
    out.states.resize(out.n_samples * out.path_len);

    const Matrix& p = client.chain.transition;
    for (std::size_t s = 0; s < out.n_samples; ++s) {
        int state = sample_state(client.chain.collection_dist, rng);
        out.states[s * out.path_len] = state;
        for (std::size_t step = 1; step < out.path_len; ++step) {
            state = sample_state(p.row(static_cast<std::size_t>(state)), rng);
            out.states[s * out.path_len + step] = state;
        }
    }
    return out;
}

double local_erm(std::span<const double> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("local_erm: empty dataset");
    }
    double sum = 0.0;
    for (double v : samples) {
        sum += v;
    }
    return sum / static_cast<double>(samples.size());
}

double aggregate(std::span<const double> weights, std::span<const double> p) {
    if (weights.size() != p.size()) {
        throw std::invalid_argument("aggregate: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += p[i] * weights[i];
    }
    return acc;
}

TrialOutcome run_trial(std::span<const ClientSpec> clients, const Schedule& schedule,
                       const NoisePlan& plan, std::uint64_t trial_seed) {
    const std::size_t m = clients.size();
    if (plan.entries.size() != m) {
        throw std::invalid_argument("run_trial: plan/client count mismatch");
    }
    schedule.validate(m);

    const TrialData data = simulate_trial_data(clients, schedule, trial_seed);

    double w = 0.0;
    double w_star = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        w += clients[i].weight * data.stale_mean[i];
        w_star += clients[i].weight * data.fresh_mean[i];
    }

    // Noise enters the aggregate as (1/m) sum N_i. A draw is consumed even
    // for zero-noise clients so streams stay aligned across plans.
    double noise = 0.0;
    double noise_sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        UniformStream rng(data.noise_seeds[i]);
        const double u = rng.next_unit();
        const double eta = plan.entries[i].eta;
        const double n_i = eta > 0.0 ? laplace_quantile(eta, u) : 0.0;
        noise += n_i;
        noise_sq += n_i * n_i;
    }
    noise /= static_cast<double>(m);

    TrialOutcome out;
    out.w_tilde = w + noise;
    out.w_star = w_star;
    out.noise_power = noise_sq / static_cast<double>(m);
    double diff = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double mse_tilde =
            mse_from_moments(out.w_tilde, data.fresh_mean[i], data.fresh_sq_mean[i]);
        const double mse_star =
            mse_from_moments(out.w_star, data.fresh_mean[i], data.fresh_sq_mean[i]);
        diff += clients[i].weight * (mse_tilde - mse_star);
    }
    out.loss_diff = diff;
    return out;
}

std::vector<TrialOutcome> run_trials(std::span<const ClientSpec> clients,
                                     const Schedule& schedule, const NoisePlan& plan,
                                     std::size_t trials, std::uint64_t seed, bool parallel) {
    if (trials == 0) {
        throw std::invalid_argument("run_trials: need at least one trial");
    }
    std::vector<TrialOutcome> outcomes(trials);
    auto body = [&](std::size_t t) {
        outcomes[t] = run_trial(clients, schedule, plan,
                                seed ^ static_cast<std::uint64_t>(t));
    };
    if (parallel) {
        parallel_for(trials, body);
    } else {
        serial_for(trials, body);
    }
    return outcomes;
}

McSummary monte_carlo_loss_diff(std::span<const ClientSpec> clients, const Schedule& schedule,
                                const NoisePlan& plan, std::size_t trials, std::uint64_t seed,
                                bool parallel) {
    const std::vector<TrialOutcome> outcomes =
        run_trials(clients, schedule, plan, trials, seed, parallel);
    std::vector<double> losses(trials);
    std::vector<double> powers(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        losses[t] = outcomes[t].loss_diff;
        powers[t] = outcomes[t].noise_power;
    }
    const MeanStdErr stats = mean_std_err(losses);
    McSummary out;
    out.mean = stats.mean;
    out.std_err = stats.std_err;
    out.mean_noise_power = pairwise_sum(powers) / static_cast<double>(trials);
    return out;
}

BaselineStats baseline_stats(std::span<const ClientSpec> clients, const Schedule& schedule,
                             std::size_t trials, std::uint64_t seed, bool parallel) {
    if (trials == 0) {
        throw std::invalid_argument("baseline_stats: need at least one trial");
    }
    schedule.validate(clients.size());
    const std::size_t m = clients.size();

    // Target distribution per client: the marginal at the aggregation time
    // given birth at the collection time.
    std::vector<std::vector<double>> mu(m);
    for (std::size_t i = 0; i < m; ++i) {
        mu[i] = marginal_at(clients[i].chain, schedule.gap(i));
    }

    std::vector<double> pop_w(trials);
    std::vector<double> emp_star(trials);
    std::vector<double> pop_star(trials);
    auto body = [&](std::size_t t) {
        const TrialData data =
            simulate_trial_data(clients, schedule, seed ^ static_cast<std::uint64_t>(t));
        double w = 0.0;
        double w_star = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            w += clients[i].weight * data.stale_mean[i];
            w_star += clients[i].weight * data.fresh_mean[i];
        }
        double risk_w = 0.0;
        double risk_star = 0.0;
        double emp = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            risk_w += clients[i].weight *
                      population_mse(w, mu[i], clients[i].chain.state_values);
            risk_star += clients[i].weight *
                         population_mse(w_star, mu[i], clients[i].chain.state_values);
            emp += clients[i].weight *
                   mse_from_moments(w_star, data.fresh_mean[i], data.fresh_sq_mean[i]);
        }
        pop_w[t] = risk_w;
        emp_star[t] = emp;
        pop_star[t] = risk_star;
    };
    if (parallel) {
        parallel_for(trials, body);
    } else {
        serial_for(trials, body);
    }

    BaselineStats out;
    const double inv = 1.0 / static_cast<double>(trials);
    out.e_pop_risk_w = pairwise_sum(pop_w) * inv;
    out.e_emp_loss_wstar = pairwise_sum(emp_star) * inv;
    out.e_pop_risk_wstar = pairwise_sum(pop_star) * inv;
    return out;
}

} // namespace agefl
