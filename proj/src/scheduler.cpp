#include "agefl/scheduler.hpp"

#include "agefl/parallel.hpp"
#include "agefl/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace agefl {

std::string to_string(SchemeId scheme) {
    switch (scheme) {
    case SchemeId::random_constant: return "random_constant";
    case SchemeId::random_adaptive: return "random_adaptive";
    case SchemeId::proposed_constant: return "proposed_constant";
    case SchemeId::proposed_adaptive: return "proposed_adaptive";
    case SchemeId::optimal_constant: return "optimal_constant";
    case SchemeId::optimal_adaptive: return "optimal_adaptive";
    }
    throw std::invalid_argument("unknown scheme id");
}

SchemeId parse_scheme(const std::string& name) {
    if (name == "random_constant") return SchemeId::random_constant;
    if (name == "random_adaptive") return SchemeId::random_adaptive;
    if (name == "proposed_constant") return SchemeId::proposed_constant;
    if (name == "proposed_adaptive") return SchemeId::proposed_adaptive;
    if (name == "optimal_constant") return SchemeId::optimal_constant;
    if (name == "optimal_adaptive") return SchemeId::optimal_adaptive;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

bool scheme_uses_adaptive_noise(SchemeId scheme) {
    return scheme == SchemeId::random_adaptive || scheme == SchemeId::proposed_adaptive ||
           scheme == SchemeId::optimal_adaptive;
}

std::vector<Schedule> enumerate_schedules(std::size_t m, int t_agg, std::size_t budget) {
    if (m == 0 || t_agg < 1) {
        throw std::invalid_argument("enumerate_schedules: need m >= 1 and t_agg >= 1");
    }
    std::size_t count = 1;
    for (std::size_t i = 0; i < m; ++i) {
        if (count > budget / static_cast<std::size_t>(t_agg)) {
            // Compute the would-be count in floating point for the message.
            const double total = std::pow(static_cast<double>(t_agg), static_cast<double>(m));
            throw std::invalid_argument(
                "enumerate_schedules: " + std::to_string(static_cast<unsigned long long>(total)) +
                " schedules exceed the budget of " + std::to_string(budget));
        }
        count *= static_cast<std::size_t>(t_agg);
    }

    std::vector<Schedule> out;
    out.reserve(count);
    Schedule current;
    current.t_agg = t_agg;
    current.t_c.assign(m, 1);
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(current);
        // Lexicographic increment: last coordinate fastest.
        for (std::size_t i = m; i-- > 0;) {
            if (current.t_c[i] < t_agg) {
                ++current.t_c[i];
                break;
            }
            current.t_c[i] = 1;
        }
    }
    return out;
}

std::size_t argmin_lex(std::span<const double> scores) {
    if (scores.empty()) {
        throw std::invalid_argument("argmin_lex: empty score list");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] < scores[best]) {
            best = i;
        }
    }
    return best;
}

namespace {

// Rank of a schedule in the lexicographic enumeration over [1, t_agg]^m.
std::size_t schedule_rank(const Schedule& schedule) {
    std::size_t rank = 0;
    for (int t : schedule.t_c) {
        rank = rank * static_cast<std::size_t>(schedule.t_agg) +
               static_cast<std::size_t>(t - 1);
    }
    return rank;
}

ScheduleChoice make_choice(std::span<const ClientSpec> clients, Schedule schedule,
                           PrivacyRequirement req, NoiseMode mode, DeltaMode delta_mode,
                           double score) {
    ScheduleChoice choice;
    choice.plan = build_noise_plan(clients, schedule, req, mode, delta_mode);
    choice.schedule = std::move(schedule);
    choice.score = score;
    choice.achieved_eps_bar = achieved_eps_bar(choice.plan);
    return choice;
}

double bound_total_for(std::span<const ClientSpec> clients, const Schedule& schedule,
                       const NoisePlan& plan, PrivacyRequirement req,
                       const SearchOptions& options, const BaselineStats& baseline) {
    BoundOptions bound_options;
    bound_options.fse_mode = options.fse_mode;
    bound_options.bound_mode = options.bound_mode;
    bound_options.fallback_eps = req.eps_bar;
    return evaluate_bound(clients, schedule, plan, baseline, bound_options).total;
}

} // namespace

std::vector<BaselineStats> compute_baseline_table(std::span<const ClientSpec> clients,
                                                  std::span<const Schedule> schedules,
                                                  std::size_t trials, std::uint64_t seed) {
    std::vector<BaselineStats> table(schedules.size());
    parallel_for(schedules.size(), [&](std::size_t k) {
        table[k] = baseline_stats(clients, schedules[k], trials, seed, /*parallel=*/false);
    });
    return table;
}

ScheduleChoice choose_schedule_bound(std::span<const ClientSpec> clients,
                                     PrivacyRequirement req, int t_agg, NoiseMode mode,
                                     const SearchOptions& options,
                                     const std::vector<BaselineStats>* baseline_table) {
    const std::vector<Schedule> schedules = enumerate_schedules(clients.size(), t_agg);
    if (baseline_table != nullptr && baseline_table->size() != schedules.size()) {
        throw std::invalid_argument("choose_schedule_bound: baseline table size mismatch");
    }

    std::vector<double> scores(schedules.size());
    parallel_for(schedules.size(), [&](std::size_t k) {
        const NoisePlan plan =
            build_noise_plan(clients, schedules[k], req, mode, options.delta_mode);
        const BaselineStats baseline =
            baseline_table != nullptr
                ? (*baseline_table)[k]
                : baseline_stats(clients, schedules[k], options.trials, options.seed,
                                 /*parallel=*/false);
        scores[k] = bound_total_for(clients, schedules[k], plan, req, options, baseline);
    });

    const std::size_t best = argmin_lex(scores);
    return make_choice(clients, schedules[best], req, mode, options.delta_mode, scores[best]);
}

ScheduleChoice choose_schedule_sim(std::span<const ClientSpec> clients,
                                   PrivacyRequirement req, int t_agg, NoiseMode mode,
                                   const SearchOptions& options) {
    const std::vector<Schedule> schedules = enumerate_schedules(clients.size(), t_agg);
    std::vector<double> scores(schedules.size());
    parallel_for(schedules.size(), [&](std::size_t k) {
        const NoisePlan plan =
            build_noise_plan(clients, schedules[k], req, mode, options.delta_mode);
        scores[k] = monte_carlo_loss_diff(clients, schedules[k], plan, options.trials,
                                          options.seed, /*parallel=*/false)
                        .mean;
    });

    const std::size_t best = argmin_lex(scores);
    return make_choice(clients, schedules[best], req, mode, options.delta_mode, scores[best]);
}

SchemeResult run_scheme(SchemeId scheme, std::span<const ClientSpec> clients,
                        PrivacyRequirement req, int t_agg, std::size_t trials,
                        std::uint64_t seed, const SearchOptions& options,
                        const std::vector<BaselineStats>* baseline_table) {
    validate_client_group(clients);
    SearchOptions search = options;
    search.trials = trials;
    search.seed = mix_seed(seed, 1);
    const std::uint64_t eval_seed = mix_seed(seed, 2);
    const NoiseMode mode =
        scheme_uses_adaptive_noise(scheme) ? NoiseMode::adaptive : NoiseMode::constant;

    SchemeResult result;
    result.scheme = scheme;
    switch (scheme) {
    case SchemeId::random_constant:
    case SchemeId::random_adaptive: {
        // One uniform schedule per experiment seed.
        UniformStream rng(search.seed);
        Schedule schedule;
        schedule.t_agg = t_agg;
        schedule.t_c.resize(clients.size());
        for (auto& t : schedule.t_c) {
            t = 1 + std::min<int>(t_agg - 1,
                                  static_cast<int>(rng.next_unit() * t_agg));
        }
        result.choice = make_choice(clients, std::move(schedule), req, mode,
                                    search.delta_mode, 0.0);
        break;
    }
    case SchemeId::proposed_constant:
    case SchemeId::proposed_adaptive:
        result.choice =
            choose_schedule_bound(clients, req, t_agg, mode, search, baseline_table);
        break;
    case SchemeId::optimal_constant:
    case SchemeId::optimal_adaptive:
        result.choice = choose_schedule_sim(clients, req, t_agg, mode, search);
        break;
    }

    // Bound of the chosen schedule, scored like choose_schedule_bound would.
    const std::size_t rank = schedule_rank(result.choice.schedule);
    const BaselineStats baseline =
        baseline_table != nullptr && rank < baseline_table->size()
            ? (*baseline_table)[rank]
            : baseline_stats(clients, result.choice.schedule, search.trials, search.seed);
    result.bound_total = bound_total_for(clients, result.choice.schedule,
                                         result.choice.plan, req, search, baseline);
    if (scheme == SchemeId::random_constant || scheme == SchemeId::random_adaptive) {
        result.choice.score = result.bound_total;
    }

    result.evaluation = monte_carlo_loss_diff(clients, result.choice.schedule,
                                              result.choice.plan, trials, eval_seed);
    return result;
}

std::vector<EtaSweepPoint> constant_noise_sweep(std::span<const ClientSpec> clients,
                                                std::span<const double> eta_grid, int t_agg,
                                                const SearchOptions& options) {
    const std::vector<Schedule> schedules = enumerate_schedules(clients.size(), t_agg);
    const std::vector<BaselineStats> table =
        compute_baseline_table(clients, schedules, options.trials, options.seed);

    std::vector<EtaSweepPoint> out;
    out.reserve(eta_grid.size());
    for (double eta : eta_grid) {
        if (!(eta > 0.0)) {
            throw std::invalid_argument("constant_noise_sweep: eta must be > 0");
        }
        std::vector<double> scores(schedules.size());
        parallel_for(schedules.size(), [&](std::size_t k) {
            NoisePlan plan;
            plan.mode = NoiseMode::constant;
            plan.entries.resize(clients.size());
            for (std::size_t i = 0; i < clients.size(); ++i) {
                NoiseEntry& e = plan.entries[i];
                e.eta = eta;
                e.sigma_sq = 2.0 * eta * eta;
                e.eps_c = clients[i].sensitivity / eta;
                e.delta = aging_discount(clients[i].chain, schedules[k].gap(i),
                                         options.delta_mode);
                e.zero_noise = false;
            }
            BoundOptions bound_options;
            bound_options.fse_mode = options.fse_mode;
            bound_options.bound_mode = options.bound_mode;
            bound_options.fallback_eps = 1.0; // unused: eta > 0 everywhere
            scores[k] =
                evaluate_bound(clients, schedules[k], plan, table[k], bound_options).total;
        });
        const std::size_t best = argmin_lex(scores);

        EtaSweepPoint point;
        point.eta = eta;
        point.schedule = schedules[best];
        point.bound_total = scores[best];
        double worst = 0.0;
        for (std::size_t i = 0; i < clients.size(); ++i) {
            const double delta = aging_discount(clients[i].chain, schedules[best].gap(i),
                                                options.delta_mode);
            worst = std::max(worst, age_epsilon(clients[i].sensitivity / eta, delta));
        }
        point.achieved_eps_bar = worst;
        out.push_back(std::move(point));
    }
    return out;
}

} // namespace agefl
