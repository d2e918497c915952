#include "agefl/age_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace agefl {

PrivacyRequirement PrivacyRequirement::create(double eps_bar) {
    if (!(eps_bar > 0.0) || !std::isfinite(eps_bar)) {
        throw std::invalid_argument("PrivacyRequirement: eps_bar must be positive and finite");
    }
    return PrivacyRequirement{eps_bar};
}

double age_epsilon(double eps_c, double delta) {
    if (!(eps_c >= 0.0)) {
        throw std::invalid_argument("age_epsilon: eps_c must be >= 0");
    }
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("age_epsilon: delta must lie in [0,1]");
    }
    if (delta == 0.0) {
        return 0.0; // full aging erases distinguishability, for any eps_c
    }
    return std::log1p(delta * std::expm1(eps_c));
}

double required_classic_eps(double eps_bar, double delta) {
    if (!(eps_bar > 0.0)) {
        throw std::invalid_argument("required_classic_eps: eps_bar must be > 0");
    }
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("required_classic_eps: delta must lie in [0,1]");
    }
    if (delta == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::log1p(std::expm1(eps_bar) / delta);
}

double l1_sensitivity_mean(double lo, double hi, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("l1_sensitivity_mean: dataset size must be >= 1");
    }
    if (!(hi > lo)) {
        throw std::invalid_argument("l1_sensitivity_mean: range must satisfy hi > lo");
    }
    return (hi - lo) / static_cast<double>(n);
}

double laplace_scale(double sensitivity, double eps_c) {
    if (!(sensitivity > 0.0)) {
        throw std::invalid_argument("laplace_scale: sensitivity must be > 0");
    }
    if (eps_c == 0.0) {
        throw std::invalid_argument("laplace_scale: eps_c = 0 would require infinite scale");
    }
    if (!(eps_c > 0.0)) {
        throw std::invalid_argument("laplace_scale: eps_c must be > 0");
    }
    return sensitivity / eps_c;
}

double laplace_quantile(double eta, double u) {
    if (!(eta > 0.0)) {
        throw std::invalid_argument("laplace_quantile: eta must be > 0");
    }
    if (!(u > 0.0 && u < 1.0)) {
        throw std::invalid_argument("laplace_quantile: u must lie in (0,1)");
    }
    const double centered = u - 0.5;
    if (centered == 0.0) {
        return 0.0;
    }
    const double sign = centered > 0.0 ? 1.0 : -1.0;
    return -eta * sign * std::log1p(-2.0 * std::abs(centered));
}

double sample_laplace(double eta, UniformStream& rng) {
    return laplace_quantile(eta, rng.next_unit());
}

double aging_discount(const MarkovChain& chain, int gap, DeltaMode mode) {
    if (mode == DeltaMode::spectral) {
        return delta_spectral_bound(chain, gap);
    }
    if (gap == 0) {
        // Zero age: conditioning states are the collectable ones themselves,
        // so distinct collectable states are perfectly distinguishable.
        std::size_t support = 0;
        for (double p : chain.collection_dist) {
            if (p > 0.0) {
                ++support;
            }
        }
        return support >= 2 ? 1.0 : 0.0;
    }
    return delta_exact(chain, gap);
}

NoisePlan NoisePlan::no_noise(std::size_t n_clients) {
    NoisePlan plan;
    plan.entries.resize(n_clients);
    for (auto& e : plan.entries) {
        e.eps_c = std::numeric_limits<double>::infinity();
        e.eta = 0.0;
        e.sigma_sq = 0.0;
        e.delta = 0.0;
        e.zero_noise = true;
    }
    return plan;
}

NoisePlan build_noise_plan_from_deltas(std::span<const double> deltas,
                                       std::span<const double> sensitivities,
                                       PrivacyRequirement req, NoiseMode mode) {
    if (deltas.size() != sensitivities.size() || deltas.empty()) {
        throw std::invalid_argument("build_noise_plan: inconsistent client count");
    }
    const std::size_t m = deltas.size();

    NoisePlan plan;
    plan.mode = mode;
    plan.entries.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        NoiseEntry& e = plan.entries[i];
        e.delta = deltas[i];
        e.eps_c = required_classic_eps(req.eps_bar, deltas[i]);
        e.zero_noise = deltas[i] == 0.0;
        e.eta = e.zero_noise ? 0.0 : laplace_scale(sensitivities[i], e.eps_c);
        e.sigma_sq = 2.0 * e.eta * e.eta;
    }

    if (mode == NoiseMode::constant) {
        double eta = 0.0;
        for (const auto& e : plan.entries) {
            eta = std::max(eta, e.eta);
        }
        for (std::size_t i = 0; i < m; ++i) {
            NoiseEntry& e = plan.entries[i];
            e.eta = eta;
            e.sigma_sq = 2.0 * eta * eta;
            // Budget the shared scale actually exerts for this client; at
            // most the adaptive budget, so the age-dependent target holds.
            e.eps_c = eta > 0.0 ? sensitivities[i] / eta
                                : std::numeric_limits<double>::infinity();
            e.zero_noise = eta == 0.0;
        }
    }
    return plan;
}

NoisePlan build_noise_plan(std::span<const ClientSpec> clients, const Schedule& schedule,
                           PrivacyRequirement req, NoiseMode mode, DeltaMode delta_mode) {
    schedule.validate(clients.size());
    std::vector<double> deltas(clients.size());
    std::vector<double> sens(clients.size());
    for (std::size_t i = 0; i < clients.size(); ++i) {
        deltas[i] = aging_discount(clients[i].chain, schedule.gap(i), delta_mode);
        sens[i] = clients[i].sensitivity;
    }
    return build_noise_plan_from_deltas(deltas, sens, req, mode);
}

double achieved_eps_bar(const NoisePlan& plan) {
    double worst = 0.0;
    for (const auto& e : plan.entries) {
        if (e.delta == 0.0) {
            continue; // age-dependent epsilon is 0 regardless of budget
        }
        worst = std::max(worst, age_epsilon(e.eps_c, e.delta));
    }
    return worst;
}

} // namespace agefl
