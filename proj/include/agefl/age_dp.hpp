// Age-dependent differential-privacy calculus and the adaptive Laplace
// mechanism: conversions between classic and age-dependent budgets,
// sensitivity, noise scales, and noise sampling.
#pragma once

#include "agefl/clients.hpp"
#include "agefl/random.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace agefl {

// Global age-dependent DP target (nats); must be positive and finite.
struct PrivacyRequirement {
    double eps_bar = 1.0;

    static PrivacyRequirement create(double eps_bar);
};

enum class NoiseMode { adaptive, constant };
enum class DeltaMode { spectral, exact };

// Age-dependent privacy level of an eps_c-DP mechanism observed through an
// aging discount delta: ln(1 + delta * (e^eps_c - 1)).
double age_epsilon(double eps_c, double delta);

// Classic budget needed so the age-dependent level equals eps_bar:
// ln((e^eps_bar - 1) / delta + 1). delta = 0 returns +infinity, meaning no
// finite classic budget is needed (callers emit zero noise).
double required_classic_eps(double eps_bar, double delta);

// l1-sensitivity of the mean estimator over a bounded value range.
double l1_sensitivity_mean(double lo, double hi, std::size_t n);

// Laplace scale sensitivity / eps_c. Throws on eps_c = 0 (the scale would be
// infinite); eps_c = +infinity yields scale 0.
double laplace_scale(double sensitivity, double eps_c);

// Inverse CDF of Laplace(eta) at u in (0,1).
double laplace_quantile(double eta, double u);

// One Laplace(eta) draw via the inverse CDF applied to the caller's stream.
double sample_laplace(double eta, UniformStream& rng);

// Aging discount Delta for a client observed `gap` steps after collection.
// Spectral mode is the default used by the privacy calculus; exact mode uses
// the reverse-kernel worst-case TV (gap 0 degenerates to 1 whenever at least
// two states are collectable, else 0).
double aging_discount(const MarkovChain& chain, int gap, DeltaMode mode);

struct NoiseEntry {
    double eps_c = 0.0;    // classic budget exerted; +infinity when delta = 0
    double eta = 0.0;      // Laplace scale in model-weight units; 0 = no noise
    double sigma_sq = 0.0; // 2 * eta^2
    double delta = 1.0;    // aging discount used to size the budget
    bool zero_noise = false;
};

struct NoisePlan {
    std::vector<NoiseEntry> entries;
    NoiseMode mode = NoiseMode::adaptive;
    int dimension = 1; // scalar weights here; kept for forward compatibility

    static NoisePlan no_noise(std::size_t n_clients);
};

// Core budget allocation given per-client aging discounts and sensitivities.
// Adaptive: eps_c_i sized per client. Constant: one Laplace scale, the
// largest adaptive scale, applied to every client; stored eps_c_i is the
// budget that scale actually exerts (s_i / eta).
NoisePlan build_noise_plan_from_deltas(std::span<const double> deltas,
                                       std::span<const double> sensitivities,
                                       PrivacyRequirement req, NoiseMode mode);

// Convenience wrapper computing the discounts from the clients' chains and
// the schedule gaps.
NoisePlan build_noise_plan(std::span<const ClientSpec> clients, const Schedule& schedule,
                           PrivacyRequirement req, NoiseMode mode,
                           DeltaMode delta_mode = DeltaMode::spectral);

// Worst achieved age-dependent epsilon across the plan's clients.
double achieved_eps_bar(const NoisePlan& plan);

} // namespace agefl
