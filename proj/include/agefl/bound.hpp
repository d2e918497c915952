// Schedule-scoring upper bound on the expected loss difference: the
// sub-exponential specialization plus the generic
// inverse-cumulant machinery it derives from.
#pragma once

#include "agefl/age_dp.hpp"
#include "agefl/clients.hpp"
#include "agefl/fl_sim.hpp"

#include <functional>
#include <span>

namespace agefl {

// Sub-exponential tail parameters of the per-sample loss.
struct SubExpParams {
    double nu = 1.0;
    double alpha = 1.0;

    static SubExpParams create(double nu, double alpha);
};

// `paper` keeps the sqrt(4 nu I) small-I branch exactly as published;
// `canonical` replaces it with the standard sub-Gaussian-regime inverse
// sqrt(2 nu^2 I). Both share the nu^2/(2 alpha^2) + alpha I large-I branch.
enum class FseMode { paper, canonical };

// `cancelled` uses the baseline term that falls out of the derivation chain,
// E[pop risk of W] - E[empirical loss of w*]; `paper_literal` additionally
// keeps the published display's + pop-risk-of-w* term.
enum class BoundMode { cancelled, paper_literal };

double f_se(double mi, SubExpParams params, FseMode mode = FseMode::paper);

// Numerical inf over lambda in (0, b_plus] of (mi + psi(lambda)) / lambda:
// geometric grid of `grid_points` plus golden-section refinement. psi must be
// convex with psi(0) = 0.
double psi_inverse_generic(double mi, const std::function<double(double)>& psi,
                           double b_plus, std::size_t grid_points = 64);

// Data-processing ceiling on I(aggregate; fresh sample) for one client: the
// mutual information across that client's age gap.
double mi_upper_bound_for_client(const ClientSpec& client, const Schedule& schedule,
                                 std::size_t index);

// The evaluated bound split into its three terms (total = gen + baseline +
// noise exactly as stored).
struct BoundBreakdown {
    double gen_term = 0.0;
    double baseline_term = 0.0;
    double noise_term = 0.0;
    double total = 0.0;
};

struct BoundOptions {
    FseMode fse_mode = FseMode::paper;
    BoundMode bound_mode = BoundMode::cancelled;
    // Zero-noise clients get nu = alpha = 2 (s_i / fallback_eps)^2, the
    // no-aging scale for this requirement; keeps the score finite and
    // comparable.
    double fallback_eps = 1.0;
};

BoundBreakdown evaluate_bound(std::span<const ClientSpec> clients, const Schedule& schedule,
                              const NoisePlan& plan, const BaselineStats& baseline,
                              const BoundOptions& options = {});

} // namespace agefl
