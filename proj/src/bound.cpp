#include "agefl/bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace agefl {

SubExpParams SubExpParams::create(double nu, double alpha) {
    if (!(nu > 0.0) || !std::isfinite(nu) || !(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("SubExpParams: nu and alpha must be positive and finite");
    }
    return SubExpParams{nu, alpha};
}

double f_se(double mi, SubExpParams params, FseMode mode) {
    if (!(mi >= 0.0)) {
        throw std::invalid_argument("f_se: mutual information must be >= 0");
    }
    const double threshold = params.nu * params.nu / (2.0 * params.alpha * params.alpha);
    if (mi <= threshold) {
        return mode == FseMode::paper ? std::sqrt(4.0 * params.nu * mi)
                                      : std::sqrt(2.0 * params.nu * params.nu * mi);
    }
    return threshold + params.alpha * mi;
}

namespace {

// Golden-section minimization of a unimodal function on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int iter = 0; iter < 200 && (b - a) > 1e-12 * std::max(1.0, std::abs(b)); ++iter) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return std::min(fc, fd);
}

} // namespace

double psi_inverse_generic(double mi, const std::function<double(double)>& psi,
                           double b_plus, std::size_t grid_points) {
    if (!(mi >= 0.0)) {
        throw std::invalid_argument("psi_inverse_generic: mi must be >= 0");
    }
    if (!(b_plus > 0.0)) {
        throw std::invalid_argument("psi_inverse_generic: b_plus must be > 0");
    }
    if (grid_points < 2) {
        throw std::invalid_argument("psi_inverse_generic: need at least 2 grid points");
    }

    auto objective = [&](double lambda) { return (mi + psi(lambda)) / lambda; };

    // Geometric grid over (0, b_plus]; the objective is unimodal for convex
    // psi, so refine around the best grid point.
    const double lo = b_plus * 1e-9;
    const double ratio = std::pow(b_plus / lo, 1.0 / static_cast<double>(grid_points - 1));
    std::size_t best_index = 0;
    double best_value = std::numeric_limits<double>::infinity();
    double lambda = lo;
    std::vector<double> grid(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
        grid[i] = (i + 1 == grid_points) ? b_plus : lambda;
        const double value = objective(grid[i]);
        if (!std::isfinite(psi(grid[i]))) {
            throw std::invalid_argument("psi_inverse_generic: psi not finite on the grid");
        }
        if (value < best_value) {
            best_value = value;
            best_index = i;
        }
        lambda *= ratio;
    }

    const double left = best_index == 0 ? grid[0] : grid[best_index - 1];
    const double right = best_index + 1 == grid_points ? grid[grid_points - 1]
                                                       : grid[best_index + 1];
    return std::min(best_value, golden_min(objective, left, right));
}

double mi_upper_bound_for_client(const ClientSpec& client, const Schedule& schedule,
                                 std::size_t index) {
    if (index >= schedule.t_c.size()) {
        throw std::invalid_argument("mi_upper_bound_for_client: client index out of range");
    }
    schedule.validate(schedule.t_c.size());
    return mutual_information_age(client.chain, schedule.gap(index));
}

BoundBreakdown evaluate_bound(std::span<const ClientSpec> clients, const Schedule& schedule,
                              const NoisePlan& plan, const BaselineStats& baseline,
                              const BoundOptions& options) {
    const std::size_t m = clients.size();
    if (plan.entries.size() != m || m == 0) {
        throw std::invalid_argument("evaluate_bound: plan/client count mismatch");
    }
    schedule.validate(m);
    if (!std::isfinite(baseline.e_pop_risk_w) || !std::isfinite(baseline.e_emp_loss_wstar)) {
        throw std::invalid_argument("evaluate_bound: baseline stats missing or non-finite");
    }

    BoundBreakdown out;
    for (std::size_t i = 0; i < m; ++i) {
        const double mi = mutual_information_age(clients[i].chain, schedule.gap(i));
        double scale_sq = 2.0 * plan.entries[i].eta * plan.entries[i].eta;
        if (plan.entries[i].eta == 0.0) {
            const double eta0 = clients[i].sensitivity / options.fallback_eps;
            scale_sq = 2.0 * eta0 * eta0;
        }
        const SubExpParams params = SubExpParams::create(scale_sq, scale_sq);
        out.gen_term += clients[i].weight * f_se(mi, params, options.fse_mode);
        out.noise_term += plan.entries[i].sigma_sq;
    }
    out.noise_term /= static_cast<double>(m);

    out.baseline_term = baseline.e_pop_risk_w - baseline.e_emp_loss_wstar;
    if (options.bound_mode == BoundMode::paper_literal) {
        out.baseline_term += baseline.e_pop_risk_wstar;
    }
    out.total = out.gen_term + out.baseline_term + out.noise_term;
    return out;
}

} // namespace agefl
