// Experiment orchestration and result emission: scheme sweeps, per-client
// staleness curves, and bound diagnostics, all as deterministic CSV/text.
#pragma once

#include "agefl/config.hpp"
#include "agefl/scheduler.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace agefl {

// 12-significant-digit decimal-dot formatting, locale independent.
std::string format_sig12(double value);

inline constexpr const char* kSweepCsvHeader =
    "scheme,eps_bar,schedule,mean_loss_diff,std_err,mean_noise_power,bound_total,"
    "achieved_eps_bar";

struct ResultRow {
    std::string scheme;
    double eps_bar = 0.0;
    std::string schedule; // collection times joined by '-'; error note on refusal
    double mean_loss_diff = 0.0;
    double std_err = 0.0;
    double mean_noise_power = 0.0;
    double bound_total = 0.0;
    double achieved_eps_bar = 0.0;
};

std::string schedule_to_string(const Schedule& schedule);

// One row per (scheme, eps_bar) pair. Scheduler refusals become rows whose
// schedule column carries the error note; the sweep continues.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config);

void write_sweep_csv(std::span<const ResultRow> rows, std::ostream& out);

struct CurvePoint {
    int t_c = 0;
    double mean_loss_diff = 0.0;
    double std_err = 0.0;
};

// Sweeps one client's collection time over [1, t_agg] with the other clients
// fixed at the freshest time, adaptive noise at eps_bar.
std::vector<CurvePoint> per_client_loss_curve(const ExperimentConfig& config,
                                              std::size_t client_index, double eps_bar);

void write_curve_csv(std::span<const CurvePoint> points, std::ostream& out);

struct BoundReport {
    BoundBreakdown breakdown;
    std::vector<double> mi;
    std::vector<double> delta;
    std::vector<double> eps_c;
    std::vector<double> eta;
};

BoundReport bound_report(const ExperimentConfig& config, const Schedule& schedule,
                         double eps_bar);

void print_bound_report(const BoundReport& report, std::ostream& out);

} // namespace agefl
