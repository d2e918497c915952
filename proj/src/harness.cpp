#include "agefl/harness.hpp"

#include "agefl/random.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

namespace agefl {

std::string format_sig12(double value) {
    char buffer[48];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                      std::chars_format::general, 12);
    return std::string(buffer, result.ptr);
}

std::string schedule_to_string(const Schedule& schedule) {
    std::string out;
    for (std::size_t i = 0; i < schedule.t_c.size(); ++i) {
        if (i > 0) {
            out += '-';
        }
        out += std::to_string(schedule.t_c[i]);
    }
    return out;
}

namespace {

SearchOptions search_options_from(const ExperimentConfig& config) {
    SearchOptions options;
    options.trials = config.trials;
    options.delta_mode = config.flags.delta_mode;
    options.fse_mode = config.flags.fse_mode;
    options.bound_mode = config.flags.bound_mode;
    return options;
}

std::string sanitize_note(std::string note) {
    std::replace(note.begin(), note.end(), ',', ';');
    std::replace(note.begin(), note.end(), '\n', ' ');
    return note;
}

} // namespace

std::vector<ResultRow> run_sweep(const ExperimentConfig& config) {
    const std::vector<ClientSpec> clients = build_clients(config);
    const SearchOptions options = search_options_from(config);

    // The baseline statistics behind every bound evaluation depend only on
    // the schedule, so compute them once and share across the grid. Skipped
    // when the schedule space exceeds the enumeration budget; the schemes
    // that need enumeration then refuse individually.
    std::vector<BaselineStats> baseline_table;
    const std::vector<BaselineStats>* table_ptr = nullptr;
    try {
        const std::vector<Schedule> schedules =
            enumerate_schedules(clients.size(), config.t_agg);
        baseline_table = compute_baseline_table(clients, schedules, config.trials,
                                                mix_seed(config.seed, 1));
        table_ptr = &baseline_table;
    } catch (const std::invalid_argument&) {
        table_ptr = nullptr;
    }

    std::vector<ResultRow> rows;
    rows.reserve(config.schemes.size() * config.eps_bar_grid.size());
    for (SchemeId scheme : config.schemes) {
        for (double eps_bar : config.eps_bar_grid) {
            ResultRow row;
            row.scheme = to_string(scheme);
            row.eps_bar = eps_bar;
            try {
                const SchemeResult result =
                    run_scheme(scheme, clients, PrivacyRequirement::create(eps_bar),
                               config.t_agg, config.trials, config.seed, options, table_ptr);
                row.schedule = schedule_to_string(result.choice.schedule);
                row.mean_loss_diff = result.evaluation.mean;
                row.std_err = result.evaluation.std_err;
                row.mean_noise_power = result.evaluation.mean_noise_power;
                row.bound_total = result.bound_total;
                row.achieved_eps_bar = result.choice.achieved_eps_bar;
            } catch (const std::exception& e) {
                row.schedule = sanitize_note(std::string("error: ") + e.what());
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_sweep_csv(std::span<const ResultRow> rows, std::ostream& out) {
    out << kSweepCsvHeader << '\n';
    for (const auto& row : rows) {
        out << row.scheme << ',' << format_sig12(row.eps_bar) << ',' << row.schedule << ','
            << format_sig12(row.mean_loss_diff) << ',' << format_sig12(row.std_err) << ','
            << format_sig12(row.mean_noise_power) << ',' << format_sig12(row.bound_total)
            << ',' << format_sig12(row.achieved_eps_bar) << '\n';
    }
}

std::vector<CurvePoint> per_client_loss_curve(const ExperimentConfig& config,
                                              std::size_t client_index, double eps_bar) {
    const std::vector<ClientSpec> clients = build_clients(config);
    if (client_index >= clients.size()) {
        throw std::invalid_argument("per_client_loss_curve: client index out of range");
    }
    const PrivacyRequirement req = PrivacyRequirement::create(eps_bar);
    // One seed for every point: paired trajectories and noise draws across
    // collection times.
    const std::uint64_t seed = mix_seed(config.seed, 3);

    std::vector<CurvePoint> points;
    points.reserve(static_cast<std::size_t>(config.t_agg));
    for (int t_c = 1; t_c <= config.t_agg; ++t_c) {
        Schedule schedule;
        schedule.t_agg = config.t_agg;
        schedule.t_c.assign(clients.size(), config.t_agg);
        schedule.t_c[client_index] = t_c;
        const NoisePlan plan = build_noise_plan(clients, schedule, req, NoiseMode::adaptive,
                                                config.flags.delta_mode);
        const McSummary mc =
            monte_carlo_loss_diff(clients, schedule, plan, config.trials, seed);
        points.push_back(CurvePoint{t_c, mc.mean, mc.std_err});
    }
    return points;
}

void write_curve_csv(std::span<const CurvePoint> points, std::ostream& out) {
    out << "t_c,mean_loss_diff,std_err\n";
    for (const auto& p : points) {
        out << p.t_c << ',' << format_sig12(p.mean_loss_diff) << ','
            << format_sig12(p.std_err) << '\n';
    }
}

BoundReport bound_report(const ExperimentConfig& config, const Schedule& schedule,
                         double eps_bar) {
    const std::vector<ClientSpec> clients = build_clients(config);
    schedule.validate(clients.size());
    const PrivacyRequirement req = PrivacyRequirement::create(eps_bar);

    const NoisePlan plan = build_noise_plan(clients, schedule, req, NoiseMode::adaptive,
                                            config.flags.delta_mode);
    const BaselineStats baseline = baseline_stats(clients, schedule, config.trials,
                                                  mix_seed(config.seed, 1));
    BoundOptions bound_options;
    bound_options.fse_mode = config.flags.fse_mode;
    bound_options.bound_mode = config.flags.bound_mode;
    bound_options.fallback_eps = eps_bar;

    BoundReport report;
    report.breakdown = evaluate_bound(clients, schedule, plan, baseline, bound_options);
    for (std::size_t i = 0; i < clients.size(); ++i) {
        report.mi.push_back(mutual_information_age(clients[i].chain, schedule.gap(i)));
        report.delta.push_back(plan.entries[i].delta);
        report.eps_c.push_back(plan.entries[i].eps_c);
        report.eta.push_back(plan.entries[i].eta);
    }
    return report;
}

void print_bound_report(const BoundReport& report, std::ostream& out) {
    out << "gen_term      " << format_sig12(report.breakdown.gen_term) << '\n'
        << "baseline_term " << format_sig12(report.breakdown.baseline_term) << '\n'
        << "noise_term    " << format_sig12(report.breakdown.noise_term) << '\n'
        << "total         " << format_sig12(report.breakdown.total) << '\n';
    for (std::size_t i = 0; i < report.mi.size(); ++i) {
        out << "client " << (i + 1) << ": mi=" << format_sig12(report.mi[i])
            << " delta=" << format_sig12(report.delta[i])
            << " eps_c=" << format_sig12(report.eps_c[i])
            << " eta=" << format_sig12(report.eta[i]) << '\n';
    }
}

} // namespace agefl
