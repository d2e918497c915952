// agefl: age-aware scheduling experiments for differentially-private
// federated learning over Markov time-varying data.
//
// Subcommands: sweep (scheme x privacy-level CSV), curve (per-client
// staleness curve), bound (bound breakdown for a schedule), schedule (run a
// single scheme). AGEFL_THREADS caps worker threads.
#include "agefl/config.hpp"
#include "agefl/harness.hpp"
#include "agefl/random.hpp"
#include "agefl/scheduler.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

agefl::Schedule parse_schedule_arg(const std::string& text, int t_agg) {
    agefl::Schedule schedule;
    schedule.t_agg = t_agg;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        try {
            schedule.t_c.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--schedule", "'" + token + "' is not an integer");
        }
    }
    return schedule;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file '" + path + "'");
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Age-aware scheduling for differentially-private federated learning"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::size_t client_1based = 1;
    double eps_bar = 0.0;
    std::string schedule_text;
    std::string scheme_name;

    auto* sweep = app.add_subcommand("sweep", "Run every configured scheme over the "
                                              "privacy grid and write the result CSV");
    sweep->add_option("--config", config_path, "experiment config file")->required();
    sweep->add_option("--out", out_path, "output CSV path")->required();

    auto* curve = app.add_subcommand("curve", "Loss-difference curve versus one client's "
                                              "collection time (others stay fresh)");
    curve->add_option("--config", config_path, "experiment config file")->required();
    curve->add_option("--client", client_1based, "client index (1-based)")->required();
    curve->add_option("--eps-bar", eps_bar, "privacy requirement for the curve")->required();
    curve->add_option("--out", out_path, "output CSV path (default: stdout)");

    auto* bound = app.add_subcommand("bound", "Bound breakdown and per-client privacy "
                                              "quantities for a fixed schedule");
    bound->add_option("--config", config_path, "experiment config file")->required();
    bound->add_option("--schedule", schedule_text, "collection times, comma separated")
        ->required();
    bound->add_option("--eps-bar", eps_bar, "privacy requirement (default: first grid value)");

    auto* schedule_cmd = app.add_subcommand("schedule", "Select and evaluate a schedule "
                                                        "with one scheme");
    schedule_cmd->add_option("--config", config_path, "experiment config file")->required();
    schedule_cmd->add_option("--scheme", scheme_name, "one of the six scheme ids")->required();
    schedule_cmd->add_option("--eps-bar", eps_bar,
                             "privacy requirement (default: first grid value)");

    CLI11_PARSE(app, argc, argv);

    try {
        const agefl::ExperimentConfig config = agefl::load_config(config_path);

        if (sweep->parsed()) {
            const auto rows = agefl::run_sweep(config);
            auto out = open_output(out_path);
            agefl::write_sweep_csv(rows, out);
            return 0;
        }

        if (curve->parsed()) {
            if (client_1based == 0 || client_1based > config.clients.size()) {
                throw std::runtime_error("--client out of range (config has " +
                                         std::to_string(config.clients.size()) + " clients)");
            }
            const auto points =
                agefl::per_client_loss_curve(config, client_1based - 1, eps_bar);
            if (out_path.empty()) {
                agefl::write_curve_csv(points, std::cout);
            } else {
                auto out = open_output(out_path);
                agefl::write_curve_csv(points, out);
            }
            return 0;
        }

        if (eps_bar == 0.0) {
            eps_bar = config.eps_bar_grid.front();
        }

        if (bound->parsed()) {
            const agefl::Schedule schedule = parse_schedule_arg(schedule_text, config.t_agg);
            const auto report = agefl::bound_report(config, schedule, eps_bar);
            agefl::print_bound_report(report, std::cout);
            return 0;
        }

        if (schedule_cmd->parsed()) {
            const auto clients = agefl::build_clients(config);
            agefl::SearchOptions options;
            options.trials = config.trials;
            options.delta_mode = config.flags.delta_mode;
            options.fse_mode = config.flags.fse_mode;
            options.bound_mode = config.flags.bound_mode;
            const auto result = agefl::run_scheme(
                agefl::parse_scheme(scheme_name), clients,
                agefl::PrivacyRequirement::create(eps_bar), config.t_agg, config.trials,
                config.seed, options);
            std::cout << "scheme            " << agefl::to_string(result.scheme) << '\n'
                      << "schedule          "
                      << agefl::schedule_to_string(result.choice.schedule) << '\n'
                      << "selection_score   " << agefl::format_sig12(result.choice.score)
                      << '\n'
                      << "bound_total       " << agefl::format_sig12(result.bound_total)
                      << '\n'
                      << "mean_loss_diff    " << agefl::format_sig12(result.evaluation.mean)
                      << '\n'
                      << "std_err           "
                      << agefl::format_sig12(result.evaluation.std_err) << '\n'
                      << "mean_noise_power  "
                      << agefl::format_sig12(result.evaluation.mean_noise_power) << '\n'
                      << "achieved_eps_bar  "
                      << agefl::format_sig12(result.choice.achieved_eps_bar) << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "agefl: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
