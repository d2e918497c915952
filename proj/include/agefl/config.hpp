// Declarative experiment configuration: parsing, validation, and client
// construction.
#pragma once

#include "agefl/age_dp.hpp"
#include "agefl/bound.hpp"
#include "agefl/clients.hpp"
#include "agefl/scheduler.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace agefl {

// Configuration errors carry "name:line:" anchors.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ClientConfig {
    std::vector<double> state_values;
    std::optional<double> q;          // cyclic chain parameter ...
    std::optional<Matrix> transition; // ... or an explicit row-stochastic matrix
    std::vector<double> collection_dist;
    std::size_t n_samples = 0;
};

struct RunFlags {
    DeltaMode delta_mode = DeltaMode::spectral;
    FseMode fse_mode = FseMode::paper;
    BoundMode bound_mode = BoundMode::cancelled;
};

struct ExperimentConfig {
    std::vector<ClientConfig> clients;
    int t_agg = 12; // the aggregation horizon; 12 unless the config says otherwise
    std::vector<double> eps_bar_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<SchemeId> schemes;
    std::size_t trials = 1000;
    std::uint64_t seed = 0; // must be set explicitly; no wall-clock default
    RunFlags flags;
};

// Parse from text; `name` is used in error anchors.
ExperimentConfig parse_config(const std::string& text, const std::string& name);

ExperimentConfig load_config(const std::string& path);

// Materialize the client group (chains, weights, sensitivities).
std::vector<ClientSpec> build_clients(const ExperimentConfig& config);

} // namespace agefl
