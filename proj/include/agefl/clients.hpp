// Client population and collection schedules shared by the privacy calculus,
// the bound engine, and the simulator.
#pragma once

#include "agefl/markov.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace agefl {

// One participating client: its data chain, local dataset size, the
// l1-sensitivity of its learning output, and its aggregation weight
// (|D_i| / |D|).
struct ClientSpec {
    MarkovChain chain;
    std::size_t n_samples = 0;
    double sensitivity = 0.0;
    double weight = 0.0;
};

// Builds a client group from chains and dataset sizes: weights are
// n_i / sum(n), sensitivity is (max label - min label) / n_i.
std::vector<ClientSpec> make_client_group(std::vector<MarkovChain> chains,
                                          const std::vector<std::size_t>& n_samples);

// Checks weight normalization (sum = 1 and weight = n_i / sum(n), both within
// 1e-12); throws std::invalid_argument otherwise.
void validate_client_group(std::span<const ClientSpec> clients);

// Per-client collection times plus the aggregation time; valid when
// 1 <= t_c[i] <= t_agg for every client.
struct Schedule {
    std::vector<int> t_c;
    int t_agg = 0;

    int gap(std::size_t client) const { return t_agg - t_c[client]; }

    // Throws std::invalid_argument unless the schedule is valid for
    // `n_clients` clients.
    void validate(std::size_t n_clients) const;
};

} // namespace agefl
