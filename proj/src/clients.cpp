#include "agefl/clients.hpp"

#include "agefl/age_dp.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace agefl {

std::vector<ClientSpec> make_client_group(std::vector<MarkovChain> chains,
                                          const std::vector<std::size_t>& n_samples) {
    if (chains.empty() || chains.size() != n_samples.size()) {
        throw std::invalid_argument("make_client_group: inconsistent client count");
    }
    std::size_t total = 0;
    for (std::size_t n : n_samples) {
        if (n == 0) {
            throw std::invalid_argument("make_client_group: every client needs n_samples >= 1");
        }
        total += n;
    }
    std::vector<ClientSpec> clients(chains.size());
    for (std::size_t i = 0; i < chains.size(); ++i) {
        ClientSpec& c = clients[i];
        c.chain = std::move(chains[i]);
        c.n_samples = n_samples[i];
        c.sensitivity = l1_sensitivity_mean(c.chain.state_values.front(),
                                            c.chain.state_values.back(), c.n_samples);
        c.weight = static_cast<double>(c.n_samples) / static_cast<double>(total);
    }
    return clients;
}

void validate_client_group(std::span<const ClientSpec> clients) {
    if (clients.empty()) {
        throw std::invalid_argument("client group is empty");
    }
    std::size_t total = 0;
    for (const auto& c : clients) {
        total += c.n_samples;
    }
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < clients.size(); ++i) {
        const double expected =
            static_cast<double>(clients[i].n_samples) / static_cast<double>(total);
        if (std::abs(clients[i].weight - expected) > 1e-12) {
            throw std::invalid_argument("client " + std::to_string(i) +
                                        ": weight does not equal n_samples / total");
        }
        weight_sum += clients[i].weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-12) {
        throw std::invalid_argument("client weights sum to " + std::to_string(weight_sum));
    }
}

void Schedule::validate(std::size_t n_clients) const {
    if (t_c.size() != n_clients) {
        throw std::invalid_argument("Schedule: t_c has " + std::to_string(t_c.size()) +
                                    " entries, expected " + std::to_string(n_clients));
    }
    for (std::size_t i = 0; i < t_c.size(); ++i) {
        if (t_c[i] < 1 || t_c[i] > t_agg) {
            throw std::invalid_argument("Schedule: t_c[" + std::to_string(i) + "] = " +
                                        std::to_string(t_c[i]) + " outside [1, " +
                                        std::to_string(t_agg) + "]");
        }
    }
}

} // namespace agefl
