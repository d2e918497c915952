#include "agefl/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace agefl {

namespace {

std::string trimmed(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
        --end;
    }
    return s.substr(begin, end - begin);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string token;
    while (in >> token) {
        out.push_back(token);
    }
    return out;
}

struct Anchor {
    const std::string& name;
    int line;

    [[noreturn]] void fail(const std::string& message) const {
        throw ConfigError(name + ":" + std::to_string(line) + ": " + message);
    }
};

double parse_double(const std::string& token, const Anchor& at, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size() || !std::isfinite(v)) {
            at.fail(key + ": '" + token + "' is not a finite number");
        }
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        at.fail(key + ": '" + token + "' is not a number");
    }
}

std::vector<double> parse_double_list(const std::string& value, const Anchor& at,
                                      const std::string& key) {
    std::vector<double> out;
    for (const auto& token : split_ws(value)) {
        out.push_back(parse_double(token, at, key));
    }
    if (out.empty()) {
        at.fail(key + ": expected at least one number");
    }
    return out;
}

std::uint64_t parse_u64(const std::string& token, const Anchor& at, const std::string& key) {
    std::uint64_t v = 0;
    const auto* begin = token.data();
    const auto* end = begin + token.size();
    const auto result = std::from_chars(begin, end, v);
    if (result.ec != std::errc{} || result.ptr != end) {
        at.fail(key + ": '" + token + "' is not a non-negative integer");
    }
    return v;
}

// Per-client keys remember the line they came from so validation can anchor
// its messages.
struct PendingClient {
    ClientConfig config;
    int header_line = 0;
    int transition_line = 0;
    int collection_line = 0;
    bool has_state_values = false;
    bool has_collection = false;
    bool has_n_samples = false;
};

void validate_client(const PendingClient& pending, std::size_t index, const std::string& name) {
    const std::string who = "client " + std::to_string(index + 1);
    const Anchor header{name, pending.header_line};
    if (!pending.has_state_values) {
        header.fail(who + ": missing state_values");
    }
    if (!pending.has_collection) {
        header.fail(who + ": missing collection_dist");
    }
    if (!pending.has_n_samples) {
        header.fail(who + ": missing n_samples");
    }
    if (!pending.config.q.has_value() && !pending.config.transition.has_value()) {
        header.fail(who + ": needs either q or transition");
    }
    if (pending.config.q.has_value() && pending.config.transition.has_value()) {
        header.fail(who + ": q and transition are mutually exclusive");
    }
    const std::size_t n = pending.config.state_values.size();
    if (n < 2) {
        header.fail(who + ": needs at least 2 states");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(pending.config.state_values[i] < pending.config.state_values[i + 1])) {
            header.fail(who + ": state_values must be strictly increasing");
        }
    }
    if (pending.config.collection_dist.size() != n) {
        Anchor{name, pending.collection_line}.fail(
            who + ": collection_dist has " + std::to_string(pending.config.collection_dist.size()) +
            " entries, expected " + std::to_string(n));
    }
    double sum = 0.0;
    for (double p : pending.config.collection_dist) {
        if (p < 0.0 || p > 1.0) {
            Anchor{name, pending.collection_line}.fail(who + ": collection_dist entry " +
                                                       std::to_string(p) + " outside [0,1]");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        Anchor{name, pending.collection_line}.fail(who + ": collection_dist sums to " +
                                                   std::to_string(sum));
    }
    if (pending.config.q.has_value()) {
        const double q = *pending.config.q;
        if (!(q >= 0.0 && q <= 1.0)) {
            header.fail(who + ": q = " + std::to_string(q) + " outside [0,1]");
        }
    }
    if (pending.config.transition.has_value()) {
        const Matrix& t = *pending.config.transition;
        const Anchor at{name, pending.transition_line};
        if (t.n != n) {
            at.fail(who + ": transition is " + std::to_string(t.n) + "x" + std::to_string(t.n) +
                    ", expected " + std::to_string(n) + "x" + std::to_string(n));
        }
        for (std::size_t r = 0; r < n; ++r) {
            double row_sum = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                if (t(r, c) < 0.0 || t(r, c) > 1.0) {
                    at.fail(who + ": transition row " + std::to_string(r + 1) + " entry " +
                            std::to_string(t(r, c)) + " outside [0,1]");
                }
                row_sum += t(r, c);
            }
            if (std::abs(row_sum - 1.0) > 1e-12) {
                at.fail(who + ": transition row " + std::to_string(r + 1) + " sums to " +
                        std::to_string(row_sum) + ", expected 1");
            }
        }
    }
}

Matrix parse_transition(const std::string& value, const Anchor& at) {
    // Rows separated by ';', entries by whitespace.
    std::vector<std::vector<double>> rows;
    std::string row_text;
    std::istringstream in(value);
    while (std::getline(in, row_text, ';')) {
        std::vector<double> row;
        for (const auto& token : split_ws(row_text)) {
            row.push_back(parse_double(token, at, "transition"));
        }
        if (!row.empty()) {
            rows.push_back(std::move(row));
        }
    }
    if (rows.empty()) {
        at.fail("transition: expected ';'-separated rows");
    }
    const std::size_t n = rows.size();
    Matrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (rows[r].size() != n) {
            at.fail("transition: row " + std::to_string(r + 1) + " has " +
                    std::to_string(rows[r].size()) + " entries, expected " + std::to_string(n));
        }
        for (std::size_t c = 0; c < n; ++c) {
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

} // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& name) {
    ExperimentConfig config;
    config.schemes = {SchemeId::random_constant,  SchemeId::random_adaptive,
                      SchemeId::proposed_constant, SchemeId::proposed_adaptive,
                      SchemeId::optimal_constant,  SchemeId::optimal_adaptive};

    std::vector<PendingClient> clients;
    bool in_client = false;
    bool seed_seen = false;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const Anchor at{name, line_no};
        std::string line = raw;
        if (const std::size_t hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        line = trimmed(line);
        if (line.empty()) {
            continue;
        }
        if (line == "[client]") {
            clients.emplace_back();
            clients.back().header_line = line_no;
            in_client = true;
            continue;
        }
        if (line.front() == '[') {
            at.fail("unknown section '" + line + "' (only [client] is recognized)");
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            at.fail("expected 'key = value'");
        }
        const std::string key = trimmed(line.substr(0, eq));
        const std::string value = trimmed(line.substr(eq + 1));
        if (value.empty()) {
            at.fail(key + ": empty value");
        }

        if (in_client) {
            PendingClient& client = clients.back();
            if (key == "state_values") {
                client.config.state_values = parse_double_list(value, at, key);
                client.has_state_values = true;
            } else if (key == "q") {
                client.config.q = parse_double(value, at, key);
            } else if (key == "transition") {
                client.config.transition = parse_transition(value, at);
                client.transition_line = line_no;
            } else if (key == "collection_dist") {
                client.config.collection_dist = parse_double_list(value, at, key);
                client.has_collection = true;
                client.collection_line = line_no;
            } else if (key == "n_samples") {
                client.config.n_samples =
                    static_cast<std::size_t>(parse_u64(value, at, key));
                if (client.config.n_samples == 0) {
                    at.fail("n_samples must be >= 1");
                }
                client.has_n_samples = true;
            } else {
                at.fail("unknown client key '" + key + "'");
            }
            continue;
        }

        if (key == "seed") {
            config.seed = parse_u64(value, at, key);
            seed_seen = true;
        } else if (key == "t_agg") {
            config.t_agg = static_cast<int>(parse_u64(value, at, key));
            if (config.t_agg < 1) {
                at.fail("t_agg must be >= 1");
            }
        } else if (key == "trials") {
            config.trials = static_cast<std::size_t>(parse_u64(value, at, key));
            if (config.trials == 0) {
                at.fail("trials must be >= 1");
            }
        } else if (key == "eps_bar_grid") {
            config.eps_bar_grid = parse_double_list(value, at, key);
            for (double e : config.eps_bar_grid) {
                if (!(e > 0.0)) {
                    at.fail("eps_bar_grid entries must be > 0");
                }
            }
        } else if (key == "schemes") {
            config.schemes.clear();
            for (const auto& token : split_ws(value)) {
                try {
                    config.schemes.push_back(parse_scheme(token));
                } catch (const std::invalid_argument& e) {
                    at.fail(e.what());
                }
            }
            if (config.schemes.empty()) {
                at.fail("schemes: expected at least one scheme");
            }
        } else if (key == "delta_mode") {
            if (value == "spectral") {
                config.flags.delta_mode = DeltaMode::spectral;
            } else if (value == "exact") {
                config.flags.delta_mode = DeltaMode::exact;
            } else {
                at.fail("delta_mode must be 'spectral' or 'exact'");
            }
        } else if (key == "fse_mode") {
            if (value == "paper") {
                config.flags.fse_mode = FseMode::paper;
            } else if (value == "canonical") {
                config.flags.fse_mode = FseMode::canonical;
            } else {
                at.fail("fse_mode must be 'paper' or 'canonical'");
            }
        } else if (key == "bound_mode") {
            if (value == "cancelled") {
                config.flags.bound_mode = BoundMode::cancelled;
            } else if (value == "paper_literal") {
                config.flags.bound_mode = BoundMode::paper_literal;
            } else {
                at.fail("bound_mode must be 'cancelled' or 'paper_literal'");
            }
        } else {
            at.fail("unknown key '" + key + "'");
        }
    }

    const Anchor eof{name, line_no};
    if (!seed_seen) {
        eof.fail("missing required key 'seed' (runs must be reproducible)");
    }
    if (clients.empty()) {
        eof.fail("no [client] blocks");
    }
    for (std::size_t i = 0; i < clients.size(); ++i) {
        validate_client(clients[i], i, name);
        config.clients.push_back(clients[i].config);
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path + ": cannot open config file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

std::vector<ClientSpec> build_clients(const ExperimentConfig& config) {
    std::vector<MarkovChain> chains;
    std::vector<std::size_t> sizes;
    chains.reserve(config.clients.size());
    for (const auto& c : config.clients) {
        if (c.q.has_value()) {
            chains.push_back(cyclic_chain(c.state_values.size(), *c.q, c.state_values,
                                          c.collection_dist));
        } else {
            chains.push_back(MarkovChain::create(c.state_values, *c.transition,
                                                 c.collection_dist));
        }
        sizes.push_back(c.n_samples);
    }
    return make_client_group(std::move(chains), sizes);
}

} // namespace agefl
