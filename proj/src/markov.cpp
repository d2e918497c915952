#include "agefl/markov.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace agefl {

namespace {

constexpr double kStochasticTol = 1e-12;

void check_probability_vector(std::span<const double> v, const std::string& what) {
    double sum = 0.0;
    for (double p : v) {
        if (!(p >= -kStochasticTol) || !(p <= 1.0 + kStochasticTol)) {
            throw std::invalid_argument(what + ": entry " + std::to_string(p) +
                                        " outside [0,1]");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kStochasticTol) {
        throw std::invalid_argument(what + ": sums to " + std::to_string(sum) +
                                    ", expected 1 within 1e-12");
    }
}

} // namespace

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix multiply(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.n != rhs.n) {
        throw std::invalid_argument("matrix dimension mismatch");
    }
    const std::size_t n = lhs.n;
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double lik = lhs(i, k);
            if (lik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += lik * rhs(k, j);
            }
        }
    }
    return out;
}

std::vector<double> left_apply(std::span<const double> row_vector, const Matrix& m) {
    if (row_vector.size() != m.n) {
        throw std::invalid_argument("vector/matrix dimension mismatch");
    }
    std::vector<double> out(m.n, 0.0);
    for (std::size_t i = 0; i < m.n; ++i) {
        const double v = row_vector[i];
        if (v == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < m.n; ++j) {
            out[j] += v * m(i, j);
        }
    }
    return out;
}

MarkovChain MarkovChain::create(std::vector<double> state_values, Matrix transition,
                                std::vector<double> collection_dist) {
    const std::size_t n = state_values.size();
    if (n < 2) {
        throw std::invalid_argument("MarkovChain: need at least 2 states");
    }
    if (transition.n != n || collection_dist.size() != n) {
        throw std::invalid_argument("MarkovChain: inconsistent dimensions");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(state_values[i] < state_values[i + 1])) {
            throw std::invalid_argument("MarkovChain: state_values must be strictly increasing");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        check_probability_vector(transition.row(i), "transition row " + std::to_string(i));
    }
    check_probability_vector(collection_dist, "collection_dist");

    MarkovChain chain;
    chain.state_values = std::move(state_values);
    chain.transition = std::move(transition);
    chain.collection_dist = std::move(collection_dist);
    return chain;
}

MarkovChain cyclic_chain(std::size_t n, double q, std::vector<double> state_values) {
    return cyclic_chain(n, q, std::move(state_values),
                        std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

MarkovChain cyclic_chain(std::size_t n, double q, std::vector<double> state_values,
                         std::vector<double> collection_dist) {
    if (n < 2) {
        throw std::invalid_argument("cyclic_chain: need at least 2 states");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("cyclic_chain: q must lie in [0,1]");
    }
    if (state_values.size() != n) {
        throw std::invalid_argument("cyclic_chain: state_values must have length n");
    }
    Matrix p(n);
    for (std::size_t i = 0; i < n; ++i) {
        p(i, i) = 1.0 - q;
        p(i, (i + 1) % n) = q;
    }
    return MarkovChain::create(std::move(state_values), std::move(p),
                               std::move(collection_dist));
}

Matrix t_step_transition(const MarkovChain& chain, int t) {
    if (t < 0) {
        throw std::invalid_argument("t_step_transition: t must be >= 0");
    }
    Matrix result = Matrix::identity(chain.size());
    Matrix base = chain.transition;
    unsigned exp = static_cast<unsigned>(t);
    while (exp > 0) {
        if (exp & 1u) {
            result = multiply(result, base);
        }
        exp >>= 1u;
        if (exp > 0) {
            base = multiply(base, base);
        }
    }
    return result;
}

std::vector<double> marginal_at(const MarkovChain& chain, int t) {
    if (t < 0) {
        throw std::invalid_argument("marginal_at: t must be >= 0");
    }
    if (t == 0) {
        return chain.collection_dist;
    }
    return left_apply(chain.collection_dist, t_step_transition(chain, t));
}

Matrix reverse_kernel(const MarkovChain& chain, int t, std::span<const double> base_dist) {
    const std::size_t n = chain.size();
    if (base_dist.size() != n) {
        throw std::invalid_argument("reverse_kernel: base_dist dimension mismatch");
    }
    const Matrix pt = t_step_transition(chain, t);
    const std::vector<double> reach = left_apply(base_dist, pt);

    Matrix rev(n);
    for (std::size_t x = 0; x < n; ++x) {
        if (reach[x] <= 0.0) {
            throw std::invalid_argument(
                "reverse_kernel: conditioning state " + std::to_string(x) +
                " is unreachable from base_dist after " + std::to_string(t) + " steps");
        }
        for (std::size_t y = 0; y < n; ++y) {
            rev(x, y) = base_dist[y] * pt(y, x) / reach[x];
        }
    }
    return rev;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("tv_distance: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += std::abs(p[i] - q[i]);
    }
    return 0.5 * acc;
}

double delta_exact(const MarkovChain& chain, int t) {
    if (t < 1) {
        throw std::invalid_argument("delta_exact: t must be >= 1");
    }
    const Matrix rev = reverse_kernel(chain, t, chain.collection_dist);
    const std::size_t n = chain.size();
    double worst = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            worst = std::max(worst, tv_distance(rev.row(x), rev.row(y)));
        }
    }
    return std::min(worst, 1.0);
}

double slem(const MarkovChain& chain) {
    const std::size_t n = chain.size();
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = chain.transition(i, j);
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("slem: eigensolver failed to converge");
    }
    const auto eigenvalues = solver.eigenvalues();

    // Drop one copy of the Perron eigenvalue 1, then take the largest
    // remaining modulus.
    Eigen::Index unit_index = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double dist = std::abs(eigenvalues[i] - std::complex<double>(1.0, 0.0));
        if (dist < best) {
            best = dist;
            unit_index = i;
        }
    }
    if (best > 1e-10) {
        throw std::runtime_error("slem: no eigenvalue within 1e-10 of 1 (not stochastic?)");
    }
    double second = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (i == unit_index) {
            continue;
        }
        second = std::max(second, std::abs(eigenvalues[i]));
    }
    return std::min(second, 1.0);
}

double delta_spectral_bound(const MarkovChain& chain, int t) {
    if (t < 0) {
        throw std::invalid_argument("delta_spectral_bound: t must be >= 0");
    }
    const std::vector<double> pi_t = marginal_at(chain, t);
    double factor = -1.0;
    for (double p : pi_t) {
        if (p > 0.0) {
            factor = std::max(factor, std::sqrt((1.0 - p) / p));
        }
    }
    if (factor < 0.0) {
        return 1.0; // no conditionable state; conservative
    }
    const double decay = std::pow(slem(chain), t);
    return std::min(1.0, factor * decay);
}

double mutual_information_age(const MarkovChain& chain, int gap) {
    if (gap < 0) {
        throw std::invalid_argument("mutual_information_age: gap must be >= 0");
    }
    const std::size_t n = chain.size();
    const Matrix pg = t_step_transition(chain, gap);
    const std::vector<double>& px = chain.collection_dist;
    const std::vector<double> py = left_apply(px, pg);

    double mi = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        if (px[x] <= 0.0) {
            continue;
        }
        for (std::size_t y = 0; y < n; ++y) {
            const double joint = px[x] * pg(x, y);
            if (joint <= 0.0) {
                continue;
            }
            mi += joint * std::log(joint / (px[x] * py[y]));
        }
    }
    return std::max(mi, 0.0);
}

double shannon_entropy(std::span<const double> p) {
    double h = 0.0;
    for (double v : p) {
        if (v > 0.0) {
            h -= v * std::log(v);
        }
    }
    return h;
}

} // namespace agefl
