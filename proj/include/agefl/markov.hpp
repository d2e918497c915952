// Finite-state Markov chain machinery: matrix powers, marginals, reverse
// kernels, total-variation quantities, spectral gap, and exact mutual
// information across an age gap.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace agefl {

// Dense row-major square matrix; small n (chains here have a handful of
// states), so no linear-algebra library is needed in the interface.
struct Matrix {
    std::size_t n = 0;
    std::vector<double> a; // row-major, n*n entries

    Matrix() = default;
    explicit Matrix(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}

    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(a).subspan(i * n, n);
    }

    static Matrix identity(std::size_t dim);
};

Matrix multiply(const Matrix& lhs, const Matrix& rhs);

// row_vector * M
std::vector<double> left_apply(std::span<const double> row_vector, const Matrix& m);

// Finite-state chain over real-valued state labels. `transition` is
// row-stochastic; `collection_dist` is the distribution of a client's data at
// its collection time.
struct MarkovChain {
    std::vector<double> state_values; // strictly increasing
    Matrix transition;
    std::vector<double> collection_dist;

    std::size_t size() const { return state_values.size(); }

    // Validates all invariants (row sums within 1e-12, entries in [0,1],
    // n >= 2, strictly increasing labels) and throws std::invalid_argument
    // on violation.
    static MarkovChain create(std::vector<double> state_values, Matrix transition,
                              std::vector<double> collection_dist);
};

// The cyclic perturbation chain: 1-q on the diagonal, q one step up with
// wraparound from the last state to the first. Collection distribution
// defaults to uniform (stationary for this family).
MarkovChain cyclic_chain(std::size_t n, double q, std::vector<double> state_values);
MarkovChain cyclic_chain(std::size_t n, double q, std::vector<double> state_values,
                         std::vector<double> collection_dist);

// transition^t by repeated squaring; t = 0 gives the identity.
Matrix t_step_transition(const MarkovChain& chain, int t);

// collection_dist advanced t steps.
std::vector<double> marginal_at(const MarkovChain& chain, int t);

// Bayes-reversed kernel of the t-step transition for a chain started from
// base_dist: row x (the state observed t steps later) holds the conditional
// distribution of the start state,
//   rev(x, y) = base_dist(y) * P_t(y, x) / (base_dist P_t)(x).
// Throws if some conditioning state x is unreachable ((base_dist P_t)(x) = 0),
// naming the state.
Matrix reverse_kernel(const MarkovChain& chain, int t, std::span<const double> base_dist);

// Half the 1-norm of p - q; equals max_A |p(A) - q(A)|.
double tv_distance(std::span<const double> p, std::span<const double> q);

// Worst-case total variation between reverse-kernel rows at age t >= 1,
// conditioning on the age-t marginal of collection_dist. This is the exact
// aging discount; the spectral bound below is the default in the privacy
// calculus.
double delta_exact(const MarkovChain& chain, int t);

// Second-largest eigenvalue modulus of the transition matrix.
double slem(const MarkovChain& chain);

// min{1, max_Z sqrt((1 - pi_t(Z)) / pi_t(Z)) * slem^t} with pi_t the age-t
// marginal; states with pi_t(Z) = 0 are skipped (they cannot be conditioned
// on). An upper bound on delta_exact when collection_dist is stationary.
double delta_spectral_bound(const MarkovChain& chain, int t);

// Exact mutual information (nats) between the state at collection time and
// the state `gap` steps later. gap = 0 gives the Shannon entropy of
// collection_dist.
double mutual_information_age(const MarkovChain& chain, int gap);

// -sum p ln p in nats, with 0 ln 0 = 0.
double shannon_entropy(std::span<const double> p);

} // namespace agefl
