#include "agefl/markov.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

using namespace agefl;

namespace {

const std::vector<double> kWh = {20.0, 50.0, 100.0, 200.0};

// Stationary distribution by direct linear solve of pi P = pi, sum pi = 1
// (replaces one balance equation with the normalization row).
std::vector<double> stationary_by_solve(const Matrix& p) {
    const std::size_t n = p.n;
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = p(j, i) - (i == j ? 1.0 : 0.0);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        a[n - 1][j] = 1.0;
    }
    a[n - 1][n] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        std::swap(a[col], a[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[col][col] == 0.0) {
                continue;
            }
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= n; ++c) {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i) {
        pi[i] = a[i][n] / a[i][i];
    }
    return pi;
}

// Max over all 2^n subsets of |p(A) - q(A)|.
double tv_by_subsets(const std::vector<double>& p, const std::vector<double>& q) {
    const std::size_t n = p.size();
    double best = 0.0;
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
        double dp = 0.0;
        double dq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                dp += p[i];
                dq += q[i];
            }
        }
        best = std::max(best, std::abs(dp - dq));
    }
    return best;
}

// SLEM of the cyclic chain from the circulant eigenvalues 1 - q + q w^k.
double cyclic_slem_oracle(std::size_t n, double q) {
    double best = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double angle = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        const std::complex<double> lambda =
            1.0 - q + q * std::complex<double>(std::cos(angle), std::sin(angle));
        best = std::max(best, std::abs(lambda));
    }
    return best;
}

// Independent evaluation of the worst-case reverse-row TV at age t.
double delta_exact_oracle(const MarkovChain& chain, int t) {
    const std::size_t n = chain.size();
    const Matrix pt = t_step_transition(chain, t);
    const std::vector<double> pi_t = marginal_at(chain, t);
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            rows[x][y] = chain.collection_dist[y] * pt(y, x) / pi_t[x];
        }
    }
    double best = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            best = std::max(best, tv_by_subsets(rows[x], rows[y]));
        }
    }
    return best;
}

// Brute-force double sum for I(Z_0; Z_gap).
double mi_oracle(const MarkovChain& chain, int gap) {
    const std::size_t n = chain.size();
    const Matrix pg = t_step_transition(chain, gap);
    const std::vector<double> py = marginal_at(chain, gap);
    double mi = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            const double joint = chain.collection_dist[x] * pg(x, y);
            if (joint > 0.0) {
                mi += joint * std::log(joint / (chain.collection_dist[x] * py[y]));
            }
        }
    }
    return mi;
}

MarkovChain uniform_transition_chain() {
    Matrix p(4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            p(i, j) = 0.25;
        }
    }
    return MarkovChain::create(kWh, p, {0.1, 0.2, 0.3, 0.4});
}

} // namespace

TEST_CASE("cyclic_chain lays out the displayed transition matrix") {
    const MarkovChain c1 = cyclic_chain(4, 0.1, kWh);
    CHECK(c1.transition(0, 0) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(c1.transition(0, 1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(c1.transition(0, 2) == 0.0);
    CHECK(c1.transition(0, 3) == 0.0);

    const MarkovChain frozen = cyclic_chain(4, 0.0, kWh);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(frozen.transition(i, j) == (i == j ? 1.0 : 0.0));
        }
    }

    const MarkovChain c3 = cyclic_chain(4, 0.6, kWh);
    CHECK(c3.transition(3, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(c3.transition(3, 1) == 0.0);
    CHECK(c3.transition(3, 2) == 0.0);
    CHECK(c3.transition(3, 3) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("cyclic_chain rejects bad parameters") {
    CHECK_THROWS_AS(cyclic_chain(4, -0.1, kWh), std::invalid_argument);
    CHECK_THROWS_AS(cyclic_chain(4, 1.1, kWh), std::invalid_argument);
    CHECK_THROWS_AS(cyclic_chain(1, 0.5, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(cyclic_chain(4, 0.5, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(MarkovChain::create({2.0, 1.0}, Matrix::identity(2), {0.5, 0.5}),
                    std::invalid_argument);
}

TEST_CASE("MarkovChain::create rejects non-stochastic rows") {
    Matrix bad(2);
    bad(0, 0) = 0.5;
    bad(0, 1) = 0.4; // sums to 0.9
    bad(1, 0) = 0.5;
    bad(1, 1) = 0.5;
    CHECK_THROWS_AS(MarkovChain::create({0.0, 1.0}, bad, {0.5, 0.5}),
                    std::invalid_argument);
}

TEST_CASE("t_step_transition matches direct multiplication") {
    const MarkovChain chain = cyclic_chain(4, 0.6, kWh);
    const Matrix p0 = t_step_transition(chain, 0);
    const Matrix p1 = t_step_transition(chain, 1);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(p0(i, j) == (i == j ? 1.0 : 0.0));
            CHECK(p1(i, j) == chain.transition(i, j));
        }
    }
    // (P^2)(0,2) = q^2 for the cyclic chain.
    const Matrix p2 = t_step_transition(chain, 2);
    const Matrix p2_direct = multiply(chain.transition, chain.transition);
    CHECK(p2(0, 2) == doctest::Approx(0.36).epsilon(1e-14));
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(p2(i, j) == doctest::Approx(p2_direct(i, j)).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(t_step_transition(chain, -1), std::invalid_argument);
}

TEST_CASE("t_step_transition stays row-stochastic out to t = 64") {
    for (double q : {0.1, 0.3, 0.6}) {
        const MarkovChain chain = cyclic_chain(4, q, kWh);
        for (int t : {2, 7, 16, 33, 64}) {
            const Matrix pt = t_step_transition(chain, t);
            for (std::size_t i = 0; i < 4; ++i) {
                double sum = 0.0;
                for (std::size_t j = 0; j < 4; ++j) {
                    CHECK(pt(i, j) >= -1e-15);
                    sum += pt(i, j);
                }
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("marginal_at advances the collection distribution") {
    const MarkovChain chain = cyclic_chain(4, 0.1, kWh, {0.8, 0.2, 0.0, 0.0});
    const std::vector<double> m0 = marginal_at(chain, 0);
    CHECK(m0 == chain.collection_dist);

    const std::vector<double> m1 = marginal_at(chain, 1);
    const std::vector<double> expected = {0.72, 0.26, 0.02, 0.0};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(m1[i] == doctest::Approx(expected[i]).epsilon(1e-14));
    }

    double sum = 0.0;
    for (double v : marginal_at(chain, 17)) {
        sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("marginal_at converges to the stationary distribution") {
    // A non-symmetric ergodic 3-state chain; oracle solves pi P = pi directly.
    Matrix p(3);
    p(0, 0) = 0.5; p(0, 1) = 0.3; p(0, 2) = 0.2;
    p(1, 0) = 0.1; p(1, 1) = 0.6; p(1, 2) = 0.3;
    p(2, 0) = 0.4; p(2, 1) = 0.2; p(2, 2) = 0.4;
    const MarkovChain chain = MarkovChain::create({1.0, 2.0, 3.0}, p, {1.0, 0.0, 0.0});
    const std::vector<double> pi = stationary_by_solve(chain.transition);
    const std::vector<double> m = marginal_at(chain, 200);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(m[i] == doctest::Approx(pi[i]).epsilon(1e-9));
    }
}

TEST_CASE("reverse_kernel equals the forward kernel for reversible chains") {
    // Symmetric transition + uniform (stationary) base: detailed balance.
    Matrix p(4);
    p(0, 0) = 0.5;  p(0, 1) = 0.25; p(0, 3) = 0.25;
    p(1, 0) = 0.25; p(1, 1) = 0.5;  p(1, 2) = 0.25;
    p(2, 1) = 0.25; p(2, 2) = 0.5;  p(2, 3) = 0.25;
    p(3, 0) = 0.25; p(3, 2) = 0.25; p(3, 3) = 0.5;
    const std::vector<double> uniform(4, 0.25);
    const MarkovChain chain = MarkovChain::create(kWh, p, uniform);
    for (int t : {1, 3}) {
        const Matrix rev = reverse_kernel(chain, t, uniform);
        const Matrix fwd = t_step_transition(chain, t);
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                CHECK(rev(i, j) == doctest::Approx(fwd(i, j)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("reverse_kernel of the uniform transition is uniform") {
    const MarkovChain chain = uniform_transition_chain();
    const std::vector<double> uniform(4, 0.25);
    const Matrix rev = reverse_kernel(chain, 1, uniform);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(rev(i, j) == doctest::Approx(0.25).epsilon(1e-12));
        }
    }
}

TEST_CASE("reverse_kernel rows are conditional distributions") {
    const MarkovChain chain = cyclic_chain(4, 0.3, kWh, {0.0, 0.1, 0.5, 0.4});
    const std::vector<double> base = marginal_at(chain, 2);
    const Matrix rev = reverse_kernel(chain, 2, base);
    const Matrix pt = t_step_transition(chain, 2);
    const std::vector<double> reach = left_apply(base, pt);
    for (std::size_t x = 0; x < 4; ++x) {
        double sum = 0.0;
        for (std::size_t y = 0; y < 4; ++y) {
            CHECK(rev(x, y) == doctest::Approx(base[y] * pt(y, x) / reach[x]).epsilon(1e-13));
            sum += rev(x, y);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("reverse_kernel names unreachable conditioning states") {
    // Both states always jump to state 0, so state 1 is unreachable.
    Matrix p(2);
    p(0, 0) = 1.0;
    p(1, 0) = 1.0;
    const MarkovChain chain = MarkovChain::create({0.0, 1.0}, p, {0.5, 0.5});
    CHECK_THROWS_WITH_AS(reverse_kernel(chain, 1, std::vector<double>{0.5, 0.5}),
                         doctest::Contains("state 1"), std::invalid_argument);
}

TEST_CASE("tv_distance basics and subset oracle") {
    CHECK(tv_distance(std::vector<double>{0.3, 0.7}, std::vector<double>{0.3, 0.7}) == 0.0);
    CHECK(tv_distance(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0}) == 1.0);
    CHECK(tv_distance(std::vector<double>{0.8, 0.2}, std::vector<double>{0.5, 0.5}) ==
          doctest::Approx(0.3).epsilon(1e-15));
    CHECK_THROWS_AS(tv_distance(std::vector<double>{1.0}, std::vector<double>{0.5, 0.5}),
                    std::invalid_argument);

    const std::vector<std::vector<double>> dists = {
        {0.1, 0.2, 0.3, 0.4}, {0.4, 0.3, 0.2, 0.1}, {0.25, 0.25, 0.25, 0.25},
        {0.7, 0.1, 0.1, 0.1}, {0.0, 0.0, 0.5, 0.5}};
    for (const auto& p : dists) {
        for (const auto& q : dists) {
            CHECK(tv_distance(p, q) == doctest::Approx(tv_by_subsets(p, q)).epsilon(1e-12));
        }
    }
}

TEST_CASE("tv_distance is a metric on tested triples") {
    const std::vector<std::vector<double>> dists = {
        {0.1, 0.2, 0.3, 0.4}, {0.4, 0.3, 0.2, 0.1}, {0.25, 0.25, 0.25, 0.25},
        {0.7, 0.1, 0.1, 0.1}, {0.05, 0.05, 0.45, 0.45}};
    for (const auto& p : dists) {
        for (const auto& q : dists) {
            CHECK(tv_distance(p, q) == tv_distance(q, p));
            for (const auto& r : dists) {
                CHECK(tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r) + 1e-12);
            }
        }
    }
}

TEST_CASE("delta_exact trivial chains") {
    const MarkovChain frozen = cyclic_chain(4, 0.0, kWh);
    for (int t : {1, 5, 17}) {
        CHECK(delta_exact(frozen, t) == doctest::Approx(1.0).epsilon(1e-12));
    }
    const MarkovChain mixed = uniform_transition_chain();
    for (int t : {1, 4}) {
        CHECK(delta_exact(mixed, t) == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(delta_exact(frozen, 0), std::invalid_argument);
}

TEST_CASE("delta_exact matches the all-pairs brute force") {
    const MarkovChain chain = cyclic_chain(4, 0.3, kWh);
    const double d4 = delta_exact(chain, 4);
    CHECK(d4 > 0.0);
    CHECK(d4 < 1.0);
    for (int t : {1, 2, 4, 9}) {
        CHECK(delta_exact(chain, t) ==
              doctest::Approx(delta_exact_oracle(chain, t)).epsilon(1e-12));
    }
}

TEST_CASE("delta_exact stays in [0,1] across chains and ages") {
    for (double q : {0.1, 0.3, 0.6, 1.0}) {
        const MarkovChain chain = cyclic_chain(4, q, kWh);
        for (int t = 1; t <= 32; ++t) {
            const double d = delta_exact(chain, t);
            CHECK(d >= 0.0);
            CHECK(d <= 1.0);
        }
    }
}

TEST_CASE("slem: uniform, identity, and circulant oracle") {
    CHECK(slem(uniform_transition_chain()) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(slem(cyclic_chain(4, 0.0, kWh)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(slem(cyclic_chain(4, 0.1, kWh)) ==
          doctest::Approx(std::sqrt(0.82)).epsilon(1e-10));
    for (double q : {0.1, 0.3, 0.6, 0.9}) {
        CHECK(slem(cyclic_chain(4, q, kWh)) ==
              doctest::Approx(cyclic_slem_oracle(4, q)).epsilon(1e-10));
    }
}

TEST_CASE("delta_spectral_bound values and decay") {
    // t = 0 with a non-degenerate marginal: some state has mass <= 1/2.
    CHECK(delta_spectral_bound(cyclic_chain(4, 0.3, kWh), 0) == 1.0);
    // Uniform transition: slem = 0, bound collapses for t >= 1.
    CHECK(delta_spectral_bound(uniform_transition_chain(), 1) == 0.0);
    CHECK(delta_spectral_bound(uniform_transition_chain(), 3) == 0.0);

    // Uniform marginal (stationary), q = 0.6, t = 6.
    const MarkovChain c3 = cyclic_chain(4, 0.6, kWh);
    const double expected =
        std::min(1.0, std::sqrt(3.0) * std::pow(cyclic_slem_oracle(4, 0.6), 6));
    CHECK(delta_spectral_bound(c3, 6) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(delta_spectral_bound(c3, 6) == doctest::Approx(0.2436).epsilon(1e-3));

    for (double q : {0.1, 0.3, 0.6}) {
        const MarkovChain chain = cyclic_chain(4, q, kWh);
        CHECK(delta_spectral_bound(chain, 64) < delta_spectral_bound(chain, 1));
    }
}

TEST_CASE("spectral bound dominates the exact delta for stationary collection") {
    for (double q : {0.1, 0.3, 0.6}) {
        const MarkovChain chain = cyclic_chain(4, q, kWh); // uniform = stationary
        for (int t = 1; t <= 32; ++t) {
            CHECK(delta_spectral_bound(chain, t) >= delta_exact(chain, t) - 1e-9);
        }
    }
}

TEST_CASE("mutual_information_age: entropy at gap 0, independence, oracle") {
    const MarkovChain chain = cyclic_chain(4, 0.3, kWh, {0.0, 0.1, 0.5, 0.4});
    CHECK(mutual_information_age(chain, 0) ==
          doctest::Approx(shannon_entropy(chain.collection_dist)).epsilon(1e-13));

    const MarkovChain mixed = uniform_transition_chain();
    CHECK(mutual_information_age(mixed, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mutual_information_age(mixed, 5) == doctest::Approx(0.0).epsilon(1e-12));

    const double mi2 = mutual_information_age(chain, 2);
    CHECK(mi2 > 0.0);
    for (int gap : {0, 1, 2, 3, 8}) {
        CHECK(mutual_information_age(chain, gap) ==
              doctest::Approx(mi_oracle(chain, gap)).epsilon(1e-12));
    }
}

TEST_CASE("mutual information is non-increasing in the age gap") {
    const std::vector<std::vector<double>> dists = {
        {0.8, 0.2, 0.0, 0.0}, {0.0, 0.1, 0.5, 0.4}, {0.2, 0.3, 0.5, 0.0}};
    const std::vector<double> qs = {0.1, 0.3, 0.6};
    for (std::size_t c = 0; c < 3; ++c) {
        const MarkovChain chain = cyclic_chain(4, qs[c], kWh, dists[c]);
        double prev = mutual_information_age(chain, 0);
        for (int gap = 1; gap <= 32; ++gap) {
            const double mi = mutual_information_age(chain, gap);
            CHECK(mi <= prev + 1e-12);
            prev = mi;
        }
    }
}
