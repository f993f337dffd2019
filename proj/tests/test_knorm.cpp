#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bell/knorm.hpp"
#include "bell/rng.hpp"
#include "oracles.hpp"

using namespace bell;

namespace {

Eigen::VectorXd random_vector(int m, RngStream& s, double span = 1.0) {
    Eigen::VectorXd x(m);
    for (int i = 0; i < m; ++i) x(i) = span * (2.0 * s.uniform() - 1.0);
    return x;
}

}  // namespace

TEST_CASE("j_norm closed form") {
    Eigen::VectorXd a(2);
    a << 1.0, 1.0;
    CHECK(j_norm(a, 1.0) == doctest::Approx(2.0));  // max(2, sqrt 2, 1)

    Eigen::VectorXd e1(3);
    e1 << 1.0, 0.0, 0.0;
    CHECK(j_norm(e1, 4.0) == doctest::Approx(4.0));  // max(1, 2, 4)

    CHECK_THROWS_AS(j_norm(a, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(j_norm(a, -1.0), std::invalid_argument);
}

TEST_CASE("k_norm scalar case and pure splittings") {
    Eigen::VectorXd one(1);
    one << 1.0;
    CHECK(k_norm(one, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(k_norm(one, 0.0), std::invalid_argument);

    RngStream rng(3, 0);
    for (int rep = 0; rep < 50; ++rep) {
        RngStream s = rng.substream(rep);
        const int m = 1 + static_cast<int>(s.uniform() * 6);
        const double t = 0.05 + 2.0 * s.uniform();
        const Eigen::VectorXd x = random_vector(m, s, 2.0);
        const double k = k_norm(x, t);
        CHECK(k <= x.lpNorm<Eigen::Infinity>() + 1e-12);
        CHECK(k <= std::sqrt(t) * x.norm() + 1e-12);
        CHECK(k <= t * x.lpNorm<1>() + 1e-12);
    }
}

TEST_CASE("k_norm homogeneity and triangle inequality") {
    RngStream rng(4, 0);
    for (int rep = 0; rep < 40; ++rep) {
        RngStream s = rng.substream(rep);
        const int m = 2 + static_cast<int>(s.uniform() * 4);
        const double t = 0.05 + 2.0 * s.uniform();
        const Eigen::VectorXd x = random_vector(m, s);
        const Eigen::VectorXd y = random_vector(m, s);
        const double c = 4.0 * s.uniform() - 2.0;
        CHECK(std::abs(k_norm(c * x, t) - std::abs(c) * k_norm(x, t)) <= 1e-10);
        CHECK(k_norm(x + y, t) <= k_norm(x, t) + k_norm(y, t) + 1e-8);
    }
}

TEST_CASE("k_norm dual maximizer is feasible and attains the value") {
    RngStream rng(5, 0);
    for (int rep = 0; rep < 40; ++rep) {
        RngStream s = rng.substream(rep);
        const int m = 1 + static_cast<int>(s.uniform() * 5);
        const double t = 0.05 + 2.0 * s.uniform();
        const Eigen::VectorXd x = random_vector(m, s);
        Eigen::VectorXd a;
        const double k = k_norm(x, t, &a);
        CHECK(a.lpNorm<1>() <= 1.0 + 1e-12);
        CHECK(a.norm() <= std::sqrt(t) + 1e-12);
        CHECK(a.lpNorm<Eigen::Infinity>() <= t + 1e-12);
        CHECK(x.dot(a) == doctest::Approx(k));
    }
}

TEST_CASE("k_norm against brute-force primal splitting, m = 3, t = 0.5") {
    RngStream rng(6, 0);
    for (int rep = 0; rep < 20; ++rep) {
        RngStream s = rng.substream(rep);
        const Eigen::VectorXd x = random_vector(3, s);
        const double dual = k_norm(x, 0.5);
        const double primal = oracles::k_norm_bruteforce(x, 0.5);
        CHECK(std::abs(dual - primal) <= 1e-4);
    }
}

TEST_CASE("k_norm duality sampling: sampled J-ball points never beat it") {
    RngStream rng(7, 0);
    for (int rep = 0; rep < 6; ++rep) {
        RngStream s = rng.substream(rep);
        const int m = 2 + rep % 3;  // up to 4
        const double t = 0.1 + s.uniform();
        const Eigen::VectorXd x = random_vector(m, s);
        const double k = k_norm(x, t);
        double best = 0.0;
        // Ray-scaled random directions...
        for (int i = 0; i < 60000; ++i) {
            Eigen::VectorXd u(m);
            for (int j = 0; j < m; ++j) u(j) = s.gaussian();
            if (u.norm() == 0.0) continue;
            const double r = std::min({1.0 / u.lpNorm<1>(), std::sqrt(t) / u.norm(),
                                       t / u.lpNorm<Eigen::Infinity>()});
            best = std::max(best, r * u.dot(x));
        }
        // ...plus the two-parameter clamp family the optimum belongs to.
        const Eigen::VectorXd ax = x.cwiseAbs();
        for (int gi = 0; gi <= 200; ++gi)
            for (int gj = 1; gj <= 200; ++gj) {
                const double mu = ax.maxCoeff() * gi / 200.0;
                const double inv2nu = 20.0 * gj / 200.0;
                Eigen::VectorXd a(m);
                for (int j = 0; j < m; ++j)
                    a(j) = std::clamp((ax(j) - mu) * inv2nu, 0.0, t);
                const double l1 = a.lpNorm<1>();
                const double l2 = a.norm();
                const double li = a.lpNorm<Eigen::Infinity>();
                double r = 1.0;
                if (l1 > 1.0) r = std::min(r, 1.0 / l1);
                if (l2 > std::sqrt(t)) r = std::min(r, std::sqrt(t) / l2);
                if (li > t) r = std::min(r, t / li);
                best = std::max(best, r * a.dot(ax));
            }
        CHECK(best <= k + 1e-12);
        CHECK(k <= best + 1e-3);
    }
}

TEST_CASE("Hoelder pairing |<x,a>| <= k_norm(x,t) * j_norm(a,1/t)") {
    RngStream rng(8, 0);
    for (int rep = 0; rep < 100; ++rep) {
        RngStream s = rng.substream(rep);
        const int m = 1 + static_cast<int>(s.uniform() * 6);
        const double t = 0.05 + 3.0 * s.uniform();
        const Eigen::VectorXd x = random_vector(m, s, 2.0);
        const Eigen::VectorXd a = random_vector(m, s, 2.0);
        CHECK(std::abs(x.dot(a)) <= k_norm(x, t) * j_norm(a, 1.0 / t) + 1e-10);
    }
}
