#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fracdisc/systems.hpp"

using namespace fracdisc;

namespace {

Discretization euler(double T, std::optional<double> L = std::nullopt) {
  return Discretization(Rule::BackwardEuler, T, L);
}

FracSystem example_plant() {
  return FracSystem({{1.0, 0.0}, {0.5, 0.9}, {0.8, 2.2}}, {{1.0, 0.0}});
}

// Solves sum_i a_i (D^beta_i y)_k = sum_i b_i (D^alpha_i u)_k for y_k, with
// every operator evaluated by apply_operator on the samples so far and y_k
// provisionally 0.
std::vector<double> gl_direct_oracle(const FracSystem& sys,
                                     const std::vector<double>& u, double T) {
  const std::size_t n = u.size();
  const Discretization disc = euler(T);
  std::vector<double> y(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const std::vector<double> u_head(u.begin(), u.begin() + k + 1);
    const std::vector<double> y_head(y.begin(), y.begin() + k + 1);
    double rhs = 0.0;
    for (const Term& t : sys.numerator()) {
      rhs += t.coeff * apply_operator(euler_weights(t.order, disc, k + 1), u_head)[k];
    }
    double lhs_history = 0.0;
    double lhs_gain = 0.0;
    for (const Term& t : sys.denominator()) {
      const OperatorWeights w = euler_weights(t.order, disc, k + 1);
      lhs_history += t.coeff * apply_operator(w, y_head)[k];
      lhs_gain += t.coeff * w[0];
    }
    y[k] = (rhs - lhs_history) / lhs_gain;
  }
  return y;
}

std::vector<double> random_signal(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = dist(rng);
  return x;
}

}  // namespace

TEST_SUITE("FracSystem") {
  TEST_CASE("validation") {
    CHECK_THROWS_AS(FracSystem({}, {{1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(FracSystem({{1.0, 0.5}, {1.0, 0.5}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(FracSystem({{1.0, 1.0}, {1.0, 0.5}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(FracSystem({{1.0, -0.5}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(FracSystem({{1.0, 0.0}, {0.0, 1.0}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(FracSystem({{1.0, 0.0}}, {{1.0, 1.0}, {2.0, 0.0}}),
                    std::invalid_argument);
    CHECK_NOTHROW(example_plant());
  }
}

TEST_SUITE("simulate_system") {
  TEST_CASE("integrator turns a step into a ramp") {
    const FracSystem integrator({{1.0, 1.0}}, {{1.0, 0.0}});
    const SimResult r = simulate_system(integrator, std::vector<double>(20, 1.0), euler(0.1));
    REQUIRE(r.y.size() == 20);
    for (std::size_t k = 0; k < 20; ++k) {
      CHECK(r.y[k] == doctest::Approx(0.1 * static_cast<double>(k)).epsilon(1e-12));
      CHECK(r.t[k] == static_cast<double>(k) * 0.1);
    }
    CHECK(r.sample_period == 0.1);
  }

  TEST_CASE("first-order lag matches the exact step response") {
    const FracSystem lag({{1.0, 0.0}, {1.0, 1.0}}, {{1.0, 0.0}});
    const SimResult r = simulate_system(lag, std::vector<double>(1001, 1.0), euler(0.001));
    CHECK(std::abs(r.y[1000] - (1.0 - std::exp(-1.0))) < 2e-3);
  }

  TEST_CASE("example plant settles at b0/a0") {
    const SimResult r =
        simulate_system(example_plant(), std::vector<double>(4000, 1.0), euler(0.05));
    CHECK(std::abs(r.y.back() - 1.0) < 1e-2);
  }

  TEST_CASE("errors") {
    const FracSystem lag({{1.0, 0.0}, {1.0, 1.0}}, {{1.0, 0.0}});
    CHECK_THROWS_AS(simulate_system(lag, std::vector<double>{}, euler(0.1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_system(lag, std::vector<double>(3, 1.0),
                                    Discretization(Rule::Tustin, 0.1)),
                    std::invalid_argument);
    // 1 - 0.5 * 0.5^-1 == 0
    const FracSystem degenerate({{1.0, 0.0}, {-0.5, 1.0}}, {{1.0, 0.0}});
    CHECK_THROWS_AS(simulate_system(degenerate, std::vector<double>(3, 1.0), euler(0.5)),
                    std::invalid_argument);
  }

  TEST_CASE("agrees with the directly solved GL equation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coeff(0.2, 2.0);
    std::uniform_real_distribution<double> order(0.05, 0.95);
    for (int trial = 0; trial < 10; ++trial) {
      const double b1 = order(rng);
      const double b2 = b1 + 1.0 + order(rng);
      const FracSystem sys({{coeff(rng), 0.0}, {coeff(rng), b1}, {coeff(rng), b2}},
                           {{coeff(rng), 0.0}, {coeff(rng), order(rng)}});
      const std::vector<double> u = random_signal(rng, 60);
      const double T = 0.05;
      const SimResult r = simulate_system(sys, u, euler(T));
      const std::vector<double> oracle = gl_direct_oracle(sys, u, T);
      for (std::size_t k = 0; k < u.size(); ++k) {
        CHECK(std::abs(r.y[k] - oracle[k]) <= 1e-10 * std::max(1.0, std::abs(oracle[k])));
      }
    }
  }

  TEST_CASE("linearity in the input") {
    std::mt19937_64 rng(11);
    const std::vector<double> u1 = random_signal(rng, 300);
    const std::vector<double> u2 = random_signal(rng, 300);
    const double a = 1.7;
    const double b = -0.6;
    std::vector<double> mix(300);
    for (std::size_t k = 0; k < 300; ++k) mix[k] = a * u1[k] + b * u2[k];
    const Discretization disc = euler(0.05);
    const auto y1 = simulate_system(example_plant(), u1, disc).y;
    const auto y2 = simulate_system(example_plant(), u2, disc).y;
    const auto ym = simulate_system(example_plant(), mix, disc).y;
    for (std::size_t k = 0; k < 300; ++k) {
      CHECK(std::abs(ym[k] - (a * y1[k] + b * y2[k])) <= 1e-9);
    }
  }

  TEST_CASE("short memory deviation shrinks with memory length") {
    const std::size_t n = 401;  // 20 s at T = 0.05
    const std::vector<double> step(n, 1.0);
    const auto full = simulate_system(example_plant(), step, euler(0.05)).y;
    double previous = INFINITY;
    for (double L : {1.0, 2.0, 5.0, 10.0}) {
      const auto truncated = simulate_system(example_plant(), step, euler(0.05, L)).y;
      double dev = 0.0;
      for (std::size_t k = 0; k < n; ++k) dev = std::max(dev, std::abs(full[k] - truncated[k]));
      CHECK(dev < previous);
      previous = dev;
    }
  }

  TEST_CASE("integer orders reproduce the classical backward-Euler update") {
    // 2 y'' + 3 y' + y = u + 0.5 u'
    const double T = 0.02;
    const FracSystem sys({{1.0, 0.0}, {3.0, 1.0}, {2.0, 2.0}}, {{1.0, 0.0}, {0.5, 1.0}});
    std::mt19937_64 rng(3);
    const std::vector<double> u = random_signal(rng, 500);
    const auto y = simulate_system(sys, u, euler(T)).y;

    std::vector<double> ref(u.size(), 0.0);
    const auto at = [](const std::vector<double>& x, std::size_t k, std::size_t back) {
      return k >= back ? x[k - back] : 0.0;
    };
    for (std::size_t k = 1; k < u.size(); ++k) {
      const double rhs = u[k] + 0.5 * (u[k] - at(u, k, 1)) / T;
      const double hist = 2.0 * (-2.0 * at(ref, k, 1) + at(ref, k, 2)) / (T * T) -
                          3.0 * at(ref, k, 1) / T;
      ref[k] = (rhs - hist) / (2.0 / (T * T) + 3.0 / T + 1.0);
    }
    for (std::size_t k = 0; k < u.size(); ++k) {
      CHECK(std::abs(y[k] - ref[k]) <= 1e-12 * std::max(1.0, std::abs(ref[k])));
    }
  }
}

TEST_SUITE("freq_response") {
  TEST_CASE("identity system") {
    const FracSystem id({{1.0, 0.0}}, {{1.0, 0.0}});
    const std::vector<double> omegas{0.01, 1.0, 10.0, std::numbers::pi / 0.1};
    for (Rule rule : {Rule::BackwardEuler, Rule::Tustin}) {
      for (const auto& g : freq_response(id, Discretization(rule, 0.1), omegas)) {
        CHECK(g.real() == 1.0);
        CHECK(g.imag() == 0.0);
      }
    }
  }

  TEST_CASE("integrator magnitude grows as 1/omega") {
    const FracSystem integ({{1.0, 1.0}}, {{1.0, 0.0}});
    const std::vector<double> omegas{1e-2, 1e-3, 1e-4};
    const auto g = freq_response(integ, euler(0.1), omegas);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      CHECK(std::abs(g[i]) * omegas[i] == doctest::Approx(1.0).epsilon(1e-2));
    }
    CHECK(std::abs(g[2]) > std::abs(g[1]));
  }

  TEST_CASE("Tustin integrator equals (T/2) cot(omega T / 2) in magnitude") {
    const FracSystem integ({{1.0, 1.0}}, {{1.0, 0.0}});
    const double T = 0.1;
    const std::vector<double> omegas{0.5, 3.0, 20.0};
    const auto g = freq_response(integ, Discretization(Rule::Tustin, T), omegas);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      CHECK(std::abs(g[i]) ==
            doctest::Approx(0.5 * T / std::tan(0.5 * omegas[i] * T)).epsilon(1e-12));
      CHECK(std::arg(g[i]) == doctest::Approx(-std::numbers::pi / 2).epsilon(1e-12));
    }
  }

  TEST_CASE("half integrator magnitude and slope") {
    const FracSystem half({{1.0, 0.5}}, {{1.0, 0.0}});
    const std::vector<double> omegas{0.1, 1.0};
    const auto g = freq_response(half, euler(0.01), omegas);
    CHECK(std::abs(std::abs(g[1]) - 1.0) < 0.05);
    const double slope_db = 20.0 * std::log10(std::abs(g[1])) - 20.0 * std::log10(std::abs(g[0]));
    CHECK(std::abs(slope_db - (-10.0)) < 0.5);
  }

  TEST_CASE("rejects omega outside (0, pi/T]") {
    const FracSystem id({{1.0, 0.0}}, {{1.0, 0.0}});
    CHECK_THROWS_AS(freq_response(id, euler(0.1), std::vector<double>{0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(freq_response(id, euler(0.1), std::vector<double>{-1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(freq_response(id, euler(0.1), std::vector<double>{32.0}),
                    std::invalid_argument);
  }
}
