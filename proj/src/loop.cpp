#include "fracdisc/loop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracdisc {

namespace {

std::vector<double> time_axis(std::size_t n, double sample_period) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = static_cast<double>(k) * sample_period;
  }
  return t;
}

}  // namespace

std::vector<double> step_setpoint(std::size_t n_steps, double amplitude,
                                  std::size_t onset) {
  std::vector<double> w(n_steps, 0.0);
  for (std::size_t k = onset; k < n_steps; ++k) w[k] = amplitude;
  return w;
}

LoopResult simulate_loop(const FracSystem& system, const FracPid& ctl,
                         std::span<const double> setpoint,
                         const Discretization& disc) {
  if (setpoint.empty()) {
    throw std::invalid_argument("setpoint must not be empty");
  }
  const std::size_t n = setpoint.size();
  DiscretePlant plant(system, disc, n);
  DiscreteController controller(ctl, disc, n);

  const double g_p = plant.feedthrough();
  const double g_c = controller.feedthrough();
  const double loop_gain = 1.0 + g_p * g_c;
  if (loop_gain == 0.0) {
    throw std::invalid_argument(
        "degenerate algebraic loop: 1 + g_p * g_c == 0");
  }

  LoopResult r;
  r.sample_period = disc.sample_period();
  r.t = time_axis(n, disc.sample_period());
  r.w.assign(setpoint.begin(), setpoint.end());
  r.e.assign(n, 0.0);
  r.u.assign(n, 0.0);
  r.y.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double p_hist = plant.history(k, r.u, r.y);
    const double c_hist = controller.history(k, r.e);
    r.y[k] = (p_hist + g_p * c_hist + g_p * g_c * r.w[k]) / loop_gain;
    r.e[k] = r.w[k] - r.y[k];
    r.u[k] = c_hist + g_c * r.e[k];
  }
  return r;
}

FracSystem example_plant(const ExampleParams& params) {
  return FracSystem({{params.a0, 0.0},
                     {params.a1, params.beta1},
                     {params.a2, params.beta2}},
                    {{1.0, 0.0}});
}

FracPid example_controller(const ExampleParams& params) {
  return make_pd_delta(params.K, params.Td, params.delta);
}

Discretization example_discretization(const ExampleParams& params) {
  return Discretization(Rule::BackwardEuler, params.T, params.memory_length);
}

LoopResult simulate_example_direct(const ExampleParams& params) {
  if (params.n_steps < 2) {
    throw std::invalid_argument("n_steps must be at least 2");
  }
  example_plant(params);  // validates orders and coefficients
  const FracPid ctl = example_controller(params);
  const Discretization disc = example_discretization(params);

  const std::size_t n = params.n_steps;
  const std::size_t terms = std::min(n, disc.memory_terms());
  const BinomialTable c2 = gl_coeffs(params.beta2, terms);
  const BinomialTable c1 = gl_coeffs(params.beta1, terms);
  const BinomialTable cd = gl_coeffs(params.delta, terms);
  const double T = params.T;
  const double s2 = params.a2 * std::pow(T, -params.beta2);
  const double s1 = params.a1 * std::pow(T, -params.beta1);
  const double sd = params.Td * std::pow(T, -params.delta);
  const double denom = s2 * c2[0] + s1 * c1[0] + sd * cd[0] +
                       (params.a0 + params.K);
  if (denom == 0.0) {
    throw std::invalid_argument("degenerate closed-loop denominator");
  }

  LoopResult r;
  r.sample_period = T;
  r.t = time_axis(n, T);
  r.w = step_setpoint(n, 1.0, 2);
  r.y.assign(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double numer = params.K * r.w[k] +
                         sd * convolve_at(cd.coeffs(), r.w, k, 0) -
                         s2 * convolve_at(c2.coeffs(), r.y, k, 1) -
                         s1 * convolve_at(c1.coeffs(), r.y, k, 1) -
                         sd * convolve_at(cd.coeffs(), r.y, k, 1);
    r.y[k] = numer / denom;
  }
  r.e.resize(n);
  for (std::size_t k = 0; k < n; ++k) r.e[k] = r.w[k] - r.y[k];
  r.u = controller_response(ctl, r.e, disc);
  return r;
}

ResidualReport closed_loop_residual_report(const LoopResult& result,
                                           const ExampleParams& params) {
  const std::size_t n = result.y.size();
  if (n == 0 || result.w.size() != n || result.e.size() != n ||
      result.u.size() != n || result.t.size() != n) {
    throw std::invalid_argument(
        "loop result columns must be non-empty and of equal length");
  }
  const Discretization disc(Rule::BackwardEuler, result.sample_period,
                            params.memory_length);
  const std::vector<double> d2y =
      apply_operator(euler_weights(params.beta2, disc, n), result.y);
  const std::vector<double> d1y =
      apply_operator(euler_weights(params.beta1, disc, n), result.y);
  const OperatorWeights wd = euler_weights(params.delta, disc, n);
  const std::vector<double> ddy = apply_operator(wd, result.y);
  const std::vector<double> ddw = apply_operator(wd, result.w);

  ResidualReport report;
  for (std::size_t k = 0; k < n; ++k) {
    const double terms[] = {params.a2 * d2y[k],
                            params.a1 * d1y[k],
                            params.Td * ddy[k],
                            (params.a0 + params.K) * result.y[k],
                            params.K * result.w[k],
                            params.Td * ddw[k]};
    const double lhs = terms[0] + terms[1] + terms[2] + terms[3];
    const double rhs = terms[4] + terms[5];
    report.max_abs = std::max(report.max_abs, std::abs(lhs - rhs));
    for (double term : terms) {
      report.max_term = std::max(report.max_term, std::abs(term));
    }
  }
  return report;
}

double closed_loop_equation_residual(const LoopResult& result,
                                     const ExampleParams& params) {
  return closed_loop_residual_report(result, params).max_abs;
}

}  // namespace fracdisc
