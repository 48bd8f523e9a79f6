#include "fracdisc/systems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracdisc {

namespace {

void check_terms(std::span<const Term> terms, const char* side) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Term& term = terms[i];
    if (!std::isfinite(term.coeff) || !std::isfinite(term.order)) {
      throw std::invalid_argument(std::string(side) +
                                  " terms must be finite");
    }
    if (term.order < 0.0) {
      throw std::invalid_argument(std::string(side) +
                                  " orders must be nonnegative");
    }
    if (i > 0 && !(term.order > terms[i - 1].order)) {
      throw std::invalid_argument(std::string(side) +
                                  " orders must be strictly increasing");
    }
  }
}

// (w(z^-1))^order on the principal branch, z = exp(i omega T).
std::complex<double> generating_power(Rule rule, double sample_period,
                                      double omega, double order) {
  if (order == 0.0) return {1.0, 0.0};
  const std::complex<double> z_inv =
      std::polar(1.0, -omega * sample_period);
  std::complex<double> gen;
  if (rule == Rule::BackwardEuler) {
    gen = (1.0 - z_inv) / sample_period;
  } else {
    gen = (2.0 / sample_period) * (1.0 - z_inv) / (1.0 + z_inv);
  }
  return std::pow(gen, order);
}

}  // namespace

FracSystem::FracSystem(std::vector<Term> denominator,
                       std::vector<Term> numerator)
    : denominator_(std::move(denominator)), numerator_(std::move(numerator)) {
  if (denominator_.empty()) {
    throw std::invalid_argument("denominator must have at least one term");
  }
  check_terms(denominator_, "denominator");
  check_terms(numerator_, "numerator");
  if (denominator_.back().coeff == 0.0) {
    throw std::invalid_argument(
        "leading denominator coefficient must be nonzero");
  }
}

DiscretePlant::DiscretePlant(const FracSystem& system,
                             const Discretization& disc, std::size_t horizon) {
  if (disc.rule() != Rule::BackwardEuler) {
    throw std::invalid_argument(
        "time-domain simulation requires the backward-Euler rule");
  }
  for (const Term& term : system.denominator()) {
    OperatorWeights w = euler_weights(term.order, disc, horizon);
    denominator_ += term.coeff * w[0];
    output_side_.push_back(
        {term.coeff, std::vector<double>(w.weights().begin(), w.weights().end())});
  }
  double input_gain = 0.0;
  for (const Term& term : system.numerator()) {
    OperatorWeights w = euler_weights(term.order, disc, horizon);
    input_gain += term.coeff * w[0];
    input_side_.push_back(
        {term.coeff, std::vector<double>(w.weights().begin(), w.weights().end())});
  }
  if (denominator_ == 0.0) {
    throw std::invalid_argument(
        "degenerate implicit step: sum of a_i T^-beta_i is zero");
  }
  feedthrough_ = input_gain / denominator_;
}

double DiscretePlant::history(std::size_t k, std::span<const double> u,
                              std::span<const double> y) const {
  double acc = 0.0;
  for (const Kernel& kernel : input_side_) {
    acc += kernel.coeff * convolve_at(kernel.weights, u, k, 1);
  }
  for (const Kernel& kernel : output_side_) {
    acc -= kernel.coeff * convolve_at(kernel.weights, y, k, 1);
  }
  return acc / denominator_;
}

SimResult simulate_system(const FracSystem& system,
                          std::span<const double> input,
                          const Discretization& disc) {
  if (input.empty()) {
    throw std::invalid_argument("input must not be empty");
  }
  const std::size_t n = input.size();
  DiscretePlant plant(system, disc, n);

  SimResult result;
  result.sample_period = disc.sample_period();
  result.t.resize(n);
  result.u.assign(input.begin(), input.end());
  result.y.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    result.t[k] = static_cast<double>(k) * disc.sample_period();
  }
  // y_0 stays 0.
  for (std::size_t k = 1; k < n; ++k) {
    result.y[k] = plant.history(k, result.u, result.y) +
                  plant.feedthrough() * result.u[k];
  }
  return result;
}

std::vector<std::complex<double>> freq_response(
    const FracSystem& system, const Discretization& disc,
    std::span<const double> omegas) {
  const double T = disc.sample_period();
  const double nyquist = std::numbers::pi / T;
  std::vector<std::complex<double>> out;
  out.reserve(omegas.size());
  for (double omega : omegas) {
    if (!(omega > 0.0) || omega > nyquist * (1.0 + 1e-12)) {
      throw std::invalid_argument("omega must lie in (0, pi/T]: " +
                                  std::to_string(omega));
    }
    std::complex<double> num{0.0, 0.0};
    for (const Term& term : system.numerator()) {
      num += term.coeff * generating_power(disc.rule(), T, omega, term.order);
    }
    std::complex<double> den{0.0, 0.0};
    for (const Term& term : system.denominator()) {
      den += term.coeff * generating_power(disc.rule(), T, omega, term.order);
    }
    if (!(std::abs(den) >= 1e-300)) {
      throw std::invalid_argument("transfer function pole at omega = " +
                                  std::to_string(omega));
    }
    const std::complex<double> g = num / den;
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) {
      throw std::invalid_argument("transfer function not finite at omega = " +
                                  std::to_string(omega));
    }
    out.push_back(g);
  }
  return out;
}

}  // namespace fracdisc
