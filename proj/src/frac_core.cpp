#include "fracdisc/frac_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracdisc {

namespace {

// Absorbs representation error in L/T (0.3/0.1 == 2.9999999999999996).
constexpr double kFloorSlack = 1e-9;

std::size_t retained_terms(const Discretization& disc, std::size_t n_terms) {
  if (n_terms == 0) {
    throw std::invalid_argument("n_terms must be at least 1");
  }
  return std::min(n_terms, disc.memory_terms());
}

}  // namespace

Discretization::Discretization(Rule rule, double sample_period,
                               std::optional<double> memory_length)
    : rule_(rule), sample_period_(sample_period), memory_length_(memory_length) {
  if (!(sample_period > 0.0) || !std::isfinite(sample_period)) {
    throw std::invalid_argument("sample_period must be positive");
  }
  if (memory_length && !(*memory_length >= sample_period)) {
    throw std::invalid_argument(
        "memory_length must be at least one sample_period");
  }
}

std::size_t Discretization::memory_terms() const {
  if (!memory_length_) return std::numeric_limits<std::size_t>::max();
  const double ratio = *memory_length_ / sample_period_;
  if (ratio >= static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)) {
    return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(std::floor(ratio + kFloorSlack)) + 1;
}

Discretization Discretization::with_sample_period(double sample_period) const {
  return Discretization(rule_, sample_period, memory_length_);
}

Discretization Discretization::with_memory(
    std::optional<double> memory_length) const {
  return Discretization(rule_, sample_period_, memory_length);
}

BinomialTable gl_coeffs(double order, std::size_t n_terms) {
  if (n_terms == 0) {
    throw std::invalid_argument("n_terms must be at least 1");
  }
  std::vector<double> c(n_terms);
  c[0] = 1.0;
  for (std::size_t j = 1; j < n_terms; ++j) {
    c[j] = (1.0 - (1.0 + order) / static_cast<double>(j)) * c[j - 1];
  }
  return BinomialTable(order, std::move(c));
}

double gl_coeff_direct(double order, std::size_t j) {
  double product = 1.0;
  for (std::size_t i = 1; i <= j; ++i) {
    const double di = static_cast<double>(i);
    product *= (di - 1.0 - order) / di;
  }
  return product;
}

OperatorWeights euler_weights(double order, const Discretization& disc,
                              std::size_t n_terms) {
  if (disc.rule() != Rule::BackwardEuler) {
    throw std::invalid_argument("euler_weights requires the backward-Euler rule");
  }
  const std::size_t n = retained_terms(disc, n_terms);
  const double scale = std::pow(disc.sample_period(), -order);
  BinomialTable c = gl_coeffs(order, n);
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = scale * c[j];
  return OperatorWeights(order, std::move(w), disc);
}

OperatorWeights tustin_weights(double order, const Discretization& disc,
                               std::size_t n_terms) {
  if (disc.rule() != Rule::Tustin) {
    throw std::invalid_argument("tustin_weights requires the Tustin rule");
  }
  const std::size_t n = retained_terms(disc, n_terms);
  // (1 - x)^order and (1 + x)^-order; the latter has coefficients
  // (-1)^j c_j^(-order).
  BinomialTable numer = gl_coeffs(order, n);
  BinomialTable denom = gl_coeffs(-order, n);
  const double scale = std::pow(2.0 / disc.sample_period(), order);
  std::vector<double> w(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      const std::size_t i = k - j;
      const double alt = (i % 2 == 0) ? denom[i] : -denom[i];
      acc += numer[j] * alt;
    }
    w[k] = scale * acc;
  }
  return OperatorWeights(order, std::move(w), disc);
}

OperatorWeights operator_weights(double order, const Discretization& disc,
                                 std::size_t n_terms) {
  return disc.rule() == Rule::BackwardEuler
             ? euler_weights(order, disc, n_terms)
             : tustin_weights(order, disc, n_terms);
}

double convolve_at(std::span<const double> weights,
                   std::span<const double> signal, std::size_t k,
                   std::size_t first) {
  if (weights.empty()) return 0.0;
  const std::size_t last = std::min(k, weights.size() - 1);
  double acc = 0.0;
  for (std::size_t j = first; j <= last; ++j) {
    acc += weights[j] * signal[k - j];
  }
  return acc;
}

std::vector<double> apply_operator(const OperatorWeights& weights,
                                   std::span<const double> signal) {
  if (signal.empty()) {
    throw std::invalid_argument("signal must not be empty");
  }
  std::vector<double> out(signal.size());
  for (std::size_t k = 0; k < signal.size(); ++k) {
    out[k] = convolve_at(weights.weights(), signal, k);
  }
  return out;
}

}  // namespace fracdisc
