/**
 * @file frac_core.hpp
 * @brief Grünwald-Letnikov binomial coefficients and discrete fractional
 * differintegral operators.
 *
 * A differintegral of real order alpha is discretized through a generating
 * function w(z^-1) raised to the power alpha. Two rules are provided:
 *
 *   backward Euler:  w(z^-1) = (1 - z^-1) / T
 *   Tustin:          w(z^-1) = (2 / T) (1 - z^-1) / (1 + z^-1)
 *
 * The power series of (w(z^-1))^alpha gives a causal convolution kernel. A
 * positive order differentiates, a negative order integrates, and order 0 is
 * the identity. Signals are taken to be zero before sample 0.
 */
#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace fracdisc {

enum class Rule { BackwardEuler, Tustin };

/// Sample period, generating-function rule and memory policy for one run.
class Discretization {
 public:
  /// `memory_length` in seconds; std::nullopt keeps the full history.
  /// Throws std::invalid_argument unless sample_period > 0 and, for short
  /// memory, memory_length >= sample_period.
  Discretization(Rule rule, double sample_period,
                 std::optional<double> memory_length = std::nullopt);

  Rule rule() const { return rule_; }
  double sample_period() const { return sample_period_; }
  const std::optional<double>& memory_length() const { return memory_length_; }
  bool full_memory() const { return !memory_length_.has_value(); }

  /// Number of kernel terms the memory policy retains: floor(L/T) + 1, or
  /// SIZE_MAX under full memory.
  std::size_t memory_terms() const;

  Discretization with_sample_period(double sample_period) const;
  Discretization with_memory(std::optional<double> memory_length) const;

 private:
  Rule rule_;
  double sample_period_;
  std::optional<double> memory_length_;
};

/// Coefficients c_j = (-1)^j binom(order, j) of (1 - x)^order.
class BinomialTable {
 public:
  BinomialTable(double order, std::vector<double> coeffs)
      : order_(order), coeffs_(std::move(coeffs)) {}

  double order() const { return order_; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  double operator[](std::size_t j) const { return coeffs_[j]; }

 private:
  double order_;
  std::vector<double> coeffs_;
};

/// Convolution kernel of a discretized differintegral operator.
class OperatorWeights {
 public:
  OperatorWeights(double order, std::vector<double> weights,
                  Discretization discretization)
      : order_(order),
        weights_(std::move(weights)),
        discretization_(discretization) {}

  double order() const { return order_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t j) const { return weights_[j]; }
  const Discretization& discretization() const { return discretization_; }

 private:
  double order_;
  std::vector<double> weights_;
  Discretization discretization_;
};

/// First n_terms coefficients by the recurrence
///   c_0 = 1,  c_j = (1 - (1 + order) / j) c_{j-1}.
/// Throws std::invalid_argument when n_terms == 0.
BinomialTable gl_coeffs(double order, std::size_t n_terms);

/// c_j as the product prod_{i=1..j} (i - 1 - order) / i. Independent of
/// gl_coeffs; used to cross-check it.
double gl_coeff_direct(double order, std::size_t j);

/// Backward-Euler kernel T^-order c_j^(order), truncated by the memory policy.
/// Throws std::invalid_argument for a Tustin discretization or n_terms == 0.
OperatorWeights euler_weights(double order, const Discretization& disc,
                              std::size_t n_terms);

/// Tustin kernel: series of (2/T)^order ((1 - x)/(1 + x))^order, formed as
/// the product of the (1 - x)^order and (1 + x)^-order series. Truncated by
/// the memory policy. Throws std::invalid_argument for a backward-Euler
/// discretization or n_terms == 0.
OperatorWeights tustin_weights(double order, const Discretization& disc,
                               std::size_t n_terms);

/// Dispatches to euler_weights or tustin_weights by disc.rule().
OperatorWeights operator_weights(double order, const Discretization& disc,
                                 std::size_t n_terms);

/// out[k] = sum_{j=0..min(k, N)} w[j] signal[k-j].
/// Throws std::invalid_argument on an empty signal.
std::vector<double> apply_operator(const OperatorWeights& weights,
                                   std::span<const double> signal);

/// sum_{j=first..min(k, N)} w[j] signal[k-j]; `signal` must hold at least
/// k + 1 samples. With first = 1 this is the contribution of the history
/// strictly before sample k.
double convolve_at(std::span<const double> weights,
                   std::span<const double> signal, std::size_t k,
                   std::size_t first = 0);

}  // namespace fracdisc
