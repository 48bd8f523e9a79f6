/**
 * @file systems.hpp
 * @brief Fractional-order LTI plants and their sampled simulation.
 *
 * A plant is the fractional differential equation
 *
 *   sum_i a_i D^beta_i y(t) = sum_i b_i D^alpha_i u(t)
 *
 * discretized term by term with the backward-Euler Grünwald-Letnikov kernel.
 * Solving the discrete equation for the newest output sample gives
 *
 *   y_k = ( sum_i b_i T^-alpha_i sum_{j>=0} c_j^(alpha_i) u_{k-j}
 *         - sum_i a_i T^-beta_i sum_{j>=1} c_j^(beta_i) y_{k-j} )
 *         / sum_i a_i T^-beta_i
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fracdisc/frac_core.hpp"

namespace fracdisc {

/// One coefficient/order pair of a plant polynomial.
struct Term {
  double coeff;
  double order;
};

/// Plant with denominator (output side) and numerator (input side) terms,
/// each listed by strictly increasing order.
class FracSystem {
 public:
  /// Throws std::invalid_argument if the denominator is empty, an order is
  /// negative or non-finite, orders are not strictly increasing, or the
  /// highest-order denominator coefficient is zero.
  FracSystem(std::vector<Term> denominator, std::vector<Term> numerator);

  std::span<const Term> denominator() const { return denominator_; }
  std::span<const Term> numerator() const { return numerator_; }

 private:
  std::vector<Term> denominator_;
  std::vector<Term> numerator_;
};

struct SimResult {
  double sample_period = 0.0;
  std::vector<double> t;
  std::vector<double> u;
  std::vector<double> y;
};

/// A FracSystem bound to a backward-Euler discretization and horizon, with
/// its kernels precomputed. Splits each output sample into the part fixed by
/// earlier samples and the direct feedthrough of the current input.
class DiscretePlant {
 public:
  /// Throws std::invalid_argument for a Tustin discretization, a zero
  /// horizon, or a zero implicit-step denominator.
  DiscretePlant(const FracSystem& system, const Discretization& disc,
                std::size_t horizon);

  /// sum_i a_i T^-beta_i, the coefficient of y_k.
  double denominator() const { return denominator_; }
  /// dy_k/du_k.
  double feedthrough() const { return feedthrough_; }

  /// Output at step k with u_k = 0, given u and y up to index k - 1.
  /// `u` and `y` must hold at least k + 1 samples; index k is not read.
  double history(std::size_t k, std::span<const double> u,
                 std::span<const double> y) const;

 private:
  struct Kernel {
    double coeff;
    std::vector<double> weights;
  };
  std::vector<Kernel> output_side_;
  std::vector<Kernel> input_side_;
  double denominator_ = 0.0;
  double feedthrough_ = 0.0;
};

/// Open-loop response to `input` with y_0 = 0. Backward-Euler rule only.
/// Throws std::invalid_argument on empty input, a Tustin discretization, or a
/// degenerate implicit step.
SimResult simulate_system(const FracSystem& system,
                          std::span<const double> input,
                          const Discretization& disc);

/// Discrete transfer function evaluated at z = exp(i omega T), each
/// (w(z^-1))^order taken on the principal branch of the chosen rule.
/// Throws std::invalid_argument when an omega lies outside (0, pi/T] or the
/// denominator vanishes.
std::vector<std::complex<double>> freq_response(
    const FracSystem& system, const Discretization& disc,
    std::span<const double> omegas);

}  // namespace fracdisc
