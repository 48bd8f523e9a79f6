/**
 * @file controllers.hpp
 * @brief Discrete fractional PI^lambda D^delta controller.
 *
 *   u = K e + Ti I^lambda e + Td D^delta e
 *
 * I^lambda is the order -lambda operator and D^delta the order +delta
 * operator from frac_core. A zero Ti or Td drops its term entirely, so the
 * matching order is then irrelevant. lambda = delta = 1 is the classical
 * PID with backward-rectangle integral and backward-difference derivative.
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracdisc/frac_core.hpp"

namespace fracdisc {

class FracPid {
 public:
  /// Throws std::invalid_argument if lambda or delta is negative or any
  /// parameter is non-finite.
  FracPid(double K, double Ti, double Td, double lambda, double delta);

  double K() const { return K_; }
  double Ti() const { return Ti_; }
  double Td() const { return Td_; }
  double lambda() const { return lambda_; }
  double delta() const { return delta_; }

 private:
  double K_;
  double Ti_;
  double Td_;
  double lambda_;
  double delta_;
};

/// Classical PID: lambda = delta = 1.
FracPid make_pid(double K, double Ti, double Td);

/// PD^delta: Ti = 0, lambda = 0. Throws std::invalid_argument if delta < 0.
FracPid make_pd_delta(double K, double Td, double delta);

/// Controller output for an error sequence (zero before sample 0).
/// Backward-Euler rule only; throws std::invalid_argument otherwise or on an
/// empty error sequence.
std::vector<double> controller_response(const FracPid& ctl,
                                        std::span<const double> error,
                                        const Discretization& disc);

/// du_k/de_k = K + Ti T^lambda + Td T^-delta, omitting zero-gain terms.
double controller_feedthrough(const FracPid& ctl, const Discretization& disc);

/// Controller bound to a discretization and horizon with kernels
/// precomputed, for step-by-step use inside a loop.
class DiscreteController {
 public:
  DiscreteController(const FracPid& ctl, const Discretization& disc,
                     std::size_t horizon);

  double feedthrough() const { return feedthrough_; }

  /// Output at step k with e_k = 0, given e up to index k - 1.
  double history(std::size_t k, std::span<const double> error) const;

 private:
  double integral_gain_ = 0.0;
  double derivative_gain_ = 0.0;
  std::vector<double> integral_;
  std::vector<double> derivative_;
  double feedthrough_ = 0.0;
};

}  // namespace fracdisc
