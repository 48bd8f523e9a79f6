#include "fracdisc/controllers.hpp"

#include <cmath>
#include <stdexcept>

namespace fracdisc {

namespace {

void require_backward_euler(const Discretization& disc) {
  if (disc.rule() != Rule::BackwardEuler) {
    throw std::invalid_argument(
        "controller realization requires the backward-Euler rule");
  }
}

}  // namespace

FracPid::FracPid(double K, double Ti, double Td, double lambda, double delta)
    : K_(K), Ti_(Ti), Td_(Td), lambda_(lambda), delta_(delta) {
  if (!std::isfinite(K) || !std::isfinite(Ti) || !std::isfinite(Td) ||
      !std::isfinite(lambda) || !std::isfinite(delta)) {
    throw std::invalid_argument("controller parameters must be finite");
  }
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  if (delta < 0.0) throw std::invalid_argument("delta must be nonnegative");
}

FracPid make_pid(double K, double Ti, double Td) {
  return FracPid(K, Ti, Td, 1.0, 1.0);
}

FracPid make_pd_delta(double K, double Td, double delta) {
  return FracPid(K, 0.0, Td, 0.0, delta);
}

std::vector<double> controller_response(const FracPid& ctl,
                                        std::span<const double> error,
                                        const Discretization& disc) {
  require_backward_euler(disc);
  if (error.empty()) {
    throw std::invalid_argument("error sequence must not be empty");
  }
  std::vector<double> u(error.size());
  for (std::size_t k = 0; k < error.size(); ++k) u[k] = ctl.K() * error[k];
  if (ctl.Ti() != 0.0) {
    const std::vector<double> integral =
        apply_operator(euler_weights(-ctl.lambda(), disc, error.size()), error);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] += ctl.Ti() * integral[k];
  }
  if (ctl.Td() != 0.0) {
    const std::vector<double> derivative =
        apply_operator(euler_weights(ctl.delta(), disc, error.size()), error);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] += ctl.Td() * derivative[k];
  }
  return u;
}

double controller_feedthrough(const FracPid& ctl, const Discretization& disc) {
  require_backward_euler(disc);
  // Same expressions as the j = 0 kernel entries, so the result equals the
  // k = 0 impulse response bit for bit.
  double g = ctl.K() * 1.0;
  if (ctl.Ti() != 0.0) {
    g += ctl.Ti() * euler_weights(-ctl.lambda(), disc, 1)[0];
  }
  if (ctl.Td() != 0.0) {
    g += ctl.Td() * euler_weights(ctl.delta(), disc, 1)[0];
  }
  return g;
}

DiscreteController::DiscreteController(const FracPid& ctl,
                                       const Discretization& disc,
                                       std::size_t horizon) {
  require_backward_euler(disc);
  if (ctl.Ti() != 0.0) {
    integral_gain_ = ctl.Ti();
    OperatorWeights w = euler_weights(-ctl.lambda(), disc, horizon);
    integral_.assign(w.weights().begin(), w.weights().end());
  }
  if (ctl.Td() != 0.0) {
    derivative_gain_ = ctl.Td();
    OperatorWeights w = euler_weights(ctl.delta(), disc, horizon);
    derivative_.assign(w.weights().begin(), w.weights().end());
  }
  feedthrough_ = controller_feedthrough(ctl, disc);
}

double DiscreteController::history(std::size_t k,
                                   std::span<const double> error) const {
  double acc = 0.0;
  if (!integral_.empty()) {
    acc += integral_gain_ * convolve_at(integral_, error, k, 1);
  }
  if (!derivative_.empty()) {
    acc += derivative_gain_ * convolve_at(derivative_, error, k, 1);
  }
  return acc;
}

}  // namespace fracdisc
