/**
 * @file loop.hpp
 * @brief Unity-feedback loop of a fractional plant and a PI^lambda D^delta
 * controller.
 *
 *   w --> (+) --e--> [controller] --u--> [plant] --+--> y
 *          ^ -                                     |
 *          +---------------------------------------+
 *
 * Both blocks may have direct feedthrough, which makes y_k and u_k depend on
 * each other within one sample. Each step writes
 *
 *   y_k = P_k + g_p u_k,   u_k = C_k + g_c (w_k - y_k)
 *
 * where P_k and C_k collect the history sums, and solves the scalar equation
 * for y_k.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fracdisc/controllers.hpp"
#include "fracdisc/frac_core.hpp"
#include "fracdisc/systems.hpp"

namespace fracdisc {

struct LoopResult {
  double sample_period = 0.0;
  std::vector<double> t;
  std::vector<double> w;
  std::vector<double> e;
  std::vector<double> u;
  std::vector<double> y;
};

/// Step setpoint: 0 before `onset`, `amplitude` from `onset` on. The default
/// onset of 2 samples is the timing used by the reference example.
std::vector<double> step_setpoint(std::size_t n_steps, double amplitude = 1.0,
                                  std::size_t onset = 2);

/// Closed-loop simulation, backward-Euler rule only. The controller and plant
/// share `disc` (one sample period and memory policy).
/// Throws std::invalid_argument for an empty setpoint, a Tustin rule, or a
/// degenerate algebraic loop (1 + g_p g_c == 0).
LoopResult simulate_loop(const FracSystem& system, const FracPid& ctl,
                         std::span<const double> setpoint,
                         const Discretization& disc);

/// Reference example: plant
///   a2 D^beta2 y + a1 D^beta1 y + a0 y = u
/// under a PD^delta controller u = K e + Td D^delta e, unit step at k = 2.
struct ExampleParams {
  double a2 = 0.8;
  double a1 = 0.5;
  double a0 = 1.0;
  double beta2 = 2.2;
  double beta1 = 0.9;
  double Td = 5.326;
  double K = 50.0;
  double delta = 1.286;
  double T = 0.05;
  std::size_t n_steps = 2000;
  /// Memory length in seconds; std::nullopt keeps the full history.
  std::optional<double> memory_length;
};

FracSystem example_plant(const ExampleParams& params);
FracPid example_controller(const ExampleParams& params);
Discretization example_discretization(const ExampleParams& params);

/// Closed-loop difference equation of the example, solved directly for y_k
/// with the combined denominator
///   a2 T^-beta2 + a1 T^-beta1 + Td T^-delta + (a0 + K).
/// Throws std::invalid_argument if n_steps < 2 or the parameters are invalid.
LoopResult simulate_example_direct(const ExampleParams& params);

struct ResidualReport {
  /// max_k |lhs_k - rhs_k|
  double max_abs = 0.0;
  /// Largest magnitude of any single term of the equation over all k.
  double max_term = 0.0;
};

/// Residual of the discretized closed-loop equation
///   a2 D^beta2 y + a1 D^beta1 y + Td D^delta y + (a0 + K) y
///     = K w + Td D^delta w
/// evaluated on `result` with apply_operator. Throws std::invalid_argument if
/// the result columns have mismatched lengths or are empty.
ResidualReport closed_loop_residual_report(const LoopResult& result,
                                           const ExampleParams& params);

/// max_abs of closed_loop_residual_report.
double closed_loop_equation_residual(const LoopResult& result,
                                     const ExampleParams& params);

}  // namespace fracdisc
