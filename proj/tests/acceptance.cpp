// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fracdisc/frac_core.hpp"
#include "fracdisc/loop.hpp"
#include "fracdisc/systems.hpp"

using namespace fracdisc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome coefficient_oracle() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double order : {0.1, 0.5, 0.9, 1.0, 1.286, 2.2}) {
    const BinomialTable c = gl_coeffs(order, 1001);
    for (std::size_t j = 0; j <= 1000; ++j) {
      const double ref = gl_coeff_direct(order, j);
      const double err = ref == 0.0 ? std::abs(c[j]) : std::abs(c[j] - ref) / std::abs(ref);
      worst = std::max(worst, err);
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-12 && secs < 1.0,
          fmt("max rel err %.3g (tol 1e-12), %.3g s", worst, secs)};
}

Outcome integer_stencils() {
  const BinomialTable d1 = gl_coeffs(1.0, 50);
  const BinomialTable d2 = gl_coeffs(2.0, 50);
  bool ok = d1[0] == 1.0 && d1[1] == -1.0 && d2[0] == 1.0 && d2[1] == -2.0 && d2[2] == 1.0;
  for (std::size_t j = 2; j < 50; ++j) ok = ok && d1[j] == 0.0;
  for (std::size_t j = 3; j < 50; ++j) ok = ok && d2[j] == 0.0;
  const OperatorWeights w2 = euler_weights(2.0, Discretization(Rule::BackwardEuler, 0.5), 10);
  ok = ok && w2[0] == 4.0 && w2[1] == -8.0 && w2[2] == 4.0 && w2[3] == 0.0;
  return {ok, ok ? "[1,-1,0,...] and [1,-2,1,0,...] exact" : "stencil mismatch"};
}

double half_derivative_of_one(double T) {
  const auto n = static_cast<std::size_t>(std::llround(1.0 / T)) + 1;
  const Discretization disc(Rule::BackwardEuler, T);
  const std::vector<double> ones(n, 1.0);
  return apply_operator(euler_weights(0.5, disc, n), ones).back();
}

Outcome half_derivative() {
  const auto start = std::chrono::steady_clock::now();
  const double exact = 1.0 / std::tgamma(0.5);
  const double e1 = std::abs(half_derivative_of_one(0.001) - exact);
  const double e2 = std::abs(half_derivative_of_one(0.0005) - exact);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {e1 <= 1e-2 && e2 < e1 && secs < 1.0,
          fmt("err %.3g at T=1e-3, %.3g at T=5e-4, %.3g s", e1, e2, secs)};
}

Outcome ode_oracle() {
  const auto start = std::chrono::steady_clock::now();
  const FracSystem plant({{1.0, 0.0}, {1.0, 1.0}}, {{1.0, 0.0}});
  const std::vector<double> step(1001, 1.0);
  const SimResult r = simulate_system(plant, step, Discretization(Rule::BackwardEuler, 0.001));
  const double err = std::abs(r.y.back() - (1.0 - std::exp(-1.0)));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {err <= 2e-3 && secs < 5.0, fmt("|y(1) - (1 - 1/e)| = %.3g (tol 2e-3), %.3g s", err, secs)};
}

Outcome example_reproduction() {
  const auto start = std::chrono::steady_clock::now();
  const ExampleParams p;
  const LoopResult direct = simulate_example_direct(p);
  const LoopResult generic = simulate_loop(example_plant(p), example_controller(p),
                                           step_setpoint(p.n_steps), example_discretization(p));
  double gap = 0.0;
  for (std::size_t k = 0; k < p.n_steps; ++k) {
    gap = std::max(gap, std::abs(direct.y[k] - generic.y[k]));
  }
  const ResidualReport res = closed_loop_residual_report(direct, p);
  const double rel = res.max_abs / res.max_term;
  const double final_err = std::abs(direct.y.back() - 50.0 / 51.0);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = direct.y.size() == 2000 && gap <= 1e-9 && rel <= 1e-8 && final_err <= 1e-3 &&
                  secs < 5.0;
  return {ok, fmt("max |direct - loop| %.3g, residual %.3g rel, ", gap, rel) +
                  fmt("|y_end - 50/51| %.3g, %.3g s", final_err, secs)};
}

Outcome short_memory() {
  ExampleParams p;
  const LoopResult full = simulate_example_direct(p);
  std::vector<double> devs;
  for (double L : {1.0, 2.0, 5.0, 10.0}) {
    p.memory_length = L;
    const LoopResult r = simulate_example_direct(p);
    double dev = 0.0;
    for (std::size_t k = 0; k < full.y.size(); ++k) dev = std::max(dev, std::abs(full.y[k] - r.y[k]));
    devs.push_back(dev);
  }
  const bool ok = std::is_sorted(devs.rbegin(), devs.rend()) &&
                  std::adjacent_find(devs.begin(), devs.end()) == devs.end();
  return {ok, fmt("deviation L=1: %.3g, L=2: %.3g, L=5: %.3g", devs[0], devs[1], devs[2]) +
                  fmt(", L=10: %.3g", devs[3])};
}

Outcome tustin_series() {
  double worst = 0.0;
  for (double alpha : {0.5, 1.286}) {
    const Discretization disc(Rule::Tustin, 0.1);
    const OperatorWeights plus = tustin_weights(alpha, disc, 20);
    const OperatorWeights minus = tustin_weights(-alpha, disc, 20);
    for (std::size_t k = 0; k < 20; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j <= k; ++j) s += plus[j] * minus[k - j];
      worst = std::max(worst, std::abs(s - (k == 0 ? 1.0 : 0.0)));
    }
  }
  const double T = 0.1;
  const OperatorWeights first = tustin_weights(1.0, Discretization(Rule::Tustin, T), 20);
  bool exact = first[0] == 2.0 / T;
  for (std::size_t j = 1; j < 20; ++j) exact = exact && first[j] == (j % 2 ? -2.0 : 2.0) * (2.0 / T);
  return {worst <= 1e-10 && exact,
          fmt("identity err %.3g (tol 1e-10), order-1 series ", worst) + (exact ? "exact" : "WRONG")};
}

Outcome frequency_response() {
  const FracSystem half_integrator({{1.0, 0.5}}, {{1.0, 0.0}});
  const std::vector<double> omegas{0.1, 1.0};
  std::string detail;
  bool ok = true;
  for (Rule rule : {Rule::Tustin, Rule::BackwardEuler}) {
    const auto h = freq_response(half_integrator, Discretization(rule, 0.01), omegas);
    const double mag = std::abs(h[1]);
    const double slope = 20.0 * std::log10(std::abs(h[1]) / std::abs(h[0]));
    ok = ok && std::abs(mag - 1.0) <= 0.05 && std::abs(slope + 10.0) <= 0.5;
    detail += fmt(rule == Rule::Tustin ? "tustin |H(1)| %.6g, slope %.4g dB/dec; "
                                       : "euler |H(1)| %.6g, slope %.4g dB/dec",
                  mag, slope);
  }
  return {ok, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const char* threads) {
  std::string cmd;
  if (threads) cmd = std::string("FRACDISC_THREADS=") + threads + " ";
  cmd += std::string("\"") + FRACDISC_CLI + "\" " + args + " > /dev/null";
  return std::system(cmd.c_str());
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "fracdisc_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir / "t1");
  fs::create_directories(dir / "t4");
  const std::string config = std::string("--config \"") + FRACDISC_CONFIG_DIR + "/example.ini\"";
  const fs::path a = dir / "a.csv";
  const fs::path b = dir / "b.csv";
  if (run_cli("example " + config + " --out \"" + a.string() + "\"", nullptr) != 0 ||
      run_cli("example " + config + " --out \"" + b.string() + "\"", nullptr) != 0) {
    return {false, "CLI run failed"};
  }
  const std::string first = slurp(a);
  const bool repeat = !first.empty() && first == slurp(b);
  bool sweep = true;
  for (const char* threads : {"1", "4"}) {
    const fs::path out = dir / (std::string("t") + threads) / "ex.csv";
    if (run_cli("example " + config + " --sweep T=0.1,0.05,0.025,0.02 --out \"" + out.string() + "\"",
                threads) != 0) {
      return {false, std::string("sweep failed with FRACDISC_THREADS=") + threads};
    }
  }
  for (const char* name : {"ex_T0.1.csv", "ex_T0.05.csv", "ex_T0.025.csv", "ex_T0.02.csv"}) {
    const std::string lhs = slurp(dir / "t1" / name);
    sweep = sweep && !lhs.empty() && lhs == slurp(dir / "t4" / name);
  }
  fs::remove_all(dir);
  return {repeat && sweep, std::string("repeat run ") + (repeat ? "identical" : "differs") +
                               ", T sweep with 1 vs 4 threads " + (sweep ? "identical" : "differs")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"coefficient recurrence vs direct product", coefficient_oracle},
      {"integer orders give classical stencils", integer_stencils},
      {"half-derivative of 1 at t = 1", half_derivative},
      {"first-order plant step response", ode_oracle},
      {"closed-loop example reproduction", example_reproduction},
      {"short memory deviation monotone in L", short_memory},
      {"Tustin series identity and order-1 pattern", tustin_series},
      {"half-integrator frequency response", frequency_response},
      {"CLI output determinism", cli_determinism},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, check] : criteria) {
    ++n;
    Outcome o{false, ""};
    try {
      o = check();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    std::printf("[%s] criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", n, name,
                o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
