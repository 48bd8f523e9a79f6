#include "fracdisc/run.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fracdisc {

namespace {

std::vector<double> index_column(std::size_t n) {
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = static_cast<double>(i);
  return k;
}

Table loop_table(const LoopResult& r) {
  return {{"k", "t", "w", "e", "u", "y"},
          {index_column(r.y.size()), r.t, r.w, r.e, r.u, r.y}};
}

Table open_loop_table(std::vector<double> t, std::vector<double> u,
                      std::vector<double> y) {
  const std::size_t n = y.size();
  return {{"k", "t", "u", "y"},
          {index_column(n), std::move(t), std::move(u), std::move(y)}};
}

}  // namespace

const std::vector<double>& Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return columns[i];
  }
  throw std::invalid_argument("no such column: " + std::string(name));
}

Table execute(const RunConfig& cfg) {
  switch (cfg.mode) {
    case Mode::Coeffs: {
      const BinomialTable c = gl_coeffs(cfg.order, cfg.n_terms);
      return {{"j", "c_j"},
              {index_column(c.size()),
               std::vector<double>(c.coeffs().begin(), c.coeffs().end())}};
    }
    case Mode::Operator: {
      const Discretization& disc = *cfg.discretization;
      std::vector<double> u = cfg.signal.generate(cfg.n_steps);
      std::vector<double> y =
          apply_operator(operator_weights(cfg.order, disc, cfg.n_steps), u);
      std::vector<double> t(cfg.n_steps);
      for (std::size_t k = 0; k < t.size(); ++k) {
        t[k] = static_cast<double>(k) * disc.sample_period();
      }
      return open_loop_table(std::move(t), std::move(u), std::move(y));
    }
    case Mode::SimulateSystem: {
      SimResult r = simulate_system(*cfg.system, cfg.signal.generate(cfg.n_steps),
                                    *cfg.discretization);
      return open_loop_table(std::move(r.t), std::move(r.u), std::move(r.y));
    }
    case Mode::SimulateLoop:
      return loop_table(simulate_loop(*cfg.system, *cfg.controller,
                                      cfg.signal.generate(cfg.n_steps),
                                      *cfg.discretization));
    case Mode::Example:
      return loop_table(simulate_example_direct(cfg.example));
    case Mode::FreqResp: {
      const auto g = freq_response(*cfg.system, *cfg.discretization, cfg.omegas);
      Table table{{"omega", "re", "im", "mag_db", "phase_deg"},
                  std::vector<std::vector<double>>(5)};
      for (std::size_t i = 0; i < g.size(); ++i) {
        table.columns[0].push_back(cfg.omegas[i]);
        table.columns[1].push_back(g[i].real());
        table.columns[2].push_back(g[i].imag());
        table.columns[3].push_back(20.0 * std::log10(std::abs(g[i])));
        table.columns[4].push_back(std::arg(g[i]) * 180.0 / std::numbers::pi);
      }
      return table;
    }
  }
  throw std::logic_error("unhandled mode");
}

std::string format_number(double value) {
  // + 0.0 folds -0 into 0.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value + 0.0);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out += ',';
    out += table.header[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      out += format_number(table.columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> check_expectations(const Table& table,
                                            const RunConfig& cfg) {
  std::vector<std::string> failures;
  const auto fail = [&](const Expectation& ex, std::size_t row, double actual) {
    failures.push_back("expectation " + ex.key + " failed at row " +
                       std::to_string(row) + ": got " + format_number(actual) +
                       ", expected " + format_number(ex.value) + " +/- " +
                       format_number(cfg.tolerance));
  };
  for (const Expectation& ex : cfg.expectations) {
    const std::vector<double>& col = table.column(ex.column);
    if (col.empty()) {
      failures.push_back("expectation " + ex.key + ": empty output");
      continue;
    }
    const auto within = [&](double v) {
      return std::abs(v - ex.value) <= cfg.tolerance;
    };
    switch (ex.row) {
      case Expectation::Row::Final:
        if (!within(col.back())) fail(ex, col.size() - 1, col.back());
        break;
      case Expectation::Row::All:
        for (std::size_t r = 0; r < col.size(); ++r) {
          if (!within(col[r])) {
            fail(ex, r, col[r]);
            break;
          }
        }
        break;
      case Expectation::Row::Index:
        if (ex.index >= col.size()) {
          failures.push_back("expectation " + ex.key + ": row " +
                             std::to_string(ex.index) + " out of range");
        } else if (!within(col[ex.index])) {
          fail(ex, ex.index, col[ex.index]);
        }
        break;
    }
  }
  return failures;
}

SweepSpec parse_sweep(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw std::invalid_argument("--sweep expects <field>=<v1,v2,...>");
  }
  SweepSpec spec;
  spec.field_label = std::string(text.substr(0, eq));
  if (spec.field_label == "T" || spec.field_label == "sample_period") {
    spec.field = SweepField::SamplePeriod;
  } else if (spec.field_label == "L" || spec.field_label == "memory_length") {
    spec.field = SweepField::MemoryLength;
  } else {
    throw std::invalid_argument("--sweep field must be T, sample_period, L or memory_length");
  }
  std::stringstream ss{std::string(text.substr(eq + 1))};
  std::string token;
  while (std::getline(ss, token, ',')) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      throw std::invalid_argument("--sweep value is not a number: '" + token + "'");
    }
    spec.tokens.push_back(token);
    spec.values.push_back(v);
  }
  if (spec.values.empty()) throw std::invalid_argument("--sweep needs at least one value");
  return spec;
}

RunConfig apply_sweep_value(const RunConfig& cfg, SweepField field, double value) {
  if (!cfg.discretization) {
    throw std::invalid_argument("mode " + std::string(mode_name(cfg.mode)) +
                                " has no discretization to sweep");
  }
  RunConfig out = cfg;
  if (field == SweepField::SamplePeriod) {
    out.discretization = cfg.discretization->with_sample_period(value);
  } else {
    out.discretization = cfg.discretization->with_memory(value);
  }
  out.example.T = out.discretization->sample_period();
  out.example.memory_length = out.discretization->memory_length();
  return out;
}

std::string sweep_output_path(const std::string& base, const std::string& label,
                              const std::string& token) {
  const std::filesystem::path p(base);
  std::filesystem::path out = p.parent_path() /
      (p.stem().string() + "_" + label + token + p.extension().string());
  return out.string();
}

std::vector<SweepOutcome> run_sweep(const RunConfig& cfg, const SweepSpec& sweep,
                                    const std::string& base_path,
                                    std::size_t threads) {
  const std::size_t n = sweep.values.size();
  std::vector<SweepOutcome> outcomes(n);
  for (std::size_t i = 0; i < n; ++i) {
    outcomes[i].path = sweep_output_path(base_path, sweep.field_label, sweep.tokens[i]);
  }
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      SweepOutcome& outcome = outcomes[i];
      try {
        const RunConfig run_cfg = apply_sweep_value(cfg, sweep.field, sweep.values[i]);
        const Table table = execute(run_cfg);
        write_file(outcome.path, to_csv(table));
        outcome.failures = check_expectations(table, run_cfg);
      } catch (const std::exception& ex) {
        outcome.error = ex.what();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, n);
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  return outcomes;
}

std::size_t sweep_threads_from_env() {
  if (const char* env = std::getenv("FRACDISC_THREADS")) {
    std::size_t n = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc() || ptr != s.data() + s.size() || n == 0) {
      throw std::invalid_argument("FRACDISC_THREADS must be a positive integer");
    }
    return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_file(const std::string& path, const std::string& contents) {
  // Sweep workers may race here; a failure shows up when opening the file.
  if (const auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace fracdisc
