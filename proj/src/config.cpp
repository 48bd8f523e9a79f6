#include "fracdisc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fracdisc {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
};

// "" is the unnamed leading section that holds `mode`.
using Document = std::map<std::string, Section>;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Document tokenize(std::string_view text) {
  Document doc;
  doc[""].line = 0;
  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("", line_no, "malformed section header");
      }
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (doc.contains(current)) {
        throw ConfigError(current, line_no, "duplicate section [" + current + "]");
      }
      doc[current].line = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", line_no, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("", line_no, "empty key");
    auto& entries = doc[current].entries;
    if (entries.contains(key)) {
      throw ConfigError(key, line_no, "duplicate field: " + key);
    }
    entries[key] = {value, line_no};
  }
  return doc;
}

double to_double(const std::string& field, const Entry& entry) {
  double out = 0.0;
  const char* first = entry.value.data();
  const char* last = first + entry.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
    throw ConfigError(field, entry.line,
                      field + " must be a number, got '" + entry.value + "'");
  }
  return out;
}

std::size_t to_count(const std::string& field, const Entry& entry) {
  std::size_t out = 0;
  const char* first = entry.value.data();
  const char* last = first + entry.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(field, entry.line,
                      field + " must be a nonnegative integer, got '" +
                          entry.value + "'");
  }
  return out;
}

std::vector<double> to_list(const std::string& field, const Entry& entry) {
  std::vector<double> out;
  std::stringstream ss(entry.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(to_double(field, {std::string(trim(item)), entry.line}));
  }
  if (out.empty()) {
    throw ConfigError(field, entry.line, field + " must list at least one value");
  }
  return out;
}

// Read access to one section with bookkeeping of consumed keys, so leftovers
// can be reported as unknown.
class SectionReader {
 public:
  SectionReader(const Document& doc, const std::string& name)
      : name_(name) {
    if (auto it = doc.find(name); it != doc.end()) section_ = &it->second;
  }

  bool present() const { return section_ != nullptr; }
  std::size_t line() const { return section_ ? section_->line : 0; }

  const Entry* find(const std::string& key) {
    consumed_.insert(key);
    if (!section_) return nullptr;
    auto it = section_->entries.find(key);
    return it == section_->entries.end() ? nullptr : &it->second;
  }

  const Entry& require(const std::string& key) {
    const Entry* e = find(key);
    if (!e) throw ConfigError(key, line(), "missing field: " + qualified(key));
    return *e;
  }

  double number(const std::string& key) { return to_double(key, require(key)); }

  std::optional<double> optional_number(const std::string& key) {
    const Entry* e = find(key);
    return e ? std::optional<double>(to_double(key, *e)) : std::nullopt;
  }

  std::string qualified(const std::string& key) const {
    return name_.empty() ? key : name_ + "." + key;
  }

  void reject_unknown() const {
    if (!section_) return;
    for (const auto& [key, entry] : section_->entries) {
      if (!consumed_.contains(key)) {
        throw ConfigError(key, entry.line, "unknown field: " + qualified(key));
      }
    }
  }

 private:
  std::string name_;
  const Section* section_ = nullptr;
  std::set<std::string> consumed_;
};

std::vector<std::string> allowed_sections(Mode mode) {
  switch (mode) {
    case Mode::Coeffs:
      return {"operator", "output", "expect"};
    case Mode::Operator:
      return {"discretization", "operator", "input", "horizon", "output", "expect"};
    case Mode::SimulateSystem:
      return {"discretization", "system", "input", "horizon", "output", "expect"};
    case Mode::SimulateLoop:
      return {"discretization", "system", "controller", "setpoint", "horizon",
              "output", "expect"};
    case Mode::Example:
      return {"discretization", "example", "horizon", "output", "expect"};
    case Mode::FreqResp:
      return {"discretization", "system", "frequency", "output", "expect"};
  }
  return {};
}

std::vector<std::string> output_columns(Mode mode) {
  switch (mode) {
    case Mode::Coeffs:
      return {"j", "c_j"};
    case Mode::Operator:
    case Mode::SimulateSystem:
      return {"k", "t", "u", "y"};
    case Mode::SimulateLoop:
    case Mode::Example:
      return {"k", "t", "w", "e", "u", "y"};
    case Mode::FreqResp:
      return {"omega", "re", "im", "mag_db", "phase_deg"};
  }
  return {};
}

Discretization read_discretization(SectionReader& s) {
  if (!s.present()) {
    throw ConfigError("discretization", 0, "missing section: [discretization]");
  }
  Rule rule = Rule::BackwardEuler;
  if (const Entry* e = s.find("rule")) {
    if (e->value == "backward_euler") {
      rule = Rule::BackwardEuler;
    } else if (e->value == "tustin") {
      rule = Rule::Tustin;
    } else {
      throw ConfigError("rule", e->line,
                        "rule must be backward_euler or tustin, got '" +
                            e->value + "'");
    }
  }
  const Entry& period = s.require("sample_period");
  const double T = to_double("sample_period", period);
  if (!(T > 0.0)) {
    throw ConfigError("sample_period", period.line,
                      "sample_period must be positive");
  }
  std::optional<double> memory;
  if (const Entry* e = s.find("memory_length")) {
    memory = to_double("memory_length", *e);
    if (!(*memory >= T)) {
      throw ConfigError("memory_length", e->line,
                        "memory_length must be at least sample_period");
    }
  }
  return Discretization(rule, T, memory);
}

std::size_t read_n_steps(SectionReader& s, std::size_t minimum) {
  if (!s.present()) throw ConfigError("horizon", 0, "missing section: [horizon]");
  const Entry& e = s.require("n_steps");
  const std::size_t n = to_count("n_steps", e);
  if (n < minimum) {
    throw ConfigError("n_steps", e.line,
                      "n_steps must be at least " + std::to_string(minimum));
  }
  return n;
}

std::vector<Term> read_terms(SectionReader& s, const std::string& coeff_key,
                             const std::string& order_key) {
  const Entry& ce = s.require(coeff_key);
  const Entry& oe = s.require(order_key);
  const std::vector<double> coeffs = to_list(coeff_key, ce);
  const std::vector<double> orders = to_list(order_key, oe);
  if (coeffs.size() != orders.size()) {
    throw ConfigError(order_key, oe.line,
                      coeff_key + " and " + order_key +
                          " must have the same number of entries");
  }
  std::vector<Term> terms;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (orders[i] < 0.0) {
      throw ConfigError(order_key, oe.line, order_key + " orders must be nonnegative");
    }
    terms.push_back({coeffs[i], orders[i]});
  }
  return terms;
}

FracSystem read_system(SectionReader& s) {
  if (!s.present()) throw ConfigError("system", 0, "missing section: [system]");
  std::vector<Term> denominator = read_terms(s, "a", "beta");
  std::vector<Term> numerator = read_terms(s, "b", "alpha");
  try {
    return FracSystem(std::move(denominator), std::move(numerator));
  } catch (const std::invalid_argument& ex) {
    throw ConfigError("system", s.line(), ex.what());
  }
}

FracPid read_controller(SectionReader& s) {
  if (!s.present()) {
    throw ConfigError("controller", 0, "missing section: [controller]");
  }
  const double K = s.number("K");
  const double Ti = s.optional_number("Ti").value_or(0.0);
  const double Td = s.optional_number("Td").value_or(0.0);
  const double lambda = s.optional_number("lambda").value_or(1.0);
  const double delta = s.optional_number("delta").value_or(1.0);
  if (lambda < 0.0) {
    throw ConfigError("lambda", s.find("lambda")->line, "lambda must be nonnegative");
  }
  if (delta < 0.0) {
    throw ConfigError("delta", s.find("delta")->line, "delta must be nonnegative");
  }
  return FracPid(K, Ti, Td, lambda, delta);
}

SignalSpec read_signal(SectionReader& s, std::size_t default_onset) {
  SignalSpec spec;
  spec.onset = default_onset;
  if (const Entry* e = s.find("kind")) {
    if (e->value == "step") {
      spec.kind = SignalSpec::Kind::Step;
    } else if (e->value == "impulse") {
      spec.kind = SignalSpec::Kind::Impulse;
    } else if (e->value == "ramp") {
      spec.kind = SignalSpec::Kind::Ramp;
    } else {
      throw ConfigError("kind", e->line,
                        "kind must be step, impulse or ramp, got '" + e->value + "'");
    }
  }
  spec.amplitude = s.optional_number("amplitude").value_or(1.0);
  if (const Entry* e = s.find("onset_step")) spec.onset = to_count("onset_step", *e);
  return spec;
}

std::vector<double> read_omegas(SectionReader& s) {
  if (!s.present()) throw ConfigError("frequency", 0, "missing section: [frequency]");
  const Entry* list = s.find("omegas");
  const Entry* lo = s.find("omega_min");
  const Entry* hi = s.find("omega_max");
  const Entry* points = s.find("points");
  if (list) {
    if (lo || hi || points) {
      throw ConfigError("omegas", list->line,
                        "omegas excludes omega_min/omega_max/points");
    }
    return to_list("omegas", *list);
  }
  if (!lo || !hi || !points) {
    throw ConfigError("omegas", s.line(),
                      "missing field: frequency.omegas (or omega_min, omega_max, points)");
  }
  const double wmin = to_double("omega_min", *lo);
  const double wmax = to_double("omega_max", *hi);
  const std::size_t n = to_count("points", *points);
  if (!(wmin > 0.0)) throw ConfigError("omega_min", lo->line, "omega_min must be positive");
  if (!(wmax >= wmin)) {
    throw ConfigError("omega_max", hi->line, "omega_max must be at least omega_min");
  }
  if (n < 1) throw ConfigError("points", points->line, "points must be at least 1");
  std::vector<double> omegas(n);
  const double lmin = std::log10(wmin);
  const double lmax = std::log10(wmax);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    omegas[i] = std::pow(10.0, lmin + f * (lmax - lmin));
  }
  omegas.front() = wmin;
  omegas.back() = n == 1 ? wmin : wmax;
  return omegas;
}

void read_expectations(const Document& doc, Mode mode, RunConfig& cfg) {
  auto it = doc.find("expect");
  if (it == doc.end()) return;
  const std::vector<std::string> columns = output_columns(mode);
  for (const auto& [key, entry] : it->second.entries) {
    if (key == "tolerance") {
      cfg.tolerance = to_double(key, entry);
      if (!(cfg.tolerance >= 0.0)) {
        throw ConfigError(key, entry.line, "tolerance must be nonnegative");
      }
      continue;
    }
    Expectation ex;
    ex.key = key;
    ex.line = entry.line;
    ex.value = to_double(key, entry);
    std::string_view rest;
    if (key.starts_with("final.")) {
      ex.row = Expectation::Row::Final;
      rest = std::string_view(key).substr(6);
    } else if (key.starts_with("all.")) {
      ex.row = Expectation::Row::All;
      rest = std::string_view(key).substr(4);
    } else if (key.starts_with("row.")) {
      ex.row = Expectation::Row::Index;
      std::string_view tail = std::string_view(key).substr(4);
      const auto dot = tail.find('.');
      if (dot == std::string_view::npos) {
        throw ConfigError(key, entry.line, "expected row.<index>.<column>");
      }
      ex.index = to_count(key, {std::string(tail.substr(0, dot)), entry.line});
      rest = tail.substr(dot + 1);
    } else {
      throw ConfigError(key, entry.line, "unknown field: expect." + key);
    }
    ex.column = std::string(rest);
    if (std::find(columns.begin(), columns.end(), ex.column) == columns.end()) {
      throw ConfigError(key, entry.line, "unknown output column: " + ex.column);
    }
    cfg.expectations.push_back(std::move(ex));
  }
  std::sort(cfg.expectations.begin(), cfg.expectations.end(),
            [](const Expectation& a, const Expectation& b) { return a.line < b.line; });
}

}  // namespace

ConfigError::ConfigError(std::string field, std::size_t line,
                         const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                  : message),
      field_(std::move(field)),
      line_(line) {}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::Coeffs: return "coeffs";
    case Mode::Operator: return "operator";
    case Mode::SimulateSystem: return "simulate-system";
    case Mode::SimulateLoop: return "simulate-loop";
    case Mode::Example: return "example";
    case Mode::FreqResp: return "freq-resp";
  }
  return "";
}

std::optional<Mode> parse_mode(std::string_view text) {
  std::string normalized(text);
  std::replace(normalized.begin(), normalized.end(), '_', '-');
  for (Mode m : {Mode::Coeffs, Mode::Operator, Mode::SimulateSystem,
                 Mode::SimulateLoop, Mode::Example, Mode::FreqResp}) {
    if (normalized == mode_name(m)) return m;
  }
  return std::nullopt;
}

std::vector<double> SignalSpec::generate(std::size_t n_steps) const {
  std::vector<double> x(n_steps, 0.0);
  for (std::size_t k = onset; k < n_steps; ++k) {
    switch (kind) {
      case Kind::Step:
        x[k] = amplitude;
        break;
      case Kind::Impulse:
        x[k] = k == onset ? amplitude : 0.0;
        break;
      case Kind::Ramp:
        x[k] = amplitude * static_cast<double>(k - onset);
        break;
    }
  }
  return x;
}

RunConfig parse_config(std::string_view text) {
  const Document doc = tokenize(text);

  SectionReader top(doc, "");
  const Entry* mode_entry = top.find("mode");
  if (!mode_entry) throw ConfigError("mode", 0, "missing field: mode");
  const std::optional<Mode> mode = parse_mode(mode_entry->value);
  if (!mode) {
    throw ConfigError("mode", mode_entry->line,
                      "unknown mode '" + mode_entry->value + "'");
  }
  top.reject_unknown();

  const std::vector<std::string> allowed = allowed_sections(*mode);
  for (const auto& [name, section] : doc) {
    if (name.empty()) continue;
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
      throw ConfigError(name, section.line,
                        "section [" + name + "] is not used by mode " +
                            std::string(mode_name(*mode)));
    }
  }

  RunConfig cfg;
  cfg.mode = *mode;

  SectionReader disc(doc, "discretization");
  SectionReader op(doc, "operator");
  SectionReader system(doc, "system");
  SectionReader controller(doc, "controller");
  SectionReader input(doc, "input");
  SectionReader setpoint(doc, "setpoint");
  SectionReader example(doc, "example");
  SectionReader horizon(doc, "horizon");
  SectionReader frequency(doc, "frequency");
  SectionReader output(doc, "output");

  try {
    switch (cfg.mode) {
      case Mode::Coeffs: {
        if (!op.present()) throw ConfigError("operator", 0, "missing section: [operator]");
        cfg.order = op.number("order");
        const Entry& n = op.require("n_terms");
        cfg.n_terms = to_count("n_terms", n);
        if (cfg.n_terms < 1) throw ConfigError("n_terms", n.line, "n_terms must be at least 1");
        break;
      }
      case Mode::Operator:
        cfg.discretization = read_discretization(disc);
        if (!op.present()) throw ConfigError("operator", 0, "missing section: [operator]");
        cfg.order = op.number("order");
        cfg.signal = read_signal(input, 0);
        cfg.n_steps = read_n_steps(horizon, 1);
        break;
      case Mode::SimulateSystem:
        cfg.discretization = read_discretization(disc);
        cfg.system = read_system(system);
        cfg.signal = read_signal(input, 0);
        cfg.n_steps = read_n_steps(horizon, 1);
        break;
      case Mode::SimulateLoop:
        cfg.discretization = read_discretization(disc);
        cfg.system = read_system(system);
        cfg.controller = read_controller(controller);
        cfg.signal = read_signal(setpoint, 2);
        cfg.n_steps = read_n_steps(horizon, 1);
        break;
      case Mode::Example: {
        cfg.discretization = read_discretization(disc);
        if (cfg.discretization->rule() != Rule::BackwardEuler) {
          throw ConfigError("rule", disc.find("rule")->line,
                            "example mode requires rule = backward_euler");
        }
        cfg.n_steps = read_n_steps(horizon, 2);
        ExampleParams& p = cfg.example;
        p.a2 = example.optional_number("a2").value_or(p.a2);
        p.a1 = example.optional_number("a1").value_or(p.a1);
        p.a0 = example.optional_number("a0").value_or(p.a0);
        p.beta2 = example.optional_number("beta2").value_or(p.beta2);
        p.beta1 = example.optional_number("beta1").value_or(p.beta1);
        p.K = example.optional_number("K").value_or(p.K);
        p.Td = example.optional_number("Td").value_or(p.Td);
        p.delta = example.optional_number("delta").value_or(p.delta);
        p.T = cfg.discretization->sample_period();
        p.memory_length = cfg.discretization->memory_length();
        p.n_steps = cfg.n_steps;
        if (p.beta1 < 0.0 || p.beta2 < 0.0 || p.delta < 0.0) {
          throw ConfigError("example", example.line(),
                            "example orders must be nonnegative");
        }
        example_plant(p);
        break;
      }
      case Mode::FreqResp:
        cfg.discretization = read_discretization(disc);
        cfg.system = read_system(system);
        cfg.omegas = read_omegas(frequency);
        break;
    }
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string(mode_name(cfg.mode)), 0, ex.what());
  }

  if (output.present()) {
    if (const Entry* e = output.find("path")) cfg.output_path = e->value;
  }
  read_expectations(doc, cfg.mode, cfg);

  for (SectionReader* s : {&disc, &op, &system, &controller, &input, &setpoint,
                           &example, &horizon, &frequency, &output}) {
    s->reject_unknown();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", 0, "cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace fracdisc
