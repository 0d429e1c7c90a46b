/**
 * @file cli.hpp
 * @brief Batch experiments on the perturbed harmonic oscillator and the
 *        Rössler system, with text or CSV tables as output.
 *
 * Exit status: 0 success, 1 a containment check failed, 2 an integration step
 * failed (rough enclosure or series), 64 bad command line.
 */
#pragma once

#include <CLI11.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "incluso/incluso.hpp"

namespace incluso::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitIntegration = 2;
inline constexpr int kExitUsage = 64;

class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Format { text, csv };

struct ExperimentSpec {
  std::string name;
  std::optional<double> eps;
  std::optional<double> eps1;
  std::optional<double> eps2;
  std::optional<double> delta0;
  std::optional<double> step;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> order;
  std::optional<Method> method;
  std::optional<CwVariant> variant;
  std::optional<NormKind> norm;
  Format format = Format::text;
  std::string out;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"table1", "table2", "table3", "rossler", "resonance"};
  return names;
}

// ---- command line -----------------------------------------------------------------

namespace detail {

inline double parse_decimal(const std::string& flag, const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw UsageError(flag + ": not a decimal number: '" + s + "'");
  return v;
}

inline std::size_t parse_count(const std::string& flag, const std::string& s) {
  std::size_t v = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || v == 0) throw UsageError(flag + ": not a positive integer: '" + s + "'");
  return v;
}

}  // namespace detail

/// Parses `incluso <experiment> [flags]`; args excludes the program name.
/// Throws UsageError; returns nullopt when help was requested (text in `help`).
[[nodiscard]] inline std::optional<ExperimentSpec> parse_command_line(const std::vector<std::string>& args,
                                                                      std::string* help = nullptr) {
  CLI::App app{"Rigorous enclosures of perturbed ODEs: batch experiments", "incluso"};
  app.allow_extras(false);
  ExperimentSpec spec;
  std::string eps, eps1, eps2, delta0, step, steps, order, method, variant, norm, format;
  app.add_option("experiment", spec.name, "table1 | table2 | table3 | rossler | resonance")->required();
  auto* o_eps = app.add_option("--eps", eps, "perturbation size (experiment-specific meaning)");
  auto* o_eps1 = app.add_option("--eps1", eps1, "perturbation radius of the first equation");
  auto* o_eps2 = app.add_option("--eps2", eps2, "perturbation radius of the second equation");
  auto* o_delta0 = app.add_option("--delta0", delta0, "radius of the initial box");
  auto* o_step = app.add_option("--step", step, "time step");
  auto* o_steps = app.add_option("--steps", steps, "number of steps (per period for resonance)");
  auto* o_order = app.add_option("--order", order, "Taylor order");
  auto* o_method = app.add_option("--method", method, "ln | cw");
  auto* o_variant = app.add_option("--variant", variant, "w1 | w2");
  auto* o_norm = app.add_option("--norm", norm, "max | sum | euclid");
  auto* o_format = app.add_option("--format", format, "text | csv");
  app.add_option("--out", spec.out, "write the table to PATH");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    if (help) *help = app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  bool known = false;
  for (const auto& n : experiment_names()) known = known || n == spec.name;
  if (!known) throw UsageError("unknown experiment '" + spec.name + "'");

  if (o_eps->count()) spec.eps = detail::parse_decimal("--eps", eps);
  if (o_eps1->count()) spec.eps1 = detail::parse_decimal("--eps1", eps1);
  if (o_eps2->count()) spec.eps2 = detail::parse_decimal("--eps2", eps2);
  if (o_delta0->count()) spec.delta0 = detail::parse_decimal("--delta0", delta0);
  if (o_step->count()) spec.step = detail::parse_decimal("--step", step);
  if (o_steps->count()) spec.steps = detail::parse_count("--steps", steps);
  if (o_order->count()) spec.order = detail::parse_count("--order", order);
  for (auto [name, v] : {std::pair{"--eps", spec.eps}, std::pair{"--eps1", spec.eps1},
                         std::pair{"--eps2", spec.eps2}, std::pair{"--delta0", spec.delta0}})
    if (v && *v < 0.0) throw UsageError(std::string(name) + " must be non-negative");
  if (spec.step && !(*spec.step > 0.0)) throw UsageError("--step must be positive");

  if (o_method->count()) {
    if (method == "ln") spec.method = Method::ln;
    else if (method == "cw") spec.method = Method::cw;
    else throw UsageError("--method must be ln or cw");
  }
  if (o_variant->count()) {
    if (variant == "w1") spec.variant = CwVariant::delta_on_w1;
    else if (variant == "w2") spec.variant = CwVariant::delta_on_w2;
    else throw UsageError("--variant must be w1 or w2");
  }
  if (o_norm->count()) {
    if (norm == "max") spec.norm = NormKind::max;
    else if (norm == "sum") spec.norm = NormKind::sum;
    else if (norm == "euclid") spec.norm = NormKind::euclid;
    else throw UsageError("--norm must be max, sum or euclid");
  }
  if (o_format->count()) {
    if (format == "text") spec.format = Format::text;
    else if (format == "csv") spec.format = Format::csv;
    else throw UsageError("--format must be text or csv");
  }
  return spec;
}

// ---- tables -------------------------------------------------------------------------

/// Shortest decimal that reads back to the same double.
[[nodiscard]] inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) {
    row.resize(header_.size());
    rows_.push_back(std::move(row));
  }

  void write(std::ostream& os, Format f) const {
    if (f == Format::csv) {
      write_csv_row(os, header_);
      for (const auto& r : rows_) write_csv_row(os, r);
      return;
    }
    std::vector<std::size_t> w(header_.size());
    for (std::size_t j = 0; j < header_.size(); ++j) {
      w[j] = header_[j].size();
      for (const auto& r : rows_) w[j] = std::max(w[j], r[j].size());
    }
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t j = 0; j < r.size(); ++j) {
        os << (j ? "  " : "") << r[j];
        if (j + 1 < r.size()) os << std::string(w[j] - r[j].size(), ' ');
      }
      os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
  }

 private:
  static void write_csv_row(std::ostream& os, const std::vector<std::string>& r) {
    for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << r[j];
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// ---- experiments ------------------------------------------------------------------

namespace detail {

inline IVector oscillator_start(double delta0) {
  return IVector{Interval(1.0) + symmetric(delta0), symmetric(delta0)};
}

inline SolverConfig base_config(const ExperimentSpec& s) {
  SolverConfig cfg;
  cfg.ln_norm = s.norm.value_or(NormKind::euclid);
  if (s.variant) cfg.cw_variant = *s.variant;
  if (s.order) cfg.taylor_order = *s.order;
  return cfg;
}

inline std::vector<Method> methods(const ExperimentSpec& s) {
  if (s.method) return {*s.method};
  return {Method::ln, Method::cw};
}

// One Δ evaluation from the oscillator start box with step h; returns D.
inline PVector oscillator_delta(const PerturbedSystem& sys, const IVector& x0, double h, SolverConfig cfg, Method m) {
  cfg.step = h;
  cfg.method = m;
  try {
    const IVector W2 = rough_enclosure(sys, x0, h, sys.perturbation(), cfg.rough);
    const PVector yc = mid(sys.perturbation());
    const UnperturbedStep u = unperturbed_step(sys, make_set(x0, cfg.representation), h, yc, cfg.taylor_order,
                                               cfg.rough, W2);
    const IVector W1 = intersect(u.W1, W2).value_or(W2);
    return compute_delta(sys, W1, W2, yc, h, cfg).D;
  } catch (IntegrationError& e) {
    e.set_step_index(0);
    throw;
  }
}

inline Table delta_table(const ExperimentSpec& s, double eps1, double eps2, const std::vector<double>& default_steps) {
  const PerturbedSystem sys = models::harmonic_oscillator(eps1, eps2);
  const IVector x0 = oscillator_start(s.delta0.value_or(0.0));
  const SolverConfig cfg = base_config(s);
  const std::vector<double> hs = s.step ? std::vector<double>{*s.step} : default_steps;
  const auto ms = methods(s);

  std::vector<std::string> header{"h"};
  for (Method m : ms) {
    if (m == Method::ln) header.emplace_back("LN_D");
    else header.insert(header.end(), {"CW_D1", "CW_D2"});
  }
  Table t(header);
  for (double h : hs) {
    std::vector<std::string> row{format_number(h)};
    for (Method m : ms) {
      const PVector D = oscillator_delta(sys, x0, h, cfg, m);
      if (m == Method::ln) row.push_back(format_number(D[0]));
      else row.insert(row.end(), {format_number(D[0]), format_number(D[1])});
    }
    t.add(std::move(row));
  }
  return t;
}

inline Table table1(const ExperimentSpec& s) {
  const double e1 = s.eps1.value_or(s.eps.value_or(0.1));
  const double e2 = s.eps2.value_or(s.eps.value_or(0.1));
  return delta_table(s, e1, e2, {0.799, 0.7, 0.66, 0.658, 0.657, 0.65, 0.5, 0.25, 0.1, 0.01, 0.001});
}

inline Table table2(const ExperimentSpec& s) {
  const double e1 = s.eps1.value_or(0.0);
  const double e2 = s.eps2.value_or(s.eps.value_or(0.1));
  return delta_table(s, e1, e2, {0.8, 0.5, 0.25, 0.1, 0.01, 0.001});
}

/// Diameter of the enclosure after one period 2π taken in `steps` equal steps.
inline double oscillator_period_diam(double eps1, double eps2, double delta0, std::size_t steps, SolverConfig cfg,
                                     Method m) {
  cfg.method = m;
  cfg.step = 2.0 * std::numbers::pi / static_cast<double>(steps);
  const PerturbedSystem sys = models::harmonic_oscillator(eps1, eps2);
  const EnclosureSet s = integrate(sys, make_set(oscillator_start(delta0), cfg.representation), 0.0, steps, cfg);
  return diam(hull_of(s));
}

inline Table table3(const ExperimentSpec& s) {
  struct Row {
    double eps;
    double delta0;
    std::size_t steps;
  };
  std::vector<Row> rows;
  if (s.eps || s.eps2 || s.delta0 || s.steps) {
    rows.push_back({s.eps2.value_or(s.eps.value_or(0.1)), s.delta0.value_or(0.01), s.steps.value_or(100)});
  } else {
    rows = {{0.1, 0.01, 8},   {0.1, 0.01, 100}, {0.1, 0.01, 1000}, {0.1, 0.01, 10000}, {0.1, 0.01, 100000},
            {0.1, 0.0, 100},  {0.1, 0.1, 100},  {0.01, 0.01, 100}, {1.0, 0.01, 100}, {10.0, 0.01, 100}};
  }
  const double e1 = s.eps1.value_or(0.0);
  const SolverConfig cfg = base_config(s);
  const auto ms = methods(s);
  std::vector<std::string> header{"eps", "delta0", "steps", "h"};
  for (Method m : ms) header.emplace_back(m == Method::ln ? "LN_diam" : "CW_diam");
  Table t(header);
  for (const Row& r : rows) {
    std::vector<std::string> row{format_number(r.eps), format_number(r.delta0), std::to_string(r.steps),
                                 format_number(2.0 * std::numbers::pi / static_cast<double>(r.steps))};
    for (Method m : ms) row.push_back(format_number(oscillator_period_diam(e1, r.eps, r.delta0, r.steps, cfg, m)));
    t.add(std::move(row));
  }
  return t;
}

inline std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("INCLUSO_SEED")) {
    std::uint64_t v = 0;
    const std::string str(s);
    const auto [ptr, ec] = std::from_chars(str.data(), str.data() + str.size(), v);
    if (ec == std::errc() && ptr == str.data() + str.size()) return v;
    throw UsageError("INCLUSO_SEED must be a non-negative integer");
  }
  return 20240611;
}

/// First upward crossing of x1 = 0 by an RK4 trajectory, refined by secant
/// iteration on the last step. Returns (time, point).
inline std::optional<std::pair<double, PVector>> sample_crossing(const PerturbedSystem& sys, PVector x,
                                                                 const Selection& y, double dt, double horizon) {
  bool left = false;
  for (double t = 0.0; t < horizon; t += dt) {
    const PVector next = rk4_step(sys, x, t, dt, y);
    if (x[0] < 0.0) left = true;
    if (left && x[0] < 0.0 && next[0] >= 0.0) {
      double a = 0.0;
      double b = dt;
      double fa = x[0];
      double fb = next[0];
      for (int it = 0; it < 60 && fb != fa; ++it) {
        const double c = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = c;
        fb = rk4_step(sys, x, t, b, y)[0];
        if (std::abs(b - a) < 1e-16) break;
      }
      PVector hit = rk4_step(sys, x, t, b, y);
      hit[0] = 0.0;  // on the section up to the secant tolerance
      return std::pair{t + b, std::move(hit)};
    }
    x = next;
  }
  return std::nullopt;
}

struct RosslerRun {
  Table table;
  bool contained = true;
};

inline RosslerRun rossler(const ExperimentSpec& s) {
  const double eps = s.eps.value_or(1e-4);
  const double d0 = s.delta0.value_or(1e-4);
  const PerturbedSystem sys = models::rossler(5.7, eps);
  const IVector x0{Interval(0.0), Interval(-10.3) + symmetric(d0), Interval(0.03) + symmetric(d0)};
  SolverConfig cfg = base_config(s);
  cfg.ln_norm = s.norm.value_or(NormKind::max);
  cfg.method = s.method.value_or(Method::cw);
  cfg.representation = Representation::quadruple;
  cfg.step = s.step.value_or(0.01);
  const Section sec{PVector{1.0, 0.0, 0.0}, 0.0, Direction::positive};
  const PoincareResult r = poincare_map(sys, make_set(x0, cfg.representation), sec, cfg);

  constexpr std::size_t kSamples = 20;
  std::mt19937_64 rng(seed_from_env());
  std::size_t inside = 0;
  for (std::size_t k = 0; k < kSamples; ++k) {
    const PVector p = random_point(x0, rng);
    const Selection y = random_piecewise_selection(sys.perturbation(), 0.1, 20.0, rng);
    const auto hit = sample_crossing(sys, p, y, 1e-3, 20.0);
    if (hit && contains(r.image, hit->second) && contains(r.crossing_time, hit->first)) ++inside;
  }

  RosslerRun out{Table({"item", "lo", "hi", "diam"}), inside == kSamples};
  const char* names[] = {"x", "y", "z"};
  for (std::size_t i = 0; i < 3; ++i)
    out.table.add({names[i], format_number(r.image[i].lo()), format_number(r.image[i].hi()),
                   format_number(incluso::diam(r.image[i]))});
  out.table.add({"crossing_time", format_number(r.crossing_time.lo()), format_number(r.crossing_time.hi()),
                 format_number(incluso::diam(r.crossing_time))});
  out.table.add({"samples_inside", std::to_string(inside), std::to_string(kSamples), ""});
  return out;
}

struct ResonanceRun {
  Table table;
  bool contained = true;
};

inline ResonanceRun resonance(const ExperimentSpec& s) {
  const double e1 = s.eps1.value_or(s.eps.value_or(0.1));
  const double e2 = s.eps2.value_or(s.eps.value_or(0.1));
  const double d0 = s.delta0.value_or(0.0);
  const std::size_t per_period = s.steps.value_or(100);
  SolverConfig cfg = base_config(s);
  cfg.method = s.method.value_or(Method::cw);
  cfg.step = 2.0 * std::numbers::pi / static_cast<double>(per_period);
  const PerturbedSystem sys = models::harmonic_oscillator(e1, e2);

  // y(t) = (0, eps2·sin t) is an admissible selection resonating with the rotation.
  const Selection forcing = [e2](double t) { return PVector{0.0, e2 * std::sin(t)}; };
  ResonanceRun out{Table({"k", "t", "enclosure_diam", "oracle_x1", "oracle_x2", "oracle_amplitude", "contained"}), true};
  EnclosureSet set = make_set(oscillator_start(d0), cfg.representation);
  PVector oracle{1.0, 0.0};
  for (std::size_t k = 1; k <= 5; ++k) {
    const double t0 = 2.0 * std::numbers::pi * static_cast<double>(k - 1);
    set = integrate(sys, set, t0, per_period, cfg);
    oracle = simulate(sys, oracle, t0, t0 + 2.0 * std::numbers::pi, 20000, forcing);
    const IVector hull = hull_of(set);
    const bool in = contains(hull, oracle);
    out.contained = out.contained && in;
    out.table.add({std::to_string(k), format_number(2.0 * std::numbers::pi * static_cast<double>(k)),
                   format_number(diam(hull)), format_number(oracle[0]), format_number(oracle[1]),
                   format_number(std::hypot(oracle[0], oracle[1])), in ? "yes" : "no"});
  }
  return out;
}

}  // namespace detail

/// Runs one experiment and writes its table to `out`; diagnostics go to `err`.
[[nodiscard]] inline int run_experiment(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    int status = kExitOk;
    std::optional<Table> table;
    if (spec.name == "table1") {
      table = detail::table1(spec);
    } else if (spec.name == "table2") {
      table = detail::table2(spec);
    } else if (spec.name == "table3") {
      table = detail::table3(spec);
    } else if (spec.name == "rossler") {
      auto r = detail::rossler(spec);
      table = std::move(r.table);
      if (!r.contained) {
        err << "error: a sampled trajectory left the Poincare image enclosure\n";
        status = kExitCheckFailed;
      }
    } else if (spec.name == "resonance") {
      auto r = detail::resonance(spec);
      table = std::move(r.table);
      if (!r.contained) {
        err << "error: the resonant solution left the enclosure\n";
        status = kExitCheckFailed;
      }
    } else {
      throw UsageError("unknown experiment '" + spec.name + "'");
    }
    table->write(out, spec.format);
    return status;
  } catch (const IntegrationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIntegration;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
}

/// Full command-line entry point.
[[nodiscard]] inline int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::optional<ExperimentSpec> spec;
  try {
    std::string help;
    spec = parse_command_line(args, &help);
    if (!spec) {
      out << help;
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nrun 'incluso --help' for usage\n";
    return kExitUsage;
  }
  if (spec->out.empty()) return run_experiment(*spec, out, err);

  std::ostringstream buffer;
  const int status = run_experiment(*spec, buffer, err);
  std::ofstream file(spec->out, std::ios::binary);
  if (!file) {
    err << "error: cannot open '" << spec->out << "' for writing\n";
    return kExitUsage;
  }
  file << buffer.str();
  return status;
}

}  // namespace incluso::cli
