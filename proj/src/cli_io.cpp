#include "lsadvect/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace lsadvect {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) return false;
  if constexpr (std::is_floating_point_v<T>) return std::isfinite(out);
  return true;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sci6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{"case", "scheme", "kappa", "theta", "M",      "N",          "sweeps",
                                             "tol",  "max_sweeps", "M_ref", "T",    "output", "dump_stride"};
  return keys;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  return case_name == o.case_name && family == o.family && kappa == o.kappa && theta == o.theta &&
         cells == o.cells && steps == o.steps && (steps || (rule.numerator == o.rule.numerator &&
                                                            rule.denominator == o.rule.denominator)) &&
         sweeps == o.sweeps && tolerance == o.tolerance && max_sweeps == o.max_sweeps &&
         reference_cells == o.reference_cells && final_time == o.final_time && output == o.output &&
         dump_stride == o.dump_stride;
}

void parse_steps(std::string_view text, std::optional<int>& steps, StepRule& rule) {
  text = trim(text);
  int n = 0;
  if (parse_number(text, n)) {
    if (n < 1) throw std::invalid_argument("N must be at least 1");
    steps = n;
    return;
  }
  const auto m = text.find('M');
  if (m == std::string_view::npos) throw std::invalid_argument("N must be an integer or a rule like 5M/4");
  int num = 1, den = 1;
  const std::string_view head = text.substr(0, m);
  const std::string_view tail = text.substr(m + 1);
  if (!head.empty() && !parse_number(head, num)) throw std::invalid_argument("malformed N rule '" + std::string(text) + "'");
  if (!tail.empty()) {
    if (tail.front() != '/' || !parse_number(tail.substr(1), den)) {
      throw std::invalid_argument("malformed N rule '" + std::string(text) + "'");
    }
  }
  if (num < 1 || den < 1) throw std::invalid_argument("N rule terms must be positive");
  steps.reset();
  rule = {num, den};
}

std::string format_steps(const std::optional<int>& steps, const StepRule& rule) {
  if (steps) return std::to_string(*steps);
  std::string out = rule.numerator == 1 ? "M" : std::to_string(rule.numerator) + "M";
  if (rule.denominator != 1) out += "/" + std::to_string(rule.denominator);
  return out;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
      throw ConfigError(line_no, "unknown key '" + key + "' (allowed: " + join(known_keys()) + ")");
    }
    if (seen.count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
    seen[key] = line_no;
    if (value.empty()) throw ConfigError(line_no, "empty value for '" + key + "'");

    try {
      if (key == "case") {
        const auto names = builtin_case_names();
        if (std::find(names.begin(), names.end(), value) == names.end()) {
          throw std::invalid_argument("unknown case '" + std::string(value) + "' (allowed: " + join(names) + ")");
        }
        cfg.case_name = std::string(value);
      } else if (key == "scheme") {
        cfg.family = parse_family(value);
      } else if (key == "kappa") {
        (void)KappaChoice::parse(value);
        cfg.kappa = std::string(value);
      } else if (key == "theta") {
        double t = 0.0;
        if (!parse_number(value, t)) throw std::invalid_argument("malformed number '" + std::string(value) + "'");
        if (t < 0.0 || t > 1.0) throw std::invalid_argument("theta must lie in [0, 1]");
        cfg.theta = t;
      } else if (key == "M") {
        cfg.cells.clear();
        std::size_t p = 0;
        while (p <= value.size()) {
          const std::size_t q = std::min(value.find(',', p), value.size());
          int m = 0;
          if (!parse_number(value.substr(p, q - p), m)) {
            throw std::invalid_argument("malformed M entry '" + std::string(trim(value.substr(p, q - p))) + "'");
          }
          if (m < 4) throw std::invalid_argument("M entries must be at least 4");
          if (!cfg.cells.empty() && m <= cfg.cells.back()) throw std::invalid_argument("M list must be ascending");
          cfg.cells.push_back(m);
          p = q + 1;
        }
      } else if (key == "N") {
        parse_steps(value, cfg.steps, cfg.rule);
      } else if (key == "sweeps" || key == "max_sweeps" || key == "M_ref" || key == "dump_stride") {
        int v = 0;
        if (!parse_number(value, v)) throw std::invalid_argument("malformed integer '" + std::string(value) + "'");
        if (key == "sweeps") {
          if (v < 1) throw std::invalid_argument("sweeps must be at least 1");
          cfg.sweeps = v;
        } else if (key == "max_sweeps") {
          if (v < 1) throw std::invalid_argument("max_sweeps must be at least 1");
          cfg.max_sweeps = v;
        } else if (key == "M_ref") {
          if (v < 4) throw std::invalid_argument("M_ref must be at least 4");
          cfg.reference_cells = v;
        } else {
          if (v < 0) throw std::invalid_argument("dump_stride must be nonnegative");
          cfg.dump_stride = v;
        }
      } else if (key == "tol" || key == "T") {
        double v = 0.0;
        if (!parse_number(value, v)) throw std::invalid_argument("malformed number '" + std::string(value) + "'");
        if (!(v > 0.0)) throw std::invalid_argument(key + " must be positive");
        (key == "tol" ? cfg.tolerance : cfg.final_time) = v;
      } else if (key == "output") {
        cfg.output = std::string(value);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line_no, e.what());
    }
    if (end == text.size()) break;
  }
  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    if (e.line() > 0) throw;
    // Point at the line that introduced the conflicting key when possible.
    const std::string msg = e.what();
    for (const char* key : {"theta", "scheme", "N", "M_ref"}) {
      if (msg.find(std::string(key)) != std::string::npos && seen.count(key)) throw ConfigError(seen[key], msg);
    }
    throw;
  }
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  auto fail = [](const std::string& what) { throw ConfigError(0, what); };
  if (cfg.cells.empty()) fail("M list is empty");
  for (std::size_t k = 1; k < cfg.cells.size(); ++k) {
    if (cfg.cells[k] <= cfg.cells[k - 1]) fail("M list must be ascending");
  }
  if (cfg.theta && cfg.family != SchemeFamily::CTU) fail("theta is only accepted with scheme=ctu");
  ExperimentCase c;
  try {
    c = builtin_case(cfg.case_name);
    (void)KappaChoice::parse(cfg.kappa);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  const SchemeSpec spec = scheme_of(cfg);
  if (spec.dim() != c.dim) {
    fail("scheme " + std::string(family_name(cfg.family)) + " does not fit the " + std::to_string(c.dim) +
         "D case " + cfg.case_name);
  }
  for (int m : cfg.cells) {
    try {
      (void)steps_for(cfg, m);
    } catch (const std::invalid_argument& e) {
      fail(std::string("N: ") + e.what());
    }
  }
  if (c.metric == ErrorMetric::FinalReference) {
    const int m_ref = cfg.reference_cells > 0 ? cfg.reference_cells : c.reference_cells;
    for (int m : cfg.cells) {
      if (m_ref % m != 0) fail("M_ref=" + std::to_string(m_ref) + " is not a multiple of M=" + std::to_string(m));
    }
    try {
      (void)steps_for(cfg, m_ref);
    } catch (const std::invalid_argument& e) {
      fail(std::string("N at M_ref: ") + e.what());
    }
  }
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "case=" << cfg.case_name << "\n";
  out << "scheme=" << family_name(cfg.family) << "\n";
  out << "kappa=" << cfg.kappa << "\n";
  if (cfg.theta) out << "theta=" << format_double(*cfg.theta) << "\n";
  out << "M=";
  for (std::size_t k = 0; k < cfg.cells.size(); ++k) out << (k ? "," : "") << cfg.cells[k];
  out << "\n";
  out << "N=" << format_steps(cfg.steps, cfg.rule) << "\n";
  out << "sweeps=" << cfg.sweeps << "\n";
  if (cfg.tolerance) out << "tol=" << format_double(*cfg.tolerance) << "\n";
  out << "max_sweeps=" << cfg.max_sweeps << "\n";
  if (cfg.reference_cells > 0) out << "M_ref=" << cfg.reference_cells << "\n";
  if (cfg.final_time) out << "T=" << format_double(*cfg.final_time) << "\n";
  if (!cfg.output.empty()) out << "output=" << cfg.output << "\n";
  out << "dump_stride=" << cfg.dump_stride << "\n";
  return out.str();
}

SchemeSpec scheme_of(const RunConfig& cfg) {
  const KappaChoice k = KappaChoice::parse(cfg.kappa);
  switch (cfg.family) {
    case SchemeFamily::SemiImplicit1D: return SchemeSpec::semi_implicit_1d(k);
    case SchemeFamily::FullyImplicit1D: return SchemeSpec::fully_implicit_1d(k);
    case SchemeFamily::SemiImplicit2D: return SchemeSpec::semi_implicit_2d(k);
    case SchemeFamily::CTU: return SchemeSpec::ctu(k, cfg.theta.value_or(1.0));
  }
  return SchemeSpec::semi_implicit_2d(k);
}

SweepPolicy sweep_policy_of(const RunConfig& cfg) {
  return cfg.tolerance ? SweepPolicy::to_tolerance(*cfg.tolerance, cfg.max_sweeps) : SweepPolicy::fixed(cfg.sweeps);
}

int steps_for(const RunConfig& cfg, int cells) { return cfg.steps ? *cfg.steps : cfg.rule.steps(cells); }

TableRow make_row(const ErrorReport& report, std::string case_name, const SchemeSpec& scheme) {
  TableRow row;
  row.cells = report.cells;
  row.case_name = std::move(case_name);
  row.scheme = std::string(family_name(scheme.family));
  if (scheme.family == SchemeFamily::CTU && scheme.theta != 1.0) row.scheme += "(theta=" + g6(scheme.theta) + ")";
  row.kappa = scheme.kappa_x.name();
  row.steps = report.steps;
  row.max_courant = report.max_courant;
  row.error = report.error;
  row.eoc = report.eoc;
  row.sweeps = report.sweeps;
  row.residual = report.max_residual;
  return row;
}

std::string emit_table(const std::vector<TableRow>& rows) {
  std::string out(kTableHeader);
  out += "\n";
  for (const TableRow& r : rows) {
    out += std::to_string(r.cells) + "," + r.case_name + "," + r.scheme + "," + r.kappa + "," +
           std::to_string(r.steps) + "," + g6(r.max_courant) + "," + sci6(r.error) + "," +
           (r.eoc ? g6(*r.eoc) : std::string()) + "," + std::to_string(r.sweeps) + "," + sci6(r.residual) + "\n";
  }
  return out;
}

std::string emit_stability_table(const std::vector<StabilityRow>& rows) {
  std::string out(kStabilityHeader);
  out += "\n";
  char buf[160];
  for (const StabilityRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.10g,%d\n", r.r, r.c, r.d, r.max_abs_s, r.stable ? 1 : 0);
    out += buf;
  }
  return out;
}

void write_field(std::ostream& out, const Field& field, double time) {
  const Grid& g = field.grid;
  const Bounds& b = g.bounds();
  out << "# lsadvect field\n";
  out << "M " << g.cells() << "\n";
  out << "dim " << g.dim() << "\n";
  out << "bounds " << format_double(b.x_min) << " " << format_double(b.x_max) << " " << format_double(b.y_min) << " "
      << format_double(b.y_max) << "\n";
  out << "time " << format_double(time) << "\n";
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) out << (i ? " " : "") << format_double(field(i, j));
    out << "\n";
  }
}

void dump_field(const Field& field, double time, const std::filesystem::path& path) {
  if (!field.all_finite()) throw std::invalid_argument("refusing to dump a non-finite field to " + path.string());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_field(out, field, time);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

FieldDump read_field_dump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  auto bad = [&](const std::string& what) { return std::runtime_error(path.string() + ": " + what); };
  std::string line;
  if (!std::getline(in, line) || line != "# lsadvect field") throw bad("not a field dump");
  std::string key;
  int cells = 0, dim = 0;
  Bounds b;
  double time = 0.0;
  if (!(in >> key >> cells) || key != "M") throw bad("missing M");
  if (!(in >> key >> dim) || key != "dim") throw bad("missing dim");
  if (!(in >> key >> b.x_min >> b.x_max >> b.y_min >> b.y_max) || key != "bounds") throw bad("missing bounds");
  if (!(in >> key >> time) || key != "time") throw bad("missing time");
  FieldDump dump;
  dump.time = time;
  dump.field.grid = make_grid(b, cells, dim);
  dump.field.values.resize(dump.field.grid.size());
  // strtod gives the round-trip guarantee that stream extraction lacks.
  for (double& v : dump.field.values) {
    std::string token;
    if (!(in >> token)) throw bad("truncated body");
    char* end = nullptr;
    v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) throw bad("malformed value '" + token + "'");
  }
  std::string extra;
  if (in >> extra) throw bad("trailing data");
  return dump;
}

void dump_field_pair(const Field& field, double time, const TimeFunction& exact, const std::filesystem::path& stem) {
  dump_field(field, time, std::filesystem::path(stem.string() + ".txt"));
  if (!exact) return;
  Field e = field;
  for (std::size_t k = 0; k < e.grid.size(); ++k) {
    auto [i, j] = e.grid.coords(k);
    e.values[k] = exact(e.grid.x(i), e.grid.y(j), time);
  }
  dump_field(e, time, std::filesystem::path(stem.string() + "_exact.txt"));
}

SchemeSpec parse_stability_scheme(std::string_view name) {
  if (name == "siLW2d") return SchemeSpec::semi_implicit_2d(KappaChoice::upwind());
  if (name == "siF2d") return SchemeSpec::semi_implicit_2d(KappaChoice::central());
  if (name == "siQ2d") return SchemeSpec::semi_implicit_2d(KappaChoice::third_order_semi_implicit());
  if (name == "ctu") return SchemeSpec::ctu(KappaChoice::third_order_semi_implicit(), 1.0);
  if (name == "ctu0") return SchemeSpec::ctu(KappaChoice::third_order_semi_implicit(), 0.0);
  const auto colon = name.find(':');
  if (colon != std::string_view::npos) {
    const SchemeFamily family = parse_family(name.substr(0, colon));
    const KappaChoice k = KappaChoice::parse(name.substr(colon + 1));
    switch (family) {
      case SchemeFamily::SemiImplicit1D: return SchemeSpec::semi_implicit_1d(k);
      case SchemeFamily::FullyImplicit1D: return SchemeSpec::fully_implicit_1d(k);
      case SchemeFamily::SemiImplicit2D: return SchemeSpec::semi_implicit_2d(k);
      case SchemeFamily::CTU: return SchemeSpec::ctu(k, 1.0);
    }
  }
  throw std::invalid_argument("unknown stability scheme '" + std::string(name) +
                              "' (allowed: siLW2d, siF2d, siQ2d, ctu, ctu0, <family>:<kappa>)");
}

std::vector<TableRow> execute_config(const RunConfig& cfg, bool with_eoc,
                                     const std::optional<std::filesystem::path>& dump_dir) {
  validate_config(cfg);
  const ExperimentCase c = builtin_case(cfg.case_name);
  const SchemeSpec spec = scheme_of(cfg);
  RunOptions options;
  options.sweeps = sweep_policy_of(cfg);
  options.final_time = cfg.final_time;
  const double final_time = cfg.final_time.value_or(c.final_time);

  std::optional<Field> reference;
  if (c.metric == ErrorMetric::FinalReference) {
    const int m_ref = cfg.reference_cells > 0 ? cfg.reference_cells : c.reference_cells;
    reference = run_experiment(c, spec, m_ref, steps_for(cfg, m_ref), options).final_field;
  }
  if (dump_dir) options.dump_stride = cfg.dump_stride;

  std::vector<TableRow> rows;
  std::optional<double> previous;
  for (int m : cfg.cells) {
    const int n = steps_for(cfg, m);
    RunResult r = run_experiment(c, spec, m, n, options);
    if (reference) r.report.error = error_ref_e(r.final_field, *reference);
    if (with_eoc && previous && *previous > 0.0 && r.report.error > 0.0) r.report.eoc = eoc(*previous, r.report.error);
    previous = r.report.error;
    rows.push_back(make_row(r.report, cfg.case_name, spec));
    if (dump_dir && cfg.dump_stride > 0) {
      const TimeStepping ts = make_time_stepping(final_time, n);
      for (const Field& f : r.stored) {
        const std::string stem = cfg.case_name + "_M" + std::to_string(m) + "_n" + std::to_string(f.time_level);
        dump_field_pair(f, ts.time(f.time_level), c.exact, *dump_dir / stem);
      }
    }
  }
  return rows;
}

std::vector<std::string> table_names() {
  return {"table1", "table1_maxdist", "table2", "table3", "ctu_circle", "ctu_maxdist"};
}

std::vector<RunConfig> table_configs(std::string_view name, int reference_cells) {
  auto make = [](std::string case_name, SchemeFamily family, std::string kappa, std::vector<int> cells,
                 StepRule rule) {
    RunConfig cfg;
    cfg.case_name = std::move(case_name);
    cfg.family = family;
    cfg.kappa = std::move(kappa);
    cfg.cells = std::move(cells);
    cfg.rule = rule;
    return cfg;
  };
  const std::vector<std::string> kappas{"kp", "km", "k0", "k3"};
  std::vector<RunConfig> out;
  if (name == "table1" || name == "table1_maxdist") {
    const std::string case_name = name == "table1" ? "rotation_euclid" : "rotation_maxdist";
    for (const auto& k : kappas) out.push_back(make(case_name, SchemeFamily::SemiImplicit2D, k, {40, 80, 160}, {5, 4}));
  } else if (name == "table2") {
    for (StepRule rule : {StepRule{1, 1}, StepRule{1, 10}}) {
      for (const auto& k : {"kp", "km", "k0"}) {
        out.push_back(make("exp_velocity", SchemeFamily::SemiImplicit2D, k, {40, 80, 160}, rule));
      }
      out.push_back(make("exp_velocity", SchemeFamily::CTU, "k3", {40, 80, 160}, rule));
    }
  } else if (name == "table3") {
    for (const auto& k : kappas) out.push_back(make("zalesak", SchemeFamily::SemiImplicit2D, k, {40, 80, 160}, {5, 4}));
    for (const auto& k : kappas) {
      RunConfig cfg = make("vortex", SchemeFamily::SemiImplicit2D, k, {80, 160, 320}, {5, 4});
      cfg.reference_cells = reference_cells;
      out.push_back(cfg);
    }
  } else if (name == "ctu_circle" || name == "ctu_maxdist") {
    const bool circle = name == "ctu_circle";
    const int m = circle ? 80 : 160;
    for (int n : {m * 5 / 16, m * 5 / 8, m * 5 / 4, m * 5 / 2}) {
      RunConfig cfg = make(circle ? "rotation_euclid" : "rotation_maxdist", SchemeFamily::CTU, "k3", {m}, {});
      cfg.steps = n;
      // The largest time step of the circle run needs a second sweep.
      if (circle && n == 25) cfg.sweeps = 2;
      out.push_back(cfg);
    }
  } else {
    std::string names;
    for (const auto& t : table_names()) names += (names.empty() ? "" : ", ") + t;
    throw std::invalid_argument("unknown table '" + std::string(name) + "' (allowed: " + names + ")");
  }
  for (const RunConfig& cfg : out) validate_config(cfg);
  return out;
}

}  // namespace lsadvect
