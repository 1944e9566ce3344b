// lsadvect: command-line front end for runs, convergence studies, stability
// maps, table reproduction and field dumps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "lsadvect/cli_io.hpp"
#include "lsadvect/stability.hpp"

namespace fs = std::filesystem;
using namespace lsadvect;

namespace {

constexpr const char* kConfigSchema = R"(config schema (one key=value per line, '#' starts a comment):
  case=<rotation_euclid|rotation_maxdist|exp_velocity|zalesak|vortex|poly2_quadratic|poly2_cubic|smooth_1d|poly1_quadratic>
  scheme=<si1d|impl1d|si2d|ctu>
  kappa=<kp|km|k0|k3|k3i|const:<value>>
  theta=<0..1>                 ctu only
  M=<m1,m2,...>                strictly ascending
  N=<n|M|aM|M/b|aM/b>          default 5M/4
  sweeps=<count>               fixed sweeps per step (default 1)
  tol=<residual>               sweep until the residual drops below tol
  max_sweeps=<count>
  M_ref=<cells>                reference resolution (vortex)
  T=<time>                     final time override
  output=<directory>           CSV and dumps go here; stdout otherwise
  dump_stride=<k>              dump every k-th level (needs output)
)";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Overrides replace matching lines in place so line numbers stay valid.
std::string apply_overrides(std::string text, const std::vector<std::string>& sets) {
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    std::istringstream in(text);
    std::string out, line;
    while (std::getline(in, line)) {
      std::string body = line.substr(0, line.find('#'));
      const auto e = body.find('=');
      std::string k = e == std::string::npos ? "" : body.substr(0, e);
      k.erase(0, k.find_first_not_of(" \t"));
      k.erase(k.find_last_not_of(" \t\r") + 1);
      out += (k == key ? "# (overridden) " + line : line) + "\n";
    }
    text = out + kv + "\n";
  }
  return text;
}

void write_or_print(const std::string& text, const std::string& output, const std::string& file_name) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  const fs::path path = fs::path(output) / file_name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed for " + path.string());
  std::cerr << "wrote " << path.string() << "\n";
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& sets, bool with_eoc) {
  RunConfig cfg;
  try {
    cfg = parse_config(apply_overrides(read_text(config_path), sets));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(e.what()) + "\n\n" + kConfigSchema);
  }
  if (cfg.dump_stride > 0 && cfg.output.empty()) throw UsageError("dump_stride needs an output directory");
  std::optional<fs::path> dump_dir;
  if (!cfg.output.empty()) {
    fs::create_directories(cfg.output);
    dump_dir = fs::path(cfg.output);
  }
  const auto rows = execute_config(cfg, with_eoc, dump_dir);
  write_or_print(emit_table(rows), cfg.output, cfg.case_name + ".csv");
  return 0;
}

std::pair<double, double> parse_ray(const std::string& ray) {
  if (ray == "diag") return {1.0, 1.0};
  if (ray == "axis") return {1.0, 0.0};
  if (ray == "anti") return {1.0, -1.0};
  const auto comma = ray.find(',');
  if (comma != std::string::npos) {
    try {
      std::size_t used = 0;
      const double c = std::stod(ray.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("");
      const std::string rest = ray.substr(comma + 1);
      const double d = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("");
      if (c == 0.0 && d == 0.0) throw UsageError("ray direction must be nonzero");
      return {c, d};
    } catch (const std::logic_error&) {
    }
  }
  throw UsageError("--ray expects diag, axis, anti or <c>,<d>; got '" + ray + "'");
}

struct StabilityArgs {
  std::string scheme;
  std::string ray;
  double max = 10.0;
  int points = 21;
  std::string mode = "region";
  bool threshold = false;
  double tol = 1e-3;
  std::string output;
};

int cmd_stability(const StabilityArgs& a) {
  SchemeSpec spec;
  try {
    spec = parse_stability_scheme(a.scheme);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const bool one_d = spec.dim() == 1;
  const std::string ray = a.ray.empty() ? (one_d ? "axis" : "diag") : a.ray;
  const ThresholdMode mode = a.mode == "point" ? ThresholdMode::Pointwise : ThresholdMode::Region;
  if (!(a.max > 0.0)) throw UsageError("--max must be positive");
  if (a.points < 2) throw UsageError("--points must be at least 2");

  std::string text;
  if (a.threshold && ray == "box") {
    const ThresholdReport t = stability_threshold_box(spec, 0.0, a.max, a.tol);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,box,%.6g,%.6g,%d,%.6g\n", a.scheme.c_str(), t.dir_c, t.dir_d,
                  t.bounded ? 1 : 0, t.bounded ? t.limit : a.max);
    text = std::string("scheme,mode,dir_C,dir_D,bounded,threshold\n") + buf;
  } else {
    if (ray == "box") throw UsageError("--ray=box is only meaningful with --threshold");
    auto [dc, dd] = parse_ray(ray);
    if (one_d && dd != 0.0) throw UsageError("1D schemes take --ray=axis or <c>,0");
    if (a.threshold) {
      const ThresholdReport t = stability_threshold(spec, dc, dd, 0.0, a.max, a.tol, mode);
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s,%s,%.6g,%.6g,%d,%.6g\n", a.scheme.c_str(), a.mode.c_str(), dc, dd,
                    t.bounded ? 1 : 0, t.bounded ? t.limit : a.max);
      text = std::string("scheme,mode,dir_C,dir_D,bounded,threshold\n") + buf;
    } else {
      std::vector<StabilityRow> rows;
      for (int k = 0; k < a.points; ++k) {
        const double r = a.max * k / (a.points - 1);
        const StabilityReport rep = mode == ThresholdMode::Region ? max_amplification_region(spec, r * dc, r * dd)
                                                                  : max_amplification(spec, r * dc, r * dd);
        rows.push_back({r, r * dc, r * dd, rep.max_abs_s, rep.stable});
      }
      text = emit_stability_table(rows);
    }
  }
  if (!a.output.empty()) fs::create_directories(a.output);
  write_or_print(text, a.output, "stability.csv");
  return 0;
}

int cmd_table(const std::string& name, int m_ref, int jobs, const std::string& output) {
  std::vector<RunConfig> configs;
  try {
    configs = table_configs(name, m_ref);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!output.empty()) fs::create_directories(output);
  if (jobs < 1) jobs = std::max(1u, std::thread::hardware_concurrency());

  // Configs run concurrently; rows are gathered in config order.
  std::vector<std::vector<TableRow>> results(configs.size());
  std::size_t next = 0;
  while (next < configs.size()) {
    std::vector<std::future<std::vector<TableRow>>> batch;
    const std::size_t first = next;
    for (; next < configs.size() && batch.size() < static_cast<std::size_t>(jobs); ++next) {
      batch.push_back(std::async(std::launch::async, [&cfg = configs[next]] { return execute_config(cfg, true); }));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) results[first + k] = batch[k].get();
  }
  std::vector<TableRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  write_or_print(emit_table(rows), output, name + ".csv");
  return 0;
}

int cmd_dump(const std::string& input, const std::string& output) {
  if (!fs::exists(input)) throw UsageError("no such dump file: " + input);
  const FieldDump dump = read_field_dump(input);
  if (output.empty()) {
    write_field(std::cout, dump.field, dump.time);
  } else {
    dump_field(dump.field, dump.time, output);
    std::cerr << "wrote " << output << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-implicit kappa-scheme level-set advection"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  auto* run = app.add_subcommand("run", "run one config over its M list");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--set", sets, "override a config key (key=value)");

  auto* converge = app.add_subcommand("converge", "run the M list and append EOCs");
  converge->add_option("config", config_path, "config file")->required();
  converge->add_option("--set", sets, "override a config key (key=value)");

  StabilityArgs sa;
  auto* stability = app.add_subcommand("stability", "map max|S| along a Courant ray");
  stability->add_option("--scheme", sa.scheme, "siLW2d, siF2d, siQ2d, ctu, ctu0 or <family>:<kappa>")->required();
  stability->add_option("--ray", sa.ray, "diag, axis, anti, <c>,<d>, or box with --threshold");
  stability->add_option("--max", sa.max, "largest ray parameter")->capture_default_str();
  stability->add_option("--points", sa.points, "samples along the ray")->capture_default_str();
  stability->add_option("--mode", sa.mode, "region: max over the rectangle up to each point; point: the point only")
      ->check(CLI::IsMember({"region", "point"}))
      ->capture_default_str();
  stability->add_flag("--threshold", sa.threshold, "report the first unstable ray parameter instead");
  stability->add_option("--tol", sa.tol, "bisection tolerance for --threshold")->capture_default_str();
  stability->add_option("--output", sa.output, "output directory");

  std::string table_name, table_output;
  int m_ref = 640, jobs = 0;
  auto* table = app.add_subcommand("table", "reproduce a named table");
  table->add_option("--name", table_name, "table1, table1_maxdist, table2, table3, ctu_circle, ctu_maxdist")
      ->required();
  table->add_option("--m-ref", m_ref, "reference resolution for table3")->capture_default_str();
  table->add_option("--jobs", jobs, "concurrent runs (0: all cores)");
  table->add_option("--output", table_output, "output directory");

  std::string dump_input, dump_output;
  auto* dump = app.add_subcommand("dump", "reread a field dump and re-emit it");
  dump->add_option("file", dump_input, "dump file")->required();
  dump->add_option("--output", dump_output, "write to this path instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return cmd_run(config_path, sets, false);
    if (*converge) return cmd_run(config_path, sets, true);
    if (*stability) return cmd_stability(sa);
    if (*table) return cmd_table(table_name, m_ref, jobs, table_output);
    if (*dump) return cmd_dump(dump_input, dump_output);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
