#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lsadvect/core.hpp"
#include "lsadvect/experiments.hpp"
#include "lsadvect/schemes2d.hpp"
#include "lsadvect/solver.hpp"
#include "lsadvect/stability.hpp"

namespace lsadvect {

/// Flat key=value run description.
///
///   case=rotation_euclid
///   scheme=si2d          # si1d | impl1d | si2d | ctu
///   kappa=k3             # kp | km | k0 | k3 | k3i | const:<v>
///   theta=1              # ctu only
///   M=40,80,160          # strictly ascending
///   N=5M/4               # integer, M, M/b, aM or aM/b
///   sweeps=1             # fixed sweep count ...
///   tol=1e-12            # ... or a residual tolerance
///   max_sweeps=100
///   M_ref=640            # reference resolution for reference-error cases
///   T=1                  # overrides the case's final time
///   output=out           # directory; stdout when absent
///   dump_stride=0
struct RunConfig {
  std::string case_name = "rotation_euclid";
  SchemeFamily family = SchemeFamily::SemiImplicit2D;
  std::string kappa = "k3";
  std::optional<double> theta;
  std::vector<int> cells{40};
  std::optional<int> steps;  // explicit N, otherwise `rule`
  StepRule rule{5, 4};
  int sweeps = 1;
  std::optional<double> tolerance;
  int max_sweeps = 100;
  int reference_cells = 0;
  std::optional<double> final_time;
  std::string output;
  int dump_stride = 0;

  bool operator==(const RunConfig& o) const;
};

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(int line, const std::string& what)
      : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses and validates a config; every problem is reported as a
/// ConfigError carrying the offending line (0 for cross-key checks).
RunConfig parse_config(std::string_view text);
void validate_config(const RunConfig& config);
std::string serialize_config(const RunConfig& config);

/// Parses an N value ("160", "5M/4", "M/10").
void parse_steps(std::string_view text, std::optional<int>& steps, StepRule& rule);
std::string format_steps(const std::optional<int>& steps, const StepRule& rule);

SchemeSpec scheme_of(const RunConfig& config);
SweepPolicy sweep_policy_of(const RunConfig& config);
int steps_for(const RunConfig& config, int cells);

struct TableRow {
  int cells = 0;
  std::string case_name;
  std::string scheme;
  std::string kappa;
  int steps = 0;
  double max_courant = 0.0;
  double error = 0.0;
  std::optional<double> eoc;
  int sweeps = 0;
  double residual = 0.0;
};

inline constexpr int kTableSchemaVersion = 1;
inline constexpr std::string_view kTableHeader = "M,case,scheme,kappa,N,max_courant,error,eoc,sweeps,residual";

TableRow make_row(const ErrorReport& report, std::string case_name, const SchemeSpec& scheme);
std::string emit_table(const std::vector<TableRow>& rows);

struct StabilityRow {
  double r = 0.0;
  double c = 0.0;
  double d = 0.0;
  double max_abs_s = 0.0;
  bool stable = true;
};

inline constexpr std::string_view kStabilityHeader = "r,C,D,max_abs_S,stable";
std::string emit_stability_table(const std::vector<StabilityRow>& rows);

/// Plain-text grid dump:
///
///   # lsadvect field
///   M <cells>
///   dim <1|2>
///   bounds <x_min> <x_max> <y_min> <y_max>
///   time <t>
///   <ny rows of nx values, row j = 0 first>
///
/// Values use 17 significant digits so a reread is bit-identical.
void dump_field(const Field& field, double time, const std::filesystem::path& path);
void write_field(std::ostream& out, const Field& field, double time);

struct FieldDump {
  Field field;
  double time = 0.0;
};

FieldDump read_field_dump(const std::filesystem::path& path);

/// Writes <stem>.txt and, when `exact` is set, <stem>_exact.txt with the
/// exact solution sampled on the same grid.
void dump_field_pair(const Field& field, double time, const TimeFunction& exact, const std::filesystem::path& stem);

/// Runs every M of the config in order and returns one row per M.  The EOC
/// column is filled when `with_eoc` is set.  With a dump directory and a
/// positive dump stride, the stored levels are written as
/// <case>_M<M>_n<level>.txt plus the exact-solution companion.
std::vector<TableRow> execute_config(const RunConfig& config, bool with_eoc,
                                     const std::optional<std::filesystem::path>& dump_dir = std::nullopt);

/// Run matrices of the reproduced tables: table1 (rotation_euclid),
/// table1_maxdist, table2 (exp_velocity at both Courant numbers), table3
/// (zalesak and vortex), ctu_circle and ctu_maxdist.
std::vector<std::string> table_names();
std::vector<RunConfig> table_configs(std::string_view name, int reference_cells = 640);

/// Named stability scheme: siLW2d, siF2d, siQ2d, ctu (k3, theta 1),
/// ctu0 (theta 0), si1d:<kappa>, impl1d:<kappa>, si2d:<kappa>, ctu:<kappa>.
SchemeSpec parse_stability_scheme(std::string_view name);

}  // namespace lsadvect
