#pragma once

// Experiment orchestration: per-instance reports, algorithm comparisons and
// the competitive-ratio scaling sweep.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "vrm/audit.hpp"
#include "vrm/generate.hpp"
#include "vrm/instance.hpp"
#include "vrm/engine.hpp"
#include "vrm/netcost.hpp"
#include "vrm/oracles.hpp"

namespace vrm {

inline constexpr int kScalingSchemaVersion = 1;

struct RunReport {
  int m = 0;
  Rational gamma;
  Rational cost_vrm;
  Rational cost_opt;
  Rational cost_greedy;
  Rational ratio;  // cost_vrm / cost_opt; 1 when both are 0
  Rational total_phi;
  Rational distance_vrm;
  std::optional<bool> audit_ok;  // set when the invariant audit ran
  double wall_seconds = 0;
};

// cost ratio with the 0/0 = 1 convention; nullopt when only cost_opt is 0.
std::optional<Rational> cost_ratio(const Rational& cost, const Rational& opt);

// Auto: brute force for m <= 7, otherwise Hungarian on the integer lattice.
enum class OptMethod { Auto, BruteForce, Hungarian };

OptMethod parse_opt_method(std::string_view name);  // throws ConfigError
OptResult compute_opt(const Instance& inst, OptMethod method);

struct ReportOptions {
  bool audit = false;
  OptMethod opt = OptMethod::Auto;
};

// Derives the report from a finished run.
RunReport report_run(const Instance& inst, const Gamma& gamma, const RunResult& run,
                     double wall_seconds, const ReportOptions& options = {});
RunReport report_instance(const Instance& inst, const Gamma& gamma, const ReportOptions& options = {});

std::string run_report_json(const RunReport& report, std::optional<int> decimal_digits);

struct CompareRow {
  std::string algorithm;  // "vrm", "opt", "greedy"
  Rational cost;
  Rational distance;
  Rational delay;
  std::optional<Rational> ratio;
};

std::vector<CompareRow> compare_algorithms(const Instance& inst, const Gamma& gamma,
                                           OptMethod opt = OptMethod::Auto);
void write_compare_table(std::ostream& out, const std::vector<CompareRow>& rows,
                         std::optional<int> decimal_digits);

struct ScalingRow {
  std::string family;
  int m = 0;
  int instances = 0;
  Rational max_ratio;
  Rational mean_ratio;
  double normalized = 0;  // max_ratio / (sqrt(m) * ln(m + 2)^2)
};

struct ScalingConfig {
  std::vector<int> m_grid;
  int per_point = 20;
  std::uint64_t seed = 0;
  std::vector<Family> families{Family::Uniform, Family::Clustered, Family::EscalatingLine,
                               Family::Poisson};
  Gamma gamma = Gamma::standard();
};

// Instance k of point (family, m) uses seed mix(seed, family, m, k).
std::uint64_t scaling_seed(std::uint64_t seed, Family family, int m, int k);
double normalized_ratio(const Rational& ratio, int m);

std::vector<ScalingRow> run_scaling(const ScalingConfig& config,
                                    std::ostream* progress = nullptr);

// Columns: schema_version,family,m,instances,max_ratio,mean_ratio,normalized
// Ratios as "p/q" (or decimals with decimal_digits); normalized with 9 significant digits.
void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows,
                       std::optional<int> decimal_digits);
std::vector<ScalingRow> read_scaling_csv(std::string_view text);

// Verification suites: instance k cycles through the families; small uses
// m in 1..8, full uses m in 1..16. Resolutions alternate between coarse grids
// (many ties and simultaneous arrivals) and fine ones.
enum class Suite { Small, Full };

Suite parse_suite(std::string_view name);  // throws ConfigError
GenSpec suite_case(Suite suite, std::uint64_t seed, int k);

// Audits `count` suite instances; exhaustive checks apply where m <= 8.
AuditReport run_suite(Suite suite, std::uint64_t seed, int count, const Gamma& gamma,
                      std::ostream* progress = nullptr);

// "4,8,16", "4,8,...,1024" (geometric when the two leading terms double,
// arithmetic otherwise). Throws ConfigError.
std::vector<int> parse_m_grid(std::string_view text);

}  // namespace vrm
