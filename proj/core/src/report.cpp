#include "vrm/report.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "vrm/engine.hpp"
#include "vrm/errors.hpp"
#include "vrm/oracles.hpp"

namespace vrm {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("invalid integer \"" + s + "\"");
  }
  if (used != s.size()) throw ConfigError("invalid integer \"" + s + "\"");
  return v;
}

std::string significant(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

std::optional<Rational> cost_ratio(const Rational& cost, const Rational& opt) {
  if (opt == 0) return cost == 0 ? std::optional<Rational>(Rational(1)) : std::nullopt;
  return cost / opt;
}

OptMethod parse_opt_method(std::string_view name) {
  if (name == "auto") return OptMethod::Auto;
  if (name == "bruteforce") return OptMethod::BruteForce;
  if (name == "hungarian") return OptMethod::Hungarian;
  throw ConfigError("unknown OPT method \"" + std::string(name) + "\"");
}

OptResult compute_opt(const Instance& inst, OptMethod method) {
  switch (method) {
    case OptMethod::BruteForce:
      return opt_bruteforce(inst);
    case OptMethod::Hungarian:
      return opt_hungarian_lattice(inst);
    case OptMethod::Auto:
      break;
  }
  return inst.m() <= 7 ? opt_bruteforce(inst) : opt_hungarian_lattice(inst);
}

RunReport report_run(const Instance& inst, const Gamma& gamma, const RunResult& res,
                     double wall_seconds, const ReportOptions& options) {
  RunReport rep;
  rep.m = inst.m();
  rep.gamma = gamma.value();
  rep.wall_seconds = wall_seconds;
  rep.cost_vrm = solution_cost(inst, res.solution).total;
  PairList pairs;
  for (const MatchRecord& rec : res.solution.pairs) pairs.emplace_back(rec.request, rec.server);
  rep.distance_vrm = matching_ta_cost(inst, pairs);
  rep.total_phi = res.trace.total_phi();
  rep.cost_opt = compute_opt(inst, options.opt).cost;
  rep.cost_greedy = solution_cost(inst, greedy_baseline(inst)).total;
  auto ratio = cost_ratio(rep.cost_vrm, rep.cost_opt);
  if (!ratio) throw InvariantError("OPT is zero but the online cost is not");
  rep.ratio = *ratio;
  if (options.audit) {
    AuditOptions ao;
    ao.gamma = gamma;
    rep.audit_ok = audit_instance(inst, ao).ok();
  }
  return rep;
}

RunReport report_instance(const Instance& inst, const Gamma& gamma, const ReportOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  EngineOptions eo;
  eo.record_phi = false;
  const RunResult res = run(inst, gamma, eo);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report_run(inst, gamma, res, wall, options);
}

std::string run_report_json(const RunReport& r, std::optional<int> digits) {
  auto f = [&](const Rational& v) { return format_rational(v, digits); };
  nlohmann::ordered_json doc;
  doc["schema_version"] = kScalingSchemaVersion;
  doc["m"] = r.m;
  doc["gamma"] = f(r.gamma);
  doc["cost_vrm"] = f(r.cost_vrm);
  doc["cost_opt"] = f(r.cost_opt);
  doc["cost_greedy"] = f(r.cost_greedy);
  doc["ratio"] = f(r.ratio);
  doc["sum_phi"] = f(r.total_phi);
  doc["distance_vrm"] = f(r.distance_vrm);
  doc["audit"] = r.audit_ok ? nlohmann::ordered_json(*r.audit_ok ? "pass" : "fail") : nlohmann::ordered_json(nullptr);
  doc["wall_seconds"] = r.wall_seconds;
  return doc.dump(2) + "\n";
}

std::vector<CompareRow> compare_algorithms(const Instance& inst, const Gamma& gamma, OptMethod method) {
  EngineOptions eo;
  eo.record_phi = false;
  const Solution vrm = run(inst, gamma, eo).solution;
  const OptResult opt = compute_opt(inst, method);
  const Solution opt_sol = earliest_solution(inst, opt.pairs);
  const Solution greedy = greedy_baseline(inst);

  std::vector<CompareRow> rows;
  auto add = [&](const char* name, const Solution& sol) {
    const CostBreakdown c = solution_cost(inst, sol);
    rows.push_back({name, c.total, c.distance_total, c.delay_total, cost_ratio(c.total, opt.cost)});
  };
  add("vrm", vrm);
  add("opt", opt_sol);
  add("greedy", greedy);
  return rows;
}

void write_compare_table(std::ostream& out, const std::vector<CompareRow>& rows,
                         std::optional<int> digits) {
  std::vector<std::vector<std::string>> cells{{"algorithm", "cost", "distance", "delay", "ratio"}};
  for (const CompareRow& r : rows) {
    cells.push_back({r.algorithm, format_rational(r.cost, digits), format_rational(r.distance, digits),
                     format_rational(r.delay, digits), r.ratio ? format_rational(*r.ratio, digits) : "-"});
  }
  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) out << std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << '\n';
  }
}

std::uint64_t scaling_seed(std::uint64_t seed, Family family, int m, int k) {
  std::uint64_t x = splitmix(seed);
  x = splitmix(x ^ static_cast<std::uint64_t>(family));
  x = splitmix(x ^ static_cast<std::uint64_t>(m));
  return splitmix(x ^ static_cast<std::uint64_t>(k));
}

double normalized_ratio(const Rational& ratio, int m) {
  const double r = static_cast<double>(numerator(ratio)) / static_cast<double>(denominator(ratio));
  const double l = std::log(static_cast<double>(m) + 2.0);
  return r / (std::sqrt(static_cast<double>(m)) * l * l);
}

std::vector<ScalingRow> run_scaling(const ScalingConfig& config, std::ostream* progress) {
  if (config.per_point < 1) throw ConfigError("per-point count must be >= 1");
  struct Job {
    Family family;
    int m;
    int k;
  };
  std::vector<Job> jobs;
  for (Family f : config.families) {
    for (int m : config.m_grid) {
      for (int k = 0; k < config.per_point; ++k) jobs.push_back({f, m, k});
    }
  }
  std::vector<Rational> ratios(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex io;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next++;
      if (i >= jobs.size()) return;
      try {
        const Job& j = jobs[i];
        GenSpec spec;
        spec.family = j.family;
        spec.m = j.m;
        spec.seed = scaling_seed(config.seed, j.family, j.m, j.k);
        const Instance inst = generate(spec);
        EngineOptions eo;
        eo.record_phi = false;
        const Solution sol = run(inst, config.gamma, eo).solution;
        const Rational cost = solution_cost(inst, sol).total;
        auto ratio = cost_ratio(cost, opt_hungarian_lattice(inst).cost);
        if (!ratio) throw InvariantError("OPT is zero but the online cost is not");
        ratios[i] = *ratio;
        if (progress && j.k + 1 == config.per_point) {
          std::lock_guard lock(io);
          *progress << to_string(j.family) << " m=" << j.m << " done\n" << std::flush;
        }
      } catch (...) {
        std::lock_guard lock(io);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
        return;
      }
    }
  };
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<ScalingRow> rows;
  for (std::size_t i = 0; i < jobs.size(); i += static_cast<std::size_t>(config.per_point)) {
    ScalingRow row;
    row.family = to_string(jobs[i].family);
    row.m = jobs[i].m;
    row.instances = config.per_point;
    Rational sum;
    for (int k = 0; k < config.per_point; ++k) {
      const Rational& r = ratios[i + static_cast<std::size_t>(k)];
      if (k == 0 || row.max_ratio < r) row.max_ratio = r;
      sum += r;
    }
    row.mean_ratio = sum / config.per_point;
    row.normalized = normalized_ratio(row.max_ratio, row.m);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows,
                       std::optional<int> digits) {
  out << "schema_version,family,m,instances,max_ratio,mean_ratio,normalized\n";
  for (const ScalingRow& r : rows) {
    out << kScalingSchemaVersion << ',' << r.family << ',' << r.m << ',' << r.instances << ','
        << format_rational(r.max_ratio, digits) << ',' << format_rational(r.mean_ratio, digits) << ','
        << significant(r.normalized) << '\n';
  }
}

std::vector<ScalingRow> read_scaling_csv(std::string_view text) {
  std::vector<ScalingRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cols = split(line, ',');
    if (lineno == 1) {
      if (cols.size() != 7 || cols[0] != "schema_version") throw ParseError("line 1", "unexpected CSV header");
      continue;
    }
    if (cols.size() != 7) throw ParseError("line " + std::to_string(lineno), "expected 7 columns");
    try {
      if (parse_int(cols[0]) != kScalingSchemaVersion) throw ParseError("", "unsupported schema version");
      ScalingRow r;
      r.family = cols[1];
      r.m = parse_int(cols[2]);
      r.instances = parse_int(cols[3]);
      r.max_ratio = parse_rational(cols[4]);
      r.mean_ratio = parse_rational(cols[5]);
      r.normalized = std::stod(cols[6]);
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw ParseError("line " + std::to_string(lineno), e.what());
    }
  }
  return rows;
}

Suite parse_suite(std::string_view name) {
  if (name == "small") return Suite::Small;
  if (name == "full") return Suite::Full;
  throw ConfigError("unknown suite \"" + std::string(name) + "\"");
}

GenSpec suite_case(Suite suite, std::uint64_t seed, int k) {
  static constexpr Family kFamilies[] = {Family::Uniform, Family::Clustered, Family::EscalatingLine,
                                         Family::Poisson};
  const int max_m = suite == Suite::Small ? 8 : 16;
  GenSpec g;
  g.family = kFamilies[k % 4];
  g.m = 1 + (k / 4) % max_m;
  g.seed = splitmix(splitmix(seed) ^ static_cast<std::uint64_t>(k));
  switch ((k / (4 * max_m)) % 3) {
    case 0:
      g.resolution = 1;
      g.pos_range = 10;
      g.horizon = 10;
      break;
    case 1:
      g.resolution = 4;
      g.pos_range = 10;
      g.horizon = 10;
      break;
    default:
      break;
  }
  g.factor = (k / 4) % 2 == 0 ? 10 : 3;
  return g;
}

AuditReport run_suite(Suite suite, std::uint64_t seed, int count, const Gamma& gamma,
                      std::ostream* progress) {
  AuditOptions opt;
  opt.gamma = gamma;
  AuditReport total;
  for (int k = 0; k < count; ++k) {
    const GenSpec spec = suite_case(suite, seed, k);
    AuditReport rep = audit_instance(generate(spec), opt);
    if (!rep.error.empty()) {
      rep.error = "instance " + std::to_string(k) + " (" + to_string(spec.family) + ", m=" +
                  std::to_string(spec.m) + "): " + rep.error;
    }
    total.merge(rep, opt.keep_messages);
    if (progress && (k + 1) % 100 == 0) *progress << (k + 1) << "/" << count << " instances\n" << std::flush;
  }
  return total;
}

std::vector<int> parse_m_grid(std::string_view text) {
  const auto parts = split(text, ',');
  std::vector<int> head;
  std::optional<int> last;
  bool ellipsis = false;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (p == "..." || p == "\xE2\x80\xA6") {
      if (ellipsis || i + 2 != parts.size()) throw ConfigError("'...' must precede the final grid value");
      ellipsis = true;
      continue;
    }
    const int v = parse_int(p);
    if (v < 1) throw ConfigError("grid values must be >= 1");
    if (ellipsis) {
      last = v;
    } else {
      head.push_back(v);
    }
  }
  if (!ellipsis) {
    if (head.empty()) throw ConfigError("empty m grid");
    return head;
  }
  if (head.size() < 2 || !last) throw ConfigError("'...' needs two leading values and an end value");
  const int a = head[head.size() - 2];
  const int b = head.back();
  if (b <= a) throw ConfigError("m grid must increase");
  const bool geometric = b % a == 0 && (head.size() < 3 || head[head.size() - 3] * (b / a) == a);
  const bool arithmetic = head.size() >= 3 && a - head[head.size() - 3] == b - a;
  std::vector<int> out = head;
  for (;;) {
    const long long next = (geometric && !arithmetic) ? static_cast<long long>(out.back()) * (b / a)
                                                      : static_cast<long long>(out.back()) + (b - a);
    if (next > *last) break;
    out.push_back(static_cast<int>(next));
  }
  if (out.back() != *last) throw ConfigError("grid does not reach " + std::to_string(*last));
  return out;
}

}  // namespace vrm
