#include "vrm/generate.hpp"

#include <cmath>
#include <random>

#include "vrm/errors.hpp"

namespace vrm {
namespace {

// Uniform integer in [0, n] that does not depend on the standard library's
// distribution implementations.
std::uint64_t uniform_upto(std::mt19937_64& rng, std::uint64_t n) {
  if (n == UINT64_MAX) return rng();
  const std::uint64_t range = n + 1;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range + 1) % range;
  for (;;) {
    const std::uint64_t x = rng();
    if (x <= limit) return x % range;
  }
}

std::uint64_t grid_steps(const Rational& span, std::int64_t resolution, const char* what) {
  const Rational steps = span * resolution;
  if (steps < 0 || denominator(steps) != 1) {
    throw ConfigError(std::string(what) + " must be a non-negative multiple of 1/resolution");
  }
  if (numerator(steps) > BigInt(UINT64_MAX / 2)) throw ConfigError(std::string(what) + " is too large");
  return static_cast<std::uint64_t>(numerator(steps));
}

Rational grid_point(std::mt19937_64& rng, const Rational& lo, std::uint64_t steps,
                    std::int64_t resolution) {
  return lo + Rational(BigInt(uniform_upto(rng, steps)), BigInt(resolution));
}

template <class T>
void shuffle(std::mt19937_64& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[static_cast<std::size_t>(uniform_upto(rng, i - 1))]);
  }
}

Instance assemble(std::vector<Rational> rpos, std::vector<Rational> rarr, std::vector<Rational> spos,
                  std::vector<Rational> sarr) {
  std::vector<Agent> requests;
  std::vector<Agent> servers;
  for (std::size_t i = 0; i < rpos.size(); ++i) {
    requests.push_back({static_cast<int>(i) + 1, Role::Request, std::move(rpos[i]), std::move(rarr[i])});
    servers.push_back({static_cast<int>(i) + 1, Role::Server, std::move(spos[i]), std::move(sarr[i])});
  }
  return Instance(std::move(requests), std::move(servers));
}

Instance uniform(const GenSpec& g, std::mt19937_64& rng) {
  const auto pos_steps = grid_steps(g.pos_range, g.resolution, "pos_range");
  const auto time_steps = grid_steps(g.horizon, g.resolution, "horizon");
  std::vector<Rational> rpos, rarr, spos, sarr;
  for (int i = 0; i < g.m; ++i) {
    rpos.push_back(grid_point(rng, 0, pos_steps, g.resolution));
    rarr.push_back(grid_point(rng, 0, time_steps, g.resolution));
    spos.push_back(grid_point(rng, 0, pos_steps, g.resolution));
    sarr.push_back(grid_point(rng, 0, time_steps, g.resolution));
  }
  return assemble(std::move(rpos), std::move(rarr), std::move(spos), std::move(sarr));
}

Instance clustered(const GenSpec& g, std::mt19937_64& rng) {
  if (g.clusters < 1) throw ConfigError("clusters must be >= 1");
  if (g.spread < 0) throw ConfigError("spread must be >= 0");
  const auto pos_steps = grid_steps(g.pos_range, g.resolution, "pos_range");
  const auto time_steps = grid_steps(g.horizon, g.resolution, "horizon");
  const auto spread_steps = grid_steps(2 * g.spread, g.resolution, "spread");
  std::vector<Rational> centres;
  for (int c = 0; c < g.clusters; ++c) centres.push_back(grid_point(rng, 0, pos_steps, g.resolution));
  auto point = [&]() {
    const Rational& centre = centres[static_cast<std::size_t>(
        uniform_upto(rng, static_cast<std::uint64_t>(g.clusters - 1)))];
    return grid_point(rng, centre - g.spread, spread_steps, g.resolution);
  };
  std::vector<Rational> rpos, rarr, spos, sarr;
  for (int i = 0; i < g.m; ++i) {
    rpos.push_back(point());
    rarr.push_back(grid_point(rng, 0, time_steps, g.resolution));
    spos.push_back(point());
    sarr.push_back(grid_point(rng, 0, time_steps, g.resolution));
  }
  return assemble(std::move(rpos), std::move(rarr), std::move(spos), std::move(sarr));
}

Instance poisson(const GenSpec& g, std::mt19937_64& rng) {
  if (!(g.rate > 0)) throw ConfigError("poisson rate must be positive");
  const auto pos_steps = grid_steps(g.pos_range, g.resolution, "pos_range");
  const double rate = static_cast<double>(numerator(g.rate)) / static_cast<double>(denominator(g.rate));
  constexpr std::int64_t kTimeDenominator = 1'000'000;
  auto interarrival = [&]() {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    const double x = -std::log1p(-u) / rate;
    return Rational(BigInt(static_cast<std::int64_t>(std::floor(x * kTimeDenominator))),
                    BigInt(kTimeDenominator));
  };
  std::vector<Rational> rpos, rarr, spos, sarr;
  Rational tr(0);
  Rational ts(0);
  for (int i = 0; i < g.m; ++i) {
    tr += interarrival();
    rarr.push_back(tr);
    rpos.push_back(grid_point(rng, 0, pos_steps, g.resolution));
    ts += interarrival();
    sarr.push_back(ts);
    spos.push_back(grid_point(rng, 0, pos_steps, g.resolution));
  }
  return assemble(std::move(rpos), std::move(rarr), std::move(spos), std::move(sarr));
}

// Level positions 0, 1, f, f^2, ... repeated in clusters that arrive together
// at times 0, 1, 2, ...; each server sits halfway towards the next level.
Instance escalating_line(const GenSpec& g, std::mt19937_64& rng) {
  if (g.factor < 2) throw ConfigError("escalation factor must be >= 2");
  if (g.levels < 2 || g.levels > 40) throw ConfigError("levels must be in [2, 40]");
  std::vector<Rational> level(static_cast<std::size_t>(g.levels));
  level[0] = 0;
  Rational p(1);
  for (int k = 1; k < g.levels; ++k) {
    level[static_cast<std::size_t>(k)] = p;
    p *= g.factor;
  }
  std::vector<Rational> rpos, rarr, spos, sarr;
  for (int j = 0; j < g.m; ++j) {
    const auto k = static_cast<std::size_t>(j % g.levels);
    const Rational cluster(j / g.levels);
    const Rational& here = level[k];
    const Rational gap = k + 1 < level.size() ? level[k + 1] - here : here - level[k - 1];
    rpos.push_back(here);
    rarr.push_back(cluster);
    spos.push_back(here + gap / 2);
    sarr.push_back(cluster);
  }
  // Ids are assigned in a seeded random order.
  auto permute = [&](std::vector<Rational>& pos, std::vector<Rational>& arr) {
    std::vector<std::size_t> order(pos.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle(rng, order);
    std::vector<Rational> p2, a2;
    for (std::size_t i : order) {
      p2.push_back(pos[i]);
      a2.push_back(arr[i]);
    }
    pos = std::move(p2);
    arr = std::move(a2);
  };
  permute(rpos, rarr);
  permute(spos, sarr);
  return assemble(std::move(rpos), std::move(rarr), std::move(spos), std::move(sarr));
}

}  // namespace

Family parse_family(std::string_view name) {
  if (name == "uniform") return Family::Uniform;
  if (name == "clustered") return Family::Clustered;
  if (name == "escalating_line") return Family::EscalatingLine;
  if (name == "poisson") return Family::Poisson;
  throw ConfigError("unknown family \"" + std::string(name) + "\"");
}

const char* to_string(Family family) {
  switch (family) {
    case Family::Uniform:
      return "uniform";
    case Family::Clustered:
      return "clustered";
    case Family::EscalatingLine:
      return "escalating_line";
    case Family::Poisson:
      return "poisson";
  }
  return "?";
}

Instance generate(const GenSpec& spec) {
  if (spec.m < 1) throw ConfigError("m must be >= 1");
  if (spec.resolution < 1) throw ConfigError("resolution must be >= 1");
  std::mt19937_64 rng(spec.seed);
  switch (spec.family) {
    case Family::Uniform:
      return uniform(spec, rng);
    case Family::Clustered:
      return clustered(spec, rng);
    case Family::EscalatingLine:
      return escalating_line(spec, rng);
    case Family::Poisson:
      return poisson(spec, rng);
  }
  throw ConfigError("unknown family");
}

}  // namespace vrm
