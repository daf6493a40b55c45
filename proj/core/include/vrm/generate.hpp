#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "vrm/instance.hpp"
#include "vrm/rational.hpp"

namespace vrm {

enum class Family { Uniform, Clustered, EscalatingLine, Poisson };

Family parse_family(std::string_view name);  // throws ConfigError
const char* to_string(Family family);

// Instance generator parameters. Every value is exact; positions and times
// are drawn on a grid of `1/resolution`.
struct GenSpec {
  Family family = Family::Uniform;
  int m = 1;
  std::uint64_t seed = 0;

  Rational pos_range{100};  // positions in [0, pos_range]
  Rational horizon{100};    // arrivals in [0, horizon] (uniform, clustered)
  std::int64_t resolution = 1000;

  int clusters = 4;        // clustered
  Rational spread{2};      // clustered: half-width around each centre

  Rational rate{1};        // poisson: arrivals per unit time, per role

  std::int64_t factor = 10;  // escalating_line: geometric spacing
  int levels = 6;            // escalating_line: positions per cluster
};

// Throws ConfigError on invalid parameters. Byte-identical for a fixed spec.
Instance generate(const GenSpec& spec);

}  // namespace vrm
