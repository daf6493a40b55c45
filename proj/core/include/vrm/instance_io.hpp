#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "vrm/instance.hpp"

namespace vrm {

inline constexpr int kSchemaVersion = 1;

// Instance JSON:
//   {"m": 2, "requests": [{"id": 1, "pos": "0.5", "arrival": "0"}, ...], "servers": [...]}
// Numeric fields are decimal or "p/q" strings (JSON integers are also accepted).
// Throws ParseError carrying the JSON path of the offending field.
Instance read_instance(std::string_view json_text);
std::string write_instance(const Instance& inst);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

// Solution JSON with the per-pair breakdown; rationals as "p/q" unless decimal_digits is set.
std::string write_solution(const Instance& inst, const Solution& sol,
                           std::optional<int> decimal_digits = std::nullopt);
Solution read_solution(std::string_view json_text);

}  // namespace vrm
