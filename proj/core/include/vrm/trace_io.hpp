#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "vrm/engine.hpp"

namespace vrm {

// One JSON object per line:
//   {"time":"4/1","kind":"AU","request":1,"server":1,"phi":"12/1","path":["r1","s1"]}
// With verbose, events also carry "phi_before"/"phi_after" maps (null = +infinity).
void write_trace_jsonl(std::ostream& out, const Trace& trace, bool verbose,
                       std::optional<int> decimal_digits = std::nullopt);

}  // namespace vrm
