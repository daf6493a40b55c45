#include "vrm/trace_io.hpp"

#include <nlohmann/json.hpp>

namespace vrm {
namespace {

using Json = nlohmann::ordered_json;

Json phi_map(const std::vector<PhiEntry>& entries, std::optional<int> digits) {
  Json out = Json::object();
  for (const PhiEntry& e : entries) {
    const std::string key = "r" + std::to_string(e.request.value);
    out[key] = e.phi ? Json(format_rational(*e.phi, digits)) : Json(nullptr);
  }
  return out;
}

}  // namespace

void write_trace_jsonl(std::ostream& out, const Trace& trace, bool verbose,
                       std::optional<int> decimal_digits) {
  for (const TraceEvent& e : trace.events) {
    Json line;
    line["time"] = format_rational(e.time, decimal_digits);
    line["kind"] = to_string(e.kind);
    switch (e.kind) {
      case EventKind::ServerArrival:
        line["server"] = e.id;
        break;
      case EventKind::RequestArrival:
        line["request"] = e.id;
        break;
      case EventKind::Augmentation: {
        line["request"] = e.id;
        if (e.partner) line["server"] = e.partner->value;
        if (e.phi) line["phi"] = format_rational(*e.phi, decimal_digits);
        Json path = Json::array();
        for (const Vertex& v : e.path.vertices()) path.push_back(to_string(v));
        line["path"] = std::move(path);
        break;
      }
    }
    if (verbose) {
      if (e.kind == EventKind::Augmentation) line["phi_before"] = phi_map(e.phi_before, decimal_digits);
      line["phi_after"] = phi_map(e.phi_after, decimal_digits);
    }
    out << line.dump() << '\n';
  }
}

}  // namespace vrm
