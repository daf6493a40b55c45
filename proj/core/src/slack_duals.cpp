#include "vrm/slack_duals.hpp"

#include <nlohmann/json.hpp>

namespace vrm {

std::string to_string(InvariantKind kind) {
  switch (kind) {
    case InvariantKind::Feasibility:
      return "I1";
    case InvariantKind::MovingFeasibility:
      return "I2";
    case InvariantKind::ZeroOnFree:
      return "I3";
    case InvariantKind::Tightness:
      return "I4";
  }
  return "?";
}

std::string slack_graph_json(const std::vector<SlackEdge<Rational>>& edges, RequestId source) {
  nlohmann::ordered_json doc;
  doc["source"] = to_string(Vertex::request(source));
  nlohmann::ordered_json adjacency = nlohmann::ordered_json::object();
  for (const auto& e : edges) {
    auto& list = adjacency[to_string(e.from)];
    if (list.is_null()) list = nlohmann::ordered_json::array();
    list.push_back({{"to", to_string(e.to)}, {"weight", to_fraction_string(e.weight)}});
  }
  doc["edges"] = std::move(adjacency);
  return doc.dump(2);
}

}  // namespace vrm
