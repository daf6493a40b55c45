#include "vrm/instance_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "vrm/errors.hpp"

namespace vrm {
namespace {

using json = nlohmann::ordered_json;

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(child(path, key), "missing field");
  return *it;
}

Rational number(const json& v, const std::string& path) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? Rational(BigInt(v.get<std::uint64_t>()))
                                  : Rational(BigInt(v.get<std::int64_t>()));
  }
  if (v.is_number_float()) {
    throw ParseError(path, "binary floating-point numbers are not accepted; quote the value");
  }
  if (!v.is_string()) throw ParseError(path, "expected a numeric string");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(path, e.what());
  }
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < INT32_MIN || x > INT32_MAX) throw ParseError(path, "integer out of range");
  return static_cast<int>(x);
}

std::vector<Agent> agents(const json& doc, const char* key, Role role) {
  const std::string path = std::string("/") + key;
  const json& list = field(doc, "", key);
  if (!list.is_array()) throw ParseError(path, "expected an array");
  std::vector<Agent> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = child(path, i);
    Agent a;
    a.role = role;
    a.id = integer(field(list[i], p, "id"), child(p, "id"));
    a.pos = number(field(list[i], p, "pos"), child(p, "pos"));
    a.arrival = number(field(list[i], p, "arrival"), child(p, "arrival"));
    if (a.arrival < 0) throw ParseError(child(p, "arrival"), "negative arrival");
    out.push_back(std::move(a));
  }
  return out;
}

void check_schema(const json& doc) {
  if (auto it = doc.find("schema_version"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() != kSchemaVersion) {
      throw ParseError("/schema_version", "unsupported schema version");
    }
  }
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
}

std::string instance_number(const Rational& v) {
  if (auto d = to_exact_decimal(v)) return *d;
  return to_fraction_string(v);
}

json agent_json(const Agent& a) {
  return json{{"id", a.id}, {"pos", instance_number(a.pos)}, {"arrival", instance_number(a.arrival)}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Instance read_instance(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) throw ParseError("", "expected a JSON object");
  check_schema(doc);
  std::vector<Agent> requests = agents(doc, "requests", Role::Request);
  std::vector<Agent> servers = agents(doc, "servers", Role::Server);
  if (requests.size() != servers.size()) throw ParseError("", "cardinality mismatch");
  if (auto it = doc.find("m"); it != doc.end()) {
    if (integer(*it, "/m") != static_cast<int>(requests.size())) {
      throw ParseError("/m", "m does not match the number of agents");
    }
  }
  try {
    return Instance(std::move(requests), std::move(servers));
  } catch (const ValidationError& e) {
    throw ParseError("", e.what());
  }
}

std::string write_instance(const Instance& inst) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["m"] = inst.m();
  doc["requests"] = json::array();
  doc["servers"] = json::array();
  for (const Agent& a : inst.requests()) doc["requests"].push_back(agent_json(a));
  for (const Agent& a : inst.servers()) doc["servers"].push_back(agent_json(a));
  return doc.dump(2) + "\n";
}

Instance load_instance(const std::string& path) { return read_instance(read_file(path)); }

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << write_instance(inst);
}

std::string write_solution(const Instance& inst, const Solution& sol,
                           std::optional<int> decimal_digits) {
  auto fmt = [&](const Rational& v) { return format_rational(v, decimal_digits); };
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["pairs"] = json::array();
  for (const MatchRecord& rec : sol.pairs) {
    const PairCost c = pair_cost(inst, rec);
    doc["pairs"].push_back({{"request", rec.request.value},
                            {"server", rec.server.value},
                            {"match_time", fmt(rec.match_time)},
                            {"distance", fmt(c.distance)},
                            {"delay_request", fmt(c.delay_request)},
                            {"delay_server", fmt(c.delay_server)}});
  }
  const CostBreakdown cost = solution_cost(inst, sol);
  doc["cost"] = {{"distance_total", fmt(cost.distance_total)},
                 {"delay_total", fmt(cost.delay_total)},
                 {"total", fmt(cost.total)}};
  return doc.dump(2) + "\n";
}

Solution read_solution(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) throw ParseError("", "expected a JSON object");
  check_schema(doc);
  const json& pairs = field(doc, "", "pairs");
  if (!pairs.is_array()) throw ParseError("/pairs", "expected an array");
  Solution sol;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string p = child("/pairs", i);
    MatchRecord rec;
    rec.request = RequestId(integer(field(pairs[i], p, "request"), child(p, "request")));
    rec.server = ServerId(integer(field(pairs[i], p, "server"), child(p, "server")));
    rec.match_time = number(field(pairs[i], p, "match_time"), child(p, "match_time"));
    sol.pairs.push_back(std::move(rec));
  }
  return sol;
}

}  // namespace vrm
