// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <istream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbgt/errors.hpp"
#include "cbgt/instance.hpp"
#include "cbgt/pinwheel.hpp"
#include "cbgt/rational.hpp"
#include "cbgt/set_system.hpp"
#include "cbgt/simulator.hpp"

namespace cbgt {

using Json = nlohmann::ordered_json;

class ParseError : public DomainError {
 public:
  using DomainError::DomainError;
};

inline Json parse_json(const std::string& text, const std::string& source = "input") {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

inline Json parse_json(std::istream& in, const std::string& source = "input") {
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), source);
}

// Rationals travel as ["num", "den"]; "p/q", decimal strings and plain
// integers are also accepted on input.
inline Json rational_to_json(const Rational& q) { return Json::array({numerator(q).str(), denominator(q).str()}); }

inline Rational rational_from_json(const Json& j) {
  try {
    if (j.is_array() && j.size() == 2) {
      auto part = [](const Json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
      return parse_rational(part(j[0]) + "/" + part(j[1]));
    }
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  } catch (const DomainError& e) {
    throw ParseError(std::string("bad rational ") + j.dump() + ": " + e.what());
  }
  throw ParseError("bad rational " + j.dump() + ": expected [\"num\",\"den\"]");
}

namespace detail {

template <typename T>
T get_field(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string(where) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(where) + ": field '" + key + "': " + e.what());
  }
}

}  // namespace detail

inline Json system_to_json(const SetSystem& sys) {
  Json out = Json::object();
  if (const auto* u = sys.as<UniformSystem>()) {
    out["uniform"] = {{"k", u->k}};
  } else if (const auto* p = sys.as<PartitionSystem>()) {
    out["partition"] = {{"blocks", p->blocks}, {"caps", p->caps}};
  } else if (const auto* g = sys.as<GraphicSystem>()) {
    Json edges = Json::array();
    for (auto [a, b] : g->edges) edges.push_back({a, b});
    out["graphic"] = {{"vertices", g->vertices}, {"edges", edges}};
  } else if (const auto* l = sys.as<LaminarSystem>()) {
    out["laminar"] = {{"sets", l->sets}, {"caps", l->caps}};
  } else if (const auto* t = sys.as<TransversalSystem>()) {
    out["transversal"] = {{"right", t->right}, {"adjacency", t->adjacency}};
  } else if (const auto* x = sys.as<ExplicitSystem>()) {
    out["explicit"] = {{"generators", x->generators}};
  } else if (const auto* d = sys.as<DirectSumSystem>()) {
    Json parts = Json::array();
    for (const auto& p : d->parts) parts.push_back({{"size", p.size}, {"system", system_to_json(*p.system)}});
    out["direct_sum"] = parts;
  }
  return out;
}

inline SetSystem system_from_json(const Json& j, std::size_t n) {
  if (!j.is_object() || j.size() != 1) throw ParseError("system: expected an object with exactly one variant key");
  const auto& [key, body] = *j.items().begin();
  const std::string where = "system." + key;
  if (key == "uniform") return SetSystem::uniform(n, detail::get_field<int>(body, "k", where.c_str()));
  if (key == "partition") {
    return SetSystem::partition(n, detail::get_field<std::vector<ElementSet>>(body, "blocks", where.c_str()),
                                detail::get_field<std::vector<int>>(body, "caps", where.c_str()));
  }
  if (key == "graphic") {
    auto sys = SetSystem::graphic(detail::get_field<int>(body, "vertices", where.c_str()),
                                  detail::get_field<std::vector<std::pair<int, int>>>(body, "edges", where.c_str()));
    if (sys.size() != n) throw ParseError("system.graphic: edge count does not match the element count");
    return sys;
  }
  if (key == "laminar") {
    return SetSystem::laminar(n, detail::get_field<std::vector<ElementSet>>(body, "sets", where.c_str()),
                              detail::get_field<std::vector<int>>(body, "caps", where.c_str()));
  }
  if (key == "transversal") {
    auto sys = SetSystem::transversal(detail::get_field<int>(body, "right", where.c_str()),
                                      detail::get_field<std::vector<std::vector<int>>>(body, "adjacency", where.c_str()));
    if (sys.size() != n) throw ParseError("system.transversal: adjacency size does not match the element count");
    return sys;
  }
  if (key == "explicit") {
    return SetSystem::explicit_system(n, detail::get_field<std::vector<ElementSet>>(body, "generators", where.c_str()));
  }
  if (key == "direct_sum") {
    if (!body.is_array()) throw ParseError("system.direct_sum: expected an array of parts");
    std::vector<DirectSumPart> parts;
    std::size_t total = 0;
    for (const auto& p : body) {
      auto size = detail::get_field<std::size_t>(p, "size", "system.direct_sum part");
      if (!p.contains("system")) throw ParseError("system.direct_sum part: missing field 'system'");
      parts.push_back({size, std::make_shared<const SetSystem>(system_from_json(p.at("system"), size))});
      total += size;
    }
    if (total != n) throw ParseError("system.direct_sum: part sizes do not add up to the element count");
    return SetSystem::direct_sum(std::move(parts));
  }
  throw ParseError("system: unknown variant '" + key + "'");
}

inline Json terms_to_json(const ConvexCombination& c) {
  Json out = Json::array();
  for (const auto& t : c) out.push_back({{"set", t.set}, {"weight", rational_to_json(t.weight)}});
  return out;
}

inline ConvexCombination terms_from_json(const Json& j, const char* where) {
  if (!j.is_array()) throw ParseError(std::string(where) + ": expected an array");
  ConvexCombination out;
  for (const auto& t : j) {
    if (!t.contains("weight")) throw ParseError(std::string(where) + ": term without 'weight'");
    out.push_back({make_set(detail::get_field<ElementSet>(t, "set", where)), rational_from_json(t.at("weight"))});
  }
  return out;
}

namespace detail {
inline std::vector<std::string> labels_from_json(const Json& j, const char* where) {
  if (!j.contains("elements")) throw ParseError(std::string(where) + ": missing field 'elements'");
  const auto& el = j.at("elements");
  if (el.is_number_unsigned()) {
    std::vector<std::string> out;
    for (std::size_t e = 0; e < el.get<std::size_t>(); ++e) out.push_back("e" + std::to_string(e));
    return out;
  }
  return get_field<std::vector<std::string>>(j, "elements", where);
}
}  // namespace detail

inline Json instance_to_json(const CbgtInstance& inst) {
  Json out = Json::object();
  out["elements"] = inst.labels();
  out["system"] = system_to_json(inst.system());
  Json growth = Json::array();
  for (const auto& g : inst.growth()) growth.push_back(rational_to_json(g));
  out["growth"] = growth;
  if (inst.witness()) out["witness"] = terms_to_json(*inst.witness());
  return out;
}

inline CbgtInstance instance_from_json(const Json& j) {
  auto labels = detail::labels_from_json(j, "instance");
  if (!j.contains("system")) throw ParseError("instance: missing field 'system'");
  auto sys = system_from_json(j.at("system"), labels.size());
  if (!j.contains("growth") || !j.at("growth").is_array()) throw ParseError("instance: missing array 'growth'");
  std::vector<Rational> growth;
  for (const auto& g : j.at("growth")) growth.push_back(rational_from_json(g));
  std::optional<ConvexCombination> witness;
  if (j.contains("witness") && !j.at("witness").is_null()) witness = terms_from_json(j.at("witness"), "instance.witness");
  return CbgtInstance(std::move(sys), std::move(growth), std::move(witness), std::move(labels));
}

inline Json schedule_to_json(const Schedule& s) {
  Json out = Json::object();
  out["periodic"] = s.periodic;
  out["core"] = s.core;
  return out;
}

inline Schedule schedule_from_json(const Json& j) {
  Schedule s;
  s.periodic = detail::get_field<bool>(j, "periodic", "schedule");
  for (auto& c : detail::get_field<std::vector<ElementSet>>(j, "core", "schedule")) s.core.push_back(make_set(std::move(c)));
  return s;
}

inline Json cps_to_json(const CpsInstance& cps) {
  Json out = Json::object();
  out["elements"] = cps.labels();
  out["system"] = system_to_json(cps.system());
  out["periods"] = cps.periods();
  if (cps.certificate()) out["certificate"] = terms_to_json(*cps.certificate());
  return out;
}

inline CpsInstance cps_from_json(const Json& j) {
  auto labels = detail::labels_from_json(j, "cps");
  if (!j.contains("system")) throw ParseError("cps: missing field 'system'");
  auto sys = system_from_json(j.at("system"), labels.size());
  auto periods = detail::get_field<std::vector<std::int64_t>>(j, "periods", "cps");
  std::optional<ConvexCombination> cert;
  if (j.contains("certificate") && !j.at("certificate").is_null()) cert = terms_from_json(j.at("certificate"), "cps.certificate");
  return CpsInstance(std::move(sys), std::move(periods), std::move(cert), std::move(labels));
}

inline Json report_to_json(const SimulationReport& r, const std::vector<std::string>& labels) {
  Json out = Json::object();
  out["horizon"] = r.horizon;
  out["valid"] = r.valid;
  out["first_invalid_step"] = r.first_invalid_step ? Json(*r.first_invalid_step) : Json(nullptr);
  out["exact"] = r.exact;
  out["max_height"] = rational_to_json(r.max_height);
  out["trajectory_max_height"] = rational_to_json(r.trajectory_max_height);
  auto d = r.max_discrepancy();
  out["max_discrepancy"] = d ? rational_to_json(*d) : Json("unbounded");
  Json per = Json::array();
  for (std::size_t e = 0; e < r.per_element.size(); ++e) {
    const auto& x = r.per_element[e];
    Json row = Json::object();
    row["element"] = labels[e];
    row["max_height"] = rational_to_json(x.max_height);
    row["recurrence"] = x.recurrence ? Json(*x.recurrence) : Json("unbounded");
    row["discrepancy"] = x.discrepancy ? rational_to_json(*x.discrepancy) : Json("unbounded");
    row["cuts"] = x.cuts;
    if (!x.samples.empty()) row["samples"] = x.samples;
    per.push_back(row);
  }
  out["per_element"] = per;
  return out;
}

}  // namespace cbgt
