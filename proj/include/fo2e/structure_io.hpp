#pragma once

#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fo2e/structure.hpp"

// JSON form:
//   {"domain": ["a","b"],
//    "unary":  {"P": ["a"]},
//    "binary": {"R": [["a","b"]], "E1": [...], "E2": [...]},
//    "constants": {"c1": "a"}}
// E1 and E2 are required and validated as equivalence relations unless the
// caller asks for them to be closed first.

namespace fo2e {

struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Structure structure_from_json(const nlohmann::json& j, bool close_equivalences = false) {
  if (!j.is_object()) throw StructureError("structure must be a JSON object");
  for (auto& [key, _] : j.items())
    if (key != "domain" && key != "unary" && key != "binary" && key != "constants")
      throw StructureError("unknown key '" + key + "' in structure");
  if (!j.contains("domain") || !j["domain"].is_array() || j["domain"].empty())
    throw StructureError("structure needs a non-empty 'domain' array");

  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& e : j["domain"]) {
    if (!e.is_string()) throw StructureError("domain elements must be strings");
    if (!seen.insert(e.get<std::string>()).second)
      throw StructureError("duplicate domain element '" + e.get<std::string>() + "'");
    ids.push_back(e.get<std::string>());
  }
  Structure s = Structure::make(std::move(ids));
  s.binary.clear();  // filled from the file; E1/E2 presence checked below

  auto elem = [&](const nlohmann::json& e, const std::string& where) -> int {
    if (!e.is_string()) throw StructureError(where + ": element ids must be strings");
    auto it = s.index.find(e.get<std::string>());
    if (it == s.index.end())
      throw StructureError(where + ": unknown element '" + e.get<std::string>() + "'");
    return it->second;
  };

  if (j.contains("unary")) {
    if (!j["unary"].is_object()) throw StructureError("'unary' must be an object");
    for (auto& [pred, members] : j["unary"].items()) {
      if (!members.is_array()) throw StructureError("unary '" + pred + "' must list elements");
      s.unary[pred].assign(s.n(), 0);
      for (const auto& e : members) s.unary[pred][elem(e, "unary " + pred)] = 1;
    }
  }
  if (j.contains("binary")) {
    if (!j["binary"].is_object()) throw StructureError("'binary' must be an object");
    for (auto& [pred, pairs] : j["binary"].items()) {
      if (s.unary.count(pred)) throw StructureError("'" + pred + "' is both unary and binary");
      if (!pairs.is_array()) throw StructureError("binary '" + pred + "' must list pairs");
      auto& m = s.binary[pred];
      m.assign(static_cast<std::size_t>(s.n()) * s.n(), 0);
      for (const auto& pr : pairs) {
        if (!pr.is_array() || pr.size() != 2)
          throw StructureError("binary " + pred + ": each entry must be a [from,to] pair");
        const int a = elem(pr[0], "binary " + pred);
        const int b = elem(pr[1], "binary " + pred);
        m[static_cast<std::size_t>(a) * s.n() + b] = 1;
      }
    }
  }
  if (j.contains("constants")) {
    if (!j["constants"].is_object()) throw StructureError("'constants' must be an object");
    for (auto& [name, e] : j["constants"].items()) s.constants[name] = elem(e, "constant " + name);
  }

  for (const char* eq : {"E1", "E2"}) {
    if (close_equivalences) close_equivalence(s, eq);
    if (auto err = validate_equivalence(s, eq)) throw StructureError(*err);
  }
  return s;
}

inline Structure load_structure_file(const std::string& path, bool close_equivalences = false) {
  std::ifstream in(path);
  if (!in) throw StructureError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw StructureError(path + ": " + e.what());
  }
  return structure_from_json(j, close_equivalences);
}

inline nlohmann::json structure_to_json(const Structure& s) {
  nlohmann::json j;
  j["domain"] = s.ids;
  auto& un = j["unary"] = nlohmann::json::object();
  for (const auto& [pred, flags] : s.unary) {
    auto arr = nlohmann::json::array();
    for (int i = 0; i < s.n(); ++i)
      if (flags[i]) arr.push_back(s.ids[i]);
    un[pred] = std::move(arr);
  }
  auto& bin = j["binary"] = nlohmann::json::object();
  for (const auto& [pred, m] : s.binary) {
    auto arr = nlohmann::json::array();
    for (int i = 0; i < s.n(); ++i)
      for (int k = 0; k < s.n(); ++k)
        if (m[static_cast<std::size_t>(i) * s.n() + k])
          arr.push_back(nlohmann::json::array({s.ids[i], s.ids[k]}));
    bin[pred] = std::move(arr);
  }
  auto& cn = j["constants"] = nlohmann::json::object();
  for (const auto& [name, idx] : s.constants) cn[name] = s.ids[idx];
  return j;
}

inline void save_structure_file(const Structure& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw StructureError("cannot write '" + path + "'");
  out << structure_to_json(s).dump(2) << "\n";
}

}  // namespace fo2e
