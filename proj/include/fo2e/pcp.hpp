#pragma once

#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

// Infinite Post correspondence instances: a finite list of word pairs (v, w)
// over a small alphabet, asked for an infinite index sequence spelling the
// same omega-word on both sides. Candidate sequences are given as an
// eventually periodic prefix/period scheme.

namespace fo2e {

struct PcpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PcpInstance {
  struct Pair {
    std::string v, w;
  };
  std::vector<std::string> alphabet;  // single-character letters
  std::vector<Pair> pairs;            // 1-based indexing in the interface
};

struct PcpSolution {
  std::vector<int> prefix;  // may be empty
  std::vector<int> period;  // never empty
};

inline PcpInstance pcp_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw PcpError("instance must be a JSON object");
  for (const auto& [key, val] : j.items()) {
    (void)val;
    if (key != "alphabet" && key != "pairs") throw PcpError("unknown key '" + key + "' in instance");
  }
  PcpInstance p;
  if (!j.contains("alphabet") || !j["alphabet"].is_array() || j["alphabet"].empty())
    throw PcpError("instance needs a non-empty 'alphabet' array");
  std::set<std::string> seen;
  for (const auto& e : j["alphabet"]) {
    if (!e.is_string()) throw PcpError("letters must be strings");
    const std::string l = e.get<std::string>();
    if (l.size() != 1 || l[0] < 'a' || l[0] > 'z')
      throw PcpError("letter '" + l + "' must be a single lowercase character");
    if (l == "x" || l == "y") throw PcpError("letters 'x' and 'y' are reserved for variables");
    if (!seen.insert(l).second) throw PcpError("duplicate letter '" + l + "'");
    p.alphabet.push_back(l);
  }
  if (!j.contains("pairs") || !j["pairs"].is_array() || j["pairs"].empty())
    throw PcpError("instance needs a non-empty 'pairs' array");
  for (const auto& e : j["pairs"]) {
    if (!e.is_object() || !e.contains("v") || !e.contains("w") || !e["v"].is_string() ||
        !e["w"].is_string())
      throw PcpError("each pair must be an object with string fields 'v' and 'w'");
    PcpInstance::Pair pr{e["v"].get<std::string>(), e["w"].get<std::string>()};
    for (const std::string* word : {&pr.v, &pr.w}) {
      if (word->empty()) throw PcpError("pair words must be non-empty");
      for (char c : *word)
        if (!seen.count(std::string(1, c)))
          throw PcpError("word '" + *word + "' uses a letter outside the alphabet");
    }
    p.pairs.push_back(std::move(pr));
  }
  return p;
}

inline nlohmann::json pcp_to_json(const PcpInstance& p) {
  nlohmann::json j;
  j["alphabet"] = p.alphabet;
  j["pairs"] = nlohmann::json::array();
  for (const auto& pr : p.pairs) j["pairs"].push_back({{"v", pr.v}, {"w", pr.w}});
  return j;
}

inline PcpInstance load_pcp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PcpError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw PcpError(path + ": " + e.what());
  }
  return pcp_from_json(j);
}

inline PcpSolution solution_from_json(const nlohmann::json& j, const PcpInstance& p) {
  if (!j.is_object()) throw PcpError("solution must be a JSON object");
  for (const auto& [key, val] : j.items()) {
    (void)val;
    if (key != "prefix" && key != "period") throw PcpError("unknown key '" + key + "' in solution");
  }
  PcpSolution s;
  auto read = [&](const char* key, std::vector<int>& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_array()) throw PcpError(std::string("'") + key + "' must be an array");
    for (const auto& e : j[key]) {
      if (!e.is_number_integer()) throw PcpError("solution indices must be integers");
      const int i = e.get<int>();
      if (i < 1 || i > static_cast<int>(p.pairs.size()))
        throw PcpError("index " + std::to_string(i) + " is out of range");
      out.push_back(i);
    }
  };
  read("prefix", s.prefix);
  read("period", s.period);
  if (s.period.empty()) throw PcpError("solution needs a non-empty 'period' array");
  return s;
}

inline PcpSolution load_solution_file(const std::string& path, const PcpInstance& p) {
  std::ifstream in(path);
  if (!in) throw PcpError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw PcpError(path + ": " + e.what());
  }
  return solution_from_json(j, p);
}

// First n indices of prefix followed by the repeated period.
inline std::vector<int> solution_indices(const PcpSolution& s, int n) {
  std::vector<int> out;
  for (int t = 0; static_cast<int>(out.size()) < n; ++t)
    out.push_back(t < static_cast<int>(s.prefix.size())
                      ? s.prefix[t]
                      : s.period[(t - s.prefix.size()) % s.period.size()]);
  return out;
}

// One position of a spelled chain: the letter, which block (1-based) it lies
// in, the pair index of that block, the 1-based level inside the block's word,
// and whether the position closes its block.
struct BlockLetter {
  char letter;
  int block;
  int pair_index;
  int level;
  bool block_end;
};

inline std::vector<BlockLetter> spell(const PcpInstance& p, const PcpSolution& s, bool w_side,
                                      int depth) {
  std::vector<BlockLetter> out;
  for (int t = 1; static_cast<int>(out.size()) < depth; ++t) {
    const auto idx = solution_indices(s, t);
    const int j = idx[t - 1];
    const std::string& word = w_side ? p.pairs[j - 1].w : p.pairs[j - 1].v;
    for (int l = 1; l <= static_cast<int>(word.size()) && static_cast<int>(out.size()) < depth; ++l)
      out.push_back({word[l - 1], t, j, l, l == static_cast<int>(word.size())});
  }
  return out;
}

// True when both sides spell the same letters for the first depth positions.
inline bool solution_agrees(const PcpInstance& p, const PcpSolution& s, int depth) {
  const auto v = spell(p, s, false, depth), w = spell(p, s, true, depth);
  for (int i = 0; i < depth; ++i)
    if (v[i].letter != w[i].letter) return false;
  return true;
}

}  // namespace fo2e
