#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Finite relational structures. Element ids are strings; the domain is kept
// sorted and elements are addressed by index. E1 and E2 live in `binary` like
// any other relation but must always be present and denote equivalence
// relations on the whole domain.

namespace fo2e {

struct Structure {
  std::vector<std::string> ids;
  std::map<std::string, int> index;
  std::map<std::string, std::vector<char>> unary;   // pred -> n flags
  std::map<std::string, std::vector<char>> binary;  // pred -> n*n flags, [i*n+j]
  std::map<std::string, int> constants;

  int n() const { return static_cast<int>(ids.size()); }

  static Structure make(std::vector<std::string> elem_ids) {
    Structure s;
    std::sort(elem_ids.begin(), elem_ids.end());
    s.ids = std::move(elem_ids);
    for (int i = 0; i < s.n(); ++i) s.index[s.ids[i]] = i;
    s.binary["E1"] = identity_matrix(s.n());
    s.binary["E2"] = identity_matrix(s.n());
    return s;
  }

  static std::vector<char> identity_matrix(int n) {
    std::vector<char> m(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i) * n + i] = 1;
    return m;
  }

  bool un(const std::string& p, int i) const {
    auto it = unary.find(p);
    return it != unary.end() && it->second[i];
  }

  bool bin(const std::string& p, int i, int j) const {
    auto it = binary.find(p);
    return it != binary.end() && it->second[static_cast<std::size_t>(i) * n() + j];
  }

  void set_un(const std::string& p, int i) {
    auto& v = unary[p];
    if (v.empty()) v.assign(n(), 0);
    v[i] = 1;
  }

  void set_bin(const std::string& p, int i, int j) {
    auto& v = binary[p];
    if (v.empty()) v.assign(static_cast<std::size_t>(n()) * n(), 0);
    v[static_cast<std::size_t>(i) * n() + j] = 1;
  }
};

// Reflexive, symmetric, transitive closure in place.
inline void close_equivalence(Structure& s, const std::string& pred) {
  const int n = s.n();
  auto& m = s.binary[pred];
  if (m.empty()) m.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i) * n + i] = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m[static_cast<std::size_t>(i) * n + j]) m[static_cast<std::size_t>(j) * n + i] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (m[static_cast<std::size_t>(i) * n + k])
        for (int j = 0; j < n; ++j)
          if (m[static_cast<std::size_t>(k) * n + j]) m[static_cast<std::size_t>(i) * n + j] = 1;
}

// Names the first violating pair or triple, or returns nullopt.
inline std::optional<std::string> validate_equivalence(const Structure& s, const std::string& pred) {
  auto it = s.binary.find(pred);
  const int n = s.n();
  if (it == s.binary.end() || it->second.empty())
    return pred + " is missing (must be an equivalence relation on the domain)";
  const auto& m = it->second;
  auto at = [&](int i, int j) { return m[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i)
    if (!at(i, i)) return pred + " is not reflexive: missing (" + s.ids[i] + "," + s.ids[i] + ")";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (at(i, j) && !at(j, i))
        return pred + " is not symmetric: has (" + s.ids[i] + "," + s.ids[j] + ") but not (" + s.ids[j] +
               "," + s.ids[i] + ")";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (at(i, j))
        for (int k = 0; k < n; ++k)
          if (at(j, k) && !at(i, k))
            return pred + " is not transitive: has (" + s.ids[i] + "," + s.ids[j] + ") and (" + s.ids[j] +
                   "," + s.ids[k] + ") but not (" + s.ids[i] + "," + s.ids[k] + ")";
  return std::nullopt;
}

inline std::vector<int> eq_class(const Structure& s, const std::string& pred, int i) {
  std::vector<int> out;
  for (int j = 0; j < s.n(); ++j)
    if (s.bin(pred, i, j)) out.push_back(j);
  return out;
}

}  // namespace fo2e
