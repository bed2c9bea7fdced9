#include "kmc/roots.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include <fmt/format.h>

namespace kmc {

Gcm::Gcm(std::vector<std::vector<int>> rows) : a(std::move(rows)) {
  std::size_t n = a.size();
  if (n == 0) throw ParseError("GCM must have rank >= 1");
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw ParseError("GCM must be square");
    if (a[i][i] != 2) throw ParseError("GCM diagonal entries must be 2");
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (a[i][j] > 0) throw ParseError("GCM off-diagonal entries must be <= 0");
      if ((a[i][j] == 0) != (a[j][i] == 0)) {
        throw ParseError("GCM must satisfy a_ij = 0 iff a_ji = 0");
      }
    }
  }
}

namespace {

std::map<std::string, std::vector<std::vector<int>>> const& named_gcms() {
  static std::map<std::string, std::vector<std::vector<int>>> const m{
      {"A1", {{2}}},
      {"A2", {{2, -1}, {-1, 2}}},
      {"A3", {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}},
      {"B2", {{2, -1}, {-2, 2}}},
      {"C2", {{2, -2}, {-1, 2}}},
      {"G2", {{2, -1}, {-3, 2}}},
      {"A1xA1", {{2, 0}, {0, 2}}},
      {"A1~", {{2, -2}, {-2, 2}}},
      {"A2~", {{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}},
      {"C2~", {{2, -1, 0}, {-2, 2, -2}, {0, -1, 2}}},
      {"G2~", {{2, -1, 0}, {-1, 2, -1}, {0, -3, 2}}},
  };
  return m;
}

}  // namespace

Gcm Gcm::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  auto const& named = named_gcms();
  if (auto it = named.find(s); it != named.end()) return Gcm(it->second);
  std::vector<std::vector<int>> rows;
  std::size_t pos = 0;
  auto fail = [&] {
    throw ParseError(fmt::format("cannot parse GCM literal '{}'", text));
  };
  auto expect = [&](char c) {
    if (pos >= s.size() || s[pos] != c) fail();
    ++pos;
  };
  expect('[');
  while (true) {
    expect('[');
    std::vector<int> row;
    while (true) {
      std::size_t start = pos;
      if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start])))) fail();
      row.push_back(std::stoi(s.substr(start, pos - start)));
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        continue;
      }
      break;
    }
    expect(']');
    rows.push_back(row);
    if (pos < s.size() && s[pos] == ',') {
      ++pos;
      continue;
    }
    break;
  }
  expect(']');
  if (pos != s.size()) fail();
  return Gcm(rows);
}

Gcm Gcm::restrict(std::vector<std::size_t> const& nodes) const {
  std::vector<std::vector<int>> rows;
  for (auto i : nodes) {
    std::vector<int> row;
    for (auto j : nodes) row.push_back(a[i][j]);
    rows.push_back(row);
  }
  return Gcm(rows);
}

std::string Gcm::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += "[";
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      if (j) s += ",";
      s += std::to_string(a[i][j]);
    }
    s += "]";
  }
  return s + "]";
}

Root simple_root(std::size_t n, std::size_t i) {
  Root r(n, 0);
  r[i] = 1;
  return r;
}

int height(Root const& r) {
  int h = 0;
  for (int c : r) h += c;
  return h;
}

bool is_positive(Root const& r) {
  bool any = false;
  for (int c : r) {
    if (c < 0) return false;
    any |= c > 0;
  }
  return any;
}

bool is_negative(Root const& r) { return is_positive(negate(r)); }

Root negate(Root r) {
  for (int& c : r) c = -c;
  return r;
}

std::string root_str(Root const& r) {
  std::string s = "(";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(r[i]);
  }
  return s + ")";
}

namespace {

int pairing(Gcm const& a, std::size_t k, Root const& r) {
  int p = 0;
  for (std::size_t j = 0; j < r.size(); ++j) p += r[j] * a(k, j);
  return p;
}

std::vector<Root> closure(Gcm const& a, int max_height, std::size_t max_count) {
  std::size_t n = a.rank();
  std::set<Root> seen;
  std::vector<Root> queue;
  for (std::size_t i = 0; i < n; ++i) {
    for (Root r : {simple_root(n, i), negate(simple_root(n, i))}) {
      if (seen.insert(r).second) queue.push_back(r);
    }
  }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    for (std::size_t i = 0; i < n; ++i) {
      Root r = simple_reflection(a, i, queue[q]);
      if (max_height > 0 && std::abs(height(r)) > max_height) continue;
      if (seen.insert(r).second) {
        queue.push_back(r);
        if (seen.size() > max_count) return {};
      }
    }
  }
  return {seen.begin(), seen.end()};
}

void sort_roots(std::vector<Root>& roots) {
  std::sort(roots.begin(), roots.end(), [](Root const& x, Root const& y) {
    int hx = std::abs(height(x)), hy = std::abs(height(y));
    if (hx != hy) return hx < hy;
    bool px = is_positive(x), py = is_positive(y);
    if (px != py) return px;
    return px ? x > y : x < y;
  });
}

}  // namespace

Root simple_reflection(Gcm const& a, std::size_t i, Root const& r) {
  Root out = r;
  out[i] -= pairing(a, i, r);
  return out;
}

bool is_real_root(Gcm const& a, Root const& r) {
  Root g = is_negative(r) ? negate(r) : r;
  if (!is_positive(g)) return false;
  while (height(g) > 1) {
    bool moved = false;
    for (std::size_t k = 0; k < a.rank(); ++k) {
      if (pairing(a, k, g) > 0) {
        g = simple_reflection(a, k, g);
        moved = true;
        break;
      }
    }
    if (!moved || !is_positive(g)) return false;
  }
  return true;
}

std::vector<Root> real_roots(Gcm const& a, int h) {
  if (h < 1) throw std::invalid_argument("real_roots: height bound must be >= 1");
  auto slice = [&](int bound) {
    std::vector<Root> out;
    for (auto& r : closure(a, bound, static_cast<std::size_t>(-1))) {
      if (std::abs(height(r)) <= h) out.push_back(r);
    }
    return out;
  };
  auto roots = slice(2 * h);
  if (slice(2 * h + 2) != roots) {
    throw Error("real_roots: closure margin did not reach a fixed point");
  }
  sort_roots(roots);
  return roots;
}

int coxeter_order(Gcm const& a, std::size_t i, std::size_t j) {
  if (i == j) throw std::invalid_argument("coxeter_order needs i != j");
  switch (a(i, j) * a(j, i)) {
    case 0: return 2;
    case 1: return 3;
    case 2: return 4;
    case 3: return 6;
    default: return infinite_order;
  }
}

bool is_two_spherical(Gcm const& a) {
  for (std::size_t i = 0; i < a.rank(); ++i) {
    for (std::size_t j = i + 1; j < a.rank(); ++j) {
      if (coxeter_order(a, i, j) == infinite_order) return false;
    }
  }
  return true;
}

bool is_spherical(Gcm const& a) { return !closure(a, 0, 2000).empty(); }

std::vector<Root> finite_root_system(Gcm const& a) {
  auto roots = closure(a, 0, 2000);
  if (roots.empty()) throw NotSpherical(fmt::format("{} is not spherical", a.str()));
  sort_roots(roots);
  return roots;
}

}  // namespace kmc
