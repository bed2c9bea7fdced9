#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kmc/errors.hpp"

namespace kmc {

// Coefficients over the simple roots.
using Root = std::vector<int>;

struct Gcm {
  std::vector<std::vector<int>> a;

  Gcm() = default;
  explicit Gcm(std::vector<std::vector<int>> rows);

  // "[[2,-1],[-1,2]]" or a name: A1, A2, A3, B2, C2, G2, A1xA1, A1~, A2~,
  // C2~, G2~.
  static Gcm parse(std::string_view text);

  std::size_t rank() const { return a.size(); }
  int operator()(std::size_t i, std::size_t j) const { return a[i][j]; }
  Gcm restrict(std::vector<std::size_t> const& nodes) const;
  std::string str() const;
  bool operator==(Gcm const&) const = default;
};

Root simple_root(std::size_t n, std::size_t i);
int height(Root const& r);
bool is_positive(Root const& r);
bool is_negative(Root const& r);
Root negate(Root r);
std::string root_str(Root const& r);

Root simple_reflection(Gcm const& a, std::size_t i, Root const& r);

// Exact membership in W.Pi for symmetrizable A (height descent).
bool is_real_root(Gcm const& a, Root const& r);

// Real roots with |height| <= h, sorted by (|height|, sign, coords).
std::vector<Root> real_roots(Gcm const& a, int h);

inline constexpr int infinite_order = 0;
int coxeter_order(Gcm const& a, std::size_t i, std::size_t j);
bool is_two_spherical(Gcm const& a);
bool is_spherical(Gcm const& a);
// All real roots of a spherical GCM.
std::vector<Root> finite_root_system(Gcm const& a);

}  // namespace kmc
