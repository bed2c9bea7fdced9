#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kmc/roots.hpp"

namespace kmc {

// Square integer matrix, row-major.
struct IntMat {
  int n = 0;
  std::vector<long long> v;

  IntMat() = default;
  explicit IntMat(int dim) : n(dim), v(static_cast<std::size_t>(dim * dim), 0) {}
  static IntMat identity(int dim);
  static IntMat unit(int dim, int i, int j, long long c = 1);  // 1-based i, j
  long long& operator()(int i, int j) { return v[i * n + j]; }
  long long operator()(int i, int j) const { return v[i * n + j]; }
  IntMat operator+(IntMat const& b) const;
  IntMat operator-(IntMat const& b) const;
  IntMat operator*(IntMat const& b) const;
  IntMat scaled(long long c) const;
  IntMat transpose() const;
  bool is_zero() const;
  bool operator==(IntMat const&) const = default;
};

IntMat bracket(IntMat const& x, IntMat const& y);

enum class LieType { A1, A1xA1, A2, A3, B2, G2 };

std::string lie_type_name(LieType t);

// Integral Chevalley basis of a split simple (or A1xA1) Lie algebra inside a
// faithful representation: SL_n natural, Sp4 natural, G2 on its 7-dim module.
struct LieModel {
  LieType type{};
  Gcm gcm;
  int dim = 0;
  std::vector<Root> roots;  // finite_root_system order
  std::vector<IntMat> e;    // e_gamma; e_{-gamma} = -f_gamma
  std::vector<IntMat> e2;   // e_gamma^2 / 2
  std::vector<std::vector<int>> h;  // diagonal of [E_i, F_i] per simple i
  std::optional<IntMat> form;       // g^T Q g = Q on the group

  std::size_t root_index(Root const& r) const;
  std::size_t simple_index(std::size_t i, int sign) const;
};

LieModel const& lie_model(LieType t);

struct ModelMatch {
  LieType type{};
  // perm[k]: model node playing the role of GCM node k.
  std::vector<std::size_t> perm;
};

// Identifies spherical GCMs of rank <= 3 realized here (up to node order).
std::optional<ModelMatch> match_model(Gcm const& a);

// [x_alpha(a), x_beta(b)] = prod x_{i alpha + j beta}(c a^i b^j), the product
// ordered by i + j then i; [g, h] = g h g^-1 h^-1.
struct CommutatorTerm {
  std::size_t root = 0;  // model root index
  int i = 0;
  int j = 0;
  long long c = 0;
};

struct Rank2Constants {
  LieType type{};
  std::map<std::pair<std::size_t, std::size_t>, std::vector<CommutatorTerm>> table;
};

Rank2Constants const& rank2_constants(LieType t);

}  // namespace kmc
