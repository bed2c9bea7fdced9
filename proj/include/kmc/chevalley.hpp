#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "kmc/lie.hpp"
#include "kmc/ring.hpp"
#include "kmc/weyl.hpp"

namespace kmc {

inline constexpr int max_mat_dim = 7;
inline constexpr std::size_t max_matrix_ring = 256;

// Square matrix over a finite ring of at most 256 elements, entries are codes.
struct Mat {
  std::uint8_t n = 0;
  std::array<std::uint8_t, max_mat_dim * max_mat_dim> a{};

  Code operator()(int i, int j) const { return a[i * n + j]; }
  void set(int i, int j, Code c) { a[i * n + j] = static_cast<std::uint8_t>(c); }
  auto operator<=>(Mat const&) const = default;
};

struct MatHash {
  std::size_t operator()(Mat const& m) const;
};

// Matrix arithmetic of a fixed size over a finite ring.
class MatAlgebra {
 public:
  MatAlgebra() = default;
  MatAlgebra(RingPtr ring, int dim);

  RingPtr const& ring() const { return ring_; }
  int dim() const { return dim_; }
  Mat zero() const;
  Mat identity() const;
  Code add(Code a, Code b) const { return add_[a * q_ + b]; }
  Code mul(Code a, Code b) const { return mul_[a * q_ + b]; }
  Code neg(Code a) const { return neg_[a]; }
  Mat mul(Mat const& x, Mat const& y) const;
  Mat add(Mat const& x, Mat const& y) const;
  Mat transpose(Mat const& x) const;
  // Image of an integer matrix, scaled entrywise by c.
  Mat from_int(IntMat const& m, Code c = 1) const;
  Code det(Mat const& x) const;
  Mat adjugate(Mat const& x) const;
  // Leading principal minors of orders 1..dim.
  std::vector<Code> leading_minors(Mat const& x) const;
  bool is_upper(Mat const& x) const;
  bool is_lower(Mat const& x) const;
  bool is_diagonal(Mat const& x) const;
  Mat diagonal_part(Mat const& x) const;
  // Entrywise image under a ring map given as a code table.
  Mat map(Mat const& x, std::vector<Code> const& f, MatAlgebra const& target) const;
  std::string str(Mat const& x) const;

 private:
  Code det_rec(Mat const& x, std::vector<int> const& rows, std::vector<int> const& cols) const;
  RingPtr ring_;
  int dim_ = 0;
  std::size_t q_ = 0;
  std::vector<std::uint8_t> add_, mul_, neg_;
};

// The matrix model of G^min for a spherical GCM of rank <= 3 (one of A1,
// A1xA1, A2, A3, B2/C2, G2) over a finite ring.
class Realization {
 public:
  Realization() = default;
  Realization(Gcm const& a, RingPtr ring);

  Gcm const& gcm() const { return gcm_; }
  LieModel const& model() const { return *model_; }
  MatAlgebra const& alg() const { return alg_; }
  RingPtr const& ring() const { return alg_.ring(); }
  int dim() const { return alg_.dim(); }
  // Roots in the coordinates of gcm(), in model order.
  std::vector<Root> const& roots() const { return roots_; }
  std::size_t root_index(Root const& r) const;
  Realization over(RingPtr other) const;

  Mat identity() const { return alg_.identity(); }
  Mat mul(Mat const& x, Mat const& y) const { return alg_.mul(x, y); }
  Mat inverse(Mat const& x) const { return alg_.adjugate(x); }
  Mat x(Root const& gamma, Code r) const;
  Mat x(std::size_t root, Code r) const;
  // x_gamma(r) = 1 + r e_gamma + r^2 e2_gamma
  Mat const& e(std::size_t root) const { return e_[root]; }
  Mat const& e2(std::size_t root) const { return e2_[root]; }
  Mat x_simple(std::size_t i, int sign, Code r) const;
  Mat s_tilde(std::size_t i, Code r) const;
  Mat torus(std::size_t i, Code r) const;
  // Product of s_tilde(i, 1) along the canonical reduced word.
  Mat w_tilde(WeylElem const& w) const;
  Mat cartan_involution(Mat const& g) const;
  // x_{+-alpha_i}(r) with r running over an additive generating set.
  std::vector<Mat> generators() const;
  // Does the group preserve the model's invariant form (if any)?
  bool preserves_form(Mat const& g) const;

 private:
  Gcm gcm_;
  LieModel const* model_ = nullptr;
  std::vector<std::size_t> perm_;
  MatAlgebra alg_;
  std::vector<Root> roots_;
  std::vector<Mat> e_, e2_;
  bool transpose_mode_ = true;
  Mat n_, n_inv_;
};

// Additive generators of a finite ring, greedily in code order.
std::vector<Code> additive_generators(Ring const& r);

}  // namespace kmc
