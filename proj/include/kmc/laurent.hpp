#pragma once

#include <map>
#include <string>
#include <vector>

#include "kmc/chevalley.hpp"
#include "kmc/presentation.hpp"

namespace kmc {

// Exponent -> nonzero coefficient code.
using LaurentPoly = std::map<int, Code>;

std::string laurent_str(LaurentPoly const& p, Ring const& ring);

// Square matrix over R[t, t^-1] for a finite ring R.
class LaurentMatrix {
 public:
  LaurentMatrix() = default;
  LaurentMatrix(RingPtr ring, int n);
  static LaurentMatrix identity(RingPtr ring, int n);
  // c * t^m * x, entrywise
  static LaurentMatrix monomial(Mat const& x, RingPtr ring, Code c = 1, int m = 0);

  RingPtr const& ring() const { return ring_; }
  int dim() const { return n_; }
  LaurentPoly const& operator()(int i, int j) const { return e_[i * n_ + j]; }
  void add_term(int i, int j, int exp, Code c);

  LaurentMatrix operator+(LaurentMatrix const& b) const;
  LaurentMatrix operator*(LaurentMatrix const& b) const;
  bool operator==(LaurentMatrix const& b) const { return e_ == b.e_; }

  LaurentPoly det() const;
  // Adjugate; the inverse when det() = 1.
  LaurentMatrix adjugate() const;
  bool is_constant() const;
  bool is_diagonal() const;
  std::string str() const;

 private:
  RingPtr ring_;
  int n_ = 0;
  std::vector<LaurentPoly> e_;
};

// Highest root of an irreducible spherical GCM.
Root highest_root(Gcm const& abar);

// The extended matrix of abar; node 0 is alpha_0 = delta - theta and node
// k + 1 is node k of abar.
Gcm extended_gcm(Gcm const& abar);

// Images of the extended-GCM root groups in G_abar(R[t, t^-1]).
class LoopEmbedding {
 public:
  LoopEmbedding(Gcm const& abar, RingPtr ring);

  Gcm const& extended() const { return ext_; }
  Realization const& finite() const { return real_; }
  Root const& theta() const { return theta_; }

  // x_gamma(a t^m) for a root gamma of abar
  LaurentMatrix x_bar(Root const& gamma, Code a, int m = 0) const;
  // n_gamma(r t^m) = x_gamma(r t^m) x_-gamma(r^-1 t^-m) x_gamma(r t^m)
  LaurentMatrix n_bar(Root const& gamma, Code r, int m = 0) const;
  // h_gamma(r t^m) = n_gamma(1)^-1 n_gamma(r^-1 t^-m)
  LaurentMatrix h_bar(Root const& gamma, Code r, int m = 0) const;

  // Image of x_{sign alpha_node}(a) for node in the extended index set.
  LaurentMatrix image(std::size_t node, int sign, Code a) const;
  LaurentMatrix s_tilde(std::size_t node, Code r) const;
  // r^{h_node} = s_tilde(node, 1)^-1 s_tilde(node, r^-1)
  LaurentMatrix torus(std::size_t node, Code r) const;

 private:
  Gcm abar_, ext_;
  Realization real_;
  Root theta_;
};

LaurentMatrix affine_loop_embedding(Gcm const& abar, RingPtr const& ring, std::size_t node,
                                    int sign, Code a);

struct LoopCheck {
  std::size_t relators = 0;
  std::size_t identities = 0;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  bool ok() const { return failures.empty(); }
};

// Evaluates every relator of the Curtis-Tits presentation of the extended
// GCM on the loop images, and the identities s_0(r) = n_{-theta}(rt),
// r^{h_0} = h_{-theta}(r).
LoopCheck verify_loop_embedding(Gcm const& abar, RingPtr const& ring);

}  // namespace kmc
