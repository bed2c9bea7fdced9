#include "kmc/laurent.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

namespace kmc {

namespace {

void add_into(LaurentPoly& p, int exp, Code c, Ring const& r) {
  if (c == 0) return;
  auto [it, fresh] = p.emplace(exp, c);
  if (fresh) return;
  it->second = r.add(it->second, c);
  if (it->second == 0) p.erase(it);
}

LaurentPoly poly_mul(LaurentPoly const& x, LaurentPoly const& y, Ring const& r) {
  LaurentPoly out;
  for (auto [ex, cx] : x) {
    for (auto [ey, cy] : y) add_into(out, ex + ey, r.mul(cx, cy), r);
  }
  return out;
}

bool connected(Gcm const& a) {
  std::size_t n = a.rank();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      if (!seen[j] && a(i, j) != 0) {
        seen[j] = 1;
        stack.push_back(j);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

}  // namespace

std::string laurent_str(LaurentPoly const& p, Ring const& ring) {
  if (p.empty()) return "0";
  std::string out;
  for (auto [e, c] : p) {
    if (!out.empty()) out += " + ";
    std::string coef = ring.format(c);
    if (e == 0) {
      out += coef;
      continue;
    }
    if (c != ring.one()) out += coef;
    out += e == 1 ? "t" : fmt::format("t^{}", e);
  }
  return out;
}

LaurentMatrix::LaurentMatrix(RingPtr ring, int n)
    : ring_(std::move(ring)), n_(n), e_(static_cast<std::size_t>(n * n)) {}

LaurentMatrix LaurentMatrix::identity(RingPtr ring, int n) {
  LaurentMatrix m(ring, n);
  for (int i = 0; i < n; ++i) m.add_term(i, i, 0, ring->one());
  return m;
}

LaurentMatrix LaurentMatrix::monomial(Mat const& x, RingPtr ring, Code c, int m) {
  LaurentMatrix out(ring, x.n);
  for (int i = 0; i < x.n; ++i) {
    for (int j = 0; j < x.n; ++j) out.add_term(i, j, m, ring->mul(c, x(i, j)));
  }
  return out;
}

void LaurentMatrix::add_term(int i, int j, int exp, Code c) {
  add_into(e_[i * n_ + j], exp, c, *ring_);
}

LaurentMatrix LaurentMatrix::operator+(LaurentMatrix const& b) const {
  LaurentMatrix out = *this;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      for (auto [e, c] : b(i, j)) out.add_term(i, j, e, c);
    }
  }
  return out;
}

LaurentMatrix LaurentMatrix::operator*(LaurentMatrix const& b) const {
  if (n_ != b.n_ || ring_ != b.ring_) throw RingMismatch("Laurent matrix shapes differ");
  Ring const& r = *ring_;
  LaurentMatrix out(ring_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      LaurentPoly const& x = (*this)(i, k);
      if (x.empty()) continue;
      for (int j = 0; j < n_; ++j) {
        for (auto [ex, cx] : x) {
          for (auto [ey, cy] : b(k, j)) add_into(out.e_[i * n_ + j], ex + ey, r.mul(cx, cy), r);
        }
      }
    }
  }
  return out;
}

namespace {

LaurentPoly minor_det(LaurentMatrix const& m, std::vector<int> const& rows,
                      std::vector<int> const& cols) {
  Ring const& r = *m.ring();
  if (rows.size() == 1) return m(rows[0], cols[0]);
  LaurentPoly out;
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    LaurentPoly const& x = m(rows[0], cols[c]);
    if (x.empty()) continue;
    std::vector<int> sub_cols;
    for (std::size_t d = 0; d < cols.size(); ++d) {
      if (d != c) sub_cols.push_back(cols[d]);
    }
    LaurentPoly term = poly_mul(x, minor_det(m, sub_rows, sub_cols), r);
    for (auto [e, v] : term) add_into(out, e, c % 2 ? r.neg(v) : v, r);
  }
  return out;
}

}  // namespace

LaurentPoly LaurentMatrix::det() const {
  std::vector<int> idx(static_cast<std::size_t>(n_));
  std::iota(idx.begin(), idx.end(), 0);
  return minor_det(*this, idx, idx);
}

LaurentMatrix LaurentMatrix::adjugate() const {
  Ring const& r = *ring_;
  LaurentMatrix out(ring_, n_);
  if (n_ == 1) {
    out.add_term(0, 0, 0, r.one());
    return out;
  }
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      std::vector<int> rows, cols;
      for (int k = 0; k < n_; ++k) {
        if (k != j) rows.push_back(k);
        if (k != i) cols.push_back(k);
      }
      for (auto [e, v] : minor_det(*this, rows, cols)) {
        out.add_term(i, j, e, (i + j) % 2 ? r.neg(v) : v);
      }
    }
  }
  return out;
}

bool LaurentMatrix::is_constant() const {
  return std::all_of(e_.begin(), e_.end(), [](LaurentPoly const& p) {
    return p.empty() || (p.size() == 1 && p.begin()->first == 0);
  });
}

bool LaurentMatrix::is_diagonal() const {
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (i != j && !(*this)(i, j).empty()) return false;
    }
  }
  return true;
}

std::string LaurentMatrix::str() const {
  std::string out = "[";
  for (int i = 0; i < n_; ++i) {
    if (i) out += "; ";
    for (int j = 0; j < n_; ++j) {
      if (j) out += ", ";
      out += laurent_str((*this)(i, j), *ring_);
    }
  }
  return out + "]";
}

Root highest_root(Gcm const& abar) {
  auto roots = finite_root_system(abar);
  return *std::max_element(roots.begin(), roots.end(), [](Root const& x, Root const& y) {
    return height(x) < height(y);
  });
}

Gcm extended_gcm(Gcm const& abar) {
  if (!is_spherical(abar)) throw NotSpherical(abar.str() + " is not spherical");
  if (!connected(abar)) throw NotSupported(abar.str() + " is not irreducible");
  std::size_t l = abar.rank();
  // Symmetrizer eps with eps_i a_ij = eps_j a_ji, propagated along edges.
  std::vector<Rational> eps(l, 0);
  eps[0] = 1;
  for (std::size_t pass = 0; pass < l; ++pass) {
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = 0; j < l; ++j) {
        if (eps[i] != 0 && eps[j] == 0 && abar(i, j) != 0) {
          eps[j] = eps[i] * abar(i, j) / abar(j, i);
        }
      }
    }
  }
  Root theta = highest_root(abar);
  // (alpha_i, alpha_j) = eps_i a_ij
  auto form_with_theta = [&](std::size_t j) {
    Rational s = 0;
    for (std::size_t k = 0; k < l; ++k) s += eps[j] * abar(j, k) * theta[k];
    return s;
  };
  Rational tt = 0;
  for (std::size_t k = 0; k < l; ++k) tt += theta[k] * form_with_theta(k);
  std::vector<std::vector<int>> a(l + 1, std::vector<int>(l + 1, 0));
  a[0][0] = 2;
  for (std::size_t j = 0; j < l; ++j) {
    for (std::size_t k = 0; k < l; ++k) a[j + 1][k + 1] = abar(j, k);
    // a_{j0} = <alpha_0, h_j> = -<theta, h_j>
    int s = 0;
    for (std::size_t k = 0; k < l; ++k) s += abar(j, k) * theta[k];
    a[j + 1][0] = -s;
    Rational q = -2 * form_with_theta(j) / tt;
    if (denominator(q) != 1) throw std::logic_error("extended_gcm: non-integral entry");
    a[0][j + 1] = static_cast<int>(numerator(q));
  }
  return Gcm(a);
}

LoopEmbedding::LoopEmbedding(Gcm const& abar, RingPtr ring) : abar_(abar) {
  if (abar.rank() == 1) throw TypeA1("the loop embedding needs a root system not of type A1");
  ext_ = extended_gcm(abar);
  real_ = Realization(abar, std::move(ring));
  theta_ = highest_root(abar);
}

LaurentMatrix LoopEmbedding::x_bar(Root const& gamma, Code a, int m) const {
  std::size_t k = real_.root_index(gamma);
  RingPtr const& ring = real_.ring();
  Code a2 = ring->mul(a, a);
  return LaurentMatrix::identity(ring, real_.dim()) +
         LaurentMatrix::monomial(real_.e(k), ring, a, m) +
         LaurentMatrix::monomial(real_.e2(k), ring, a2, 2 * m);
}

LaurentMatrix LoopEmbedding::n_bar(Root const& gamma, Code r, int m) const {
  Code ri = real_.ring()->inv(r);
  LaurentMatrix x = x_bar(gamma, r, m);
  return x * x_bar(negate(gamma), ri, -m) * x;
}

LaurentMatrix LoopEmbedding::h_bar(Root const& gamma, Code r, int m) const {
  Code ri = real_.ring()->inv(r);
  return n_bar(gamma, real_.ring()->one(), 0).adjugate() * n_bar(gamma, ri, -m);
}

LaurentMatrix LoopEmbedding::image(std::size_t node, int sign, Code a) const {
  if (node > abar_.rank()) throw std::out_of_range("loop embedding: node out of range");
  if (node == 0) {
    return sign > 0 ? x_bar(negate(theta_), a, 1) : x_bar(theta_, a, -1);
  }
  Root r = simple_root(abar_.rank(), node - 1);
  return x_bar(sign > 0 ? r : negate(r), a, 0);
}

LaurentMatrix LoopEmbedding::s_tilde(std::size_t node, Code r) const {
  Code ri = real_.ring()->inv(r);
  LaurentMatrix x = image(node, 1, r);
  return x * image(node, -1, ri) * x;
}

LaurentMatrix LoopEmbedding::torus(std::size_t node, Code r) const {
  Code ri = real_.ring()->inv(r);
  return s_tilde(node, real_.ring()->one()).adjugate() * s_tilde(node, ri);
}

LaurentMatrix affine_loop_embedding(Gcm const& abar, RingPtr const& ring, std::size_t node,
                                    int sign, Code a) {
  return LoopEmbedding(abar, ring).image(node, sign, a);
}

LoopCheck verify_loop_embedding(Gcm const& abar, RingPtr const& ring) {
  LoopEmbedding emb(abar, ring);
  Ring const& r = *ring;
  int d = emb.finite().dim();
  LoopCheck out;
  CurtisTits ct = curtis_tits_presentation(emb.extended(), ring);
  out.warnings = ct.flat.warnings;

  std::vector<LaurentMatrix> images, inverses;
  for (auto const& g : ct.flat.gens) {
    std::size_t node = static_cast<std::size_t>(
        std::find_if(g.root.begin(), g.root.end(), [](int c) { return c != 0; }) - g.root.begin());
    int sign = is_positive(g.root) ? 1 : -1;
    images.push_back(emb.image(node, sign, g.value));
    inverses.push_back(emb.image(node, sign, r.neg(g.value)));
  }
  LaurentMatrix id = LaurentMatrix::identity(ring, d);
  LaurentPoly one{{0, r.one()}};
  for (std::size_t k = 0; k < images.size(); ++k) {
    ++out.identities;
    if (images[k].det() != one || !(images[k] * inverses[k] == id)) {
      out.failures.push_back("image of " + ct.flat.pres.generators[k] + " is not in SL");
    }
  }
  for (auto const& w : ct.flat.pres.relators) {
    ++out.relators;
    LaurentMatrix m = id;
    for (Letter l : w) m = m * ((l & 1) ? inverses[l / 2] : images[l / 2]);
    if (!(m == id)) {
      out.failures.push_back("relator " + ct.flat.pres.word_str(w) + " maps to " + m.str());
    }
  }
  Root mtheta = negate(emb.theta());
  for (Code u : r.units()) {
    ++out.identities;
    if (!(emb.s_tilde(0, u) == emb.n_bar(mtheta, u, 1))) {
      out.failures.push_back(fmt::format("s_0({}) differs from n_-theta({}t)", r.format(u),
                                         r.format(u)));
    }
    ++out.identities;
    LaurentMatrix h0 = emb.torus(0, u);
    LaurentMatrix h = emb.h_bar(mtheta, u, 0);
    if (!(h0 == h) || !h.is_constant() || !h.is_diagonal()) {
      out.failures.push_back(fmt::format("{}^h_0 = {} but h_-theta({}) = {}", r.format(u), h0.str(),
                                         r.format(u), h.str()));
    }
  }
  return out;
}

}  // namespace kmc
