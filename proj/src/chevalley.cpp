#include "kmc/chevalley.hpp"

#include <algorithm>
#include <numeric>
#include <string_view>

#include <fmt/format.h>

namespace kmc {

std::size_t MatHash::operator()(Mat const& m) const {
  std::string_view bytes(reinterpret_cast<char const*>(m.a.data()),
                         static_cast<std::size_t>(m.n) * m.n);
  return std::hash<std::string_view>{}(bytes);
}

MatAlgebra::MatAlgebra(RingPtr ring, int dim) : ring_(std::move(ring)), dim_(dim) {
  if (!ring_->is_finite() || ring_->size() > max_matrix_ring) {
    throw NotSupported(fmt::format("matrix groups need a finite ring of at most {} elements",
                                   max_matrix_ring));
  }
  if (dim < 1 || dim > max_mat_dim) throw NotSupported("matrix dimension out of range");
  q_ = ring_->size();
  add_.resize(q_ * q_);
  mul_.resize(q_ * q_);
  neg_.resize(q_);
  for (Code a = 0; a < q_; ++a) {
    neg_[a] = static_cast<std::uint8_t>(ring_->neg(a));
    for (Code b = 0; b < q_; ++b) {
      add_[a * q_ + b] = static_cast<std::uint8_t>(ring_->add(a, b));
      mul_[a * q_ + b] = static_cast<std::uint8_t>(ring_->mul(a, b));
    }
  }
}

Mat MatAlgebra::zero() const {
  Mat m;
  m.n = static_cast<std::uint8_t>(dim_);
  return m;
}

Mat MatAlgebra::identity() const {
  Mat m = zero();
  for (int i = 0; i < dim_; ++i) m.set(i, i, ring_->one());
  return m;
}

Mat MatAlgebra::mul(Mat const& x, Mat const& y) const {
  Mat z = zero();
  int n = dim_;
  std::uint8_t const* ad = add_.data();
  std::uint8_t const* mu = mul_.data();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::size_t acc = 0;
      for (int k = 0; k < n; ++k) {
        std::size_t p = mu[x.a[i * n + k] * q_ + y.a[k * n + j]];
        acc = ad[acc * q_ + p];
      }
      z.a[i * n + j] = static_cast<std::uint8_t>(acc);
    }
  }
  return z;
}

Mat MatAlgebra::add(Mat const& x, Mat const& y) const {
  Mat z = zero();
  for (int k = 0; k < dim_ * dim_; ++k) z.a[k] = add_[x.a[k] * q_ + y.a[k]];
  return z;
}

Mat MatAlgebra::transpose(Mat const& x) const {
  Mat z = zero();
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) z.set(j, i, x(i, j));
  }
  return z;
}

Mat MatAlgebra::from_int(IntMat const& m, Code c) const {
  Mat z = zero();
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      z.set(i, j, mul(ring_->from_int(m(i, j)), c));
    }
  }
  return z;
}

Code MatAlgebra::det_rec(Mat const& x, std::vector<int> const& rows,
                         std::vector<int> const& cols) const {
  if (rows.empty()) return ring_->one();
  if (rows.size() == 1) return x(rows[0], cols[0]);
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  Code acc = 0;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    Code e = x(rows[0], cols[k]);
    if (e == 0) continue;
    std::vector<int> sub_cols;
    for (std::size_t l = 0; l < cols.size(); ++l) {
      if (l != k) sub_cols.push_back(cols[l]);
    }
    Code term = mul(e, det_rec(x, sub_rows, sub_cols));
    acc = add(acc, k % 2 == 0 ? term : neg(term));
  }
  return acc;
}

Code MatAlgebra::det(Mat const& x) const {
  std::vector<int> idx(dim_);
  std::iota(idx.begin(), idx.end(), 0);
  return det_rec(x, idx, idx);
}

Mat MatAlgebra::adjugate(Mat const& x) const {
  Mat z = zero();
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      std::vector<int> rows, cols;
      for (int k = 0; k < dim_; ++k) {
        if (k != j) rows.push_back(k);
        if (k != i) cols.push_back(k);
      }
      Code c = det_rec(x, rows, cols);
      z.set(i, j, (i + j) % 2 == 0 ? c : neg(c));
    }
  }
  return z;
}

std::vector<Code> MatAlgebra::leading_minors(Mat const& x) const {
  std::vector<Code> out;
  for (int k = 1; k <= dim_; ++k) {
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    out.push_back(det_rec(x, idx, idx));
  }
  return out;
}

bool MatAlgebra::is_upper(Mat const& x) const {
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < i; ++j) {
      if (x(i, j) != 0) return false;
    }
  }
  return true;
}

bool MatAlgebra::is_lower(Mat const& x) const { return is_upper(transpose(x)); }

bool MatAlgebra::is_diagonal(Mat const& x) const { return is_upper(x) && is_lower(x); }

Mat MatAlgebra::diagonal_part(Mat const& x) const {
  Mat z = zero();
  for (int i = 0; i < dim_; ++i) z.set(i, i, x(i, i));
  return z;
}

Mat MatAlgebra::map(Mat const& x, std::vector<Code> const& f, MatAlgebra const& target) const {
  Mat z = target.zero();
  for (int k = 0; k < dim_ * dim_; ++k) z.a[k] = static_cast<std::uint8_t>(f[x.a[k]]);
  return z;
}

std::string MatAlgebra::str(Mat const& x) const {
  std::string s = "[";
  for (int i = 0; i < dim_; ++i) {
    s += i ? ",[" : "[";
    for (int j = 0; j < dim_; ++j) {
      if (j) s += ",";
      s += ring_->format(x(i, j));
    }
    s += "]";
  }
  return s + "]";
}

std::vector<Code> additive_generators(Ring const& r) {
  std::vector<Code> gens;
  std::vector<char> span(r.size(), 0);
  span[0] = 1;
  for (Code c : r.elements()) {
    if (span[c]) continue;
    gens.push_back(c);
    std::vector<Code> frontier;
    for (Code s = 0; s < r.size(); ++s) {
      if (span[s]) frontier.push_back(s);
    }
    while (!frontier.empty()) {
      Code s = frontier.back();
      frontier.pop_back();
      for (Code g : gens) {
        Code t = r.add(s, g);
        if (!span[t]) {
          span[t] = 1;
          frontier.push_back(t);
        }
      }
    }
  }
  return gens;
}

namespace {

IntMat int_x(LieModel const& m, std::size_t k, long long r) {
  return IntMat::identity(m.dim) + m.e[k].scaled(r) + m.e2[k].scaled(r * r);
}

IntMat int_inverse(IntMat const& g) {
  IntMat p = g;
  for (int k = 0; k < 48; ++k) {
    IntMat next = p * g;
    if (next == IntMat::identity(g.n)) return p;
    p = next;
  }
  throw Error("integer matrix of unexpected order");
}

}  // namespace

Realization::Realization(Gcm const& a, RingPtr ring) : gcm_(a) {
  auto match = match_model(a);
  if (!match) throw NotSupported("no matrix model for GCM " + a.str());
  model_ = &lie_model(match->type);
  perm_ = match->perm;
  alg_ = MatAlgebra(std::move(ring), model_->dim);
  for (Root const& mr : model_->roots) {
    Root r(a.rank());
    for (std::size_t k = 0; k < a.rank(); ++k) r[k] = mr[perm_[k]];
    roots_.push_back(r);
  }
  for (std::size_t k = 0; k < model_->roots.size(); ++k) {
    e_.push_back(alg_.from_int(model_->e[k]));
    e2_.push_back(alg_.from_int(model_->e2[k]));
  }
  for (std::size_t k = 0; k < model_->roots.size(); ++k) {
    std::size_t minus = model_->root_index(negate(model_->roots[k]));
    if (!(model_->e[minus] == model_->e[k].transpose().scaled(-1))) transpose_mode_ = false;
  }
  if (!transpose_mode_) {
    // Conjugation by t * w0~ with w0 = -1 and t a sign torus element.
    LieModel const& m = *model_;
    std::size_t n = m.gcm.rank();
    auto ws = weyl_group(m.gcm);
    auto longest = *std::max_element(ws.begin(), ws.end(), [](auto const& x, auto const& y) {
      return x.length() < y.length();
    });
    IntMat w0 = IntMat::identity(m.dim);
    for (std::size_t i : longest.word()) {
      std::size_t p = m.simple_index(i, 1), q = m.simple_index(i, -1);
      w0 = w0 * int_x(m, p, 1) * int_x(m, q, 1) * int_x(m, p, 1);
    }
    bool found = false;
    for (unsigned mask = 0; mask < (1u << n) && !found; ++mask) {
      IntMat t = IntMat::identity(m.dim);
      for (int v = 0; v < m.dim; ++v) {
        int ex = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask >> i & 1) ex += m.h[i][v];
        }
        t(v, v) = (ex % 2 == 0) ? 1 : -1;
      }
      IntMat nn = t * w0;
      IntMat ni = int_inverse(nn);
      bool ok = true;
      for (std::size_t k = 0; k < m.roots.size() && ok; ++k) {
        std::size_t minus = m.root_index(negate(m.roots[k]));
        ok = nn * m.e[k] * ni == m.e[minus];
      }
      if (ok) {
        n_ = alg_.from_int(nn);
        n_inv_ = alg_.from_int(ni);
        found = true;
      }
    }
    if (!found) throw Error("no Cartan involution found for " + lie_type_name(m.type));
  }
}

Realization Realization::over(RingPtr other) const { return Realization(gcm_, std::move(other)); }

std::size_t Realization::root_index(Root const& r) const {
  auto it = std::find(roots_.begin(), roots_.end(), r);
  if (it == roots_.end()) {
    throw UnknownRoot(fmt::format("{} is not a root of {}", root_str(r), gcm_.str()));
  }
  return static_cast<std::size_t>(it - roots_.begin());
}

Mat Realization::x(std::size_t k, Code r) const {
  Mat m = alg_.identity();
  Code r2 = alg_.mul(r, r);
  int n = dim();
  for (int i = 0; i < n * n; ++i) {
    Code v = alg_.add(alg_.mul(r, e_[k].a[i]), alg_.mul(r2, e2_[k].a[i]));
    m.a[i] = static_cast<std::uint8_t>(alg_.add(m.a[i], v));
  }
  return m;
}

Mat Realization::x(Root const& gamma, Code r) const { return x(root_index(gamma), r); }

Mat Realization::x_simple(std::size_t i, int sign, Code r) const {
  Root a = simple_root(gcm_.rank(), i);
  return x(sign > 0 ? a : negate(a), r);
}

Mat Realization::s_tilde(std::size_t i, Code r) const {
  Code ri = ring()->inv(r);
  return mul(mul(x_simple(i, 1, r), x_simple(i, -1, ri)), x_simple(i, 1, r));
}

Mat Realization::torus(std::size_t i, Code r) const {
  ring()->inv(r);
  Mat m = alg_.zero();
  auto const& h = model_->h[perm_[i]];
  for (int v = 0; v < dim(); ++v) m.set(v, v, ring()->pow(r, h[v]));
  return m;
}

Mat Realization::w_tilde(WeylElem const& w) const {
  Mat m = identity();
  for (std::size_t i : w.word()) m = mul(m, s_tilde(i, ring()->one()));
  return m;
}

Mat Realization::cartan_involution(Mat const& g) const {
  if (transpose_mode_) return alg_.transpose(inverse(g));
  return mul(mul(n_, g), n_inv_);
}

std::vector<Mat> Realization::generators() const {
  std::vector<Mat> out;
  auto gens = additive_generators(*ring());
  for (std::size_t i = 0; i < gcm_.rank(); ++i) {
    for (int sign : {1, -1}) {
      for (Code r : gens) out.push_back(x_simple(i, sign, r));
    }
  }
  return out;
}

bool Realization::preserves_form(Mat const& g) const {
  if (!model_->form) return true;
  Mat q = alg_.from_int(*model_->form);
  return alg_.mul(alg_.mul(alg_.transpose(g), q), g) == q;
}

}  // namespace kmc
