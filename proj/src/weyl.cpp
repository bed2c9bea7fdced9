#include "kmc/weyl.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

namespace kmc {

namespace {

using Mat = std::vector<int>;

Mat mat_identity(std::size_t n) {
  Mat m(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1;
  return m;
}

Mat mat_mul(Mat const& x, Mat const& y, std::size_t n) {
  Mat z(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      int v = x[i * n + k];
      if (v == 0) continue;
      for (std::size_t j = 0; j < n; ++j) z[i * n + j] += v * y[k * n + j];
    }
  }
  return z;
}

Mat reflection_matrix(Gcm const& a, std::size_t i) {
  std::size_t n = a.rank();
  Mat m = mat_identity(n);
  for (std::size_t j = 0; j < n; ++j) m[i * n + j] -= a(i, j);
  return m;
}

// Inverse of an integer matrix of determinant +-1 (rank is tiny).
Mat mat_inverse(Mat const& m, std::size_t n) {
  std::vector<std::vector<long long>> aug(n, std::vector<long long>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i * n + j];
    aug[i][n + i] = 1;
  }
  // Unimodular row reduction by the Euclidean algorithm on each column.
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = c + 1; r < n; ++r) {
      while (aug[r][c] != 0) {
        long long q = aug[c][c] / aug[r][c];
        for (std::size_t k = 0; k < 2 * n; ++k) aug[c][k] -= q * aug[r][k];
        std::swap(aug[c], aug[r]);
      }
    }
    if (aug[c][c] < 0) {
      for (auto& v : aug[c]) v = -v;
    }
    if (aug[c][c] != 1) throw Error("Weyl matrix is not unimodular");
  }
  for (std::size_t c = n; c-- > 0;) {
    for (std::size_t r = 0; r < c; ++r) {
      long long q = aug[r][c];
      for (std::size_t k = 0; k < 2 * n; ++k) aug[r][k] -= q * aug[c][k];
    }
  }
  Mat out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = static_cast<int>(aug[i][n + j]);
  }
  return out;
}

}  // namespace

WeylElem WeylElem::identity(Gcm const& a) {
  WeylElem w(a);
  w.m_ = mat_identity(a.rank());
  return w;
}

WeylElem WeylElem::reflection(Gcm const& a, std::size_t i) {
  return from_word(a, {i});
}

WeylElem WeylElem::from_word(Gcm const& a, std::vector<std::size_t> const& word,
                             std::size_t bound) {
  if (word.size() > bound) {
    throw BoundExceeded(fmt::format("word of length {} exceeds bound {}",
                                    word.size(), bound));
  }
  WeylElem w(a);
  std::size_t n = a.rank();
  w.m_ = mat_identity(n);
  for (auto i : word) {
    if (i >= n) throw std::out_of_range("Weyl word letter out of range");
    w.m_ = mat_mul(w.m_, reflection_matrix(a, i), n);
  }
  w.canonicalize();
  return w;
}

void WeylElem::canonicalize() {
  // Greedy left descents: the least i with w^-1(alpha_i) < 0 is the least
  // possible first letter of a reduced word.
  std::size_t n = n_;
  Mat m = m_;
  Mat minv = mat_inverse(m_, n);
  Mat id = mat_identity(n);
  word_.clear();
  while (m != id) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n && pick == n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (minv[k * n + i] < 0) {
          pick = i;
          break;
        }
      }
    }
    if (pick == n) throw Error("Weyl element without a left descent");
    word_.push_back(pick);
    Mat s = reflection_matrix(a_, pick);
    m = mat_mul(s, m, n);
    minv = mat_mul(minv, s, n);
  }
}

Root WeylElem::act(Root const& r) const {
  Root out(n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) out[i] += m_[i * n_ + j] * r[j];
  }
  return out;
}

WeylElem WeylElem::inverse() const {
  WeylElem w(a_);
  w.m_ = mat_inverse(m_, n_);
  w.canonicalize();
  return w;
}

WeylElem WeylElem::operator*(WeylElem const& b) const {
  WeylElem w(a_);
  w.m_ = mat_mul(m_, b.m_, n_);
  w.canonicalize();
  return w;
}

std::string WeylElem::str() const {
  if (word_.empty()) return "e";
  std::string s;
  for (auto i : word_) s += fmt::format("s{}", i + 1);
  return s;
}

std::size_t weyl_length(Gcm const& a, std::vector<std::size_t> const& word,
                        std::size_t bound) {
  return WeylElem::from_word(a, word, bound).length();
}

void weyl_bfs(Gcm const& a, std::size_t max_length,
              std::function<bool(WeylElem const&)> const& visit) {
  std::vector<WeylElem> level{WeylElem::identity(a)};
  std::set<std::vector<int>> seen{level[0].matrix()};
  for (std::size_t len = 0;; ++len) {
    for (auto const& w : level) {
      if (visit(w)) return;
    }
    if (len == max_length) return;
    std::vector<WeylElem> next;
    for (auto const& w : level) {
      for (std::size_t i = 0; i < a.rank(); ++i) {
        if (!is_positive(w.act(simple_root(a.rank(), i)))) continue;
        WeylElem x = w * WeylElem::reflection(a, i);
        if (seen.insert(x.matrix()).second) next.push_back(x);
      }
    }
    if (next.empty()) return;
    std::sort(next.begin(), next.end(),
              [](WeylElem const& x, WeylElem const& y) { return x.word() < y.word(); });
    level = std::move(next);
  }
}

std::vector<WeylElem> weyl_ball(Gcm const& a, std::size_t max_length) {
  std::vector<WeylElem> out;
  weyl_bfs(a, max_length, [&](WeylElem const& w) {
    out.push_back(w);
    return false;
  });
  return out;
}

std::vector<WeylElem> weyl_group(Gcm const& a) {
  if (!is_spherical(a)) throw NotSpherical(fmt::format("{} is not spherical", a.str()));
  return weyl_ball(a, static_cast<std::size_t>(-1));
}

namespace {

bool in_rank2_slice(Gcm const& a, Root const& x, Root const& y) {
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (x[k] != 0 || y[k] != 0) support.push_back(k);
  }
  if (support.size() == 1) return true;
  return support.size() == 2 &&
         coxeter_order(a, support[0], support[1]) != infinite_order;
}

}  // namespace

PrenilpotentAnswer is_prenilpotent(Gcm const& a, Root const& alpha,
                                   Root const& beta, std::size_t bound) {
  PrenilpotentAnswer ans;
  if (beta == negate(alpha)) {
    ans.value = Tri::no;
    return ans;
  }
  bool direct = in_rank2_slice(a, alpha, beta) || is_spherical(a);
  weyl_bfs(a, bound, [&](WeylElem const& w) {
    Root x = w.act(alpha), y = w.act(beta);
    if (!ans.w && is_positive(x) && is_positive(y)) ans.w = w;
    if (!ans.v && is_negative(x) && is_negative(y)) ans.v = w;
    return ans.w && ans.v;
  });
  if ((ans.w && ans.v) || direct) {
    ans.value = Tri::yes;
  } else {
    ans.value = Tri::inconclusive;
  }
  return ans;
}

std::vector<IntervalEntry> interval(Gcm const& a, Root const& alpha,
                                    Root const& beta) {
  auto p = is_prenilpotent(a, alpha, beta);
  if (p.value != Tri::yes) {
    throw NotPrenilpotent(fmt::format("{{{}, {}}} is not certified prenilpotent",
                                      root_str(alpha), root_str(beta)));
  }
  std::vector<IntervalEntry> out;
  constexpr int max_coeff = 6;
  for (int s = 2; s <= 2 * max_coeff; ++s) {
    for (int i = 1; i < s; ++i) {
      int j = s - i;
      if (i > max_coeff || j > max_coeff) continue;
      Root g(alpha.size());
      for (std::size_t k = 0; k < g.size(); ++k) g[k] = i * alpha[k] + j * beta[k];
      if (is_real_root(a, g)) out.push_back({g, i, j});
    }
  }
  return out;
}

Rank2Cover rank2_cover(Gcm const& a, Root const& alpha) {
  if (!is_two_spherical(a)) throw NotTwoSpherical(a.str());
  if (!is_positive(alpha)) throw NotPositive(root_str(alpha));
  if (height(alpha) == 1) throw IsSimple(root_str(alpha));
  if (!is_real_root(a, alpha)) throw UnknownRoot(root_str(alpha) + " is not a real root");
  std::size_t n = a.rank();
  // Minimal-length w with alpha = w(alpha_i): search W by increasing length.
  std::size_t limit = 4 * static_cast<std::size_t>(height(alpha)) + 4;
  std::optional<WeylElem> found;
  std::size_t fi = 0;
  weyl_bfs(a, limit, [&](WeylElem const& w) {
    for (std::size_t i = 0; i < n; ++i) {
      if (w.act(simple_root(n, i)) == alpha) {
        found = w;
        fi = i;
        return true;
      }
    }
    return false;
  });
  if (!found) throw BoundExceeded("rank2_cover: no w found within the length bound");
  WeylElem const& w = *found;
  std::size_t j = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (is_negative(w.act(simple_root(n, k)))) {
      j = k;
      break;
    }
  }
  if (j == n || j == fi) throw Error("rank2_cover: no right descent");
  int product = a(fi, j) * a(j, fi);
  if (product == 0) throw Error("rank2_cover: A1xA1 case contradicts minimality");
  WeylElem sj = WeylElem::reflection(a, j), si = WeylElem::reflection(a, fi);
  WeylElem wsj = w * sj;
  if (is_positive(wsj.act(simple_root(n, fi)))) return {fi, j, wsj};
  if (product != 3) throw Error("rank2_cover: non-G2 branch contradicts minimality");
  return {fi, j, wsj * si};
}

bool validate_rank2_cover(Gcm const& a, Root const& alpha, Rank2Cover const& c) {
  std::size_t n = a.rank();
  if (c.i >= n || c.j >= n || c.i == c.j) return false;
  if (!is_positive(c.v.act(simple_root(n, c.i)))) return false;
  if (!is_positive(c.v.act(simple_root(n, c.j)))) return false;
  if (!is_real_root(a, alpha)) return false;
  Root back = c.v.inverse().act(alpha);
  for (std::size_t k = 0; k < n; ++k) {
    if (k != c.i && k != c.j && back[k] != 0) return false;
  }
  return back[c.i] >= 1 && back[c.j] >= 1;
}

}  // namespace kmc
