#include "kmc/lie.hpp"
#include "kmc/weyl.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include <fmt/format.h>

namespace kmc {

IntMat IntMat::identity(int dim) {
  IntMat m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

IntMat IntMat::unit(int dim, int i, int j, long long c) {
  IntMat m(dim);
  m(i - 1, j - 1) = c;
  return m;
}

IntMat IntMat::operator+(IntMat const& b) const {
  IntMat m = *this;
  for (std::size_t k = 0; k < v.size(); ++k) m.v[k] += b.v[k];
  return m;
}

IntMat IntMat::operator-(IntMat const& b) const {
  IntMat m = *this;
  for (std::size_t k = 0; k < v.size(); ++k) m.v[k] -= b.v[k];
  return m;
}

IntMat IntMat::operator*(IntMat const& b) const {
  IntMat m(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      long long x = (*this)(i, k);
      if (x == 0) continue;
      for (int j = 0; j < n; ++j) m(i, j) += x * b(k, j);
    }
  }
  return m;
}

IntMat IntMat::scaled(long long c) const {
  IntMat m = *this;
  for (auto& x : m.v) x *= c;
  return m;
}

IntMat IntMat::transpose() const {
  IntMat m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(j, i) = (*this)(i, j);
  }
  return m;
}

bool IntMat::is_zero() const {
  return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
}

IntMat bracket(IntMat const& x, IntMat const& y) { return x * y - y * x; }

std::string lie_type_name(LieType t) {
  switch (t) {
    case LieType::A1: return "A1";
    case LieType::A1xA1: return "A1xA1";
    case LieType::A2: return "A2";
    case LieType::A3: return "A3";
    case LieType::B2: return "B2";
    case LieType::G2: return "G2";
  }
  return "?";
}

std::size_t LieModel::root_index(Root const& r) const {
  auto it = std::find(roots.begin(), roots.end(), r);
  if (it == roots.end()) {
    throw UnknownRoot(fmt::format("{} is not a root of {}", root_str(r),
                                  lie_type_name(type)));
  }
  return static_cast<std::size_t>(it - roots.begin());
}

std::size_t LieModel::simple_index(std::size_t i, int sign) const {
  Root r = simple_root(gcm.rank(), i);
  return root_index(sign > 0 ? r : negate(r));
}

namespace {

IntMat exact_div(IntMat const& m, long long d, char const* what) {
  IntMat out(m.n);
  for (std::size_t k = 0; k < m.v.size(); ++k) {
    if (m.v[k] % d != 0) throw Error(fmt::format("non-integral {}", what));
    out.v[k] = m.v[k] / d;
  }
  return out;
}

LieModel build_model(LieType type) {
  LieModel m;
  m.type = type;
  std::vector<IntMat> E, F;
  auto u = [&](int i, int j) { return IntMat::unit(m.dim, i, j); };
  switch (type) {
    case LieType::A1:
      m.gcm = Gcm::parse("A1");
      m.dim = 2;
      E = {u(1, 2)};
      F = {u(2, 1)};
      break;
    case LieType::A1xA1:
      m.gcm = Gcm::parse("A1xA1");
      m.dim = 4;
      E = {u(1, 2), u(3, 4)};
      F = {u(2, 1), u(4, 3)};
      break;
    case LieType::A2:
      m.gcm = Gcm::parse("A2");
      m.dim = 3;
      E = {u(1, 2), u(2, 3)};
      F = {u(2, 1), u(3, 2)};
      break;
    case LieType::A3:
      m.gcm = Gcm::parse("A3");
      m.dim = 4;
      E = {u(1, 2), u(2, 3), u(3, 4)};
      F = {u(2, 1), u(3, 2), u(4, 3)};
      break;
    case LieType::B2: {
      m.gcm = Gcm::parse("B2");
      m.dim = 4;
      E = {u(2, 3), u(1, 2) - u(3, 4)};
      F = {u(3, 2), u(2, 1) - u(4, 3)};
      IntMat q(4);
      q(0, 3) = -1;
      q(1, 2) = -1;
      q(2, 1) = 1;
      q(3, 0) = 1;
      m.form = q;
      break;
    }
    case LieType::G2: {
      // Basis weights a1+2a2, a1+a2, a2, 0, -a2, -a1-a2, -a1-2a2.
      m.gcm = Gcm::parse("G2");
      m.dim = 7;
      E = {u(5, 6) + u(2, 3), u(1, 2) + u(3, 4) + u(4, 5).scaled(2) + u(6, 7)};
      F = {u(6, 5) + u(3, 2), u(2, 1) + u(4, 3).scaled(2) + u(5, 4) + u(7, 6)};
      IntMat q(7);
      int const diag[7] = {2, -2, 2, -1, 2, -2, 2};
      for (int k = 0; k < 7; ++k) q(k, 6 - k) = diag[k];
      m.form = q;
      break;
    }
  }
  std::size_t n = m.gcm.rank();
  for (std::size_t i = 0; i < n; ++i) {
    IntMat h = bracket(E[i], F[i]);
    std::vector<int> d(m.dim);
    for (int a = 0; a < m.dim; ++a) {
      for (int b = 0; b < m.dim; ++b) {
        if (a != b && h(a, b) != 0) throw Error("[E_i, F_i] is not diagonal");
      }
      d[a] = static_cast<int>(h(a, a));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!(bracket(h, E[j]) == E[j].scaled(m.gcm(i, j)))) {
        throw Error("Cartan integers do not match the GCM");
      }
    }
    m.h.push_back(d);
  }
  m.roots = finite_root_system(m.gcm);
  std::vector<IntMat> e(m.roots.size()), f(m.roots.size());
  std::vector<bool> done(m.roots.size(), false);
  auto index = [&](Root const& r) -> std::optional<std::size_t> {
    auto it = std::find(m.roots.begin(), m.roots.end(), r);
    if (it == m.roots.end()) return std::nullopt;
    return static_cast<std::size_t>(it - m.roots.begin());
  };
  // Positive roots come in order of height in m.roots.
  for (std::size_t k = 0; k < m.roots.size(); ++k) {
    Root const& g = m.roots[k];
    if (!is_positive(g)) continue;
    if (height(g) == 1) {
      std::size_t i = static_cast<std::size_t>(std::find(g.begin(), g.end(), 1) - g.begin());
      e[k] = E[i];
      f[k] = F[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        Root b = g;
        b[i] -= 1;
        auto bi = index(b);
        if (!bi || !is_positive(b)) continue;
        int p = 0;
        for (Root c = b;; ++p) {
          c[i] -= 1;
          if (!index(c)) break;
        }
        e[k] = exact_div(bracket(E[i], e[*bi]), p + 1, "root vector");
        f[k] = exact_div(bracket(f[*bi], F[i]), p + 1, "root vector");
        break;
      }
    }
    IntMat hh = bracket(e[k], f[k]);
    IntMat he = bracket(hh, e[k]);
    if (he == e[k].scaled(-2)) {
      f[k] = f[k].scaled(-1);
    } else if (!(he == e[k].scaled(2))) {
      throw Error("root vectors do not form an sl2-triple");
    }
    done[k] = true;
  }
  m.e.resize(m.roots.size());
  for (std::size_t k = 0; k < m.roots.size(); ++k) {
    if (done[k]) {
      m.e[k] = e[k];
    } else {
      m.e[k] = f[*index(negate(m.roots[k]))].scaled(-1);
    }
  }
  for (auto const& x : m.e) {
    IntMat sq = x * x;
    m.e2.push_back(exact_div(sq, 2, "e^2/2"));
    if (!(sq * x).is_zero()) throw Error("root vector with e^3 != 0");
    if (m.form) {
      IntMat const& q = *m.form;
      if (!(x.transpose() * q + q * x).is_zero()) {
        throw Error("root vector does not preserve the invariant form");
      }
    }
  }
  return m;
}

}  // namespace

LieModel const& lie_model(LieType t) {
  static std::mutex mu;
  static std::map<LieType, LieModel> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(t);
  if (it == cache.end()) it = cache.emplace(t, build_model(t)).first;
  return it->second;
}

std::optional<ModelMatch> match_model(Gcm const& a) {
  std::vector<LieType> candidates;
  switch (a.rank()) {
    case 1: candidates = {LieType::A1}; break;
    case 2: candidates = {LieType::A1xA1, LieType::A2, LieType::B2, LieType::G2}; break;
    case 3: candidates = {LieType::A3}; break;
    default: return std::nullopt;
  }
  for (auto t : candidates) {
    Gcm const& model = lie_model(t).gcm;
    std::vector<std::size_t> perm(a.rank());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      bool ok = true;
      for (std::size_t i = 0; i < a.rank() && ok; ++i) {
        for (std::size_t j = 0; j < a.rank() && ok; ++j) {
          ok = a(i, j) == model(perm[i], perm[j]);
        }
      }
      if (ok) return ModelMatch{t, perm};
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return std::nullopt;
}

namespace {

// Polynomials in two commuting variables a, b with integer coefficients.
using Mono = std::pair<int, int>;
using Poly = std::map<Mono, long long>;

struct PolyMat {
  int n = 0;
  std::vector<Poly> v;
  explicit PolyMat(int dim) : n(dim), v(static_cast<std::size_t>(dim * dim)) {}
  Poly& at(int i, int j) { return v[i * n + j]; }
  Poly const& at(int i, int j) const { return v[i * n + j]; }
};

void add_to(Poly& p, Mono m, long long c) {
  if (c == 0) return;
  auto& x = p[m];
  x += c;
  if (x == 0) p.erase(m);
}

PolyMat pm_mul(PolyMat const& x, PolyMat const& y) {
  PolyMat z(x.n);
  for (int i = 0; i < x.n; ++i) {
    for (int k = 0; k < x.n; ++k) {
      if (x.at(i, k).empty()) continue;
      for (int j = 0; j < x.n; ++j) {
        for (auto const& [m1, c1] : x.at(i, k)) {
          for (auto const& [m2, c2] : y.at(k, j)) {
            add_to(z.at(i, j), {m1.first + m2.first, m1.second + m2.second}, c1 * c2);
          }
        }
      }
    }
  }
  return z;
}

// x_gamma(c a^i b^j) = I + c m e + c^2 m^2 e^2/2.
PolyMat root_element(LieModel const& m, std::size_t root, long long c, Mono mono) {
  PolyMat p(m.dim);
  for (int i = 0; i < m.dim; ++i) add_to(p.at(i, i), {0, 0}, 1);
  for (int i = 0; i < m.dim; ++i) {
    for (int j = 0; j < m.dim; ++j) {
      add_to(p.at(i, j), mono, c * m.e[root](i, j));
      add_to(p.at(i, j), {2 * mono.first, 2 * mono.second}, c * c * m.e2[root](i, j));
    }
  }
  return p;
}

Rank2Constants build_constants(LieType t) {
  LieModel const& m = lie_model(t);
  Rank2Constants out;
  out.type = t;
  for (std::size_t x = 0; x < m.roots.size(); ++x) {
    for (std::size_t y = 0; y < m.roots.size(); ++y) {
      Root const &alpha = m.roots[x], &beta = m.roots[y];
      if (x == y || beta == negate(alpha)) continue;
      PolyMat c = pm_mul(pm_mul(root_element(m, x, 1, {1, 0}), root_element(m, y, 1, {0, 1})),
                         pm_mul(root_element(m, x, -1, {1, 0}), root_element(m, y, -1, {0, 1})));
      std::vector<CommutatorTerm> terms;
      for (auto const& entry : interval(m.gcm, alpha, beta)) {
        std::size_t g = m.root_index(entry.root);
        Mono mono{entry.i, entry.j};
        long long coeff = 0;
        bool have = false;
        for (int i = 0; i < m.dim && !have; ++i) {
          for (int j = 0; j < m.dim && !have; ++j) {
            if (m.e[g](i, j) == 0) continue;
            auto it = c.at(i, j).find(mono);
            long long v = it == c.at(i, j).end() ? 0 : it->second;
            if (v % m.e[g](i, j) != 0) throw Error("commutator coefficient not a multiple");
            coeff = v / m.e[g](i, j);
            have = true;
          }
        }
        for (int i = 0; i < m.dim; ++i) {
          for (int j = 0; j < m.dim; ++j) {
            auto it = c.at(i, j).find(mono);
            long long v = it == c.at(i, j).end() ? 0 : it->second;
            if (v != coeff * m.e[g](i, j)) throw Error("commutator term not in the root space");
          }
        }
        terms.push_back({g, entry.i, entry.j, coeff});
        c = pm_mul(root_element(m, g, -coeff, mono), c);
      }
      for (int i = 0; i < m.dim; ++i) {
        for (int j = 0; j < m.dim; ++j) {
          Poly expect;
          if (i == j) expect[{0, 0}] = 1;
          if (c.at(i, j) != expect) {
            throw Error(fmt::format("commutator of {} and {} not exhausted by the interval",
                                    root_str(alpha), root_str(beta)));
          }
        }
      }
      out.table[{x, y}] = terms;
    }
  }
  return out;
}

}  // namespace

Rank2Constants const& rank2_constants(LieType t) {
  static std::mutex mu;
  static std::map<LieType, Rank2Constants> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(t);
  if (it == cache.end()) it = cache.emplace(t, build_constants(t)).first;
  return it->second;
}

}  // namespace kmc
