#include <catch_amalgamated.hpp>

#include <map>

#include "kmc/chevalley.hpp"
#include "kmc/errors.hpp"
#include "kmc/finite_group.hpp"
#include "kmc/lie.hpp"
#include "oracles.hpp"

using namespace kmc;

namespace {

IntMat comm(IntMat const& x, IntMat const& y) { return x * y - y * x; }

bool is_root(LieModel const& m, Root const& r) {
  return std::find(m.roots.begin(), m.roots.end(), r) != m.roots.end();
}

Root add(Root a, Root const& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}

Root sub(Root a, Root const& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
  return a;
}

// x_gamma(a) = 1 + a e + a^2 e^2/2 computed mod n from the integer model
oracle::ModMat x_mod(LieModel const& m, std::size_t k, long long a, long long n) {
  auto r = oracle::ModMat::identity(m.dim, n);
  a = ((a % n) + n) % n;
  for (int i = 0; i < m.dim * m.dim; ++i) {
    long long v = r.v[i] + a * (m.e[k].v[i] % n) + a * a % n * (m.e2[k].v[i] % n);
    r.v[i] = ((v % n) + n) % n;
  }
  return r;
}

oracle::ModMat to_mod(Mat const& x, Ring const& r) {
  std::map<Code, long long> back;
  for (long long k = 0; k < static_cast<long long>(r.size()); ++k) back[r.from_int(k)] = k;
  oracle::ModMat out(x.n, static_cast<long long>(r.size()));
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) out.at(i, j) = back.at(x(i, j));
  return out;
}

long long ipow_mod(long long a, int e, long long n) {
  long long r = 1 % n;
  while (e-- > 0) r = r * a % n;
  return r;
}

std::size_t count_where(Subset const& s) { return count(s); }

}  // namespace

TEST_CASE("Chevalley bases satisfy the structure relations", "[lie]") {
  for (auto t : {LieType::A1, LieType::A1xA1, LieType::A2, LieType::A3, LieType::B2, LieType::G2}) {
    auto const& m = lie_model(t);
    INFO(lie_type_name(t));
    CHECK(m.roots.size() == 2 * oracle::positive_roots(lie_type_name(t)));
    std::size_t r = m.gcm.rank();
    for (std::size_t k = 0; k < m.roots.size(); ++k) {
      auto const& e = m.e[k];
      CHECK(e * e == m.e2[k].scaled(2));
      CHECK((e * e * e).is_zero());
      std::size_t mk = m.root_index(negate(m.roots[k]));
      IntMat h = comm(e, m.e[mk]);
      // e_{-g} = -f_g so [e_g, e_{-g}] = -h_g and [h_g, e_g] = 2 e_g
      CHECK(comm(h, e) == e.scaled(-2));
      for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j)
          if (i != j) CHECK(h(i, j) == 0);
    }
    for (std::size_t i = 0; i < r; ++i) {
      IntMat hi = comm(m.e[m.simple_index(i, -1)], m.e[m.simple_index(i, 1)]);
      for (int v = 0; v < m.dim; ++v) CHECK(hi(v, v) == m.h[i][v]);
      for (std::size_t k = 0; k < m.roots.size(); ++k) {
        long long c = 0;
        for (std::size_t j = 0; j < r; ++j) c += m.roots[k][j] * m.gcm(i, j);
        CHECK(comm(hi, m.e[k]) == m.e[k].scaled(c));
      }
    }
    // [e_a, e_b] = +-(p + 1) e_{a+b}, p maximal with b - p a a root
    for (std::size_t a = 0; a < m.roots.size(); ++a)
      for (std::size_t b = 0; b < m.roots.size(); ++b) {
        Root s = add(m.roots[a], m.roots[b]);
        if (s == Root(r, 0)) continue;
        IntMat c = comm(m.e[a], m.e[b]);
        if (!is_root(m, s)) {
          CHECK(c.is_zero());
          continue;
        }
        long long p = 0;
        Root x = sub(m.roots[b], m.roots[a]);
        while (is_root(m, x)) {
          ++p;
          x = sub(x, m.roots[a]);
        }
        auto const& target = m.e[m.root_index(s)];
        CHECK((c == target.scaled(p + 1) || c == target.scaled(-(p + 1))));
      }
    if (m.form)
      for (auto const& e : m.e) CHECK((e.transpose() * *m.form + *m.form * e).is_zero());
  }
}

TEST_CASE("model matching", "[lie]") {
  CHECK(match_model(Gcm::parse("A2"))->type == LieType::A2);
  CHECK(match_model(Gcm::parse("[[2,-2],[-1,2]]"))->type == LieType::B2);
  CHECK(match_model(Gcm::parse("[[2,-1],[-2,2]]"))->type == LieType::B2);
  CHECK(match_model(Gcm::parse("[[2,-3],[-1,2]]"))->type == LieType::G2);
  CHECK(match_model(Gcm::parse("A1xA1"))->type == LieType::A1xA1);
  CHECK_FALSE(match_model(Gcm::parse("A2~")).has_value());
  CHECK_FALSE(match_model(Gcm::parse("[[2,-1,0],[-1,2,-2],[0,-1,2]]")).has_value());
}

TEST_CASE("root elements agree with the integer model mod n", "[chevalley]") {
  for (auto name : {"A1", "A2", "B2", "[[2,-1],[-2,2]]", "G2"}) {
    for (int n : {4, 5, 9}) {
      auto ring = Ring::modular(n);
      Realization real(Gcm::parse(name), ring);
      auto const& m = real.model();
      INFO(name << " Z/" << n);
      for (std::size_t k = 0; k < real.roots().size(); ++k)
        for (long long a = 0; a < n; ++a) {
          auto x = real.x(k, ring->from_int(a));
          CHECK(to_mod(x, *ring) == x_mod(m, k, a, n));
          CHECK(oracle::det_mod(to_mod(x, *ring)) == 1 % n);
          CHECK(real.preserves_form(x));
          // additive in the parameter
          for (long long b = 0; b < n; ++b)
            CHECK(real.mul(x, real.x(k, ring->from_int(b))) == real.x(k, ring->from_int(a + b)));
        }
    }
  }
}

TEST_CASE("commutator relations hold in the matrix model", "[chevalley]") {
  for (auto t : {LieType::A2, LieType::B2, LieType::G2, LieType::A1xA1}) {
    auto const& m = lie_model(t);
    auto const& tab = rank2_constants(t);
    for (long long n : {4, 7, 9}) {
      for (auto const& [key, terms] : tab.table) {
        auto [a, b] = key;
        for (int k = 1; k + 1 < static_cast<int>(terms.size()); ++k) {
          auto const& u = terms[k - 1];
          auto const& v = terms[k];
          CHECK(std::make_pair(u.i + u.j, u.i) <= std::make_pair(v.i + v.j, v.i));
        }
        for (long long x : {1LL, 2LL, n - 1})
          for (long long y : {1LL, 3LL, n - 2}) {
            auto g = x_mod(m, a, x, n), h = x_mod(m, b, y, n);
            auto lhs = g * h * x_mod(m, a, -x, n) * x_mod(m, b, -y, n);
            auto rhs = oracle::ModMat::identity(m.dim, n);
            for (auto const& term : terms) {
              long long c = term.c % n * ipow_mod(x, term.i, n) % n * ipow_mod(y, term.j, n) % n;
              rhs = rhs * x_mod(m, term.root, c, n);
            }
            INFO(lie_type_name(t) << " " << root_str(m.roots[a]) << "," << root_str(m.roots[b]));
            CHECK(lhs == rhs);
          }
      }
    }
  }
}

TEST_CASE("Weyl representatives permute root groups", "[chevalley]") {
  for (auto name : {"A2", "B2", "G2"}) {
    auto ring = Ring::modular(5);
    Realization real(Gcm::parse(name), ring);
    auto const& a = real.gcm();
    for (std::size_t i = 0; i < a.rank(); ++i) {
      auto s = real.s_tilde(i, ring->one());
      auto si = real.inverse(s);
      CHECK(real.mul(s, si) == real.identity());
      for (std::size_t k = 0; k < real.roots().size(); ++k) {
        auto image = simple_reflection(a, i, real.roots()[k]);
        auto conj = real.mul(real.mul(s, real.x(k, ring->one())), si);
        CHECK((conj == real.x(image, ring->one()) || conj == real.x(image, ring->from_int(-1))));
      }
      for (long long r = 1; r < 5; ++r) {
        auto t = real.torus(i, ring->from_int(r));
        // r^{h_i} = s~(1)^-1 s~(r^-1)
        CHECK(t == real.mul(si, real.s_tilde(i, ring->inv(ring->from_int(r)))));
        CHECK(real.alg().is_diagonal(t));
      }
    }
  }
}

TEST_CASE("group orders", "[chevalley]") {
  struct Case {
    char const* gcm;
    char const* ring;
    std::uint64_t order;
  };
  std::vector<Case> cases{
      {"A1", "GF(3)", oracle::sl_order(2, 3)},
      {"A1", "GF(4)", oracle::sl_order(2, 4)},
      {"A1", "Z/4", oracle::sl2_mod_prime_power(2, 2)},
      {"A1", "Z/9", oracle::sl2_mod_prime_power(3, 2)},
      {"A1", "Z/8", oracle::sl2_mod_prime_power(2, 3)},
      {"A2", "GF(2)", oracle::sl_order(3, 2)},
      {"A2", "GF(3)", oracle::sl_order(3, 3)},
      {"A2", "Z/4", oracle::lift_factor(2, 2, 8) * oracle::sl_order(3, 2)},
      {"A3", "GF(2)", oracle::sl_order(4, 2)},
      {"B2", "GF(3)", oracle::sp4_order(3)},
      {"B2", "Z/4", oracle::lift_factor(2, 2, 10) * oracle::sp4_order(2)},
      {"G2", "GF(2)", oracle::g2_order(2)},
      {"A1xA1", "GF(3)", oracle::sl_order(2, 3) * oracle::sl_order(2, 3)},
  };
  for (auto const& c : cases) {
    ChevalleyGroup g(Gcm::parse(c.gcm), Ring::parse(c.ring));
    INFO(c.gcm << " " << c.ring);
    CHECK(g.order() == c.order);
  }
  CHECK_THROWS_AS(ChevalleyGroup(Gcm::parse("A2"), Ring::parse("GF(3)"), 1000), CapExceeded);
}

TEST_CASE("standard subgroups over fields", "[chevalley]") {
  for (auto [name, q] : std::vector<std::pair<char const*, int>>{{"A2", 3}, {"B2", 3}, {"A3", 2}, {"G2", 2}}) {
    ChevalleyGroup g(Gcm::parse(name), Ring::galois(q));
    std::size_t N = oracle::positive_roots(name);
    std::size_t r = g.gcm().rank();
    auto uq = oracle::ipow(q, static_cast<unsigned>(N));
    auto tq = oracle::ipow(q - 1, static_cast<unsigned>(r));
    INFO(name);
    CHECK(count(g.unipotent(1)) == uq);
    CHECK(count(g.unipotent(-1)) == uq);
    CHECK(count(g.torus()) == tq);
    CHECK(count(g.borel(1)) == uq * tq);
    CHECK(count(intersect(g.borel(1), g.borel(-1))) == tq);
    CHECK(count_where(g.big_cell()) == uq * uq * tq);
    // Birkhoff cells: |U- cap w U- w^-1| = q^{N - l(w)}
    auto const& bt = g.birkhoff_table();
    std::vector<std::size_t> cell(g.weyl().size(), 0);
    for (auto w : bt) ++cell[w];
    for (std::size_t w = 0; w < cell.size(); ++w)
      CHECK(cell[w] == oracle::ipow(q, static_cast<unsigned>(N - g.weyl()[w].length())) * tq * uq);
    // parabolics: |P_J| = |B| sum_{w in W_J} q^l(w)
    for (std::size_t i = 0; i < r; ++i)
      CHECK(count(g.parabolic({i}, 1)) == uq * tq * (1 + static_cast<std::uint64_t>(q)));
  }
}

TEST_CASE("Birkhoff factorization recomposes", "[chevalley]") {
  for (auto name : {"A2", "B2"}) {
    ChevalleyGroup g(Gcm::parse(name), Ring::galois(3));
    auto const& real = g.real();
    auto const& G = g.group();
    for (std::size_t k = 0; k < G.order(); k += 37) {
      auto f = g.birkhoff(G[k]);
      auto back = real.mul(real.mul(real.mul(f.u_minus, real.w_tilde(f.w)), f.t), f.u_plus);
      CHECK(back == G[k]);
      CHECK(g.unipotent(-1)[G.index_of(f.u_minus)]);
      CHECK(g.unipotent(1)[G.index_of(f.u_plus)]);
      CHECK(g.torus()[G.index_of(f.t)]);
    }
  }
}

TEST_CASE("Bruhat normal forms", "[chevalley]") {
  for (auto [name, ring] : std::vector<std::pair<char const*, char const*>>{
           {"A1", "GF(3)"}, {"A2", "GF(2)"}, {"A2", "GF(3)"}, {"B2", "GF(2)"}}) {
    ChevalleyGroup g(Gcm::parse(name), Ring::parse(ring));
    auto c = g.normal_form_census();
    INFO(name << " " << ring);
    CHECK(c.products == g.order());
    CHECK(c.distinct == g.order());
    CHECK(c.formula == g.order());
    auto const& real = g.real();
    for (std::size_t k = 0; k < g.order(); k += 11) {
      auto nf = g.bruhat_normal_form(g.group()[k]);
      Mat m = real.identity();
      for (auto const& y : nf.reps) m = real.mul(m, y);
      CHECK(real.mul(m, nf.b) == g.group()[k]);
      CHECK(g.borel(1)[g.group().index_of(nf.b)]);
      CHECK(weyl_length(g.gcm(), nf.word) == nf.word.size());
    }
  }
}

TEST_CASE("kernel of reduction", "[chevalley]") {
  struct Case {
    char const* gcm;
    char const* ring;
    std::uint64_t size;
  };
  for (auto const& c : std::vector<Case>{{"A1", "Z/4", oracle::lift_factor(2, 2, 3)},
                                         {"A1", "Z/9", oracle::lift_factor(3, 2, 3)},
                                         {"A1", "Z/8", oracle::lift_factor(2, 3, 3)},
                                         {"A2", "Z/4", oracle::lift_factor(2, 2, 8)},
                                         {"A1", "GF(3)[t]/(t^2)", oracle::lift_factor(3, 2, 3)},
                                         {"A2", "GF(3)", 1}}) {
    ChevalleyGroup g(Gcm::parse(c.gcm), Ring::parse(c.ring));
    auto k = g.kernel_of_reduction();
    INFO(c.gcm << " " << c.ring);
    CHECK(count(k) == c.size);
    auto const& target = g.locality_data().residue_field;
    MatAlgebra small(target, g.real().dim());
    for (auto idx : members(k)) CHECK(g.project(g.group()[idx], small) == small.identity());
  }
}

TEST_CASE("non-local rings are rejected", "[chevalley]") {
  ChevalleyGroup g(Gcm::parse("A1"), Ring::parse("Z/6"));
  CHECK(g.order() == oracle::sl_order(2, 2) * oracle::sl_order(2, 3));
  CHECK_THROWS_AS(g.kernel_of_reduction(), NotLocal);
  CHECK_THROWS_AS(Realization(Gcm::parse("A2~"), Ring::parse("GF(2)")), NotSupported);
}
