#include <catch_amalgamated.hpp>

#include <map>
#include <numeric>

#include "kmc/errors.hpp"
#include "kmc/laurent.hpp"
#include "kmc/presentation.hpp"
#include "oracles.hpp"

using namespace kmc;

namespace {

// Substitute t = lambda in Z/n.
oracle::ModMat specialize(LaurentMatrix const& m, long long lambda, long long n) {
  long long inv = 0;
  for (long long k = 1; k < n; ++k)
    if (lambda * k % n == 1) inv = k;
  REQUIRE(inv != 0);
  auto const& ring = *m.ring();
  std::map<Code, long long> back;
  for (long long k = 0; k < n; ++k) back[ring.from_int(k)] = k;
  oracle::ModMat out(m.dim(), n);
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) {
      long long v = 0;
      for (auto [e, c] : m(i, j)) {
        long long base = e >= 0 ? lambda : inv;
        long long pw = 1;
        for (int k = 0; k < std::abs(e); ++k) pw = pw * base % n;
        v = (v + back.at(c) * pw) % n;
      }
      out.at(i, j) = v;
    }
  return out;
}

int coxeter_number(char const* type) {
  std::string t = type;
  if (t == "A2") return 3;
  if (t == "A3") return 4;
  if (t == "B2") return 4;
  if (t == "G2") return 6;
  return 0;
}

}  // namespace

TEST_CASE("highest roots", "[loop]") {
  for (auto name : {"A2", "A3", "B2", "G2"}) {
    auto a = Gcm::parse(name);
    auto theta = highest_root(a);
    INFO(name);
    CHECK(is_real_root(a, theta));
    CHECK(height(theta) == coxeter_number(name) - 1);
    for (std::size_t i = 0; i < a.rank(); ++i) {
      auto up = theta;
      ++up[i];
      CHECK_FALSE(is_real_root(a, up));
    }
  }
  CHECK(highest_root(Gcm::parse("A2")) == Root{1, 1});
}

TEST_CASE("extended matrices", "[loop]") {
  CHECK(extended_gcm(Gcm::parse("A2")) == Gcm::parse("A2~"));
  for (auto name : {"A2", "A3", "B2", "G2"}) {
    auto a = Gcm::parse(name);
    auto e = extended_gcm(a);
    auto theta = highest_root(a);
    REQUIRE(e.rank() == a.rank() + 1);
    CHECK(e(0, 0) == 2);
    for (std::size_t k = 0; k < a.rank(); ++k) {
      // alpha_0(h_k) = -theta(h_k)
      int pair = 0;
      for (std::size_t j = 0; j < a.rank(); ++j) pair += theta[j] * a(k, j);
      CHECK(e(k + 1, 0) == -pair);
      for (std::size_t j = 0; j < a.rank(); ++j) CHECK(e(k + 1, j + 1) == a(k, j));
      CHECK((e(0, k + 1) == 0) == (e(k + 1, 0) == 0));
    }
    CHECK(is_two_spherical(e));
    CHECK_FALSE(is_spherical(e));
  }
}

TEST_CASE("Laurent matrix arithmetic", "[loop]") {
  auto ring = Ring::parse("Z/4");
  Realization real(Gcm::parse("A1"), ring);
  auto x = LaurentMatrix::monomial(real.x_simple(0, 1, ring->one()), ring, 1, 0);
  auto id = LaurentMatrix::identity(ring, 2);
  CHECK(x * id == x);
  CHECK(id.det() == LaurentPoly{{0, ring->one()}});
  LaurentMatrix m(ring, 2);
  m.add_term(0, 0, 0, 1);
  m.add_term(1, 1, 0, 1);
  m.add_term(0, 1, 3, 1);   // t^3
  m.add_term(1, 0, -3, 2);  // 2 t^-3
  // det = 1 - 2 = -1
  CHECK(m.det() == LaurentPoly{{0, ring->from_int(-1)}});
  CHECK_FALSE(m.is_constant());
  CHECK(m * m.adjugate() == LaurentMatrix::monomial(real.identity(), ring, ring->from_int(-1)));
  for (long long lam : {1, 3}) {
    auto a = specialize(m, lam, 4), b = specialize(m.adjugate(), lam, 4);
    CHECK(specialize(m * m.adjugate(), lam, 4) == a * b);
  }
}

TEST_CASE("loop images satisfy the extended relations", "[loop][oracle]") {
  for (auto [lit, n] : std::vector<std::pair<char const*, long long>>{{"GF(3)", 3}, {"Z/4", 4}}) {
    auto ring = Ring::parse(lit);
    auto abar = Gcm::parse("A2");
    LoopEmbedding emb(abar, ring);
    auto ct = curtis_tits_presentation(emb.extended(), ring);
    std::vector<LaurentMatrix> images;
    for (auto const& g : ct.flat.gens) {
      std::size_t node = 0;
      int sign = is_positive(g.root) ? 1 : -1;
      for (std::size_t k = 0; k < g.root.size(); ++k)
        if (g.root[k] != 0) node = k;
      images.push_back(emb.image(node, sign, g.value));
    }
    for (long long lam = 1; lam < n; ++lam) {
      if (std::gcd(lam, n) != 1) continue;
      std::vector<oracle::ModMat> spec, inv;
      for (auto const& m : images) {
        spec.push_back(specialize(m, lam, n));
        inv.push_back(specialize(m.adjugate(), lam, n));
      }
      for (auto const& r : ct.flat.pres.relators) {
        auto acc = oracle::ModMat::identity(3, n);
        for (Letter l : r) acc = acc * ((l & 1) ? inv[l / 2] : spec[l / 2]);
        INFO(lit << " t=" << lam << " relator " << ct.flat.pres.word_str(r));
        CHECK(acc == oracle::ModMat::identity(3, n));
      }
    }
    // x_{alpha_0}(a) is x_{-theta}(a t); s_0 and r^{h_0} match their loop forms
    auto theta = emb.theta();
    auto neg = negate(theta);
    for (Code a : ring->elements()) CHECK(emb.image(0, 1, a) == emb.x_bar(neg, a, 1));
    for (Code r : ring->units()) {
      CHECK(emb.s_tilde(0, r) == emb.n_bar(neg, r, 1));
      CHECK(emb.torus(0, r) == emb.h_bar(neg, r, 0));
    }
    auto check = verify_loop_embedding(abar, ring);
    CHECK(check.ok());
    CHECK(check.relators == ct.flat.pres.relators.size());
    CHECK(check.identities > 0);
  }
}

TEST_CASE("every image has determinant one", "[loop]") {
  auto ring = Ring::parse("GF(3)");
  LoopEmbedding emb(Gcm::parse("A2"), ring);
  for (std::size_t node = 0; node < 3; ++node)
    for (int sign : {1, -1})
      for (Code a : ring->elements()) {
        auto m = emb.image(node, sign, a);
        CHECK(m.det() == LaurentPoly{{0, ring->one()}});
        CHECK(oracle::det_mod(specialize(m, 2, 3)) == 1);
      }
}
