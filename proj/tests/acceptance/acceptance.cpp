// One line per acceptance criterion; exit status 0 iff all pass.

#include <fmt/format.h>

#include <chrono>
#include <functional>
#include <random>
#include <set>

#include "homotopy_oracle.hpp"
#include "kmc/chamber.hpp"
#include "kmc/errors.hpp"
#include "kmc/km_builder.hpp"
#include "kmc/laurent.hpp"
#include "kmc/scenario.hpp"
#include "kmc/todd_coxeter.hpp"
#include "oracles.hpp"
#include "tcs_oracle.hpp"

using namespace kmc;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, std::string const& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

// 1. Todd-Coxeter orders of the local SL2 presentation
Outcome sl2_presentations() {
  Outcome o;
  std::vector<std::pair<char const*, std::uint64_t>> cases{
      {"GF(2)", oracle::sl_order(2, 2)},
      {"GF(3)", oracle::sl_order(2, 3)},
      {"Z/4", oracle::sl2_mod_prime_power(2, 2)},
      {"Z/9", oracle::sl2_mod_prime_power(3, 2)}};
  std::string summary;
  for (auto [lit, order] : cases) {
    auto t0 = Clock::now();
    auto rp = sl2_local_presentation(Ring::parse(lit));
    auto t = todd_coxeter(rp.pres, {});
    double s = since(t0);
    o.require(t.cosets == order, fmt::format("{}: {} cosets, expected {}", lit, t.cosets, order));
    o.require(s < 5.0, fmt::format("{}: {:.1f}s", lit, s));
    summary += fmt::format(" {}={}", lit, t.cosets);
  }
  if (o.pass) o.detail = summary.substr(1);
  return o;
}

// 2. flattened Curtis-Tits presentations against the enumerated groups
Outcome amalgams() {
  Outcome o;
  struct Case {
    char const* gcm;
    char const* ring;
    std::uint64_t order;
  };
  std::vector<Case> cases{{"A2", "GF(2)", oracle::sl_order(3, 2)},
                          {"A2", "GF(3)", oracle::sl_order(3, 3)},
                          {"A2", "Z/4", oracle::lift_factor(2, 2, 8) * oracle::sl_order(3, 2)},
                          {"B2", "GF(3)", oracle::sp4_order(3)}};
  std::string summary;
  for (auto const& c : cases) {
    auto t0 = Clock::now();
    auto v = verify_amalgam(Gcm::parse(c.gcm), Ring::parse(c.ring));
    double s = since(t0);
    auto tag = fmt::format("{}/{}", c.gcm, c.ring);
    o.require(v.iso.group_order == c.order, tag + ": group order");
    o.require(v.iso.presentation_order == c.order, fmt::format("{}: presentation order {}", tag, v.iso.presentation_order));
    o.require(v.iso.iso(), tag + ": " + v.iso.witness);
    o.require(s < 120.0, fmt::format("{}: {:.1f}s", tag, s));
    summary += fmt::format(" {}={}", tag, v.iso.presentation_order);
  }
  if (o.pass) o.detail = summary.substr(1);
  return o;
}

// 3. commutator relations for every prenilpotent pair and every parameter
Outcome commutators() {
  Outcome o;
  auto t0 = Clock::now();
  std::uint64_t checked = 0;
  for (auto gcm : {"A2", "B2", "G2"}) {
    auto a = Gcm::parse(gcm);
    for (auto lit : {"GF(2)", "GF(3)", "GF(4)", "GF(5)", "Z/4", "Z/9"}) {
      auto ring = Ring::parse(lit);
      Realization real(a, ring);
      auto const& model = real.model();
      auto const& table = rank2_constants(model.type).table;
      auto const& roots = real.roots();
      std::size_t nr = roots.size();
      std::size_t q = ring->size();
      std::vector<std::vector<Mat>> x(nr, std::vector<Mat>(q));
      for (std::size_t k = 0; k < nr; ++k)
        for (Code r : ring->elements()) x[k][r] = real.x(k, r);
      for (std::size_t al = 0; al < nr; ++al)
        for (std::size_t be = 0; be < nr; ++be) {
          if (al == be || is_prenilpotent(a, roots[al], roots[be]).value != Tri::yes) continue;
          // coefficient of alpha + beta is +-(p + 1), p the string length below beta
          auto it = table.find({al, be});
          Root sum = roots[al];
          for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += roots[be][k];
          bool sum_root = std::find(roots.begin(), roots.end(), sum) != roots.end();
          if (sum_root) {
            long long p = 0;
            Root down = roots[be];
            for (;;) {
              for (std::size_t k = 0; k < down.size(); ++k) down[k] -= roots[al][k];
              if (std::find(roots.begin(), roots.end(), down) == roots.end()) break;
              ++p;
            }
            bool found = false;
            if (it != table.end())
              for (auto const& t : it->second)
                if (t.i == 1 && t.j == 1) found = std::abs(t.c) == p + 1;
            o.require(found, fmt::format("{}: constant of {} + {}", gcm, root_str(roots[al]), root_str(roots[be])));
          }
          for (Code u : ring->elements())
            for (Code v : ring->elements()) {
              Mat lhs = real.mul(real.mul(x[al][u], x[be][v]), real.mul(x[al][ring->neg(u)], x[be][ring->neg(v)]));
              Mat rhs = real.identity();
              if (it != table.end())
                for (auto const& t : it->second) {
                  Code c = ring->mul(ring->from_int(t.c), ring->mul(ring->pow(u, t.i), ring->pow(v, t.j)));
                  rhs = real.mul(rhs, x[t.root][c]);
                }
              ++checked;
              if (lhs != rhs) {
                o.require(false, fmt::format("{} over {}: [x_{}({}), x_{}({})]", gcm, lit, root_str(roots[al]),
                                             ring->format(u), root_str(roots[be]), ring->format(v)));
              }
            }
        }
    }
  }
  double s = since(t0);
  o.require(s < 60.0, fmt::format("{:.1f}s", s));
  if (o.pass) o.detail = fmt::format("{} relations, 0 failures", checked);
  return o;
}

// 4. ker pi in U-_L B+
Outcome kernels() {
  Outcome o;
  struct Case {
    char const* name;
    char const* gcm;
    char const* ring;
    std::uint64_t kernel;
  };
  std::vector<Case> cases{{"SL2/Z4", "A1", "Z/4", oracle::lift_factor(2, 2, 3)},
                          {"SL3/Z4", "A2", "Z/4", oracle::lift_factor(2, 2, 8)},
                          {"SL2/Z9", "A1", "Z/9", oracle::lift_factor(3, 2, 3)},
                          {"Sp4/Z4", "B2", "Z/4", oracle::lift_factor(2, 2, 10)}};
  std::string summary;
  for (auto const& c : cases) {
    ChevalleyGroup g(Gcm::parse(c.gcm), Ring::parse(c.ring));
    auto v = verify_kernel_containment(g);
    auto k = count(g.kernel_of_reduction());
    o.require(k == c.kernel, fmt::format("{}: kernel {} expected {}", c.name, k, c.kernel));
    o.require(v.pass, fmt::format("{}: {}", c.name, v.witness));
    summary += fmt::format(" {}:{}", c.name, k);
  }
  if (o.pass) o.detail = "kernel elements" + summary;
  return o;
}

// 5. pi^-1(B-_k B+_k) = B-_R B+_R
Outcome opposition_preimages() {
  Outcome o;
  std::string summary;
  for (auto [name, gcm, ring] : std::vector<std::tuple<char const*, char const*, char const*>>{
           {"SL3/Z4", "A2", "Z/4"}, {"SL2/Z9", "A1", "Z/9"}}) {
    ChevalleyGroup g(Gcm::parse(gcm), Ring::parse(ring));
    auto v = verify_opposition_preimage(g);
    o.require(v.pass, fmt::format("{}: {}", name, v.witness));
    // LU criterion as an independent description of the big cell
    auto const& G = g.group();
    for (std::size_t e = 0; e < G.order(); ++e) {
      auto minors = g.alg().leading_minors(G[e]);
      bool lu = std::all_of(minors.begin(), minors.end(), [&](Code c) { return g.ring()->is_unit(c); });
      if (lu != static_cast<bool>(g.big_cell()[e])) {
        o.require(false, fmt::format("{}: big cell disagrees with leading minors", name));
        break;
      }
    }
    summary += fmt::format(" {}:{}", name, count(g.big_cell()));
  }
  if (o.pass) o.detail = "big cell sizes" + summary;
  return o;
}

// 6. twin chamber system axioms and simple connectivity
Outcome twin_systems() {
  Outcome o;
  auto t0 = Clock::now();
  std::string summary;
  for (auto [gcm, ring] : std::vector<std::pair<char const*, char const*>>{
           {"A2", "GF(2)"}, {"A2", "GF(3)"}, {"A1xA1", "GF(3)"}, {"A2", "Z/4"}}) {
    auto tag = fmt::format("{}/{}", gcm, ring);
    auto td = build_twin_datum(Gcm::parse(gcm), Ring::parse(ring));
    auto omega = omega_supplier(td);
    auto m = verify_main_theorem(td.datum, omega);
    for (auto const& v : m.tcs) o.require(v.pass, fmt::format("{}: TCS{} {}", tag, v.axiom, v.detail));
    o.require(m.plus.simply_connected && m.plus.cosets == 1, tag + ": C+");
    o.require(m.minus.simply_connected && m.minus.cosets == 1, tag + ": C-");
    o.require(m.opp.simply_connected && m.opp.cosets == 1, tag + ": Opp");
    o.require(!m.violation, tag + ": theorem violation");
    if (td.datum.plus.size() <= 60) {
      oracle::TcsOracle direct{td.datum};
      o.require(direct.tcs1() && direct.tcs2() && direct.tcs3(), tag + ": direct axiom oracle");
    }
    summary += fmt::format(" {}:{}/{}", tag, td.datum.plus.size(), m.opp_chambers);
  }
  double s = since(t0);
  o.require(s < 300.0, fmt::format("{:.1f}s", s));
  if (o.pass) o.detail = "chambers/Opp" + summary;
  return o;
}

// 7. Bruhat normal forms
Outcome normal_forms() {
  Outcome o;
  std::string summary;
  for (auto [gcm, ring, order] : std::vector<std::tuple<char const*, char const*, std::uint64_t>>{
           {"A1", "GF(3)", oracle::sl_order(2, 3)},
           {"A2", "GF(2)", oracle::sl_order(3, 2)},
           {"A2", "GF(3)", oracle::sl_order(3, 3)}}) {
    ChevalleyGroup g(Gcm::parse(gcm), Ring::parse(ring));
    auto v = verify_normal_form_counts(g);
    auto c = g.normal_form_census();
    auto tag = fmt::format("{}/{}", gcm, ring);
    o.require(v.pass, tag + ": " + v.witness);
    o.require(c.formula == order && c.distinct == order && c.products == order, tag + ": census");
    summary += fmt::format(" {}={}", tag, c.formula);
  }
  if (o.pass) o.detail = summary.substr(1);
  return o;
}

// 8. Bezout factorization over Z_(p)
Outcome bezout() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<long long> num(-1000, 1000), den(1, 1000);
  auto fits = [](Rational const& q) {
    return abs(numerator(q)) <= 1000000 && denominator(q) <= 1000000;
  };
  int matrices = 0, failures = 0;
  while (matrices < 1000) {
    Rational a = Rational(num(rng)) / den(rng), b = Rational(num(rng)) / den(rng);
    Rational c = Rational(num(rng)) / den(rng);
    if (a == 0) continue;
    Rational d = (1 + b * c) / a;
    if (!fits(a) || !fits(b) || !fits(c) || !fits(d)) continue;
    RatMat2 m{{{a, b}, {c, d}}};
    ++matrices;
    for (int p : {2, 3, 5}) {
      auto f = lemma22_decompose(m, p);
      auto const& s = f.s;
      bool ok = s[0][0] * s[1][1] - s[0][1] * s[1][0] == 1 && f.b[1][0] == 0;
      for (auto const& row : s)
        for (auto const& x : row) ok = ok && denominator(x) % p != 0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) ok = ok && s[i][0] * m[0][j] + s[i][1] * m[1][j] == f.b[i][j];
      if (!ok) ++failures;
    }
  }
  o.require(failures == 0, fmt::format("{} failures", failures));
  if (o.pass) o.detail = fmt::format("{} matrices x p in {{2,3,5}}, 0 failures", matrices);
  return o;
}

// 9. rank-2 covers, validated by direct reflection arithmetic
Outcome rank2_covers() {
  Outcome o;
  std::size_t total = 0, valid = 0;
  for (auto name : {"A2~", "C2~", "G2~"}) {
    auto a = Gcm::parse(name);
    auto reflect = [&](std::size_t i, Root b) {
      int c = 0;
      for (std::size_t j = 0; j < a.rank(); ++j) c += a(i, j) * b[j];
      b[i] -= c;
      return b;
    };
    auto apply = [&](std::vector<std::size_t> const& w, Root r) {
      for (auto it = w.rbegin(); it != w.rend(); ++it) r = reflect(*it, r);
      return r;
    };
    auto positive = [](Root const& r) {
      return std::all_of(r.begin(), r.end(), [](int x) { return x >= 0; }) &&
             std::any_of(r.begin(), r.end(), [](int x) { return x > 0; });
    };
    for (auto const& alpha : real_roots(a, 12)) {
      if (!is_positive(alpha) || height(alpha) < 2) continue;
      ++total;
      auto c = rank2_cover(a, alpha);
      auto vi = apply(c.v.word(), simple_root(a.rank(), c.i));
      auto vj = apply(c.v.word(), simple_root(a.rank(), c.j));
      std::vector<std::size_t> inv(c.v.word().rbegin(), c.v.word().rend());
      auto back = apply(inv, alpha);
      bool ok = c.i != c.j && positive(vi) && positive(vj) && back[c.i] >= 1 && back[c.j] >= 1;
      for (std::size_t k = 0; k < a.rank(); ++k)
        if (k != c.i && k != c.j) ok = ok && back[k] == 0;
      if (ok) ++valid;
      else o.require(false, fmt::format("{} {}", name, root_str(alpha)));
    }
  }
  if (o.pass) o.detail = fmt::format("{}/{} certificates valid (heights 2..12)", valid, total);
  return o;
}

// 10. simple connectivity against the bounded homotopy oracle
Outcome homotopy_agreement() {
  Outcome o;
  std::mt19937 rng(12345);
  int agree = 0, simply = 0, capped = 0;
  for (int k = 0; k < 50; ++k) {
    auto r = oracle::random_connected_system(rng, 12, 4);
    ChamberSystem s(r.chambers, r.labels);
    oracle::HomotopyOracle h(r.chambers, r.labels);
    bool expect = h.simply_connected();
    capped += h.capped();
    bool got = is_simply_connected(s);
    simply += got;
    agree += got == expect;
  }
  o.require(agree == 50, fmt::format("{}/50 agree", agree));
  if (o.pass)
    o.detail = fmt::format("50/50 agree ({} simply connected, oracle capped on {})", simply, capped);
  return o;
}

// 11. loop embedding of A2~
Outcome loop_embedding() {
  Outcome o;
  std::string summary;
  for (auto lit : {"GF(3)", "Z/4"}) {
    auto v = verify_loop_embedding(Gcm::parse("A2"), Ring::parse(lit));
    o.require(v.ok(), fmt::format("{}: {}", lit, v.ok() ? "" : v.failures.front()));
    o.require(v.relators > 0 && v.identities > 0, fmt::format("{}: nothing checked", lit));
    summary += fmt::format(" {}: {} relators + {} identities", lit, v.relators, v.identities);
  }
  if (o.pass) o.detail = "0 failures;" + summary;
  return o;
}

// 12. reports are byte-identical across runs
Outcome determinism() {
  Outcome o;
  std::vector<std::string> scenarios{
      "ring GF(2)\ngcm A2\ncheck tcs\ncheck sc\ncheck amalgam\ncheck injectivity\ncheck normal-form\n",
      "ring Z/4\ngcm A2\ncheck kernel\ncheck opposition\ncheck parabolics J=1\ncheck levi i=2\n",
      "ring Z/4\ngcm B2\ncheck tcs axiom=3\n",
      "ring GF(3)\ngcm A2\ndatum affine\ncheck loop-embed\n",
      "ring GF(3)\ngcm G2~\ncheck roots height=6\ncheck decompose-bezout prime=5 matrix=[[1/5,0],[0,5]]\n"};
  for (auto const& text : scenarios) {
    auto sc = Scenario::parse(text);
    auto first = Runner(sc).run_all().dump();
    auto second = Runner(sc).run_all().dump();
    o.require(first == second, "differs: " + text.substr(0, text.find('\n')));
  }
  if (o.pass) o.detail = fmt::format("{} scenarios, identical reports", scenarios.size());
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<char const*, std::function<Outcome()>>> criteria{
      {"SL2 presentation orders", sl2_presentations},
      {"Curtis-Tits amalgam orders", amalgams},
      {"commutator relations", commutators},
      {"kernel containment", kernels},
      {"opposition preimage", opposition_preimages},
      {"twin chamber systems and simple connectivity", twin_systems},
      {"normal-form counts", normal_forms},
      {"Bezout decomposition", bezout},
      {"rank-2 covers", rank2_covers},
      {"homotopy oracle agreement", homotopy_agreement},
      {"affine loop embedding", loop_embedding},
      {"determinism", determinism}};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    auto t0 = Clock::now();
    Outcome out;
    try {
      out = criteria[k].second();
    } catch (std::exception const& e) {
      out.pass = false;
      out.detail = std::string("error: ") + e.what();
    }
    failed += !out.pass;
    fmt::print("{} {:2} {}: {} [{:.1f}s]\n", out.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, out.detail,
               since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
