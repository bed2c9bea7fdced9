#include "kmc/km_builder.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <numeric>

#include "kmc/errors.hpp"

namespace kmc {

namespace {

// Left cosets gH, numbered by least element index; returns element -> coset.
std::vector<std::uint32_t> left_cosets(FiniteGroup const& g, Subset const& h,
                                       std::vector<std::size_t>* reps = nullptr) {
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> out(g.order(), unset);
  auto hm = members(h);
  std::uint32_t next = 0;
  for (std::size_t x = 0; x < g.order(); ++x) {
    if (out[x] != unset) continue;
    for (std::size_t y : hm) out[g.mul(x, y)] = next;
    if (reps) reps->push_back(x);
    ++next;
  }
  return out;
}

bool is_field(ChevalleyGroup const& g) {
  auto const& loc = g.locality_data();
  return loc.local && loc.maximal_ideal.size() == 1;
}

}  // namespace

std::size_t TwinDatumOfG::act(int sign, std::size_t g, std::size_t chamber) const {
  return chamber_of(sign, group->group().mul(g, representatives(sign)[chamber]));
}

std::size_t TwinDatumOfG::residue_index(std::size_t element) const {
  if (residue_group == group) return element;
  return residue_group->group().index_of(
      group->project(group->group()[element], residue_group->alg()));
}

TwinDatumOfG build_twin_datum(Gcm const& a, RingPtr const& ring, std::size_t cap) {
  if (!ring->is_finite()) throw NotSupported("twin datum needs a finite ring");
  return build_twin_datum(std::make_shared<ChevalleyGroup const>(a, ring, cap), cap);
}

TwinDatumOfG build_twin_datum(std::shared_ptr<ChevalleyGroup const> g, std::size_t cap) {
  Gcm const& a = g->gcm();
  RingPtr const& ring = g->ring();
  TwinDatumOfG td;
  auto const& loc = g->locality_data();
  if (!loc.local) throw NotLocal(ring->name() + " is not local: " + loc.witness);
  td.group = g;
  td.residue_group =
      is_field(*g) ? g : std::make_shared<ChevalleyGroup const>(a, loc.residue_field, cap);
  auto co = satisfies_co(ring, a);
  if (!co.ok) td.warnings.push_back("(co) fails: " + co.witness);

  FiniteGroup const& G = g->group();
  std::size_t n = a.rank();
  std::array<ChamberSystem, 2> sides;
  for (int s = 0; s < 2; ++s) {
    int sign = s == 0 ? 1 : -1;
    td.coset[s] = left_cosets(G, g->borel(sign), &td.reps[s]);
    std::vector<std::vector<std::size_t>> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto pc = left_cosets(G, g->parabolic({i}, sign));
      for (std::size_t r : td.reps[s]) labels[i].push_back(pc[r]);
    }
    sides[s] = ChamberSystem(td.reps[s].size(), labels);
  }
  td.datum = OppositionDatum(sides[0], sides[1]);
  auto const& big = g->big_cell();
  for (std::size_t x = 0; x < td.reps[0].size(); ++x) {
    for (std::size_t y = 0; y < td.reps[1].size(); ++y) {
      std::size_t z = G.mul(G.inv(td.reps[1][y]), td.reps[0][x]);
      if (big[z]) td.datum.set_opposite(x, y);
    }
  }
  return td;
}

namespace {

struct CodistanceTables {
  std::vector<std::uint16_t> const* birk;
  std::vector<std::size_t> inverse;  // index of w^-1 in weyl()
};

CodistanceTables codistance_tables(TwinDatumOfG const& td) {
  CodistanceTables t{&td.residue_group->birkhoff_table(), {}};
  auto const& W = td.group->weyl();
  for (auto const& w : W) {
    auto wi = w.inverse();
    t.inverse.push_back(static_cast<std::size_t>(std::find(W.begin(), W.end(), wi) - W.begin()));
  }
  return t;
}

std::size_t codistance_index(TwinDatumOfG const& td, CodistanceTables const& t, std::size_t g,
                             std::size_t h) {
  FiniteGroup const& G = td.group->group();
  FiniteGroup const& K = td.residue_group->group();
  std::size_t z = td.residue_index(G.mul(G.inv(g), h));
  return t.inverse[(*t.birk)[K.inv(z)]];
}

}  // namespace

WeylElem codistance(TwinDatumOfG const& td, std::size_t c_plus, std::size_t c_minus) {
  auto t = codistance_tables(td);
  return td.group->weyl()[codistance_index(td, t, td.reps[0][c_plus], td.reps[1][c_minus])];
}

OmegaSupplier omega_supplier(TwinDatumOfG const& td) {
  auto t = std::make_shared<CodistanceTables>(codistance_tables(td));
  return [&td, t](int sign, std::size_t c) {
    FiniteGroup const& G = td.group->group();
    auto const& wr = td.group->weyl_reps();
    std::vector<std::size_t> out;
    if (sign > 0) {
      std::size_t g = td.reps[0][c];
      for (std::size_t h : td.reps[1]) {
        std::size_t w = codistance_index(td, *t, g, h);
        out.push_back(td.chamber_of(1, G.mul(g, wr[w])));
      }
    } else {
      std::size_t h = td.reps[1][c];
      for (std::size_t g : td.reps[0]) {
        std::size_t z = td.residue_index(G.mul(G.inv(h), g));
        std::size_t w = (*t->birk)[z];
        out.push_back(td.chamber_of(-1, G.mul(h, wr[w])));
      }
    }
    return out;
  };
}

std::size_t opp_orbits(TwinDatumOfG const& td) {
  auto const& d = td.datum;
  std::size_t m = d.minus.size();
  std::vector<std::int64_t> index(d.plus.size() * m, -1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t x = 0; x < d.plus.size(); ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      if (!d.opposite(x, y)) continue;
      index[x * m + y] = static_cast<std::int64_t>(pairs.size());
      pairs.emplace_back(x, y);
    }
  }
  std::vector<std::size_t> parent(pairs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t u) {
    while (parent[u] != u) u = parent[u] = parent[parent[u]];
    return u;
  };
  std::size_t comps = pairs.size();
  for (Mat const& gm : td.group->real().generators()) {
    std::size_t g = td.group->group().index_of(gm);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      std::size_t x = td.act(1, g, pairs[k].first), y = td.act(-1, g, pairs[k].second);
      auto j = index[x * m + y];
      if (j < 0) throw Error("group action does not preserve opposition");
      std::size_t a = find(k), b = find(static_cast<std::size_t>(j));
      if (a != b) {
        parent[a] = b;
        --comps;
      }
    }
  }
  return comps;
}

Verdict verify_kernel_containment(ChevalleyGroup const& g) {
  Verdict v;
  FiniteGroup const& G = g.group();
  Subset kernel = g.kernel_of_reduction();
  auto um = members(intersect(g.unipotent(-1), kernel));
  auto const& bp = g.borel(1);
  std::size_t n = 0;
  for (std::size_t k : members(kernel)) {
    ++n;
    bool found = false;
    for (std::size_t u : um) {
      if (bp[G.mul(G.inv(u), k)]) {
        found = true;
        break;
      }
    }
    if (!found) v.fail(fmt::format("kernel element #{} is not in (U- cap K) B+", k));
  }
  v.count("group", g.order());
  v.count("kernel", n);
  v.count("kernel_u_minus", um.size());
  return v;
}

Verdict verify_opposition_preimage(ChevalleyGroup const& g) {
  Verdict v;
  auto const& loc = g.locality_data();
  if (!loc.local) throw NotLocal(g.ring()->name() + " is not local: " + loc.witness);
  auto const& big = g.big_cell();
  if (is_field(g)) {
    v.count("group", g.order());
    v.count("big_cell", count(big));
    return v;
  }
  ChevalleyGroup k(g.gcm(), loc.residue_field);
  auto const& kbig = k.big_cell();
  std::size_t pre = 0;
  for (std::size_t x = 0; x < g.order(); ++x) {
    bool in_pre = kbig[k.group().index_of(g.project(g.group()[x], k.alg()))] != 0;
    pre += in_pre;
    if (in_pre != (big[x] != 0)) {
      v.fail(fmt::format("element #{}: {} the preimage but {} B-B+", x,
                         in_pre ? "in" : "not in", big[x] ? "in" : "not in"));
    }
  }
  v.count("group", g.order());
  v.count("big_cell", count(big));
  v.count("preimage", pre);
  v.count("residue_big_cell", count(kbig));
  return v;
}

Verdict verify_parabolic_intersections(ChevalleyGroup const& g, IndexSet const& J) {
  Verdict v;
  for (std::size_t j : J) {
    if (j >= g.gcm().rank()) throw ParseError(fmt::format("index {} out of range", j + 1));
  }
  std::size_t bir1 = count(intersect(g.borel(1), g.unipotent(-1)));
  std::size_t bir2 = count(intersect(g.borel(-1), g.unipotent(1)));
  v.count("b_plus_cap_u_minus", bir1);
  v.count("b_minus_cap_u_plus", bir2);
  if (bir1 != 1 || bir2 != 1) {
    v.fail("(Bir) fails: B+ meets U- or B- meets U+ nontrivially");
    return v;
  }
  Subset lhs = intersect(g.parabolic(J, 1), g.parabolic(J, -1));
  Subset rhs = g.group().product(g.torus(), g.levi(J));
  v.count("p_plus_cap_p_minus", count(lhs));
  v.count("torus_levi", count(rhs));
  for (std::size_t x = 0; x < g.order(); ++x) {
    if (lhs[x] != rhs[x]) {
      v.fail(fmt::format("element #{} lies in {} only", x,
                         lhs[x] ? "P+ cap P-" : "T G_J"));
      break;
    }
  }
  return v;
}

Verdict verify_levi(ChevalleyGroup const& g, std::size_t i) {
  Verdict v;
  std::size_t n = g.gcm().rank();
  if (i >= n) throw ParseError(fmt::format("index {} out of range", i + 1));
  FiniteGroup const& G = g.group();
  for (int sign : {1, -1}) {
    Root ai = simple_root(n, i);
    if (sign < 0) ai = negate(ai);
    std::vector<std::size_t> gens;
    for (Root const& r : g.real().roots()) {
      if ((sign > 0 ? is_positive(r) : is_negative(r)) && r != ai) {
        for (std::size_t k : members(g.root_group(r))) gens.push_back(k);
      }
    }
    Subset rest = G.closure(gens);
    Subset ui = g.root_group(ai);
    Subset prod = G.product(ui, rest);
    std::string tag = sign > 0 ? "plus" : "minus";
    v.count("u_" + tag, count(g.unipotent(sign)));
    v.count("u_alpha_" + tag, count(ui));
    v.count("u_rest_" + tag, count(rest));
    if (prod != g.unipotent(sign)) {
      v.fail(fmt::format("U{} != U_alpha U_(i)", sign > 0 ? '+' : '-'));
    }
    if (count(intersect(ui, rest)) != 1) {
      v.fail(fmt::format("U_alpha meets U{}_(i) nontrivially", sign > 0 ? '+' : '-'));
    }
  }
  return v;
}

Verdict verify_normal_form_counts(ChevalleyGroup const& g) {
  if (!is_field(g)) throw NotSupported("normal forms need a field, got " + g.ring()->name());
  Verdict v;
  auto c = g.normal_form_census();
  v.count("products", c.products);
  v.count("distinct", c.distinct);
  v.count("formula", c.formula);
  v.count("group", g.order());
  if (c.formula != g.order()) v.fail(fmt::format("formula {} != |G| {}", c.formula, g.order()));
  if (c.products != c.distinct) {
    v.fail(fmt::format("{} products give only {} elements", c.products, c.distinct));
  }
  if (c.distinct != g.order()) v.fail(fmt::format("normal forms reach {} of {}", c.distinct, g.order()));
  if (!g.bruhat_normal_form(g.real().identity()).word.empty()) v.fail("identity has a nonempty word");
  return v;
}

namespace {

InjectivityVerdict check_root_presentation(RootPresentation const& p, Gcm const& a,
                                           RingPtr const& ring, std::size_t limit,
                                           std::size_t cap) {
  if (!ring->is_finite()) throw NotSupported("presentation checks need a finite ring");
  ChevalleyGroup g(a, ring, cap);
  InjectivityVerdict out;
  out.generators = p.pres.generators.size();
  out.relators = p.pres.relators.size();
  out.warnings = p.warnings;
  auto images = generator_images(p, g.real());
  Root a0 = simple_root(a.rank(), 0);
  std::vector<Word> sub;
  for (std::size_t k = 0; k < p.gens.size(); ++k) {
    if (p.gens[k].root == a0) sub.push_back({gen_letter(k)});
  }
  out.iso = verify_iso_to_matrix_group(p.pres, images, g.group(), limit, sub, ring->size());
  return out;
}

}  // namespace

InjectivityVerdict verify_spherical_injectivity(Gcm const& a, RingPtr const& ring,
                                                std::size_t limit, std::size_t cap) {
  if (!is_spherical(a)) throw NotSpherical(a.str() + " is not spherical");
  return check_root_presentation(steinberg_presentation(a, ring), a, ring, limit, cap);
}

InjectivityVerdict verify_amalgam(Gcm const& a, RingPtr const& ring, std::size_t limit,
                                  std::size_t cap) {
  if (!is_spherical(a)) throw NotSpherical(a.str() + " is not spherical");
  auto ct = curtis_tits_presentation(a, ring);
  return check_root_presentation(ct.flat, a, ring, limit, cap);
}

RatMat2 mul(RatMat2 const& x, RatMat2 const& y) {
  RatMat2 z;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  }
  return z;
}

Rational det(RatMat2 const& x) { return x[0][0] * x[1][1] - x[0][1] * x[1][0]; }

Lemma22 lemma22_decompose(RatMat2 const& m, int p) {
  if (!is_prime(p)) throw ParseError(fmt::format("{} is not prime", p));
  if (det(m) != 1) throw ParseError("matrix does not have determinant 1");
  // c p + d r = 0 with c, d coprime integers
  Rational const& mp = m[0][0];
  Rational const& mr = m[1][0];
  BigInt c, d;
  if (mr == 0) {
    c = 0;
    d = 1;
  } else if (mp == 0) {
    c = 1;
    d = 0;
  } else {
    BigInt l = boost::multiprecision::lcm(denominator(mp), denominator(mr));
    c = numerator(mr) * (l / denominator(mr));
    d = -numerator(mp) * (l / denominator(mp));
    BigInt g = boost::multiprecision::gcd(c, d);
    c /= g;
    d /= g;
  }
  auto [g, u, v] = bezout_data<BigInt>(d, c);  // u d + v c = 1
  Lemma22 out;
  out.s = {{{Rational(u), Rational(-v)}, {Rational(c), Rational(d)}}};
  out.b = mul(out.s, m);
  return out;
}

std::string lemma22_defect(RatMat2 const& m, int p, Lemma22 const& f) {
  if (det(f.s) != 1) return "det S != 1";
  for (auto const& row : f.s) {
    for (auto const& q : row) {
      if (denominator(q) % p == 0) return "S is not p-integral";
    }
  }
  if (f.b[1][0] != 0) return "B is not upper triangular";
  if (mul(f.s, m) != f.b) return "S M != B";
  RatMat2 sinv = {{{f.s[1][1], -f.s[0][1]}, {-f.s[1][0], f.s[0][0]}}};
  if (mul(sinv, f.b) != m) return "S^-1 B != M";
  return {};
}

}  // namespace kmc
