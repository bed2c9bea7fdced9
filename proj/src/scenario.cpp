#include "kmc/scenario.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

#include "kmc/errors.hpp"
#include "kmc/km_builder.hpp"
#include "kmc/laurent.hpp"

namespace kmc {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, std::string_view seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (seps.find(c) != std::string_view::npos) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::size_t parse_count(std::string const& key, std::string const& v) {
  std::size_t pos = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &pos);
  } catch (std::exception const&) {
    pos = 0;
  }
  if (pos != v.size() || n == 0 || v.front() == '-') {
    throw ParseError(fmt::format("{} must be a positive integer, got '{}'", key, v));
  }
  return static_cast<std::size_t>(n);
}

// 1-based index list "1,2" -> {0, 1}; "" or "none" is the empty set.
IndexSet parse_indices(std::string const& v, std::size_t rank) {
  IndexSet out;
  if (v == "none") return out;
  for (auto const& t : split(v, ", {}")) {
    std::size_t i = parse_count("index", t);
    if (i > rank) throw ParseError(fmt::format("index {} exceeds rank {}", i, rank));
    out.push_back(i - 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string index_set_str(IndexSet const& J) {
  std::vector<std::size_t> one;
  for (auto j : J) one.push_back(j + 1);
  return fmt::format("{{{}}}", fmt::join(one, ","));
}

Rational parse_rational(std::string const& t) {
  auto slash = t.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(t));
    BigInt den(t.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + t + "'");
    return Rational(BigInt(t.substr(0, slash))) / Rational(den);
  } catch (std::runtime_error const& e) {
    if (dynamic_cast<ParseError const*>(&e)) throw;
    throw ParseError("bad rational '" + t + "'");
  }
}

std::string rational_str(Rational const& q) { return q.str(); }

Json matrix_json(RatMat2 const& m) {
  return Json::array({Json::array({rational_str(m[0][0]), rational_str(m[0][1])}),
                      Json::array({rational_str(m[1][0]), rational_str(m[1][1])})});
}

void absorb(CheckReport& r, Verdict const& v) {
  for (auto const& [k, n] : v.counts) r.details[k] = n;
  for (auto const& w : v.warnings) r.warnings.push_back(w);
  if (!v.pass) r.fail(Json{{"description", v.witness}});
}

std::map<std::string, std::set<std::string>> const& allowed_params() {
  static const std::map<std::string, std::set<std::string>> m = {
      {"roots", {"height"}},
      {"ring-info", {}},
      {"tcs", {"axiom"}},
      {"sc", {}},
      {"amalgam", {}},
      {"injectivity", {}},
      {"kernel", {}},
      {"opposition", {}},
      {"parabolics", {"J"}},
      {"levi", {"i"}},
      {"normal-form", {}},
      {"loop-embed", {}},
      {"decompose-bezout", {"prime", "matrix"}},
  };
  return m;
}

}  // namespace

std::vector<std::string> const& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (auto const& [k, _] : allowed_params()) v.push_back(k);
    return v;
  }();
  return names;
}

Scenario Scenario::parse(std::string_view text) {
  Scenario s;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  bool have_ring = false, have_gcm = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto sp = line.find_first_of(" \t");
    std::string key = line.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp));
    auto need_value = [&] {
      if (rest.empty()) throw ParseError(fmt::format("line {}: '{}' needs a value", lineno, key));
    };
    if (key == "ring") {
      need_value();
      s.ring = rest;
      have_ring = true;
    } else if (key == "gcm") {
      need_value();
      s.gcm = rest;
      have_gcm = true;
    } else if (key == "datum") {
      if (rest != "simply-connected" && rest != "affine") {
        throw ParseError(fmt::format("line {}: unknown datum '{}'", lineno, rest));
      }
      s.datum = rest;
    } else if (key == "cap") {
      s.cap = parse_count("cap", rest);
    } else if (key == "limit") {
      s.limit = parse_count("limit", rest);
    } else if (key == "check") {
      auto words = split(rest, " \t");
      if (words.empty()) throw ParseError(fmt::format("line {}: check needs a name", lineno));
      CheckSpec c{words[0], {}};
      auto it = allowed_params().find(c.name);
      if (it == allowed_params().end()) {
        throw ParseError(fmt::format("line {}: unknown check '{}'", lineno, c.name));
      }
      for (std::size_t k = 1; k < words.size(); ++k) {
        auto eq = words[k].find('=');
        if (eq == std::string::npos) {
          throw ParseError(fmt::format("line {}: expected key=value, got '{}'", lineno, words[k]));
        }
        std::string pk = words[k].substr(0, eq);
        if (!it->second.count(pk)) {
          throw ParseError(fmt::format("line {}: check {} has no parameter '{}'", lineno, c.name, pk));
        }
        c.params[pk] = words[k].substr(eq + 1);
      }
      s.checks.push_back(std::move(c));
    } else {
      throw ParseError(fmt::format("line {}: unknown key '{}'", lineno, key));
    }
  }
  bool needs_group = std::any_of(s.checks.begin(), s.checks.end(), [](CheckSpec const& c) {
    return c.name != "decompose-bezout";
  });
  if (needs_group && !have_gcm) throw ParseError("scenario has no gcm line");
  if (needs_group && !have_ring && std::any_of(s.checks.begin(), s.checks.end(),
                                               [](CheckSpec const& c) { return c.name != "roots"; })) {
    throw ParseError("scenario has no ring line");
  }
  return s;
}

std::string Scenario::to_text() const {
  std::string out;
  if (!ring.empty()) out += "ring " + ring + "\n";
  if (!gcm.empty()) out += "gcm " + gcm + "\n";
  out += "datum " + datum + "\n";
  out += fmt::format("cap {}\nlimit {}\n", cap, limit);
  for (auto const& c : checks) {
    out += "check " + c.name;
    for (auto const& [k, v] : c.params) out += " " + k + "=" + v;
    out += "\n";
  }
  return out;
}

struct Runner::State {
  Scenario sc;
  Gcm a;
  RingPtr ring;
  std::shared_ptr<ChevalleyGroup const> group;
  std::unique_ptr<TwinDatumOfG> td;

  ChevalleyGroup const& g() {
    if (!ring->is_finite()) throw NotSupported("the group is enumerated over finite rings only");
    if (!is_spherical(a)) throw NotSpherical(a.str() + " is not spherical");
    if (!group) group = std::make_shared<ChevalleyGroup const>(a, ring, sc.cap);
    return *group;
  }
  TwinDatumOfG const& twin() {
    if (!td) {
      g();
      td = std::make_unique<TwinDatumOfG>(build_twin_datum(group, sc.cap));
    }
    return *td;
  }
  std::string chamber(int sign, std::size_t c) {
    return (sign > 0 ? "+" : "-") + td->datum.side(sign).name(c);
  }

  void run_roots(CheckSpec const& c, CheckReport& r);
  void run_ring_info(CheckReport& r);
  void run_tcs(CheckSpec const& c, CheckReport& r);
  void run_sc(CheckReport& r);
  void run_presentation(bool steinberg, CheckReport& r);
  void run_parabolics(CheckSpec const& c, CheckReport& r);
  void run_levi(CheckSpec const& c, CheckReport& r);
  void run_loop(CheckReport& r);
  void run_bezout(CheckSpec const& c, CheckReport& r);
};

Runner::Runner(Scenario const& s) : st_(std::make_unique<State>()) {
  st_->sc = s;
  if (!s.gcm.empty()) st_->a = Gcm::parse(s.gcm);
  if (!s.ring.empty()) st_->ring = Ring::parse(s.ring);
}

Runner::~Runner() = default;

void Runner::State::run_roots(CheckSpec const& c, CheckReport& r) {
  std::vector<Root> roots;
  auto h = c.params.find("height");
  if (h != c.params.end()) {
    roots = real_roots(a, static_cast<int>(parse_count("height", h->second)));
  } else if (is_spherical(a)) {
    roots = finite_root_system(a);
  } else {
    throw ParseError("roots of a non-spherical GCM need a height bound");
  }
  r.count = roots.size();
  Json list = Json::array();
  for (auto const& x : roots) list.push_back(root_str(x));
  r.details["positive"] = std::count_if(roots.begin(), roots.end(), is_positive);
  r.details["roots"] = list;
}

void Runner::State::run_ring_info(CheckReport& r) {
  r.details["name"] = ring->name();
  if (!ring->is_finite()) {
    r.details["size"] = "infinite";
    r.details["local"] = true;
    r.details["residue_field"] = fmt::format("GF({})", ring->prime());
    return;
  }
  r.count = ring->size();
  r.details["characteristic"] = ring->characteristic();
  r.details["units"] = ring->units().size();
  auto loc = locality(ring);
  r.details["local"] = loc.local;
  if (loc.local) {
    r.details["maximal_ideal"] = loc.maximal_ideal.size();
    r.details["residue_field"] = loc.residue_field->name();
  } else {
    r.details["witness"] = loc.witness;
  }
  Json q = Json::array();
  for (auto n : quotient_field_sizes(ring)) q.push_back(n);
  r.details["quotient_fields"] = q;
  if (a.rank() > 0) {
    auto co = satisfies_co(ring, a);
    r.details["co"] = co.ok;
    if (!co.ok) r.warnings.push_back("(co) fails: " + co.witness);
  }
}

void Runner::State::run_tcs(CheckSpec const& c, CheckReport& r) {
  auto const& t = twin();
  r.warnings = t.warnings;
  IndexSet axioms = {0, 1, 2, 3};
  if (auto it = c.params.find("axiom"); it != c.params.end()) axioms = parse_indices(it->second, 4);
  r.details["chambers_plus"] = t.datum.plus.size();
  r.details["chambers_minus"] = t.datum.minus.size();
  r.count = t.datum.op_count();
  auto sup = omega_supplier(t);
  for (std::size_t ax : axioms) {
    auto v = check_tcs(t.datum, static_cast<int>(ax + 1), sup);
    std::string key = fmt::format("tcs{}", ax + 1);
    r.details[key] = Json{{"verdict", v.pass ? "pass" : "fail"}, {"checked", v.checked},
                          {"method", v.method}};
    if (!v.pass) {
      Json w{{"axiom", ax + 1}, {"description", v.detail}};
      if (v.witness) {
        Json ch = Json::array();
        auto const& tw = *v.witness;
        // TCS1 (c,d,x,y), TCS2 (c,d,x), TCS3 (c,r): x, y, r on the other side
        for (std::size_t k = 0; k < tw.chambers.size(); ++k) {
          bool other = (ax <= 1 && k >= 2) || (ax == 2 && k == 1);
          ch.push_back(chamber(other ? -tw.sign : tw.sign, tw.chambers[k]));
        }
        Json idx = Json::array();
        for (auto i : tw.indices) idx.push_back(i + 1);
        w["sign"] = tw.sign > 0 ? "+" : "-";
        w["chambers"] = ch;
        w["indices"] = idx;
      }
      r.fail(w);
    }
  }
}

void Runner::State::run_sc(CheckReport& r) {
  auto const& t = twin();
  r.warnings = t.warnings;
  auto rep = verify_main_theorem(t.datum, omega_supplier(t), sc.limit);
  auto sc_json = [](SimpleConnectivity const& s) {
    return Json{{"connected", s.connected}, {"simply_connected", s.simply_connected},
                {"generators", s.generators}, {"relators", s.relators},
                {"surviving_generators", s.surviving_generators}, {"method", s.method}};
  };
  r.count = rep.opp_chambers;
  Json tcs = Json::object();
  for (std::size_t k = 0; k < 4; ++k) {
    tcs[fmt::format("tcs{}", k + 1)] = rep.tcs[k].pass ? "pass" : "fail";
  }
  r.details["tcs"] = tcs;
  r.details["plus"] = sc_json(rep.plus);
  r.details["minus"] = sc_json(rep.minus);
  r.details["opp"] = sc_json(rep.opp);
  r.details["hypotheses"] = rep.hypotheses;
  r.details["opp_orbits"] = opp_orbits(t);
  if (rep.violation) r.warnings.push_back("THEOREM VIOLATION: hypotheses hold but Opp is not simply connected");
  if (rep.violation || !rep.opp.simply_connected) {
    r.fail(Json{{"description", "Opp is not simply connected"},
                {"hypotheses", rep.hypotheses},
                {"method", rep.opp.method},
                {"surviving_generators", rep.opp.surviving_generators}});
  }
}

void Runner::State::run_presentation(bool steinberg, CheckReport& r) {
  if (!is_spherical(a)) throw NotSpherical(a.str() + " is not spherical");
  InjectivityVerdict v;
  try {
    v = steinberg ? verify_spherical_injectivity(a, ring, sc.limit, sc.cap)
                  : verify_amalgam(a, ring, sc.limit, sc.cap);
  } catch (EliminationFailed const& e) {
    r.fail(Json{{"description", std::string("presentation could not be formed: ") + e.what()}});
    return;
  }
  r.warnings = v.warnings;
  r.count = v.iso.group_order;
  r.details["presentation_order"] = v.iso.presentation_order;
  r.details["generators"] = v.generators;
  r.details["relators"] = v.relators;
  r.details["homomorphism"] = v.iso.homomorphism;
  r.details["surjective"] = v.iso.surjective;
  r.details["injective"] = v.iso.injective;
  if (!v.iso.iso()) {
    std::string leg = !v.iso.homomorphism ? "homomorphism"
                      : !v.iso.surjective ? "surjective"
                                          : "injective";
    r.fail(Json{{"description", v.iso.witness}, {"leg", leg}});
  }
}

void Runner::State::run_parabolics(CheckSpec const& c, CheckReport& r) {
  auto const& G = g();
  std::vector<IndexSet> sets;
  if (auto it = c.params.find("J"); it != c.params.end()) {
    sets.push_back(parse_indices(it->second, a.rank()));
  } else {
    sets = small_index_sets(a.rank());
  }
  r.count = G.order();
  for (auto const& J : sets) {
    auto v = verify_parabolic_intersections(G, J);
    Json d = Json::object();
    for (auto const& [k, n] : v.counts) d[k] = n;
    r.details[index_set_str(J)] = d;
    if (!v.pass) r.fail(Json{{"J", index_set_str(J)}, {"description", v.witness}});
  }
}

void Runner::State::run_levi(CheckSpec const& c, CheckReport& r) {
  auto const& G = g();
  IndexSet is;
  if (auto it = c.params.find("i"); it != c.params.end()) {
    is = parse_indices(it->second, a.rank());
  } else {
    for (std::size_t i = 0; i < a.rank(); ++i) is.push_back(i);
  }
  r.count = G.order();
  for (auto i : is) {
    auto v = verify_levi(G, i);
    Json d = Json::object();
    for (auto const& [k, n] : v.counts) d[k] = n;
    r.details[fmt::format("i={}", i + 1)] = d;
    if (!v.pass) r.fail(Json{{"i", i + 1}, {"description", v.witness}});
  }
}

void Runner::State::run_loop(CheckReport& r) {
  LoopCheck v;
  try {
    v = verify_loop_embedding(a, ring);
  } catch (EliminationFailed const& e) {
    r.fail(Json{{"description", std::string("presentation could not be formed: ") + e.what()}});
    return;
  }
  r.warnings = v.warnings;
  r.count = v.relators;
  r.details["extended_gcm"] = extended_gcm(a).str();
  r.details["relators"] = v.relators;
  r.details["identities"] = v.identities;
  r.details["failures"] = v.failures.size();
  if (!v.ok()) r.fail(Json{{"description", v.failures.front()}});
}

void Runner::State::run_bezout(CheckSpec const& c, CheckReport& r) {
  auto p = c.params.find("prime");
  auto m = c.params.find("matrix");
  if (p == c.params.end() || m == c.params.end()) {
    throw ParseError("decompose-bezout needs prime and matrix");
  }
  int prime = static_cast<int>(parse_count("prime", p->second));
  auto entries = split(m->second, "[], ");
  if (entries.size() != 4) throw ParseError("matrix needs four entries");
  RatMat2 mat;
  for (int k = 0; k < 4; ++k) mat[k / 2][k % 2] = parse_rational(entries[k]);
  auto f = lemma22_decompose(mat, prime);
  auto defect = lemma22_defect(mat, prime, f);
  r.details["M"] = matrix_json(mat);
  r.details["S"] = matrix_json(f.s);
  r.details["B"] = matrix_json(f.b);
  if (!defect.empty()) r.fail(Json{{"description", defect}});
}

CheckReport Runner::run(CheckSpec const& spec) {
  auto& s = *st_;
  auto t0 = std::chrono::steady_clock::now();
  CheckReport r;
  r.check = spec.name;
  if (!s.sc.gcm.empty() && spec.name != "decompose-bezout") r.params["gcm"] = s.a.str();
  if (!s.sc.ring.empty() && spec.name != "decompose-bezout" && spec.name != "roots") {
    r.params["ring"] = s.ring->name();
  }
  if (s.sc.datum != "simply-connected") r.params["datum"] = s.sc.datum;
  for (auto const& [k, v] : spec.params) r.params[k] = v;

  bool affine_only = spec.name == "loop-embed";
  bool any_datum = spec.name == "roots" || spec.name == "ring-info" || spec.name == "decompose-bezout";
  if (!any_datum && (s.sc.datum == "affine") != affine_only) {
    throw NotSupported(fmt::format("check {} does not apply to the {} datum", spec.name, s.sc.datum));
  }
  auto needs_ring = [&] {
    if (!s.ring) throw ParseError("check " + spec.name + " needs a ring");
  };
  if (spec.name == "roots") {
    s.run_roots(spec, r);
  } else if (spec.name == "ring-info") {
    needs_ring();
    s.run_ring_info(r);
  } else if (spec.name == "decompose-bezout") {
    s.run_bezout(spec, r);
  } else {
    needs_ring();
    if (spec.name == "tcs") {
      s.run_tcs(spec, r);
    } else if (spec.name == "sc") {
      s.run_sc(r);
    } else if (spec.name == "amalgam" || spec.name == "injectivity") {
      s.run_presentation(spec.name == "injectivity", r);
    } else if (spec.name == "kernel") {
      r.count = s.g().order();
      absorb(r, verify_kernel_containment(s.g()));
    } else if (spec.name == "opposition") {
      r.count = s.g().order();
      absorb(r, verify_opposition_preimage(s.g()));
    } else if (spec.name == "parabolics") {
      s.run_parabolics(spec, r);
    } else if (spec.name == "levi") {
      s.run_levi(spec, r);
    } else if (spec.name == "normal-form") {
      r.count = s.g().order();
      absorb(r, verify_normal_form_counts(s.g()));
    } else if (spec.name == "loop-embed") {
      s.run_loop(r);
    } else {
      throw ParseError("unknown check '" + spec.name + "'");
    }
  }
  r.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::steady_clock::now() - t0)
                 .count();
  return r;
}

Report Runner::run_all() {
  Report rep;
  for (auto const& c : st_->sc.checks) rep.checks.push_back(run(c));
  return rep;
}

std::string Runner::coset_tsv() {
  auto const& t = st_->twin();
  auto const& alg = t.group->alg();
  std::string out = "sign\tchamber\trepresentative\tmatrix\n";
  for (int sign : {1, -1}) {
    auto const& reps = t.representatives(sign);
    for (std::size_t c = 0; c < reps.size(); ++c) {
      out += fmt::format("{}\t{}\t{}\t{}\n", sign > 0 ? '+' : '-', c, reps[c],
                         alg.str(t.group->group()[reps[c]]));
    }
  }
  return out;
}

std::string Runner::chambers_tsv(int sign) { return st_->twin().datum.side(sign).to_tsv(); }

int exit_code_for(std::exception const& e) {
  if (dynamic_cast<CapExceeded const*>(&e) || dynamic_cast<Overflow const*>(&e)) return 3;
  return 2;
}

}  // namespace kmc
