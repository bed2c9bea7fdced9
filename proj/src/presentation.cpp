#include "kmc/presentation.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "kmc/finite_group.hpp"
#include "kmc/todd_coxeter.hpp"

namespace kmc {

Word inverse(Word const& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l = inverse_letter(l);
  return out;
}

Word free_reduce(Word const& w) {
  Word out;
  for (Letter l : w) {
    if (!out.empty() && out.back() == inverse_letter(l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word cyclic_reduce(Word const& w) {
  Word r = free_reduce(w);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == inverse_letter(r[j - 1])) {
    ++i;
    --j;
  }
  return Word(r.begin() + static_cast<long>(i), r.begin() + static_cast<long>(j));
}

Word concat(std::initializer_list<Word> parts) {
  Word out;
  for (auto const& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::size_t Presentation::add_generator(std::string name) {
  if (names_.count(name)) throw ParseError("duplicate generator " + name);
  names_.emplace(name, generators.size());
  generators.push_back(std::move(name));
  return generators.size() - 1;
}

std::optional<std::size_t> Presentation::generator(std::string_view name) const {
  auto it = names_.find(name);
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

namespace {

Word canonical_rotation(Word const& w) {
  Word best = w;
  for (Word const& v : {w, inverse(w)}) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      Word rot(v.begin() + static_cast<long>(k), v.end());
      rot.insert(rot.end(), v.begin(), v.begin() + static_cast<long>(k));
      if (rot < best) best = rot;
    }
  }
  return best;
}

}  // namespace

bool Presentation::add_relator(Word const& w) {
  Word r = cyclic_reduce(w);
  if (r.empty()) return false;
  for (Letter l : r) {
    if (l / 2 >= generators.size()) throw ParseError("relator uses an unknown generator");
  }
  if (!seen_.emplace(canonical_rotation(r), relators.size()).second) return false;
  relators.push_back(std::move(r));
  return true;
}

std::string Presentation::word_str(Word const& w) const {
  std::string s;
  for (Letter l : w) {
    if (!s.empty()) s += ' ';
    s += generators[l / 2];
    if (l & 1) s += "^-1";
  }
  return s.empty() ? "1" : s;
}

Word Presentation::parse_word(std::string_view text) const {
  Word w;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "1") continue;
    bool inv = false;
    if (tok.size() > 3 && tok.ends_with("^-1")) {
      inv = true;
      tok.resize(tok.size() - 3);
    }
    auto g = generator(tok);
    if (!g) throw ParseError("unknown generator " + tok);
    w.push_back(gen_letter(*g, inv));
  }
  return w;
}

std::string Presentation::to_text() const {
  std::string out;
  for (auto const& g : generators) out += "gen " + g + "\n";
  for (auto const& r : relators) out += "rel " + word_str(r) + "\n";
  return out;
}

Presentation Presentation::from_text(std::string_view text) {
  Presentation p;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    std::string rest;
    std::getline(ls, rest);
    try {
      if (head == "gen") {
        std::istringstream rs(rest);
        std::string name;
        if (!(rs >> name)) throw ParseError("missing generator name");
        p.add_generator(name);
      } else if (head == "rel") {
        p.add_relator(p.parse_word(rest));
      } else {
        throw ParseError("expected 'gen' or 'rel'");
      }
    } catch (ParseError const& e) {
      throw ParseError(fmt::format("line {}: {}", lineno, e.what()));
    }
  }
  return p;
}

namespace {

// x_root(value)^{+-1} with value a ring code; value 0 is the identity.
struct RootSym {
  std::size_t root = 0;  // index into the realization's root list
  Code value = 0;
  bool inv = false;
};
using RootWord = std::vector<RootSym>;

RootWord inverse(RootWord const& w) {
  RootWord out(w.rbegin(), w.rend());
  for (auto& s : out) s.inv = !s.inv;
  return out;
}

RootWord join(std::initializer_list<RootWord> parts) {
  RootWord out;
  for (auto const& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

struct RelatorBuilder {
  Realization const& real;
  Ring const& ring;
  std::size_t n;

  std::size_t simple(std::size_t i, int sign) const {
    Root a = simple_root(n, i);
    return real.root_index(sign > 0 ? a : negate(a));
  }
  RootWord x(std::size_t root, Code v) const { return {RootSym{root, v, false}}; }
  RootWord s_tilde(std::size_t i, Code r) const {
    return join({x(simple(i, 1), r), x(simple(i, -1), ring.inv(r)), x(simple(i, 1), r)});
  }
  // s~(1)^-1 s~(u), optionally with u replaced by u^-1.
  RootWord h(std::size_t i, Code u, bool invert_arg) const {
    Code v = invert_arg ? ring.inv(u) : u;
    return join({inverse(s_tilde(i, ring.one())), s_tilde(i, v)});
  }

  void unipotent(std::vector<RootWord>& out) const {
    for (std::size_t k = 0; k < real.roots().size(); ++k) {
      for (Code a = 1; a < ring.size(); ++a) {
        for (Code b = 1; b < ring.size(); ++b) {
          out.push_back(join({x(k, a), x(k, b), inverse(x(k, ring.add(a, b)))}));
        }
      }
    }
  }

  void commutators(std::vector<RootWord>& out) const {
    auto const& table = rank2_constants(real.model().type).table;
    for (auto const& [key, terms] : table) {
      auto [p, q] = key;
      for (Code a = 1; a < ring.size(); ++a) {
        for (Code b = 1; b < ring.size(); ++b) {
          RootWord prod;
          for (auto const& t : terms) {
            Code c = ring.mul(ring.from_int(t.c), ring.mul(ring.pow(a, t.i), ring.pow(b, t.j)));
            prod = join({prod, x(t.root, c)});
          }
          out.push_back(join({x(p, a), x(q, b), inverse(x(p, a)), inverse(x(q, b)),
                              inverse(prod)}));
        }
      }
    }
  }

  // r^h s^h = (rs)^h over nontrivial units.
  void symbols(std::vector<RootWord>& out, std::size_t i, bool invert_arg) const {
    for (Code r : ring.units()) {
      if (r == ring.one()) continue;
      for (Code s : ring.units()) {
        if (s == ring.one()) continue;
        out.push_back(join({h(i, r, invert_arg), h(i, s, invert_arg),
                            inverse(h(i, ring.mul(r, s), invert_arg))}));
      }
    }
  }

  // s~(r) x_{+-a}(a) s~(r)^-1 = x_{-+a}(a r^{-+2})
  void sl2(std::vector<RootWord>& out, std::size_t i) const {
    for (Code r : ring.units()) {
      Code r2 = ring.mul(r, r);
      for (int sign : {1, -1}) {
        Code scale = sign > 0 ? ring.inv(r2) : r2;
        for (Code a = 1; a < ring.size(); ++a) {
          out.push_back(join({s_tilde(i, r), x(simple(i, sign), a), inverse(s_tilde(i, r)),
                              inverse(x(simple(i, -sign), ring.mul(a, scale)))}));
        }
      }
    }
  }
};

bool is_a1_component(Gcm const& a, std::size_t i) {
  for (std::size_t j = 0; j < a.rank(); ++j) {
    if (j != i && a(i, j) != 0) return false;
  }
  return true;
}

std::vector<RootWord> steinberg_relators(Realization const& real) {
  Gcm const& a = real.gcm();
  RelatorBuilder b{real, *real.ring(), a.rank()};
  std::vector<RootWord> out;
  b.unipotent(out);
  b.commutators(out);
  for (std::size_t i = 0; i < a.rank(); ++i) b.symbols(out, i, true);
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (is_a1_component(a, i)) b.sl2(out, i);
  }
  return out;
}

std::string root_gen_name(Root const& r, Ring const& ring, Code v) {
  std::string s = "x[";
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(r[k]);
  }
  return s + "](" + ring.format(v) + ")";
}

}  // namespace

RootPresentation sl2_local_presentation(RingPtr const& ring) {
  auto loc = locality(ring);
  if (!loc.local) throw NotLocal(ring->name() + " is not local: " + loc.witness);
  Realization real(Gcm::parse("A1"), ring);
  RootPresentation out;
  std::map<std::pair<std::size_t, Code>, std::size_t> id;
  for (std::size_t k = 0; k < real.roots().size(); ++k) {
    bool plus = is_positive(real.roots()[k]);
    for (Code v = 1; v < ring->size(); ++v) {
      id[{k, v}] = out.pres.add_generator(fmt::format("x{}({})", plus ? "+" : "-", ring->format(v)));
      out.gens.push_back({real.roots()[k], v});
    }
  }
  RelatorBuilder b{real, *ring, 1};
  std::vector<RootWord> rels;
  b.unipotent(rels);
  b.sl2(rels, 0);
  b.symbols(rels, 0, false);
  for (auto const& rw : rels) {
    Word w;
    for (auto const& s : rw) {
      if (s.value != 0) w.push_back(gen_letter(id.at({s.root, s.value}), s.inv));
    }
    out.pres.add_relator(w);
  }
  return out;
}

RootPresentation steinberg_presentation(Gcm const& a, RingPtr const& ring) {
  if (!is_spherical(a)) throw NotSpherical(a.str() + " is not spherical");
  Realization real(a, ring);
  RootPresentation out;
  std::map<std::pair<std::size_t, Code>, std::size_t> id;
  for (std::size_t k = 0; k < real.roots().size(); ++k) {
    for (Code v = 1; v < ring->size(); ++v) {
      id[{k, v}] = out.pres.add_generator(root_gen_name(real.roots()[k], *ring, v));
      out.gens.push_back({real.roots()[k], v});
    }
  }
  for (auto const& rw : steinberg_relators(real)) {
    Word w;
    for (auto const& s : rw) {
      if (s.value != 0) w.push_back(gen_letter(id.at({s.root, s.value}), s.inv));
    }
    out.pres.add_relator(w);
  }
  return out;
}

CurtisTits curtis_tits_presentation(Gcm const& a, RingPtr const& ring) {
  if (!is_two_spherical(a)) throw NotTwoSpherical(a.str() + " is not 2-spherical");
  CurtisTits ct;
  auto co = satisfies_co(ring, a);
  if (!co.ok) ct.flat.warnings.push_back("condition (co) fails: " + co.witness);
  std::size_t n = a.rank();
  std::map<std::tuple<std::size_t, int, Code>, std::size_t> id;
  for (std::size_t i = 0; i < n; ++i) {
    for (int sign : {1, -1}) {
      Root r = simple_root(n, i);
      if (sign < 0) r = negate(r);
      for (Code v = 1; v < ring->size(); ++v) {
        id[{i, sign, v}] = ct.flat.pres.add_generator(root_gen_name(r, *ring, v));
        ct.flat.gens.push_back({r, v});
      }
    }
  }
  if (n == 1) {
    ct.vertices.push_back({0});
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) ct.vertices.push_back({i, j});
    }
  }
  for (auto const& J : ct.vertices) {
    Gcm aj = a.restrict(J);
    Realization real(aj, ring);
    std::size_t m = J.size();
    auto letter = [&](std::size_t local, int sign, Code v, bool inv) {
      return gen_letter(id.at({J[local], sign, v}), inv);
    };
    // Words for the elements of <U_{e alpha_j} : j in J>, breadth first.
    std::map<std::pair<std::size_t, Code>, Word> elim;
    for (int sign : {1, -1}) {
      std::unordered_map<Mat, Word, MatHash> words;
      std::vector<Mat> order{real.identity()};
      words.emplace(real.identity(), Word{});
      for (std::size_t k = 0; k < order.size(); ++k) {
        for (std::size_t local = 0; local < m; ++local) {
          for (Code v = 1; v < ring->size(); ++v) {
            Mat next = real.mul(order[k], real.x_simple(local, sign, v));
            if (words.count(next)) continue;
            Word w = words.at(order[k]);
            w.push_back(letter(local, sign, v, false));
            words.emplace(next, std::move(w));
            order.push_back(next);
          }
        }
      }
      for (std::size_t k = 0; k < real.roots().size(); ++k) {
        Root const& g = real.roots()[k];
        if ((sign > 0) != is_positive(g) || std::abs(height(g)) == 1) continue;
        for (Code v = 1; v < ring->size(); ++v) {
          auto it = words.find(real.x(k, v));
          if (it == words.end()) {
            throw EliminationFailed(fmt::format(
                "x_{}({}) is not in the subgroup generated by the simple root groups of {} over {}",
                root_str(g), ring->format(v), aj.str(), ring->name()));
          }
          elim[{k, v}] = it->second;
          ct.eliminations.push_back({J, g, v, it->second});
        }
      }
    }
    for (auto const& rw : steinberg_relators(real)) {
      Word w;
      for (auto const& s : rw) {
        if (s.value == 0) continue;
        Root const& g = real.roots()[s.root];
        Word piece;
        if (std::abs(height(g)) == 1) {
          std::size_t local = static_cast<std::size_t>(
              std::find_if(g.begin(), g.end(), [](int c) { return c != 0; }) - g.begin());
          piece = {letter(local, is_positive(g) ? 1 : -1, s.value, false)};
        } else {
          piece = elim.at({s.root, s.value});
        }
        if (s.inv) piece = inverse(piece);
        w.insert(w.end(), piece.begin(), piece.end());
      }
      ct.flat.pres.add_relator(w);
    }
  }
  return ct;
}

std::vector<Mat> generator_images(RootPresentation const& p, Realization const& real) {
  std::vector<Mat> out;
  for (auto const& g : p.gens) out.push_back(real.x(g.root, g.value));
  return out;
}

Mat evaluate(Word const& w, std::vector<Mat> const& images, std::vector<Mat> const& inverses,
             Realization const& real) {
  Mat m = real.identity();
  for (Letter l : w) m = real.mul(m, (l & 1) ? inverses[l / 2] : images[l / 2]);
  return m;
}

IsoVerdict verify_iso_to_matrix_group(Presentation const& p, std::vector<Mat> const& images,
                                      FiniteGroup const& g, std::size_t limit,
                                      std::vector<Word> const& subgroup,
                                      std::size_t subgroup_order) {
  Realization const& real = g.real();
  IsoVerdict v;
  v.group_order = g.order();
  std::vector<Mat> inverses;
  for (auto const& m : images) inverses.push_back(real.inverse(m));
  v.homomorphism = true;
  for (auto const& r : p.relators) {
    if (!(evaluate(r, images, inverses, real) == real.identity())) {
      v.homomorphism = false;
      v.witness = "relator " + p.word_str(r) + " is not the identity";
      break;
    }
  }
  std::vector<std::size_t> idx;
  for (auto const& m : images) idx.push_back(g.index_of(m));
  std::size_t reached = count(g.closure(idx));
  v.surjective = reached == g.order();
  if (!v.surjective && v.witness.empty()) {
    v.witness = fmt::format("images generate {} of {} elements", reached, g.order());
  }
  if (!subgroup.empty()) {
    std::vector<std::size_t> sub;
    for (auto const& w : subgroup) sub.push_back(g.index_of(evaluate(w, images, inverses, real)));
    std::size_t h = count(g.closure(sub));
    if (h != subgroup_order) {
      throw std::invalid_argument(
          fmt::format("subgroup image has {} elements, expected {}", h, subgroup_order));
    }
  }
  auto table = todd_coxeter(p, subgroup, limit);
  v.presentation_order = table.cosets * (subgroup.empty() ? 1 : subgroup_order);
  v.injective = v.presentation_order == g.order();
  if (!v.injective && v.witness.empty()) {
    v.witness = fmt::format("presentation order {} differs from group order {}",
                            v.presentation_order, g.order());
  }
  return v;
}

}  // namespace kmc
