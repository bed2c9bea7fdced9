#include "kmc/twin.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace kmc {

OppositionDatum::OppositionDatum(ChamberSystem p, ChamberSystem m)
    : plus(std::move(p)), minus(std::move(m)), op(plus.size() * minus.size(), 0) {
  if (plus.rank() != minus.rank()) {
    throw std::invalid_argument("opposition datum: the two systems have different index sets");
  }
}

std::vector<std::size_t> OppositionDatum::opposites(int sign, std::size_t c) const {
  std::vector<std::size_t> out;
  std::size_t n = side(-sign).size();
  for (std::size_t x = 0; x < n; ++x) {
    if (opposite_signed(sign, c, x)) out.push_back(x);
  }
  return out;
}

std::size_t OppositionDatum::op_count() const {
  return static_cast<std::size_t>(std::count(op.begin(), op.end(), 1));
}

OppositionDatum OppositionDatum::from_text(std::string_view text) {
  std::string blocks[2];
  std::vector<std::pair<std::size_t, std::string>> op_lines;
  int cur = -1;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line.substr(0, line.find('#'));
    std::istringstream ts(body);
    std::string first;
    if (!(ts >> first)) continue;
    if (first == "[+]" || first == "[-]") {
      cur = first == "[+]" ? 0 : 1;
      continue;
    }
    if (first == "op:") {
      op_lines.emplace_back(lineno, body.substr(body.find("op:") + 3));
      continue;
    }
    if (cur < 0) throw ParseError(fmt::format("opposition datum line {}: outside a block", lineno));
    blocks[cur] += body + "\n";
  }
  OppositionDatum d(ChamberSystem::from_text(blocks[0]), ChamberSystem::from_text(blocks[1]));
  for (auto const& [no, rest] : op_lines) {
    std::istringstream ts(rest);
    std::string x, y;
    if (!(ts >> x)) throw ParseError(fmt::format("opposition datum line {}: empty op line", no));
    auto cx = d.plus.find(x);
    if (!cx) throw ParseError(fmt::format("opposition datum line {}: unknown chamber {}", no, x));
    while (ts >> y) {
      auto cy = d.minus.find(y);
      if (!cy) throw ParseError(fmt::format("opposition datum line {}: unknown chamber {}", no, y));
      d.set_opposite(*cx, *cy);
    }
  }
  return d;
}

std::string OppositionDatum::to_text() const {
  std::string out = "[+]\n" + plus.to_text() + "[-]\n" + minus.to_text();
  for (std::size_t x = 0; x < plus.size(); ++x) {
    auto ys = opposites(1, x);
    if (ys.empty()) continue;
    out += "op: " + plus.name(x);
    for (std::size_t y : ys) out += " " + minus.name(y);
    out += "\n";
  }
  return out;
}

OppSystem build_opp(OppositionDatum const& d) {
  OppSystem out;
  std::vector<std::string> names;
  for (std::size_t x = 0; x < d.plus.size(); ++x) {
    for (std::size_t y = 0; y < d.minus.size(); ++y) {
      if (!d.opposite(x, y)) continue;
      out.pairs.emplace_back(x, y);
      names.push_back("(" + d.plus.name(x) + "," + d.minus.name(y) + ")");
    }
  }
  std::vector<std::vector<std::size_t>> labels(d.plus.rank());
  for (std::size_t i = 0; i < d.plus.rank(); ++i) {
    std::size_t m = d.minus.classes(i).size();
    for (auto [x, y] : out.pairs) labels[i].push_back(d.plus.cls(i, x) * m + d.minus.cls(i, y));
  }
  out.system = ChamberSystem(out.pairs.size(), labels, names);
  return out;
}

namespace {

std::string cname(OppositionDatum const& d, int sign, std::size_t c) {
  return (sign > 0 ? "+" : "-") + d.side(sign).name(c);
}

// Is the chamber set (given as a mask) connected using i-adjacency, i in J?
bool set_connected(ChamberSystem const& s, std::vector<std::size_t> const& members,
                   IndexSet const& J, std::vector<char>& mark) {
  if (members.size() <= 1) return true;
  for (std::size_t c : members) mark[c] = 1;
  std::vector<std::size_t> stack{members[0]};
  mark[members[0]] = 2;
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    for (std::size_t j : J) {
      for (std::size_t y : s.panel(j, x)) {
        if (mark[y] != 1) continue;
        mark[y] = 2;
        ++reached;
        stack.push_back(y);
      }
    }
  }
  for (std::size_t c : members) mark[c] = 0;
  return reached == members.size();
}

IndexSet all_indices(std::size_t rank) {
  IndexSet out(rank);
  for (std::size_t i = 0; i < rank; ++i) out[i] = i;
  return out;
}

bool tcs1_violated(OppositionDatum const& d, int e, std::size_t c, std::size_t dd, std::size_t x,
                   std::size_t y, std::size_t i, std::size_t j) {
  ChamberSystem const& s = d.side(e);
  ChamberSystem const& t = d.side(-e);
  return i != j && s.equivalent(i, c, dd) && t.equivalent(j, x, y) && d.opposite_signed(e, dd, x) &&
         d.opposite_signed(e, c, x) && d.opposite_signed(e, c, y) && !d.opposite_signed(e, dd, y);
}

bool tcs2_holds(OppositionDatum const& d, int e, std::size_t c, std::size_t dd, std::size_t x,
                std::size_t i) {
  for (std::size_t y : d.side(-e).panel(i, x)) {
    if (d.opposite_signed(e, c, y) && d.opposite_signed(e, dd, y)) return true;
  }
  return false;
}

// Residue ids of every chamber for the index set J.
std::vector<std::size_t> residue_ids(ChamberSystem const& s, IndexSet const& J) {
  std::vector<std::size_t> id(s.size(), static_cast<std::size_t>(-1));
  std::size_t next = 0;
  for (std::size_t c = 0; c < s.size(); ++c) {
    if (id[c] != static_cast<std::size_t>(-1)) continue;
    for (std::size_t r : residue(s, c, J)) id[r] = next;
    ++next;
  }
  return id;
}

std::vector<std::size_t> tcs3_piece(OppositionDatum const& d, int e, std::size_t c,
                                    std::size_t r, IndexSet const& J) {
  std::vector<std::size_t> out;
  auto res = residue(d.side(-e), r, J);
  for (std::size_t x : res) {
    if (d.opposite_signed(e, c, x)) out.push_back(x);
  }
  return out;
}

// Backtracking search for a valid omega_c when both sides are tiny.
std::optional<std::vector<std::size_t>> search_omega(OppositionDatum const& d, int e,
                                                     std::size_t c) {
  ChamberSystem const& s = d.side(e);
  ChamberSystem const& t = d.side(-e);
  if (d.opposites(e, c).empty()) return std::nullopt;
  std::size_t n = t.size();
  std::vector<std::vector<std::size_t>> dom(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (d.opposite_signed(e, c, x)) {
      dom[x] = {c};
    } else {
      for (std::size_t y = 0; y < s.size(); ++y) {
        if (d.opposite_signed(e, y, x)) dom[x].push_back(y);
      }
    }
  }
  std::vector<std::size_t> w(n);
  std::function<bool(std::size_t)> go = [&](std::size_t x) {
    if (x == n) return true;
    for (std::size_t v : dom[x]) {
      bool ok = true;
      for (std::size_t i = 0; i < t.rank() && ok; ++i) {
        for (std::size_t y : t.panel(i, x)) {
          if (y < x && !s.equivalent(i, w[y], v)) {
            ok = false;
            break;
          }
        }
      }
      if (!ok) continue;
      w[x] = v;
      if (go(x + 1)) return true;
    }
    return false;
  };
  if (go(0)) return w;
  return std::nullopt;
}

}  // namespace

std::string omega_defect(OppositionDatum const& d, int sign, std::size_t c,
                         std::vector<std::size_t> const& omega) {
  ChamberSystem const& s = d.side(sign);
  ChamberSystem const& t = d.side(-sign);
  if (omega.size() != t.size()) return "omega has the wrong domain size";
  for (std::size_t x = 0; x < t.size(); ++x) {
    if (omega[x] >= s.size()) return fmt::format("omega({}) is not a chamber", cname(d, -sign, x));
    if (!d.opposite_signed(sign, omega[x], x)) {
      return fmt::format("omega({}) = {} is not opposite", cname(d, -sign, x),
                         cname(d, sign, omega[x]));
    }
    if (d.opposite_signed(sign, c, x) && omega[x] != c) {
      return fmt::format("omega({}) = {} although {} is opposite {}", cname(d, -sign, x),
                         cname(d, sign, omega[x]), cname(d, -sign, x), cname(d, sign, c));
    }
  }
  if (d.opposites(sign, c).empty()) return fmt::format("{} has no opposite chamber", cname(d, sign, c));
  for (std::size_t i = 0; i < t.rank(); ++i) {
    for (auto const& cls : t.classes(i)) {
      for (std::size_t y : cls) {
        if (!s.equivalent(i, omega[cls[0]], omega[y])) {
          return fmt::format("{} ~{} {} but their images are not {}-adjacent", cname(d, -sign, cls[0]),
                             t.index_names()[i], cname(d, -sign, y), t.index_names()[i]);
        }
      }
    }
  }
  return {};
}

TcsVerdict check_tcs(OppositionDatum const& d, int axiom, OmegaSupplier const& supplier) {
  TcsVerdict v;
  v.axiom = axiom;
  v.method = "exhaustive";
  std::size_t rank = d.plus.rank();
  auto fail = [&](int e, std::vector<std::size_t> ch, std::vector<std::size_t> idx, std::string msg) {
    v.pass = false;
    v.witness = TcsWitness{e, std::move(ch), std::move(idx)};
    v.detail = std::move(msg);
  };
  for (int e : {1, -1}) {
    ChamberSystem const& s = d.side(e);
    ChamberSystem const& t = d.side(-e);
    if (axiom == 1) {
      for (std::size_t c = 0; c < s.size(); ++c) {
        auto cop = d.opposites(e, c);
        for (std::size_t i = 0; i < rank; ++i) {
          for (std::size_t dd : s.panel(i, c)) {
            for (std::size_t x : cop) {
              if (!d.opposite_signed(e, dd, x)) continue;
              for (std::size_t j = 0; j < rank; ++j) {
                if (j == i) continue;
                for (std::size_t y : t.panel(j, x)) {
                  ++v.checked;
                  if (tcs1_violated(d, e, c, dd, x, y, i, j)) {
                    fail(e, {c, dd, x, y}, {i, j},
                         fmt::format("{} ~{} {}, {} ~{} {}, {} op {} op {} op {} but not {} op {}",
                                     cname(d, e, c), s.index_names()[i], cname(d, e, dd),
                                     cname(d, -e, x), s.index_names()[j], cname(d, -e, y),
                                     cname(d, e, dd), cname(d, -e, x), cname(d, e, c),
                                     cname(d, -e, y), cname(d, e, dd), cname(d, -e, y)));
                    return v;
                  }
                }
              }
            }
          }
        }
      }
    } else if (axiom == 2) {
      for (std::size_t c = 0; c < s.size(); ++c) {
        auto cop = d.opposites(e, c);
        for (std::size_t i = 0; i < rank; ++i) {
          for (std::size_t dd : s.panel(i, c)) {
            for (std::size_t x : cop) {
              ++v.checked;
              if (!tcs2_holds(d, e, c, dd, x, i)) {
                fail(e, {c, dd, x}, {i},
                     fmt::format("{} ~{} {} and {} op {}: no y ~{} {} opposite both",
                                 cname(d, e, c), s.index_names()[i], cname(d, e, dd),
                                 cname(d, -e, x), cname(d, e, c), s.index_names()[i],
                                 cname(d, -e, x)));
                return v;
              }
            }
          }
        }
      }
    } else if (axiom == 3) {
      std::vector<char> mark(t.size(), 0);
      auto sets = small_index_sets(rank);
      std::vector<std::vector<std::size_t>> ids;
      for (auto const& J : sets) ids.push_back(residue_ids(t, J));
      for (std::size_t c = 0; c < s.size(); ++c) {
        auto cop = d.opposites(e, c);
        ++v.checked;
        if (!set_connected(t, cop, all_indices(rank), mark)) {
          fail(e, {c}, {}, fmt::format("{}^op is not connected", cname(d, e, c)));
          return v;
        }
        for (std::size_t k = 0; k < sets.size(); ++k) {
          std::map<std::size_t, std::vector<std::size_t>> pieces;
          for (std::size_t x : cop) pieces[ids[k][x]].push_back(x);
          for (auto const& [rid, piece] : pieces) {
            ++v.checked;
            if (!set_connected(t, piece, sets[k], mark)) {
              std::size_t r = residue(t, piece[0], sets[k])[0];
              std::vector<std::string> jn;
              for (std::size_t j : sets[k]) jn.push_back(s.index_names()[j]);
              fail(e, {c, r}, sets[k],
                   fmt::format("{}^op meets the {{{}}}-residue of {} in a disconnected set",
                               cname(d, e, c), fmt::join(jn, ","), cname(d, -e, r)));
              return v;
            }
          }
        }
      }
    } else if (axiom == 4) {
      bool search = !supplier;
      if (search) {
        if (d.plus.size() > omega_search_cap || d.minus.size() > omega_search_cap) {
          throw SearchInfeasible(fmt::format(
              "TCS4 needs an omega supplier above {} chambers per side", omega_search_cap));
        }
        v.method = "search";
      } else {
        v.method = "supplier";
      }
      for (std::size_t c = 0; c < s.size(); ++c) {
        ++v.checked;
        if (search) {
          if (!search_omega(d, e, c)) {
            fail(e, {c}, {}, fmt::format("no chamber map omega_{} exists", cname(d, e, c)));
            return v;
          }
        } else {
          std::string defect = omega_defect(d, e, c, supplier(e, c));
          if (!defect.empty()) {
            fail(e, {c}, {}, fmt::format("omega_{}: {}", cname(d, e, c), defect));
            return v;
          }
        }
      }
    } else {
      throw std::invalid_argument("check_tcs: axiom must be 1..4");
    }
  }
  return v;
}

bool witness_violates(OppositionDatum const& d, int axiom, TcsWitness const& w,
                      OmegaSupplier const& supplier) {
  int e = w.sign;
  auto const& ch = w.chambers;
  switch (axiom) {
    case 1:
      return tcs1_violated(d, e, ch[0], ch[1], ch[2], ch[3], w.indices[0], w.indices[1]);
    case 2:
      return d.side(e).equivalent(w.indices[0], ch[0], ch[1]) && d.opposite_signed(e, ch[0], ch[2]) &&
             !tcs2_holds(d, e, ch[0], ch[1], ch[2], w.indices[0]);
    case 3: {
      ChamberSystem const& t = d.side(-e);
      std::vector<char> mark(t.size(), 0);
      if (ch.size() == 1) {
        return !set_connected(t, d.opposites(e, ch[0]), all_indices(t.rank()), mark);
      }
      return !set_connected(t, tcs3_piece(d, e, ch[0], ch[1], w.indices), w.indices, mark);
    }
    case 4:
      if (supplier) return !omega_defect(d, e, ch[0], supplier(e, ch[0])).empty();
      return !search_omega(d, e, ch[0]);
    default:
      throw std::invalid_argument("witness_violates: axiom must be 1..4");
  }
}

MainTheoremReport verify_main_theorem(OppositionDatum const& d, OmegaSupplier const& supplier,
                                      std::size_t limit) {
  MainTheoremReport r;
  bool all = true;
  for (int a = 1; a <= 4; ++a) {
    try {
      r.tcs[static_cast<std::size_t>(a - 1)] = check_tcs(d, a, supplier);
    } catch (SearchInfeasible const& ex) {
      TcsVerdict v;
      v.axiom = a;
      v.pass = false;
      v.method = "infeasible";
      v.detail = ex.what();
      r.tcs[static_cast<std::size_t>(a - 1)] = v;
    }
    all = all && r.tcs[static_cast<std::size_t>(a - 1)].pass;
  }
  r.plus = simple_connectivity(d.plus, limit);
  r.minus = simple_connectivity(d.minus, limit);
  OppSystem opp = build_opp(d);
  r.opp_chambers = opp.system.size();
  r.opp = simple_connectivity(opp.system, limit);
  r.hypotheses = all && r.plus.simply_connected && r.minus.simply_connected;
  r.violation = r.hypotheses && !r.opp.simply_connected;
  return r;
}

}  // namespace kmc
