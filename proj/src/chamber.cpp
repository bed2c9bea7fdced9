#include "kmc/chamber.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "kmc/ring.hpp"

namespace kmc {

ChamberSystem::ChamberSystem(std::size_t chambers,
                             std::vector<std::vector<std::size_t>> const& labels,
                             std::vector<std::string> names)
    : n_(chambers), names_(std::move(names)) {
  for (auto const& row : labels) {
    if (row.size() != n_) throw std::invalid_argument("ChamberSystem: label row has wrong length");
    std::map<std::size_t, std::size_t> renum;
    std::vector<std::size_t> out(n_);
    for (std::size_t c = 0; c < n_; ++c) {
      out[c] = renum.emplace(row[c], renum.size()).first->second;
    }
    labels_.push_back(std::move(out));
  }
  if (names_.empty()) {
    for (std::size_t c = 0; c < n_; ++c) names_.push_back(std::to_string(c));
  }
  if (names_.size() != n_) throw std::invalid_argument("ChamberSystem: wrong number of names");
  for (std::size_t i = 0; i < labels_.size(); ++i) index_names_.push_back(std::to_string(i + 1));
  finish();
}

void ChamberSystem::finish() {
  classes_.assign(labels_.size(), {});
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t k = labels_[i][c];
      if (k >= classes_[i].size()) classes_[i].resize(k + 1);
      classes_[i][k].push_back(c);
    }
  }
  nbrs_.assign(n_, {});
  for (std::size_t c = 0; c < n_; ++c) {
    auto& nb = nbrs_[c];
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      for (std::size_t d : panel(i, c)) {
        if (d != c) nb.push_back(d);
      }
    }
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
}

bool ChamberSystem::adjacent(std::size_t c, std::size_t d) const {
  if (c == d) return true;
  return std::binary_search(nbrs_[c].begin(), nbrs_[c].end(), d);
}

std::optional<std::size_t> ChamberSystem::find(std::string_view name) const {
  for (std::size_t c = 0; c < n_; ++c) {
    if (names_[c] == name) return c;
  }
  return std::nullopt;
}

namespace {

std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

bool all_digits(std::string const& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

}  // namespace

ChamberSystem ChamberSystem::from_text(std::string_view text) {
  std::vector<std::string> names;
  std::map<std::string, std::size_t> id;
  auto chamber = [&](std::string const& nm) {
    auto [it, fresh] = id.emplace(nm, names.size());
    if (fresh) names.push_back(nm);
    return it->second;
  };
  std::map<std::string, std::vector<std::vector<std::size_t>>> blocks;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto colon = line.find(':');
    if (tokens(line).empty()) continue;
    if (colon == std::string::npos) {
      throw ParseError(fmt::format("chamber system line {}: expected 'index: chambers'", lineno));
    }
    auto head = tokens(line.substr(0, colon));
    if (head.size() != 1) throw ParseError(fmt::format("chamber system line {}: bad index", lineno));
    std::vector<std::size_t> members;
    for (auto const& t : tokens(line.substr(colon + 1))) members.push_back(chamber(t));
    if (head[0] == "chambers") continue;
    blocks[head[0]].push_back(std::move(members));
  }
  std::vector<std::string> index_names;
  for (auto const& [k, v] : blocks) index_names.push_back(k);
  bool numeric = std::all_of(index_names.begin(), index_names.end(), all_digits);
  if (numeric) {
    std::sort(index_names.begin(), index_names.end(), [](std::string const& a, std::string const& b) {
      return std::stoull(a) < std::stoull(b);
    });
  }
  std::size_t n = names.size();
  std::vector<std::vector<std::size_t>> labels;
  for (auto const& nm : index_names) {
    std::vector<std::size_t> row(n);
    std::vector<char> seen(n, 0);
    std::size_t next = 0;
    for (auto const& cls : blocks[nm]) {
      for (std::size_t c : cls) {
        if (seen[c]) {
          throw ParseError(fmt::format("chamber {} appears twice for index {}", names[c], nm));
        }
        seen[c] = 1;
        row[c] = next;
      }
      ++next;
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (!seen[c]) row[c] = next++;
    }
    labels.push_back(std::move(row));
  }
  ChamberSystem s(n, labels, names);
  s.index_names_ = index_names;
  return s;
}

std::string ChamberSystem::to_text() const {
  std::string out = "chambers:";
  for (auto const& nm : names_) out += " " + nm;
  out += "\n";
  for (std::size_t i = 0; i < rank(); ++i) {
    for (auto const& cls : classes_[i]) {
      if (cls.size() < 2) continue;
      out += index_names_[i] + ":";
      for (std::size_t c : cls) out += " " + names_[c];
      out += "\n";
    }
  }
  return out;
}

std::string ChamberSystem::to_tsv() const {
  std::string out = "chamber";
  for (auto const& nm : index_names_) out += "\t" + nm;
  out += "\n";
  for (std::size_t c = 0; c < n_; ++c) {
    out += names_[c];
    for (std::size_t i = 0; i < rank(); ++i) out += "\t" + std::to_string(labels_[i][c]);
    out += "\n";
  }
  return out;
}

ChamberSystem ChamberSystem::relabel(std::vector<std::size_t> const& perm) const {
  std::vector<std::vector<std::size_t>> labels(rank(), std::vector<std::size_t>(n_));
  std::vector<std::string> names(n_);
  for (std::size_t c = 0; c < n_; ++c) {
    for (std::size_t i = 0; i < rank(); ++i) labels[i][perm[c]] = labels_[i][c];
    names[perm[c]] = names_[c];
  }
  ChamberSystem s(n_, labels, names);
  s.index_names_ = index_names_;
  return s;
}

ChamberSystem ChamberSystem::permute_indices(std::vector<std::size_t> const& perm) const {
  std::vector<std::vector<std::size_t>> labels(rank());
  std::vector<std::string> inames(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    labels[perm[i]] = labels_[i];
    inames[perm[i]] = index_names_[i];
  }
  ChamberSystem s(n_, labels, names_);
  s.index_names_ = inames;
  return s;
}

std::vector<IndexSet> small_index_sets(std::size_t rank) {
  std::vector<IndexSet> out{{}};
  for (std::size_t i = 0; i < rank; ++i) out.push_back({i});
  for (std::size_t i = 0; i < rank; ++i) {
    for (std::size_t j = i + 1; j < rank; ++j) out.push_back({i, j});
  }
  return out;
}

namespace {

std::vector<std::size_t> j_neighbors(ChamberSystem const& s, std::size_t c, IndexSet const& J) {
  std::vector<std::size_t> out;
  for (std::size_t j : J) {
    for (std::size_t d : s.panel(j, c)) {
      if (d != c) out.push_back(d);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool j_adjacent(ChamberSystem const& s, std::size_t c, std::size_t d, IndexSet const& J) {
  return std::any_of(J.begin(), J.end(), [&](std::size_t j) { return s.equivalent(j, c, d); });
}

}  // namespace

std::vector<std::size_t> residue(ChamberSystem const& s, std::size_t c, IndexSet const& J) {
  std::vector<char> seen(s.size(), 0);
  std::vector<std::size_t> stack{c};
  seen[c] = 1;
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    for (std::size_t j : J) {
      for (std::size_t d : s.panel(j, x)) {
        if (!seen[d]) {
          seen[d] = 1;
          stack.push_back(d);
        }
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < s.size(); ++d) {
    if (seen[d]) out.push_back(d);
  }
  return out;
}

bool is_connected(ChamberSystem const& s) {
  if (s.size() == 0) return true;
  IndexSet all(s.rank());
  for (std::size_t i = 0; i < s.rank(); ++i) all[i] = i;
  return residue(s, 0, all).size() == s.size();
}

bool is_gallery(ChamberSystem const& s, Gallery const& g) {
  if (g.empty()) return false;
  for (std::size_t c : g) {
    if (c >= s.size()) return false;
  }
  for (std::size_t k = 1; k < g.size(); ++k) {
    if (!s.adjacent(g[k - 1], g[k])) return false;
  }
  return true;
}

bool is_j_gallery(ChamberSystem const& s, Gallery const& g, IndexSet const& J) {
  if (g.empty()) return false;
  for (std::size_t k = 1; k < g.size(); ++k) {
    if (!j_adjacent(s, g[k - 1], g[k], J)) return false;
  }
  return true;
}

ReducedGallery reduce_gallery(Gallery const& g) {
  ReducedGallery r;
  if (g.empty()) return r;
  r.gallery.push_back(g[0]);
  for (std::size_t nu = 1; nu < g.size(); ++nu) {
    if (g[nu - 1] != g[nu]) {
      r.lambda.push_back(nu);
      r.gallery.push_back(g[nu]);
    }
  }
  return r;
}

bool elementary_homotopic(ChamberSystem const& s, Gallery const& g, Gallery const& h) {
  if (g.empty() || h.empty()) return false;
  std::size_t k = g.size() - 1, kp = h.size() - 1;
  std::size_t pre = 0;
  while (pre < g.size() && pre < h.size() && g[pre] == h[pre]) ++pre;
  std::size_t suf = 0;
  while (suf < g.size() && suf < h.size() && g[k - suf] == h[kp - suf]) ++suf;
  if (pre == 0 || suf == 0) return false;
  auto sets = small_index_sets(s.rank());
  // Widest shared prefix for each suffix length; shrinking the middle only
  // makes (H3) easier.
  for (std::size_t t = 0; t < suf; ++t) {
    if (t > k || t > kp) break;
    std::size_t mu = std::min({pre - 1, k - t, kp - t});
    Gallery a(g.begin() + static_cast<std::ptrdiff_t>(mu), g.end() - static_cast<std::ptrdiff_t>(t));
    Gallery b(h.begin() + static_cast<std::ptrdiff_t>(mu), h.end() - static_cast<std::ptrdiff_t>(t));
    for (auto const& J : sets) {
      if (is_j_gallery(s, a, J) && is_j_gallery(s, b, J)) return true;
    }
  }
  return false;
}

std::optional<std::size_t> Pi1Presentation::generator(std::size_t u, std::size_t v) const {
  auto const& row = out_[u];
  auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(v, std::size_t{0}));
  if (it == row.end() || it->first != v) return std::nullopt;
  return it->second;
}

Word Pi1Presentation::word(Gallery const& g) const {
  Word w;
  for (std::size_t k = 1; k < g.size(); ++k) {
    std::size_t u = g[k - 1], v = g[k];
    if (u == v) continue;
    if (auto e = generator(u, v)) w.push_back(gen_letter(*e, u > v));
  }
  return w;
}

namespace {

// BFS tree into parent (-1 at the root; entries must start at -2). Returns the
// chambers reached in visiting order.
std::vector<std::size_t> bfs_tree(std::vector<std::int64_t>& parent, std::size_t root,
                                  std::function<std::vector<std::size_t>(std::size_t)> const& nbrs) {
  parent[root] = -1;
  std::vector<std::size_t> order{root};
  for (std::size_t q = 0; q < order.size(); ++q) {
    for (std::size_t d : nbrs(order[q])) {
      if (parent[d] != -2) continue;
      parent[d] = static_cast<std::int64_t>(order[q]);
      order.push_back(d);
    }
  }
  return order;
}

bool is_tree_edge(std::vector<std::int64_t> const& parent, std::size_t u, std::size_t v) {
  return parent[u] == static_cast<std::int64_t>(v) || parent[v] == static_cast<std::int64_t>(u);
}

Gallery path_to_root(std::vector<std::int64_t> const& parent, std::size_t c) {
  Gallery p{c};
  while (parent[c] >= 0) {
    c = static_cast<std::size_t>(parent[c]);
    p.push_back(c);
  }
  return p;
}

}  // namespace

Pi1Presentation pi1_presentation(ChamberSystem const& s, std::size_t basepoint) {
  if (basepoint >= s.size()) throw std::out_of_range("pi1_presentation: bad basepoint");
  Pi1Presentation p;
  p.basepoint = basepoint;
  p.parent.assign(s.size(), -2);
  bfs_tree(p.parent, basepoint, [&](std::size_t c) { return s.neighbors(c); });
  for (std::size_t c = 0; c < s.size(); ++c) {
    if (p.parent[c] == -2) {
      throw Disconnected(fmt::format("chamber {} is not reachable from {}", s.name(c),
                                     s.name(basepoint)));
    }
  }
  p.out_.assign(s.size(), {});
  for (std::size_t u = 0; u < s.size(); ++u) {
    for (std::size_t v : s.neighbors(u)) {
      if (v < u || is_tree_edge(p.parent, u, v)) continue;
      std::size_t k = p.pres.add_generator(fmt::format("e{}_{}", s.name(u), s.name(v)));
      p.edges.emplace_back(u, v);
      p.out_[u].emplace_back(v, k);
      p.out_[v].emplace_back(u, k);
    }
  }
  for (auto& row : p.out_) std::sort(row.begin(), row.end());

  for (auto const& J : small_index_sets(s.rank())) {
    if (J.empty()) continue;
    std::vector<char> done(s.size(), 0);
    std::vector<std::int64_t> tree(s.size(), -2);
    auto nb = [&](std::size_t c) { return j_neighbors(s, c, J); };
    for (std::size_t root = 0; root < s.size(); ++root) {
      if (done[root]) continue;
      auto members = bfs_tree(tree, root, nb);
      std::sort(members.begin(), members.end());
      for (std::size_t u : members) {
        done[u] = 1;
        for (std::size_t v : nb(u)) {
          if (v < u || is_tree_edge(tree, u, v)) continue;
          Gallery cyc = path_to_root(tree, u);
          std::reverse(cyc.begin(), cyc.end());
          Gallery back = path_to_root(tree, v);
          cyc.insert(cyc.end(), back.begin(), back.end());
          p.pres.add_relator(p.word(cyc));
        }
      }
    }
  }
  return p;
}

namespace {

// Generators forced trivial or equal to another generator (or its inverse)
// by relators of length one or two, applied until nothing changes.
struct Simplified {
  Presentation pres;
  std::vector<std::int64_t> image;  // old generator -> letter, or -1 if trivial

  Word rewrite(Word const& w) const {
    Word out;
    for (Letter l : w) {
      std::int64_t m = image[l / 2];
      if (m < 0) continue;
      out.push_back(static_cast<Letter>(m) ^ (l & 1));
    }
    return free_reduce(out);
  }
};

Simplified simplify(Presentation const& p) {
  std::size_t g = p.generators.size();
  std::vector<std::size_t> parent(g);
  std::vector<char> flip(g, 0), trivial(g, 0);
  for (std::size_t k = 0; k < g; ++k) parent[k] = k;
  // find: root and parity of generator k relative to its root
  std::function<std::pair<std::size_t, char>(std::size_t)> find = [&](std::size_t k) {
    if (parent[k] == k) return std::make_pair(k, char{0});
    auto [r, f] = find(parent[k]);
    flip[k] = static_cast<char>(flip[k] ^ f);
    parent[k] = r;
    return std::make_pair(r, flip[k]);
  };
  auto letter_of = [&](Letter l) -> std::int64_t {
    auto [r, f] = find(l / 2);
    if (trivial[r]) return -1;
    return static_cast<std::int64_t>(2 * r + ((l & 1) ^ static_cast<Letter>(f)));
  };
  std::vector<Word> rels = p.relators;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& r : rels) {
      Word w;
      for (Letter l : r) {
        std::int64_t m = letter_of(l);
        if (m >= 0) w.push_back(static_cast<Letter>(m));
      }
      r = cyclic_reduce(w);
      if (r.size() == 1) {
        trivial[r[0] / 2] = 1;
        changed = true;
      } else if (r.size() == 2 && r[0] / 2 != r[1] / 2) {
        // a b = 1: root of a becomes b^-1
        std::size_t ra = r[0] / 2, rb = r[1] / 2;
        parent[ra] = rb;
        flip[ra] = static_cast<char>((r[0] & 1) == (r[1] & 1));
        changed = true;
      }
    }
  }
  Simplified out;
  std::vector<std::int64_t> newid(g, -1);
  for (std::size_t k = 0; k < g; ++k) {
    auto [r, f] = find(k);
    if (trivial[r]) continue;
    if (newid[r] < 0) {
      newid[r] = static_cast<std::int64_t>(out.pres.add_generator(p.generators[r]));
    }
  }
  out.image.assign(g, -1);
  for (std::size_t k = 0; k < g; ++k) {
    auto [r, f] = find(k);
    if (trivial[r]) continue;
    out.image[k] = 2 * newid[r] + f;
  }
  for (auto const& r : p.relators) out.pres.add_relator(out.rewrite(r));
  return out;
}

// Row-echelon basis of the relation lattice of the abelianization.
struct Lattice {
  std::size_t dim = 0;
  std::vector<std::pair<std::size_t, std::vector<BigInt>>> pivots;  // (column, row)

  explicit Lattice(Presentation const& p) : dim(p.generators.size()) {
    std::vector<std::vector<BigInt>> rows;
    for (auto const& r : p.relators) rows.push_back(abelian(r));
    std::size_t next = 0;
    for (std::size_t col = 0; col < dim && next < rows.size(); ++col) {
      for (;;) {
        std::size_t best = rows.size();
        for (std::size_t k = next; k < rows.size(); ++k) {
          if (rows[k][col] == 0) continue;
          if (best == rows.size() || abs(rows[k][col]) < abs(rows[best][col])) best = k;
        }
        if (best == rows.size()) break;
        std::swap(rows[next], rows[best]);
        bool clean = true;
        for (std::size_t k = next + 1; k < rows.size(); ++k) {
          if (rows[k][col] == 0) continue;
          BigInt q = rows[k][col] / rows[next][col];
          for (std::size_t c = col; c < dim; ++c) rows[k][c] -= q * rows[next][c];
          if (rows[k][col] != 0) clean = false;
        }
        if (clean) {
          pivots.emplace_back(col, rows[next]);
          ++next;
          break;
        }
      }
    }
  }

  std::vector<BigInt> abelian(Word const& w) const {
    std::vector<BigInt> v(dim, 0);
    for (Letter l : w) v[l / 2] += (l & 1) ? -1 : 1;
    return v;
  }

  bool contains(std::vector<BigInt> v) const {
    for (auto const& [col, row] : pivots) {
      if (v[col] % row[col] != 0) return false;
      BigInt q = v[col] / row[col];
      for (std::size_t c = col; c < dim; ++c) v[c] -= q * row[c];
    }
    return std::all_of(v.begin(), v.end(), [](BigInt const& x) { return x == 0; });
  }

  bool full() const {
    if (pivots.size() != dim) return false;
    return std::all_of(pivots.begin(), pivots.end(),
                       [](auto const& p) { return abs(p.second[p.first]) == 1; });
  }
};

}  // namespace

SimpleConnectivity simple_connectivity(ChamberSystem const& s, std::size_t limit) {
  SimpleConnectivity out;
  out.connected = s.size() > 0 && is_connected(s);
  if (!out.connected) {
    out.method = "disconnected";
    return out;
  }
  Pi1Presentation p = pi1_presentation(s, 0);
  out.generators = p.pres.generators.size();
  out.relators = p.pres.relators.size();
  Simplified red = simplify(p.pres);
  out.surviving_generators = red.pres.generators.size();
  if (red.pres.generators.empty()) {
    out.simply_connected = true;
    out.cosets = 1;
    out.method = "elimination";
    return out;
  }
  if (!Lattice(red.pres).full()) {
    out.method = "abelianization";
    return out;
  }
  CosetTable t = todd_coxeter(red.pres, {}, limit);
  out.cosets = t.cosets;
  out.simply_connected = t.cosets == 1;
  out.method = "todd-coxeter";
  return out;
}

bool is_simply_connected(ChamberSystem const& s, std::size_t limit) {
  return simple_connectivity(s, limit).simply_connected;
}

bool null_homotopic(ChamberSystem const& s, Gallery const& g, std::size_t limit) {
  if (!is_gallery(s, g)) throw std::invalid_argument("null_homotopic: not a gallery");
  if (g.front() != g.back()) throw std::invalid_argument("null_homotopic: gallery is not closed");
  // Work in the connected component of the gallery.
  IndexSet all(s.rank());
  for (std::size_t i = 0; i < s.rank(); ++i) all[i] = i;
  auto comp = residue(s, g.front(), all);
  std::vector<std::size_t> pos(s.size(), 0);
  for (std::size_t k = 0; k < comp.size(); ++k) pos[comp[k]] = k;
  std::vector<std::vector<std::size_t>> labels(s.rank());
  for (std::size_t i = 0; i < s.rank(); ++i) {
    for (std::size_t c : comp) labels[i].push_back(s.cls(i, c));
  }
  ChamberSystem sub(comp.size(), labels);
  Gallery local;
  for (std::size_t c : reduce_gallery(g).gallery) local.push_back(pos[c]);

  Pi1Presentation p = pi1_presentation(sub, 0);
  Simplified red = simplify(p.pres);
  Word w = red.rewrite(p.word(local));
  if (w.empty()) return true;
  if (red.pres.relators.empty()) return false;
  Lattice lat(red.pres);
  if (!lat.contains(lat.abelian(w))) return false;
  CosetTable t = todd_coxeter(red.pres, {}, limit);
  return t.trace(0, w) == 0;
}

}  // namespace kmc
