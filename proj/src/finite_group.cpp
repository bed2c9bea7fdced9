#include "kmc/finite_group.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include <fmt/format.h>

namespace kmc {

namespace {
constexpr std::uint32_t empty_slot = std::numeric_limits<std::uint32_t>::max();
}

FiniteGroup::FiniteGroup(Realization real, std::size_t cap) : real_(std::move(real)) {
  slots_.assign(1024, empty_slot);
  mask_ = slots_.size() - 1;
  auto gens = real_.generators();
  std::vector<Mat> gen_inv;
  for (auto const& s : gens) gen_inv.push_back(real_.inverse(s));
  std::vector<std::uint32_t> parent{0};
  std::vector<std::uint16_t> via{0};
  insert(real_.identity());
  for (std::size_t k = 0; k < elems_.size(); ++k) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      Mat m = real_.mul(elems_[k], gens[s]);
      if (find(m)) continue;
      if (elems_.size() >= cap) {
        throw CapExceeded(fmt::format("group over {} exceeds the cap of {} elements",
                                      real_.ring()->name(), cap));
      }
      insert(m);
      parent.push_back(static_cast<std::uint32_t>(k));
      via.push_back(static_cast<std::uint16_t>(s));
    }
  }
  // g = p s, so g^-1 = s^-1 p^-1 with p earlier in the order.
  inv_.assign(elems_.size(), 0);
  for (std::size_t k = 1; k < elems_.size(); ++k) {
    inv_[k] = static_cast<std::uint32_t>(index_of(real_.mul(gen_inv[via[k]], elems_[inv_[parent[k]]])));
  }
}

void FiniteGroup::insert(Mat const& m) {
  if (2 * (elems_.size() + 1) > slots_.size()) {
    slots_.assign(slots_.size() * 2, empty_slot);
    mask_ = slots_.size() - 1;
    for (std::size_t k = 0; k < elems_.size(); ++k) {
      std::size_t h = MatHash{}(elems_[k]) & mask_;
      while (slots_[h] != empty_slot) h = (h + 1) & mask_;
      slots_[h] = static_cast<std::uint32_t>(k);
    }
  }
  std::size_t h = MatHash{}(m)&mask_;
  while (slots_[h] != empty_slot) h = (h + 1) & mask_;
  slots_[h] = static_cast<std::uint32_t>(elems_.size());
  elems_.push_back(m);
}

std::optional<std::size_t> FiniteGroup::find(Mat const& m) const {
  std::size_t h = MatHash{}(m)&mask_;
  while (slots_[h] != empty_slot) {
    if (elems_[slots_[h]] == m) return slots_[h];
    h = (h + 1) & mask_;
  }
  return std::nullopt;
}

std::size_t FiniteGroup::index_of(Mat const& m) const {
  auto k = find(m);
  if (!k) throw NotEnumerated("matrix " + real_.alg().str(m) + " is not in the group");
  return *k;
}

std::size_t FiniteGroup::mul(std::size_t a, std::size_t b) const {
  return index_of(real_.mul(elems_[a], elems_[b]));
}

Subset FiniteGroup::closure(std::vector<std::size_t> const& gens) const {
  Subset in(order(), 0);
  in[0] = 1;
  std::vector<std::size_t> list{0};
  for (std::size_t k = 0; k < list.size(); ++k) {
    for (std::size_t s : gens) {
      std::size_t m = mul(list[k], s);
      if (!in[m]) {
        in[m] = 1;
        list.push_back(m);
      }
    }
  }
  return in;
}

Subset FiniteGroup::product(Subset const& x, Subset const& y) const {
  Subset out(order(), 0);
  auto ys = members(y);
  for (std::size_t a = 0; a < order(); ++a) {
    if (!x[a]) continue;
    for (std::size_t b : ys) out[mul(a, b)] = 1;
  }
  return out;
}

std::vector<std::size_t> members(Subset const& s) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k]) out.push_back(k);
  }
  return out;
}

std::size_t count(Subset const& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), 1)); }

Subset intersect(Subset const& a, Subset const& b) {
  Subset out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] && b[k];
  return out;
}

ChevalleyGroup::ChevalleyGroup(Gcm const& a, RingPtr ring, std::size_t cap) {
  if (!is_spherical(a)) throw NotSpherical(a.str() + " is not spherical");
  g_ = std::make_shared<FiniteGroup>(Realization(a, ring), cap);
  auto const& re = real();
  auto gens = additive_generators(*ring);
  std::vector<std::size_t> tg, up, um;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    for (Code u : ring->units()) tg.push_back(g_->index_of(re.torus(i, u)));
  }
  for (std::size_t k = 0; k < re.roots().size(); ++k) {
    for (Code r : gens) {
      (is_positive(re.roots()[k]) ? up : um).push_back(g_->index_of(re.x(k, r)));
    }
  }
  torus_ = g_->closure(tg);
  u_plus_ = g_->closure(up);
  u_minus_ = g_->closure(um);
  auto bp = tg, bm = tg;
  bp.insert(bp.end(), up.begin(), up.end());
  bm.insert(bm.end(), um.begin(), um.end());
  b_plus_ = g_->closure(bp);
  b_minus_ = g_->closure(bm);
  weyl_ = weyl_group(a);
  for (auto const& w : weyl_) weyl_reps_.push_back(g_->index_of(re.w_tilde(w)));
  loc_ = locality(ring);
}

Subset ChevalleyGroup::root_group(Root const& gamma) const {
  Subset s(order(), 0);
  std::size_t k = real().root_index(gamma);
  for (Code r : ring()->elements()) s[g_->index_of(real().x(k, r))] = 1;
  return s;
}

Subset ChevalleyGroup::levi(std::vector<std::size_t> const& J) const {
  std::vector<std::size_t> gens;
  for (std::size_t j : J) {
    for (int sign : {1, -1}) {
      for (Code r : additive_generators(*ring())) {
        gens.push_back(g_->index_of(real().x_simple(j, sign, r)));
      }
    }
  }
  return g_->closure(gens);
}

Subset ChevalleyGroup::parabolic(std::vector<std::size_t> const& J, int sign) const {
  std::vector<std::size_t> small;
  for (std::size_t i = 0; i < gcm().rank(); ++i) {
    for (Code u : ring()->units()) small.push_back(g_->index_of(real().torus(i, u)));
  }
  for (std::size_t k = 0; k < real().roots().size(); ++k) {
    Root const& r = real().roots()[k];
    bool take = sign > 0 ? is_positive(r) : is_negative(r);
    if (!take) {
      // U_{-sign alpha_j} for j in J
      int h = 0;
      std::size_t idx = 0;
      for (std::size_t m = 0; m < r.size(); ++m) {
        if (r[m] != 0) {
          h += std::abs(r[m]);
          idx = m;
        }
      }
      take = h == 1 && std::find(J.begin(), J.end(), idx) != J.end();
    }
    if (!take) continue;
    for (Code c : additive_generators(*ring())) small.push_back(g_->index_of(real().x(k, c)));
  }
  return g_->closure(small);
}

bool ChevalleyGroup::in_parabolic(Mat const& g, std::vector<std::size_t> const& J,
                                  int sign) const {
  auto k = g_->find(g);
  if (!k) throw NotEnumerated("element not in the enumerated group");
  if (J.empty()) return borel(sign)[*k];
  return parabolic(J, sign)[*k];
}

Subset const& ChevalleyGroup::big_cell() const {
  if (big_cell_.empty()) big_cell_ = g_->product(u_minus_, b_plus_);
  return big_cell_;
}

bool ChevalleyGroup::in_big_cell(Mat const& g) const {
  auto k = g_->find(g);
  if (!k) throw NotEnumerated("element not in the enumerated group");
  return big_cell()[*k];
}

std::vector<std::uint16_t> const& ChevalleyGroup::birkhoff_table() const {
  if (!birkhoff_.empty()) return birkhoff_;
  constexpr std::uint16_t unset = std::numeric_limits<std::uint16_t>::max();
  std::vector<std::uint16_t> table(order(), unset);
  auto bplus = members(b_plus_);
  for (std::size_t w = 0; w < weyl_.size(); ++w) {
    std::size_t n = weyl_reps_[w];
    std::size_t ninv = g_->inv(n);
    for (std::size_t u : members(u_minus_)) {
      if (!u_minus_[g_->mul(g_->mul(ninv, u), n)]) continue;
      std::size_t un = g_->mul(u, n);
      for (std::size_t b : bplus) {
        std::size_t x = g_->mul(un, b);
        if (table[x] != unset) {
          throw NotSupported("Birkhoff factorization is not unique over " + ring()->name());
        }
        table[x] = static_cast<std::uint16_t>(w);
      }
    }
  }
  if (std::find(table.begin(), table.end(), unset) != table.end()) {
    throw NotSupported("Birkhoff factorization is not total over " + ring()->name());
  }
  birkhoff_ = std::move(table);
  return birkhoff_;
}

BirkhoffFactors ChevalleyGroup::birkhoff(Mat const& g) const {
  std::size_t gi = g_->index_of(g);
  std::size_t w = birkhoff_table()[gi];
  std::size_t n = weyl_reps_[w];
  std::size_t ninv = g_->inv(n);
  for (std::size_t u : members(u_minus_)) {
    if (!u_minus_[g_->mul(g_->mul(ninv, u), n)]) continue;
    std::size_t b = g_->mul(g_->inv(g_->mul(u, n)), gi);
    if (!b_plus_[b]) continue;
    Mat const& bm = group()[b];
    Mat t = alg().diagonal_part(bm);
    Mat tinv = t;
    for (int v = 0; v < alg().dim(); ++v) tinv.set(v, v, ring()->inv(t(v, v)));
    return {group()[u], weyl_[w], t, alg().mul(tinv, bm)};
  }
  throw Error("Birkhoff table inconsistent");
}

std::vector<std::vector<Mat>> const& ChevalleyGroup::coset_reps() const {
  if (coset_reps_.empty()) build_normal_forms();
  return coset_reps_;
}

void ChevalleyGroup::build_normal_forms() const {
  std::size_t n = gcm().rank();
  std::vector<std::vector<Mat>> reps(n);
  for (std::size_t i = 0; i < n; ++i) {
    Subset gi = levi({i});
    Subset bi = intersect(gi, b_plus_);
    auto bis = members(bi);
    std::vector<std::size_t> outside;
    for (std::size_t k : members(gi)) {
      if (!bi[k]) outside.push_back(k);
    }
    std::sort(outside.begin(), outside.end(),
              [&](std::size_t x, std::size_t y) { return group()[x] < group()[y]; });
    Subset seen(order(), 0);
    for (std::size_t k : outside) {
      if (seen[k]) continue;
      reps[i].push_back(group()[k]);
      for (std::size_t b : bis) seen[g_->mul(k, b)] = 1;
    }
  }
  coset_reps_ = reps;
  nf_code_.assign(order(), -1);
  nf_.clear();
  census_ = {};
  auto bplus = members(b_plus_);
  for (auto const& w : weyl_) {
    auto const& word = w.word();
    std::size_t tuples = 1;
    for (std::size_t i : word) tuples *= reps[i].size();
    census_.formula += tuples * bplus.size();
    std::vector<std::size_t> pick(word.size(), 0);
    for (std::size_t t = 0; t < tuples; ++t) {
      std::size_t rest = t;
      BruhatNormalForm nf;
      nf.word = word;
      Mat y = real().identity();
      for (std::size_t s = 0; s < word.size(); ++s) {
        auto const& ys = reps[word[s]];
        Mat const& r = ys[rest % ys.size()];
        rest /= ys.size();
        nf.reps.push_back(r);
        y = real().mul(y, r);
      }
      nf.b = real().identity();
      std::size_t yi = g_->index_of(y);
      auto code = static_cast<std::int32_t>(nf_.size());
      nf_.push_back(std::move(nf));
      for (std::size_t b : bplus) {
        std::size_t x = g_->mul(yi, b);
        ++census_.products;
        if (nf_code_[x] < 0) {
          ++census_.distinct;
          nf_code_[x] = code;
        }
      }
    }
  }
}

BruhatNormalForm ChevalleyGroup::bruhat_normal_form(Mat const& g) const {
  if (coset_reps_.empty()) build_normal_forms();
  std::size_t gi = g_->index_of(g);
  if (nf_code_[gi] < 0) throw NotSupported("element has no Bruhat normal form");
  BruhatNormalForm nf = nf_[static_cast<std::size_t>(nf_code_[gi])];
  Mat y = real().identity();
  for (auto const& r : nf.reps) y = real().mul(y, r);
  nf.b = group()[g_->mul(g_->inv(g_->index_of(y)), gi)];
  return nf;
}

ChevalleyGroup::NormalFormCensus ChevalleyGroup::normal_form_census() const {
  if (coset_reps_.empty()) build_normal_forms();
  return census_;
}

Subset ChevalleyGroup::kernel_of_reduction() const {
  if (!loc_.local) throw NotLocal(ring()->name() + " is not local: " + loc_.witness);
  Subset out(order(), 0);
  auto const& p = loc_.projection;
  Code one = p[ring()->one()], zero = p[0];
  int d = alg().dim();
  for (std::size_t k = 0; k < order(); ++k) {
    Mat const& m = group()[k];
    bool ok = true;
    for (int i = 0; i < d && ok; ++i) {
      for (int j = 0; j < d && ok; ++j) ok = p[m(i, j)] == (i == j ? one : zero);
    }
    out[k] = ok;
  }
  return out;
}

Mat ChevalleyGroup::project(Mat const& g, MatAlgebra const& target) const {
  if (!loc_.local) throw NotLocal(ring()->name() + " is not local");
  return alg().map(g, loc_.projection, target);
}

}  // namespace kmc
