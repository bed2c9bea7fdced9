#include "kmc/todd_coxeter.hpp"

#include <fmt/format.h>

namespace kmc {

std::size_t CosetTable::trace(std::size_t coset, Word const& w) const {
  for (Letter l : w) coset = static_cast<std::size_t>(act(coset, l));
  return coset;
}

std::string CosetTable::to_tsv(Presentation const& p) const {
  std::string out = "coset";
  for (std::size_t g = 0; g < generators; ++g) {
    out += "\t" + p.generators[g] + "\t" + p.generators[g] + "^-1";
  }
  out += "\n";
  for (std::size_t c = 0; c < cosets; ++c) {
    out += std::to_string(c);
    for (std::size_t l = 0; l < 2 * generators; ++l) {
      out += "\t" + std::to_string(act(c, static_cast<Letter>(l)));
    }
    out += "\n";
  }
  return out;
}

namespace {

class Enumerator {
 public:
  Enumerator(Presentation const& p, std::size_t limit)
      : cols_(2 * p.generators.size()), limit_(limit), rels_(p.relators) {
    new_coset();
  }

  CosetTable run(std::vector<Word> const& subgroup) {
    for (auto const& w : subgroup) scan_and_fill(0, w);
    std::size_t a = 0;
    while (a < n_) {
      if (n_ >= limit_) {
        lookahead();
        a = compact(a);
        // Lookahead that frees almost nothing would only be repeated.
        if (live_ * 20 > limit_ * 19) {
          throw Overflow(fmt::format("coset enumeration exceeded {} cosets", limit_));
        }
        continue;
      }
      if (live(a)) {
        for (auto const& r : rels_) {
          scan_and_fill(a, r);
          if (!live(a)) break;
        }
        if (live(a)) {
          for (std::size_t x = 0; x < cols_; ++x) {
            if (at(a, x) < 0) define(a, x);
          }
        }
      }
      ++a;
    }
    compact(0);
    CosetTable t;
    t.generators = cols_ / 2;
    t.cosets = n_;
    t.table = std::move(table_);
    t.max_live = max_live_;
    t.defined = defined_;
    return t;
  }

 private:
  std::int32_t& at(std::size_t c, std::size_t x) { return table_[c * cols_ + x]; }
  bool live(std::size_t c) const { return parent_[c] == static_cast<std::int32_t>(c); }

  std::int32_t new_coset() {
    auto c = static_cast<std::int32_t>(n_++);
    table_.resize(n_ * cols_, -1);
    parent_.push_back(c);
    ++live_;
    ++defined_;
    if (live_ > max_live_) max_live_ = live_;
    return c;
  }

  void define(std::size_t a, std::size_t x) {
    std::int32_t b = new_coset();
    at(a, x) = b;
    at(static_cast<std::size_t>(b), x ^ 1) = static_cast<std::int32_t>(a);
  }

  std::int32_t rep(std::int32_t c) {
    std::int32_t r = c;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[c] != r) {
      std::int32_t next = parent_[c];
      parent_[c] = r;
      c = next;
    }
    return r;
  }

  void merge(std::int32_t k, std::int32_t l) {
    std::int32_t f = rep(k), g = rep(l);
    if (f == g) return;
    std::int32_t lo = std::min(f, g), hi = std::max(f, g);
    parent_[hi] = lo;
    queue_.push_back(hi);
    --live_;
  }

  void coincidence(std::int32_t a, std::int32_t b) {
    queue_.clear();
    merge(a, b);
    for (std::size_t q = 0; q < queue_.size(); ++q) {
      auto g = static_cast<std::size_t>(queue_[q]);
      for (std::size_t x = 0; x < cols_; ++x) {
        std::int32_t d = at(g, x);
        if (d < 0) continue;
        at(static_cast<std::size_t>(d), x ^ 1) = -1;
        std::int32_t mu = rep(static_cast<std::int32_t>(g)), nu = rep(d);
        auto umu = static_cast<std::size_t>(mu), unu = static_cast<std::size_t>(nu);
        if (at(umu, x) >= 0) {
          merge(nu, at(umu, x));
        } else if (at(unu, x ^ 1) >= 0) {
          merge(mu, at(unu, x ^ 1));
        } else {
          at(umu, x) = nu;
          at(unu, x ^ 1) = mu;
        }
      }
    }
  }

  // Returns after closing the relator at a (fill) or when it cannot be
  // completed without definitions (no fill).
  void scan(std::size_t a, Word const& w, bool fill) {
    if (w.empty()) return;
    auto f = static_cast<std::int32_t>(a);
    std::size_t i = 0;
    std::size_t j = w.size();  // exclusive end
    auto b = static_cast<std::int32_t>(a);
    for (;;) {
      while (i < j && at(static_cast<std::size_t>(f), w[i]) >= 0) {
        f = at(static_cast<std::size_t>(f), w[i]);
        ++i;
      }
      if (i == j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j > i && at(static_cast<std::size_t>(b), w[j - 1] ^ 1) >= 0) {
        b = at(static_cast<std::size_t>(b), w[j - 1] ^ 1);
        --j;
      }
      if (j == i) {
        coincidence(f, b);
        return;
      }
      if (j == i + 1) {
        at(static_cast<std::size_t>(f), w[i]) = b;
        at(static_cast<std::size_t>(b), w[i] ^ 1) = f;
        return;
      }
      if (!fill) return;
      define(static_cast<std::size_t>(f), w[i]);
    }
  }

  void scan_and_fill(std::size_t a, Word const& w) { scan(a, w, true); }

  void lookahead() {
    for (std::size_t c = 0; c < n_; ++c) {
      for (auto const& r : rels_) {
        if (!live(c)) break;
        scan(c, r, false);
      }
    }
  }

  // Renumbers live cosets in order; returns the new index of the first live
  // coset at or after old index a.
  std::size_t compact(std::size_t a) {
    std::vector<std::int32_t> remap(n_, -1);
    std::size_t m = 0;
    std::size_t new_a = static_cast<std::size_t>(-1);
    for (std::size_t c = 0; c < n_; ++c) {
      if (!live(c)) continue;
      if (c >= a && new_a == static_cast<std::size_t>(-1)) new_a = m;
      remap[c] = static_cast<std::int32_t>(m++);
    }
    if (new_a == static_cast<std::size_t>(-1)) new_a = m;
    std::vector<std::int32_t> t(m * cols_, -1);
    for (std::size_t c = 0; c < n_; ++c) {
      if (remap[c] < 0) continue;
      for (std::size_t x = 0; x < cols_; ++x) {
        std::int32_t d = at(c, x);
        if (d >= 0) t[static_cast<std::size_t>(remap[c]) * cols_ + x] = remap[rep(d)];
      }
    }
    table_ = std::move(t);
    n_ = m;
    parent_.resize(m);
    for (std::size_t c = 0; c < m; ++c) parent_[c] = static_cast<std::int32_t>(c);
    live_ = m;
    return new_a;
  }

  std::size_t cols_;
  std::size_t limit_;
  std::vector<Word> rels_;
  std::vector<std::int32_t> table_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> queue_;
  std::size_t n_ = 0;
  std::size_t live_ = 0;
  std::size_t max_live_ = 0;
  std::size_t defined_ = 0;
};

}  // namespace

CosetTable todd_coxeter(Presentation const& p, std::vector<Word> const& subgroup,
                        std::size_t limit) {
  if (limit < 1) throw std::invalid_argument("todd_coxeter: limit must be positive");
  Enumerator e(p, limit);
  return e.run(subgroup);
}

}  // namespace kmc
