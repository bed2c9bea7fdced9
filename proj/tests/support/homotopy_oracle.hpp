#pragma once

// Bounded elementary-homotopy closure. A closed gallery is declared
// null-homotopic when a search over galleries, moving by replacing a
// J-subgallery (|J| <= 2) with another J-gallery of the same residue and
// cancelling backtracks, reaches the trivial gallery. Works on raw label
// tables only.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

namespace oracle {

class HomotopyOracle {
 public:
  using Path = std::vector<std::size_t>;

  HomotopyOracle(std::size_t n, std::vector<std::vector<std::size_t>> labels,
                 std::size_t state_cap = 20000)
      : n_(n), labels_(std::move(labels)), cap_(state_cap) {
    std::size_t r = labels_.size();
    for (std::size_t i = 0; i < r; ++i) sets_.push_back({i});
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i + 1; j < r; ++j) sets_.push_back({i, j});
    for (auto const& J : sets_) comp_.push_back(components(J));
  }

  bool adjacent(std::size_t a, std::size_t b) const {
    for (auto const& l : labels_)
      if (l[a] == l[b]) return true;
    return false;
  }

  bool connected() const {
    std::vector<char> seen(n_, 0);
    std::vector<std::size_t> st{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!st.empty()) {
      auto c = st.back();
      st.pop_back();
      for (std::size_t d = 0; d < n_; ++d)
        if (!seen[d] && adjacent(c, d)) {
          seen[d] = 1;
          ++count;
          st.push_back(d);
        }
    }
    return count == n_;
  }

  // Loops along non-tree edges of a BFS tree rooted at 0.
  std::vector<Path> fundamental_loops() const {
    std::vector<std::int64_t> parent(n_, -2);
    parent[0] = -1;
    std::vector<std::size_t> order{0};
    for (std::size_t k = 0; k < order.size(); ++k)
      for (std::size_t d = 0; d < n_; ++d)
        if (parent[d] == -2 && adjacent(order[k], d)) {
          parent[d] = static_cast<std::int64_t>(order[k]);
          order.push_back(d);
        }
    auto to_root = [&](std::size_t c) {
      Path p{c};
      while (parent[p.back()] >= 0) p.push_back(static_cast<std::size_t>(parent[p.back()]));
      return p;
    };
    std::vector<Path> out;
    for (std::size_t u = 0; u < n_; ++u)
      for (std::size_t v = u + 1; v < n_; ++v) {
        if (!adjacent(u, v)) continue;
        if (parent[v] == static_cast<std::int64_t>(u) || parent[u] == static_cast<std::int64_t>(v)) continue;
        Path a = to_root(u);
        std::reverse(a.begin(), a.end());
        Path b = to_root(v);
        a.insert(a.end(), b.begin(), b.end());
        out.push_back(a);
      }
    return out;
  }

  bool null_homotopic(Path const& loop) {
    std::size_t max_len = 2 * n_ + 2;
    auto start = reduce(loop);
    using Item = std::pair<std::size_t, Path>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    std::set<Path> seen{start};
    pq.push({start.size(), start});
    while (!pq.empty()) {
      Path g = pq.top().second;
      pq.pop();
      if (g.size() <= 1) return true;
      for (std::size_t k = 0; k < sets_.size(); ++k) {
        for (std::size_t s = 0; s + 1 < g.size(); ++s) {
          for (std::size_t t = s + 1; t < g.size(); ++t) {
            if (comp_[k][g[t]] != comp_[k][g[s]] || !j_step(k, g[t - 1], g[t])) break;
            for (auto const& p : paths(k, g[s], g[t])) {
              Path h(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(s));
              h.insert(h.end(), p.begin(), p.end());
              h.insert(h.end(), g.begin() + static_cast<std::ptrdiff_t>(t) + 1, g.end());
              h = reduce(h);
              if (h.size() > max_len || seen.count(h)) continue;
              if (h.size() <= 1) return true;
              if (seen.size() >= cap_) {
                capped_ = true;
                return false;
              }
              seen.insert(h);
              pq.push({h.size(), h});
            }
          }
        }
      }
    }
    return false;
  }

  bool simply_connected() {
    if (!connected()) return false;
    for (auto const& l : fundamental_loops())
      if (!null_homotopic(l)) return false;
    return true;
  }

  bool capped() const { return capped_; }

 private:
  std::vector<std::size_t> components(std::vector<std::size_t> const& J) const {
    std::vector<std::size_t> p(n_);
    std::iota(p.begin(), p.end(), 0);
    auto find = [&](std::size_t x) {
      while (p[x] != x) x = p[x] = p[p[x]];
      return x;
    };
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = a + 1; b < n_; ++b)
        for (auto j : J)
          if (labels_[j][a] == labels_[j][b]) p[find(a)] = find(b);
    std::vector<std::size_t> out(n_);
    for (std::size_t a = 0; a < n_; ++a) out[a] = find(a);
    return out;
  }

  bool j_step(std::size_t k, std::size_t a, std::size_t b) const {
    if (a == b) return true;
    for (auto j : sets_[k])
      if (labels_[j][a] == labels_[j][b]) return true;
    return false;
  }

  // Cancel stutters and backtracks x y x -> x.
  static Path reduce(Path const& g) {
    Path st;
    for (auto c : g) {
      if (!st.empty() && st.back() == c) continue;
      if (st.size() >= 2 && st[st.size() - 2] == c) {
        st.pop_back();
        continue;
      }
      st.push_back(c);
    }
    return st;
  }

  // Simple J-galleries from a to b inside the residue, shortest first.
  std::vector<Path> const& paths(std::size_t k, std::size_t a, std::size_t b) {
    auto key = std::make_tuple(k, a, b);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<Path> found;
    Path cur{a};
    std::vector<char> on(n_, 0);
    on[a] = 1;
    std::size_t budget = 20000;
    auto dfs = [&](auto&& self, std::size_t c) -> void {
      if (budget == 0) return;
      --budget;
      if (c == b) {
        found.push_back(cur);
        return;
      }
      for (std::size_t d = 0; d < n_; ++d) {
        if (on[d] || comp_[k][d] != comp_[k][a] || !j_step(k, c, d)) continue;
        on[d] = 1;
        cur.push_back(d);
        self(self, d);
        cur.pop_back();
        on[d] = 0;
      }
    };
    dfs(dfs, a);
    std::stable_sort(found.begin(), found.end(),
                     [](Path const& x, Path const& y) { return x.size() < y.size(); });
    if (found.size() > 16) found.resize(16);
    return cache_[key] = std::move(found);
  }

  std::size_t n_;
  std::vector<std::vector<std::size_t>> labels_;
  std::size_t cap_;
  std::vector<std::vector<std::size_t>> sets_;
  std::vector<std::vector<std::size_t>> comp_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<Path>> cache_;
  bool capped_ = false;
};

}  // namespace oracle
