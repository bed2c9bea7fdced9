#pragma once

// Independent reference values for the tests. Nothing here calls into the
// library's algorithms.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace oracle {

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// |SL_n(F_q)| = q^{n(n-1)/2} prod_{i=2..n} (q^i - 1)
inline std::uint64_t sl_order(unsigned n, std::uint64_t q) {
  std::uint64_t r = ipow(q, n * (n - 1) / 2);
  for (unsigned i = 2; i <= n; ++i) r *= ipow(q, i) - 1;
  return r;
}

// |Sp4(F_q)| = q^4 (q^2 - 1)(q^4 - 1)
inline std::uint64_t sp4_order(std::uint64_t q) { return ipow(q, 4) * (q * q - 1) * (ipow(q, 4) - 1); }

// |G2(F_q)| = q^6 (q^2 - 1)(q^6 - 1)
inline std::uint64_t g2_order(std::uint64_t q) { return ipow(q, 6) * (q * q - 1) * (ipow(q, 6) - 1); }

// Over Z/p^k the reduction map is onto with kernel of order p^{(k-1) dim G}.
inline std::uint64_t lift_factor(std::uint64_t p, unsigned k, unsigned dim) {
  return ipow(p, (k - 1) * dim);
}

// |SL2(Z/p^k)| = p^{3(k-1)} |SL2(F_p)|
inline std::uint64_t sl2_mod_prime_power(std::uint64_t p, unsigned k) {
  return lift_factor(p, k, 3) * sl_order(2, p);
}

// |W| by type
inline std::uint64_t weyl_order(std::string const& type) {
  if (type == "A1") return 2;
  if (type == "A2") return 6;
  if (type == "A3") return 24;
  if (type == "A1xA1") return 4;
  if (type == "B2" || type == "C2") return 8;
  if (type == "G2") return 12;
  return 0;
}

// Number of positive roots by type
inline std::size_t positive_roots(std::string const& type) {
  if (type == "A1") return 1;
  if (type == "A2") return 3;
  if (type == "A3") return 6;
  if (type == "A1xA1") return 2;
  if (type == "B2" || type == "C2") return 4;
  if (type == "G2") return 6;
  return 0;
}

// Dense integer matrices mod n, for cross-checking matrix identities.
struct ModMat {
  int n = 0;
  long long mod = 0;
  std::vector<long long> v;

  ModMat(int dim, long long m) : n(dim), mod(m), v(dim * dim, 0) {}
  static ModMat identity(int dim, long long m) {
    ModMat r(dim, m);
    for (int i = 0; i < dim; ++i) r.v[i * dim + i] = 1 % m;
    return r;
  }
  long long& at(int i, int j) { return v[i * n + j]; }
  long long at(int i, int j) const { return v[i * n + j]; }
  ModMat operator*(ModMat const& b) const {
    ModMat r(n, mod);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) r.at(i, j) = (r.at(i, j) + at(i, k) * b.at(k, j)) % mod;
    return r;
  }
  bool operator==(ModMat const&) const = default;
};

inline long long det_mod(ModMat m) {
  // Laplace expansion; dimensions here are at most 7
  if (m.n == 1) return ((m.v[0] % m.mod) + m.mod) % m.mod;
  long long s = 0;
  for (int c = 0; c < m.n; ++c) {
    ModMat minor(m.n - 1, m.mod);
    for (int i = 1; i < m.n; ++i)
      for (int j = 0, jj = 0; j < m.n; ++j)
        if (j != c) minor.at(i - 1, jj++) = m.at(i, j);
    long long t = m.at(0, c) * det_mod(minor) % m.mod;
    s = (s + (c % 2 ? -t : t)) % m.mod;
  }
  return (s + m.mod) % m.mod;
}

// Chamber systems as plain label tables: labels[i][c] is the i-class of c.
struct RandomSystem {
  std::size_t chambers = 0;
  std::vector<std::vector<std::size_t>> labels;
};

// Sparse partitions (mostly pairs) so that rank-2 residues stay small and
// both simply connected and non-simply-connected systems occur.
inline RandomSystem random_system(std::mt19937& rng, std::size_t max_chambers, std::size_t max_rank) {
  std::uniform_int_distribution<std::size_t> nd(3, max_chambers), rd(2, max_rank);
  RandomSystem s;
  s.chambers = nd(rng);
  std::size_t rank = rd(rng);
  std::uniform_real_distribution<double> u(0, 1);
  double pair_rate = 0.25 + 0.5 * u(rng);
  for (std::size_t i = 0; i < rank; ++i) {
    std::vector<std::size_t> perm(s.chambers);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::size_t> lab(s.chambers);
    std::size_t next = 0;
    for (std::size_t k = 0; k < perm.size();) {
      std::size_t size = 1;
      double x = u(rng);
      if (x < pair_rate) size = 2;
      if (x < pair_rate * 0.15) size = 3;
      for (std::size_t t = 0; t < size && k < perm.size(); ++t) lab[perm[k++]] = next;
      ++next;
    }
    s.labels.push_back(lab);
  }
  return s;
}

inline bool labels_connected(RandomSystem const& s) {
  std::vector<std::size_t> p(s.chambers);
  std::iota(p.begin(), p.end(), 0);
  auto find = [&](std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  };
  std::size_t comps = s.chambers;
  for (auto const& l : s.labels)
    for (std::size_t a = 0; a < s.chambers; ++a)
      for (std::size_t b = a + 1; b < s.chambers; ++b)
        if (l[a] == l[b] && find(a) != find(b)) {
          p[find(a)] = find(b);
          --comps;
        }
  return comps == 1;
}

inline RandomSystem random_connected_system(std::mt19937& rng, std::size_t max_chambers,
                                            std::size_t max_rank) {
  for (;;) {
    auto s = random_system(rng, max_chambers, max_rank);
    if (labels_connected(s)) return s;
  }
}

}  // namespace oracle
