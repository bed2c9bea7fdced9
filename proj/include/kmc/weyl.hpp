#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kmc/roots.hpp"

namespace kmc {

inline constexpr std::size_t default_word_bound = 64;

// Element of W(A), stored as its action on Q (column j is w(alpha_j)) together
// with the lexicographically least reduced word.
class WeylElem {
 public:
  WeylElem() = default;
  static WeylElem identity(Gcm const& a);
  static WeylElem from_word(Gcm const& a, std::vector<std::size_t> const& word,
                            std::size_t bound = default_word_bound);
  static WeylElem reflection(Gcm const& a, std::size_t i);

  std::vector<std::size_t> const& word() const { return word_; }
  std::size_t length() const { return word_.size(); }
  std::size_t rank() const { return n_; }
  Root act(Root const& r) const;
  WeylElem inverse() const;
  WeylElem operator*(WeylElem const& b) const;
  bool operator==(WeylElem const& b) const { return m_ == b.m_; }
  bool operator<(WeylElem const& b) const { return m_ < b.m_; }
  std::vector<int> const& matrix() const { return m_; }
  std::string str() const;

 private:
  WeylElem(Gcm const& a) : a_(a), n_(a.rank()) {}
  void canonicalize();
  Gcm a_;
  std::size_t n_ = 0;
  std::vector<int> m_;  // row-major n x n
  std::vector<std::size_t> word_;
};

std::size_t weyl_length(Gcm const& a, std::vector<std::size_t> const& word,
                        std::size_t bound = default_word_bound);

// Elements of W up to a length, in order of (length, canonical word).
std::vector<WeylElem> weyl_ball(Gcm const& a, std::size_t max_length);
// Breadth-first walk of W by length; stops when visit returns true.
void weyl_bfs(Gcm const& a, std::size_t max_length,
              std::function<bool(WeylElem const&)> const& visit);
// All of W for spherical A.
std::vector<WeylElem> weyl_group(Gcm const& a);

struct IntervalEntry {
  Root root;
  int i = 0;
  int j = 0;
};

enum class Tri { yes, no, inconclusive };

struct PrenilpotentAnswer {
  Tri value = Tri::inconclusive;
  std::optional<WeylElem> w;  // w(alpha), w(beta) > 0
  std::optional<WeylElem> v;  // v(alpha), v(beta) < 0
};

PrenilpotentAnswer is_prenilpotent(Gcm const& a, Root const& alpha,
                                   Root const& beta,
                                   std::size_t bound = 10);

// ]alpha, beta[ as roots i*alpha + j*beta, ordered by i + j then i.
std::vector<IntervalEntry> interval(Gcm const& a, Root const& alpha,
                                    Root const& beta);

struct Rank2Cover {
  std::size_t i = 0;
  std::size_t j = 0;
  WeylElem v;
};

Rank2Cover rank2_cover(Gcm const& a, Root const& alpha);
// Independent check: v(alpha_i), v(alpha_j) > 0 and
// v^-1(alpha) = m alpha_i + n alpha_j with m, n >= 1.
bool validate_rank2_cover(Gcm const& a, Root const& alpha, Rank2Cover const& c);

}  // namespace kmc
