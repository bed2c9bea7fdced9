#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "kmc/chevalley.hpp"

namespace kmc {

inline constexpr std::size_t default_group_cap = 1000000;

using Subset = std::vector<char>;

// All elements of the group generated by a realization's root groups, in
// breadth-first order from the identity (index 0).
class FiniteGroup {
 public:
  explicit FiniteGroup(Realization real, std::size_t cap = default_group_cap);

  Realization const& real() const { return real_; }
  std::size_t order() const { return elems_.size(); }
  Mat const& operator[](std::size_t k) const { return elems_[k]; }
  std::optional<std::size_t> find(Mat const& m) const;
  std::size_t index_of(Mat const& m) const;  // NotEnumerated if absent
  std::size_t mul(std::size_t a, std::size_t b) const;
  std::size_t inv(std::size_t a) const { return inv_[a]; }

  // Subgroup generated by the given elements.
  Subset closure(std::vector<std::size_t> const& gens) const;
  // {a * b : a in x, b in y}
  Subset product(Subset const& x, Subset const& y) const;

 private:
  void insert(Mat const& m);
  Realization real_;
  std::vector<Mat> elems_;
  std::vector<std::uint32_t> inv_;
  std::vector<std::uint32_t> slots_;
  std::size_t mask_ = 0;
};

std::vector<std::size_t> members(Subset const& s);
std::size_t count(Subset const& s);
Subset intersect(Subset const& a, Subset const& b);

struct BirkhoffFactors {
  Mat u_minus;
  WeylElem w;
  Mat t;
  Mat u_plus;
};

struct BruhatNormalForm {
  std::vector<std::size_t> word;
  std::vector<Mat> reps;
  Mat b;
};

// The enumerated group G^min_R for a spherical GCM with its standard
// subgroups as element masks.
class ChevalleyGroup {
 public:
  ChevalleyGroup(Gcm const& a, RingPtr ring, std::size_t cap = default_group_cap);

  FiniteGroup const& group() const { return *g_; }
  Realization const& real() const { return g_->real(); }
  Gcm const& gcm() const { return real().gcm(); }
  MatAlgebra const& alg() const { return real().alg(); }
  RingPtr const& ring() const { return real().ring(); }
  std::size_t order() const { return g_->order(); }

  Subset const& torus() const { return torus_; }
  Subset const& unipotent(int sign) const { return sign > 0 ? u_plus_ : u_minus_; }
  Subset const& borel(int sign) const { return sign > 0 ? b_plus_ : b_minus_; }
  Subset root_group(Root const& gamma) const;
  // G_J = <U_{+-alpha_j} : j in J>
  Subset levi(std::vector<std::size_t> const& J) const;
  // P^sign_J = <B^sign, G_J>
  Subset parabolic(std::vector<std::size_t> const& J, int sign) const;
  bool in_parabolic(Mat const& g, std::vector<std::size_t> const& J, int sign) const;
  // B^- B^+
  Subset const& big_cell() const;
  bool in_big_cell(Mat const& g) const;

  std::vector<WeylElem> const& weyl() const { return weyl_; }
  std::vector<std::size_t> const& weyl_reps() const { return weyl_reps_; }  // w~ indices

  // g = u- w~ t u+ with u- in U- cap w~ U- w~^-1; needs a field.
  BirkhoffFactors birkhoff(Mat const& g) const;
  // Index into weyl() of the Birkhoff w of each element.
  std::vector<std::uint16_t> const& birkhoff_table() const;

  // Y_i: lexicographically least matrix of each coset in (G_i - B_i)/B_i.
  std::vector<std::vector<Mat>> const& coset_reps() const;
  BruhatNormalForm bruhat_normal_form(Mat const& g) const;
  // Products y_{i1}..y_{id} b over canonical reduced words; total and
  // injective exactly when every element is hit once.
  struct NormalFormCensus {
    std::size_t products = 0;
    std::size_t distinct = 0;
    std::size_t formula = 0;  // sum_w prod |Y_i| * |B+|
  };
  NormalFormCensus normal_form_census() const;

  // Elements with identity residue image (finite local rings).
  Subset kernel_of_reduction() const;
  Locality const& locality_data() const { return loc_; }
  Mat project(Mat const& g, MatAlgebra const& target) const;

 private:
  void build_normal_forms() const;
  std::shared_ptr<FiniteGroup> g_;
  Subset torus_, u_plus_, u_minus_, b_plus_, b_minus_;
  std::vector<WeylElem> weyl_;
  std::vector<std::size_t> weyl_reps_;
  Locality loc_;
  mutable Subset big_cell_;
  mutable std::vector<std::uint16_t> birkhoff_;
  mutable std::vector<std::vector<Mat>> coset_reps_;
  mutable std::vector<std::int32_t> nf_code_;  // element -> index into nf_
  mutable std::vector<BruhatNormalForm> nf_;
  mutable NormalFormCensus census_;
};

}  // namespace kmc
