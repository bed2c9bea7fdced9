#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kmc/finite_group.hpp"
#include "kmc/presentation.hpp"
#include "kmc/twin.hpp"

namespace kmc {

struct Verdict {
  bool pass = true;
  std::string witness;
  std::vector<std::pair<std::string, std::uint64_t>> counts;
  std::vector<std::string> warnings;

  void count(std::string key, std::uint64_t v) { counts.emplace_back(std::move(key), v); }
  void fail(std::string w) {
    if (pass) witness = std::move(w);
    pass = false;
  }
};

// Chambers gB+ and hB- of the enumerated group, numbered by least element
// index of the coset.
struct TwinDatumOfG {
  std::shared_ptr<ChevalleyGroup const> group;
  std::shared_ptr<ChevalleyGroup const> residue_group;  // over R/L; same object for fields
  std::array<std::vector<std::size_t>, 2> reps;         // [0] plus, [1] minus
  std::array<std::vector<std::uint32_t>, 2> coset;      // element -> chamber
  OppositionDatum datum;
  std::vector<std::string> warnings;

  std::vector<std::size_t> const& representatives(int sign) const { return reps[sign > 0 ? 0 : 1]; }
  std::size_t chamber_of(int sign, std::size_t element) const {
    return coset[sign > 0 ? 0 : 1][element];
  }
  // g . chamber
  std::size_t act(int sign, std::size_t g, std::size_t chamber) const;
  // Index in the residue group of the residue image of an element.
  std::size_t residue_index(std::size_t element) const;
};

TwinDatumOfG build_twin_datum(Gcm const& a, RingPtr const& ring,
                              std::size_t cap = default_group_cap);
TwinDatumOfG build_twin_datum(std::shared_ptr<ChevalleyGroup const> group,
                              std::size_t cap = default_group_cap);

// w with g^-1 h in U+ w~ T U- over the residue field, for c+ = gB+, c- = hB-.
WeylElem codistance(TwinDatumOfG const& td, std::size_t c_plus, std::size_t c_minus);

// omega_c(x) = g w~ B+ (c = gB+, w the codistance of c and x), and
// symmetrically for c = hB-.
OmegaSupplier omega_supplier(TwinDatumOfG const& td);

// Number of orbits of G on Opp.
std::size_t opp_orbits(TwinDatumOfG const& td);

Verdict verify_kernel_containment(ChevalleyGroup const& g);
Verdict verify_opposition_preimage(ChevalleyGroup const& g);
Verdict verify_parabolic_intersections(ChevalleyGroup const& g, IndexSet const& J);
Verdict verify_levi(ChevalleyGroup const& g, std::size_t i);
Verdict verify_normal_form_counts(ChevalleyGroup const& g);

struct InjectivityVerdict {
  IsoVerdict iso;
  std::size_t generators = 0;
  std::size_t relators = 0;
  std::vector<std::string> warnings;
};

// Steinberg presentation against the enumerated group.
InjectivityVerdict verify_spherical_injectivity(Gcm const& a, RingPtr const& ring,
                                                std::size_t limit = default_coset_limit,
                                                std::size_t cap = default_group_cap);
// Flattened Curtis-Tits presentation against the enumerated group.
InjectivityVerdict verify_amalgam(Gcm const& a, RingPtr const& ring,
                                  std::size_t limit = default_coset_limit,
                                  std::size_t cap = default_group_cap);

using RatMat2 = std::array<std::array<Rational, 2>, 2>;

struct Lemma22 {
  RatMat2 s;  // in SL2(Z_(p))
  RatMat2 b;  // upper triangular, M = s^-1 b
};

RatMat2 mul(RatMat2 const& x, RatMat2 const& y);
Rational det(RatMat2 const& x);
Lemma22 lemma22_decompose(RatMat2 const& m, int p);
// Empty when the factorization satisfies the contract.
std::string lemma22_defect(RatMat2 const& m, int p, Lemma22 const& f);

}  // namespace kmc
