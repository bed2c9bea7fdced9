#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kmc/chevalley.hpp"

namespace kmc {

// Letter 2g is generator g, 2g+1 its inverse.
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

inline Letter gen_letter(std::size_t g, bool inverse = false) {
  return static_cast<Letter>(2 * g + (inverse ? 1 : 0));
}
inline Letter inverse_letter(Letter l) { return l ^ 1u; }

Word inverse(Word const& w);
Word free_reduce(Word const& w);
Word cyclic_reduce(Word const& w);
Word concat(std::initializer_list<Word> parts);

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  std::size_t add_generator(std::string name);
  std::optional<std::size_t> generator(std::string_view name) const;
  // Stores the cyclically reduced relator unless empty or already present up
  // to rotation and inversion.
  bool add_relator(Word const& w);
  std::string word_str(Word const& w) const;
  Word parse_word(std::string_view text) const;

  std::string to_text() const;
  static Presentation from_text(std::string_view text);

 private:
  std::map<Word, std::size_t> seen_;
  std::map<std::string, std::size_t, std::less<>> names_;
};

struct RootGenerator {
  Root root;
  Code value = 0;
};

// A presentation whose generators are root elements x_root(value).
struct RootPresentation {
  Presentation pres;
  std::vector<RootGenerator> gens;
  std::vector<std::string> warnings;
};

// SL2 over a finite local ring: generators x+(r), x-(r) for r != 0 with the
// relation families (1)-(3) of the local SL2 presentation.
RootPresentation sl2_local_presentation(RingPtr const& ring);

// Steinberg presentation (U), (C), (T), plus (SL2) when some component of the
// Dynkin diagram is A1. Generators x_alpha(r) for r != 0; x_alpha(0) = 1.
RootPresentation steinberg_presentation(Gcm const& a, RingPtr const& ring);

struct EliminationWord {
  std::vector<std::size_t> J;
  Root root;  // in the coordinates of A_J
  Code value = 0;
  Word word;  // over the global generators
};

struct CurtisTits {
  RootPresentation flat;
  std::vector<std::vector<std::size_t>> vertices;  // the J with |J| = 2
  std::vector<EliminationWord> eliminations;
};

// Generators x_{+-alpha_i}(r); relations: the Steinberg relations of every
// rank-2 A_J rewritten in simple root generators.
CurtisTits curtis_tits_presentation(Gcm const& a, RingPtr const& ring);

// Images of the generators in the realization of a (or of A itself).
std::vector<Mat> generator_images(RootPresentation const& p, Realization const& real);
Mat evaluate(Word const& w, std::vector<Mat> const& images, std::vector<Mat> const& inverses,
             Realization const& real);

class FiniteGroup;

struct IsoVerdict {
  bool homomorphism = false;
  bool surjective = false;
  bool injective = false;
  std::size_t presentation_order = 0;
  std::size_t group_order = 0;
  std::string witness;
  bool iso() const { return homomorphism && surjective && injective; }
};

inline constexpr std::size_t default_coset_limit = 200000;

// Legs: relators map to 1, images generate G, Todd-Coxeter order = |G|.
// With a subgroup H the order is [P:H] * subgroup_order. The caller must know
// |H| <= subgroup_order in P (e.g. H = one root group, a quotient of (R,+));
// the image of H in G is required to have exactly subgroup_order elements.
IsoVerdict verify_iso_to_matrix_group(Presentation const& p, std::vector<Mat> const& images,
                                      FiniteGroup const& g,
                                      std::size_t limit = default_coset_limit,
                                      std::vector<Word> const& subgroup = {},
                                      std::size_t subgroup_order = 1);

}  // namespace kmc
