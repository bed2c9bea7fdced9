#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kmc/presentation.hpp"
#include "kmc/todd_coxeter.hpp"

namespace kmc {

using Gallery = std::vector<std::size_t>;
using IndexSet = std::vector<std::size_t>;

// Chambers 0..n-1 with one partition per index i. Class ids are normalized to
// first appearance in chamber order.
class ChamberSystem {
 public:
  ChamberSystem() = default;
  // labels[i][c]: any key identifying the ~_i class of chamber c.
  ChamberSystem(std::size_t chambers, std::vector<std::vector<std::size_t>> const& labels,
                std::vector<std::string> names = {});

  // "i: c1 c2 ..." per i-class; "chambers: ..." declares chambers up front.
  // Index labels are sorted numerically and renumbered 0..rank-1.
  static ChamberSystem from_text(std::string_view text);
  std::string to_text() const;
  std::string to_tsv() const;

  std::size_t size() const { return n_; }
  std::size_t rank() const { return labels_.size(); }
  std::string const& name(std::size_t c) const { return names_[c]; }
  std::vector<std::string> const& index_names() const { return index_names_; }
  std::optional<std::size_t> find(std::string_view name) const;

  std::size_t cls(std::size_t i, std::size_t c) const { return labels_[i][c]; }
  bool equivalent(std::size_t i, std::size_t c, std::size_t d) const {
    return labels_[i][c] == labels_[i][d];
  }
  // c ~_i d for some i (every chamber is adjacent to itself).
  bool adjacent(std::size_t c, std::size_t d) const;
  std::vector<std::size_t> const& panel(std::size_t i, std::size_t c) const {
    return classes_[i][labels_[i][c]];
  }
  std::vector<std::vector<std::size_t>> const& classes(std::size_t i) const { return classes_[i]; }
  // Distinct chambers adjacent to c, ascending.
  std::vector<std::size_t> const& neighbors(std::size_t c) const { return nbrs_[c]; }

  // perm[c] is the new number of chamber c.
  ChamberSystem relabel(std::vector<std::size_t> const& perm) const;
  // index perm[i] of the result is index i of this system.
  ChamberSystem permute_indices(std::vector<std::size_t> const& perm) const;

 private:
  void finish();
  std::size_t n_ = 0;
  std::vector<std::vector<std::size_t>> labels_;
  std::vector<std::vector<std::vector<std::size_t>>> classes_;
  std::vector<std::vector<std::size_t>> nbrs_;
  std::vector<std::string> names_;
  std::vector<std::string> index_names_;
};

// Subsets of the index set with at most two elements, smallest first.
std::vector<IndexSet> small_index_sets(std::size_t rank);

std::vector<std::size_t> residue(ChamberSystem const& s, std::size_t c, IndexSet const& J);
bool is_connected(ChamberSystem const& s);
bool is_gallery(ChamberSystem const& s, Gallery const& g);
bool is_j_gallery(ChamberSystem const& s, Gallery const& g, IndexSet const& J);

struct ReducedGallery {
  Gallery gallery;
  std::vector<std::size_t> lambda;
};

ReducedGallery reduce_gallery(Gallery const& g);
bool elementary_homotopic(ChamberSystem const& s, Gallery const& g, Gallery const& h);

struct Pi1Presentation {
  std::size_t basepoint = 0;
  std::vector<std::int64_t> parent;  // BFS tree, -1 at the basepoint
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // generator k: (u, v), u < v
  Presentation pres;

  std::optional<std::size_t> generator(std::size_t u, std::size_t v) const;
  // Word of a gallery: one letter per non-tree step.
  Word word(Gallery const& g) const;

 private:
  friend Pi1Presentation pi1_presentation(ChamberSystem const&, std::size_t);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out_;  // u -> (v, generator)
};

// Generators: non-tree edges of a BFS tree from the basepoint. Relators: the
// fundamental cycles of a BFS tree of every J-residue, |J| <= 2.
Pi1Presentation pi1_presentation(ChamberSystem const& s, std::size_t basepoint = 0);

struct SimpleConnectivity {
  bool connected = false;
  bool simply_connected = false;
  std::size_t generators = 0;
  std::size_t relators = 0;
  std::size_t surviving_generators = 0;  // after eliminating trivial ones
  std::size_t cosets = 0;                // Todd-Coxeter index of 1, when run
  std::string method;
};

SimpleConnectivity simple_connectivity(ChamberSystem const& s,
                                       std::size_t limit = default_coset_limit);
bool is_simply_connected(ChamberSystem const& s, std::size_t limit = default_coset_limit);
bool null_homotopic(ChamberSystem const& s, Gallery const& g,
                    std::size_t limit = default_coset_limit);

}  // namespace kmc
