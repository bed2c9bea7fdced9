#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kmc/presentation.hpp"

namespace kmc {

struct CosetTable {
  std::size_t generators = 0;
  std::size_t cosets = 0;
  std::vector<std::int32_t> table;  // cosets x (2 * generators), by letter
  std::size_t max_live = 0;         // peak number of live cosets
  std::size_t defined = 0;          // total cosets ever defined

  std::int32_t act(std::size_t coset, Letter l) const {
    return table[coset * 2 * generators + l];
  }
  std::size_t trace(std::size_t coset, Word const& w) const;
  std::string to_tsv(Presentation const& p) const;
};

// HLT coset enumeration with lookahead. Cosets of the subgroup generated by
// the given words; throws Overflow when more than limit cosets are needed.
CosetTable todd_coxeter(Presentation const& p, std::vector<Word> const& subgroup,
                        std::size_t limit = default_coset_limit);

}  // namespace kmc
