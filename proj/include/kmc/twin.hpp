#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kmc/chamber.hpp"

namespace kmc {

struct OppositionDatum {
  ChamberSystem plus, minus;
  std::vector<char> op;  // plus.size() x minus.size(), row-major

  OppositionDatum() = default;
  OppositionDatum(ChamberSystem p, ChamberSystem m);

  bool opposite(std::size_t x, std::size_t y) const { return op[x * minus.size() + y] != 0; }
  void set_opposite(std::size_t x, std::size_t y, bool v = true) {
    op[x * minus.size() + y] = v ? 1 : 0;
  }
  // c^op for a chamber c of the given sign
  std::vector<std::size_t> opposites(int sign, std::size_t c) const;
  ChamberSystem const& side(int sign) const { return sign > 0 ? plus : minus; }
  bool opposite_signed(int sign, std::size_t c, std::size_t x) const {
    return sign > 0 ? opposite(c, x) : opposite(x, c);
  }
  std::size_t op_count() const;

  // Blocks "[+]" and "[-]" in chamber-system syntax, then "op: x y1 y2 ...".
  static OppositionDatum from_text(std::string_view text);
  std::string to_text() const;
};

struct OppSystem {
  ChamberSystem system;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // chamber -> (x, y)
};

OppSystem build_opp(OppositionDatum const& d);

// omega_c for a chamber c of sign: image in C_sign of each chamber of C_-sign.
using OmegaSupplier = std::function<std::vector<std::size_t>(int sign, std::size_t c)>;

inline constexpr std::size_t omega_search_cap = 10;

// TCS1: chambers (c, d, x, y), indices (i, j). TCS2: (c, d, x), (i).
// TCS3: (c) for c^op itself, or (c, r) and J for c^op meet the J-residue of r.
// TCS4: (c).
struct TcsWitness {
  int sign = 1;
  std::vector<std::size_t> chambers;
  std::vector<std::size_t> indices;
};

struct TcsVerdict {
  int axiom = 0;
  bool pass = true;
  std::optional<TcsWitness> witness;
  std::string detail;
  std::size_t checked = 0;
  std::string method;
};

// Witnesses are the first violation in (sign +, then -; chamber order).
TcsVerdict check_tcs(OppositionDatum const& d, int axiom, OmegaSupplier const& supplier = {});

// Re-evaluates the axiom on the witness configuration alone.
bool witness_violates(OppositionDatum const& d, int axiom, TcsWitness const& w,
                      OmegaSupplier const& supplier = {});

struct MainTheoremReport {
  std::array<TcsVerdict, 4> tcs;
  SimpleConnectivity plus, minus, opp;
  std::size_t opp_chambers = 0;
  bool hypotheses = false;  // TCS1-4 and both halves simply connected
  bool violation = false;   // hypotheses hold but Opp is not simply connected
};

MainTheoremReport verify_main_theorem(OppositionDatum const& d, OmegaSupplier const& supplier = {},
                                      std::size_t limit = default_coset_limit);

// Is omega a chamber map C_-sign -> C_sign with omega(x) op x and
// omega(c^op) = {c}?  Empty string when it is.
std::string omega_defect(OppositionDatum const& d, int sign, std::size_t c,
                         std::vector<std::size_t> const& omega);

}  // namespace kmc
