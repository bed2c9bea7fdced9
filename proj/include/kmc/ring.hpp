#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kmc/errors.hpp"

namespace kmc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Finite ring elements are integer codes 0..size-1 with 0 the zero element.
using Code = std::uint32_t;

class Ring;
using RingPtr = std::shared_ptr<Ring const>;

enum class RingKind { modular, galois, quotient, plocal, residue };

inline constexpr std::size_t ring_size_cap = 10000;

class Ring {
 public:
  static RingPtr modular(int n);
  // GF(p^k) with the least irreducible monic modulus in code order.
  static RingPtr galois(int q);
  // base[t]/(f); f monic, given by its coefficient codes from degree 0 up.
  static RingPtr quotient(RingPtr base, std::vector<Code> modulus);
  static RingPtr plocal(int p);
  static RingPtr parse(std::string_view literal);

  RingKind kind() const { return kind_; }
  bool is_finite() const { return kind_ != RingKind::plocal; }
  std::size_t size() const;
  std::string const& name() const { return name_; }
  int characteristic() const { return char_; }
  // The prime p of Z_(p), or of the prime field for finite rings of prime
  // power characteristic.
  int prime() const { return prime_; }

  Code zero() const { return 0; }
  Code one() const { return one_; }
  Code add(Code a, Code b) const;
  Code mul(Code a, Code b) const;
  Code neg(Code a) const;
  Code sub(Code a, Code b) const { return add(a, neg(b)); }
  std::optional<Code> inverse(Code a) const;
  Code inv(Code a) const;  // throws NonUnit
  bool is_unit(Code a) const { return unit_[a]; }
  Code from_int(long long n) const;
  Code pow(Code a, long long e) const;  // e < 0 needs a unit

  std::vector<Code> const& elements() const { return elements_; }
  std::vector<Code> const& units() const { return units_; }
  std::vector<Code> const& nonunits() const { return nonunits_; }
  std::string format(Code a) const;

  // Z_(p) arithmetic on reduced fractions.
  bool is_plocal_member(Rational const& q) const;

  // Finite quotient data: base ring and modulus for quotient/galois kinds,
  // parent ring and class lifts for residue kind.
  RingPtr base() const { return base_; }
  std::vector<Code> const& modulus() const { return modulus_; }

 private:
  Ring() = default;
  void build_tables();
  // Prime fields GF(p) share the modular representation.
  RingKind arith_kind() const {
    return kind_ == RingKind::galois && !base_ ? RingKind::modular : kind_;
  }
  Code slow_add(Code a, Code b) const;
  Code slow_mul(Code a, Code b) const;

  RingKind kind_{};
  std::string name_;
  int char_ = 0;
  int prime_ = 0;
  std::size_t size_ = 0;
  Code one_ = 1;

  // modular
  int n_ = 0;
  // quotient / galois
  RingPtr base_;
  std::vector<Code> modulus_;
  int degree_ = 0;
  // residue: class index of every parent element, and least lift per class
  std::vector<Code> proj_;
  std::vector<Code> lift_;

  std::vector<Code> add_, mul_, neg_, inv_;
  std::vector<char> unit_;
  std::vector<Code> elements_, units_, nonunits_;
  friend RingPtr residue_ring(RingPtr const& parent, std::vector<Code> const& ideal);
};

// Quotient R/I for an ideal I of a finite ring, elements coded by class index
// in order of least representative.
RingPtr residue_ring(RingPtr const& parent, std::vector<Code> const& ideal);

class RingElem {
 public:
  RingElem(RingPtr ring, Code code);
  RingElem(RingPtr ring, Rational q);  // Z_(p) only
  static RingElem of(RingPtr const& ring, long long n);

  RingPtr const& ring() const { return ring_; }
  Code code() const { return code_; }
  Rational const& value() const { return q_; }

  RingElem operator+(RingElem const& b) const;
  RingElem operator-(RingElem const& b) const;
  RingElem operator*(RingElem const& b) const;
  RingElem operator-() const;
  RingElem invert() const;
  bool is_unit() const;
  bool operator==(RingElem const& b) const;
  std::string str() const;

 private:
  void check_same(RingElem const& b) const;
  RingPtr ring_;
  Code code_ = 0;
  Rational q_;
};

struct Locality {
  bool local = false;
  std::vector<Code> maximal_ideal;  // finite rings
  RingPtr residue_field;
  std::vector<Code> projection;  // finite rings: code -> residue code
  std::string witness;           // for non-local rings
  // Residue projection of a Z_(p) element into Z/p.
  Code project(RingElem const& a) const;
};

Locality locality(RingPtr const& ring);

struct Gcm;

struct CoVerdict {
  bool ok = true;
  std::string witness;
};

// Condition (co): no quotient field F2 when some a_ij a_ji = 2, and no
// quotient F2 or F3 when some a_ij a_ji = 3.
CoVerdict satisfies_co(RingPtr const& ring, Gcm const& a);

// Sizes of the fields R/m over all maximal ideals m of a finite ring.
std::vector<std::size_t> quotient_field_sizes(RingPtr const& ring);

template <typename Int>
std::tuple<Int, Int, Int> bezout_data(Int a, Int b) {
  if (a == 0 && b == 0) {
    throw std::invalid_argument("bezout_data: both arguments are zero");
  }
  Int r0 = a, r1 = b, u0 = 1, u1 = 0, v0 = 0, v1 = 1;
  while (r1 != 0) {
    Int q = r0 / r1;
    Int t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = u0 - q * u1;
    u0 = u1;
    u1 = t;
    t = v0 - q * v1;
    v0 = v1;
    v1 = t;
  }
  if (r0 < 0) {
    r0 = -r0;
    u0 = -u0;
    v0 = -v0;
  }
  return {r0, u0, v0};
}

bool is_prime(long long n);

}  // namespace kmc
