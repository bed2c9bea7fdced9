#include "kmc/ring.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include <fmt/format.h>

#include "kmc/roots.hpp"

namespace kmc {

namespace {

constexpr std::size_t table_limit = 1024;

long long mod(long long a, long long n) {
  a %= n;
  return a < 0 ? a + n : a;
}

// Digits of a quotient-ring code in base |B|, least significant first.
std::vector<Code> digits(Code c, std::size_t b, int d) {
  std::vector<Code> out(d);
  for (int i = 0; i < d; ++i) {
    out[i] = c % b;
    c /= b;
  }
  return out;
}

Code undigits(std::vector<Code> const& ds, std::size_t b) {
  Code c = 0;
  for (auto it = ds.rbegin(); it != ds.rend(); ++it) {
    c = c * b + *it;
  }
  return c;
}

// Remainder of a polynomial over a finite ring modulo a monic f.
void reduce_poly(Ring const& base, std::vector<Code>& p,
                 std::vector<Code> const& f) {
  int d = static_cast<int>(f.size()) - 1;
  for (int k = static_cast<int>(p.size()) - 1; k >= d; --k) {
    Code c = p[k];
    if (c == 0) continue;
    for (int j = 0; j <= d; ++j) {
      p[k - d + j] = base.sub(p[k - d + j], base.mul(c, f[j]));
    }
  }
  p.resize(d);
}

std::string poly_string(Ring const& base, std::vector<Code> const& c) {
  std::string s;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
    if (c[k] == 0) continue;
    if (!s.empty()) s += '+';
    std::string coeff = base.format(c[k]);
    if (k == 0) {
      s += coeff;
      continue;
    }
    if (c[k] != base.one()) {
      s += coeff.find_first_of("+t") != std::string::npos
               ? "(" + coeff + ")"
               : coeff;
    }
    s += k == 1 ? "t" : fmt::format("t^{}", k);
  }
  return s.empty() ? "0" : s;
}

bool irreducible_over_prime(int p, std::vector<Code> const& f) {
  // Trial division by every monic polynomial of degree 1..deg/2.
  auto zp = Ring::modular(p);
  int d = static_cast<int>(f.size()) - 1;
  for (int e = 1; 2 * e <= d; ++e) {
    long long count = 1;
    for (int i = 0; i < e; ++i) count *= p;
    for (long long c = 0; c < count; ++c) {
      std::vector<Code> g = digits(static_cast<Code>(c), p, e);
      g.push_back(1);
      std::vector<Code> r = f;
      reduce_poly(*zp, r, g);
      if (std::all_of(r.begin(), r.end(), [](Code x) { return x == 0; })) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::size_t Ring::size() const {
  if (!is_finite()) throw NotSupported("Z_(p) is infinite");
  return size_;
}

Code Ring::slow_add(Code a, Code b) const {
  switch (arith_kind()) {
    case RingKind::modular:
      return static_cast<Code>((a + b) % n_);
    case RingKind::galois:
    case RingKind::quotient: {
      auto da = digits(a, base_->size(), degree_);
      auto db = digits(b, base_->size(), degree_);
      for (int i = 0; i < degree_; ++i) da[i] = base_->add(da[i], db[i]);
      return undigits(da, base_->size());
    }
    case RingKind::residue:
      return proj_[base_->add(lift_[a], lift_[b])];
    default:
      throw NotSupported("finite operation on Z_(p)");
  }
}

Code Ring::slow_mul(Code a, Code b) const {
  switch (arith_kind()) {
    case RingKind::modular:
      return static_cast<Code>((static_cast<unsigned long long>(a) * b) % n_);
    case RingKind::galois:
    case RingKind::quotient: {
      auto da = digits(a, base_->size(), degree_);
      auto db = digits(b, base_->size(), degree_);
      std::vector<Code> p(2 * degree_, 0);
      for (int i = 0; i < degree_; ++i) {
        for (int j = 0; j < degree_; ++j) {
          p[i + j] = base_->add(p[i + j], base_->mul(da[i], db[j]));
        }
      }
      reduce_poly(*base_, p, modulus_);
      return undigits(p, base_->size());
    }
    case RingKind::residue:
      return proj_[base_->mul(lift_[a], lift_[b])];
    default:
      throw NotSupported("finite operation on Z_(p)");
  }
}

void Ring::build_tables() {
  std::size_t n = size_;
  if (n > ring_size_cap) {
    throw CapExceeded(fmt::format("ring {} has {} > {} elements", name_, n,
                                  ring_size_cap));
  }
  elements_.resize(n);
  std::iota(elements_.begin(), elements_.end(), 0);
  if (n <= table_limit) {
    add_.resize(n * n);
    mul_.resize(n * n);
    for (Code a = 0; a < n; ++a) {
      for (Code b = a; b < n; ++b) {
        add_[a * n + b] = add_[b * n + a] = slow_add(a, b);
        mul_[a * n + b] = mul_[b * n + a] = slow_mul(a, b);
      }
    }
  }
  neg_.assign(n, 0);
  for (Code a = 0; a < n; ++a) {
    for (Code b = 0; b < n; ++b) {
      if (add(a, b) == 0) {
        neg_[a] = b;
        break;
      }
    }
  }
  inv_.assign(n, 0);
  unit_.assign(n, 0);
  for (Code a = 0; a < n; ++a) {
    if (unit_[a]) continue;
    for (Code b = 0; b < n; ++b) {
      if (mul(a, b) == one_) {
        unit_[a] = unit_[b] = 1;
        inv_[a] = b;
        inv_[b] = a;
        break;
      }
    }
  }
  for (Code a = 0; a < n; ++a) {
    (unit_[a] ? units_ : nonunits_).push_back(a);
  }
  Code c = one_;
  char_ = 1;
  while (c != 0) {
    c = add(c, one_);
    ++char_;
  }
}

Code Ring::add(Code a, Code b) const {
  return add_.empty() ? slow_add(a, b) : add_[a * size_ + b];
}

Code Ring::mul(Code a, Code b) const {
  return mul_.empty() ? slow_mul(a, b) : mul_[a * size_ + b];
}

Code Ring::neg(Code a) const { return neg_[a]; }

std::optional<Code> Ring::inverse(Code a) const {
  if (!unit_[a]) return std::nullopt;
  return inv_[a];
}

Code Ring::inv(Code a) const {
  if (!unit_[a]) {
    throw NonUnit(fmt::format("{} is not a unit in {}", format(a), name_));
  }
  return inv_[a];
}

Code Ring::from_int(long long n) const {
  switch (arith_kind()) {
    case RingKind::modular:
      return static_cast<Code>(mod(n, n_));
    case RingKind::galois:
    case RingKind::quotient:
      return base_->from_int(n);
    case RingKind::residue:
      return proj_[base_->from_int(n)];
    default:
      throw NotSupported("from_int on Z_(p) codes");
  }
}

Code Ring::pow(Code a, long long e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  Code r = one_;
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::string Ring::format(Code a) const {
  switch (arith_kind()) {
    case RingKind::modular:
      return std::to_string(a);
    case RingKind::galois:
    case RingKind::quotient:
      return poly_string(*base_, digits(a, base_->size(), degree_));
    case RingKind::residue:
      return "[" + base_->format(lift_[a]) + "]";
    default:
      return "?";
  }
}

bool Ring::is_plocal_member(Rational const& q) const {
  return boost::multiprecision::denominator(q) % prime_ != 0;
}

RingPtr Ring::modular(int n) {
  if (n < 2) throw ParseError(fmt::format("Z/{}: modulus must be >= 2", n));
  auto r = std::shared_ptr<Ring>(new Ring);
  r->kind_ = RingKind::modular;
  r->name_ = fmt::format("Z/{}", n);
  r->n_ = n;
  r->size_ = n;
  r->one_ = 1;
  for (int p = 2; p <= n; ++p) {
    if (n % p == 0) {
      r->prime_ = p;
      break;
    }
  }
  r->build_tables();
  return r;
}

RingPtr Ring::galois(int q) {
  int p = 0;
  for (int d = 2; d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  int k = 0;
  for (int m = q; m > 1; m /= p, ++k) {
    if (m % p != 0) throw ParseError(fmt::format("GF({}): not a prime power", q));
  }
  if (q < 2) throw ParseError(fmt::format("GF({}): not a prime power", q));
  if (k == 1) {
    auto zp = std::const_pointer_cast<Ring>(modular(p));
    zp->kind_ = RingKind::galois;
    zp->name_ = fmt::format("GF({})", q);
    return zp;
  }
  long long count = 1;
  for (int i = 0; i < k; ++i) count *= p;
  for (long long c = 0; c < count; ++c) {
    auto f = digits(static_cast<Code>(c), p, k);
    f.push_back(1);
    if (irreducible_over_prime(p, f)) {
      auto r = std::const_pointer_cast<Ring>(quotient(modular(p), f));
      r->kind_ = RingKind::galois;
      r->name_ = fmt::format("GF({})", q);
      return r;
    }
  }
  throw Error("no irreducible polynomial found");
}

RingPtr Ring::quotient(RingPtr base, std::vector<Code> modulus) {
  if (!base->is_finite()) throw NotSupported("quotient of Z_(p)");
  if (modulus.size() < 2 || modulus.back() != base->one()) {
    throw ParseError("quotient modulus must be monic of degree >= 1");
  }
  auto r = std::shared_ptr<Ring>(new Ring);
  r->kind_ = RingKind::quotient;
  r->base_ = base;
  r->modulus_ = std::move(modulus);
  r->degree_ = static_cast<int>(r->modulus_.size()) - 1;
  std::size_t n = 1;
  for (int i = 0; i < r->degree_; ++i) {
    n *= base->size();
    if (n > ring_size_cap) {
      throw CapExceeded("quotient ring exceeds the element cap");
    }
  }
  r->size_ = n;
  r->one_ = base->one();
  r->prime_ = base->prime();
  r->name_ = fmt::format("{}[t]/({})", base->name(),
                         poly_string(*base, r->modulus_));
  r->build_tables();
  return r;
}

RingPtr Ring::plocal(int p) {
  if (!is_prime(p)) throw ParseError(fmt::format("Zloc({}): not prime", p));
  auto r = std::shared_ptr<Ring>(new Ring);
  r->kind_ = RingKind::plocal;
  r->name_ = fmt::format("Zloc({})", p);
  r->prime_ = p;
  r->char_ = 0;
  return r;
}

RingPtr residue_ring(RingPtr const& parent, std::vector<Code> const& ideal) {
  auto r = std::shared_ptr<Ring>(new Ring);
  r->kind_ = RingKind::residue;
  r->base_ = parent;
  std::size_t n = parent->size();
  r->proj_.assign(n, static_cast<Code>(-1));
  for (Code a = 0; a < n; ++a) {
    if (r->proj_[a] != static_cast<Code>(-1)) continue;
    Code cls = static_cast<Code>(r->lift_.size());
    r->lift_.push_back(a);
    for (Code l : ideal) r->proj_[parent->add(a, l)] = cls;
  }
  r->size_ = r->lift_.size();
  r->one_ = r->proj_[parent->one()];
  r->prime_ = parent->prime();
  r->name_ = fmt::format("{}/m", parent->name());
  r->build_tables();
  return r;
}

namespace {

struct Parser {
  std::string_view s;
  std::size_t pos = 0;

  bool eof() const { return pos >= s.size(); }
  char peek() const { return eof() ? '\0' : s[pos]; }
  bool accept(std::string_view tok) {
    if (s.substr(pos, tok.size()) == tok) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) {
      throw ParseError(fmt::format("ring literal '{}': expected '{}' at {}", s,
                                   tok, pos));
    }
  }
  long long integer() {
    std::size_t start = pos;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
    if (start == pos) {
      throw ParseError(fmt::format("ring literal '{}': expected integer at {}",
                                   s, pos));
    }
    long long v = std::stoll(std::string(s.substr(start, pos - start)));
    if (v > 1000000) throw ParseError("ring literal: integer too large");
    return v;
  }

  // Polynomial in t with integer coefficients, reduced into `base`.
  std::vector<Code> poly(Ring const& base) {
    std::vector<long long> coeff;
    bool first = true;
    while (!eof() && peek() != ')') {
      long long sign = 1;
      if (accept("+")) {
      } else if (accept("-")) {
        sign = -1;
      } else if (!first) {
        throw ParseError(fmt::format("ring literal '{}': bad term at {}", s, pos));
      }
      first = false;
      long long c = 1;
      bool has_c = false;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        c = integer();
        has_c = true;
        accept("*");
      }
      std::size_t e = 0;
      if (accept("t")) {
        e = 1;
        if (accept("^")) e = static_cast<std::size_t>(integer());
      } else if (!has_c) {
        throw ParseError(fmt::format("ring literal '{}': bad term at {}", s, pos));
      }
      if (coeff.size() <= e) coeff.resize(e + 1, 0);
      coeff[e] += sign * c;
    }
    std::vector<Code> out;
    for (long long c : coeff) out.push_back(base.from_int(c));
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
  }
};

}  // namespace

RingPtr Ring::parse(std::string_view literal) {
  std::string compact;
  for (char c : literal) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  Parser p{compact};
  RingPtr base;
  if (p.accept("Zloc(")) {
    int q = static_cast<int>(p.integer());
    p.expect(")");
    if (!p.eof()) throw ParseError("Zloc(p) takes no suffix");
    return plocal(q);
  } else if (p.accept("Z/")) {
    base = modular(static_cast<int>(p.integer()));
  } else if (p.accept("GF(")) {
    base = galois(static_cast<int>(p.integer()));
    p.expect(")");
  } else if (p.accept("F")) {
    base = galois(static_cast<int>(p.integer()));
  } else {
    throw ParseError(fmt::format("unknown ring literal '{}'", literal));
  }
  if (p.eof()) return base;
  p.expect("[t]/(");
  auto f = p.poly(*base);
  p.expect(")");
  if (!p.eof()) throw ParseError(fmt::format("trailing text in '{}'", literal));
  return quotient(base, f);
}

RingElem::RingElem(RingPtr ring, Code code) : ring_(std::move(ring)), code_(code) {
  if (!ring_->is_finite()) {
    q_ = Rational(code);
  } else if (code >= ring_->size()) {
    throw Error("element code out of range");
  }
}

RingElem::RingElem(RingPtr ring, Rational q) : ring_(std::move(ring)), q_(std::move(q)) {
  if (ring_->is_finite()) throw NotSupported("rational element of a finite ring");
  if (!ring_->is_plocal_member(q_)) {
    throw Error(fmt::format("{} is not in {}", q_.str(), ring_->name()));
  }
}

RingElem RingElem::of(RingPtr const& ring, long long n) {
  if (!ring->is_finite()) return RingElem(ring, Rational(n));
  return RingElem(ring, ring->from_int(n));
}

void RingElem::check_same(RingElem const& b) const {
  if (ring_ != b.ring_) {
    throw RingMismatch(fmt::format("{} vs {}", ring_->name(), b.ring_->name()));
  }
}

RingElem RingElem::operator+(RingElem const& b) const {
  check_same(b);
  if (!ring_->is_finite()) return RingElem(ring_, q_ + b.q_);
  return RingElem(ring_, ring_->add(code_, b.code_));
}

RingElem RingElem::operator-(RingElem const& b) const { return *this + (-b); }

RingElem RingElem::operator*(RingElem const& b) const {
  check_same(b);
  if (!ring_->is_finite()) return RingElem(ring_, q_ * b.q_);
  return RingElem(ring_, ring_->mul(code_, b.code_));
}

RingElem RingElem::operator-() const {
  if (!ring_->is_finite()) return RingElem(ring_, Rational(-q_));
  return RingElem(ring_, ring_->neg(code_));
}

bool RingElem::is_unit() const {
  if (!ring_->is_finite()) {
    return boost::multiprecision::numerator(q_) % ring_->prime() != 0;
  }
  return ring_->is_unit(code_);
}

RingElem RingElem::invert() const {
  if (!is_unit()) throw NonUnit(fmt::format("{} is not a unit in {}", str(), ring_->name()));
  if (!ring_->is_finite()) return RingElem(ring_, Rational(1 / q_));
  return RingElem(ring_, ring_->inv(code_));
}

bool RingElem::operator==(RingElem const& b) const {
  check_same(b);
  return ring_->is_finite() ? code_ == b.code_ : q_ == b.q_;
}

std::string RingElem::str() const {
  return ring_->is_finite() ? ring_->format(code_) : q_.str();
}

Code Locality::project(RingElem const& a) const {
  if (a.ring()->is_finite()) return projection.at(a.code());
  auto p = a.ring()->prime();
  BigInt num = boost::multiprecision::numerator(a.value());
  BigInt den = boost::multiprecision::denominator(a.value());
  long long n = static_cast<long long>(((num % p) + p) % p);
  long long d = static_cast<long long>(((den % p) + p) % p);
  auto const& k = *residue_field;
  return k.mul(k.from_int(n), k.inv(k.from_int(d)));
}

Locality locality(RingPtr const& ring) {
  Locality out;
  if (!ring->is_finite()) {
    out.local = true;
    out.residue_field = Ring::galois(ring->prime());
    return out;
  }
  auto const& m = ring->nonunits();
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (std::size_t y = x; y < m.size(); ++y) {
      Code s = ring->add(m[x], m[y]);
      if (ring->is_unit(s)) {
        out.witness = fmt::format("{} + {} = {} is a unit", ring->format(m[x]),
                                  ring->format(m[y]), ring->format(s));
        return out;
      }
    }
  }
  out.local = true;
  out.maximal_ideal = m;
  if (m.size() == 1) {
    out.residue_field = ring;
    out.projection = ring->elements();
  } else {
    out.residue_field = residue_ring(ring, m);
    // Same class numbering as residue_ring: order of least representative.
    std::vector<Code> cls(ring->size(), static_cast<Code>(-1));
    Code next = 0;
    for (Code a = 0; a < ring->size(); ++a) {
      if (cls[a] != static_cast<Code>(-1)) continue;
      for (Code l : m) cls[ring->add(a, l)] = next;
      ++next;
    }
    out.projection = cls;
  }
  return out;
}

std::vector<std::size_t> quotient_field_sizes(RingPtr const& ring) {
  std::vector<std::size_t> out;
  if (!ring->is_finite()) return {static_cast<std::size_t>(ring->prime())};
  std::vector<Code> idem;
  for (Code e : ring->elements()) {
    if (e != 0 && ring->mul(e, e) == e) idem.push_back(e);
  }
  for (Code e : idem) {
    bool primitive = true;
    for (Code f : idem) {
      if (f != e && ring->mul(e, f) == f) {
        primitive = false;
        break;
      }
    }
    if (!primitive) continue;
    // eR is local with identity e; its residue field has |eR|/|m_e| elements.
    std::vector<char> in(ring->size(), 0);
    for (Code r : ring->elements()) in[ring->mul(e, r)] = 1;
    std::size_t total = 0, units = 0, nonunits = 0;
    for (Code x = 0; x < ring->size(); ++x) {
      if (!in[x]) continue;
      ++total;
      bool unit = false;
      for (Code y = 0; y < ring->size() && !unit; ++y) {
        unit = in[y] && ring->mul(x, y) == e;
      }
      unit ? ++units : ++nonunits;
    }
    out.push_back(total / nonunits);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CoVerdict satisfies_co(RingPtr const& ring, Gcm const& a) {
  int worst = 0;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    for (std::size_t j = 0; j < a.rank(); ++j) {
      if (i != j) worst = std::max(worst, a(i, j) * a(j, i));
    }
  }
  CoVerdict v;
  auto sizes = quotient_field_sizes(ring);
  for (std::size_t q : sizes) {
    if ((worst == 2 && q == 2) || (worst == 3 && (q == 2 || q == 3))) {
      v.ok = false;
      v.witness = fmt::format("quotient field F{} with a_ij a_ji = {}", q, worst);
      return v;
    }
  }
  return v;
}

}  // namespace kmc
