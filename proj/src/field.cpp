#include "linform/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "linform/errors.hpp"

namespace linform {

namespace {

constexpr std::uint32_t kMaxQ = 1u << 20;         // construction guard
constexpr std::uint32_t kTableMaxQ = 1024;        // full add/mul tables below this

bool is_prime_u32(std::uint32_t v) {
  if (v < 2) return false;
  for (std::uint32_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

// Polynomials over F_p, little-endian coefficient vectors. High zeros allowed.
using Poly = std::vector<std::uint32_t>;

int poly_deg(const Poly& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[static_cast<std::size_t>(i)] != 0) return i;
  return -1;
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = (out[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p;
  }
  return out;
}

// a mod m in place; m monic.
void poly_mod(Poly& a, const Poly& m, std::uint32_t p) {
  int dm = poly_deg(m);
  for (int i = poly_deg(a); i >= dm && i >= 0; i = poly_deg(a)) {
    std::uint32_t c = a[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    int shift = i - dm;
    for (int j = 0; j <= dm; ++j) {
      std::uint64_t sub = static_cast<std::uint64_t>(c) * m[static_cast<std::size_t>(j)] % p;
      std::uint32_t& slot = a[static_cast<std::size_t>(j + shift)];
      slot = static_cast<std::uint32_t>((slot + p - sub) % p);
    }
  }
}

bool poly_divides(const Poly& d, Poly a, std::uint32_t p) {
  // d monic; returns true iff d | a.
  poly_mod(a, d, p);
  return poly_deg(a) < 0;
}

bool is_irreducible(const Poly& mod, std::uint32_t p, std::uint32_t m) {
  // Trial division by every monic polynomial of degree 1..m/2. Fine at the
  // scale this library runs at (p^m is capped well below 2^20).
  for (std::uint32_t d = 1; 2 * d <= m; ++d) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t lo = 0; lo < count; ++lo) {
      Poly g(d + 1, 0);
      std::uint64_t v = lo;
      for (std::uint32_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      g[d] = 1;
      if (poly_divides(g, mod, p)) return false;
    }
  }
  return true;
}

std::string poly_to_string(const Poly& c) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0) {
      os << c[i];
    } else {
      if (c[i] != 1) os << c[i];
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  if (first) os << "0";
  return os.str();
}

// Default moduli: the standard Conway polynomials, little-endian.
const std::map<std::uint32_t, Poly>& default_moduli() {
  static const std::map<std::uint32_t, Poly> table = {
      {4, {1, 1, 1}},           // x^2 + x + 1
      {8, {1, 1, 0, 1}},        // x^3 + x + 1
      {9, {2, 2, 1}},           // x^2 + 2x + 2
      {16, {1, 1, 0, 0, 1}},    // x^4 + x + 1
      {25, {2, 4, 1}},          // x^2 + 4x + 2
      {27, {1, 2, 0, 1}},       // x^3 + 2x + 1
      {32, {1, 0, 1, 0, 0, 1}}, // x^5 + x^2 + 1
      {49, {3, 6, 1}},          // x^2 + 6x + 3
  };
  return table;
}

}  // namespace

struct Field::Core {
  std::uint32_t p = 0, m = 0, q = 0;
  Poly modulus;  // empty when m == 1

  bool has_tables = false;
  std::vector<std::uint32_t> add_tab, mul_tab;  // q*q, index a*q+b
  std::vector<std::uint32_t> neg_tab, inv_tab;  // q
  std::vector<std::uint32_t> trace_tab;         // q, values in [0, p)
  std::vector<std::complex<double>> root_tab;   // p-th roots of unity
  std::vector<std::complex<double>> chi_tab;    // q

  std::vector<std::uint32_t> decompose(std::uint32_t code) const {
    std::vector<std::uint32_t> d(m);
    for (std::uint32_t i = 0; i < m; ++i) {
      d[i] = code % p;
      code /= p;
    }
    return d;
  }

  std::uint32_t compose(const Poly& digits) const {
    std::uint32_t code = 0;
    for (std::uint32_t i = m; i-- > 0;)
      code = code * p + (i < digits.size() ? digits[i] : 0);
    return code;
  }

  std::uint32_t raw_add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t out = 0, mult = 1;
    for (std::uint32_t i = 0; i < m; ++i) {
      out += (a % p + b % p) % p * mult;
      a /= p;
      b /= p;
      mult *= p;
    }
    return out;
  }

  std::uint32_t raw_neg(std::uint32_t a) const {
    std::uint32_t out = 0, mult = 1;
    for (std::uint32_t i = 0; i < m; ++i) {
      out += (p - a % p) % p * mult;
      a /= p;
      mult *= p;
    }
    return out;
  }

  std::uint32_t raw_mul(std::uint32_t a, std::uint32_t b) const {
    if (m == 1) return static_cast<std::uint32_t>(std::uint64_t{a} * b % p);
    Poly prod = poly_mul(decompose(a), decompose(b), p);
    poly_mod(prod, modulus, p);
    return compose(prod);
  }

  std::uint32_t tab_add(std::uint32_t a, std::uint32_t b) const {
    return has_tables ? add_tab[std::size_t{a} * q + b] : raw_add(a, b);
  }

  std::uint32_t tab_mul(std::uint32_t a, std::uint32_t b) const {
    return has_tables ? mul_tab[std::size_t{a} * q + b] : raw_mul(a, b);
  }

  std::uint32_t raw_pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t acc = 1;
    while (e) {
      if (e & 1) acc = tab_mul(acc, a);
      a = tab_mul(a, a);
      e >>= 1;
    }
    return acc;
  }
};

Field Field::create(std::uint32_t p, std::uint32_t m,
                    const std::optional<std::vector<std::uint32_t>>& modulus) {
  if (!is_prime_u32(p)) throw NotPrimeError("p=" + std::to_string(p) + " is not prime");
  if (m < 1) throw PreconditionError("m must be >= 1");

  std::uint64_t q64 = 1;
  for (std::uint32_t i = 0; i < m; ++i) {
    q64 *= p;
    if (q64 > kMaxQ)
      throw PreconditionError("q exceeds the supported size (" + std::to_string(kMaxQ) + ")");
  }
  const std::uint32_t q = static_cast<std::uint32_t>(q64);

  auto core = std::make_shared<Core>();
  core->p = p;
  core->m = m;
  core->q = q;

  if (m > 1) {
    if (modulus) {
      const Poly& mod = *modulus;
      if (mod.size() != m + 1)
        throw PreconditionError("modulus must have degree m = " + std::to_string(m));
      for (std::uint32_t c : mod)
        if (c >= p) throw PreconditionError("modulus coefficients must lie in [0, p)");
      if (mod.back() != 1) throw PreconditionError("modulus must be monic");
      if (!is_irreducible(mod, p, m))
        throw ReducibleError("modulus " + poly_to_string(mod) + " is reducible over F_" +
                             std::to_string(p));
      core->modulus = mod;
    } else {
      auto it = default_moduli().find(q);
      if (it == default_moduli().end())
        throw NoDefaultModulusError("no default modulus for q=" + std::to_string(q) +
                                    "; pass one explicitly");
      core->modulus = it->second;
    }
  } else if (modulus) {
    // Ignored for prime fields, but reject garbage shapes.
    if (!modulus->empty() && modulus->size() != 2)
      throw PreconditionError("modulus is meaningless for m = 1");
  }

  // Tables. neg/inv/trace/chi are always materialized (q entries each);
  // add/mul tables only while they stay small.
  core->has_tables = false;
  if (q <= kTableMaxQ) {
    core->add_tab.resize(std::size_t{q} * q);
    core->mul_tab.resize(std::size_t{q} * q);
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b) {
        core->add_tab[std::size_t{a} * q + b] = core->raw_add(a, b);
        core->mul_tab[std::size_t{a} * q + b] = core->raw_mul(a, b);
      }
    core->has_tables = true;
  }

  core->neg_tab.resize(q);
  for (std::uint32_t a = 0; a < q; ++a) core->neg_tab[a] = core->raw_neg(a);

  core->inv_tab.assign(q, 0);
  for (std::uint32_t a = 1; a < q; ++a) core->inv_tab[a] = core->raw_pow(a, q - 2);

  core->trace_tab.resize(q);
  for (std::uint32_t a = 0; a < q; ++a) {
    std::uint32_t acc = a, t = a;
    for (std::uint32_t i = 1; i < m; ++i) {
      acc = core->raw_pow(acc, p);
      t = core->raw_add(t, acc);
    }
    // The trace lands in the prime subfield, whose codes are exactly [0, p).
    if (t >= p)
      throw NumericalInconsistencyError("trace fell outside the prime subfield");
    core->trace_tab[a] = t;
  }

  core->root_tab.resize(p);
  for (std::uint32_t j = 0; j < p; ++j)
    core->root_tab[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / p);

  core->chi_tab.resize(q);
  for (std::uint32_t a = 0; a < q; ++a) core->chi_tab[a] = core->root_tab[core->trace_tab[a]];

  return Field(std::move(core));
}

std::uint32_t Field::p() const noexcept { return core_->p; }
std::uint32_t Field::m() const noexcept { return core_->m; }
std::uint32_t Field::q() const noexcept { return core_->q; }
const std::vector<std::uint32_t>& Field::modulus() const noexcept { return core_->modulus; }

std::uint32_t Field::add(std::uint32_t a, std::uint32_t b) const { return core_->tab_add(a, b); }

std::uint32_t Field::sub(std::uint32_t a, std::uint32_t b) const {
  return core_->tab_add(a, core_->neg_tab[b]);
}

std::uint32_t Field::neg(std::uint32_t a) const { return core_->neg_tab[a]; }

std::uint32_t Field::mul(std::uint32_t a, std::uint32_t b) const { return core_->tab_mul(a, b); }

std::uint32_t Field::inv(std::uint32_t a) const {
  if (a == 0) throw DivisionByZeroError("inverse of 0");
  return core_->inv_tab[a];
}

std::uint32_t Field::pow(std::uint32_t a, std::uint64_t e) const { return core_->raw_pow(a, e); }

std::uint32_t Field::trace(std::uint32_t a) const { return core_->trace_tab[a]; }

std::complex<double> Field::chi(std::uint32_t a) const { return core_->chi_tab[a]; }

bool Field::operator==(const Field& other) const {
  if (core_ == other.core_) return true;
  return core_->p == other.core_->p && core_->m == other.core_->m &&
         core_->modulus == other.core_->modulus;
}

// --- spec strings -----------------------------------------------------------

namespace {

// Parses "1+x+x^2" / "2+2x+x^2" / "x^3+2x+1"; term order free.
Poly parse_poly(std::string_view s, std::size_t base_pos) {
  Poly coeffs;
  auto bump = [&coeffs](std::size_t power, std::uint64_t c) {
    if (coeffs.size() <= power) coeffs.resize(power + 1, 0);
    coeffs[power] = static_cast<std::uint32_t>(coeffs[power] + c);
  };
  std::size_t i = 0;
  const std::size_t n = s.size();
  auto skip_ws = [&] { while (i < n && std::isspace(static_cast<unsigned char>(s[i]))) ++i; };
  bool expect_term = true;
  while (true) {
    skip_ws();
    if (i >= n) break;
    if (!expect_term) {
      if (s[i] != '+') throw ParseError("expected '+' in modulus", base_pos + i);
      ++i;
      expect_term = true;
      continue;
    }
    // term: INT | INT '*'? 'x' ('^' INT)? | 'x' ('^' INT)?
    std::uint64_t coeff = 1;
    bool saw_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      coeff = 0;
      while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) {
        coeff = coeff * 10 + static_cast<std::uint64_t>(s[i] - '0');
        if (coeff > kMaxQ) throw ParseError("modulus coefficient too large", base_pos + i);
        ++i;
      }
      saw_coeff = true;
      skip_ws();
      if (i < n && s[i] == '*') { ++i; skip_ws(); }
    }
    std::size_t power = 0;
    if (i < n && s[i] == 'x') {
      ++i;
      power = 1;
      if (i < n && s[i] == '^') {
        ++i;
        if (i >= n || !std::isdigit(static_cast<unsigned char>(s[i])))
          throw ParseError("expected exponent after '^'", base_pos + i);
        power = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) {
          power = power * 10 + static_cast<std::size_t>(s[i] - '0');
          if (power > 64) throw ParseError("modulus degree too large", base_pos + i);
          ++i;
        }
      }
    } else if (!saw_coeff) {
      throw ParseError("expected a modulus term", base_pos + i);
    }
    bump(power, coeff);
    expect_term = false;
  }
  if (expect_term) throw ParseError("empty or dangling modulus", base_pos + i);
  return coeffs;
}

// Smallest prime factor; v >= 2.
std::uint32_t least_factor(std::uint32_t v) {
  for (std::uint32_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return d;
  return v;
}

}  // namespace

Field Field::from_spec(std::string_view spec) {
  // Trim.
  std::size_t b = 0, e = spec.size();
  while (b < e && std::isspace(static_cast<unsigned char>(spec[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(spec[e - 1]))) --e;
  std::string_view s = spec.substr(b, e - b);

  if (s.rfind("q=", 0) == 0) {
    std::string_view num = s.substr(2);
    if (num.empty()) throw ParseError("missing value after q=", b + 2);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < num.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(num[i])))
        throw ParseError("q must be an integer", b + 2 + i);
      v = v * 10 + static_cast<std::uint64_t>(num[i] - '0');
      if (v > kMaxQ) throw ParseError("q too large", b + 2 + i);
    }
    if (v < 2) throw NotPrimeError("q=" + std::to_string(v) + " is not a prime power");
    std::uint32_t q = static_cast<std::uint32_t>(v);
    std::uint32_t p = least_factor(q);
    std::uint32_t m = 0;
    std::uint32_t rest = q;
    while (rest % p == 0) { rest /= p; ++m; }
    if (rest != 1)
      throw NotPrimeError("q=" + std::to_string(q) + " is not a prime power");
    return create(p, m);
  }

  if (s.rfind("p=", 0) != 0)
    throw ParseError("field spec must start with q= or p=", b);

  // comma-separated key=value list: p=..., m=..., modulus=...
  std::optional<std::uint32_t> p, m;
  std::optional<Poly> modulus;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    // modulus values contain no commas, so a plain split is safe
    std::string_view part = s.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                          : comma - pos);
    std::size_t eq = part.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected key=value in field spec", b + pos);
    std::string_view key = part.substr(0, eq);
    std::string_view val = part.substr(eq + 1);
    auto parse_int = [&](std::string_view t) -> std::uint32_t {
      if (t.empty()) throw ParseError("missing integer value", b + pos + eq + 1);
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(t[i])))
          throw ParseError("expected an integer", b + pos + eq + 1 + i);
        acc = acc * 10 + static_cast<std::uint64_t>(t[i] - '0');
        if (acc > kMaxQ) throw ParseError("value too large", b + pos + eq + 1 + i);
      }
      return static_cast<std::uint32_t>(acc);
    };
    if (key == "p") {
      p = parse_int(val);
    } else if (key == "m") {
      m = parse_int(val);
    } else if (key == "modulus") {
      modulus = parse_poly(val, b + pos + eq + 1);
    } else {
      throw ParseError("unknown field spec key '" + std::string(key) + "'", b + pos);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (!p) throw ParseError("field spec missing p=", b);
  if (!m) throw ParseError("field spec missing m=", b);
  return create(*p, *m, modulus ? std::optional<std::vector<std::uint32_t>>(*modulus)
                                : std::nullopt);
}

std::string Field::spec() const {
  if (m() == 1) return "q=" + std::to_string(p());
  auto it = default_moduli().find(q());
  if (it != default_moduli().end() && it->second == modulus())
    return "q=" + std::to_string(q());
  return "p=" + std::to_string(p()) + ",m=" + std::to_string(m()) +
         ",modulus=" + poly_to_string(modulus());
}

// --- FieldElement ------------------------------------------------------------

FieldElement::FieldElement(Field field, std::uint32_t code)
    : field_(std::move(field)), code_(code) {
  if (code_ >= field_.q())
    throw PreconditionError("element code " + std::to_string(code_) + " out of range for q=" +
                            std::to_string(field_.q()));
}

namespace {
void require_same_field(const Field& a, const Field& b) {
  if (a != b) throw FieldMismatchError("elements belong to different fields");
}
}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same_field(field_, o.field_);
  return FieldElement(field_, field_.add(code_, o.code_));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  require_same_field(field_, o.field_);
  return FieldElement(field_, field_.sub(code_, o.code_));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same_field(field_, o.field_);
  return FieldElement(field_, field_.mul(code_, o.code_));
}

FieldElement FieldElement::operator-() const { return FieldElement(field_, field_.neg(code_)); }

FieldElement FieldElement::inv() const { return FieldElement(field_, field_.inv(code_)); }

// --- GroupVector -------------------------------------------------------------

GroupVector::GroupVector(Field field, std::vector<std::uint32_t> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
  if (coords_.empty()) throw PreconditionError("GroupVector needs n >= 1");
  for (std::uint32_t c : coords_)
    if (c >= field_.q()) throw PreconditionError("coordinate code out of range");
}

GroupVector GroupVector::zero(const Field& field, int n) {
  if (n < 1) throw PreconditionError("GroupVector needs n >= 1");
  return GroupVector(field, std::vector<std::uint32_t>(static_cast<std::size_t>(n), 0));
}

GroupVector GroupVector::from_index(const Field& field, int n, std::uint64_t index) {
  if (n < 1) throw PreconditionError("GroupVector needs n >= 1");
  std::vector<std::uint32_t> coords(static_cast<std::size_t>(n));
  const std::uint64_t q = field.q();
  for (int j = 0; j < n; ++j) {
    coords[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(index % q);
    index /= q;
  }
  if (index != 0) throw PreconditionError("index out of range for q^n");
  return GroupVector(field, std::move(coords));
}

std::uint64_t GroupVector::index() const {
  std::uint64_t idx = 0;
  const std::uint64_t q = field_.q();
  for (std::size_t j = coords_.size(); j-- > 0;) idx = idx * q + coords_[j];
  return idx;
}

bool GroupVector::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](std::uint32_t c) { return c == 0; });
}

std::complex<double> character(const GroupVector& y, const GroupVector& x) {
  if (y.field() != x.field()) throw FieldMismatchError("character arguments from different fields");
  if (y.n() != x.n()) throw LengthMismatchError("character arguments of different lengths");
  const Field& F = y.field();
  // tr is additive, so the character splits over coordinates.
  std::complex<double> out{1.0, 0.0};
  for (int j = 0; j < y.n(); ++j) out *= F.chi(F.mul(y.coord(j), x.coord(j)));
  return out;
}

std::uint64_t domain_size(const Field& field, int n) {
  if (n < 1) throw PreconditionError("n must be >= 1");
  std::uint64_t size = 1;
  for (int j = 0; j < n; ++j) {
    if (size > (std::uint64_t{1} << 62) / field.q())
      throw PreconditionError("q^n overflows the supported range");
    size *= field.q();
  }
  return size;
}

}  // namespace linform
