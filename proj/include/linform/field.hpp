#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace linform {

// GF(p^m) in a polynomial basis over F_p.
//
// Conventions:
//  - An element is a polynomial c_0 + c_1 a + ... + c_{m-1} a^{m-1} with
//    c_i in [0, p); its code packs the digits little-endian in base p:
//    code = sum c_i p^i. Codes 0 and 1 are the additive and multiplicative
//    identities in every field.
//  - The modulus is stored little-endian (constant term first), monic of
//    degree m, and must be irreducible over F_p. For m = 1 no modulus is
//    involved. For q in {4, 8, 9, 16, 25, 27, 32, 49} a built-in default
//    modulus (the standard Conway polynomial) is used when none is given,
//    so codes mean the same thing across independent implementations.
//  - tr(a) = a + a^p + ... + a^{p^(m-1)} lands in F_p and is returned as an
//    integer in [0, p).
//  - chi(a) = exp(2*pi*i * tr(a) / p). Character values are taken from a
//    table of the p-th roots of unity computed once per field, so equal
//    traces give bit-identical complex values.
//
// Field is a cheap value type; all per-field tables live behind a shared
// immutable core, safe to share across threads after construction.
class Field {
public:
  // Throws NotPrimeError, PreconditionError, ReducibleError,
  // NoDefaultModulusError.
  static Field create(std::uint32_t p, std::uint32_t m,
                      const std::optional<std::vector<std::uint32_t>>& modulus = std::nullopt);

  // Accepts "q=5" (prime or prime power with a default modulus) or
  // "p=2,m=2,modulus=1+x+x^2".
  static Field from_spec(std::string_view spec);

  std::uint32_t p() const noexcept;
  std::uint32_t m() const noexcept;
  std::uint32_t q() const noexcept;

  // Little-endian, size m+1, monic; empty when m == 1.
  const std::vector<std::uint32_t>& modulus() const noexcept;

  // Canonical spec string; parsing it back reconstructs an equal field.
  std::string spec() const;

  // Arithmetic on element codes in [0, q).
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inv(std::uint32_t a) const;  // DivisionByZeroError on 0
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;

  std::uint32_t trace(std::uint32_t a) const;         // in [0, p)
  std::complex<double> chi(std::uint32_t a) const;    // exp(2 pi i tr(a)/p)

  // Fields are equal iff they have the same (p, m, modulus).
  bool operator==(const Field& other) const;
  bool operator!=(const Field& other) const { return !(*this == other); }

private:
  struct Core;
  explicit Field(std::shared_ptr<const Core> core) : core_(std::move(core)) {}
  std::shared_ptr<const Core> core_;
};

// One element with its field attached; arithmetic between elements of
// different fields throws FieldMismatchError.
class FieldElement {
public:
  FieldElement(Field field, std::uint32_t code);

  const Field& field() const noexcept { return field_; }
  std::uint32_t code() const noexcept { return code_; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement inv() const;

  bool operator==(const FieldElement& o) const {
    return field_ == o.field_ && code_ == o.code_;
  }

private:
  Field field_;
  std::uint32_t code_;
};

// A point of F_q^n. Coordinates are element codes; the flat index packs them
// little-endian in base q: index = sum coords[j] q^j.
class GroupVector {
public:
  GroupVector(Field field, std::vector<std::uint32_t> coords);

  static GroupVector zero(const Field& field, int n);
  static GroupVector from_index(const Field& field, int n, std::uint64_t index);

  const Field& field() const noexcept { return field_; }
  int n() const noexcept { return static_cast<int>(coords_.size()); }
  std::uint32_t coord(int j) const { return coords_.at(static_cast<std::size_t>(j)); }
  const std::vector<std::uint32_t>& coords() const noexcept { return coords_; }

  std::uint64_t index() const;
  bool is_zero() const;

  bool operator==(const GroupVector& o) const {
    return field_ == o.field_ && coords_ == o.coords_;
  }

private:
  Field field_;
  std::vector<std::uint32_t> coords_;
};

// Additive character of F_q^n under the standard dot product:
// character(y, x) = exp(2 pi i tr(sum_j x_j y_j) / p).
// Throws FieldMismatchError / LengthMismatchError on incompatible arguments.
std::complex<double> character(const GroupVector& y, const GroupVector& x);

// q^n as uint64, guarding against overflow (PreconditionError).
std::uint64_t domain_size(const Field& field, int n);

}  // namespace linform
