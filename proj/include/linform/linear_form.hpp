#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linform/field.hpp"

namespace linform {

enum class RhsMode { Zero, NonzeroB };

// a_1 x_1 + ... + a_k x_k (+ 0*y_1 + ... + 0*y_l) = b, with every a_i nonzero
// and b either identically zero or an arbitrary fixed nonzero target.
struct LinearEquation {
  Field field;
  std::vector<std::uint32_t> coeffs;  // nonzero element codes, k >= 1
  std::uint32_t free_count = 0;       // l
  RhsMode rhs_mode = RhsMode::Zero;

  std::size_t k() const noexcept { return coeffs.size(); }
  std::size_t total_vars() const noexcept { return coeffs.size() + free_count; }

  bool operator==(const LinearEquation& o) const {
    return field == o.field && coeffs == o.coeffs && free_count == o.free_count &&
           rhs_mode == o.rhs_mode;
  }
};

// Drops zero coefficients into free_count; throws AllZeroError when nothing
// survives. `extra_free` adds explicitly requested free variables on top.
LinearEquation normalize(const Field& field, const std::vector<std::uint32_t>& raw_coeffs,
                         RhsMode rhs_mode, std::uint32_t extra_free = 0);

// Which classification rule produced a verdict.
enum class Basis { T14a, T14b, T14c, T15, T17 };

std::string basis_name(Basis b);  // "T1.4a", "T1.4b", "T1.4c", "T1.5", "T1.7"

struct Verdict {
  bool sidorenko = false;
  bool common = false;
  Basis basis = Basis::T14a;
  // Present exactly when the positive case applies (a canceling pairing was
  // found): index pairs (i, j) with coeffs[i] = -coeffs[j].
  std::optional<std::vector<std::pair<int, int>>> pairing;
  bool degenerate = false;  // k == 1

  bool operator==(const Verdict& o) const {
    return sidorenko == o.sidorenko && common == o.common && basis == o.basis &&
           pairing == o.pairing && degenerate == o.degenerate;
  }
};

// Partition of the coefficient indices into pairs (i, j) with a_i = -a_j, if
// one exists. Criterion per value v: if v = -v the multiplicity of v must be
// even, otherwise the multiplicities of v and -v must agree. Deterministic
// output: each unused index is paired with the smallest usable later index.
std::optional<std::vector<std::pair<int, int>>> canceling_pair_partition(
    const Field& field, const std::vector<std::uint32_t>& coeffs);

// Homogeneous classification (rhs must be Zero, else WrongRhsModeError):
//   pairing exists            -> sidorenko and common (T1.4a; T1.5 when l >= 1)
//   no pairing, l >= 1        -> neither (T1.5)
//   no pairing, l = 0, k even -> neither (T1.4b)
//   l = 0, k odd              -> common but not sidorenko (T1.4c)
Verdict classify(const LinearEquation& eq);

// Nonzero-target classification (rhs must be NonzeroB, else WrongRhsModeError):
// never sidorenko; common iff k odd and l = 0 (T1.7).
Verdict classify_inhomogeneous(const LinearEquation& eq);

// True iff the coefficients sum to zero in the field.
bool is_translation_invariant(const LinearEquation& eq);

// Equation spec grammar: "L=1,-2,1; q=5; free=0; b=zero". The field part is
// a full field spec ("q=5" or "p=2,m=2,modulus=1+x+x^2"); negative literals
// denote additive inverses; zero coefficients become free variables; unknown
// keys are rejected (ParseError).
LinearEquation parse_equation_spec(const std::string& spec);

// Canonical spec string; parse_equation_spec(equation_spec(eq)) == eq.
std::string equation_spec(const LinearEquation& eq);

// The rhs vector the CLI and the forges use: the zero vector for Zero mode,
// (1, 0, ..., 0) for NonzeroB. Any other nonzero choice gives the same
// classification and the same counts.
GroupVector canonical_rhs(const LinearEquation& eq, int n);

}  // namespace linform
