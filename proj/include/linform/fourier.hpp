#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "linform/field.hpp"
#include "linform/linear_form.hpp"

namespace linform {

// f : F_q^n -> C, stored as a flat table indexed by GroupVector::index()
// (little-endian base-q packing of the coordinates).
struct GroupFunction {
  Field field;
  int n = 1;
  std::vector<std::complex<double>> values;

  std::uint64_t size() const noexcept { return values.size(); }
  std::complex<double> mean() const;

  static GroupFunction constant(const Field& field, int n, std::complex<double> c);

  // max |Im f| and distance of Re f from [0, 1]; used by the range guards.
  double max_imag() const;
  double range_excess() const;
};

// Same shape; S[y] is a Fourier coefficient indexed like the space side.
using Spectrum = GroupFunction;

// fhat(y) = (1/q^n) sum_x f(x) conj(character(y, x)). Computed as n axis
// passes of a size-q kernel, O(n q^(n+1)).
Spectrum transform(const GroupFunction& f);

// f(x) = sum_y S(y) character(y, x); inverse_transform(transform(f)) == f.
GroupFunction inverse_transform(const Spectrum& s);

// Solution-density functional evaluated in frequency space:
//   (fhat(0))^l * sum_y fhat(a_1 y) ... fhat(a_k y) character(y, b).
// b must match the equation's rhs mode (RhsMismatchError).
std::complex<double> lambda_spectral(const LinearEquation& eq, const GroupVector& b,
                                     const GroupFunction& f);

// Lambda(f) + Lambda(1-f), each weighted by (mean)^l, against the random
// two-coloring baseline 2^(1-k-l). Requires f real-valued in [0, 1] within
// 1e-9 (NotRealRangeError); an imaginary residue above 1e-9 in the result is
// NumericalInconsistencyError.
double commonness_functional(const LinearEquation& eq, const GroupVector& b,
                             const GroupFunction& f);

// File format: first line "n=<int> q=<field>", then one line per point
// "index,re[,im]", each index in [0, q^n) exactly once.
GroupFunction load_group_function(std::istream& in);
GroupFunction load_group_function_file(const std::string& path);
void save_group_function(std::ostream& out, const GroupFunction& f);

}  // namespace linform
