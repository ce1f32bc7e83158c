#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "linform/field.hpp"
#include "linform/fourier.hpp"
#include "linform/linear_form.hpp"

namespace linform {

// Counts are exact integers; densities are exact rationals with q-power
// denominators.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

BigInt bigint_pow(BigInt base, std::uint64_t e);

// Plain bitset over [0, size); word-packed.
class FlatBitset {
public:
  FlatBitset() = default;
  explicit FlatBitset(std::uint64_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::uint64_t size() const noexcept { return size_; }
  bool test(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(std::uint64_t i, bool v = true) {
    if (v)
      words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    else
      words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  std::uint64_t count() const;
  bool operator==(const FlatBitset& o) const { return size_ == o.size_ && words_ == o.words_; }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

private:
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// A subset of F_q^n, indexed by GroupVector::index().
struct PointSet {
  Field field;
  int n = 1;
  FlatBitset membership;

  std::uint64_t domain() const { return membership.size(); }
  std::uint64_t size() const { return membership.count(); }

  static PointSet empty(const Field& field, int n);
  static PointSet full(const Field& field, int n);
  static PointSet of_indices(const Field& field, int n, const std::vector<std::uint64_t>& idx);

  // Little-endian bitmask as an integer: bit i = membership of index i.
  BigInt mask() const;
  static PointSet from_mask(const Field& field, int n, const BigInt& mask);

  PointSet complement() const;
};

// A two-coloring of F_q^n; bit set = color 1.
struct TwoColoring {
  Field field;
  int n = 1;
  FlatBitset color;

  std::uint64_t domain() const { return color.size(); }
  PointSet color_class(bool one) const;

  static TwoColoring from_mask(const Field& field, int n, const BigInt& mask);
  BigInt mask() const;
};

// Exact number of tuples in A^(k+l) solving the equation with target b.
// Enumeration pins the last coefficient variable and solves for it; free
// variables contribute a factor |A|^l (a falling factorial under
// distinct_only, which restricts to tuples whose k+l coordinates are pairwise
// distinct). Budget accounting: |A|^(k-1) pivot solves; BudgetExceededError
// beyond the configured budget.
BigInt count_solutions_in_set(const LinearEquation& eq, const GroupVector& b, const PointSet& A,
                              bool distinct_only = false);

// Solutions entirely inside color class 0 plus solutions entirely inside
// color class 1.
BigInt monochromatic_count(const LinearEquation& eq, const GroupVector& b,
                           const TwoColoring& chi, bool distinct_only = false);

// Average of f(x_1)...f(x_k) over all q^(n(k-1)) solution tuples, times
// (mean f)^l for the free variables. Works for complex f.
std::complex<double> lambda_bruteforce(const LinearEquation& eq, const GroupVector& b,
                                       const GroupFunction& f);

// Exact solution density of the indicator of A:
// count_solutions_in_set / q^(n(k+l-1)).
BigRat lambda_exact(const LinearEquation& eq, const GroupVector& b, const PointSet& A);

// q^n * count >= |A|^(k+l), exactly.
bool sidorenko_holds_exact(const LinearEquation& eq, const GroupVector& b, const PointSet& A);

// 2^(k+l-1) * monochromatic_count >= q^(n(k+l-1)), exactly.
bool common_holds_exact(const LinearEquation& eq, const GroupVector& b, const TwoColoring& chi);

// File format shared by point sets and colorings: first line "n=<int>
// q=<field>", then either a single hex bitmask token ("0x...", little-endian
// index order) or whitespace-separated member indices.
PointSet load_point_set(std::istream& in);
PointSet load_point_set_file(const std::string& path);
void save_point_set(std::ostream& out, const PointSet& A);
TwoColoring load_two_coloring(std::istream& in);
TwoColoring load_two_coloring_file(const std::string& path);

}  // namespace linform
