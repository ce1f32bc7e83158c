#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "linform/counting.hpp"

namespace linform {

// Search outcome. `witness` is engaged exactly when a violating object was
// found; `extremal` is the least-slack object examined (the witness itself
// when one exists, absent only when nothing was sampled). count, lhs, rhs and
// slack describe the reported object: for sets lhs = q^n * count against
// rhs = |A|^(k+l), for colorings lhs = 2^(k+l-1) * count against
// rhs = q^(n(k+l-1)). Negative slack is a violation; finding none at this n
// says nothing about the property itself.
struct SetSearchResult {
  bool found = false;
  std::optional<PointSet> witness;
  std::optional<PointSet> extremal;
  BigInt count, lhs, rhs, slack;
};

struct ColoringSearchResult {
  bool found = false;
  std::optional<TwoColoring> witness;
  std::optional<TwoColoring> extremal;
  BigInt count, lhs, rhs, slack;
};

// Exact count of coefficient-slot solution tuples with all entries in a
// mutable subset of F_q^n, maintained under single-element flips. A flip
// costs about k * |A|^(k-2) table lookups (first-occurrence decomposition of
// the tuples using the flipped element), against q^(n(k-1)) for a recount.
// Free variables are not part of the maintained count; full_count() applies
// the |A|^l factor. Throws BudgetExceededError from the constructor when
// counts could overflow the internal 64-bit counter.
class IncrementalSolutionCounter {
public:
  IncrementalSolutionCounter(const LinearEquation& eq, const GroupVector& b, int n);

  void add(std::uint64_t x);     // x must not be in the set
  void remove(std::uint64_t x);  // x must be in the set
  bool contains(std::uint64_t x) const { return in_.test(x); }
  std::uint64_t size() const { return members_.size(); }

  std::uint64_t coefficient_solutions() const { return s_; }
  BigInt full_count() const;  // times |A|^l

private:
  std::uint64_t delta_using(std::uint32_t x) const;
  std::uint64_t walk(int i, int j, int p, std::uint32_t r, std::uint32_t x) const;

  LinearEquation eq_;
  std::uint32_t domain_ = 0;
  std::uint32_t b_idx_ = 0;
  std::vector<std::uint32_t> scaled_;    // [i*D + v] index of a_i * point(v)
  std::vector<std::uint32_t> piv_inv_;   // [i*D + r] index of a_i^{-1} * point(r)
  std::vector<std::uint32_t> sub_;       // [u*D + v] index of point(u) - point(v)
  FlatBitset in_;
  std::vector<std::uint32_t> members_;   // unordered; pos_[x] locates x
  std::vector<std::uint32_t> pos_;
  std::uint64_t s_ = 0;
};

// Every subset of F_q^n in Gray-code order with incremental counting;
// returns the minimizer of q^n*count - |A|^(k+l), ties broken by smallest
// bitmask. The winner is re-verified against the direct counting oracle
// before returning. Requires q^n <= config::exhaustive_cell_limit()
// (BudgetExceededError).
SetSearchResult exhaustive_sidorenko_search(const LinearEquation& eq, const GroupVector& b,
                                            int n);

// Same sweep over two-colorings; the complement of a coloring has the same
// monochromatic count, so point 0's color is fixed to 0 and masks with bit 0
// set are never visited.
ColoringSearchResult exhaustive_common_search(const LinearEquation& eq, const GroupVector& b,
                                              int n);

// Random sampling for domains beyond exhaustive reach: even trials draw each
// point independently with probability 1/2, odd trials a uniform subset of
// size exactly floor(q^n / 2). Returns on the first violator (deterministic
// given the seed); otherwise reports the least-slack sample seen.
SetSearchResult random_sidorenko_search(const LinearEquation& eq, const GroupVector& b, int n,
                                        std::uint64_t trials, std::uint64_t seed);

ColoringSearchResult random_common_search(const LinearEquation& eq, const GroupVector& b, int n,
                                          std::uint64_t trials, std::uint64_t seed);

}  // namespace linform
