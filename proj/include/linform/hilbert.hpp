#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "linform/linear_form.hpp"

namespace linform {

// The dimension-t Hilbert cube: 2^t formal points x_1 + sum_{i in S} d_i,
// one per subset S of {1..t}, enumerated in little-endian bitmask order.
struct CubeSystem {
  int t = 1;
  std::vector<std::uint32_t> points;                // points[s] == s, the subset mask
  bool incidence(std::uint32_t s, int i) const {    // whether d_{i+1} occurs in point s
    return (s >> i) & 1u;
  }
};

CubeSystem cube_system(int t);  // 1 <= t <= 10, else OutOfRangeError

// A bijection sigma from the k = 2^t variables to cube points such that
// substituting point sigma(i) for variable i turns L = 0 into an identity in
// (x_1, d_1..d_t): the coefficients sum to zero and, for each coordinate j,
// the coefficients of the variables whose subset contains j sum to zero.
// Returns the lexicographically least such sigma, or absent — in particular
// whenever the coefficient total is nonzero. Throws WrongRhsModeError,
// PreconditionError (free variables present), OutOfRangeError (t),
// ArityMismatchError (k != 2^t).
std::optional<std::vector<std::uint32_t>> find_cube_embedding(const LinearEquation& eq, int t);

// Exhaustive check over all (x_1, d_1..d_t) in F_q^(t+1) that every cube
// tuple solves L = 0 under sigma; also false when sigma is not a bijection
// onto the 2^t subsets. Throws the same precondition errors as
// find_cube_embedding plus BudgetExceededError when q^(t+1) exceeds the
// enumeration budget.
bool verify_cube_embedding(const LinearEquation& eq, int t,
                           const std::vector<std::uint32_t>& sigma);

}  // namespace linform
