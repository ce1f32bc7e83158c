#include "linform/hilbert.hpp"

#include <bit>
#include <numeric>
#include <string>

#include "linform/config.hpp"
#include "linform/counting.hpp"
#include "linform/errors.hpp"

namespace linform {

namespace {

std::uint32_t check_shape(const LinearEquation& eq, int t) {
  if (eq.rhs_mode != RhsMode::Zero)
    throw WrongRhsModeError("cube embedding requires a homogeneous equation");
  if (eq.free_count != 0)
    throw PreconditionError("cube embedding requires an equation without free variables");
  if (t < 1 || t > 10)
    throw OutOfRangeError("cube dimension t = " + std::to_string(t) + " outside [1, 10]");
  const std::uint32_t points = std::uint32_t{1} << t;
  if (eq.k() != points)
    throw ArityMismatchError("equation has k = " + std::to_string(eq.k()) +
                             " variables, need 2^t = " + std::to_string(points));
  return points;
}

}  // namespace

CubeSystem cube_system(int t) {
  if (t < 1 || t > 10)
    throw OutOfRangeError("cube dimension t = " + std::to_string(t) + " outside [1, 10]");
  CubeSystem cube;
  cube.t = t;
  cube.points.resize(std::size_t{1} << t);
  std::iota(cube.points.begin(), cube.points.end(), 0u);
  return cube;
}

std::optional<std::vector<std::uint32_t>> find_cube_embedding(const LinearEquation& eq, int t) {
  const std::uint32_t points = check_shape(eq, t);
  if (!is_translation_invariant(eq)) return std::nullopt;  // coefficient total must vanish

  const Field& F = eq.field;
  std::vector<std::uint32_t> sigma(points, 0);
  std::vector<bool> used(points, false);
  std::vector<std::uint32_t> sum(static_cast<std::size_t>(t), 0);   // per-coordinate partial sums
  std::vector<std::uint32_t> left(static_cast<std::size_t>(t), points / 2);

  // Assign variables in order, subsets in increasing mask order; the first
  // complete assignment is the lexicographically least one.  A subset that
  // exhausts coordinate j is admissible only if it closes that sum at zero.
  auto dfs = [&](auto&& self, std::uint32_t v) -> bool {
    if (v == points) return true;
    const std::uint32_t a = eq.coeffs[v];
    for (std::uint32_t s = 0; s < points; ++s) {
      if (used[s]) continue;
      bool ok = true;
      for (int j = 0; j < t && ok; ++j)
        if (((s >> j) & 1u) && left[j] == 1 && F.add(sum[j], a) != 0) ok = false;
      if (!ok) continue;
      used[s] = true;
      for (int j = 0; j < t; ++j)
        if ((s >> j) & 1u) {
          sum[j] = F.add(sum[j], a);
          --left[j];
        }
      sigma[v] = s;
      if (self(self, v + 1)) return true;
      used[s] = false;
      for (int j = 0; j < t; ++j)
        if ((s >> j) & 1u) {
          sum[j] = F.sub(sum[j], a);
          ++left[j];
        }
    }
    return false;
  };

  if (dfs(dfs, 0)) return sigma;
  return std::nullopt;
}

bool verify_cube_embedding(const LinearEquation& eq, int t,
                           const std::vector<std::uint32_t>& sigma) {
  const std::uint32_t points = check_shape(eq, t);
  const Field& F = eq.field;

  if (sigma.size() != points) return false;
  std::vector<bool> seen(points, false);
  for (std::uint32_t s : sigma) {
    if (s >= points || seen[s]) return false;
    seen[s] = true;
  }

  if (bigint_pow(F.q(), static_cast<std::uint32_t>(t) + 1) > BigInt(config::enumeration_budget()))
    throw BudgetExceededError("cube verification needs q^(t+1) = " + std::to_string(F.q()) +
                              "^" + std::to_string(t + 1) + " tuples");

  // Odometer over (x_1, d_1..d_t); point values by little-endian subset DP.
  std::vector<std::uint32_t> tuple(static_cast<std::size_t>(t) + 1, 0);
  std::vector<std::uint32_t> val(points, 0);
  for (;;) {
    val[0] = tuple[0];
    for (std::uint32_t s = 1; s < points; ++s) {
      const int low = std::countr_zero(s);
      val[s] = F.add(val[s & (s - 1)], tuple[static_cast<std::size_t>(low) + 1]);
    }
    std::uint32_t residual = 0;
    for (std::uint32_t i = 0; i < points; ++i)
      residual = F.add(residual, F.mul(eq.coeffs[i], val[sigma[i]]));
    if (residual != 0) return false;
    std::size_t pos = 0;
    while (pos < tuple.size() && ++tuple[pos] == F.q()) tuple[pos++] = 0;
    if (pos == tuple.size()) break;
  }
  return true;
}

}  // namespace linform
