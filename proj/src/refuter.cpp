#include "linform/refuter.hpp"

#include <bit>
#include <random>
#include <string>
#include <utility>

#include "linform/config.hpp"
#include "linform/errors.hpp"

namespace linform {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

BigInt bigint_from_i128(i128 v) {
  const bool neg = v < 0;
  const u128 m = neg ? u128(-(v + 1)) + 1 : u128(v);
  BigInt out = (BigInt(std::uint64_t(m >> 64)) << 64) + BigInt(std::uint64_t(m));
  return neg ? BigInt(-out) : out;
}

u128 upow(std::uint64_t base, std::uint64_t e) {
  u128 r = 1;
  while (e--) r *= base;
  return r;
}

// Cheap argument validation with the counting oracle's own checks.
void validate_args(const LinearEquation& eq, const GroupVector& b, int n) {
  count_solutions_in_set(eq, b, PointSet::empty(eq.field, n));
}

void check_exhaustive_range(const LinearEquation& eq, std::uint64_t D) {
  if (D > config::exhaustive_cell_limit())
    throw BudgetExceededError("2^" + std::to_string(D) +
                              " subsets exceed the exhaustive budget");
  const std::uint64_t k = eq.k(), K = eq.total_vars();
  if (bigint_pow(BigInt(D), k - 1) > (BigInt(1) << 62) ||
      (BigInt(1) << K) * bigint_pow(BigInt(D), K - 1) > (BigInt(1) << 120) ||
      bigint_pow(BigInt(D), K) > (BigInt(1) << 120))
    throw BudgetExceededError("solution counts exceed the fast-counter range");
}

}  // namespace

IncrementalSolutionCounter::IncrementalSolutionCounter(const LinearEquation& eq,
                                                       const GroupVector& b, int n)
    : eq_(eq) {
  validate_args(eq, b, n);
  const std::uint64_t D = domain_size(eq.field, n);
  if (D > 512)
    throw BudgetExceededError("incremental counter tables need q^n <= 512, got " +
                              std::to_string(D));
  if (bigint_pow(BigInt(D), eq.k() - 1) > (BigInt(1) << 62))
    throw BudgetExceededError("subset counts exceed the 64-bit incremental counter");
  domain_ = static_cast<std::uint32_t>(D);
  b_idx_ = static_cast<std::uint32_t>(b.index());

  const Field& F = eq.field;
  const int k = static_cast<int>(eq.k());
  std::vector<std::vector<std::uint32_t>> coords(D);
  for (std::uint64_t v = 0; v < D; ++v) coords[v] = GroupVector::from_index(F, n, v).coords();
  auto pack = [&](const std::vector<std::uint32_t>& c) {
    std::uint64_t idx = 0, mult = 1;
    for (int j = 0; j < n; ++j) {
      idx += c[static_cast<std::size_t>(j)] * mult;
      mult *= F.q();
    }
    return static_cast<std::uint32_t>(idx);
  };

  scaled_.resize(static_cast<std::size_t>(k) * D);
  piv_inv_.resize(static_cast<std::size_t>(k) * D);
  std::vector<std::uint32_t> scratch(static_cast<std::size_t>(n));
  for (int i = 0; i < k; ++i) {
    const std::uint32_t a = eq.coeffs[static_cast<std::size_t>(i)];
    const std::uint32_t ai = F.inv(a);
    for (std::uint64_t v = 0; v < D; ++v) {
      for (int j = 0; j < n; ++j) scratch[static_cast<std::size_t>(j)] = F.mul(a, coords[v][static_cast<std::size_t>(j)]);
      scaled_[static_cast<std::size_t>(i) * D + v] = pack(scratch);
      for (int j = 0; j < n; ++j) scratch[static_cast<std::size_t>(j)] = F.mul(ai, coords[v][static_cast<std::size_t>(j)]);
      piv_inv_[static_cast<std::size_t>(i) * D + v] = pack(scratch);
    }
  }
  sub_.resize(static_cast<std::size_t>(D) * D);
  for (std::uint64_t u = 0; u < D; ++u)
    for (std::uint64_t v = 0; v < D; ++v) {
      for (int j = 0; j < n; ++j)
        scratch[static_cast<std::size_t>(j)] = F.sub(coords[u][static_cast<std::size_t>(j)], coords[v][static_cast<std::size_t>(j)]);
      sub_[u * D + v] = pack(scratch);
    }

  in_ = FlatBitset(D);
  pos_.assign(D, 0);
}

void IncrementalSolutionCounter::add(std::uint64_t x) {
  if (x >= domain_) throw OutOfRangeError("index outside the domain");
  if (in_.test(x)) throw PreconditionError("element already in the set");
  in_.set(x, true);
  pos_[x] = static_cast<std::uint32_t>(members_.size());
  members_.push_back(static_cast<std::uint32_t>(x));
  s_ += delta_using(static_cast<std::uint32_t>(x));
}

void IncrementalSolutionCounter::remove(std::uint64_t x) {
  if (x >= domain_) throw OutOfRangeError("index outside the domain");
  if (!in_.test(x)) throw PreconditionError("element not in the set");
  s_ -= delta_using(static_cast<std::uint32_t>(x));
  in_.set(x, false);
  const std::uint32_t p = pos_[x];
  members_[p] = members_.back();
  pos_[members_[p]] = p;
  members_.pop_back();
}

// Tuples using x in at least one coefficient slot, split by the first slot j
// holding x: slots before j range over A \ {x}, slots after j over A. Called
// with x present in the membership structures.
std::uint64_t IncrementalSolutionCounter::delta_using(std::uint32_t x) const {
  const int k = static_cast<int>(eq_.k());
  if (k == 1) return scaled_[x] == b_idx_ ? 1 : 0;
  std::uint64_t total = 0;
  for (int j = 0; j < k; ++j) {
    const int p = (j == k - 1) ? k - 2 : k - 1;
    const std::uint32_t r0 =
        sub_[static_cast<std::size_t>(b_idx_) * domain_ + scaled_[static_cast<std::size_t>(j) * domain_ + x]];
    total += walk(0, j, p, r0, x);
  }
  return total;
}

std::uint64_t IncrementalSolutionCounter::walk(int i, int j, int p, std::uint32_t r,
                                               std::uint32_t x) const {
  while (i == j || i == p) ++i;
  if (i >= static_cast<int>(eq_.k())) {
    const std::uint32_t y = piv_inv_[static_cast<std::size_t>(p) * domain_ + r];
    if (!in_.test(y)) return 0;
    if (p < j && y == x) return 0;
    return 1;
  }
  const bool below = i < j;
  const std::uint32_t* srow = &scaled_[static_cast<std::size_t>(i) * domain_];
  std::uint64_t total = 0;
  for (const std::uint32_t m : members_) {
    if (below && m == x) continue;
    total += walk(i + 1, j, p, sub_[static_cast<std::size_t>(r) * domain_ + srow[m]], x);
  }
  return total;
}

BigInt IncrementalSolutionCounter::full_count() const {
  return BigInt(s_) * bigint_pow(BigInt(members_.size()), eq_.free_count);
}

SetSearchResult exhaustive_sidorenko_search(const LinearEquation& eq, const GroupVector& b,
                                            int n) {
  const std::uint64_t D = domain_size(eq.field, n);
  validate_args(eq, b, n);
  check_exhaustive_range(eq, D);
  const std::uint64_t l = eq.free_count, K = eq.total_vars();

  std::vector<u128> powl(D + 1), powK(D + 1);
  for (std::uint64_t s = 0; s <= D; ++s) {
    powl[s] = upow(s, l);
    powK[s] = upow(s, K);
  }

  IncrementalSolutionCounter ctr(eq, b, n);
  i128 best = 0;  // the empty set: 0 solutions, 0^K threshold
  std::uint64_t best_mask = 0;
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << D); ++i) {
    const std::uint64_t g = i ^ (i >> 1);
    const int bit = std::countr_zero(i);
    if ((g >> bit) & 1)
      ctr.add(static_cast<std::uint64_t>(bit));
    else
      ctr.remove(static_cast<std::uint64_t>(bit));
    const auto size = static_cast<std::uint64_t>(std::popcount(g));
    const i128 slack =
        i128(u128(D) * ctr.coefficient_solutions() * powl[size]) - i128(powK[size]);
    if (slack < best || (slack == best && g < best_mask)) {
      best = slack;
      best_mask = g;
    }
  }

  PointSet A = PointSet::from_mask(eq.field, n, BigInt(best_mask));
  BigInt cnt = count_solutions_in_set(eq, b, A);
  BigInt lhs = BigInt(D) * cnt;
  BigInt rhs = bigint_pow(BigInt(A.size()), K);
  BigInt slack = lhs - rhs;
  if (slack != bigint_from_i128(best))
    throw NumericalInconsistencyError("incremental and direct subset counts disagree");

  SetSearchResult res;
  res.found = slack < 0;
  if (res.found) res.witness = A;
  res.extremal = std::move(A);
  res.count = std::move(cnt);
  res.lhs = std::move(lhs);
  res.rhs = std::move(rhs);
  res.slack = std::move(slack);
  return res;
}

ColoringSearchResult exhaustive_common_search(const LinearEquation& eq, const GroupVector& b,
                                              int n) {
  const std::uint64_t D = domain_size(eq.field, n);
  validate_args(eq, b, n);
  check_exhaustive_range(eq, D);
  const std::uint64_t l = eq.free_count, K = eq.total_vars();

  std::vector<u128> powl(D + 1);
  for (std::uint64_t s = 0; s <= D; ++s) powl[s] = upow(s, l);
  const u128 rhs128 = upow(D, K - 1);

  IncrementalSolutionCounter c0(eq, b, n), c1(eq, b, n);
  for (std::uint64_t x = 0; x < D; ++x) c0.add(x);

  auto slack_now = [&](std::uint64_t g) {
    const auto ones = static_cast<std::uint64_t>(std::popcount(g));  // |color class 1|
    const u128 M = u128(c0.coefficient_solutions()) * powl[D - ones] +
                   u128(c1.coefficient_solutions()) * powl[ones];
    return i128(M << (K - 1)) - i128(rhs128);
  };

  // Point 0 stays color 0: a coloring and its complement have the same
  // monochromatic count, so only masks with bit 0 clear are visited.
  i128 best = slack_now(0);
  std::uint64_t best_mask = 0;
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << (D - 1)); ++i) {
    const std::uint64_t g = i ^ (i >> 1);
    const int bit = std::countr_zero(i);
    const std::uint64_t el = static_cast<std::uint64_t>(bit) + 1;
    if ((g >> bit) & 1) {
      c0.remove(el);
      c1.add(el);
    } else {
      c1.remove(el);
      c0.add(el);
    }
    const i128 slack = slack_now(g);
    const std::uint64_t mask = g << 1;
    if (slack < best || (slack == best && mask < best_mask)) {
      best = slack;
      best_mask = mask;
    }
  }

  TwoColoring chi = TwoColoring::from_mask(eq.field, n, BigInt(best_mask));
  BigInt M = monochromatic_count(eq, b, chi);
  BigInt lhs = (BigInt(1) << (K - 1)) * M;
  BigInt rhs = bigint_pow(BigInt(D), K - 1);
  BigInt slack = lhs - rhs;
  if (slack != bigint_from_i128(best))
    throw NumericalInconsistencyError("incremental and direct coloring counts disagree");

  ColoringSearchResult res;
  res.found = slack < 0;
  if (res.found) res.witness = chi;
  res.extremal = std::move(chi);
  res.count = std::move(M);
  res.lhs = std::move(lhs);
  res.rhs = std::move(rhs);
  res.slack = std::move(slack);
  return res;
}

namespace {

// Even trials: iid 1/2 bits. Odd trials: a uniform subset of exactly
// floor(D/2) indices via partial Fisher-Yates over a persistent pool.
FlatBitset sample_mask(std::uint64_t D, std::uint64_t t, std::mt19937_64& rng,
                       std::vector<std::uint32_t>& pool) {
  FlatBitset bits(D);
  if (t % 2 == 0) {
    for (std::uint64_t i = 0; i < D; ++i) bits.set(i, (rng() & 1) != 0);
  } else {
    for (std::uint64_t i = 0; i < D / 2; ++i) {
      const std::uint64_t j = i + rng() % (D - i);
      std::swap(pool[i], pool[j]);
      bits.set(pool[i], true);
    }
  }
  return bits;
}

}  // namespace

SetSearchResult random_sidorenko_search(const LinearEquation& eq, const GroupVector& b, int n,
                                        std::uint64_t trials, std::uint64_t seed) {
  const std::uint64_t D = domain_size(eq.field, n);
  validate_args(eq, b, n);
  const std::uint64_t K = eq.total_vars();
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> pool(D);
  for (std::uint64_t i = 0; i < D; ++i) pool[i] = static_cast<std::uint32_t>(i);

  SetSearchResult res;
  std::optional<BigInt> best;
  for (std::uint64_t t = 0; t < trials; ++t) {
    PointSet A{eq.field, n, sample_mask(D, t, rng, pool)};
    BigInt cnt = count_solutions_in_set(eq, b, A);
    BigInt lhs = BigInt(D) * cnt;
    BigInt rhs = bigint_pow(BigInt(A.size()), K);
    BigInt slack = lhs - rhs;
    if (!best || slack < *best) {
      best = slack;
      res.extremal = A;
      res.count = cnt;
      res.lhs = lhs;
      res.rhs = rhs;
      res.slack = slack;
    }
    if (slack < 0) {
      res.found = true;
      res.witness = std::move(A);
      return res;
    }
  }
  return res;
}

ColoringSearchResult random_common_search(const LinearEquation& eq, const GroupVector& b, int n,
                                          std::uint64_t trials, std::uint64_t seed) {
  const std::uint64_t D = domain_size(eq.field, n);
  validate_args(eq, b, n);
  const std::uint64_t K = eq.total_vars();
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> pool(D);
  for (std::uint64_t i = 0; i < D; ++i) pool[i] = static_cast<std::uint32_t>(i);
  const BigInt rhs = bigint_pow(BigInt(D), K - 1);

  ColoringSearchResult res;
  std::optional<BigInt> best;
  for (std::uint64_t t = 0; t < trials; ++t) {
    TwoColoring chi{eq.field, n, sample_mask(D, t, rng, pool)};
    BigInt M = monochromatic_count(eq, b, chi);
    BigInt lhs = (BigInt(1) << (K - 1)) * M;
    BigInt slack = lhs - rhs;
    if (!best || slack < *best) {
      best = slack;
      res.extremal = chi;
      res.count = M;
      res.lhs = lhs;
      res.rhs = rhs;
      res.slack = slack;
    }
    if (slack < 0) {
      res.found = true;
      res.witness = std::move(chi);
      return res;
    }
  }
  return res;
}

}  // namespace linform
