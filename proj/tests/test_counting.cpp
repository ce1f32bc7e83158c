#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "linform/config.hpp"
#include "linform/counting.hpp"
#include "linform/errors.hpp"
#include "linform/fourier.hpp"

using namespace linform;
using cplx = std::complex<double>;

namespace {

Field F2 = Field::from_spec("q=2");
Field F3 = Field::from_spec("q=3");
Field F5 = Field::from_spec("q=5");

LinearEquation eqn(const Field& F, std::vector<std::uint32_t> coeffs, std::uint32_t l = 0,
                   RhsMode rhs = RhsMode::Zero) {
  return LinearEquation{F, std::move(coeffs), l, rhs};
}

GroupVector zero(const Field& F, int n = 1) { return GroupVector::zero(F, n); }

PointSet set_of(const Field& F, int n, std::vector<std::uint64_t> idx) {
  return PointSet::of_indices(F, n, idx);
}

// Independent oracle: enumerate all (k+l)-tuples over the members of A and
// test the equation on the first k coordinates.
BigInt brute_count(const LinearEquation& eq, const GroupVector& b, const PointSet& A,
                   bool distinct_only) {
  std::vector<std::uint64_t> members;
  for (std::uint64_t i = 0; i < A.domain(); ++i)
    if (A.membership.test(i)) members.push_back(i);
  const Field& F = eq.field;
  const int n = A.n;
  const std::size_t K = eq.total_vars();
  if (members.empty()) return 0;
  std::vector<std::size_t> pick(K, 0);
  BigInt hits = 0;
  while (true) {
    bool ok = true;
    if (distinct_only)
      for (std::size_t i = 0; i < K && ok; ++i)
        for (std::size_t j = i + 1; j < K; ++j)
          if (members[pick[i]] == members[pick[j]]) { ok = false; break; }
    if (ok) {
      std::vector<std::uint32_t> sum(static_cast<std::size_t>(n), 0);
      for (std::size_t i = 0; i < eq.k(); ++i) {
        std::uint64_t rest = members[pick[i]];
        for (int j = 0; j < n; ++j) {
          sum[static_cast<std::size_t>(j)] =
              F.add(sum[static_cast<std::size_t>(j)],
                    F.mul(eq.coeffs[i], static_cast<std::uint32_t>(rest % F.q())));
          rest /= F.q();
        }
      }
      bool solves = true;
      for (int j = 0; j < n; ++j) solves &= (sum[static_cast<std::size_t>(j)] == b.coord(j));
      if (solves) ++hits;
    }
    // odometer
    std::size_t d = 0;
    while (d < K && ++pick[d] == members.size()) pick[d++] = 0;
    if (d == K) break;
  }
  return hits;
}

}  // namespace

TEST_CASE("pinned counts for x1 + 3x2 + x3 over F_5") {
  LinearEquation eq = eqn(F5, {1, 3, 1});
  CHECK(count_solutions_in_set(eq, zero(F5), set_of(F5, 1, {1, 2, 3, 4})) == 12);
  CHECK(count_solutions_in_set(eq, zero(F5), set_of(F5, 1, {1, 2, 4})) == 5);
  CHECK(count_solutions_in_set(eq, zero(F5), PointSet::empty(F5, 1)) == 0);
  CHECK(count_solutions_in_set(eq, zero(F5), PointSet::full(F5, 1)) == 25);
}

TEST_CASE("full-domain counts are fibers of size q^(n(K-1))") {
  for (std::uint32_t l = 0; l <= 1; ++l) {
    LinearEquation eq = eqn(F3, {1, 1, 2}, l);
    for (int n = 1; n <= 2; ++n) {
      BigInt want = bigint_pow(BigInt(domain_size(F3, n)), eq.total_vars() - 1);
      CHECK(count_solutions_in_set(eq, zero(F3, n), PointSet::full(F3, n)) == want);
    }
  }
}

TEST_CASE("free variables multiply counts by |A|^l") {
  LinearEquation base = eqn(F5, {1, 3, 1});
  LinearEquation with_free = eqn(F5, {1, 3, 1}, 2);
  PointSet A = set_of(F5, 1, {1, 2, 4});
  CHECK(count_solutions_in_set(with_free, zero(F5), A) ==
        count_solutions_in_set(base, zero(F5), A) * 9);
}

TEST_CASE("single-coefficient equations count pivot membership") {
  LinearEquation eq = eqn(F5, {2}, 2);
  CHECK(count_solutions_in_set(eq, zero(F5), set_of(F5, 1, {0, 3})) == 4);  // x = 0, 2^2 free
  CHECK(count_solutions_in_set(eq, zero(F5), set_of(F5, 1, {1, 3})) == 0);
  LinearEquation inhom = eqn(F5, {2}, 0, RhsMode::NonzeroB);
  // 2x = 1 => x = 3.
  CHECK(count_solutions_in_set(inhom, GroupVector::from_index(F5, 1, 1), set_of(F5, 1, {0, 3})) == 1);
}

TEST_CASE("counts match the independent brute oracle on fuzzed sets") {
  std::mt19937_64 rng(21);
  for (std::uint32_t q : {2u, 3u, 5u}) {
    Field F = Field::from_spec("q=" + std::to_string(q));
    for (int trial = 0; trial < 60; ++trial) {
      std::uniform_int_distribution<std::uint32_t> klen(1, 3);
      std::uniform_int_distribution<std::uint32_t> cval(1, q - 1);
      std::uniform_int_distribution<std::uint32_t> ldist(0, 2);
      std::uniform_int_distribution<int> ndist(1, 2);
      std::uniform_int_distribution<int> coin(0, 1);
      int n = ndist(rng);
      std::vector<std::uint32_t> c(klen(rng));
      for (auto& v : c) v = cval(rng);
      bool inhom = coin(rng) == 1;
      LinearEquation eq = eqn(F, c, ldist(rng), inhom ? RhsMode::NonzeroB : RhsMode::Zero);
      std::uint64_t size = domain_size(F, n);
      std::uniform_int_distribution<std::uint64_t> bdist(1, size - 1);
      GroupVector b = inhom ? GroupVector::from_index(F, n, bdist(rng)) : zero(F, n);
      PointSet A = PointSet::empty(F, n);
      for (std::uint64_t i = 0; i < size; ++i)
        if (coin(rng)) A.membership.set(i);
      bool distinct = coin(rng) == 1;
      CHECK(count_solutions_in_set(eq, b, A, distinct) == brute_count(eq, b, A, distinct));
    }
  }
}

TEST_CASE("distinct-only counting on the pinned example") {
  LinearEquation eq = eqn(F5, {1, 3, 1});
  PointSet A = set_of(F5, 1, {1, 2, 4});
  // Of the 5 solutions in A^3, those with a repeated coordinate drop out.
  CHECK(count_solutions_in_set(eq, zero(F5), A, true) == brute_count(eq, zero(F5), A, true));
  PointSet B = set_of(F5, 1, {1, 2, 3, 4});
  CHECK(count_solutions_in_set(eq, zero(F5), B, true) == brute_count(eq, zero(F5), B, true));
  // Free variables become falling factorials.
  LinearEquation lf = eqn(F5, {1, 3, 1}, 2);
  CHECK(count_solutions_in_set(lf, zero(F5), B, true) == brute_count(lf, zero(F5), B, true));
}

TEST_CASE("monochromatic counts on the pinned colorings") {
  LinearEquation eq = eqn(F3, {1, 1, 1});
  CHECK(monochromatic_count(eq, zero(F3), TwoColoring::from_mask(F3, 1, BigInt(1))) == 3);
  CHECK(monochromatic_count(eq, zero(F3), TwoColoring::from_mask(F3, 1, BigInt(2))) == 3);
  CHECK(monochromatic_count(eq, zero(F3), TwoColoring::from_mask(F3, 1, BigInt(0))) == 9);
  CHECK(monochromatic_count(eq, zero(F3), TwoColoring::from_mask(F3, 1, BigInt(7))) == 9);

  LinearEquation inhom = eqn(F2, {1, 1}, 0, RhsMode::NonzeroB);
  TwoColoring split = TwoColoring::from_mask(F2, 1, BigInt(2));  // {0} | {1}
  CHECK(monochromatic_count(inhom, GroupVector::from_index(F2, 1, 1), split) == 0);
}

TEST_CASE("fiber constancy across all targets") {
  for (std::uint32_t l = 0; l <= 1; ++l) {
    for (std::uint32_t q : {3u, 5u}) {
      Field F = Field::from_spec("q=" + std::to_string(q));
      int n = (q == 5) ? 2 : 1;  // up to q^n = 25
      LinearEquation hom = eqn(F, {1, 2}, l);
      LinearEquation inhom = eqn(F, {1, 2}, l, RhsMode::NonzeroB);
      PointSet full = PointSet::full(F, n);
      std::uint64_t size = domain_size(F, n);
      BigInt per_fiber = bigint_pow(BigInt(size), hom.total_vars() - 1);
      BigInt total = 0;
      for (std::uint64_t bi = 0; bi < size; ++bi) {
        GroupVector b = GroupVector::from_index(F, n, bi);
        BigInt c = count_solutions_in_set(bi == 0 ? hom : inhom, b, full);
        CHECK(c == per_fiber);
        total += c;
      }
      CHECK(total == bigint_pow(BigInt(size), hom.total_vars()));
    }
  }
}

TEST_CASE("lambda_bruteforce pinned values") {
  LinearEquation eq = eqn(F5, {1, 3, 1});
  GroupFunction f = GroupFunction::constant(F5, 1, {0.0, 0.0});
  for (std::uint64_t i : {1ull, 2ull, 3ull, 4ull}) f.values[i] = {1.0, 0.0};
  cplx got = lambda_bruteforce(eq, zero(F5), f);
  CHECK(std::abs(got - cplx{0.48, 0.0}) < 1e-12);

  GroupFunction g = GroupFunction::constant(F5, 1, {0.0, 0.0});
  for (std::uint64_t i : {1ull, 2ull, 4ull}) g.values[i] = {1.0, 0.0};
  CHECK(std::abs(lambda_bruteforce(eq, zero(F5), g) - cplx{0.2, 0.0}) < 1e-12);

  for (std::uint32_t l = 0; l <= 2; ++l) {
    GroupFunction h = GroupFunction::constant(F5, 1, {0.3, 0.0});
    cplx want{std::pow(0.3, 3 + l), 0.0};
    CHECK(std::abs(lambda_bruteforce(eqn(F5, {1, 3, 1}, l), zero(F5), h) - want) < 1e-12);
  }
}

TEST_CASE("spectral and brute-force lambda agree") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  int done = 0;
  for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
    Field F = Field::from_spec("q=" + std::to_string(q));
    for (int trial = 0; trial < 25; ++trial) {
      std::uniform_int_distribution<std::uint32_t> klen(1, 4);
      std::uniform_int_distribution<std::uint32_t> cval(1, q - 1);
      std::uniform_int_distribution<std::uint32_t> ldist(0, 2);
      std::uniform_int_distribution<int> ndist(1, 2);
      std::uniform_int_distribution<int> coin(0, 1);
      int n = ndist(rng);
      std::vector<std::uint32_t> c(klen(rng));
      for (auto& v : c) v = cval(rng);
      bool inhom = coin(rng) == 1;
      LinearEquation eq = eqn(F, c, ldist(rng), inhom ? RhsMode::NonzeroB : RhsMode::Zero);
      std::uint64_t size = domain_size(F, n);
      std::uniform_int_distribution<std::uint64_t> bdist(1, size - 1);
      GroupVector b = inhom ? GroupVector::from_index(F, n, bdist(rng)) : zero(F, n);
      GroupFunction f = GroupFunction::constant(F, n, {0.0, 0.0});
      bool complex_f = coin(rng) == 1;
      for (auto& v : f.values)
        v = complex_f ? cplx{sym(rng), sym(rng)} : cplx{unit(rng), 0.0};
      cplx brute = lambda_bruteforce(eq, b, f);
      cplx spectral = lambda_spectral(eq, b, f);
      CHECK(std::abs(brute - spectral) < 1e-9);
      ++done;
    }
  }
  CHECK(done == 100);
}

TEST_CASE("complement identity ties brute lambda to the commonness functional") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint32_t q : {3u, 5u}) {
    Field F = Field::from_spec("q=" + std::to_string(q));
    for (int trial = 0; trial < 20; ++trial) {
      std::uniform_int_distribution<std::uint32_t> klen(2, 4);
      std::uniform_int_distribution<std::uint32_t> cval(1, q - 1);
      std::uniform_int_distribution<std::uint32_t> ldist(0, 1);
      std::vector<std::uint32_t> c(klen(rng));
      for (auto& v : c) v = cval(rng);
      LinearEquation eq = eqn(F, c, ldist(rng));
      GroupFunction f = GroupFunction::constant(F, 1, {0.0, 0.0});
      for (auto& v : f.values) v = {unit(rng), 0.0};
      GroupFunction g = f;
      for (auto& v : g.values) v = cplx{1.0, 0.0} - v;
      cplx both = lambda_bruteforce(eq, zero(F), f) + lambda_bruteforce(eq, zero(F), g);
      double functional = commonness_functional(eq, zero(F), f);
      CHECK(std::abs(both - cplx{functional, 0.0}) < 1e-9);
    }
  }
}

TEST_CASE("monochromatic counts depend only on class sizes when k is odd and l = 0") {
  for (std::uint32_t q : {3u, 5u, 7u}) {
    Field F = Field::from_spec("q=" + std::to_string(q));
    for (const auto& coeffs :
         std::vector<std::vector<std::uint32_t>>{{1, 1, 1}, {1, 2, 2}, {1, 1, 1, 1, 1}}) {
      std::vector<std::uint32_t> c = coeffs;
      bool fits = true;
      for (auto& v : c) fits &= (v < q);
      if (!fits) continue;
      LinearEquation eq = eqn(F, c);
      std::map<std::uint64_t, BigInt> by_size;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << q); ++mask) {
        TwoColoring chi = TwoColoring::from_mask(F, 1, BigInt(mask));
        BigInt mono = monochromatic_count(eq, zero(F), chi);
        std::uint64_t ones = chi.color.count();
        auto [it, fresh] = by_size.emplace(ones, mono);
        if (!fresh) CHECK(it->second == mono);
      }
      // Complementary sizes agree too (swap the colors).
      for (std::uint64_t s = 0; s <= q; ++s) CHECK(by_size.at(s) == by_size.at(q - s));
    }
  }
}

TEST_CASE("exact threshold predicates on the pinned cases") {
  // A canceling pair is Sidorenko for every subset.
  LinearEquation pair = eqn(F5, {1, 4});
  for (std::uint64_t mask = 0; mask < 32; ++mask)
    CHECK(sidorenko_holds_exact(pair, zero(F5), PointSet::from_mask(F5, 1, BigInt(mask))));

  LinearEquation eq = eqn(F5, {1, 3, 1});
  CHECK(!sidorenko_holds_exact(eq, zero(F5), set_of(F5, 1, {1, 2, 4})));  // 125 < 135
  CHECK(sidorenko_holds_exact(eq, zero(F5), PointSet::full(F5, 1)));
  CHECK(sidorenko_holds_exact(eq, zero(F5), PointSet::empty(F5, 1)));

  LinearEquation e3 = eqn(F3, {1, 1, 1});
  CHECK(common_holds_exact(e3, zero(F3), TwoColoring::from_mask(F3, 1, BigInt(1))));  // 12 >= 9
  CHECK(common_holds_exact(e3, zero(F3), TwoColoring::from_mask(F3, 1, BigInt(0))));
  LinearEquation inhom = eqn(F2, {1, 1}, 0, RhsMode::NonzeroB);
  CHECK(!common_holds_exact(inhom, GroupVector::from_index(F2, 1, 1),
                            TwoColoring::from_mask(F2, 1, BigInt(2))));
}

TEST_CASE("lambda_exact returns exact rationals") {
  LinearEquation eq = eqn(F5, {1, 3, 1});
  CHECK(lambda_exact(eq, zero(F5), set_of(F5, 1, {1, 2, 3, 4})) == BigRat(12, 25));
  CHECK(lambda_exact(eq, zero(F5), set_of(F5, 1, {1, 2, 4})) == BigRat(1, 5));
  LinearEquation lf = eqn(F5, {1, 3, 1}, 1);
  CHECK(lambda_exact(lf, zero(F5), set_of(F5, 1, {1, 2, 4})) == BigRat(15, 125));
}

TEST_CASE("counting respects the enumeration budget") {
  config::set_enumeration_budget(10);
  LinearEquation eq = eqn(F5, {1, 3, 1});
  PointSet A = set_of(F5, 1, {0, 1, 2, 4});
  CHECK_THROWS_AS(count_solutions_in_set(eq, zero(F5), A), BudgetExceededError);
  config::set_enumeration_budget(std::nullopt);
  CHECK_NOTHROW(count_solutions_in_set(eq, zero(F5), A));
}

TEST_CASE("rhs and field mismatches are rejected") {
  LinearEquation eq = eqn(F5, {1, 3, 1});
  PointSet A = PointSet::full(F5, 1);
  CHECK_THROWS_AS(count_solutions_in_set(eq, GroupVector::from_index(F5, 1, 1), A),
                  RhsMismatchError);
  LinearEquation inhom = eqn(F5, {1, 3, 1}, 0, RhsMode::NonzeroB);
  CHECK_THROWS_AS(count_solutions_in_set(inhom, zero(F5), A), RhsMismatchError);
  CHECK_THROWS_AS(count_solutions_in_set(eq, zero(F3), A), FieldMismatchError);
  CHECK_THROWS_AS(count_solutions_in_set(eq, zero(F5, 2), A), LengthMismatchError);
}

TEST_CASE("point set masks and indices round-trip") {
  PointSet A = set_of(F5, 1, {1, 2, 4});
  CHECK(A.mask() == BigInt(0x16));
  CHECK(A.size() == 3);
  CHECK(PointSet::from_mask(F5, 1, BigInt(0x16)).membership == A.membership);
  CHECK(A.complement().mask() == BigInt(0x09));
  CHECK_THROWS_AS(PointSet::from_mask(F5, 1, BigInt(32)), OutOfRangeError);
  CHECK_THROWS_AS(PointSet::of_indices(F5, 1, {5}), OutOfRangeError);

  TwoColoring chi = TwoColoring::from_mask(F5, 1, BigInt(0x16));
  CHECK(chi.color_class(true).mask() == BigInt(0x16));
  CHECK(chi.color_class(false).mask() == BigInt(0x09));
  CHECK(chi.mask() == BigInt(0x16));
}

TEST_CASE("point set files round-trip in both body forms") {
  PointSet A = set_of(F5, 1, {1, 2, 4});
  std::ostringstream out;
  save_point_set(out, A);
  CHECK(out.str() == "n=1 q=5\n0x16\n");
  std::istringstream back(out.str());
  PointSet B = load_point_set(back);
  CHECK(B.field == F5);
  CHECK(B.n == 1);
  CHECK(B.membership == A.membership);

  std::istringstream listed("n=1 q=5\n1 2 4\n");
  CHECK(load_point_set(listed).membership == A.membership);

  std::istringstream multiline("n=2 q=3\n0 4\n8\n");
  PointSet C = load_point_set(multiline);
  CHECK(C.n == 2);
  CHECK(C.size() == 3);

  std::istringstream empty_body("n=1 q=5\n");
  CHECK(load_point_set(empty_body).size() == 0);

  std::istringstream colored("n=1 q=5\n0x16\n");
  TwoColoring chi = load_two_coloring(colored);
  CHECK(chi.color_class(true).size() == 3);
}

TEST_CASE("point set file errors") {
  auto bad = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(load_point_set(in), ParseError);
  };
  bad("");
  bad("n=1\n0x1\n");
  bad("n=1 q=5\n0x20\n");   // bit outside q^n
  bad("n=1 q=5\n5\n");      // index out of range
  bad("n=1 q=5\n1 1\n");    // duplicate
  bad("n=1 q=5\n1,2\n");    // not an index token
  bad("n=1 q=5\n0xzz\n");
}
