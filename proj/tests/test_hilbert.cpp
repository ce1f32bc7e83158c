#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <optional>
#include <vector>
#include <string>

#include "linform/config.hpp"
#include "linform/errors.hpp"
#include "linform/hilbert.hpp"

using namespace linform;

namespace {

LinearEquation hom(const Field& f, std::vector<std::uint32_t> cs, std::uint32_t free = 0) {
  return normalize(f, cs, RhsMode::Zero, free);
}

// Independent t=2 oracle: scan all 24 bijections in lexicographic order and
// return the first satisfying the total-sum and coordinate-sum conditions.
std::optional<std::vector<std::uint32_t>> oracle_t2(const LinearEquation& eq) {
  const Field& f = eq.field;
  std::vector<std::uint32_t> perm{0, 1, 2, 3};
  do {
    std::uint32_t total = 0, c1 = 0, c2 = 0;
    for (int v = 0; v < 4; ++v) {
      total = f.add(total, eq.coeffs[v]);
      if (perm[v] & 1u) c1 = f.add(c1, eq.coeffs[v]);
      if (perm[v] & 2u) c2 = f.add(c2, eq.coeffs[v]);
    }
    if (total == 0 && c1 == 0 && c2 == 0) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace

TEST_CASE("cube system enumerates subsets in little-endian bitmask order") {
  CubeSystem c1 = cube_system(1);
  CHECK(c1.t == 1);
  CHECK(c1.points == std::vector<std::uint32_t>{0, 1});

  CubeSystem c2 = cube_system(2);
  CHECK(c2.points == std::vector<std::uint32_t>{0, 1, 2, 3});
  for (int j = 0; j < 2; ++j) CHECK_FALSE(c2.incidence(0, j));  // base point x_1
  CHECK(c2.incidence(1, 0));
  CHECK_FALSE(c2.incidence(1, 1));
  CHECK_FALSE(c2.incidence(2, 0));
  CHECK(c2.incidence(2, 1));
  CHECK(c2.incidence(3, 0));
  CHECK(c2.incidence(3, 1));

  CubeSystem c3 = cube_system(3);
  CHECK(c3.points.size() == 8);
  CHECK(c3.incidence(5, 0));
  CHECK_FALSE(c3.incidence(5, 1));
  CHECK(c3.incidence(5, 2));
  // rows are pairwise distinct because points[s] == s
  for (std::uint32_t s = 0; s < 8; ++s) CHECK(c3.points[s] == s);

  CHECK(cube_system(10).points.size() == 1024);
  CHECK_THROWS_AS(cube_system(0), OutOfRangeError);
  CHECK_THROWS_AS(cube_system(11), OutOfRangeError);
  CHECK_THROWS_AS(cube_system(-3), OutOfRangeError);
}

TEST_CASE("pinned embedding for the eight-term equation over F_11") {
  LinearEquation eq = parse_equation_spec("L=-6,3,1,7,2,-4,-2,-1; q=11");
  CHECK(eq.coeffs == std::vector<std::uint32_t>{5, 3, 1, 7, 2, 7, 9, 10});
  CHECK(is_translation_invariant(eq));

  auto emb = find_cube_embedding(eq, 3);
  REQUIRE(emb.has_value());
  CHECK(*emb == std::vector<std::uint32_t>{0, 1, 2, 4, 3, 5, 6, 7});
  CHECK(verify_cube_embedding(eq, 3, *emb));

  // No canceling pairing, so the equation is not Sidorenko and not common
  // (k = 8 even), yet it embeds a dimension-3 cube: the two obstructions are
  // genuinely different.
  CHECK_FALSE(canceling_pair_partition(eq.field, eq.coeffs).has_value());
  Verdict v = classify(eq);
  CHECK_FALSE(v.sidorenko);
  CHECK_FALSE(v.common);
  CHECK(basis_name(v.basis) == "T1.4b");
}

TEST_CASE("quartic examples over F_5") {
  Field f5 = Field::from_spec("q=5");

  auto sym = find_cube_embedding(hom(f5, {1, 4, 4, 1}), 2);
  REQUIRE(sym.has_value());
  CHECK(*sym == std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(verify_cube_embedding(hom(f5, {1, 4, 4, 1}), 2, *sym));

  // coefficient total 4 != 0: rejected by the translation-invariance filter
  LinearEquation ones = hom(f5, {1, 1, 1, 1});
  CHECK_FALSE(is_translation_invariant(ones));
  CHECK_FALSE(find_cube_embedding(ones, 2).has_value());

  // translation-invariant but the coordinate sums are unsatisfiable: the
  // {1,2}-variable's coefficient x would need -x twice among {1,1,1,2}\{x}
  LinearEquation skew = hom(f5, {1, 1, 1, 2});
  CHECK(is_translation_invariant(skew));
  CHECK_FALSE(find_cube_embedding(skew, 2).has_value());
}

TEST_CASE("small fields and the impossible t=1 cube") {
  Field f2 = Field::from_spec("q=2");
  auto parity = find_cube_embedding(hom(f2, {1, 1, 1, 1}), 2);
  REQUIRE(parity.has_value());
  CHECK(*parity == std::vector<std::uint32_t>{0, 1, 2, 3});

  // t = 1 asks for a single nonzero coefficient to vanish: never possible
  CHECK_FALSE(find_cube_embedding(hom(f2, {1, 1}), 1).has_value());
  Field f5 = Field::from_spec("q=5");
  LinearEquation inv = hom(f5, {1, 4});
  CHECK(is_translation_invariant(inv));
  CHECK_FALSE(find_cube_embedding(inv, 1).has_value());
}

TEST_CASE("t=2 search agrees with the direct bijection scan") {
  int found = 0, absent = 0;
  for (std::uint32_t q : {3u, 5u}) {
    Field f = Field::from_spec("q=" + std::to_string(q));
    std::vector<std::uint32_t> cs(4, 1);
    for (;;) {
      LinearEquation eq = normalize(f, cs, RhsMode::Zero);
      auto got = find_cube_embedding(eq, 2);
      auto want = oracle_t2(eq);
      const std::string spec = equation_spec(eq);
      CAPTURE(spec);
      CHECK(got == want);
      if (got) {
        CHECK(verify_cube_embedding(eq, 2, *got));
        ++found;
      } else {
        ++absent;
      }
      std::size_t pos = 0;
      while (pos < cs.size() && ++cs[pos] == q) cs[pos++] = 1;
      if (pos == cs.size()) break;
    }
  }
  CHECK(found > 0);
  CHECK(absent > 0);
}

TEST_CASE("shape and mode preconditions") {
  Field f5 = Field::from_spec("q=5");
  Field f3 = Field::from_spec("q=3");

  CHECK_THROWS_AS(find_cube_embedding(hom(f5, {1, 4, 4, 1}, 1), 2), PreconditionError);
  CHECK_THROWS_AS(find_cube_embedding(normalize(f5, {1, 4, 4, 1}, RhsMode::NonzeroB), 2),
                  WrongRhsModeError);
  CHECK_THROWS_AS(find_cube_embedding(hom(f5, {1, 4}), 0), OutOfRangeError);
  CHECK_THROWS_AS(find_cube_embedding(hom(f5, {1, 4}), 11), OutOfRangeError);
  CHECK_THROWS_AS(find_cube_embedding(hom(f5, {1, 4, 4}), 2), ArityMismatchError);
  CHECK_THROWS_AS(find_cube_embedding(parse_equation_spec("L=-6,3,1,7,2,-4,-2,-1; q=11"), 2),
                  ArityMismatchError);
  CHECK_THROWS_AS(verify_cube_embedding(hom(f5, {1, 4, 4}), 2, {0, 1, 2, 3}),
                  ArityMismatchError);

  // reducing the eight-term equation into small characteristic kills a
  // coefficient; the surviving form has free variables and is rejected
  for (const char* spec : {"L=-6,3,1,7,2,-4,-2,-1; q=2", "L=-6,3,1,7,2,-4,-2,-1; q=3",
                           "L=-6,3,1,7,2,-4,-2,-1; q=7"}) {
    LinearEquation eq = parse_equation_spec(spec);
    CHECK(eq.free_count >= 1);
    CHECK_THROWS_AS(find_cube_embedding(eq, 3), PreconditionError);
  }
  CHECK(parse_equation_spec("L=-6,3,1,7,2,-4,-2,-1; q=3").free_count == 2);
  CHECK(parse_equation_spec("L=-6,3,1,7,2,-4,-2,-1; q=7").free_count == 1);

  CHECK_FALSE(find_cube_embedding(hom(f3, {1, 2, 1, 2}), 2) == std::nullopt);
}

TEST_CASE("verification rejects corrupted bijections") {
  Field f5 = Field::from_spec("q=5");
  LinearEquation eq = hom(f5, {1, 4, 4, 1});

  CHECK(verify_cube_embedding(eq, 2, {0, 1, 2, 3}));
  CHECK_FALSE(verify_cube_embedding(eq, 2, {1, 0, 2, 3}));  // coord 1 sum becomes 1+1
  CHECK_FALSE(verify_cube_embedding(eq, 2, {0, 0, 1, 2}));  // not injective
  CHECK_FALSE(verify_cube_embedding(eq, 2, {0, 1, 2}));     // wrong size
  CHECK_FALSE(verify_cube_embedding(eq, 2, {0, 1, 2, 7}));  // mask out of range
}

TEST_CASE("verification is budgeted, search is not") {
  LinearEquation eq = parse_equation_spec("L=-6,3,1,7,2,-4,-2,-1; q=11");
  config::set_enumeration_budget(100);  // 11^4 = 14641 tuples needed
  CHECK_THROWS_AS(verify_cube_embedding(eq, 3, {0, 1, 2, 4, 3, 5, 6, 7}), BudgetExceededError);
  CHECK(find_cube_embedding(eq, 3).has_value());
  config::set_enumeration_budget(std::nullopt);
  CHECK(verify_cube_embedding(eq, 3, {0, 1, 2, 4, 3, 5, 6, 7}));
}
