#include "linform/counting.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <sstream>

#include "linform/config.hpp"
#include "linform/errors.hpp"
#include "io_detail.hpp"

namespace linform {

namespace {

void check_rhs(const LinearEquation& eq, const GroupVector& b) {
  if (b.field() != eq.field) throw FieldMismatchError("rhs vector from a different field");
  if (eq.rhs_mode == RhsMode::Zero && !b.is_zero())
    throw RhsMismatchError("equation is homogeneous but b is nonzero");
  if (eq.rhs_mode == RhsMode::NonzeroB && b.is_zero())
    throw RhsMismatchError("equation expects a nonzero b");
}

void check_set(const LinearEquation& eq, int n, const PointSet& A) {
  if (A.field != eq.field) throw FieldMismatchError("point set over a different field");
  if (A.n != n) throw LengthMismatchError("point set and rhs have different n");
}

void check_count_budget(std::uint64_t base, std::uint32_t e) {
  // base^e pivot solves; compare in BigInt so huge inputs fail cleanly.
  BigInt work = bigint_pow(BigInt(base), e);
  if (work > BigInt(config::enumeration_budget()))
    throw BudgetExceededError("counting needs " + work.str() +
                              " pivot solves, over the enumeration budget");
}

// Decompose a domain index into n coordinate codes.
void index_coords(const Field& F, int n, std::uint64_t idx, std::uint32_t* out) {
  const std::uint64_t q = F.q();
  for (int j = 0; j < n; ++j) {
    out[j] = static_cast<std::uint32_t>(idx % q);
    idx /= q;
  }
}

std::uint64_t coords_index(const Field& F, int n, const std::uint32_t* c) {
  const std::uint64_t q = F.q();
  std::uint64_t idx = 0, mult = 1;
  for (int j = 0; j < n; ++j) {
    idx += c[j] * mult;
    mult *= q;
  }
  return idx;
}

// Members of A as domain indices, ascending.
std::vector<std::uint64_t> member_indices(const PointSet& A) {
  std::vector<std::uint64_t> out;
  out.reserve(A.size());
  for (std::uint64_t i = 0; i < A.domain(); ++i)
    if (A.membership.test(i)) out.push_back(i);
  return out;
}

BigInt falling_factorial(std::uint64_t top, std::uint32_t count) {
  BigInt acc = 1;
  for (std::uint32_t j = 0; j < count; ++j) {
    if (top < j + 1) return 0;  // not enough distinct elements left
    acc *= BigInt(top - j);
  }
  return acc;
}

}  // namespace

BigInt bigint_pow(BigInt base, std::uint64_t e) {
  BigInt acc = 1;
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

std::uint64_t FlatBitset::count() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

PointSet PointSet::empty(const Field& field, int n) {
  return PointSet{field, n, FlatBitset(domain_size(field, n))};
}

PointSet PointSet::full(const Field& field, int n) {
  PointSet A = empty(field, n);
  for (std::uint64_t i = 0; i < A.domain(); ++i) A.membership.set(i);
  return A;
}

PointSet PointSet::of_indices(const Field& field, int n, const std::vector<std::uint64_t>& idx) {
  PointSet A = empty(field, n);
  for (std::uint64_t i : idx) {
    if (i >= A.domain())
      throw OutOfRangeError("point index " + std::to_string(i) + " outside q^n = " +
                            std::to_string(A.domain()));
    A.membership.set(i);
  }
  return A;
}

BigInt PointSet::mask() const {
  BigInt m = 0;
  for (std::uint64_t i = domain(); i-- > 0;) {
    m <<= 1;
    if (membership.test(i)) m |= 1;
  }
  return m;
}

PointSet PointSet::from_mask(const Field& field, int n, const BigInt& mask) {
  PointSet A = empty(field, n);
  if (mask < 0 || mask >> A.domain() != 0)
    throw OutOfRangeError("mask has bits outside q^n = " + std::to_string(A.domain()));
  BigInt m = mask;
  for (std::uint64_t i = 0; i < A.domain() && m != 0; ++i, m >>= 1)
    if ((m & 1) != 0) A.membership.set(i);
  return A;
}

PointSet PointSet::complement() const {
  PointSet B = *this;
  for (std::uint64_t i = 0; i < domain(); ++i) B.membership.set(i, !membership.test(i));
  return B;
}

PointSet TwoColoring::color_class(bool one) const {
  PointSet A{field, n, FlatBitset(domain())};
  for (std::uint64_t i = 0; i < domain(); ++i)
    if (color.test(i) == one) A.membership.set(i);
  return A;
}

TwoColoring TwoColoring::from_mask(const Field& field, int n, const BigInt& mask) {
  PointSet ones = PointSet::from_mask(field, n, mask);
  return TwoColoring{field, n, ones.membership};
}

BigInt TwoColoring::mask() const { return PointSet{field, n, color}.mask(); }

BigInt count_solutions_in_set(const LinearEquation& eq, const GroupVector& b, const PointSet& A,
                              bool distinct_only) {
  check_rhs(eq, b);
  check_set(eq, b.n(), A);
  const Field& F = eq.field;
  const int n = b.n();
  const std::uint32_t k = eq.k();
  const std::uint32_t l = eq.free_count;

  auto members = member_indices(A);
  const std::uint64_t sz = members.size();
  if (sz == 0) return 0;
  if (k >= 2) check_count_budget(sz, k - 1);

  const std::uint32_t inv_ak = F.inv(eq.coeffs[k - 1]);

  // Per position i < k-1 and per member m: coordinates of a_i * x_m.
  std::vector<std::vector<std::uint32_t>> scaled(k - 1);
  std::vector<std::uint32_t> coords(n);
  for (std::uint32_t i = 0; i + 1 < k; ++i) {
    scaled[i].resize(sz * n);
    for (std::uint64_t m = 0; m < sz; ++m) {
      index_coords(F, n, members[m], coords.data());
      for (int j = 0; j < n; ++j) scaled[i][m * n + j] = F.mul(eq.coeffs[i], coords[j]);
    }
  }

  BigInt hits = 0;
  // residual[j] = b_j - sum of scaled contributions chosen so far; the pivot
  // is x_k = inv(a_k) * residual.
  std::vector<std::uint32_t> residual(b.coords());
  std::vector<std::uint64_t> chosen;  // member domain indices, for distinct_only
  chosen.reserve(k);

  std::vector<std::uint32_t> pc(n);
  auto pivot_tail = [&]() {
    for (int j = 0; j < n; ++j) pc[j] = F.mul(inv_ak, residual[j]);
    std::uint64_t pidx = coords_index(F, n, pc.data());
    if (!A.membership.test(pidx)) return;
    if (!distinct_only) {
      hits += bigint_pow(BigInt(sz), l);
      return;
    }
    for (std::uint64_t c : chosen)
      if (c == pidx) return;
    hits += falling_factorial(sz - k, l);
  };

  auto descend = [&](auto&& self, std::uint32_t depth) -> void {
    if (depth + 1 == k) {
      pivot_tail();
      return;
    }
    for (std::uint64_t m = 0; m < sz; ++m) {
      if (distinct_only) {
        bool dup = false;
        for (std::uint64_t c : chosen) dup |= (c == members[m]);
        if (dup) continue;
      }
      const std::uint32_t* add = scaled[depth].data() + m * n;
      for (int j = 0; j < n; ++j) residual[j] = F.sub(residual[j], add[j]);
      chosen.push_back(members[m]);
      self(self, depth + 1);
      chosen.pop_back();
      for (int j = 0; j < n; ++j) residual[j] = F.add(residual[j], add[j]);
    }
  };
  descend(descend, 0);
  return hits;
}

BigInt monochromatic_count(const LinearEquation& eq, const GroupVector& b, const TwoColoring& chi,
                           bool distinct_only) {
  if (chi.field != eq.field) throw FieldMismatchError("coloring over a different field");
  if (chi.n != b.n()) throw LengthMismatchError("coloring and rhs have different n");
  return count_solutions_in_set(eq, b, chi.color_class(false), distinct_only) +
         count_solutions_in_set(eq, b, chi.color_class(true), distinct_only);
}

std::complex<double> lambda_bruteforce(const LinearEquation& eq, const GroupVector& b,
                                       const GroupFunction& f) {
  check_rhs(eq, b);
  if (f.field != eq.field) throw FieldMismatchError("function over a different field");
  if (f.n != b.n()) throw LengthMismatchError("function and rhs have different n");
  const std::uint64_t size = domain_size(f.field, f.n);
  if (f.values.size() != size)
    throw LengthMismatchError("function table has " + std::to_string(f.values.size()) +
                              " entries, expected q^n = " + std::to_string(size));
  const Field& F = eq.field;
  const int n = f.n;
  const std::uint32_t k = eq.k();
  if (k >= 2) check_count_budget(size, k - 1);

  const std::uint32_t inv_ak = F.inv(eq.coeffs[k - 1]);
  std::vector<std::uint32_t> residual(b.coords());
  std::vector<std::uint32_t> coords(n), pc(n);

  std::complex<double> total{0.0, 0.0};
  auto descend = [&](auto&& self, std::uint32_t depth, std::complex<double> prod) -> void {
    if (depth + 1 == k) {
      for (int j = 0; j < n; ++j) pc[j] = F.mul(inv_ak, residual[j]);
      total += prod * f.values[coords_index(F, n, pc.data())];
      return;
    }
    for (std::uint64_t x = 0; x < size; ++x) {
      // coords is shared across depths, so re-derive it around the recursion.
      index_coords(F, n, x, coords.data());
      for (int j = 0; j < n; ++j) residual[j] = F.sub(residual[j], F.mul(eq.coeffs[depth], coords[j]));
      self(self, depth + 1, prod * f.values[x]);
      index_coords(F, n, x, coords.data());
      for (int j = 0; j < n; ++j) residual[j] = F.add(residual[j], F.mul(eq.coeffs[depth], coords[j]));
    }
  };
  descend(descend, 0, {1.0, 0.0});

  double denom = 1.0;
  for (std::uint32_t i = 0; i + 1 < k; ++i) denom *= static_cast<double>(size);
  std::complex<double> mean_pow{1.0, 0.0};
  for (std::uint32_t i = 0; i < eq.free_count; ++i) mean_pow *= f.mean();
  return mean_pow * total / denom;
}

BigRat lambda_exact(const LinearEquation& eq, const GroupVector& b, const PointSet& A) {
  BigInt count = count_solutions_in_set(eq, b, A);
  BigInt denom = bigint_pow(BigInt(domain_size(eq.field, A.n)),
                            static_cast<std::uint64_t>(eq.total_vars()) - 1);
  return BigRat(count, denom);
}

bool sidorenko_holds_exact(const LinearEquation& eq, const GroupVector& b, const PointSet& A) {
  // Lambda(1_A) >= (|A|/q^n)^(k+l), cleared of denominators:
  // q^n * count >= |A|^(k+l).
  BigInt count = count_solutions_in_set(eq, b, A);
  BigInt lhs = BigInt(domain_size(eq.field, A.n)) * count;
  BigInt rhs = bigint_pow(BigInt(A.size()), eq.total_vars());
  return lhs >= rhs;
}

bool common_holds_exact(const LinearEquation& eq, const GroupVector& b, const TwoColoring& chi) {
  // Monochromatic density >= 2^(1-k-l), cleared of denominators:
  // 2^(k+l-1) * mono >= q^(n(k+l-1)).
  BigInt mono = monochromatic_count(eq, b, chi);
  const std::uint32_t K = eq.total_vars();
  BigInt lhs = bigint_pow(BigInt(2), K - 1) * mono;
  BigInt rhs = bigint_pow(BigInt(domain_size(eq.field, chi.n)),
                          static_cast<std::uint64_t>(K) - 1);
  return lhs >= rhs;
}

// --- file io -----------------------------------------------------------------

namespace {

// Body after the header: one "0x..." mask token, or whitespace-separated
// member indices.
FlatBitset parse_body(std::istream& in, std::uint64_t size) {
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) toks.push_back(t);
  FlatBitset bits(size);
  if (toks.size() == 1 && (toks[0].rfind("0x", 0) == 0 || toks[0].rfind("0X", 0) == 0)) {
    BigInt mask;
    try {
      mask = BigInt(toks[0]);
    } catch (...) {
      throw ParseError("bad hex mask '" + toks[0] + "'", 0);
    }
    if (mask >> size != 0) throw ParseError("mask has bits outside q^n", 0);
    for (std::uint64_t i = 0; i < size && mask != 0; ++i, mask >>= 1)
      if ((mask & 1) != 0) bits.set(i);
    return bits;
  }
  for (const std::string& tok : toks) {
    std::uint64_t idx = 0;
    bool digits = !tok.empty();
    for (char ch : tok) digits &= (ch >= '0' && ch <= '9');
    if (!digits) throw ParseError("bad point index '" + tok + "'", 0);
    try {
      idx = std::stoull(tok);
    } catch (...) {
      throw ParseError("bad point index '" + tok + "'", 0);
    }
    if (idx >= size) throw ParseError("point index " + tok + " out of range", 0);
    if (bits.test(idx)) throw ParseError("duplicate point index " + tok, 0);
    bits.set(idx);
  }
  return bits;
}

}  // namespace

PointSet load_point_set(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty point-set file", 0);
  auto [n, field] = detail::parse_domain_header(line);
  const std::uint64_t size = domain_size(field, n);
  return PointSet{field, n, parse_body(in, size)};
}

PointSet load_point_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return load_point_set(in);
}

void save_point_set(std::ostream& out, const PointSet& A) {
  out << "n=" << A.n << " " << A.field.spec() << "\n";
  out << "0x" << std::hex << A.mask() << std::dec << "\n";
}

TwoColoring load_two_coloring(std::istream& in) {
  PointSet ones = load_point_set(in);
  return TwoColoring{ones.field, ones.n, ones.membership};
}

TwoColoring load_two_coloring_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return load_two_coloring(in);
}

}  // namespace linform
