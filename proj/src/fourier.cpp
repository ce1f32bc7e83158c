#include "linform/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "linform/config.hpp"
#include "linform/errors.hpp"
#include "io_detail.hpp"

namespace linform {

namespace {

constexpr double kRangeTol = 1e-9;
constexpr double kImagTol = 1e-9;

void check_shape(const GroupFunction& f) {
  std::uint64_t want = domain_size(f.field, f.n);
  if (f.values.size() != want)
    throw LengthMismatchError("function table has " + std::to_string(f.values.size()) +
                              " entries, expected q^n = " + std::to_string(want));
}

void check_budget(const GroupFunction& f) {
  // Work is n * q^(n+1); charge it against the enumeration budget.
  std::uint64_t cells = domain_size(f.field, f.n);
  std::uint64_t work = cells;
  work *= f.field.q();
  work *= static_cast<std::uint64_t>(f.n);
  if (work > config::enumeration_budget())
    throw BudgetExceededError("transform work " + std::to_string(work) +
                              " exceeds the enumeration budget");
}

// One size-q kernel applied along every axis fiber. kernel is q*q row-major:
// out[r] = sum_t kernel[r*q + t] * in[t].
void axis_pass(std::vector<std::complex<double>>& v, std::uint32_t q, std::uint64_t stride,
               const std::vector<std::complex<double>>& kernel) {
  const std::uint64_t total = v.size();
  const std::uint64_t block = stride * q;
  std::vector<std::complex<double>> buf(q);
  for (std::uint64_t base = 0; base < total; base += block) {
    for (std::uint64_t off = 0; off < stride; ++off) {
      const std::uint64_t at = base + off;
      for (std::uint32_t t = 0; t < q; ++t) buf[t] = v[at + t * stride];
      for (std::uint32_t r = 0; r < q; ++r) {
        std::complex<double> acc{0.0, 0.0};
        const std::complex<double>* row = kernel.data() + std::size_t{r} * q;
        for (std::uint32_t t = 0; t < q; ++t) acc += row[t] * buf[t];
        v[at + r * stride] = acc;
      }
    }
  }
}

// Index map y -> index of a*y (coordinate-wise scalar multiple).
std::vector<std::uint64_t> scale_map(const Field& F, int n, std::uint32_t a) {
  const std::uint64_t size = domain_size(F, n);
  const std::uint64_t q = F.q();
  std::vector<std::uint64_t> map(size);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    std::uint64_t rest = idx, out = 0, mult = 1;
    for (int j = 0; j < n; ++j) {
      out += static_cast<std::uint64_t>(F.mul(a, static_cast<std::uint32_t>(rest % q))) * mult;
      rest /= q;
      mult *= q;
    }
    map[idx] = out;
  }
  return map;
}

// character(y, b) for every y.
std::vector<std::complex<double>> character_column(const Field& F, int n, const GroupVector& b) {
  const std::uint64_t size = domain_size(F, n);
  const std::uint64_t q = F.q();
  std::vector<std::complex<double>> col(size);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    std::uint64_t rest = idx;
    std::complex<double> acc{1.0, 0.0};
    for (int j = 0; j < n; ++j) {
      acc *= F.chi(F.mul(static_cast<std::uint32_t>(rest % q), b.coord(j)));
      rest /= q;
    }
    col[idx] = acc;
  }
  return col;
}

void check_rhs(const LinearEquation& eq, const GroupVector& b) {
  if (b.field() != eq.field) throw FieldMismatchError("rhs vector from a different field");
  if (eq.rhs_mode == RhsMode::Zero && !b.is_zero())
    throw RhsMismatchError("equation is homogeneous but b is nonzero");
  if (eq.rhs_mode == RhsMode::NonzeroB && b.is_zero())
    throw RhsMismatchError("equation expects a nonzero b");
}

// Core of the spectral Lambda: sum_y prod_i S(a_i y) * chi_b[y], no free-
// variable factor.
std::complex<double> lambda_core(const LinearEquation& eq, const Spectrum& s,
                                 const std::vector<std::complex<double>>& chi_b) {
  std::vector<std::vector<std::uint64_t>> maps;
  maps.reserve(eq.coeffs.size());
  for (std::uint32_t a : eq.coeffs) maps.push_back(scale_map(eq.field, s.n, a));
  std::complex<double> total{0.0, 0.0};
  for (std::uint64_t y = 0; y < s.size(); ++y) {
    std::complex<double> prod{1.0, 0.0};
    for (const auto& map : maps) prod *= s.values[map[y]];
    total += prod * chi_b[y];
  }
  return total;
}

std::complex<double> ipow(std::complex<double> base, std::uint32_t e) {
  std::complex<double> acc{1.0, 0.0};
  for (std::uint32_t i = 0; i < e; ++i) acc *= base;
  return acc;
}

}  // namespace

std::complex<double> GroupFunction::mean() const {
  std::complex<double> acc{0.0, 0.0};
  for (const auto& v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

GroupFunction GroupFunction::constant(const Field& field, int n, std::complex<double> c) {
  return GroupFunction{field, n,
                       std::vector<std::complex<double>>(domain_size(field, n), c)};
}

double GroupFunction::max_imag() const {
  double worst = 0.0;
  for (const auto& v : values) worst = std::max(worst, std::abs(v.imag()));
  return worst;
}

double GroupFunction::range_excess() const {
  double worst = 0.0;
  for (const auto& v : values) {
    if (v.real() < 0.0) worst = std::max(worst, -v.real());
    if (v.real() > 1.0) worst = std::max(worst, v.real() - 1.0);
  }
  return worst;
}

Spectrum transform(const GroupFunction& f) {
  check_shape(f);
  check_budget(f);
  const Field& F = f.field;
  const std::uint32_t q = F.q();
  // Forward kernel: conj(chi(r t)) / q; one 1/q per pass gives 1/q^n overall.
  std::vector<std::complex<double>> kernel(std::size_t{q} * q);
  for (std::uint32_t r = 0; r < q; ++r)
    for (std::uint32_t t = 0; t < q; ++t)
      kernel[std::size_t{r} * q + t] = std::conj(F.chi(F.mul(r, t))) / static_cast<double>(q);
  Spectrum out = f;
  std::uint64_t stride = 1;
  for (int ax = 0; ax < f.n; ++ax) {
    axis_pass(out.values, q, stride, kernel);
    stride *= q;
  }
  return out;
}

GroupFunction inverse_transform(const Spectrum& s) {
  check_shape(s);
  check_budget(s);
  const Field& F = s.field;
  const std::uint32_t q = F.q();
  // Inverse kernel: chi(x y), no normalization (the inverse is a sum).
  std::vector<std::complex<double>> kernel(std::size_t{q} * q);
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = 0; y < q; ++y)
      kernel[std::size_t{x} * q + y] = F.chi(F.mul(x, y));
  GroupFunction out = s;
  std::uint64_t stride = 1;
  for (int ax = 0; ax < s.n; ++ax) {
    axis_pass(out.values, q, stride, kernel);
    stride *= q;
  }
  return out;
}

std::complex<double> lambda_spectral(const LinearEquation& eq, const GroupVector& b,
                                     const GroupFunction& f) {
  check_shape(f);
  if (f.field != eq.field) throw FieldMismatchError("function over a different field");
  if (b.n() != f.n) throw LengthMismatchError("b and f have different n");
  check_rhs(eq, b);
  Spectrum s = transform(f);
  auto chi_b = character_column(eq.field, f.n, b);
  std::complex<double> core = lambda_core(eq, s, chi_b);
  return ipow(s.values[0], eq.free_count) * core;
}

double commonness_functional(const LinearEquation& eq, const GroupVector& b,
                             const GroupFunction& f) {
  check_shape(f);
  if (f.field != eq.field) throw FieldMismatchError("function over a different field");
  if (b.n() != f.n) throw LengthMismatchError("b and f have different n");
  check_rhs(eq, b);
  if (f.max_imag() > kRangeTol || f.range_excess() > kRangeTol)
    throw NotRealRangeError("function must be real-valued in [0, 1]");

  Spectrum s = transform(f);
  const double ef = s.values[0].real();

  // Spectrum of 1 - f: swap the mean, negate everything else.
  Spectrum s1 = s;
  s1.values[0] = std::complex<double>(1.0 - ef, 0.0);
  for (std::uint64_t y = 1; y < s1.size(); ++y) s1.values[y] = -s1.values[y];
  s.values[0] = std::complex<double>(ef, 0.0);

  auto chi_b = character_column(eq.field, f.n, b);
  std::complex<double> total = ipow(std::complex<double>(ef, 0.0), eq.free_count) *
                                   lambda_core(eq, s, chi_b) +
                               ipow(std::complex<double>(1.0 - ef, 0.0), eq.free_count) *
                                   lambda_core(eq, s1, chi_b);
  if (std::abs(total.imag()) > kImagTol)
    throw NumericalInconsistencyError("commonness functional has imaginary residue " +
                                      std::to_string(total.imag()));
  return total.real();
}

// --- file io -----------------------------------------------------------------

namespace detail {

std::pair<int, Field> parse_domain_header(const std::string& line) {
  std::istringstream is(line);
  std::string tok_n, tok_q;
  if (!(is >> tok_n >> tok_q)) throw ParseError("bad header line, expected 'n=<int> q=<field>'", 0);
  if (tok_n.rfind("n=", 0) != 0) throw ParseError("header must start with n=", 0);
  int n = 0;
  try {
    n = std::stoi(tok_n.substr(2));
  } catch (...) {
    throw ParseError("bad n= value", 0);
  }
  if (n < 1 || n > 16) throw ParseError("n out of range", 0);
  // The field token may carry commas ("p=3,m=2,modulus=..."): splice the rest
  // of the line back on, minus interior whitespace.
  std::string more;
  while (is >> more) tok_q += more;
  if (tok_q.rfind("q=", 0) == 0) {
    std::string rest = tok_q.substr(2);
    if (rest.rfind("p=", 0) == 0) return {n, Field::from_spec(rest)};
    return {n, Field::from_spec(tok_q)};
  }
  if (tok_q.rfind("p=", 0) == 0) return {n, Field::from_spec(tok_q)};
  throw ParseError("header field spec must be q=... or p=...", 0);
}

}  // namespace detail

GroupFunction load_group_function(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty function file", 0);
  auto [n, field] = detail::parse_domain_header(line);
  const std::uint64_t size = domain_size(field, n);

  GroupFunction f{field, n, std::vector<std::complex<double>>(size, {0.0, 0.0})};
  std::vector<char> seen(size, 0);
  std::uint64_t rows = 0;
  while (std::getline(in, line)) {
    std::string t;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) continue;
    std::istringstream row(t);
    std::string idx_s, re_s, im_s;
    if (!std::getline(row, idx_s, ',') || !std::getline(row, re_s, ','))
      throw ParseError("expected index,re[,im]", 0);
    std::getline(row, im_s, ',');
    std::uint64_t idx = 0;
    bool digits = !idx_s.empty();
    for (char ch : idx_s) digits &= (ch >= '0' && ch <= '9');
    if (!digits) throw ParseError("bad index '" + idx_s + "'", 0);
    try {
      idx = std::stoull(idx_s);
    } catch (...) {
      throw ParseError("bad index '" + idx_s + "'", 0);
    }
    if (idx >= size) throw ParseError("index " + idx_s + " out of range", 0);
    if (seen[idx]) throw ParseError("duplicate index " + idx_s, 0);
    seen[idx] = 1;
    auto to_double = [&](const std::string& v) {
      std::size_t used = 0;
      double d = 0.0;
      try {
        d = std::stod(v, &used);
      } catch (...) {
        throw ParseError("bad numeric value in row for index " + idx_s, 0);
      }
      if (used != v.size())
        throw ParseError("bad numeric value in row for index " + idx_s, 0);
      return d;
    };
    f.values[idx] = {to_double(re_s), im_s.empty() ? 0.0 : to_double(im_s)};
    ++rows;
  }
  if (rows != size)
    throw ParseError("function file covers " + std::to_string(rows) + " of " +
                         std::to_string(size) + " points",
                     0);
  return f;
}

GroupFunction load_group_function_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return load_group_function(in);
}

void save_group_function(std::ostream& out, const GroupFunction& f) {
  check_shape(f);
  out << "n=" << f.n << " " << f.field.spec() << "\n";
  out.precision(17);
  for (std::uint64_t idx = 0; idx < f.size(); ++idx)
    out << idx << "," << f.values[idx].real() << "," << f.values[idx].imag() << "\n";
}

}  // namespace linform
