#include "linform/forge.hpp"

#include <cmath>
#include <istream>
#include <iterator>
#include <numbers>
#include <ostream>
#include <utility>

#include <json.hpp>

#include "linform/errors.hpp"

namespace linform {

namespace {

using nlohmann::json;

// Acceptance guard for the c-based constructions. Their true margins shrink
// like (2q)^(-2k), so the only job of the floor is to reject values that are
// below threshold purely through float noise (evaluation error ~1e-15).
constexpr double kNoiseFloor = 1e-12;

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double common_threshold(const LinearEquation& eq) {
  return std::ldexp(1.0, 1 - static_cast<int>(eq.total_vars()));
}

GroupFunction witness_from_spectrum(const Field& field,
                                    std::vector<std::complex<double>> coeffs) {
  return inverse_transform(Spectrum{field, 1, std::move(coeffs)});
}

GroupFunction indicator(const PointSet& A) {
  GroupFunction g{A.field, A.n,
                  std::vector<std::complex<double>>(A.domain(), {0.0, 0.0})};
  for (std::uint64_t i = 0; i < A.domain(); ++i)
    if (A.membership.test(i)) g.values[i] = {1.0, 0.0};
  return g;
}

void require_zero_rhs(const LinearEquation& eq, const char* who) {
  if (eq.rhs_mode != RhsMode::Zero)
    throw WrongRhsModeError(std::string(who) + " requires a homogeneous equation");
}

Certificate make_certificate(const LinearEquation& eq, GroupVector b, GroupFunction f,
                             FunctionalKind kind, double value, double threshold,
                             CertificateParams params,
                             std::optional<AlternateSetWitness> alt = std::nullopt) {
  return Certificate{eq,   std::move(b),        std::move(f),      kind,
                     value, threshold,           threshold - value, std::move(params),
                     std::move(alt)};
}

// Shared retry loop for the two c-parameterized constructions. `beta` fixes
// the witness shape f(0) = 1/2 + c - (q-1)beta, f(x != 0) = 1/2 + c + beta,
// i.e. fhat(0) = 1/2 + c and fhat(r != 0) = -beta.
Certificate forge_with_c(const LinearEquation& eq, std::optional<double> c_in, double beta,
                         const char* who) {
  const double q = static_cast<double>(eq.field.q());
  double c = c_in.value_or(1.0 / (100.0 * q));
  if (!(c >= 0.0) || c >= 1.0 / (2.0 * q))
    throw PreconditionError(std::string(who) + ": c must lie in [0, 1/(2q))");

  const GroupVector b = canonical_rhs(eq, 1);
  const double threshold = common_threshold(eq);
  const std::uint32_t qi = eq.field.q();
  for (int halvings = 0; halvings <= 20; ++halvings, c *= 0.5) {
    std::vector<std::complex<double>> shat(qi, {-beta, 0.0});
    shat[0] = {0.5 + c, 0.0};
    GroupFunction f = witness_from_spectrum(eq.field, std::move(shat));
    const double value = commonness_functional(eq, b, f);
    if (value < threshold - kNoiseFloor) {
      CertificateParams params;
      params.c = c;
      params.beta = beta;
      return make_certificate(eq, b, std::move(f), FunctionalKind::Common, value, threshold,
                              std::move(params));
    }
  }
  throw CSearchFailedError(std::string(who) +
                           ": no c produced a violation after 20 halvings");
}

}  // namespace

std::string functional_kind_name(FunctionalKind k) {
  return k == FunctionalKind::Sidorenko ? "sidorenko" : "common";
}

double uncommon_even_margin_floor(const LinearEquation& eq) {
  // The xi-tail S = sum_{r!=0} prod_i xi(a_i r) has E S = 0, E S^2 >= q-1 and
  // |S| <= q-1 over the xi draw, so some assignment reaches S <= -1 no matter
  // how the per-r phases couple (for [2,3,1,6,5,2] over F_7 the six phases
  // collapse to two, pinning min S at -3 rather than -(q-1)). A deviation of
  // 2(2q)^{-k} is therefore always attainable; ask for half of it, capped by
  // the usual 1e-6 noise floor and kept a decade above the 1e-9 evaluation
  // tolerance.
  const double q = static_cast<double>(eq.field.q());
  const double guaranteed = std::pow(2.0 * q, -static_cast<double>(eq.k()));
  return std::max(std::min(1e-6, guaranteed), 1e-8);
}

GroupFunction sample_xi_witness(const LinearEquation& eq, std::mt19937_64& rng,
                                std::vector<std::complex<double>>* xi_out) {
  const Field& F = eq.field;
  const std::uint32_t q = F.q();
  std::vector<std::complex<double>> xi(q, {1.0, 0.0});
  if (F.p() == 2) {
    for (std::uint32_t r = 1; r < q; ++r) xi[r] = {(rng() & 1) ? 1.0 : -1.0, 0.0};
  } else {
    // One free angle per {r, -r} pair keeps the spectrum conjugate-symmetric
    // and the witness real. Odd characteristic has no self-paired r != 0.
    for (std::uint32_t r = 1; r < q; ++r) {
      const std::uint32_t nr = F.neg(r);
      if (r < nr) {
        xi[r] = std::polar(1.0, 2.0 * std::numbers::pi * u01(rng));
        xi[nr] = std::conj(xi[r]);
      }
    }
  }
  std::vector<std::complex<double>> shat(q);
  shat[0] = {0.5, 0.0};
  for (std::uint32_t r = 1; r < q; ++r) shat[r] = xi[r] / (2.0 * static_cast<double>(q));
  if (xi_out) *xi_out = xi;
  return witness_from_spectrum(F, std::move(shat));
}

Certificate forge_uncommon_even(const LinearEquation& eq, std::uint64_t seed,
                                std::uint64_t max_tries) {
  require_zero_rhs(eq, "forge_uncommon_even");
  if (eq.k() % 2 != 0)
    throw NotApplicableError("forge_uncommon_even: k is odd");
  if (eq.free_count > 0)
    throw NotApplicableError("forge_uncommon_even: free variables present");
  if (canceling_pair_partition(eq.field, eq.coeffs))
    throw NotApplicableError("forge_uncommon_even: a canceling pairing exists, the equation is common");

  const GroupVector b = canonical_rhs(eq, 1);
  const double threshold = common_threshold(eq);
  const double floor = uncommon_even_margin_floor(eq);
  std::mt19937_64 rng(seed);
  for (std::uint64_t t = 1; t <= max_tries; ++t) {
    std::vector<std::complex<double>> xi;
    GroupFunction f = sample_xi_witness(eq, rng, &xi);
    const double value = commonness_functional(eq, b, f);
    if (value < threshold - floor) {
      CertificateParams params;
      params.seed = seed;
      params.tries = t;
      params.xi = std::move(xi);
      return make_certificate(eq, b, std::move(f), FunctionalKind::Common, value, threshold,
                              std::move(params));
    }
  }
  throw ExhaustedTriesError("forge_uncommon_even: no violating sample in " +
                            std::to_string(max_tries) + " tries");
}

Certificate forge_nonsidorenko_odd(const LinearEquation& eq) {
  require_zero_rhs(eq, "forge_nonsidorenko_odd");
  if (eq.k() % 2 == 0)
    throw NotApplicableError("forge_nonsidorenko_odd: k is even");
  if (eq.free_count > 0)
    throw NotApplicableError("forge_nonsidorenko_odd: free variables present");

  const Field& F = eq.field;
  const std::uint32_t q = F.q();
  const double beta = -1.0 / (2.0 * static_cast<double>(q));
  const GroupVector b = canonical_rhs(eq, 1);

  std::vector<std::complex<double>> shat(q, {beta, 0.0});
  shat[0] = {0.5, 0.0};
  GroupFunction f = witness_from_spectrum(F, std::move(shat));
  const double value = lambda_spectral(eq, b, f).real();
  const double threshold = std::pow(0.5, static_cast<double>(eq.k()));  // (Ef)^k

  // The same violation seen by an honest set: A = F_q \ {0}.
  std::vector<std::uint64_t> nonzero;
  for (std::uint32_t x = 1; x < q; ++x) nonzero.push_back(x);
  PointSet A = PointSet::of_indices(F, 1, nonzero);
  const double alt_value = lambda_spectral(eq, b, indicator(A)).real();
  const double alt_threshold =
      std::pow(static_cast<double>(q - 1) / static_cast<double>(q), static_cast<double>(eq.k()));
  AlternateSetWitness alt{std::move(A), alt_value, alt_threshold};

  CertificateParams params;
  params.beta = beta;
  return make_certificate(eq, b, std::move(f), FunctionalKind::Sidorenko, value, threshold,
                          std::move(params), std::move(alt));
}

Certificate forge_freevar_odd(const LinearEquation& eq, std::optional<double> c) {
  require_zero_rhs(eq, "forge_freevar_odd");
  if (eq.k() % 2 == 0)
    throw NotApplicableError("forge_freevar_odd: k is even");
  if (eq.free_count == 0)
    throw NotApplicableError("forge_freevar_odd: no free variables");
  return forge_with_c(eq, c, 1.0 / (2.0 * static_cast<double>(eq.field.q())),
                      "forge_freevar_odd");
}

Certificate forge_inhom(const LinearEquation& eq, std::optional<double> c) {
  if (eq.rhs_mode != RhsMode::NonzeroB)
    throw WrongRhsModeError("forge_inhom requires a nonzero-target equation");
  const Field& F = eq.field;
  const std::uint32_t q = F.q();

  if (eq.k() % 2 == 0) {
    // Deterministic: fhat(r != 0) = 1/(2q) puts the character sum over b != 0
    // at its most negative on both f and 1-f.
    const GroupVector b = canonical_rhs(eq, 1);
    std::vector<std::complex<double>> shat(q, {1.0 / (2.0 * static_cast<double>(q)), 0.0});
    shat[0] = {0.5, 0.0};
    GroupFunction f = witness_from_spectrum(F, std::move(shat));
    const double value = commonness_functional(eq, b, f);
    CertificateParams params;
    params.beta = 1.0 / (2.0 * static_cast<double>(q));
    return make_certificate(eq, b, std::move(f), FunctionalKind::Common, value,
                            common_threshold(eq), std::move(params));
  }

  if (eq.free_count == 0)
    throw NotApplicableError("forge_inhom: k odd with no free variables is common");
  return forge_with_c(eq, c, -1.0 / (2.0 * static_cast<double>(q)), "forge_inhom");
}

bool verify_certificate(const Certificate& cert, std::string* diagnostic) {
  auto fail = [&](const std::string& msg) {
    if (diagnostic) *diagnostic = msg;
    return false;
  };
  try {
    const LinearEquation& eq = cert.equation;
    const GroupFunction& f = cert.witness;
    if (f.field != eq.field) return fail("witness field differs from the equation field");
    if (f.n < 1 || f.size() != domain_size(eq.field, f.n))
      return fail("witness table size does not match its domain");
    if (cert.rhs.field() != eq.field || cert.rhs.n() != f.n)
      return fail("rhs vector does not live in the witness domain");
    if (eq.rhs_mode == RhsMode::Zero ? !cert.rhs.is_zero() : cert.rhs.is_zero())
      return fail("rhs vector does not match the equation's rhs mode");
    if (f.max_imag() > 1e-12 || f.range_excess() > 1e-12)
      return fail("witness is not real-valued in [0, 1]");

    const double K = static_cast<double>(eq.total_vars());
    double spectral = 0.0, brute = 0.0, threshold_expected = 0.0;
    if (cert.functional_kind == FunctionalKind::Common) {
      spectral = commonness_functional(eq, cert.rhs, f);
      GroupFunction g = f;
      for (auto& v : g.values) v = 1.0 - v;
      const std::complex<double> both =
          lambda_bruteforce(eq, cert.rhs, f) + lambda_bruteforce(eq, cert.rhs, g);
      if (std::abs(both.imag()) > 1e-9) return fail("brute-force functional is not real");
      brute = both.real();
      threshold_expected = common_threshold(eq);
    } else {
      const std::complex<double> s = lambda_spectral(eq, cert.rhs, f);
      if (std::abs(s.imag()) > 1e-9) return fail("spectral functional is not real");
      spectral = s.real();
      const std::complex<double> lb = lambda_bruteforce(eq, cert.rhs, f);
      if (std::abs(lb.imag()) > 1e-9) return fail("brute-force functional is not real");
      brute = lb.real();
      threshold_expected = std::pow(f.mean().real(), K);
    }
    if (std::abs(spectral - cert.value) > 1e-9)
      return fail("spectral re-evaluation differs from the stored value");
    if (std::abs(brute - cert.value) > 1e-9)
      return fail("brute-force re-evaluation differs from the stored value");
    if (std::abs(cert.threshold - threshold_expected) > 1e-12)
      return fail("stored threshold is not the canonical threshold for this witness");
    if (std::abs(cert.margin - (cert.threshold - cert.value)) > 1e-12)
      return fail("stored margin is not threshold - value");
    if (!(cert.margin > 0.0)) return fail("margin is not positive");

    if (cert.alternate_set) {
      const AlternateSetWitness& alt = *cert.alternate_set;
      if (alt.set.field != eq.field || alt.set.n != f.n)
        return fail("alternate set does not live in the witness domain");
      const double direct = lambda_spectral(eq, cert.rhs, indicator(alt.set)).real();
      if (std::abs(direct - alt.value) > 1e-9)
        return fail("alternate set functional differs from the stored value");
      const double density =
          static_cast<double>(alt.set.size()) / static_cast<double>(alt.set.domain());
      if (std::abs(alt.threshold - std::pow(density, K)) > 1e-12)
        return fail("alternate set threshold is not density^(k+l)");
      if (!(alt.value < alt.threshold)) return fail("alternate set does not violate");
      if (sidorenko_holds_exact(eq, cert.rhs, alt.set))
        return fail("alternate set passes the exact count inequality");
    }
  } catch (const Error& e) {
    return fail(std::string("re-evaluation raised ") + e.code() + ": " + e.what());
  }
  return true;
}

namespace {

json complex_list_json(const std::vector<std::complex<double>>& v) {
  json arr = json::array();
  for (const auto& z : v) arr.push_back(json::array({z.real(), z.imag()}));
  return arr;
}

std::vector<std::complex<double>> complex_list_from_json(const json& arr) {
  std::vector<std::complex<double>> v;
  v.reserve(arr.size());
  for (const auto& e : arr) v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return v;
}

}  // namespace

std::string certificate_to_json(const Certificate& cert) {
  json j;
  j["equation"] = equation_spec(cert.equation);
  j["rhs"] = cert.rhs.coords();
  j["witness"] = {{"n", cert.witness.n}, {"values", complex_list_json(cert.witness.values)}};
  j["functional_kind"] = functional_kind_name(cert.functional_kind);
  j["value"] = cert.value;
  j["threshold"] = cert.threshold;
  j["margin"] = cert.margin;
  json params = json::object();
  if (cert.parameters.seed) params["seed"] = *cert.parameters.seed;
  if (cert.parameters.tries) params["tries"] = *cert.parameters.tries;
  if (cert.parameters.c) params["c"] = *cert.parameters.c;
  if (cert.parameters.beta) params["beta"] = *cert.parameters.beta;
  if (cert.parameters.xi) params["xi"] = complex_list_json(*cert.parameters.xi);
  j["parameters"] = std::move(params);
  if (cert.alternate_set) {
    const AlternateSetWitness& alt = *cert.alternate_set;
    std::vector<std::uint64_t> idx;
    for (std::uint64_t i = 0; i < alt.set.domain(); ++i)
      if (alt.set.membership.test(i)) idx.push_back(i);
    j["alternate_set"] = {
        {"indices", idx}, {"value", alt.value}, {"threshold", alt.threshold}};
  }
  return j.dump(2);
}

Certificate certificate_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 0);
  }
  try {
    LinearEquation eq = parse_equation_spec(j.at("equation").get<std::string>());
    GroupVector rhs(eq.field, j.at("rhs").get<std::vector<std::uint32_t>>());
    const int n = j.at("witness").at("n").get<int>();
    std::vector<std::complex<double>> values =
        complex_list_from_json(j.at("witness").at("values"));
    if (n < 1 || values.size() != domain_size(eq.field, n))
      throw ParseError("witness table size does not match n", 0);
    GroupFunction witness{eq.field, n, std::move(values)};

    const std::string kind_name = j.at("functional_kind").get<std::string>();
    FunctionalKind kind;
    if (kind_name == "sidorenko")
      kind = FunctionalKind::Sidorenko;
    else if (kind_name == "common")
      kind = FunctionalKind::Common;
    else
      throw ParseError("unknown functional_kind '" + kind_name + "'", 0);

    CertificateParams params;
    if (j.contains("parameters")) {
      const json& p = j.at("parameters");
      if (p.contains("seed")) params.seed = p.at("seed").get<std::uint64_t>();
      if (p.contains("tries")) params.tries = p.at("tries").get<std::uint64_t>();
      if (p.contains("c")) params.c = p.at("c").get<double>();
      if (p.contains("beta")) params.beta = p.at("beta").get<double>();
      if (p.contains("xi")) params.xi = complex_list_from_json(p.at("xi"));
    }

    std::optional<AlternateSetWitness> alt;
    if (j.contains("alternate_set")) {
      const json& a = j.at("alternate_set");
      alt = AlternateSetWitness{
          PointSet::of_indices(eq.field, n, a.at("indices").get<std::vector<std::uint64_t>>()),
          a.at("value").get<double>(), a.at("threshold").get<double>()};
    }

    return Certificate{std::move(eq),
                       std::move(rhs),
                       std::move(witness),
                       kind,
                       j.at("value").get<double>(),
                       j.at("threshold").get<double>(),
                       j.at("margin").get<double>(),
                       std::move(params),
                       std::move(alt)};
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 0);
  }
}

void save_certificate(std::ostream& out, const Certificate& cert) {
  out << certificate_to_json(cert) << '\n';
}

Certificate load_certificate(std::istream& in) {
  std::string text(std::istreambuf_iterator<char>(in), {});
  return certificate_from_json(text);
}

}  // namespace linform
