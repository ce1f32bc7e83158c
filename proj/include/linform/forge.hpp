#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "linform/counting.hpp"
#include "linform/fourier.hpp"
#include "linform/linear_form.hpp"

namespace linform {

enum class FunctionalKind { Sidorenko, Common };

std::string functional_kind_name(FunctionalKind k);  // "sidorenko" / "common"

// Construction inputs recorded alongside a certificate, as applicable.
struct CertificateParams {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> tries;  // 1-based index of the accepted sample
  std::optional<double> c;
  std::optional<double> beta;
  std::optional<std::vector<std::complex<double>>> xi;  // per dual point, xi[0] unused

  bool operator==(const CertificateParams&) const = default;
};

// A set witness attached to a few certificates: the indicator-of-A view of
// the same violation, checkable in exact arithmetic.
struct AlternateSetWitness {
  PointSet set;
  double value = 0.0;      // Lambda(1_A)
  double threshold = 0.0;  // (|A|/q^n)^(k+l)

  bool operator==(const AlternateSetWitness& o) const {
    return set.field == o.set.field && set.n == o.set.n &&
           set.membership == o.set.membership && value == o.value && threshold == o.threshold;
  }
};

// A verified counterexample: a witness function together with the violated
// inequality, small enough to re-check from scratch.
struct Certificate {
  LinearEquation equation;
  GroupVector rhs;  // zero vector or the canonical nonzero target
  GroupFunction witness;
  FunctionalKind functional_kind = FunctionalKind::Common;
  double value = 0.0;
  double threshold = 0.0;
  double margin = 0.0;  // threshold - value, > 0
  CertificateParams parameters;
  std::optional<AlternateSetWitness> alternate_set;
};

// T1.4b-style rejection sampler for even unpairable homogeneous
// equations: random unit xi_r with conjugate symmetry (plain +-1 in
// characteristic 2), fhat(0) = 1/2, fhat(r) = xi_r/(2q), accepted once the
// commonness functional lands below 2^(1-k) by the margin floor. The floor
// is 1e-6 when the spectral tail allows it and half the guaranteed
// attainable deviation 2(2q)^{-k} otherwise (never below 1e-8).
// Throws NotApplicableError (pairing exists, k odd, or l > 0),
// WrongRhsModeError, ExhaustedTriesError.
Certificate forge_uncommon_even(const LinearEquation& eq, std::uint64_t seed,
                                std::uint64_t max_tries = 10000);

// The margin floor used by forge_uncommon_even for this equation.
double uncommon_even_margin_floor(const LinearEquation& eq);

// One random-xi witness (the sampling primitive behind forge_uncommon_even),
// exposed so the mean-value property is testable without rejection bias.
GroupFunction sample_xi_witness(const LinearEquation& eq, std::mt19937_64& rng,
                                std::vector<std::complex<double>>* xi_out = nullptr);

// T1.4c deterministic witness for odd k, l = 0: fhat(0) = 1/2,
// fhat(r != 0) = -1/(2q); Lambda = 2^-k - (q-1)/(2q)^k < 2^-k = (Ef)^k.
// Also attaches the set witness A = F_q \ {0}.
// Throws NotApplicableError (k even or l > 0), WrongRhsModeError.
Certificate forge_nonsidorenko_odd(const LinearEquation& eq);

// Free-variable witness for odd k, l >= 1: f(0) = 1/2 + c - (q-1)beta,
// f(x != 0) = 1/2 + c + beta with beta = 1/(2q). c defaults to 1/(100q) and
// halves (up to 20 times) until the functional clears the threshold.
// Throws NotApplicableError (k even or l = 0), WrongRhsModeError,
// PreconditionError (c outside [0, 1/(2q))), CSearchFailedError.
Certificate forge_freevar_odd(const LinearEquation& eq, std::optional<double> c = std::nullopt);

// Nonzero-target witnesses (rhs_mode = NonzeroB, b = (1, 0, ...) canonical):
// k even uses the deterministic fhat(r != 0) = 1/(2q); k odd with l >= 1
// reuses the free-variable form with beta = -1/(2q) and the same c retry
// rule. Throws NotApplicableError (k odd and l = 0), WrongRhsModeError,
// PreconditionError, CSearchFailedError.
Certificate forge_inhom(const LinearEquation& eq, std::optional<double> c = std::nullopt);

// Recompute everything from the stored witness: range, spectral and
// brute-force functional values (both within 1e-9 of value), canonical
// threshold, margin arithmetic and positivity, and the exact-arithmetic view
// of any attached set witness. Returns false and fills *diagnostic on the
// first failed check; never throws.
bool verify_certificate(const Certificate& cert, std::string* diagnostic = nullptr);

// Self-contained JSON round-trip.
std::string certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const std::string& text);
void save_certificate(std::ostream& out, const Certificate& cert);
Certificate load_certificate(std::istream& in);

}  // namespace linform
