#include "linform/linear_form.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "linform/errors.hpp"

namespace linform {

LinearEquation normalize(const Field& field, const std::vector<std::uint32_t>& raw_coeffs,
                         RhsMode rhs_mode, std::uint32_t extra_free) {
  std::vector<std::uint32_t> coeffs;
  std::uint32_t free_count = extra_free;
  for (std::uint32_t c : raw_coeffs) {
    if (c >= field.q()) throw PreconditionError("coefficient code out of range");
    if (c == 0)
      ++free_count;
    else
      coeffs.push_back(c);
  }
  if (coeffs.empty())
    throw AllZeroError("equation needs at least one nonzero coefficient");
  return LinearEquation{field, std::move(coeffs), free_count, rhs_mode};
}

std::string basis_name(Basis b) {
  switch (b) {
    case Basis::T14a: return "T1.4a";
    case Basis::T14b: return "T1.4b";
    case Basis::T14c: return "T1.4c";
    case Basis::T15: return "T1.5";
    case Basis::T17: return "T1.7";
  }
  return "?";
}

std::optional<std::vector<std::pair<int, int>>> canceling_pair_partition(
    const Field& field, const std::vector<std::uint32_t>& coeffs) {
  const std::size_t k = coeffs.size();
  if (k % 2 != 0) return std::nullopt;

  // Multiplicity criterion first: c(v) = c(-v), with c(v) even when v = -v.
  std::map<std::uint32_t, std::size_t> count;
  for (std::uint32_t c : coeffs) ++count[c];
  for (const auto& [v, c] : count) {
    std::uint32_t nv = field.neg(v);
    if (nv == v) {
      if (c % 2 != 0) return std::nullopt;
    } else {
      auto it = count.find(nv);
      if (it == count.end() || it->second != c) return std::nullopt;
    }
  }

  // The criterion holds, so greedy pairing cannot get stuck: pair each unused
  // index with the smallest later unused index carrying the negated value.
  std::vector<char> used(k, 0);
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < k; ++i) {
    if (used[i]) continue;
    std::uint32_t want = field.neg(coeffs[i]);
    std::size_t j = i + 1;
    while (j < k && (used[j] || coeffs[j] != want)) ++j;
    if (j == k) return std::nullopt;  // unreachable given the criterion
    used[i] = used[j] = 1;
    pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  return pairs;
}

Verdict classify(const LinearEquation& eq) {
  if (eq.rhs_mode != RhsMode::Zero)
    throw WrongRhsModeError("classify expects a homogeneous equation");
  Verdict v;
  v.degenerate = (eq.k() == 1);
  auto pairing = canceling_pair_partition(eq.field, eq.coeffs);
  if (pairing) {
    v.sidorenko = true;
    v.common = true;
    v.basis = eq.free_count >= 1 ? Basis::T15 : Basis::T14a;
    v.pairing = std::move(pairing);
  } else if (eq.free_count >= 1) {
    v.sidorenko = false;
    v.common = false;
    v.basis = Basis::T15;
  } else if (eq.k() % 2 == 0) {
    v.sidorenko = false;
    v.common = false;
    v.basis = Basis::T14b;
  } else {
    v.sidorenko = false;
    v.common = true;
    v.basis = Basis::T14c;
  }
  return v;
}

Verdict classify_inhomogeneous(const LinearEquation& eq) {
  if (eq.rhs_mode != RhsMode::NonzeroB)
    throw WrongRhsModeError("classify_inhomogeneous expects a nonzero target");
  Verdict v;
  v.degenerate = (eq.k() == 1);
  v.sidorenko = false;
  v.common = (eq.k() % 2 == 1) && eq.free_count == 0;
  v.basis = Basis::T17;
  return v;
}

bool is_translation_invariant(const LinearEquation& eq) {
  std::uint32_t s = 0;
  for (std::uint32_t c : eq.coeffs) s = eq.field.add(s, c);
  return s == 0;
}

// --- spec strings ------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

LinearEquation parse_equation_spec(const std::string& spec) {
  // Split on ';' into segments; each segment is key=value with key in
  // {L, q, p, free, b}. The p segment is itself a comma list (handled by
  // Field::from_spec).
  std::optional<std::vector<long long>> raw;
  std::optional<Field> field;
  std::uint32_t extra_free = 0;
  RhsMode rhs = RhsMode::Zero;
  bool saw_free = false, saw_b = false;

  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t semi = spec.find(';', pos);
    std::string segment = spec.substr(pos, semi == std::string::npos ? std::string::npos
                                                                     : semi - pos);
    std::size_t seg_base = pos;
    std::string part = trim(segment);
    if (!part.empty()) {
      std::size_t eq_at = part.find('=');
      if (eq_at == std::string::npos)
        throw ParseError("expected key=value", seg_base);
      std::string key = trim(part.substr(0, eq_at));
      std::string val = trim(part.substr(eq_at + 1));
      if (key == "L") {
        if (raw) throw ParseError("duplicate L=", seg_base);
        std::vector<long long> items;
        std::size_t vp = 0;
        while (vp <= val.size()) {
          std::size_t comma = val.find(',', vp);
          std::string tok = trim(val.substr(vp, comma == std::string::npos ? std::string::npos
                                                                           : comma - vp));
          if (tok.empty()) throw ParseError("empty coefficient in L=", seg_base);
          std::size_t ti = 0;
          bool negative = false;
          if (tok[0] == '-' || tok[0] == '+') {
            negative = tok[0] == '-';
            ti = 1;
          }
          if (ti == tok.size()) throw ParseError("dangling sign in L=", seg_base);
          long long v = 0;
          for (; ti < tok.size(); ++ti) {
            if (!std::isdigit(static_cast<unsigned char>(tok[ti])))
              throw ParseError("coefficients must be integers", seg_base);
            v = v * 10 + (tok[ti] - '0');
            if (v > (1 << 20)) throw ParseError("coefficient too large", seg_base);
          }
          items.push_back(negative ? -v : v);
          if (comma == std::string::npos) break;
          vp = comma + 1;
        }
        raw = std::move(items);
      } else if (key == "q" || key == "p") {
        if (field) throw ParseError("duplicate field spec", seg_base);
        field = Field::from_spec(part);
      } else if (key == "free") {
        if (saw_free) throw ParseError("duplicate free=", seg_base);
        saw_free = true;
        if (val.empty()) throw ParseError("missing value for free=", seg_base);
        std::uint64_t v = 0;
        for (char ch : val) {
          if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw ParseError("free= must be a nonnegative integer", seg_base);
          v = v * 10 + static_cast<std::uint64_t>(ch - '0');
          if (v > 64) throw ParseError("free= too large", seg_base);
        }
        extra_free = static_cast<std::uint32_t>(v);
      } else if (key == "b") {
        if (saw_b) throw ParseError("duplicate b=", seg_base);
        saw_b = true;
        if (val == "zero")
          rhs = RhsMode::Zero;
        else if (val == "nonzero")
          rhs = RhsMode::NonzeroB;
        else
          throw ParseError("b= must be zero or nonzero", seg_base);
      } else {
        throw ParseError("unknown key '" + key + "'", seg_base);
      }
    }
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }

  if (!raw) throw ParseError("equation spec missing L=", 0);
  if (!field) throw ParseError("equation spec missing a field (q= or p=)", 0);

  // Map integer literals to element codes: prime fields reduce |v| mod p,
  // extension fields require |v| < q; a leading '-' takes the additive
  // inverse of the result.
  std::vector<std::uint32_t> codes;
  codes.reserve(raw->size());
  for (long long v : *raw) {
    std::uint64_t mag = static_cast<std::uint64_t>(v < 0 ? -v : v);
    if (field->m() == 1)
      mag %= field->p();
    else if (mag >= field->q())
      throw ParseError("coefficient code out of range for q=" + std::to_string(field->q()), 0);
    std::uint32_t code = static_cast<std::uint32_t>(mag);
    codes.push_back(v < 0 ? field->neg(code) : code);
  }
  return normalize(*field, codes, rhs, extra_free);
}

std::string equation_spec(const LinearEquation& eq) {
  std::ostringstream os;
  os << "L=";
  for (std::size_t i = 0; i < eq.coeffs.size(); ++i) {
    if (i) os << ",";
    os << eq.coeffs[i];
  }
  os << "; " << eq.field.spec();
  os << "; free=" << eq.free_count;
  os << "; b=" << (eq.rhs_mode == RhsMode::Zero ? "zero" : "nonzero");
  return os.str();
}

GroupVector canonical_rhs(const LinearEquation& eq, int n) {
  if (eq.rhs_mode == RhsMode::Zero) return GroupVector::zero(eq.field, n);
  std::vector<std::uint32_t> coords(static_cast<std::size_t>(n), 0);
  coords[0] = 1;
  return GroupVector(eq.field, std::move(coords));
}

}  // namespace linform
