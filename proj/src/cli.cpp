#include "linform/cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <ios>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "linform/counting.hpp"
#include "linform/errors.hpp"
#include "linform/forge.hpp"
#include "linform/fourier.hpp"
#include "linform/hilbert.hpp"
#include "linform/linear_form.hpp"
#include "linform/refuter.hpp"

namespace linform {

namespace {

using nlohmann::json;

// All report floats go through here: 12 significant digits, re-parsed so the
// emitted token is a plain JSON number.
json round12(double v) {
  if (!std::isfinite(v)) return json(nullptr);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return json::parse(buf);
}

json complex12(std::complex<double> z) { return json::array({round12(z.real()), round12(z.imag())}); }

json bigstr(const BigInt& v) { return json(v.str()); }

json hexmask(const BigInt& mask) { return json("0x" + mask.str(0, std::ios_base::hex)); }

json round_floats(const json& j) {
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) out[k] = round_floats(v);
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& v : j) out.push_back(round_floats(v));
    return out;
  }
  if (j.is_number_float()) return round12(j.get<double>());
  return j;
}

std::vector<std::uint64_t> member_indices(const FlatBitset& bits) {
  std::vector<std::uint64_t> idx;
  for (std::uint64_t i = 0; i < bits.size(); ++i)
    if (bits.test(i)) idx.push_back(i);
  return idx;
}

json object_json(const PointSet& A) {
  return json{{"mask", hexmask(A.mask())}, {"indices", member_indices(A.membership)}};
}

json object_json(const TwoColoring& chi) {
  return json{{"mask", hexmask(chi.mask())}, {"indices", member_indices(chi.color)}};
}

template <typename Result>
json search_json(const Result& r) {
  json out{{"found", r.found},
           {"count", bigstr(r.count)},
           {"threshold_lhs", bigstr(r.lhs)},
           {"threshold_rhs", bigstr(r.rhs)},
           {"slack", bigstr(r.slack)}};
  out["witness"] = r.witness ? object_json(*r.witness) : json(nullptr);
  out["extremal"] = r.extremal ? object_json(*r.extremal) : json(nullptr);
  return out;
}

json verdict_json(const Verdict& v) {
  json pairing(nullptr);
  if (v.pairing) {
    pairing = json::array();
    for (auto [i, j] : *v.pairing) pairing.push_back(json::array({i, j}));
  }
  return json{{"sidorenko", v.sidorenko},
              {"common", v.common},
              {"basis", basis_name(v.basis)},
              {"degenerate", v.degenerate},
              {"pairing", pairing}};
}

json function_json(const GroupFunction& f) {
  json values = json::array();
  for (const auto& z : f.values) values.push_back(complex12(z));
  return json{{"q", f.field.spec()}, {"n", f.n}, {"values", values}};
}

void require(bool ok, const std::string& message) {
  if (!ok) throw PreconditionError(message);
}

struct Dispatch {
  int exit_code = 0;
  json result;
};

Dispatch do_classify(const CommandRequest& req) {
  LinearEquation eq = parse_equation_spec(req.equation);
  Verdict v = eq.rhs_mode == RhsMode::Zero ? classify(eq) : classify_inhomogeneous(eq);
  json result{{"equation", equation_spec(eq)}, {"verdict", verdict_json(v)}};
  return {v.sidorenko && v.common ? 0 : 1, std::move(result)};
}

Dispatch do_count(const CommandRequest& req) {
  LinearEquation eq = parse_equation_spec(req.equation);
  PointSet A = load_point_set_file(*req.set_file);
  GroupVector b = canonical_rhs(eq, A.n);
  BigInt count = count_solutions_in_set(eq, b, A);
  BigRat density = lambda_exact(eq, b, A);
  json result{{"equation", equation_spec(eq)},
              {"n", A.n},
              {"domain_size", A.domain()},
              {"set_size", A.size()},
              {"count", bigstr(count)},
              {"density", round12(density.convert_to<double>())},
              {"sidorenko_holds", sidorenko_holds_exact(eq, b, A)}};
  return {0, std::move(result)};
}

Dispatch do_lambda(const CommandRequest& req) {
  LinearEquation eq = parse_equation_spec(req.equation);
  GroupFunction f = load_group_function_file(*req.fn_file);
  GroupVector b = canonical_rhs(eq, f.n);
  json result{{"equation", equation_spec(eq)}, {"n", f.n}, {"mode", req.lambda_mode}};
  std::complex<double> spectral, brute;
  if (req.lambda_mode != "brute") {
    spectral = lambda_spectral(eq, b, f);
    result["spectral"] = complex12(spectral);
  }
  if (req.lambda_mode != "spectral") {
    brute = lambda_bruteforce(eq, b, f);
    result["brute"] = complex12(brute);
  }
  if (req.lambda_mode == "both") result["difference"] = round12(std::abs(spectral - brute));
  return {0, std::move(result)};
}

Dispatch do_fourier(const CommandRequest& req) {
  GroupFunction f = load_group_function_file(*req.fn_file);
  GroupFunction out = req.inverse ? inverse_transform(f) : transform(f);
  json result{{"direction", req.inverse ? "inverse" : "forward"},
              {"function", function_json(out)}};
  return {0, std::move(result)};
}

Dispatch do_forge(const CommandRequest& req) {
  LinearEquation eq = parse_equation_spec(req.equation);
  Certificate cert = [&] {
    if (*req.kind == "sidorenko") return forge_nonsidorenko_odd(eq);
    if (eq.rhs_mode == RhsMode::NonzeroB) return forge_inhom(eq, req.c);
    if (eq.free_count > 0) return forge_freevar_odd(eq, req.c);
    return forge_uncommon_even(eq, req.seed.value_or(0));
  }();
  std::string diag;
  if (!verify_certificate(cert, &diag))
    throw NumericalInconsistencyError("forged certificate failed re-verification: " + diag);
  json result{{"kind", functional_kind_name(cert.functional_kind)},
              {"value", round12(cert.value)},
              {"threshold", round12(cert.threshold)},
              {"margin", round12(cert.margin)},
              {"verified", true},
              {"certificate", round_floats(json::parse(certificate_to_json(cert)))}};
  return {1, std::move(result)};
}

Dispatch do_refute(const CommandRequest& req) {
  LinearEquation eq = parse_equation_spec(req.equation);
  const int n = *req.n;
  GroupVector b = canonical_rhs(eq, n);
  json result{{"equation", equation_spec(eq)},
              {"n", n},
              {"kind", *req.kind},
              {"mode", req.random_trials ? "random" : "exhaustive"}};
  if (req.random_trials) {
    result["trials"] = *req.random_trials;
    result["seed"] = req.seed.value_or(0);
  }
  bool found;
  if (*req.kind == "sidorenko") {
    SetSearchResult r = req.random_trials
                            ? random_sidorenko_search(eq, b, n, *req.random_trials,
                                                      req.seed.value_or(0))
                            : exhaustive_sidorenko_search(eq, b, n);
    found = r.found;
    result["search"] = search_json(r);
  } else {
    ColoringSearchResult r = req.random_trials
                                 ? random_common_search(eq, b, n, *req.random_trials,
                                                        req.seed.value_or(0))
                                 : exhaustive_common_search(eq, b, n);
    found = r.found;
    result["search"] = search_json(r);
  }
  return {found ? 1 : 0, std::move(result)};
}

Dispatch do_hilbert(const CommandRequest& req) {
  LinearEquation eq = parse_equation_spec(req.equation);
  auto emb = find_cube_embedding(eq, *req.t);
  json result{{"equation", equation_spec(eq)},
              {"t", *req.t},
              {"found", emb.has_value()},
              {"embedding", emb ? json(*emb) : json(nullptr)},
              {"verified", nullptr}};
  if (emb) {
    try {
      result["verified"] = verify_cube_embedding(eq, *req.t, *emb);
    } catch (const BudgetExceededError&) {
      // leave null: the embedding stands, only the exhaustive check is out of reach
    }
  }
  return {emb ? 0 : 1, std::move(result)};
}

// Engaged fields must belong to the subcommand, required ones must be there.
void validate(const CommandRequest& req) {
  const std::string& s = req.subcommand;
  require(s == "classify" || s == "count" || s == "lambda" || s == "fourier" || s == "forge" ||
              s == "refute" || s == "hilbert",
          "unknown subcommand '" + s + "'");
  require(req.format == "json" || req.format == "table",
          "format must be json or table");
  require(req.threads >= 1, "threads must be >= 1");

  if (s == "fourier")
    require(req.equation.empty(), "fourier reads a function file, not an equation");
  else
    require(!req.equation.empty(), s + " needs an equation");

  require(!req.set_file || s == "count", "set_file is only a count option");
  require(!req.fn_file || s == "lambda" || s == "fourier",
          "fn_file is only a lambda/fourier option");
  require(!req.kind || s == "forge" || s == "refute", "kind is only a forge/refute option");
  require(!req.n || s == "refute", "n is only a refute option");
  require(!req.t || s == "hilbert", "t is only a hilbert option");
  require(!req.seed || s == "forge" || s == "refute", "seed is only a forge/refute option");
  require(!req.c || s == "forge", "c is only a forge option");
  require(!req.random_trials || s == "refute", "random_trials is only a refute option");
  require(req.lambda_mode == "both" || s == "lambda", "lambda_mode is only a lambda option");
  require(!req.inverse || s == "fourier", "inverse is only a fourier option");

  if (s == "count") require(req.set_file.has_value(), "count needs --set FILE");
  if (s == "lambda") {
    require(req.fn_file.has_value(), "lambda needs --fn FILE");
    require(req.lambda_mode == "spectral" || req.lambda_mode == "brute" ||
                req.lambda_mode == "both",
            "lambda_mode must be spectral, brute or both");
  }
  if (s == "fourier") require(req.fn_file.has_value(), "fourier needs --fn FILE");
  if (s == "forge" || s == "refute") {
    require(req.kind.has_value(), s + " needs --kind");
    require(*req.kind == "sidorenko" || *req.kind == "common",
            "kind must be sidorenko or common");
  }
  if (s == "refute") {
    require(req.n.has_value(), "refute needs --n");
    require(*req.n >= 1, "n must be >= 1");
  }
  if (s == "hilbert") require(req.t.has_value(), "hilbert needs --t");
}

std::string render_table(const json& request, const json& result) {
  std::string out = "request: " + request.dump() + "\n";
  auto walk = [&](auto&& self, const json& j, const std::string& prefix) -> void {
    if (j.is_object()) {
      for (const auto& [k, v] : j.items()) self(self, v, prefix + "." + k);
      return;
    }
    out += prefix + ": ";
    out += j.is_string() ? j.get<std::string>() : j.dump();
    out += "\n";
  };
  walk(walk, result, "result");
  return out;
}

}  // namespace

std::string command_request_to_json(const CommandRequest& req) {
  json j{{"subcommand", req.subcommand}};
  if (!req.equation.empty()) j["equation"] = req.equation;
  if (req.set_file) j["set_file"] = *req.set_file;
  if (req.fn_file) j["fn_file"] = *req.fn_file;
  if (req.kind) j["kind"] = *req.kind;
  if (req.n) j["n"] = *req.n;
  if (req.t) j["t"] = *req.t;
  if (req.seed) j["seed"] = *req.seed;
  if (req.c) j["c"] = round12(*req.c);
  if (req.random_trials) j["random_trials"] = *req.random_trials;
  if (req.lambda_mode != "both") j["lambda_mode"] = req.lambda_mode;
  if (req.inverse) j["inverse"] = true;
  if (req.format != "json") j["format"] = req.format;
  if (req.threads != 1) j["threads"] = req.threads;
  return j.dump();
}

CommandRequest command_request_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("request is not JSON: ") + e.what(), 0);
  }
  if (!j.is_object()) throw ParseError("request must be a JSON object", 0);
  CommandRequest req;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "subcommand")
        req.subcommand = value.get<std::string>();
      else if (key == "equation")
        req.equation = value.get<std::string>();
      else if (key == "set_file")
        req.set_file = value.get<std::string>();
      else if (key == "fn_file")
        req.fn_file = value.get<std::string>();
      else if (key == "kind")
        req.kind = value.get<std::string>();
      else if (key == "n")
        req.n = value.get<int>();
      else if (key == "t")
        req.t = value.get<int>();
      else if (key == "seed")
        req.seed = value.get<std::uint64_t>();
      else if (key == "c")
        req.c = value.get<double>();
      else if (key == "random_trials")
        req.random_trials = value.get<std::uint64_t>();
      else if (key == "lambda_mode")
        req.lambda_mode = value.get<std::string>();
      else if (key == "inverse")
        req.inverse = value.get<bool>();
      else if (key == "format")
        req.format = value.get<std::string>();
      else if (key == "threads")
        req.threads = value.get<int>();
      else
        throw ParseError("unknown request key '" + key + "'", 0);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad request value: ") + e.what(), 0);
  }
  if (req.subcommand.empty()) throw ParseError("request needs a subcommand", 0);
  return req;
}

RunResult run(const CommandRequest& req) {
  try {
    validate(req);
    Dispatch d;
    if (req.subcommand == "classify")
      d = do_classify(req);
    else if (req.subcommand == "count")
      d = do_count(req);
    else if (req.subcommand == "lambda")
      d = do_lambda(req);
    else if (req.subcommand == "fourier")
      d = do_fourier(req);
    else if (req.subcommand == "forge")
      d = do_forge(req);
    else if (req.subcommand == "refute")
      d = do_refute(req);
    else
      d = do_hilbert(req);

    const json request = json::parse(command_request_to_json(req));
    std::string report;
    if (req.format == "table")
      report = render_table(request, d.result);
    else
      report = json{{"request", request}, {"result", d.result}}.dump(2) + "\n";
    return {d.exit_code, std::move(report)};
  } catch (const Error& e) {
    json err{{"error", {{"code", e.code()}, {"message", e.what()}}}};
    return {2, err.dump(2) + "\n"};
  } catch (const std::exception& e) {
    json err{{"error", {{"code", "Internal"}, {"message", e.what()}}}};
    return {2, err.dump(2) + "\n"};
  }
}

}  // namespace linform
