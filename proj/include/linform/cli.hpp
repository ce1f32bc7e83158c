#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace linform {

// One parsed command invocation: everything run() needs and everything a
// report embeds for reproducibility. The equation string carries the field
// part of the grammar ("L=1,-2,1; q=5"); fourier works on a function file
// alone and takes no equation.
struct CommandRequest {
  std::string subcommand;  // classify|count|lambda|fourier|forge|refute|hilbert
  std::string equation;    // equation spec; empty exactly for fourier

  std::optional<std::string> set_file;          // count
  std::optional<std::string> fn_file;           // lambda, fourier
  std::optional<std::string> kind;              // forge, refute: sidorenko|common
  std::optional<int> n;                         // refute: ambient dimension
  std::optional<int> t;                         // hilbert: cube dimension
  std::optional<std::uint64_t> seed;            // forge (common), random refute
  std::optional<double> c;                      // forge: perturbation override
  std::optional<std::uint64_t> random_trials;   // refute: sample instead of sweep

  std::string lambda_mode = "both";  // lambda: spectral|brute|both
  bool inverse = false;              // fourier: invert instead of transform
  std::string format = "json";      // json|table
  int threads = 1;

  bool operator==(const CommandRequest&) const = default;
};

// JSON round-trip for requests; unknown keys and out-of-grammar values are
// ParseErrors. to_json omits fields at their default value, so
// command_request_from_json(command_request_to_json(r)) == r.
CommandRequest command_request_from_json(const std::string& text);
std::string command_request_to_json(const CommandRequest& req);

struct RunResult {
  int exit_code = 0;   // 0 property holds / no witness, 1 violation or negative verdict, 2 error
  std::string report;  // format-rendered report; errors are always JSON {"error": {...}}
};

// Validates, dispatches to the owning module, serializes. Reports embed the
// request; identical request (plus seed) gives a byte-identical report, with
// floating-point fields at 12 significant digits. Never throws — failures
// come back as exit code 2.
RunResult run(const CommandRequest& req);

}  // namespace linform
