#pragma once

// Batch jobs behind the command line: load inputs, run one command, and
// render a deterministic JSON report with top-level keys
// {"inputs", "results", "checks", "tolerances", "versions"}.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "obliq/kernel.hpp"

namespace obliq {

enum class Command { Compat, Project, Douglas, Interpolate, Oprange, Report };
enum class Formula { Block, Pinv, Invertible };

std::optional<Command> parse_command(const std::string& name);
std::optional<Formula> parse_formula(const std::string& name);
const char* to_string(Command c) noexcept;
const char* to_string(Formula f) noexcept;

struct JobSpec {
  Command command = Command::Report;
  std::optional<std::string> input_a;
  std::optional<std::string> input_s;
  std::optional<std::string> input_b;
  std::optional<std::string> input_x;
  std::optional<std::string> input_t;  ///< factor T for interpolate (A = T^T T)
  Tolerance tol;
  std::uint64_t seed = 0;
  std::optional<std::string> output;
  Formula formula = Formula::Block;
  bool least_squares = false;
};

/// Exit codes: 0 success, 2 malformed input, 3 numerical precondition
/// failure, 4 an identity check failed.
enum ExitCode : int { kExitOk = 0, kExitMalformed = 2, kExitPrecondition = 3, kExitIdentity = 4 };

int exit_code_for(ErrorCode code) noexcept;

struct JobOutcome {
  int exit_code = kExitOk;
  std::string report;  ///< empty unless the job produced a report
  std::string error;
};

/// Runs the job. The report is also written to job.output when set.
JobOutcome run(const JobSpec& job);

/// JobSpec as a JSON object (the form accepted by the C API).
JobSpec job_from_json(const nlohmann::json& j);
nlohmann::json job_to_json(const JobSpec& job);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace obliq
