// obliq: batch front-end over the C library.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "obliq/obliq.h"

int main(int argc, char** argv) {
  CLI::App app{"Oblique projections, Douglas solutions and seminorm interpolants"};
  app.set_version_flag("--version", std::string(obliq_version()));

  const obliq_tolerance defaults = obliq_default_tolerance();
  std::string command;
  std::optional<std::string> input_a, input_s, input_b, input_x, input_t, output;
  double tol_rank = defaults.rank_rel;
  double tol_eq = defaults.eq_abs;
  double tol_psd = defaults.psd_neg;
  std::uint64_t seed = 0;
  std::string formula = "block";
  bool least_squares = false;

  app.add_option("command", command, "compat | project | douglas | interpolate | oprange | report")
      ->required()
      ->check(CLI::IsMember({"compat", "project", "douglas", "interpolate", "oprange", "report"}));
  app.add_option("--input-a", input_a, "weight A (matrix file)");
  app.add_option("--input-s", input_s, "subspace S (subspace file)");
  app.add_option("--input-b", input_b, "right-hand side B or operator B (matrix file)");
  app.add_option("--input-x", input_x, "data point x (matrix file, one column)");
  app.add_option("--input-t", input_t, "factor T with A = T^T T (matrix file)");
  app.add_option("--tol-rank", tol_rank, "relative singular-value cutoff");
  app.add_option("--tol-eq", tol_eq, "absolute equality threshold");
  app.add_option("--tol-psd", tol_psd, "negative-eigenvalue clipping threshold");
  app.add_option("--seed", seed, "seed for randomized checks");
  app.add_option("--output", output, "report file (default: stdout)");
  app.add_option("--formula", formula, "construction for project")
      ->check(CLI::IsMember({"block", "pinv", "invertible"}));
  app.add_flag("--least-squares", least_squares, "douglas: least-squares fallback");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  nlohmann::json job = {{"command", command},     {"tol_rank", tol_rank},
                        {"tol_eq", tol_eq},       {"tol_psd", tol_psd},
                        {"seed", seed},           {"formula", formula},
                        {"least_squares", least_squares}};
  const auto put = [&job](const char* key, const std::optional<std::string>& v) {
    if (v) job[key] = *v;
  };
  put("input_a", input_a);
  put("input_s", input_s);
  put("input_b", input_b);
  put("input_x", input_x);
  put("input_t", input_t);
  put("output", output);

  char* report = nullptr;
  int exit_code = 0;
  const obliq_status st = obliq_run_job(job.dump().c_str(), &report, &exit_code);
  if (st != OBLIQ_OK) {
    std::cerr << "obliq: " << obliq_status_name(st) << ": " << obliq_last_error_message() << '\n';
    return exit_code;
  }
  const std::string error = obliq_last_error_message();
  if (report != nullptr) {
    if (!output) std::cout << report << '\n';
    obliq_string_free(report);
  }
  if (!error.empty()) std::cerr << "obliq: " << error << '\n';
  return exit_code;
}
