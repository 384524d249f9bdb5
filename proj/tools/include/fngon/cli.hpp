#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fngon::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kRefuted = 1, kUsage = 2, kNumeric = 3 };

/// Parsed command line. Fields unused by a subcommand keep their defaults.
struct RunConfig {
  std::string subcommand;
  int n = 2;
  std::size_t n_terms = 8;  // N
  double eps = 0.1;
  std::optional<double> radius;  // R
  int depth = 48;
  std::uint64_t budget = 1'000'000;
  std::array<double, 4> region{-1, 1, -1, 1};
  int width = 256;
  int height = 256;
  std::uint64_t seed = 1;
  std::size_t count = 10'000;
  double lambda_re = 0.5;
  double lambda_im = 0;
  std::string output;
  std::string format;  // ppm | png, or inferred from the output extension
  std::optional<std::size_t> workers;
  bool json = false;

  std::vector<std::size_t> indices;  // roots, chain, join A
  std::vector<std::size_t> target;   // join B
  std::optional<std::size_t> root;
  double root_tol = 1e-9;
  double cluster_radius = 1e-7;
  std::size_t rouche_samples = 256;
  std::size_t n_cap = 160;
  double lemma_tol = 1e-12;
  int max_odd = 101;
  int max_even = 100;
  std::uint64_t zeroset_budget = 10'000'000;
  std::string dump;  // optional per-pixel JSON for render
};

/// Worker count: explicit flag, then FNGON_WORKERS, then hardware concurrency.
std::size_t resolve_workers(const std::optional<std::size_t>& flag);

/// Runs one subcommand. Returns the process exit code.
int cli_run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);
int cli_run(int argc, char** argv);

}  // namespace fngon::cli
