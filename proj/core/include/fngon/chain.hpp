#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fngon/join.hpp"

namespace fngon {

struct RoucheOptions {
  std::size_t samples = 256;
  double tol = 1e-9;  // root tolerance
};

struct RoucheCheck {
  Complex center;
  double radius = 0;      // 0 when no radius could be certified
  double lower = 0;       // lower bound on |q| over the circle
  double perturbation = 0;  // upper bound on |q - p_next| over the circle
  bool pass = false;
};

struct RoucheResult {
  Complex next;
  double residual = 0;
  RoucheCheck check;
};

/// Moves a root s of q to a root of p_next = C_N(q) within eps. q and p_next
/// are ascending complex coefficient lists; `growth` is the bound L of the
/// coefficient set. Tries radii eps, eps/2, eps/4, eps/8 for a Rouché
/// certificate; the returned root is the nearest root of p_next either way.
RoucheResult rouche_step(std::span<const Complex> q, std::span<const Complex> p_next,
                         std::size_t n_terms, double growth, Complex s, double eps,
                         const RoucheOptions& opts = {});

enum class ChainTerminal { kReachedAnnulus, kExhausted };

struct ChainPoint {
  Complex z;
  std::uint64_t poly_index = 0;  // position in the join walk (0 = A)
  double residual = 0;
  std::vector<Complex> poly;     // coefficients of the polynomial z roots
  bool certified = true;         // hop into this point had a passing Rouché check
};

struct EpsilonChain {
  double eps = 0;
  double radius = 0;  // R
  std::size_t n_terms = 0;
  std::vector<ChainPoint> points;
  std::vector<RoucheCheck> checks;
  ChainTerminal terminal = ChainTerminal::kExhausted;
  std::size_t restarts = 0;  // times N was doubled
};

struct ChainOptions {
  double eps = 0.1;
  std::optional<double> radius;  // default 1/sqrt(n) + 0.01 for Omega_n
  std::size_t n_cap = 160;
  std::uint64_t max_hops = 2'000'000;  // per walk
  RoucheOptions rouche;
};

/// Tracks the root s of A through the join sequence from A to the geometric
/// target until it enters R < |z| < 1. On exhaustion the series is extended
/// to length 2N as (1 + z^N) A, which keeps s as a root, and the walk is
/// retried until the length cap.
EpsilonChain connect_to_annulus(const GPoly& a, Complex s, const StarCertificate& cert,
                                const ChainOptions& opts = {});

struct ChainReport {
  bool hops = false;
  bool residuals = false;
  bool inside_disk = false;
  bool terminal = false;
  std::string detail;

  bool ok() const noexcept { return hops && residuals && inside_disk && terminal; }
};

ChainReport verify_chain(const EpsilonChain& chain, double eps, double tol = 1e-9);

nlohmann::json to_json(const EpsilonChain& chain);

}  // namespace fngon
