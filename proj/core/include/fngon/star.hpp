#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <variant>
#include <vector>

#include "fngon/coeffsets.hpp"

namespace fngon {

/// An admissible step delta together with, for every c in G (by index), the
/// lexicographically smallest d in G such that delta*c + d lies in G.
struct WitnessMap {
  CycNum step;
  std::vector<std::size_t> witness;
};

/// delta is not admissible: no d in G puts delta*c + d back into G for the
/// element with index `blocked`.
struct StepRefusal {
  CycNum step;
  std::size_t blocked = 0;
};

using StepCheck = std::variant<WitnessMap, StepRefusal>;

StepCheck admissible_step(const CycNum& delta, const CoeffSet& g);

enum class StarVerdict { kSatisfied, kRefuted };

enum class RefutationReason { kMissingOne, kNotStronglyConnected };

struct BlockedStep {
  CycNum step;
  std::size_t from = 0;  // element the inbound step leaves
  std::size_t c = 0;     // element with no valid witness
};

struct Refutation {
  RefutationReason reason = RefutationReason::kNotStronglyConnected;
  std::optional<std::size_t> element;  // unreachable element (index)
  std::vector<BlockedStep> blocked;    // one entry per inbound step
};

/// Decision and certificate for condition (*) on a finite set.
///
/// Condition (ii) only constrains each consecutive difference on its own, so
/// it is equivalent to strong connectivity of the digraph on G with an edge
/// u -> v whenever v - u is admissible. The certificate keeps that digraph,
/// the witness maps of every admissible step and breadth-first chains for
/// every ordered pair. It refers to the set it was built from, which must
/// outlive it.
class StarCertificate {
 public:
  const CoeffSet& set() const noexcept { return *set_; }
  StarVerdict verdict() const noexcept { return verdict_; }
  bool satisfied() const noexcept { return verdict_ == StarVerdict::kSatisfied; }

  /// Admissible steps in canonical order.
  const std::vector<WitnessMap>& admissible_steps() const noexcept { return steps_; }
  const std::vector<StepRefusal>& refused_steps() const noexcept { return refused_; }

  /// Witness map for delta, or nullptr when delta is not an admissible step.
  const WitnessMap* step(const CycNum& delta) const;
  /// d(delta, c) by element index; throws when delta is not admissible.
  std::size_t witness(const CycNum& delta, std::size_t c) const;

  bool edge(std::size_t u, std::size_t v) const;
  /// Shortest chain a = b_1, ..., b_m = b as element indices (ties broken by
  /// canonical order). nullopt when b is unreachable from a.
  std::optional<std::vector<std::size_t>> chain(std::size_t a, std::size_t b) const;

  const std::optional<Refutation>& refutation() const noexcept { return refutation_; }

 private:
  friend StarCertificate check_star(const CoeffSet& g, std::size_t workers);

  const CoeffSet* set_ = nullptr;
  StarVerdict verdict_ = StarVerdict::kRefuted;
  std::vector<WitnessMap> steps_;
  std::vector<StepRefusal> refused_;
  std::unordered_map<CycNum, std::ptrdiff_t, CycNumHash> step_lookup_;  // >=0 admissible, <0 refused (~idx)
  std::vector<std::vector<std::size_t>> step_of_;   // [u][v] -> distinct-step id
  std::vector<std::ptrdiff_t> step_slot_;           // distinct-step id -> lookup value
  std::vector<std::vector<std::size_t>> parent_;    // [source][v], npos when unreached
  std::optional<Refutation> refutation_;
};

StarCertificate check_star(const CoeffSet& g, std::size_t workers = 1);

/// Reduced check valid for negation-closed sets containing 0 and 1: every
/// element must be reachable from 0. Uses its own direct admissibility test,
/// independent of check_star's difference index.
bool check_star_reduced(const CoeffSet& g);

nlohmann::json to_json(const StarCertificate& cert, bool include_chains = true);

// ---------------------------------------------------------------------------
// Explicit sine-ladder chains for Omega_n.

struct LadderWitness {
  std::size_t c = 0;   // index into Omega_n
  CycNum d;            // witness
  CycNum result;       // step * c + d
};

struct LadderStep {
  CycNum step;
  int lemma_q = 0;  // 0 for the unit first step of an odd-q ladder
  std::vector<LadderWitness> witnesses;
};

struct SinLadder {
  int n = 0;
  CycNum target;
  PolarForm form;               // target = xi_2n^phase * S_q
  std::vector<CycNum> chain;    // b_1 = 0, ..., b_m = target
  std::vector<LadderStep> steps;
};

/// Builds the explicit ladder from 0 to a with the witnesses read off the
/// sine-product identity. `omega` must be omega_set(n).
SinLadder explicit_chain(const CycNum& a, int n, const CoeffSet& omega);

/// Re-checks every chain element and every witness exactly. Returns the
/// number of failed checks (0 when the ladder is valid).
std::size_t validate_ladder(const SinLadder& ladder, const CoeffSet& omega);

// ---------------------------------------------------------------------------
// Sine-product identity behind the ladders.

struct LemmaResidual {
  int j = 0;
  int k = 0;
  bool exact_zero = false;
  double float_residual = 0;
};

/// Evaluates (sin(q pi/n) - sin((q-2) pi/n)) sin(r pi/n)
///           - sin(j pi/n) sin(pi/n) - sin(k pi/n) sin(pi/n)
/// both in floating point and exactly in Z[xi_2n] (after clearing the common
/// factor -1/4 coming from sin t = (e^it - e^-it)/2i).
LemmaResidual lemma_residual(int n, int q, int r);

struct LemmaSweep {
  std::size_t checked = 0;
  std::size_t exact_failures = 0;
  double max_float_residual = 0;
  int max_odd = 0;
  int max_even = 0;
};

LemmaSweep sweep_lemmas(int max_odd, int max_even, std::size_t workers = 1);

}  // namespace fngon
