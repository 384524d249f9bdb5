#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <vector>

#include "fngon/polyseries.hpp"
#include "fngon/star.hpp"

namespace fngon {

/// One multiplier q_i = (1 + delta z^exponent) p_i with its product.
struct JoinStep {
  CycNum delta;
  std::size_t exponent = 0;
  std::vector<CycNum> product;
};

/// p_0, q_0, p_1, ..., q_(m-1), p_m with q_i stored in steps[i].
struct JoinSequence {
  std::size_t n_terms = 0;
  GPoly a;
  GPoly b;
  std::vector<GPoly> polys;
  std::vector<JoinStep> steps;

  std::size_t length() const noexcept { return steps.size(); }
};

/// A hop p_i -> p_(i+1) as seen by a streaming walker. Polynomials are given
/// as coefficient indices (a_1 .. a_(N-1)) into the canonical order of G.
struct JoinHop {
  std::uint64_t ordinal = 0;
  const std::vector<std::size_t>& from;
  const CycNum& delta;
  std::size_t exponent = 0;
  const std::vector<std::size_t>& to;
  std::size_t depth = 0;  // recursion depth of the inductive construction
};

struct JoinStats {
  std::uint64_t hops = 0;
  std::size_t max_depth = 0;
  bool completed = false;  // false when the visitor stopped the walk
};

/// Runs the inductive construction from a to b without materializing it.
/// The visitor returns false to stop early. Throws cannot-join on a refuted
/// certificate.
JoinStats walk_join(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                    const StarCertificate& cert,
                    const std::function<bool(const JoinHop&)>& visitor);

/// Materialized join sequence from a to b (both in Q^G_N of the certified G).
JoinSequence join_sequence(const GPoly& a, const GPoly& b, const StarCertificate& cert);

struct JoinReport {
  bool members = false;
  bool in_ball = false;
  bool products = false;
  bool truncations = false;
  bool endpoints = false;

  bool ok() const noexcept { return members && in_ball && products && truncations && endpoints; }
};

/// Independent exact re-check of the five join conditions.
JoinReport verify_join(const JoinSequence& seq, const CoeffSet& g, std::size_t n_terms);

nlohmann::json to_json(const JoinSequence& seq, const CoeffSet& g);

}  // namespace fngon
