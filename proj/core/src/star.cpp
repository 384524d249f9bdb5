#include "fngon/star.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "fngon/error.hpp"
#include "fngon/parallel.hpp"

namespace fngon {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Witness choice shared by both admissibility routes: d = 0 when it works,
// otherwise the canonically smallest d.
std::optional<std::size_t> zero_witness(const CycNum& product, const CoeffSet& g,
                                        std::optional<std::size_t> zero_index) {
  if (zero_index && g.contains(product)) return zero_index;
  return std::nullopt;
}

std::optional<std::size_t> zero_index_of(const CoeffSet& g) {
  if (g.size() == 0) return std::nullopt;
  return g.index_of(CycNum::zero(g.conductor()));
}

void require_conductor(const CycNum& delta, const CoeffSet& g) {
  if (g.size() > 0 && delta.conductor() != g.conductor()) {
    fail(ErrorKind::kConductorMismatch,
         "step conductor " + std::to_string(delta.conductor()) +
             " does not match set conductor " + std::to_string(g.conductor()));
  }
}

std::pair<int, int> lemma_indices(int n, int q, int r) {
  if (n < 2) fail(ErrorKind::kInvalidOrder, "lemma needs n >= 2");
  const int half = (n % 2 == 1) ? (n - 1) / 2 : n / 2;
  if (q < 2 || q > half || r < 0 || r > half) {
    fail(ErrorKind::kPrecondition,
         "lemma indices out of range: n=" + std::to_string(n) + " q=" +
             std::to_string(q) + " r=" + std::to_string(r));
  }
  const int s = q + r - 1;
  const int low_max = (n % 2 == 1) ? (n - 1) / 2 : n / 2 - 1;
  const int j = (s <= low_max) ? s : n - s;
  const int k = r - q + 1;
  return {j, k};
}

}  // namespace

StepCheck admissible_step(const CycNum& delta, const CoeffSet& g) {
  require_conductor(delta, g);
  const auto zero = zero_index_of(g);
  WitnessMap map{delta, {}};
  map.witness.reserve(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) {
    const CycNum product = delta * g[c];
    std::optional<std::size_t> found = zero_witness(product, g, zero);
    for (std::size_t d = 0; !found && d < g.size(); ++d) {
      if (g.contains(product + g[d])) found = d;
    }
    if (!found) return StepRefusal{delta, c};
    map.witness.push_back(*found);
  }
  return map;
}

const WitnessMap* StarCertificate::step(const CycNum& delta) const {
  auto it = step_lookup_.find(delta);
  if (it == step_lookup_.end() || it->second < 0) return nullptr;
  return &steps_[static_cast<std::size_t>(it->second)];
}

std::size_t StarCertificate::witness(const CycNum& delta, std::size_t c) const {
  const WitnessMap* map = step(delta);
  if (map == nullptr) {
    fail(ErrorKind::kCannotJoin, "step " + delta.str() + " is not admissible");
  }
  return map->witness.at(c);
}

bool StarCertificate::edge(std::size_t u, std::size_t v) const {
  return step_slot_[step_of_[u][v]] >= 0;
}

std::optional<std::vector<std::size_t>> StarCertificate::chain(std::size_t a,
                                                               std::size_t b) const {
  if (a == b) return std::vector<std::size_t>{a};
  if (parent_[a][b] == kNone) return std::nullopt;
  std::vector<std::size_t> path{b};
  for (std::size_t v = b; v != a;) {
    v = parent_[a][v];
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

StarCertificate check_star(const CoeffSet& g, std::size_t workers) {
  const std::size_t n = g.size();
  if (n == 0) fail(ErrorKind::kPrecondition, "condition (*) needs a non-empty set");

  StarCertificate cert;
  cert.set_ = &g;

  // Distinct differences v - u.
  std::vector<CycNum> deltas;
  std::unordered_map<CycNum, std::size_t, CycNumHash> delta_id;
  cert.step_of_.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      CycNum d = g[v] - g[u];
      auto [it, inserted] = delta_id.emplace(d, deltas.size());
      if (inserted) deltas.push_back(std::move(d));
      cert.step_of_[u][v] = it->second;
    }
  }

  // min_d[e - d] = smallest d with (e - d) + d = e in G.
  std::unordered_map<CycNum, std::size_t, CycNumHash> min_d;
  min_d.reserve(n * n);
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t e = 0; e < n; ++e) min_d.emplace(g[e] - g[d], d);

  const auto zero = zero_index_of(g);
  std::vector<std::optional<StepCheck>> checks(deltas.size());
  parallel_for(deltas.size(), workers, [&](std::size_t id) {
    WitnessMap map{deltas[id], {}};
    map.witness.reserve(n);
    for (std::size_t c = 0; c < n; ++c) {
      const CycNum product = deltas[id] * g[c];
      std::optional<std::size_t> found = zero_witness(product, g, zero);
      if (!found) {
        auto it = min_d.find(product);
        if (it != min_d.end()) found = it->second;
      }
      if (!found) {
        checks[id] = StepRefusal{deltas[id], c};
        return;
      }
      map.witness.push_back(*found);
    }
    checks[id] = std::move(map);
  });

  // Canonical order of steps for deterministic output.
  std::vector<std::size_t> order(deltas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return deltas[a] < deltas[b]; });
  cert.step_slot_.assign(deltas.size(), 0);
  for (std::size_t id : order) {
    auto& check = *checks[id];
    if (auto* map = std::get_if<WitnessMap>(&check)) {
      cert.step_slot_[id] = static_cast<std::ptrdiff_t>(cert.steps_.size());
      cert.steps_.push_back(std::move(*map));
    } else {
      cert.step_slot_[id] = ~static_cast<std::ptrdiff_t>(cert.refused_.size());
      cert.refused_.push_back(std::move(std::get<StepRefusal>(check)));
    }
    cert.step_lookup_.emplace(deltas[id], cert.step_slot_[id]);
  }

  // Breadth-first search from every source; neighbours in canonical order.
  cert.parent_.assign(n, std::vector<std::size_t>(n, kNone));
  for (std::size_t s = 0; s < n; ++s) {
    auto& parent = cert.parent_[s];
    std::vector<bool> seen(n, false);
    seen[s] = true;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < n; ++v) {
        if (seen[v] || !cert.edge(u, v)) continue;
        seen[v] = true;
        parent[v] = u;
        queue.push_back(v);
      }
    }
  }
  auto reaches = [&](std::size_t u, std::size_t v) {
    return u == v || cert.parent_[u][v] != kNone;
  };

  bool strongly_connected = true;
  for (std::size_t u = 0; u < n && strongly_connected; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (!reaches(u, v)) {
        strongly_connected = false;
        break;
      }

  const auto one = g.index_of(CycNum::from_int(g.conductor(), 1));
  if (!one) {
    cert.verdict_ = StarVerdict::kRefuted;
    cert.refutation_ = Refutation{RefutationReason::kMissingOne, std::nullopt, {}};
    return cert;
  }
  if (strongly_connected) {
    cert.verdict_ = StarVerdict::kSatisfied;
    return cert;
  }

  // Pick a source component of the condensation: nothing outside it can
  // reach it. Prefer one that does not contain 1.
  std::vector<std::size_t> component(n, kNone);
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t u = 0; u < n; ++u) {
    if (component[u] != kNone) continue;
    members.emplace_back();
    for (std::size_t v = u; v < n; ++v) {
      if (component[v] == kNone && reaches(u, v) && reaches(v, u)) {
        component[v] = members.size() - 1;
        members.back().push_back(v);
      }
    }
  }
  std::optional<std::size_t> chosen;
  for (std::size_t cid = 0; cid < members.size(); ++cid) {
    bool source = true;
    for (std::size_t u = 0; u < n && source; ++u) {
      if (component[u] == cid) continue;
      for (std::size_t v : members[cid])
        if (cert.edge(u, v)) {
          source = false;
          break;
        }
    }
    if (!source) continue;
    const bool has_one = component[*one] == cid;
    if (!chosen || (!has_one && component[*one] == *chosen)) chosen = cid;
  }
  if (!chosen) fail(ErrorKind::kInternal, "condensation without a source component");

  Refutation ref;
  ref.reason = RefutationReason::kNotStronglyConnected;
  ref.element = members[*chosen].front();
  std::unordered_map<CycNum, bool, CycNumHash> listed;
  for (std::size_t u = 0; u < n; ++u) {
    if (component[u] == *chosen) continue;
    for (std::size_t v : members[*chosen]) {
      const std::ptrdiff_t slot = cert.step_slot_[cert.step_of_[u][v]];
      const auto& refusal = cert.refused_[static_cast<std::size_t>(~slot)];
      if (listed.emplace(refusal.step, true).second) {
        ref.blocked.push_back(BlockedStep{refusal.step, u, refusal.blocked});
      }
    }
  }
  cert.verdict_ = StarVerdict::kRefuted;
  cert.refutation_ = std::move(ref);
  return cert;
}

bool check_star_reduced(const CoeffSet& g) {
  const std::size_t n = g.size();
  if (n == 0) return false;
  const auto zero = zero_index_of(g);
  if (!zero || !g.flags().negation || !g.flags().contains_one) return false;
  std::unordered_map<CycNum, bool, CycNumHash> admissible;
  auto is_admissible = [&](const CycNum& delta) {
    auto it = admissible.find(delta);
    if (it != admissible.end()) return it->second;
    const bool ok = std::holds_alternative<WitnessMap>(admissible_step(delta, g));
    admissible.emplace(delta, ok);
    return ok;
  };
  std::vector<bool> seen(n, false);
  seen[*zero] = true;
  std::deque<std::size_t> queue{*zero};
  std::size_t count = 1;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v = 0; v < n; ++v) {
      if (seen[v] || !is_admissible(g[v] - g[u])) continue;
      seen[v] = true;
      ++count;
      queue.push_back(v);
    }
  }
  return count == n;
}

nlohmann::json to_json(const StarCertificate& cert, bool include_chains) {
  const CoeffSet& g = cert.set();
  nlohmann::json j;
  j["verdict"] = cert.satisfied() ? "satisfied" : "refuted";
  j["set_size"] = g.size();
  auto steps = nlohmann::json::array();
  for (const auto& s : cert.admissible_steps()) {
    steps.push_back({{"delta", to_json(s.step)}, {"witnesses", s.witness}});
  }
  j["steps"] = std::move(steps);
  if (cert.satisfied()) {
    if (include_chains) {
      auto chains = nlohmann::json::array();
      for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b)
          if (a != b) chains.push_back({{"from", a}, {"to", b}, {"path", *cert.chain(a, b)}});
      j["chains"] = std::move(chains);
    }
  } else {
    const auto& ref = *cert.refutation();
    nlohmann::json r;
    r["reason"] = ref.reason == RefutationReason::kMissingOne ? "missing-one"
                                                              : "not-strongly-connected";
    r["element"] = ref.element ? nlohmann::json(*ref.element) : nlohmann::json(nullptr);
    if (ref.element) r["element_value"] = to_json(g[*ref.element]);
    auto blocked = nlohmann::json::array();
    for (const auto& b : ref.blocked) {
      blocked.push_back({{"delta", to_json(b.step)}, {"from", b.from}, {"c", b.c}});
    }
    r["blocked"] = std::move(blocked);
    j["refutation"] = std::move(r);
  }
  return j;
}

SinLadder explicit_chain(const CycNum& a, int n, const CoeffSet& omega) {
  if (a.is_zero()) fail(ErrorKind::kPrecondition, "ladder target must be nonzero");
  const auto form = polar_decompose(n, a);
  if (!form) fail(ErrorKind::kNotAMember, a.str() + " is not in Omega_" + std::to_string(n));

  const std::uint32_t m = static_cast<std::uint32_t>(2 * n);
  const CycNum unit = CycNum::root_of_unity(m, form->phase);
  const int q = form->r;

  SinLadder ladder;
  ladder.n = n;
  ladder.target = a;
  ladder.form = *form;
  ladder.chain.push_back(CycNum::zero(m));
  std::vector<int> lemma_q;
  if (q % 2 == 0) {
    for (int i = 1; i <= q / 2; ++i) {
      ladder.chain.push_back(unit * sin_ratio(n, 2 * i));
      lemma_q.push_back(2 * i);
    }
  } else {
    ladder.chain.push_back(unit);
    lemma_q.push_back(0);
    for (int i = 2; i <= (q + 1) / 2; ++i) {
      ladder.chain.push_back(unit * sin_ratio(n, 2 * i - 1));
      lemma_q.push_back(2 * i - 1);
    }
  }

  std::vector<PolarForm> c_forms(omega.size());
  for (std::size_t c = 0; c < omega.size(); ++c) {
    if (omega[c].is_zero()) continue;  // phase 0, r = 0
    const auto f = polar_decompose(n, omega[c]);
    if (!f) fail(ErrorKind::kNotAMember, "ladder set is not Omega_" + std::to_string(n));
    c_forms[c] = *f;
  }

  for (std::size_t i = 0; i + 1 < ladder.chain.size(); ++i) {
    LadderStep step;
    step.step = ladder.chain[i + 1] - ladder.chain[i];
    step.lemma_q = lemma_q[i];
    for (std::size_t c = 0; c < omega.size(); ++c) {
      const int phase = form->phase + c_forms[c].phase;
      const int r = c_forms[c].r;
      LadderWitness w;
      w.c = c;
      if (omega[c].is_zero()) {
        w.d = CycNum::zero(m);
        w.result = CycNum::zero(m);
      } else if (step.lemma_q == 0) {
        w.d = -polar_value(n, {phase, r});
        w.result = CycNum::zero(m);
      } else {
        const auto [jj, kk] = lemma_indices(n, step.lemma_q, r);
        w.d = -polar_value(n, {phase, jj});
        w.result = polar_value(n, {phase, kk});
      }
      step.witnesses.push_back(std::move(w));
    }
    ladder.steps.push_back(std::move(step));
  }
  return ladder;
}

std::size_t validate_ladder(const SinLadder& ladder, const CoeffSet& omega) {
  std::size_t failures = 0;
  if (ladder.chain.empty() || !ladder.chain.front().is_zero()) ++failures;
  if (ladder.chain.empty() || ladder.chain.back() != ladder.target) ++failures;
  for (const auto& b : ladder.chain)
    if (!omega.contains(b)) ++failures;
  if (ladder.steps.size() + 1 != ladder.chain.size()) return failures + 1;
  for (std::size_t i = 0; i < ladder.steps.size(); ++i) {
    const auto& step = ladder.steps[i];
    if (step.step != ladder.chain[i + 1] - ladder.chain[i]) ++failures;
    if (step.witnesses.size() != omega.size()) ++failures;
    for (const auto& w : step.witnesses) {
      if (w.c >= omega.size()) {
        ++failures;
        continue;
      }
      if (!omega.contains(w.d)) ++failures;
      if (!omega.contains(w.result)) ++failures;
      if (step.step * omega[w.c] + w.d != w.result) ++failures;
    }
  }
  return failures;
}

LemmaResidual lemma_residual(int n, int q, int r) {
  const auto [j, k] = lemma_indices(n, q, r);
  LemmaResidual out;
  out.j = j;
  out.k = k;

  const double pi_n = std::numbers::pi / n;
  auto s = [&](int t) { return std::sin(t * pi_n); };
  out.float_residual = (s(q) - s(q - 2)) * s(r) - s(j) * s(1) - s(k) * s(1);

  // With w = xi_2n, sin(t pi/n) = (w^t - w^-t)/(2i); multiply through by -4.
  using Term = std::pair<std::int64_t, std::int64_t>;
  std::vector<Term> terms;
  const std::vector<Term> left{{q, 1}, {-q, -1}, {q - 2, -1}, {-(q - 2), 1}};
  const std::vector<Term> right{{r, 1}, {-r, -1}};
  for (const auto& [ea, ca] : left)
    for (const auto& [eb, cb] : right) terms.emplace_back(ea + eb, ca * cb);
  for (int t : {j, k}) {
    // -(w^t - w^-t)(w - w^-1)
    terms.emplace_back(t + 1, -1);
    terms.emplace_back(t - 1, 1);
    terms.emplace_back(-t + 1, 1);
    terms.emplace_back(-t - 1, -1);
  }
  out.exact_zero = CycNum::from_power_sum(static_cast<std::uint32_t>(2 * n), terms).is_zero();
  return out;
}

LemmaSweep sweep_lemmas(int max_odd, int max_even, std::size_t workers) {
  std::vector<int> orders;
  for (int n = 3; n <= max_odd; n += 2) orders.push_back(n);
  for (int n = 2; n <= max_even; n += 2) orders.push_back(n);
  std::vector<LemmaSweep> partial(orders.size());
  parallel_for(orders.size(), workers, [&](std::size_t idx) {
    const int n = orders[idx];
    const int half = (n % 2 == 1) ? (n - 1) / 2 : n / 2;
    auto& out = partial[idx];
    for (int q = 2; q <= half; ++q) {
      for (int r = 0; r <= half; ++r) {
        const auto res = lemma_residual(n, q, r);
        ++out.checked;
        if (!res.exact_zero) ++out.exact_failures;
        out.max_float_residual = std::max(out.max_float_residual, std::abs(res.float_residual));
      }
    }
  });
  LemmaSweep total;
  total.max_odd = max_odd;
  total.max_even = max_even;
  for (const auto& p : partial) {
    total.checked += p.checked;
    total.exact_failures += p.exact_failures;
    total.max_float_residual = std::max(total.max_float_residual, p.max_float_residual);
  }
  return total;
}

}  // namespace fngon
