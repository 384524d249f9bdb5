#include "fngon/chain.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fngon/error.hpp"

namespace fngon {
namespace {

std::size_t trimmed(std::span<const Complex> c) {
  std::size_t n = c.size();
  while (n > 0 && c[n - 1] == Complex(0)) --n;
  return n;
}

bool same_poly(std::span<const Complex> a, std::span<const Complex> b) {
  const std::size_t la = trimmed(a), lb = trimmed(b);
  if (la != lb) return false;
  for (std::size_t i = 0; i < la; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

RoucheCheck certify(std::span<const Complex> q, std::span<const Complex> p, std::size_t n_terms,
                    double growth, Complex s, double r, std::size_t samples) {
  RoucheCheck c{s, r, 0, 0, false};
  const double rho = std::abs(s) + r;
  if (rho >= 1.0) return c;

  double min_q = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples);
    min_q = std::min(min_q, std::abs(evaluate(q, s + std::polar(r, theta))));
  }
  double deriv = 0;
  for (std::size_t i = 1; i < q.size(); ++i)
    deriv += static_cast<double>(i) * std::abs(q[i]) * std::pow(rho, static_cast<double>(i - 1));
  c.lower = min_q - deriv * std::numbers::pi * r / static_cast<double>(samples);

  double diff = 0;
  bool prefix_equal = true;
  for (std::size_t i = 0; i < std::max(q.size(), p.size()); ++i) {
    const Complex qi = i < q.size() ? q[i] : Complex(0);
    const Complex pi = i < p.size() ? p[i] : Complex(0);
    if (i < n_terms && qi != pi) prefix_equal = false;
    diff += std::abs(qi - pi) * std::pow(rho, static_cast<double>(i));
  }
  c.perturbation = prefix_equal ? std::min(diff, tail_bound(growth, rho, n_terms)) : diff;
  c.pass = c.lower > 0 && c.perturbation * (1 + 1e-9) + 1e-15 < c.lower;
  return c;
}

}  // namespace

RoucheResult rouche_step(std::span<const Complex> q, std::span<const Complex> p_next,
                         std::size_t n_terms, double growth, Complex s, double eps,
                         const RoucheOptions& opts) {
  if (!(eps > 0)) fail(ErrorKind::kPrecondition, "eps must be positive");
  if (same_poly(q, p_next)) {
    return {s, root_residual(p_next, s), {s, eps, 0, 0, true}};
  }
  if (trimmed(p_next) < 2) {
    fail(ErrorKind::kNoRootWithinEps, "truncated polynomial is constant and has no roots");
  }
  const RootSet roots = roots_certified(p_next, RootOptions{opts.tol});
  std::size_t best = 0;
  for (std::size_t i = 1; i < roots.size(); ++i) {
    const double di = std::abs(roots.roots[i] - s), db = std::abs(roots.roots[best] - s);
    if (di < db || (di == db && std::arg(roots.roots[i]) < std::arg(roots.roots[best]))) best = i;
  }
  const Complex next = roots.roots[best];
  const double dist = std::abs(next - s);
  if (dist > eps) {
    std::ostringstream msg;
    msg << "nearest root of the truncation is " << dist << " away (eps " << eps
        << "); N is too small";
    fail(ErrorKind::kNoRootWithinEps, msg.str());
  }

  RoucheCheck check{s, 0, 0, 0, false};
  for (double r = eps; r >= eps / 8; r /= 2) {
    RoucheCheck c = certify(q, p_next, n_terms, growth, s, r, opts.samples);
    if (c.pass) {
      check = c;
    } else if (check.pass) {
      break;
    } else if (check.radius == 0) {
      check = c;  // keep the widest attempt as the failure record
    }
  }
  if (check.pass && dist > check.radius) {
    fail(ErrorKind::kNumericFailure, "root finder missed the root certified inside the circle");
  }
  return {next, roots.residuals[best], check};
}

EpsilonChain connect_to_annulus(const GPoly& a, Complex s, const StarCertificate& cert,
                                const ChainOptions& opts) {
  if (!cert.satisfied()) fail(ErrorKind::kCannotJoin, "coefficient set does not satisfy condition (*)");
  const CoeffSet& g = cert.set();
  double radius;
  if (opts.radius) {
    radius = *opts.radius;
  } else if (g.order()) {
    radius = 1.0 / std::sqrt(static_cast<double>(*g.order())) + 0.01;
  } else {
    fail(ErrorKind::kPrecondition, "annulus radius R is required for sets other than Omega_n");
  }
  const double eps = opts.eps;
  if (!(eps > 0) || !(radius > 0) || radius + eps >= 1) {
    fail(ErrorKind::kPrecondition, "need eps > 0, R > 0 and R + eps < 1");
  }
  if (!(std::abs(s) < 1)) fail(ErrorKind::kPrecondition, "starting point must lie in the unit disk");
  if (root_residual(a.approx(), s) > opts.rouche.tol) {
    fail(ErrorKind::kPrecondition, "starting point is not a root of A within tolerance");
  }
  auto idx = a.indices(g);
  if (!idx) fail(ErrorKind::kMembership, "A is not in Q^G_N of the certified set");
  const auto one = g.index_of(CycNum::from_int(g.conductor(), 1));

  EpsilonChain chain;
  chain.eps = eps;
  chain.radius = radius;
  chain.n_terms = a.length();
  auto in_annulus = [&](Complex z) { return std::abs(z) > radius && std::abs(z) < 1; };
  auto approx_of = [&](const std::vector<std::size_t>& v) {
    std::vector<Complex> out;
    out.reserve(v.size() + 1);
    out.emplace_back(1.0, 0.0);
    for (std::size_t i : v) out.push_back(g.approx()[i]);
    return out;
  };

  std::vector<std::size_t> start = *idx;
  const double start_residual = root_residual(a.approx(), s);
  if (in_annulus(s)) {
    chain.points.push_back({s, 0, start_residual, approx_of(start), true});
    chain.terminal = ChainTerminal::kReachedAnnulus;
    return chain;
  }

  std::string last_reason;
  while (true) {
    const std::size_t n_terms = start.size() + 1;
    chain.n_terms = n_terms;
    chain.points.assign(1, {s, 0, root_residual(approx_of(start), s), approx_of(start), true});
    chain.checks.clear();
    const std::vector<std::size_t> target(n_terms - 1, *one);
    bool reached = false;

    const JoinStats stats = walk_join(start, target, cert, [&](const JoinHop& hop) {
      if (hop.ordinal >= opts.max_hops) {
        last_reason = "hop budget exhausted";
        return false;
      }
      std::vector<Complex> q = approx_of(hop.from);
      const Complex delta = hop.delta.to_complex();
      q.resize(n_terms + hop.exponent, Complex(0));
      for (std::size_t i = 0; i < n_terms; ++i) q[i + hop.exponent] += delta * (i == 0 ? Complex(1) : g.approx()[hop.from[i - 1]]);
      std::vector<Complex> next_poly = approx_of(hop.to);
      try {
        const auto step = rouche_step(q, next_poly, n_terms, g.growth_bound(),
                                      chain.points.back().z, eps, opts.rouche);
        chain.checks.push_back(step.check);
        chain.points.push_back({step.next, hop.ordinal + 1, step.residual, std::move(next_poly),
                                step.check.pass});
        if (in_annulus(step.next)) {
          reached = true;
          return false;
        }
        return true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNoRootWithinEps) throw;
        last_reason = e.what();
        return false;
      }
    });

    if (reached) {
      chain.terminal = ChainTerminal::kReachedAnnulus;
      return chain;
    }
    if (stats.completed) last_reason = "walk reached the geometric target without entering the annulus";
    if (2 * n_terms > opts.n_cap) {
      std::ostringstream msg;
      msg << "no eps-chain into the annulus up to N = " << n_terms << " (cap " << opts.n_cap
          << "): " << last_reason << "; " << stats.hops << " hops, last |s| = "
          << std::abs(chain.points.back().z);
      fail(ErrorKind::kChainFailed, msg.str());
    }
    std::vector<std::size_t> extended = start;
    extended.push_back(*one);
    extended.insert(extended.end(), start.begin(), start.end());
    start = std::move(extended);
    ++chain.restarts;
  }
}

ChainReport verify_chain(const EpsilonChain& chain, double eps, double tol) {
  ChainReport r;
  std::ostringstream detail;
  if (chain.points.empty()) {
    r.detail = "empty chain";
    return r;
  }
  r.hops = true;
  for (std::size_t i = 0; i + 1 < chain.points.size(); ++i) {
    const double d = std::abs(chain.points[i + 1].z - chain.points[i].z);
    if (d > eps * (1 + 1e-12)) {
      r.hops = false;
      detail << "hop " << i << " has length " << d << "; ";
    }
  }
  r.residuals = true;
  r.inside_disk = true;
  for (std::size_t i = 0; i < chain.points.size(); ++i) {
    const auto& p = chain.points[i];
    if (root_residual(p.poly, p.z) > tol) {
      r.residuals = false;
      detail << "point " << i << " is not a root; ";
    }
    if (!(std::abs(p.z) < 1)) {
      r.inside_disk = false;
      detail << "point " << i << " leaves the disk; ";
    }
  }
  const double last = std::abs(chain.points.back().z);
  r.terminal = chain.terminal != ChainTerminal::kReachedAnnulus ||
               (last > chain.radius && last < 1);
  if (!r.terminal) detail << "terminal point is outside the annulus; ";
  r.detail = detail.str();
  return r;
}

nlohmann::json to_json(const EpsilonChain& chain) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : chain.points) {
    points.push_back({{"re", p.z.real()},
                      {"im", p.z.imag()},
                      {"poly_index", p.poly_index},
                      {"residual", p.residual},
                      {"certified", p.certified}});
  }
  return {{"eps", chain.eps},
          {"R", chain.radius},
          {"N", chain.n_terms},
          {"restarts", chain.restarts},
          {"points", points},
          {"terminal", chain.terminal == ChainTerminal::kReachedAnnulus ? "reached-annulus"
                                                                        : "exhausted"}};
}

}  // namespace fngon
