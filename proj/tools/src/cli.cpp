#include "fngon/cli.hpp"

#include <fngon/chain.hpp>
#include <fngon/coeffsets.hpp>
#include <fngon/error.hpp>
#include <fngon/join.hpp>
#include <fngon/locus.hpp>
#include <fngon/parallel.hpp>
#include <fngon/polyseries.hpp>
#include <fngon/star.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fngon::cli {
namespace {

using nlohmann::json;

json envelope(const RunConfig& cfg) {
  return {{"schema_version", kSchemaVersion}, {"command", cfg.subcommand}};
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

json complex_json(Complex z) { return {z.real(), z.imag()}; }

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::kPrecondition, "cannot open " + path + " for writing");
  return f;
}

std::vector<std::size_t> checked_indices(const std::vector<std::size_t>& idx, const CoeffSet& g,
                                         const char* what) {
  for (auto i : idx) {
    if (i >= g.size()) {
      fail(ErrorKind::kPrecondition, std::string(what) + " index " + std::to_string(i) +
                                         " is outside 0.." + std::to_string(g.size() - 1));
    }
  }
  return idx;
}

int run_omega(const RunConfig& cfg, std::ostream& out) {
  const auto g = omega_set(cfg.n);
  const auto p = omega_polar(cfg.n);
  bool equal = g.size() == p.size();
  for (std::size_t i = 0; equal && i < g.size(); ++i) equal = g[i] == p[i];
  if (cfg.json) {
    auto j = envelope(cfg);
    j["set"] = to_json(g);
    j["size"] = g.size();
    j["polar_equal"] = equal;
    emit(out, j);
  } else {
    out << "Omega_" << cfg.n << ": " << g.size() << " elements, polar form "
        << (equal ? "agrees" : "DIFFERS") << '\n';
    for (std::size_t i = 0; i < g.size(); ++i) {
      out << std::setw(4) << i << "  " << g[i].str() << "  ~ " << g.approx()[i] << '\n';
    }
  }
  return equal ? kOk : kRefuted;
}

int run_check_star(const RunConfig& cfg, std::ostream& out) {
  const auto g = omega_set(cfg.n);
  const auto cert = check_star(g, resolve_workers(cfg.workers));
  if (cfg.json) {
    auto j = envelope(cfg);
    j["n"] = cfg.n;
    j["certificate"] = to_json(cert);
    emit(out, j);
  } else {
    out << "condition (*) for Omega_" << cfg.n << ": "
        << (cert.satisfied() ? "satisfied" : "refuted") << ", "
        << cert.admissible_steps().size() << " admissible steps\n";
  }
  return cert.satisfied() ? kOk : kRefuted;
}

int run_lemmas(const RunConfig& cfg, std::ostream& out) {
  const auto s = sweep_lemmas(cfg.max_odd, cfg.max_even, resolve_workers(cfg.workers));
  const bool ok = s.exact_failures == 0 && s.max_float_residual <= cfg.lemma_tol;
  if (cfg.json) {
    auto j = envelope(cfg);
    j["max_odd"] = s.max_odd;
    j["max_even"] = s.max_even;
    j["checked"] = s.checked;
    j["exact_failures"] = s.exact_failures;
    j["max_float_residual"] = s.max_float_residual;
    j["tolerance"] = cfg.lemma_tol;
    j["ok"] = ok;
    emit(out, j);
  } else {
    out << s.checked << " identities checked, " << s.exact_failures
        << " exact failures, max float residual " << s.max_float_residual << '\n';
  }
  return ok ? kOk : kRefuted;
}

RootOptions root_options(const RunConfig& cfg) {
  RootOptions o;
  o.tol = cfg.root_tol;
  o.cluster_radius = cfg.cluster_radius;
  return o;
}

// Roots of p with trailing zero coefficients dropped; empty for constants.
RootSet trimmed_roots(const GPoly& p, const RunConfig& cfg, std::size_t& degree) {
  const auto approx = p.approx();
  std::size_t len = approx.size();
  while (len > 1 && approx[len - 1] == Complex(0, 0)) --len;
  degree = len - 1;
  if (len < 2) return {};
  return roots_certified(std::span<const Complex>(approx).first(len), root_options(cfg));
}

int run_roots(const RunConfig& cfg, std::ostream& out) {
  const auto g = omega_set(cfg.n);
  const auto p = GPoly::from_indices(g, checked_indices(cfg.indices, g, "coefficient"));
  std::size_t degree = 0;
  const auto roots = trimmed_roots(p, cfg, degree);
  if (cfg.json) {
    auto j = envelope(cfg);
    j["n"] = cfg.n;
    j["indices"] = cfg.indices;
    j["degree"] = degree;
    auto arr = json::array();
    for (std::size_t i = 0; i < roots.size(); ++i) {
      arr.push_back({{"re", roots.roots[i].real()},
                     {"im", roots.roots[i].imag()},
                     {"residual", roots.residuals[i]},
                     {"multiplicity", roots.multiplicity[i]}});
    }
    j["roots"] = std::move(arr);
    emit(out, j);
  } else {
    out << "degree " << degree << '\n' << std::setprecision(15);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      out << roots.roots[i] << "  |z| = " << std::abs(roots.roots[i])
          << "  residual " << roots.residuals[i] << '\n';
    }
  }
  return kOk;
}

int run_zeroset(const RunConfig& cfg, std::ostream& out) {
  const auto g = omega_set(cfg.n);
  ZeroSetOptions opts;
  opts.roots = root_options(cfg);
  opts.budget = cfg.zeroset_budget;
  const auto entries = enumerate_zero_set(g, cfg.n_terms, opts, resolve_workers(cfg.workers));
  std::size_t total = 0;
  std::ofstream file;
  if (!cfg.output.empty()) {
    file = open_output(cfg.output);
    file << "index,coefficients,degree,re,im,residual,multiplicity\n" << std::setprecision(17);
    for (const auto& e : entries) {
      std::string coeffs;
      for (std::size_t k = 0; k < e.coeff_indices.size(); ++k)
        coeffs += (k ? " " : "") + std::to_string(e.coeff_indices[k]);
      for (std::size_t i = 0; i < e.roots.size(); ++i) {
        file << e.index << ',' << coeffs << ',' << e.degree << ',' << e.roots.roots[i].real() << ','
             << e.roots.roots[i].imag() << ',' << e.roots.residuals[i] << ','
             << e.roots.multiplicity[i] << '\n';
      }
    }
  }
  for (const auto& e : entries) total += e.roots.size();
  if (cfg.json) {
    auto j = envelope(cfg);
    j["n"] = cfg.n;
    j["N"] = cfg.n_terms;
    j["polynomials"] = entries.size();
    j["roots"] = total;
    j["output"] = cfg.output;
    emit(out, j);
  } else {
    out << entries.size() << " polynomials, " << total << " roots";
    if (!cfg.output.empty()) out << " -> " << cfg.output;
    out << '\n';
  }
  return kOk;
}

int run_join(const RunConfig& cfg, std::ostream& out) {
  const auto g = omega_set(cfg.n);
  if (cfg.indices.size() != cfg.target.size())
    fail(ErrorKind::kPrecondition, "--a and --b need the same length");
  const auto a = GPoly::from_indices(g, checked_indices(cfg.indices, g, "--a"));
  const auto b = GPoly::from_indices(g, checked_indices(cfg.target, g, "--b"));
  const auto cert = check_star(g, resolve_workers(cfg.workers));
  const auto seq = join_sequence(a, b, cert);
  const auto report = verify_join(seq, g, cfg.indices.size() + 1);
  if (cfg.json) {
    auto j = envelope(cfg);
    j["sequence"] = to_json(seq, g);
    j["verified"] = {{"members", report.members},     {"in_ball", report.in_ball},
                     {"products", report.products},   {"truncations", report.truncations},
                     {"endpoints", report.endpoints}, {"ok", report.ok()}};
    emit(out, j);
  } else {
    out << "join of length " << seq.length() << ", verification "
        << (report.ok() ? "passed" : "FAILED") << '\n';
  }
  return report.ok() ? kOk : kRefuted;
}

int run_chain(const RunConfig& cfg, std::ostream& out) {
  const auto g = omega_set(cfg.n);
  const auto a = GPoly::from_indices(g, checked_indices(cfg.indices, g, "coefficient"));
  std::size_t degree = 0;
  const auto roots = trimmed_roots(a, cfg, degree);
  if (roots.size() == 0) fail(ErrorKind::kPrecondition, "polynomial has no roots");
  std::size_t pick = 0;
  if (cfg.root) {
    if (*cfg.root >= roots.size()) fail(ErrorKind::kPrecondition, "--root is out of range");
    pick = *cfg.root;
  } else {
    for (std::size_t i = 1; i < roots.size(); ++i)
      if (std::abs(roots.roots[i]) < std::abs(roots.roots[pick])) pick = i;
  }
  const auto cert = check_star(g, resolve_workers(cfg.workers));
  ChainOptions opts;
  opts.eps = cfg.eps;
  opts.radius = cfg.radius;
  opts.n_cap = cfg.n_cap;
  opts.rouche.samples = cfg.rouche_samples;
  opts.rouche.tol = cfg.root_tol;
  const auto chain = connect_to_annulus(a, roots.roots[pick], cert, opts);
  const auto report = verify_chain(chain, cfg.eps, cfg.root_tol);
  if (cfg.json) {
    auto j = envelope(cfg);
    j["start"] = complex_json(roots.roots[pick]);
    j["chain"] = to_json(chain);
    j["verified"] = {{"ok", report.ok()}, {"detail", report.detail}};
    emit(out, j);
  } else {
    out << "chain of " << chain.points.size() << " points from " << roots.roots[pick] << " to "
        << chain.points.back().z << ", N = " << chain.n_terms << ", verification "
        << (report.ok() ? "passed" : "FAILED: " + report.detail) << '\n';
  }
  return report.ok() ? kOk : kRefuted;
}

std::string image_format(const RunConfig& cfg) {
  if (!cfg.format.empty()) return cfg.format;
  return std::filesystem::path(cfg.output).extension() == ".png" ? "png" : "ppm";
}

int run_render(const RunConfig& cfg, std::ostream& out) {
  MembershipOptions opts;
  opts.depth = cfg.depth;
  opts.budget = cfg.budget;
  const Region region{cfg.region[0], cfg.region[1], cfg.region[2], cfg.region[3]};
  const auto raster =
      render_locus(cfg.n, region, cfg.width, cfg.height, opts, resolve_workers(cfg.workers));
  const std::string path = cfg.output.empty() ? "locus.ppm" : cfg.output;
  const std::string format = image_format(cfg);
  if (format == "png") {
    if (!write_png(raster, path)) fail(ErrorKind::kPrecondition, "built without PNG support");
  } else {
    write_ppm(raster, path);
  }
  if (!cfg.dump.empty()) open_output(cfg.dump) << to_json(raster).dump() << '\n';
  std::array<std::size_t, 3> tally{};
  for (auto c : raster.codes) ++tally[c];
  if (cfg.json) {
    auto j = envelope(cfg);
    j["n"] = cfg.n;
    j["width"] = cfg.width;
    j["height"] = cfg.height;
    j["output"] = path;
    j["format"] = format;
    j["counts"] = {{"out", tally[0]}, {"unknown", tally[1]}, {"in", tally[2]}};
    emit(out, j);
  } else {
    out << path << ": in " << tally[2] << ", unknown " << tally[1] << ", out " << tally[0] << '\n';
  }
  return kOk;
}

int run_attractor(const RunConfig& cfg, std::ostream& out) {
  const auto cloud = attractor_points(cfg.n, {cfg.lambda_re, cfg.lambda_im}, cfg.count, cfg.seed);
  const std::string path = cfg.output.empty() ? "attractor.csv" : cfg.output;
  auto file = open_output(path);
  write_csv(cloud, file);
  if (cfg.json) {
    auto j = envelope(cfg);
    j["n"] = cfg.n;
    j["lambda"] = complex_json(cloud.lambda);
    j["points"] = cloud.points.size();
    j["seed"] = cloud.seed;
    j["output"] = path;
    emit(out, j);
  } else {
    out << cloud.points.size() << " points -> " << path << '\n';
  }
  return kOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNumericFailure:
    case ErrorKind::kNoRootWithinEps:
      return kNumeric;
    case ErrorKind::kCannotJoin:
    case ErrorKind::kChainFailed:
    case ErrorKind::kInternal:
      return kRefuted;
    default:
      return kUsage;
  }
}

}  // namespace

std::size_t resolve_workers(const std::optional<std::size_t>& flag) {
  if (flag && *flag > 0) return *flag;
  return default_workers();
}

int cli_run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Exact and numeric experiments on fractal n-gon connectedness loci", "fngon"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_help_all_flag("--help-all", "Expand all help");

  auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", cfg.json, "Machine-readable output");
    sub->add_option("--workers", cfg.workers, "Worker threads (else FNGON_WORKERS, else hardware)")
        ->check(CLI::PositiveNumber);
  };
  auto order = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "Polygon order n")->check(CLI::Range(2, 4096));
  };
  auto root_flags = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.root_tol, "Root residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--cluster-radius", cfg.cluster_radius, "Multiplicity cluster radius")
        ->check(CLI::PositiveNumber);
  };

  auto* omega = app.add_subcommand("omega", "Emit Omega_n in both constructions");
  order(omega), common(omega);

  auto* star = app.add_subcommand("check-star", "Decide condition (*) for Omega_n");
  order(star), common(star);

  auto* lemmas = app.add_subcommand("lemmas", "Sweep the sine-product identities");
  lemmas->add_option("--max-odd", cfg.max_odd, "Largest odd n")->check(CLI::Range(3, 100000));
  lemmas->add_option("--max-even", cfg.max_even, "Largest even n")->check(CLI::Range(2, 100000));
  lemmas->add_option("--tol", cfg.lemma_tol, "Float residual tolerance");
  common(lemmas);

  auto* roots = app.add_subcommand("roots", "Certified roots of one polynomial over Omega_n");
  order(roots), common(roots), root_flags(roots);
  roots->add_option("--indices", cfg.indices, "Coefficient indices a_1..a_(N-1), comma separated")
      ->required()
      ->delimiter(',');

  auto* zeroset = app.add_subcommand("zeroset", "Enumerate the zero set Y_N to CSV");
  order(zeroset), common(zeroset), root_flags(zeroset);
  zeroset->add_option("--N", cfg.n_terms, "Number of terms N")->check(CLI::Range(2, 64));
  zeroset->add_option("--budget", cfg.zeroset_budget, "Maximum number of polynomials");
  zeroset->add_option("-o,--output", cfg.output, "CSV path");

  auto* join = app.add_subcommand("join", "Join two polynomials of Q_N");
  order(join), common(join);
  join->add_option("--a", cfg.indices, "Indices of A")->required()->delimiter(',');
  join->add_option("--b", cfg.target, "Indices of B")->required()->delimiter(',');

  auto* chain = app.add_subcommand("chain", "Connect a root to the annulus by an eps-chain");
  order(chain), common(chain);
  chain->add_option("--indices", cfg.indices, "Coefficient indices of A")->required()->delimiter(',');
  chain->add_option("--root", cfg.root, "Root position in sorted order (default: smallest modulus)");
  chain->add_option("--eps", cfg.eps, "Hop bound")->check(CLI::PositiveNumber);
  chain->add_option("--R", cfg.radius, "Inner annulus radius (default 1/sqrt(n) + 0.01)");
  chain->add_option("--n-cap", cfg.n_cap, "Largest N before giving up");
  chain->add_option("--samples", cfg.rouche_samples, "Circle samples per Rouche check");
  chain->add_option("--tol", cfg.root_tol, "Root residual tolerance")->check(CLI::PositiveNumber);

  auto* render = app.add_subcommand("render", "Rasterize the connectedness locus M_n");
  order(render), common(render);
  render->add_option("--width", cfg.width, "Pixels")->check(CLI::Range(1, 1 << 15));
  render->add_option("--height", cfg.height, "Pixels")->check(CLI::Range(1, 1 << 15));
  render->add_option("--depth", cfg.depth, "Search depth")->check(CLI::Range(0, 4096));
  render->add_option("--budget", cfg.budget, "States per pixel");
  render->add_option("--region", cfg.region, "re_min,re_max,im_min,im_max")->delimiter(',');
  render->add_option("-o,--output", cfg.output, "Image path (default locus.ppm)");
  render->add_option("--format", cfg.format, "ppm or png")->check(CLI::IsMember({"ppm", "png"}));
  render->add_option("--dump", cfg.dump, "Per-pixel JSON path");

  auto* attractor = app.add_subcommand("attractor", "Chaos-game point cloud");
  order(attractor), common(attractor);
  attractor->add_option("--re", cfg.lambda_re, "Re lambda");
  attractor->add_option("--im", cfg.lambda_im, "Im lambda");
  attractor->add_option("--count", cfg.count, "Points")->check(CLI::PositiveNumber);
  attractor->add_option("--seed", cfg.seed, "Generator seed");
  attractor->add_option("-o,--output", cfg.output, "CSV path (default attractor.csv)");

  try {
    std::vector<std::string> args(argv.rbegin(), argv.rend() - (argv.empty() ? 0 : 1));
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.region[0] >= cfg.region[1] || cfg.region[2] >= cfg.region[3]) {
    err << "--region needs re_min < re_max and im_min < im_max\n";
    return kUsage;
  }

  try {
    if (cfg.subcommand == "omega") return run_omega(cfg, out);
    if (cfg.subcommand == "check-star") return run_check_star(cfg, out);
    if (cfg.subcommand == "lemmas") return run_lemmas(cfg, out);
    if (cfg.subcommand == "roots") return run_roots(cfg, out);
    if (cfg.subcommand == "zeroset") return run_zeroset(cfg, out);
    if (cfg.subcommand == "join") return run_join(cfg, out);
    if (cfg.subcommand == "chain") return run_chain(cfg, out);
    if (cfg.subcommand == "render") return run_render(cfg, out);
    if (cfg.subcommand == "attractor") return run_attractor(cfg, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}

int cli_run(int argc, char** argv) {
  return cli_run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace fngon::cli
