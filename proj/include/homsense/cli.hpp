#pragma once

// Command-line surface. Subcommands: sample, estimate, fisher, qfi, sweep,
// fit, verify. A JSON config file supplies defaults; flags override it. The
// sensing geometry comes either from kappa directly or from physical inputs
// (pooled covariance sigma plus lab-frame delta_k), never both.
//
// Exit codes: 0 ok, 2 input error, 3 non-convergence or numeric failure,
// 4 verification failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "homsense/experiments.hpp"
#include "homsense/fisher.hpp"
#include "homsense/geometry.hpp"
#include "homsense/mle.hpp"
#include "homsense/model.hpp"
#include "homsense/oracle.hpp"
#include "homsense/sampler.hpp"

namespace homsense {
namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitVerification = 4;

namespace detail_cli {

struct Options {
  std::string config_path;
  std::string out_path;
  std::string in_path;
  std::string kappa_str;
  std::string spherical_str;
  std::string format = "csv";
  std::string basis = "spherical";
  std::optional<std::uint64_t> seed;
  std::optional<double> nu;
  std::optional<double> gamma;
  std::optional<double> resolution;
  std::optional<std::size_t> n;
  std::optional<std::size_t> replicates;
  std::optional<int> axis;
  double tol_scale = 1.0;
};

inline Vec3 parse_triple(const std::string& text, const char* what) {
  std::istringstream in(text);
  Vec3 out;
  char sep = 0;
  if (!(in >> out[0] >> sep >> out[1] >> sep >> out[2])) {
    throw std::invalid_argument(std::string(what) + ": expected three comma-separated numbers, got '" +
                                text + "'");
  }
  return out;
}

inline nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  nlohmann::json cfg;
  in >> cfg;
  return cfg;
}

inline CovarianceMatrix covariance_from_json(const nlohmann::json& j) {
  if (j.contains("matrix")) {
    const auto& m = j.at("matrix");
    if (!m.is_array() || m.size() != 9) {
      throw std::invalid_argument("sigma.matrix must be a row-major array of 9 numbers");
    }
    std::array<double, 9> a{};
    for (std::size_t i = 0; i < 9; ++i) a[i] = m.at(i).get<double>();
    return CovarianceMatrix::from_row_major(a);
  }
  return CovarianceMatrix::from_sigmas(j.at("sigma_x").get<double>(),
                                       j.at("sigma_y").get<double>(),
                                       j.at("sigma_t").get<double>());
}

inline KappaVector kappa_from_config(const nlohmann::json& cfg) {
  const bool has_kappa = cfg.contains("kappa");
  const bool has_physical = cfg.contains("sigma") || cfg.contains("delta_k");
  if (has_kappa && has_physical) {
    throw std::invalid_argument("config must provide exactly one of kappa or (sigma, delta_k)");
  }
  if (has_kappa) {
    const auto& k = cfg.at("kappa");
    if (!k.is_array() || k.size() != 3) {
      throw std::invalid_argument("config kappa must be an array of 3 numbers");
    }
    return KappaVector(k.at(0).get<double>(), k.at(1).get<double>(), k.at(2).get<double>());
  }
  if (!cfg.contains("sigma") || !cfg.contains("delta_k")) {
    throw std::invalid_argument("config must provide both sigma and delta_k for physical input");
  }
  const CovarianceMatrix pooled = covariance_from_json(cfg.at("sigma"));
  const auto& dk = cfg.at("delta_k");
  const Vec3 delta_k = delta_k_from_lab(dk.at("dk_x").get<double>(), dk.at("dk_y").get<double>(),
                                        dk.at("domega_over_c").get<double>());
  return kappa_from_physical(pooled, delta_k);
}

inline SensingConfig resolve_sensing(const Options& opt, const nlohmann::json& cfg) {
  SensingConfig out;
  out.nu = opt.nu ? *opt.nu : cfg.value("nu", 1.0);
  out.gamma = opt.gamma ? *opt.gamma : cfg.value("gamma", 1.0);
  if (!opt.kappa_str.empty() && !opt.spherical_str.empty()) {
    throw std::invalid_argument("--kappa and --spherical are mutually exclusive");
  }
  if (!opt.kappa_str.empty()) {
    out.kappa = parse_triple(opt.kappa_str, "--kappa");
  } else if (!opt.spherical_str.empty()) {
    const Vec3 s = parse_triple(opt.spherical_str, "--spherical");
    out.kappa = kappa_from_spherical({s[0], s[1], s[2]});
  } else if (cfg.contains("kappa") || cfg.contains("sigma") || cfg.contains("delta_k")) {
    out.kappa = kappa_from_config(cfg);
  }
  out.validate();
  return out;
}

inline std::uint64_t resolve_seed(const Options& opt, const nlohmann::json& cfg) {
  if (opt.seed) return *opt.seed;
  return cfg.value("seed", std::uint64_t{0});
}

inline std::optional<double> resolve_resolution(const Options& opt, const nlohmann::json& cfg) {
  if (opt.resolution) return *opt.resolution;
  if (cfg.contains("resolution")) return cfg.at("resolution").get<double>();
  return std::nullopt;
}

// Writes to the path or, for an empty path, to stdout.
inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
  out << text;
  if (!out.good()) throw std::invalid_argument("failed writing output file '" + path + "'");
}

inline nlohmann::json matrix_to_json(const Mat3& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
  }
  return rows;
}

inline nlohmann::json estimation_to_json(const EstimationResult& est, std::uint64_t seed) {
  return nlohmann::json{
      {"schema", "homsense-estimate-v1"},
      {"seed", seed},
      {"kappa_hat", {est.kappa_hat[0], est.kappa_hat[1], est.kappa_hat[2]}},
      {"spherical_hat",
       {{"magnitude", est.spherical_hat.magnitude},
        {"theta", est.spherical_hat.theta},
        {"phi", est.spherical_hat.phi}}},
      {"n_used", est.n_used},
      {"converged", est.converged},
      {"iterations", est.iterations},
      {"score_norm", est.score_norm},
      {"loglik", est.loglik},
      {"note", est.note}};
}

inline nlohmann::json fisher_to_json(const FisherMatrix& fm, const SensingConfig& sensing,
                                     std::uint64_t seed) {
  return nlohmann::json{
      {"schema", "homsense-fisher-v1"},
      {"seed", seed},
      {"basis", fm.basis == FisherBasis::Spherical ? "spherical" : "cartesian"},
      {"entries", matrix_to_json(fm.entries)},
      {"quad_error", fm.quad_error},
      {"nu", sensing.nu},
      {"gamma", sensing.gamma},
      {"kappa", {sensing.kappa[0], sensing.kappa[1], sensing.kappa[2]}}};
}

inline EventBatch read_batch_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open batch file '" + path + "'");
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json j;
    in >> j;
    return batch_from_json(j);
  }
  return read_batch_csv(in);
}

inline int cmd_sample(const Options& opt) {
  const nlohmann::json cfg = load_config(opt.config_path);
  const SensingConfig sensing = resolve_sensing(opt, cfg);
  const std::uint64_t seed = resolve_seed(opt, cfg);
  const std::size_t n = opt.n ? *opt.n : cfg.value("n", std::size_t{1000});
  const EventBatch batch = sample_batch(n, sensing, seed, resolve_resolution(opt, cfg));

  std::size_t tally[4] = {0, 0, 0, 0};
  for (const auto& ev : batch.events) tally[static_cast<int>(ev.outcome)]++;

  std::ostringstream body;
  if (opt.format == "json") {
    body << batch_to_json(batch).dump(2) << "\n";
  } else {
    write_batch_csv(batch, body);
  }
  write_text(opt.out_path, body.str());

  std::ostream& log = opt.out_path.empty() ? std::cerr : std::cout;
  log << "sampled " << n << " events (seed " << seed << "): "
      << tally[static_cast<int>(Outcome::Coincidence)] << " coincidence, "
      << tally[static_cast<int>(Outcome::Bunch)] << " bunch, "
      << tally[static_cast<int>(Outcome::OnePhoton)] << " one_photon, "
      << tally[static_cast<int>(Outcome::NoDetection)] << " no_detection\n";
  return kExitOk;
}

inline int cmd_estimate(const Options& opt) {
  if (opt.in_path.empty()) throw std::invalid_argument("estimate: --in batch file is required");
  const EventBatch batch = read_batch_file(opt.in_path);
  const double nu = opt.nu ? *opt.nu : batch.config.nu;

  nlohmann::json out;
  bool converged = false;
  if (opt.axis) {
    const int axis = *opt.axis;
    const double nu_eff = effective_distinguishability(nu, batch.config.kappa, axis);
    const auto projected = project_batch(batch, axis);
    const Estimation1dResult est = estimate_1d(projected, nu_eff);
    converged = est.converged;
    out = nlohmann::json{{"schema", "homsense-estimate1d-v1"},
                         {"seed", batch.seed},
                         {"axis", axis},
                         {"nu_eff", nu_eff},
                         {"param_hat", est.param_hat},
                         {"n_used", est.n_used},
                         {"converged", est.converged},
                         {"iterations", est.iterations},
                         {"score_norm", est.score_norm},
                         {"loglik", est.loglik},
                         {"note", est.note}};
  } else {
    std::optional<KappaVector> init;
    if (!opt.kappa_str.empty()) init = parse_triple(opt.kappa_str, "--kappa");
    const EstimationResult est = estimate_3d(batch, nu, init);
    converged = est.converged;
    out = estimation_to_json(est, batch.seed);
  }
  write_text(opt.out_path, out.dump(2) + "\n");
  return converged ? kExitOk : kExitNonConvergence;
}

inline int cmd_fisher(const Options& opt) {
  const nlohmann::json cfg = load_config(opt.config_path);
  const SensingConfig sensing = resolve_sensing(opt, cfg);
  const std::uint64_t seed = resolve_seed(opt, cfg);
  FisherMatrix fm;
  if (opt.basis == "cartesian") {
    fm = fisher_cartesian(sensing.nu, sensing.gamma, sensing.kappa);
  } else if (opt.basis == "spherical") {
    fm = fisher_spherical(sensing.nu, sensing.gamma, spherical_from_kappa(sensing.kappa));
  } else {
    throw std::invalid_argument("--basis must be spherical or cartesian");
  }
  write_text(opt.out_path, fisher_to_json(fm, sensing, seed).dump(2) + "\n");
  return kExitOk;
}

inline int cmd_qfi(const Options& opt) {
  const nlohmann::json cfg = load_config(opt.config_path);
  const SensingConfig sensing = resolve_sensing(opt, cfg);
  const std::uint64_t seed = resolve_seed(opt, cfg);
  const FisherMatrix fm = qfi(spherical_from_kappa(sensing.kappa));
  nlohmann::json out = fisher_to_json(fm, sensing, seed);
  out["schema"] = "homsense-qfi-v1";
  out.erase("nu");
  out.erase("gamma");
  write_text(opt.out_path, out.dump(2) + "\n");
  return kExitOk;
}

inline int cmd_sweep(const Options& opt) {
  const nlohmann::json cfg = load_config(opt.config_path);
  SweepSpec spec;
  spec.config = resolve_sensing(opt, cfg);
  spec.master_seed = resolve_seed(opt, cfg);
  spec.resolution = resolve_resolution(opt, cfg);
  spec.n_values = {200, 500, 1000, 2000, 5000};
  spec.replicates = 1000;
  if (cfg.contains("sweep")) {
    const auto& sw = cfg.at("sweep");
    if (sw.contains("n_values")) {
      spec.n_values.clear();
      for (const auto& v : sw.at("n_values")) spec.n_values.push_back(v.get<std::size_t>());
    }
    if (sw.contains("replicates")) spec.replicates = sw.at("replicates").get<std::size_t>();
    if (sw.contains("threads")) spec.threads = sw.at("threads").get<unsigned>();
  }
  if (opt.replicates) spec.replicates = *opt.replicates;

  const std::vector<SweepRow> rows = run_sweep(spec);
  std::ostringstream body;
  if (opt.format == "json") {
    nlohmann::json out{{"schema", "homsense-sweep-v1"},
                       {"seed", spec.master_seed},
                       {"rows", sweep_to_json(rows)}};
    body << out.dump(2) << "\n";
  } else {
    body << "# seed: " << spec.master_seed << "\n";
    write_sweep_csv(rows, body);
  }
  write_text(opt.out_path, body.str());

  std::ostream& log = opt.out_path.empty() ? std::cerr : std::cout;
  for (const auto& row : rows) {
    log << "n=" << row.n << " normalized_variance=(" << row.normalized_variance[0] << ", "
        << row.normalized_variance[1] << ", " << row.normalized_variance[2] << ")"
        << (row.flagged ? " [flagged]" : "") << "\n";
  }
  return kExitOk;
}

inline int cmd_fit(const Options& opt) {
  if (opt.in_path.empty()) throw std::invalid_argument("fit: --in sweep CSV file is required");
  std::ifstream in(opt.in_path);
  if (!in) throw std::invalid_argument("cannot open sweep file '" + opt.in_path + "'");
  const std::vector<SweepRow> rows = read_sweep_csv(in);
  const CrbFit fit = fit_crb_correction(rows);
  nlohmann::json out{{"schema", "homsense-fit-v1"},
                     {"rows_used", fit.rows_used},
                     {"parameters", nlohmann::json::object()}};
  for (std::size_t p = 0; p < 3; ++p) {
    out["parameters"][kSweepParameterNames[p]] = {{"a", fit.a[p]},
                                                  {"rms_residual", fit.rms_residual[p]}};
  }
  write_text(opt.out_path, out.dump(2) + "\n");
  return kExitOk;
}

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Oracle equivalence suite: equal-covariance agreement with the closed-form
// model, visibility-factor agreement for unequal covariances, quadratic
// suppression of the equal-covariance approximation error, normalization of
// the reduced closed form, and beam-splitter unitarity.
inline std::vector<VerifyCheck> run_verification(std::uint64_t seed, double tol_scale) {
  std::vector<VerifyCheck> checks;
  Rng rng(seed);

  const Mat3 base = Mat3::Identity();
  const CovarianceMatrix half_pooled(0.5 * base);
  const Vec3 k1(1.1, -0.4, 2.0);
  const Vec3 k2(0.3, 0.2, -0.5);
  const double nu = 0.7;

  // Equal covariances: the numeric marginalization must match the whitened
  // model density divided by sqrt(det pooled).
  {
    const oracle::GaussianWavePacket p1(half_pooled, k1);
    const oracle::GaussianWavePacket p2(half_pooled, k2);
    const oracle::PairState state(p1, p2, nu);
    const CovarianceMatrix pooled(base);
    SensingConfig sensing;
    sensing.nu = nu;
    sensing.gamma = 1.0;
    sensing.kappa = pooled.sqrt() * (k1 - k2);
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
      Vec3 delta_r = rng.normal3();
      const Outcome x = rng.uniform() < 0.5 ? Outcome::Coincidence : Outcome::Bunch;
      const double numeric = oracle::reduced_probability_numeric(state, x, delta_r);
      const Vec3 rho = pooled.inverse_sqrt() * delta_r;
      const double closed = prob_density(x, rho, sensing) / std::sqrt(pooled.determinant());
      worst = std::max(worst, std::abs(numeric - closed) / closed);
    }
    checks.push_back({"equal_covariance_model_agreement", worst, 1e-5 * tol_scale,
                      worst <= 1e-5 * tol_scale});
  }

  // Unequal covariances: the numeric marginalization must match the closed
  // form carrying the visibility factor.
  Mat3 bump = Mat3::Zero();
  bump(0, 0) = 0.30;
  bump(1, 1) = -0.10;
  bump(2, 2) = 0.20;
  bump(0, 1) = bump(1, 0) = 0.05;
  {
    const oracle::GaussianWavePacket p1(half_pooled, k1);
    const oracle::GaussianWavePacket p2(CovarianceMatrix(0.5 * base + bump), k2);
    const oracle::PairState state(p1, p2, nu);
    double worst = 0.0;
    for (int i = 0; i < 15; ++i) {
      Vec3 delta_r = rng.normal3();
      const Outcome x = rng.uniform() < 0.5 ? Outcome::Coincidence : Outcome::Bunch;
      const double numeric = oracle::reduced_probability_numeric(state, x, delta_r);
      const double closed = oracle::reduced_probability_closed(state, x, delta_r);
      worst = std::max(worst, std::abs(numeric - closed));
    }
    checks.push_back({"visibility_closed_form_agreement", worst, 1e-7 * tol_scale,
                      worst <= 1e-7 * tol_scale});
  }

  // The equal-covariance approximation deviates quadratically in the
  // covariance perturbation: halving epsilon shrinks the worst deviation by
  // about 4.
  {
    std::vector<Vec3> points;
    for (int i = 0; i < 12; ++i) points.push_back(rng.normal3());
    const auto deviation = [&](double eps) {
      const oracle::GaussianWavePacket p1(half_pooled, k1);
      const oracle::GaussianWavePacket p2(CovarianceMatrix(0.5 * base + eps * bump), k2);
      const oracle::PairState state(p1, p2, nu);
      double worst = 0.0;
      for (const Vec3& delta_r : points) {
        for (const Outcome x : {Outcome::Coincidence, Outcome::Bunch}) {
          const double numeric = oracle::reduced_probability_numeric(state, x, delta_r);
          const double approx = oracle::reduced_probability_approx(state, x, delta_r);
          worst = std::max(worst, std::abs(numeric - approx));
        }
      }
      return worst;
    };
    const double dev_full = deviation(0.2);
    const double dev_half = deviation(0.1);
    const double ratio = dev_full / dev_half;
    checks.push_back(
        {"covariance_perturbation_quadratic", ratio, 0.0, ratio >= 3.0 && ratio <= 5.0});
  }

  // Reduced closed form integrates to one over outcomes and delta_r.
  {
    const oracle::GaussianWavePacket p1(CovarianceMatrix(0.5 * base + 0.5 * bump), k1);
    const oracle::GaussianWavePacket p2(half_pooled, k2);
    const oracle::PairState state(p1, p2, nu);
    const oracle::ReducedClosedForm closed(state);
    const Vec3 lo(-9.0, -9.0, -9.0);
    const Vec3 hi(9.0, 9.0, 9.0);
    QuadratureSpec spec;
    spec.tol = 1e-8;
    const auto f = [&](const Vec3& delta_r) {
      return closed.exact(Outcome::Coincidence, delta_r) +
             closed.exact(Outcome::Bunch, delta_r);
    };
    const double total = integrate_box_3d(f, lo, hi, spec).value;
    const double dev = std::abs(total - 1.0);
    checks.push_back({"reduced_closed_normalization", dev, 1e-6 * tol_scale,
                      dev <= 1e-6 * tol_scale});
  }

  // Beam splitter: orthogonal with unit determinant, entries as printed.
  {
    const Eigen::Matrix2d u = oracle::beam_splitter_matrix();
    const double dev = (u.transpose() * u - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() +
                       std::abs(u.determinant() - 1.0);
    checks.push_back({"beam_splitter_unitary", dev, 1e-14, dev <= 1e-14});
  }

  return checks;
}

inline int cmd_verify(const Options& opt) {
  const nlohmann::json cfg = load_config(opt.config_path);
  const std::uint64_t seed = resolve_seed(opt, cfg);
  const std::vector<VerifyCheck> checks = run_verification(seed, opt.tol_scale);
  bool all_pass = true;
  std::ostringstream body;
  for (const auto& c : checks) {
    all_pass = all_pass && c.pass;
    body << (c.pass ? "PASS" : "FAIL") << " " << c.name << " (value " << c.value;
    if (c.bound > 0.0) body << ", bound " << c.bound;
    body << ")\n";
  }
  body << (all_pass ? "verification passed" : "verification FAILED") << " (seed " << seed
       << ")\n";
  write_text(opt.out_path, body.str());
  return all_pass ? kExitOk : kExitVerification;
}

}  // namespace detail_cli

inline int run(int argc, const char* const* argv) {
  detail_cli::Options opt;
  CLI::App app{"two-photon interference momentum-difference sensing engine"};
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON config file");
    sub->add_option("--seed", opt.seed, "RNG master seed");
    sub->add_option("--out", opt.out_path, "output file (default stdout)");
    sub->add_option("--nu", opt.nu, "distinguishability in [0,1]");
    sub->add_option("--gamma", opt.gamma, "detector efficiency in [0,1]");
    sub->add_option("--kappa", opt.kappa_str, "kappa as x,y,z");
    sub->add_option("--spherical", opt.spherical_str, "kappa as magnitude,theta,phi");
  };

  CLI::App* sample = app.add_subcommand("sample", "generate a detection-event batch");
  add_common(sample);
  sample->add_option("--n", opt.n, "number of events");
  sample->add_option("--resolution", opt.resolution, "detector grid pitch for rho");
  sample->add_option("--format", opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* estimate = app.add_subcommand("estimate", "maximum-likelihood estimate from a batch");
  add_common(estimate);
  estimate->add_option("--in", opt.in_path, "batch file (CSV or JSON)")->required();
  estimate->add_option("--axis", opt.axis, "estimate the single-axis marginal parameter")
      ->check(CLI::Range(1, 3));

  CLI::App* fisher = app.add_subcommand("fisher", "classical Fisher information matrix");
  add_common(fisher);
  fisher->add_option("--basis", opt.basis, "spherical or cartesian")
      ->check(CLI::IsMember({"spherical", "cartesian"}));

  CLI::App* qfi_cmd = app.add_subcommand("qfi", "quantum Fisher information matrix");
  add_common(qfi_cmd);

  CLI::App* sweep = app.add_subcommand("sweep", "bias/variance Monte Carlo sweep");
  add_common(sweep);
  sweep->add_option("--replicates", opt.replicates, "replicates per sample size");
  sweep->add_option("--resolution", opt.resolution, "detector grid pitch for rho");
  sweep->add_option("--format", opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* fit = app.add_subcommand("fit", "fit 1 + A/N to a sweep table");
  fit->add_option("--in", opt.in_path, "sweep CSV file")->required();
  fit->add_option("--out", opt.out_path, "output file (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "run the oracle equivalence suite");
  add_common(verify);
  verify->add_option("--tol", opt.tol_scale, "tolerance scale factor");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (sample->parsed()) return detail_cli::cmd_sample(opt);
    if (estimate->parsed()) return detail_cli::cmd_estimate(opt);
    if (fisher->parsed()) return detail_cli::cmd_fisher(opt);
    if (qfi_cmd->parsed()) return detail_cli::cmd_qfi(opt);
    if (sweep->parsed()) return detail_cli::cmd_sweep(opt);
    if (fit->parsed()) return detail_cli::cmd_fit(opt);
    if (verify->parsed()) return detail_cli::cmd_verify(opt);
  } catch (const QuadratureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

inline int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace cli
}  // namespace homsense
