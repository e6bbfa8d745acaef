#pragma once

// Bias/variance Monte Carlo campaigns: normalized estimator variance against
// sample size, bias fractions, and the weighted fit of the 1 + A/N
// finite-sample correction to the Cramer-Rao bound.
//
// Replicates use substream seeds derived from the master seed, so tables are
// bit-identical for a fixed master seed no matter how replicates are
// scheduled. Results are stored per replicate and reduced in index order.

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "homsense/fisher.hpp"
#include "homsense/mle.hpp"
#include "homsense/sampler.hpp"

namespace homsense {

struct SweepSpec {
  SensingConfig config;
  std::vector<std::size_t> n_values;
  std::size_t replicates = 10000;
  std::uint64_t master_seed = 0;
  std::optional<double> resolution;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const {
    config.validate();
    if (n_values.empty()) throw std::invalid_argument("SweepSpec: n_values must be nonempty");
    for (std::size_t i = 0; i + 1 < n_values.size(); ++i) {
      if (n_values[i] >= n_values[i + 1]) {
        throw std::invalid_argument("SweepSpec: n_values must be strictly increasing");
      }
    }
    if (replicates < 100) throw std::invalid_argument("SweepSpec: replicates must be >= 100");
  }
};

inline constexpr std::array<const char*, 3> kSweepParameterNames = {"magnitude", "theta", "phi"};

struct SweepRow {
  std::size_t n = 0;
  std::array<double, 3> mean{};
  std::array<double, 3> variance{};
  std::array<double, 3> normalized_variance{};  // variance * n * F_aa at truth
  std::array<double, 3> bias_fraction{};        // (mean - truth) / truth (absolute if truth ~ 0)
  std::size_t replicates_used = 0;
  std::size_t failures = 0;
  bool flagged = false;  // failure rate above 1%
};

namespace detail {

// Pairwise summation in index order: order-independent across schedulers
// because the inputs are stored per replicate before reduction.
inline double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

}  // namespace detail

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const SphericalMomentum truth = spherical_from_kappa(spec.config.kappa);
  const FisherMatrix fisher = fisher_spherical(spec.config.nu, spec.config.gamma, truth);

  unsigned threads = spec.threads == 0 ? std::thread::hardware_concurrency() : spec.threads;
  if (threads == 0) threads = 1;

  std::vector<SweepRow> rows;
  rows.reserve(spec.n_values.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t n_index = 0; n_index < spec.n_values.size(); ++n_index) {
    const std::size_t n = spec.n_values[n_index];
    const std::size_t reps = spec.replicates;
    // Per-replicate slots; NaN marks a failed estimate.
    std::vector<std::array<double, 3>> estimates(reps, {nan, nan, nan});

    const auto worker = [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) {
        const std::uint64_t seed =
            substream_seed(spec.master_seed, n_index * spec.replicates + r);
        const EventBatch batch = sample_batch(n, spec.config, seed, spec.resolution);
        try {
          const EstimationResult est = estimate_3d(batch, spec.config.nu, spec.config.kappa);
          if (!est.converged) continue;
          // The likelihood is even in kappa, so the estimate carries a sign
          // ambiguity; resolve it toward the known truth before comparing
          // spherical parameters (it matters when the truth has a component
          // near the canonical sign boundary).
          KappaVector aligned = est.kappa_hat;
          if ((aligned + spec.config.kappa).squaredNorm() <
              (aligned - spec.config.kappa).squaredNorm()) {
            aligned = -aligned;
          }
          const SphericalMomentum hat = spherical_from_kappa(aligned);
          estimates[r] = {hat.magnitude, hat.theta, hat.phi};
        } catch (const std::invalid_argument&) {
          continue;  // too few two-photon events in this replicate
        }
      }
    };

    if (threads <= 1 || reps < 2 * threads) {
      worker(0, reps);
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (reps + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(reps, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(worker, begin, end);
      }
      for (auto& th : pool) th.join();
    }

    SweepRow row;
    row.n = n;
    std::vector<double> values;
    values.reserve(reps);
    const std::array<double, 3> truth_values = {truth.magnitude, truth.theta, truth.phi};
    std::size_t used = 0;
    for (int p = 0; p < 3; ++p) {
      values.clear();
      for (const auto& e : estimates) {
        if (!std::isnan(e[static_cast<std::size_t>(p)])) {
          values.push_back(e[static_cast<std::size_t>(p)]);
        }
      }
      used = values.size();
      if (used < 2) {
        throw std::runtime_error("run_sweep: fewer than 2 converged replicates at n = " +
                                 std::to_string(n));
      }
      const double mean = detail::pairwise_sum(values.data(), used) / static_cast<double>(used);
      for (auto& v : values) {
        const double d = v - mean;
        v = d * d;
      }
      const double var =
          detail::pairwise_sum(values.data(), used) / static_cast<double>(used - 1);
      row.mean[static_cast<std::size_t>(p)] = mean;
      row.variance[static_cast<std::size_t>(p)] = var;
      row.normalized_variance[static_cast<std::size_t>(p)] =
          var * static_cast<double>(n) * fisher.entries(p, p);
      const double t = truth_values[static_cast<std::size_t>(p)];
      row.bias_fraction[static_cast<std::size_t>(p)] =
          std::abs(t) > 1e-12 ? (mean - t) / t : mean;
    }
    row.replicates_used = used;
    row.failures = reps - used;
    row.flagged =
        static_cast<double>(row.failures) > 0.01 * static_cast<double>(reps);
    rows.push_back(row);
  }
  return rows;
}

struct CrbFit {
  std::array<double, 3> a{};             // per-parameter finite-sample coefficient
  std::array<double, 3> rms_residual{};  // of normalized_variance - (1 + A/N)
  std::size_t rows_used = 0;
};

// Weighted least squares of (normalized_variance - 1) against 1/N through the
// origin; weights replicates / (2 nv^2), the inverse sampling variance of a
// variance estimate.
inline CrbFit fit_crb_correction(const std::vector<SweepRow>& rows) {
  if (rows.size() < 3) {
    throw std::invalid_argument("fit_crb_correction: need at least 3 rows");
  }
  CrbFit fit;
  fit.rows_used = rows.size();
  for (std::size_t p = 0; p < 3; ++p) {
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& row : rows) {
      const double nv = row.normalized_variance[p];
      if (!(nv > 0.0) || !std::isfinite(nv)) {
        throw std::invalid_argument("fit_crb_correction: nonpositive normalized variance");
      }
      const double x = 1.0 / static_cast<double>(row.n);
      const double y = nv - 1.0;
      const double w = static_cast<double>(row.replicates_used) / (2.0 * nv * nv);
      sxy += w * x * y;
      sxx += w * x * x;
    }
    if (!(sxx > 0.0)) throw std::runtime_error("fit_crb_correction: degenerate design");
    fit.a[p] = sxy / sxx;
    double ss = 0.0;
    for (const auto& row : rows) {
      const double predicted = 1.0 + fit.a[p] / static_cast<double>(row.n);
      const double resid = row.normalized_variance[p] - predicted;
      ss += resid * resid;
    }
    fit.rms_residual[p] = std::sqrt(ss / static_cast<double>(rows.size()));
  }
  return fit;
}

inline constexpr const char* kSweepCsvSchema = "homsense-sweep-v1";

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "# schema: " << kSweepCsvSchema << "\n";
  out << "n,parameter,mean,variance,normalized_variance,bias_fraction,replicates_used,failures,"
         "flagged\n";
  for (const auto& row : rows) {
    for (std::size_t p = 0; p < 3; ++p) {
      out << row.n << ',' << kSweepParameterNames[p] << ',' << detail::format_double(row.mean[p])
          << ',' << detail::format_double(row.variance[p]) << ','
          << detail::format_double(row.normalized_variance[p]) << ','
          << detail::format_double(row.bias_fraction[p]) << ',' << row.replicates_used << ','
          << row.failures << ',' << (row.flagged ? 1 : 0) << "\n";
    }
  }
}

inline std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  bool schema_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find(kSweepCsvSchema) != std::string::npos) schema_seen = true;
      continue;
    }
    if (line.rfind("n,", 0) == 0) continue;
    std::istringstream row_in(line);
    std::string field;
    std::array<std::string, 9> fields;
    std::size_t count = 0;
    while (count < fields.size() && std::getline(row_in, field, ',')) fields[count++] = field;
    if (count != fields.size()) {
      throw std::invalid_argument("read_sweep_csv: malformed row '" + line + "'");
    }
    const std::size_t n = std::stoull(fields[0]);
    std::size_t p = kSweepParameterNames.size();
    for (std::size_t i = 0; i < kSweepParameterNames.size(); ++i) {
      if (fields[1] == kSweepParameterNames[i]) p = i;
    }
    if (p == kSweepParameterNames.size()) {
      throw std::invalid_argument("read_sweep_csv: unknown parameter '" + fields[1] + "'");
    }
    if (rows.empty() || rows.back().n != n) {
      rows.push_back({});
      rows.back().n = n;
    }
    SweepRow& row = rows.back();
    row.mean[p] = std::stod(fields[2]);
    row.variance[p] = std::stod(fields[3]);
    row.normalized_variance[p] = std::stod(fields[4]);
    row.bias_fraction[p] = std::stod(fields[5]);
    row.replicates_used = std::stoull(fields[6]);
    row.failures = std::stoull(fields[7]);
    row.flagged = fields[8] == "1" || fields[8] == "true";
  }
  if (!schema_seen) throw std::invalid_argument("read_sweep_csv: missing schema comment");
  return rows;
}

inline nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows) {
    for (std::size_t p = 0; p < 3; ++p) {
      out.push_back({{"n", row.n},
                     {"parameter", kSweepParameterNames[p]},
                     {"mean", row.mean[p]},
                     {"variance", row.variance[p]},
                     {"normalized_variance", row.normalized_variance[p]},
                     {"bias_fraction", row.bias_fraction[p]},
                     {"replicates_used", row.replicates_used},
                     {"failures", row.failures},
                     {"flagged", row.flagged}});
    }
  }
  return out;
}

}  // namespace homsense
