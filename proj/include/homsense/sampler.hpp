#pragma once

// Monte Carlo generation of detection events.
//
// Sampling is exact and two-stage: the loss channel picks the detected photon
// count, then (for two-photon events) rho is drawn from the 3D standard
// normal, which is the exact marginal since zeta_A + zeta_B = 1, and the
// outcome is a Bernoulli draw with bunching probability zeta_B(rho . kappa).
//
// Batch export: CSV with columns outcome,rho1,rho2,rho3 (loss events leave
// the rho fields empty) under a versioned schema comment that also carries
// seed and config for replay; JSON equivalent with an explicit header.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "homsense/model.hpp"
#include "homsense/rng.hpp"

namespace homsense {

struct DetectionEvent {
  Outcome outcome = Outcome::NoDetection;
  std::optional<Vec3> rho;
};

struct EventBatch {
  std::vector<DetectionEvent> events;
  std::uint64_t seed = 0;
  SensingConfig config;
};

inline DetectionEvent sample_event(Rng& rng, const SensingConfig& config) {
  const double u = rng.uniform();
  const double miss = 1.0 - config.gamma;
  if (u < miss * miss) return {Outcome::NoDetection, std::nullopt};
  if (u < miss * miss + 2.0 * config.gamma * miss) return {Outcome::OnePhoton, std::nullopt};
  const Vec3 rho = rng.normal3();
  const double p_bunch = zeta(Outcome::Bunch, config.nu, rho.dot(config.kappa));
  const Outcome outcome = rng.uniform() < p_bunch ? Outcome::Bunch : Outcome::Coincidence;
  return {outcome, rho};
}

// Quantize each component to the grid {k * pitch : k integer}.
inline Vec3 quantize(const Vec3& rho, double pitch) {
  Vec3 out;
  for (int i = 0; i < 3; ++i) out[i] = pitch * std::round(rho[i] / pitch);
  return out;
}

inline EventBatch sample_batch(std::size_t n, const SensingConfig& config, std::uint64_t seed,
                               std::optional<double> resolution = std::nullopt) {
  config.validate();
  if (n == 0) throw std::invalid_argument("sample_batch: n must be positive");
  if (resolution && !(*resolution > 0.0)) {
    throw std::invalid_argument("sample_batch: resolution must be positive");
  }
  EventBatch batch;
  batch.seed = seed;
  batch.config = config;
  batch.events.reserve(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    DetectionEvent ev = sample_event(rng, config);
    if (resolution && ev.rho) ev.rho = quantize(*ev.rho, *resolution);
    batch.events.push_back(ev);
  }
  return batch;
}

namespace detail {

// Shortest decimal that round-trips the double exactly.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[32];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      std::sscanf(shorter, "%lf", &back);
      if (back == v) return shorter;
    }
  }
  return buf;
}

}  // namespace detail

inline constexpr const char* kBatchCsvSchema = "homsense-batch-v1";

inline void write_batch_csv(const EventBatch& batch, std::ostream& out) {
  out << "# schema: " << kBatchCsvSchema << "\n";
  out << "# seed: " << batch.seed << "\n";
  out << "# nu: " << detail::format_double(batch.config.nu)
      << " gamma: " << detail::format_double(batch.config.gamma)
      << " kappa: " << detail::format_double(batch.config.kappa[0]) << ","
      << detail::format_double(batch.config.kappa[1]) << ","
      << detail::format_double(batch.config.kappa[2]) << "\n";
  out << "outcome,rho1,rho2,rho3\n";
  for (const auto& ev : batch.events) {
    out << outcome_name(ev.outcome);
    if (ev.rho) {
      for (int i = 0; i < 3; ++i) out << ',' << detail::format_double((*ev.rho)[i]);
    } else {
      out << ",,,";
    }
    out << "\n";
  }
}

inline EventBatch read_batch_csv(std::istream& in) {
  EventBatch batch;
  bool schema_seen = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string key;
      while (meta >> key) {
        if (key == "schema:") {
          std::string schema;
          meta >> schema;
          if (schema != kBatchCsvSchema) {
            throw std::invalid_argument("read_batch_csv: unsupported schema '" + schema + "'");
          }
          schema_seen = true;
        } else if (key == "seed:") {
          meta >> batch.seed;
        } else if (key == "nu:") {
          meta >> batch.config.nu;
        } else if (key == "gamma:") {
          meta >> batch.config.gamma;
        } else if (key == "kappa:") {
          std::string triple;
          meta >> triple;
          std::istringstream ts(triple);
          char comma = 0;
          ts >> batch.config.kappa[0] >> comma >> batch.config.kappa[1] >> comma >>
              batch.config.kappa[2];
        }
      }
      continue;
    }
    if (line.rfind("outcome,", 0) == 0) continue;  // column header
    std::istringstream row(line);
    std::string field;
    if (!std::getline(row, field, ',')) continue;
    DetectionEvent ev;
    ev.outcome = outcome_from_name(field);
    std::array<std::string, 3> rho_fields;
    bool any = false;
    bool all = true;
    for (auto& rf : rho_fields) {
      if (!std::getline(row, rf, ',')) rf.clear();
      if (rf.empty()) {
        all = false;
      } else {
        any = true;
      }
    }
    if (ev.outcome == Outcome::Coincidence || ev.outcome == Outcome::Bunch) {
      if (!all) {
        throw std::invalid_argument("read_batch_csv: two-photon event missing rho at line " +
                                    std::to_string(line_no));
      }
      Vec3 rho;
      for (int i = 0; i < 3; ++i) {
        const std::string& rf = rho_fields[static_cast<std::size_t>(i)];
        std::size_t consumed = 0;
        try {
          rho[i] = std::stod(rf, &consumed);
        } catch (const std::exception&) {
          consumed = std::string::npos;
        }
        if (consumed != rf.size()) {
          throw std::invalid_argument("read_batch_csv: bad rho value '" + rf + "' at line " +
                                      std::to_string(line_no));
        }
      }
      ev.rho = rho;
    } else if (any) {
      throw std::invalid_argument("read_batch_csv: loss event carries rho at line " +
                                  std::to_string(line_no));
    }
    batch.events.push_back(ev);
  }
  if (!schema_seen) {
    throw std::invalid_argument("read_batch_csv: missing schema comment");
  }
  return batch;
}

inline nlohmann::json batch_to_json(const EventBatch& batch) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& ev : batch.events) {
    nlohmann::json e;
    e["outcome"] = outcome_name(ev.outcome);
    if (ev.rho) {
      e["rho"] = {(*ev.rho)[0], (*ev.rho)[1], (*ev.rho)[2]};
    } else {
      e["rho"] = nullptr;
    }
    events.push_back(std::move(e));
  }
  return nlohmann::json{{"schema", kBatchCsvSchema},
                        {"seed", batch.seed},
                        {"config",
                         {{"nu", batch.config.nu},
                          {"gamma", batch.config.gamma},
                          {"kappa",
                           {batch.config.kappa[0], batch.config.kappa[1], batch.config.kappa[2]}}}},
                        {"events", std::move(events)}};
}

inline EventBatch batch_from_json(const nlohmann::json& j) {
  if (!j.contains("schema") || j["schema"] != kBatchCsvSchema) {
    throw std::invalid_argument("batch_from_json: unsupported or missing schema");
  }
  EventBatch batch;
  batch.seed = j.at("seed").get<std::uint64_t>();
  const auto& cfg = j.at("config");
  batch.config.nu = cfg.at("nu").get<double>();
  batch.config.gamma = cfg.at("gamma").get<double>();
  const auto& k = cfg.at("kappa");
  for (int i = 0; i < 3; ++i) batch.config.kappa[i] = k.at(static_cast<std::size_t>(i)).get<double>();
  for (const auto& e : j.at("events")) {
    DetectionEvent ev;
    ev.outcome = outcome_from_name(e.at("outcome").get<std::string>());
    if (!e.at("rho").is_null()) {
      const auto& r = e.at("rho");
      ev.rho = Vec3(r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>());
    }
    batch.events.push_back(std::move(ev));
  }
  return batch;
}

}  // namespace homsense
