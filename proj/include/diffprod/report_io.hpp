#pragma once

// CSV / JSON / text emission for sweep records and coverage reports.
// Wall time is the only nondeterministic field; it is written only when
// requested, so default output is byte-reproducible.

#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "diffprod/search.hpp"
#include "diffprod/set_io.hpp"

namespace diffprod {

inline constexpr const char* kRecordCsvHeader =
    "N,alpha,beta,mode,seed,iterations,best_d,witness_E1,witness_E2,candidates,wall_time_s";

inline std::string format_seconds(double s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

inline std::string to_csv_row(const ExperimentRecord& r, bool with_timing = false) {
  const auto& c = r.config;
  std::string row;
  row += std::to_string(c.modulus) + ",";
  row += c.alpha.str() + ",";
  row += c.beta.str() + ",";
  row += to_string(c.mode) + ",";
  row += std::to_string(c.seed) + ",";
  row += std::to_string(c.iterations) + ",";
  row += std::to_string(r.best_d) + ",";
  row += "\"" + format_set_literal(r.witness_e1) + "\",";
  row += "\"" + format_set_literal(r.witness_e2) + "\",";
  row += to_decimal(r.candidates) + ",";
  if (with_timing) row += format_seconds(r.wall_time_s);
  return row;
}

inline std::string to_csv(const std::vector<ExperimentRecord>& records, bool with_timing = false) {
  std::string out = std::string(kRecordCsvHeader) + "\n";
  for (const auto& r : records) out += to_csv_row(r, with_timing) + "\n";
  return out;
}

inline nlohmann::ordered_json to_json(const ExperimentRecord& r, bool with_timing = false) {
  const auto& c = r.config;
  nlohmann::ordered_json j;
  j["N"] = c.modulus;
  j["alpha"] = c.alpha.str();
  j["beta"] = c.beta.str();
  j["mode"] = to_string(c.mode);
  j["seed"] = c.seed;
  j["iterations"] = c.iterations;
  j["best_d"] = r.best_d;
  j["witness_E1"] = format_set_literal(r.witness_e1);
  j["witness_E2"] = format_set_literal(r.witness_e2);
  j["candidates"] = to_decimal(r.candidates);
  j["wall_time_s"] = with_timing ? nlohmann::ordered_json(r.wall_time_s) : nlohmann::ordered_json(nullptr);
  return j;
}

inline nlohmann::ordered_json to_json(const PrimeCoverageReport& r) {
  nlohmann::ordered_json j;
  j["p"] = r.p;
  j["min_size"] = r.min_size;
  j["seed"] = r.seed;
  j["qualifying"] = to_decimal(r.qualifying);
  j["examined"] = to_decimal(r.examined);
  j["exhaustive"] = r.exhaustive;
  j["failures"] = to_decimal(r.failures);
  auto w = nlohmann::ordered_json::array();
  for (const auto& s : r.witnesses) w.push_back(format_set_literal(s));
  j["witnesses"] = w;
  return j;
}

inline std::string to_key_value(const PrimeCoverageReport& r) {
  std::string out;
  out += "p=" + std::to_string(r.p) + "\n";
  out += "min_size=" + std::to_string(r.min_size) + "\n";
  out += "qualifying=" + to_decimal(r.qualifying) + "\n";
  out += "examined=" + to_decimal(r.examined) + "\n";
  out += std::string("exhaustive=") + (r.exhaustive ? "true" : "false") + "\n";
  out += "failures=" + to_decimal(r.failures) + "\n";
  for (const auto& s : r.witnesses) out += "witness=" + format_set_literal(s) + "\n";
  return out;
}

}  // namespace diffprod
