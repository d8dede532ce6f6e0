#pragma once

#include <json.hpp>

#include "streamlp/distributed.hpp"
#include "streamlp/streams.hpp"

namespace streamlp {

// Machine-readable run report. Field names are stable, floats carry 12
// significant digits, and the config echo (with the seed) reproduces the
// run exactly, so two identical runs emit byte-identical reports. Schema
// documented in docs/FORMATS.md.

double round_sig(double v, int digits = 12);

nlohmann::json solution_to_json(const Solution& s);

struct RunConfigEcho {
  std::string problem;
  std::string model;
  double eps = 0.1;
  int s = 0;
  double gamma = 0.0;
  int machines = 1;
  std::uint64_t seed = 0;
  std::string backend;
  std::string input;
  bool verify = false;
};

nlohmann::json make_report(const RunConfigEcho& cfg, const Solution& solution,
                           const Solution& pre_correction, const PassReport* passes,
                           const LoadReport* load);

// Serializes with a trailing newline; keys are emitted in sorted order.
std::string report_to_string(const nlohmann::json& report);

}  // namespace streamlp
