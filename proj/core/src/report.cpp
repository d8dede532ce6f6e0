#include "streamlp/report.hpp"

#include <cmath>
#include <cstdio>

namespace streamlp {

double round_sig(double v, int digits) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

namespace {

nlohmann::json vec_json(const std::vector<double>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : v) out.push_back(round_sig(x));
  return out;
}

}  // namespace

nlohmann::json solution_to_json(const Solution& s) {
  nlohmann::json out;
  out["kind"] = solution_kind(s);
  struct Visitor {
    nlohmann::json& out;
    void operator()(const Ball& b) const {
      out["center"] = vec_json(b.center);
      out["radius"] = round_sig(b.radius);
    }
    void operator()(const Hyperplane& h) const {
      out["u"] = vec_json(h.u);
      out["b"] = round_sig(h.b);
    }
    void operator()(const Infeasible&) const {}
    void operator()(const LpPoint& p) const { out["x"] = vec_json(p.x); }
    void operator()(const SdpMatrix& m) const {
      out["d"] = m.d;
      out["entries"] = vec_json(m.entries);
      out["margin"] = round_sig(m.margin);
    }
  };
  std::visit(Visitor{out}, s);
  return out;
}

nlohmann::json make_report(const RunConfigEcho& cfg, const Solution& solution,
                           const Solution& pre_correction, const PassReport* passes,
                           const LoadReport* load) {
  nlohmann::json r;
  r["config"] = {
      {"problem", cfg.problem}, {"model", cfg.model},     {"eps", round_sig(cfg.eps)},
      {"s", cfg.s},             {"gamma", round_sig(cfg.gamma)}, {"machines", cfg.machines},
      {"seed", cfg.seed},       {"backend", cfg.backend}, {"input", cfg.input},
      {"verify", cfg.verify},
  };
  r["status"] = is_infeasible(solution) ? "infeasible" : "solved";
  r["solution"] = solution_to_json(solution);
  r["pre_correction"] = solution_to_json(pre_correction);
  if (passes) {
    r["passes"] = passes->passes;
    r["centering_passes"] = passes->centering_passes;
    r["iterations"] = passes->iterations;
    r["successful_iterations"] = passes->successful_iterations;
    r["peak_words"] = passes->peak_words;
    r["sample_size_m"] = passes->sample_size_m;
  }
  if (load) {
    r["rounds"] = load->rounds;
    r["iterations"] = load->iterations;
    r["successful_iterations"] = load->successful_iterations;
    r["sample_size_m"] = load->sample_size_m;
    r["max_round_load_words"] = load->max_round_load_scalar;
    r["max_round_load_words_per_class"] = load->max_round_load_per_class;
    nlohmann::json rounds = nlohmann::json::array();
    for (std::size_t i = 0; i < load->round_endpoint_words_scalar.size(); ++i) {
      rounds.push_back({{"round", i},
                        {"endpoint_words", load->round_endpoint_words_scalar[i]},
                        {"endpoint_words_per_class",
                         load->round_endpoint_words_per_class[i]}});
    }
    r["load_table"] = std::move(rounds);
  }
  return r;
}

std::string report_to_string(const nlohmann::json& report) {
  return report.dump(2) + "\n";
}

}  // namespace streamlp
