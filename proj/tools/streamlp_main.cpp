// Command line front end: parse an instance, pick the problem and the
// execution model, run, and emit human-readable plus machine-readable
// reports (docs/FORMATS.md). Exit codes: 0 solved, 2 infeasible, 1 error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "streamlp/distributed.hpp"
#include "streamlp/problems/meb.hpp"
#include "streamlp/problems/oracles.hpp"
#include "streamlp/report.hpp"
#include "streamlp/streams.hpp"

namespace slp = streamlp;

namespace {

struct CliOptions {
  std::string problem = "meb";
  std::string model = "multipass";
  double eps = 0.1;
  int s = 0;  // 0 = ceil(ln N)
  double gamma = 0.2;
  int machines = 1;
  std::uint64_t seed = 0;
  std::string backend = "exact";
  std::string scheduler = "round_robin";
  std::string input;
  std::string scenario;
  std::string report_path;
  int sdp_dim = 2;
  double x_bound = 1.0;
  bool verify = false;
};

struct Scenario {
  int k = 0;
  std::vector<std::string> partitions;
  std::map<std::string, std::string> values;
};

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw slp::Error("cannot open scenario file: " + path);
  Scenario sc;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    std::string value;
    std::getline(ls, value);
    const auto start = value.find_first_not_of(" \t");
    value = start == std::string::npos ? "" : value.substr(start);
    if (key == "k") {
      sc.k = std::stoi(value);
    } else if (key == "partition") {
      sc.partitions.push_back(value);
    } else {
      sc.values[key] = value;
    }
  }
  if (sc.k == 0) sc.k = static_cast<int>(sc.partitions.size());
  if (sc.k <= 0 || sc.partitions.size() != static_cast<std::size_t>(sc.k))
    throw slp::UsageError("scenario: k must match the number of partition lines");
  return sc;
}

int point_dim(const std::vector<slp::StreamEvent>& events) {
  for (const auto& ev : events)
    if (std::holds_alternative<slp::PointRecord>(ev.payload))
      return static_cast<int>(ev.point().coords.size());
  throw slp::EmptyInputError("no events in the input");
}

std::unique_ptr<slp::ProblemFactory> make_factory(const CliOptions& opt,
                                                  const slp::Instance& inst, int* d_out) {
  const slp::ProblemKind kind = slp::parse_problem_kind(opt.problem);
  switch (kind) {
    case slp::ProblemKind::Meb: {
      const int d = point_dim(inst.events);
      *d_out = d;
      return std::make_unique<slp::MebFactory>(d, opt.eps);
    }
    case slp::ProblemKind::Svm: {
      const int d = point_dim(inst.events);
      *d_out = d;
      return std::make_unique<slp::SvmFactory>(d, opt.eps, opt.gamma);
    }
    case slp::ProblemKind::Lp: {
      const int d = point_dim(inst.events) - 1;
      *d_out = d;
      return std::make_unique<slp::LpFactory>(d, opt.eps, inst.lp_objective, opt.x_bound);
    }
    case slp::ProblemKind::Classify: {
      const int d = point_dim(inst.events);
      *d_out = d;
      return std::make_unique<slp::ClassifyFactory>(d, opt.eps);
    }
    case slp::ProblemKind::Sdp:
      *d_out = opt.sdp_dim;
      return std::make_unique<slp::SdpFactory>(opt.sdp_dim, opt.eps, inst.sdp_sparsity,
                                               inst.sdp_frobenius, inst.sdp_objective,
                                               false);
    case slp::ProblemKind::Saddle:
      *d_out = opt.sdp_dim;
      return std::make_unique<slp::SdpFactory>(opt.sdp_dim, opt.eps, inst.sdp_sparsity,
                                               inst.sdp_frobenius,
                                               std::vector<slp::SdpEntry>{}, true);
  }
  throw slp::UsageError("unknown problem");
}

slp::SolverParams make_params(const CliOptions& opt) {
  slp::SolverParams p;
  p.eps = opt.eps;
  p.s = opt.s;
  p.seed = opt.seed;
  if (opt.backend == "exact") {
    p.backend = slp::SketchBackend::ExactOracle;
  } else if (opt.backend == "sketch") {
    p.backend = slp::SketchBackend::Randomized;
  } else {
    throw slp::UsageError("backend must be 'exact' or 'sketch'");
  }
  return p;
}

// Live multiset materialized by counter replay; the verify oracles run on
// the positive-count support.
std::vector<slp::StreamEvent> live_events(const std::vector<slp::StreamEvent>& events) {
  std::map<std::string, std::pair<slp::StreamEvent, long long>> counter;
  int n = 0;
  for (const auto& ev : events) {
    std::ostringstream key;
    if (std::holds_alternative<slp::PointRecord>(ev.payload)) {
      for (double v : ev.point().coords) key << v << ",";
      key << "|" << ev.point().label;
    } else {
      for (const auto& e : ev.sdp().entries)
        key << e.row << "," << e.col << "," << e.value << ";";
      key << "|" << ev.sdp().rhs;
    }
    auto [it, fresh] = counter.try_emplace(key.str(), ev, 0);
    it->second.second += ev.delta();
    ++n;
  }
  std::vector<slp::StreamEvent> out;
  for (auto& [k, v] : counter) {
    if (v.second < 0) throw slp::UsageError("verify: stream is not strict-turnstile");
    if (v.second > 0) {
      v.first.op = slp::StreamEvent::Op::Insert;
      out.push_back(v.first);
    }
  }
  return out;
}

nlohmann::json run_verify(const CliOptions& opt, const slp::Instance& inst,
                          const slp::Solution& solution, const slp::Solution& raw) {
  nlohmann::json v;
  const auto live = live_events(inst.events);
  const slp::ProblemKind kind = slp::parse_problem_kind(opt.problem);
  const int n = static_cast<int>(live.size());

  if (kind == slp::ProblemKind::Meb) {
    const int d = point_dim(live);
    if (n > 2000 || d > 4) throw slp::UsageError("verify: meb capped at n<=2000, d<=4");
    std::vector<std::vector<double>> pts;
    for (const auto& ev : live) pts.push_back(ev.point().coords);
    const slp::Ball exact = slp::welzl_meb(pts);
    const auto& got = std::get<slp::Ball>(solution);
    bool encloses = true;
    for (const auto& p : pts) {
      double s = 0;
      for (std::size_t i = 0; i < p.size(); ++i)
        s += (p[i] - got.center[i]) * (p[i] - got.center[i]);
      if (std::sqrt(s) > got.radius + 1e-9) encloses = false;
    }
    v["oracle_radius"] = slp::round_sig(exact.radius);
    v["oracle_ratio"] = slp::round_sig(exact.radius > 0 ? got.radius / exact.radius : 1.0);
    v["encloses_all"] = encloses;
  } else if (kind == slp::ProblemKind::Svm) {
    const int d = point_dim(live);
    if (n > 160 || d > 4)
      throw slp::UsageError("verify: svm subset enumeration capped at n<=160, d<=4");
    std::vector<std::vector<double>> pos, neg;
    for (const auto& ev : live)
      (ev.point().label == 1 ? pos : neg).push_back(ev.point().coords);
    const slp::Solution exact = slp::exact_svm(pos, neg);
    if (slp::is_infeasible(solution)) {
      v["oracle_infeasible"] = slp::is_infeasible(exact);
    } else {
      const auto& got = std::get<slp::Hyperplane>(raw);
      const auto& ex = std::get<slp::Hyperplane>(exact);
      double gn = 0, en = 0;
      for (double x : got.u) gn += x * x;
      for (double x : ex.u) en += x * x;
      v["oracle_norm2"] = slp::round_sig(en);
      v["oracle_ratio"] = slp::round_sig(en > 0 ? gn / en : 1.0);
    }
  } else if (kind == slp::ProblemKind::Lp || kind == slp::ProblemKind::Classify) {
    const int dim = point_dim(live);
    const int d = kind == slp::ProblemKind::Lp ? dim - 1 : dim + 1;
    if (n > 2000 || d > 5) throw slp::UsageError("verify: lp capped at n<=2000, d<=4");
    // assemble the oracle LP exactly as the plugin does, on the raw rows
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<double> obj;
    if (kind == slp::ProblemKind::Lp) {
      for (const auto& ev : live) {
        const auto& r = ev.point().coords;
        rows.emplace_back(r.begin(), r.end() - 1);
        rhs.push_back(r.back());
      }
      obj = inst.lp_objective;
    } else {
      for (const auto& ev : live) {
        std::vector<double> r = ev.point().coords;
        if (ev.point().label == 1)
          for (double& x : r) x = -x;
        r.push_back(1.0);
        rows.push_back(std::move(r));
        rhs.push_back(0.0);
      }
      obj.assign(d, 0.0);
      obj[d - 1] = 1.0;
    }
    const int vars = static_cast<int>(obj.size());
    for (int j = 0; j < vars; ++j) {
      std::vector<double> up(vars, 0.0), dn(vars, 0.0);
      up[j] = 1.0;
      dn[j] = -1.0;
      const double bound = (kind == slp::ProblemKind::Classify && j == vars - 1)
                               ? 1.0 + std::sqrt(double(vars - 1))
                               : opt.x_bound;
      rows.push_back(up);
      rhs.push_back(bound);
      rows.push_back(dn);
      rhs.push_back(bound);
    }
    double need = 1.0;
    for (int i = 0; i < vars; ++i) need *= double(rows.size() - i) / (i + 1);
    if (need > 5e7) throw slp::UsageError("verify: lp vertex enumeration too large");
    const auto exact = slp::exact_lp(rows, rhs, obj);
    if (slp::is_infeasible(solution)) {
      v["oracle_infeasible"] = !exact.has_value();
    } else if (exact) {
      const auto& got = std::get<slp::LpPoint>(solution);
      double go = 0, eo = 0;
      for (std::size_t i = 0; i < obj.size(); ++i) {
        go += obj[i] * got.x[i];
        eo += obj[i] * exact->x[i];
      }
      v["oracle_objective"] = slp::round_sig(eo);
      v["oracle_gap"] = slp::round_sig(eo - go);
      if (kind == slp::ProblemKind::Classify) {
        bool separates = true;
        for (const auto& ev : live) {
          double side = 0;
          for (int c = 0; c < dim; ++c) side += ev.point().coords[c] * got.x[c];
          if (ev.point().label * side <= 0) separates = false;
        }
        v["separates_all"] = separates;
      }
    }
  } else {  // sdp / saddle
    if (opt.sdp_dim != 2) throw slp::UsageError("verify: sdp grid oracle requires d = 2");
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (const auto& ev : live) {
      std::vector<double> a(4, 0.0);
      for (const auto& e : ev.sdp().entries) a[e.row * 2 + e.col] += e.value;
      rows.push_back(std::move(a));
      rhs.push_back(ev.sdp().rhs);
    }
    std::vector<double> c(4, 0.0);
    for (const auto& e : inst.sdp_objective) c[e.row * 2 + e.col] += e.value;
    const bool margin = kind == slp::ProblemKind::Saddle;
    const auto oracle = slp::exact_sdp_grid(rows, rhs, c, margin);
    if (slp::is_infeasible(solution)) {
      v["oracle_infeasible"] = !oracle.has_value();
    } else if (oracle) {
      const auto& got = std::get<slp::SdpMatrix>(solution);
      double go = margin ? std::get<slp::SdpMatrix>(raw).margin : 0.0;
      if (!margin)
        for (int i = 0; i < 4; ++i) go += c[i] * got.entries[i];
      v["oracle_objective"] = slp::round_sig(oracle->objective);
      v["oracle_gap"] = slp::round_sig(oracle->objective - go);
    }
  }
  return v;
}

int run(CliOptions opt) {
  // Scenario-file problem/param keys override the command line.
  std::optional<Scenario> scenario;
  if (!opt.scenario.empty()) {
    scenario = parse_scenario(opt.scenario);
    for (const auto& [key, value] : scenario->values) {
      if (key == "problem") opt.problem = value;
      else if (key == "model") opt.model = value;
      else if (key == "eps") opt.eps = std::stod(value);
      else if (key == "s") opt.s = std::stoi(value);
      else if (key == "gamma") opt.gamma = std::stod(value);
      else if (key == "seed") opt.seed = std::stoull(value);
      else if (key == "backend") opt.backend = value;
      else if (key == "scheduler") opt.scheduler = value;
      else if (key == "dim") opt.sdp_dim = std::stoi(value);
      else if (key == "x_bound") opt.x_bound = std::stod(value);
      else throw slp::UsageError("scenario: unknown key '" + key + "'");
    }
  }

  const slp::ProblemKind kind = slp::parse_problem_kind(opt.problem);
  slp::RunConfigEcho echo;
  echo.problem = opt.problem;
  echo.model = opt.model;
  echo.eps = opt.eps;
  echo.s = opt.s;
  echo.gamma = kind == slp::ProblemKind::Svm ? opt.gamma : 0.0;
  echo.seed = opt.seed;
  echo.backend = opt.backend;
  echo.verify = opt.verify;

  const slp::SolverParams params = make_params(opt);
  slp::Solution solution, raw;
  slp::PassReport pass_report;
  slp::LoadReport load_report;
  bool distributed = false;
  slp::Instance inst;

  if (opt.model == "multipass" || opt.model == "turnstile") {
    if (opt.input.empty()) throw slp::UsageError("--input is required");
    inst = slp::load_instance(opt.input, kind);
    echo.input = opt.input;
    int d = 0;
    const auto factory = make_factory(opt, inst, &d);
    const slp::PassSource src(std::move(inst.events));
    const slp::RunResult res = opt.model == "multipass"
                                   ? slp::run_multipass(src, *factory, params)
                                   : slp::run_turnstile(src, *factory, params);
    solution = res.solution;
    raw = res.pre_correction;
    pass_report = res.report;
    inst.events = src.events();
  } else if (opt.model == "coordinator" || opt.model == "parallel") {
    distributed = true;
    std::vector<slp::PassSource> partitions;
    if (scenario) {
      const Scenario& sc = *scenario;
      echo.input = opt.scenario;
      echo.machines = sc.k;
      std::vector<slp::StreamEvent> all;
      for (const auto& path : sc.partitions) {
        slp::Instance part = slp::load_instance(path, kind);
        all.insert(all.end(), part.events.begin(), part.events.end());
        if (!part.lp_objective.empty()) inst.lp_objective = part.lp_objective;
        if (!part.sdp_objective.empty()) inst.sdp_objective = part.sdp_objective;
        inst.sdp_sparsity = part.sdp_sparsity;
        inst.sdp_frobenius = part.sdp_frobenius;
        partitions.emplace_back(std::move(part.events));
      }
      inst.events = std::move(all);
    } else {
      if (opt.input.empty()) throw slp::UsageError("--input or --scenario is required");
      inst = slp::load_instance(opt.input, kind);
      echo.input = opt.input;
      echo.machines = opt.machines;
      std::vector<std::vector<slp::StreamEvent>> parts(std::max(1, opt.machines));
      for (std::size_t i = 0; i < inst.events.size(); ++i)
        parts[i % parts.size()].push_back(inst.events[i]);
      for (auto& p : parts) partitions.emplace_back(std::move(p));
    }
    int d = 0;
    const auto factory = make_factory(opt, inst, &d);
    const slp::Scheduler sched = opt.scheduler == "threaded" ? slp::Scheduler::Threaded
                                                             : slp::Scheduler::RoundRobin;
    const slp::DistributedResult res =
        opt.model == "coordinator"
            ? slp::run_coordinator(partitions, *factory, params, sched)
            : slp::run_parallel(partitions, *factory, params, sched);
    solution = res.solution;
    raw = res.pre_correction;
    load_report = res.load;
  } else {
    throw slp::UsageError("model must be multipass, turnstile, coordinator, or parallel");
  }

  nlohmann::json report = slp::make_report(echo, solution, raw,
                                           distributed ? nullptr : &pass_report,
                                           distributed ? &load_report : nullptr);
  if (opt.verify && !slp::is_infeasible(solution))
    report["verify"] = run_verify(opt, inst, solution, raw);
  else if (opt.verify)
    report["verify"] = run_verify(opt, inst, solution, raw);

  std::cout << "problem:    " << opt.problem << " (" << opt.model << ")\n";
  std::cout << "status:     " << report["status"].get<std::string>() << "\n";
  std::cout << "solution:   " << report["solution"].dump() << "\n";
  if (!distributed) {
    std::cout << "iterations: " << pass_report.iterations << " (successful "
              << pass_report.successful_iterations << ")\n";
    std::cout << "passes:     " << pass_report.passes << " (centering "
              << pass_report.centering_passes << ")\n";
    std::cout << "peak words: " << pass_report.peak_words << "\n";
  } else {
    std::cout << "iterations: " << load_report.iterations << " (successful "
              << load_report.successful_iterations << ")\n";
    std::cout << "rounds:     " << load_report.rounds << "\n";
    std::cout << "max load:   " << load_report.max_round_load_scalar << " words\n";
  }
  if (report.contains("verify")) std::cout << "verify:     " << report["verify"].dump() << "\n";

  if (!opt.report_path.empty()) {
    std::ofstream out(opt.report_path);
    if (!out) throw slp::Error("cannot write report file: " + opt.report_path);
    out << slp::report_to_string(report);
  }
  return slp::is_infeasible(solution) ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximate LP-type problem solver over point streams"};
  CliOptions opt;
  app.add_option("--problem", opt.problem, "meb|svm|lp|sdp|classify|saddle");
  app.add_option("--model", opt.model, "multipass|turnstile|coordinator|parallel");
  app.add_option("--eps", opt.eps, "approximation accuracy in (0, 1/2]");
  app.add_option("--s", opt.s, "space/pass tradeoff in [1, ceil(ln N)]; 0 = default");
  app.add_option("--gamma", opt.gamma, "svm separability margin");
  app.add_option("--machines", opt.machines, "machine count for round-robin splits");
  app.add_option("--seed", opt.seed, "master RNG seed");
  app.add_option("--backend", opt.backend, "exact|sketch");
  app.add_option("--scheduler", opt.scheduler, "round_robin|threaded");
  app.add_option("--input", opt.input, "instance file");
  app.add_option("--scenario", opt.scenario, "distributed scenario file");
  app.add_option("--report", opt.report_path, "write the JSON report here");
  app.add_option("--dim", opt.sdp_dim, "matrix dimension for sdp/saddle");
  app.add_option("--x-bound", opt.x_bound, "lp solution box bound");
  app.add_flag("--verify", opt.verify, "run the reference oracle (size-capped)");

  try {
    app.parse(argc, argv);
    return run(opt);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
