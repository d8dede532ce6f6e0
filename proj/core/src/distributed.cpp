#include "streamlp/distributed.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

namespace streamlp {

namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

class LoadMeter {
 public:
  explicit LoadMeter(int endpoints) : endpoints_(endpoints) {}

  void start_round() {
    scalar_.emplace_back(endpoints_, 0);
    per_class_.emplace_back(endpoints_, 0);
  }

  // Delivers one message between endpoints; both sides account its words.
  void deliver(int from, int to, const Message& msg) {
    const std::size_t ws = message_words_scalar(msg);
    const std::size_t wc = message_words_per_class(msg);
    scalar_.back()[from] += ws;
    scalar_.back()[to] += ws;
    per_class_.back()[from] += wc;
    per_class_.back()[to] += wc;
  }

  void fill(LoadReport& out) const {
    out.rounds = static_cast<int>(scalar_.size());
    out.round_endpoint_words_scalar = scalar_;
    out.round_endpoint_words_per_class = per_class_;
    out.max_round_load_scalar = 0;
    out.max_round_load_per_class = 0;
    for (const auto& round : scalar_)
      for (std::size_t w : round)
        out.max_round_load_scalar = std::max(out.max_round_load_scalar, w);
    for (const auto& round : per_class_)
      for (std::size_t w : round)
        out.max_round_load_per_class = std::max(out.max_round_load_per_class, w);
  }

 private:
  int endpoints_;
  std::vector<std::vector<std::size_t>> scalar_;
  std::vector<std::vector<std::size_t>> per_class_;
};

struct Machine {
  int id = 0;
  const PassSource* partition = nullptr;
  std::unique_ptr<WeightOracle> oracle;
  SamplingBank bank;
  std::vector<u128> batch;
  CheckCounts check;
};

template <class F>
void for_each_machine(Scheduler scheduler, std::vector<Machine>& machines, F&& fn) {
  if (scheduler == Scheduler::RoundRobin) {
    for (Machine& m : machines) fn(m);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(machines.size());
  for (Machine& m : machines) workers.emplace_back([&fn, &m] { fn(m); });
  for (std::thread& t : workers) t.join();
}

}  // namespace

std::size_t message_words_scalar(const Message& msg) {
  struct Visitor {
    std::size_t operator()(const SolutionBroadcast& m) const {
      return solution_words(m.solution);
    }
    std::size_t operator()(const WeightReport&) const { return 1; }
    std::size_t operator()(const SampleQuota&) const { return 1; }
    std::size_t operator()(const SampleBatch& m) const { return m.points.size(); }
    std::size_t operator()(const ViolatorWeightReport&) const { return 2; }
    std::size_t operator()(const CenterCandidate&) const { return 1; }
    std::size_t operator()(const MaxDistReport&) const { return 1; }
  };
  return std::visit(Visitor{}, msg);
}

std::size_t message_words_per_class(const Message& msg) {
  struct Visitor {
    std::size_t operator()(const SolutionBroadcast& m) const {
      return solution_words(m.solution);
    }
    std::size_t operator()(const WeightReport& m) const { return m.class_counts.size(); }
    std::size_t operator()(const SampleQuota&) const { return 1; }
    std::size_t operator()(const SampleBatch& m) const { return m.points.size(); }
    std::size_t operator()(const ViolatorWeightReport& m) const {
      return m.all_counts.size() + m.violator_counts.size();
    }
    std::size_t operator()(const CenterCandidate&) const { return 1; }
    std::size_t operator()(const MaxDistReport&) const { return 1; }
  };
  return std::visit(Visitor{}, msg);
}

std::vector<std::uint64_t> allocate_quotas(const std::vector<long double>& weights,
                                           std::uint64_t m, Rng& rng) {
  bool any = false;
  for (long double w : weights)
    if (w > 0.0L) any = true;
  if (!any) throw UsageError("allocate_quotas: all weights zero");
  std::vector<std::uint64_t> quotas(weights.size(), 0);
  for (std::uint64_t i = 0; i < m; ++i) ++quotas[rng.pick_weighted(weights)];
  return quotas;
}

DistributedResult run_coordinator(const std::vector<PassSource>& partitions,
                                  const ProblemFactory& factory, const SolverParams& params,
                                  Scheduler scheduler) {
  const int k = static_cast<int>(partitions.size());
  if (k < 1) throw UsageError("run_coordinator: need at least one machine");
  bool any_events = false;
  for (const auto& p : partitions) any_events |= !p.empty();
  if (!any_events) throw EmptyInputError("run_coordinator: all partitions empty");
  for (const auto& p : partitions) p.reset_pass_counter();

  LoadMeter meter(k + 1);
  const int kCoord = 0;
  auto endpoint = [](int machine_id) { return machine_id + 1; };

  // --- init round 1: machines offer their first point; the coordinator
  // keeps the lexicographically smallest so the choice does not depend on
  // which machine holds which partition.
  meter.start_round();
  std::optional<Centering> centering;
  if (factory.needs_centering()) {
    std::vector<double> center;
    for (int i = 0; i < k; ++i) {
      if (partitions[i].empty()) continue;
      CenterCandidate cand{partitions[i].events().front().point().coords};
      meter.deliver(endpoint(i), kCoord, cand);
      if (center.empty() || cand.point < center) center = cand.point;
    }
    centering = Centering{std::move(center), 0.0};
  } else {
    // keep the round/accounting structure uniform: a 1-word ready ping
    meter.deliver(endpoint(0), kCoord, MaxDistReport{0.0});
  }

  // --- init round 2: broadcast the center, collect the furthest distances.
  meter.start_round();
  if (factory.needs_centering()) {
    double r_max = 0.0;
    for (int i = 0; i < k; ++i) {
      meter.deliver(kCoord, endpoint(i), CenterCandidate{centering->center});
      double local = 0.0;
      partitions[i].scan([&](const StreamEvent& ev) {
        local = std::max(local, dist(centering->center, ev.point().coords));
      });
      r_max = std::max(r_max, local);
      meter.deliver(endpoint(i), kCoord, MaxDistReport{local});
    }
    centering->r_max = r_max;
  } else {
    for (int i = 0; i < k; ++i) {
      meter.deliver(kCoord, endpoint(i), MaxDistReport{0.0});
      meter.deliver(endpoint(i), kCoord, MaxDistReport{0.0});
    }
  }

  const auto problem = factory.create(centering);
  const int s_val = params.resolved_s(problem->universe_size());
  const long double base = params.weight_base(problem->universe_size(), s_val);
  const double mu_v = params.mu(*problem, s_val);
  const std::uint64_t m = params.sample_count(*problem, s_val);
  const int budget = params.max_iterations(*problem, s_val);

  std::vector<Machine> machines(k);
  for (int i = 0; i < k; ++i) {
    machines[i].id = i;
    machines[i].partition = &partitions[i];
    machines[i].oracle = std::make_unique<WeightOracle>(*problem);
  }
  WeightOracle coordinator_oracle(*problem);

  DistributedResult out;
  out.load.sample_size_m = m;
  bool have_new_success = false;
  Solution last_success;

  for (int it = 0; it < budget; ++it) {
    const int classes = coordinator_oracle.stored_count() + 1;

    // --- round 1: broadcast last success, machines report class weights.
    meter.start_round();
    for (Machine& mach : machines) {
      if (have_new_success) {
        meter.deliver(kCoord, endpoint(mach.id), SolutionBroadcast{last_success});
        mach.oracle->record_success(last_success);
      } else {
        meter.deliver(kCoord, endpoint(mach.id), MaxDistReport{0.0});  // proceed ping
      }
    }
    have_new_success = false;
    for_each_machine(scheduler, machines, [&](Machine& mach) {
      mach.bank = build_sampling_bank(*mach.partition, *problem, *mach.oracle, params, it);
    });
    std::vector<long double> machine_weights(k, 0.0L);
    for (Machine& mach : machines) {
      WeightReport rep{mach.bank.counts};
      long double w = 0.0L;
      for (int c = 0; c < classes; ++c)
        w += static_cast<long double>(rep.class_counts[c]) *
             std::pow(base, static_cast<long double>(c - (classes - 1)));
      machine_weights[mach.id] = w;
      meter.deliver(endpoint(mach.id), kCoord, rep);
    }
    {
      long double total = 0.0L;
      for (long double w : machine_weights) total += w;
      if (total <= 0.0L)
        throw EmptyInputError("run_coordinator: no snapped points on any machine");
    }

    // --- round 2: quotas out, sample batches back (m points in total).
    meter.start_round();
    Rng quota_rng(derive_seed(params.seed, SeedChannel::Quotas, it, 0));
    const std::vector<std::uint64_t> quotas = allocate_quotas(machine_weights, m, quota_rng);
    for (int i = 0; i < k; ++i)
      meter.deliver(kCoord, endpoint(i), SampleQuota{quotas[i]});
    for_each_machine(scheduler, machines, [&](Machine& mach) {
      Rng draw_rng(derive_seed(params.seed, SeedChannel::Draws, it, mach.id));
      mach.batch = draw_from_bank(mach.bank, base, quotas[mach.id], draw_rng);
    });
    std::set<u128> sample;
    for (Machine& mach : machines) {
      if (params.backend == SketchBackend::ExactOracle &&
          mach.batch.size() != quotas[mach.id])
        throw ProtocolError("sample batch size does not match the quota");
      meter.deliver(endpoint(mach.id), kCoord, SampleBatch{mach.batch});
      sample.insert(mach.batch.begin(), mach.batch.end());
    }
    const std::vector<u128> basis(sample.begin(), sample.end());
    const Solution candidate = problem->solve_basis(basis);

    // --- round 3: broadcast the candidate, collect violator weights.
    meter.start_round();
    for (int i = 0; i < k; ++i)
      meter.deliver(kCoord, endpoint(i), SolutionBroadcast{candidate});
    for_each_machine(scheduler, machines, [&](Machine& mach) {
      mach.check =
          build_check_counts(*mach.partition, *problem, *mach.oracle, params, it, candidate);
    });
    CheckCounts global;
    global.all.assign(classes, 0);
    global.violators.assign(classes, 0);
    for (Machine& mach : machines) {
      for (int c = 0; c < classes; ++c) {
        global.all[c] += mach.check.all[c];
        global.violators[c] += mach.check.violators[c];
      }
      meter.deliver(endpoint(mach.id), kCoord,
                    ViolatorWeightReport{mach.check.all, mach.check.violators});
    }
    const CheckResult chk = evaluate_check(global, base, mu_v);

    out.load.iterations = it + 1;
    if (chk.success) ++out.load.successful_iterations;

    if (chk.violators_empty) {
      out.pre_correction = candidate;
      out.solution = problem->correct_solution(candidate);
      meter.fill(out.load);
      return out;
    }
    if (chk.success) {
      coordinator_oracle.record_success(candidate);
      last_success = candidate;
      have_new_success = true;
    }
  }

  if (problem->infeasible_on_budget()) {
    out.load.iterations = budget;
    out.pre_correction = Infeasible{};
    out.solution = Infeasible{};
    meter.fill(out.load);
    return out;
  }
  throw IterationBudgetError("run_coordinator: iteration budget exhausted");
}

DistributedResult run_parallel(const std::vector<PassSource>& partitions,
                               const ProblemFactory& factory, const SolverParams& params,
                               Scheduler scheduler) {
  DistributedResult out = run_coordinator(partitions, factory, params, scheduler);
  // Fold the coordinator endpoint into machine 0.
  for (auto* table : {&out.load.round_endpoint_words_scalar,
                      &out.load.round_endpoint_words_per_class}) {
    for (auto& round : *table) {
      round[1] += round[0];
      round.erase(round.begin());
    }
  }
  out.load.max_round_load_scalar = 0;
  out.load.max_round_load_per_class = 0;
  for (const auto& round : out.load.round_endpoint_words_scalar)
    for (std::size_t w : round)
      out.load.max_round_load_scalar = std::max(out.load.max_round_load_scalar, w);
  for (const auto& round : out.load.round_endpoint_words_per_class)
    for (std::size_t w : round)
      out.load.max_round_load_per_class = std::max(out.load.max_round_load_per_class, w);
  return out;
}

}  // namespace streamlp
