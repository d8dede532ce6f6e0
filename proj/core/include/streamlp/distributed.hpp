#pragma once

#include <optional>

#include "streamlp/streams.hpp"

namespace streamlp {

// In-process simulation of the coordinator / parallel-computation models.
// k logical machines hold partitions; each solver iteration costs three
// rounds (solution broadcast + weight reports, quotas + sample batches,
// candidate broadcast + violator reports) after a two-round init. Machines
// never read another machine's partition and transmit only net
// representatives, report scalars, and the initial center candidate.
//
// Load is metered in words under the cost model (a point or a
// scalar is one word). Weight reports are metered two ways: the scalar
// model (a report is its total-weight scalar: 1 word, violator reports 2)
// and the per-class model (t+1 words). Round loads quote the busiest
// endpoint (sent + received).
struct LoadReport {
  int rounds = 0;
  int iterations = 0;
  int successful_iterations = 0;
  std::uint64_t sample_size_m = 0;
  std::size_t max_round_load_scalar = 0;
  std::size_t max_round_load_per_class = 0;
  // per round, per endpoint (0 = coordinator, 1..k = machines): sent+received
  std::vector<std::vector<std::size_t>> round_endpoint_words_scalar;
  std::vector<std::vector<std::size_t>> round_endpoint_words_per_class;
};

struct DistributedResult {
  Solution solution;
  Solution pre_correction;
  LoadReport load;
};

// Protocol messages. Word sizes follow the cost model: a point, scalar, or
// quota is one word; a solution is solution_words(); reports are their
// scalar summaries in the scalar model and t+1 numbers in the per-class
// model (the meter tracks both).
struct SolutionBroadcast {
  Solution solution;
};
struct WeightReport {
  std::vector<std::uint64_t> class_counts;
};
struct SampleQuota {
  std::uint64_t quota = 0;
};
struct SampleBatch {
  std::vector<u128> points;
};
struct ViolatorWeightReport {
  std::vector<std::uint64_t> all_counts;
  std::vector<std::uint64_t> violator_counts;
};
struct CenterCandidate {
  std::vector<double> point;
};
struct MaxDistReport {
  double value = 0.0;
};
using Message = std::variant<SolutionBroadcast, WeightReport, SampleQuota, SampleBatch,
                             ViolatorWeightReport, CenterCandidate, MaxDistReport>;

std::size_t message_words_scalar(const Message& msg);
std::size_t message_words_per_class(const Message& msg);

enum class Scheduler { RoundRobin, Threaded };

// Multinomial quota allocation: m i.i.d. machine picks proportional to the
// reported weights. Quotas sum to m exactly.
std::vector<std::uint64_t> allocate_quotas(const std::vector<long double>& weights,
                                           std::uint64_t m, Rng& rng);

DistributedResult run_coordinator(const std::vector<PassSource>& partitions,
                                  const ProblemFactory& factory, const SolverParams& params,
                                  Scheduler scheduler = Scheduler::RoundRobin);

// Machine 0 doubles as the coordinator; its load is the coordinator load
// plus its machine load from the coordinator run (self-traffic counts).
DistributedResult run_parallel(const std::vector<PassSource>& partitions,
                               const ProblemFactory& factory, const SolverParams& params,
                               Scheduler scheduler = Scheduler::RoundRobin);

}  // namespace streamlp
