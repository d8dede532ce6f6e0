#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "streamlp/common.hpp"

namespace streamlp {

// One sparse entry of an SDP constraint matrix.
struct SdpEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
  bool operator==(const SdpEntry&) const = default;
};

// Point (MEB), labeled point (SVM), or LP constraint row (coords = a1..ad b).
struct PointRecord {
  std::vector<double> coords;
  int label = 0;  // SVM: -1/+1, otherwise 0
  bool operator==(const PointRecord&) const = default;
};

// <A_i, X> <= b_i constraint in sparse form.
struct SdpConstraint {
  std::vector<SdpEntry> entries;
  double rhs = 0.0;
  bool operator==(const SdpConstraint&) const = default;
};

struct StreamEvent {
  enum class Op { Insert, Delete };
  Op op = Op::Insert;
  std::variant<PointRecord, SdpConstraint> payload;

  const PointRecord& point() const { return std::get<PointRecord>(payload); }
  const SdpConstraint& sdp() const { return std::get<SdpConstraint>(payload); }
  std::int64_t delta() const { return op == Op::Insert ? 1 : -1; }
  bool operator==(const StreamEvent&) const = default;
};

// Replayable finite event sequence. Every pass yields the identical
// sequence; the pass counter increments once per traversal.
class PassSource {
 public:
  PassSource() = default;
  explicit PassSource(std::vector<StreamEvent> events) : events_(std::move(events)) {}

  template <class F>
  void scan(F&& fn) const {
    ++passes_;
    for (const StreamEvent& ev : events_) fn(ev);
  }

  int passes() const { return passes_; }
  void reset_pass_counter() const { passes_ = 0; }
  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }
  const std::vector<StreamEvent>& events() const { return events_; }

 private:
  std::vector<StreamEvent> events_;
  mutable int passes_ = 0;
};

enum class ProblemKind { Meb, Svm, Lp, Sdp, Classify, Saddle };

std::string problem_kind_name(ProblemKind kind);
ProblemKind parse_problem_kind(const std::string& name);

// Text stream format, one event per line ("docs/FORMATS.md"):
//   points:   + x1 x2 ... xd          (or leading -)
//   svm:      + x1 ... xd | y
//   lp rows:  + a1 ... ad b
//   sdp rows: + k i1 j1 v1 ... ik jk vk | b
// Lines starting with '#' and blank lines are skipped. Objective/metadata
// header lines for lp/sdp instances are handled by the instance loaders in
// the cli; this parser handles event lines only.
std::vector<StreamEvent> parse_stream_lines(const std::vector<std::string>& lines,
                                            ProblemKind kind, int first_line_no = 1);
std::vector<StreamEvent> parse_stream_file(const std::string& path, ProblemKind kind);

// Full instance file: for lp/sdp kinds an objective header precedes the
// events ("objective c1 ... cd" resp. "objective k i j v ..."), sdp may
// also declare "bounds S F". Other kinds are event lines only.
struct Instance {
  ProblemKind kind = ProblemKind::Meb;
  std::vector<StreamEvent> events;
  std::vector<double> lp_objective;
  std::vector<SdpEntry> sdp_objective;
  int sdp_sparsity = 2;
  double sdp_frobenius = 1.0;
};

Instance load_instance(const std::string& path, ProblemKind kind);

}  // namespace streamlp
