#include "streamlp/events.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace streamlp {

std::string problem_kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Meb: return "meb";
    case ProblemKind::Svm: return "svm";
    case ProblemKind::Lp: return "lp";
    case ProblemKind::Sdp: return "sdp";
    case ProblemKind::Classify: return "classify";
    case ProblemKind::Saddle: return "saddle";
  }
  return "?";
}

ProblemKind parse_problem_kind(const std::string& name) {
  if (name == "meb") return ProblemKind::Meb;
  if (name == "svm") return ProblemKind::Svm;
  if (name == "lp") return ProblemKind::Lp;
  if (name == "sdp") return ProblemKind::Sdp;
  if (name == "classify") return ProblemKind::Classify;
  if (name == "saddle") return ProblemKind::Saddle;
  throw UsageError("unknown problem kind: " + name);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_num(const std::string& tok, int line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("malformed number '" + tok + "'", line_no);
  }
}

int parse_int(const std::string& tok, int line_no) {
  const double v = parse_num(tok, line_no);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) throw ParseError("expected integer, got '" + tok + "'", line_no);
  return i;
}

StreamEvent parse_event_line(const std::vector<std::string>& toks, ProblemKind kind,
                             int line_no) {
  StreamEvent ev;
  if (toks[0] == "+") {
    ev.op = StreamEvent::Op::Insert;
  } else if (toks[0] == "-") {
    ev.op = StreamEvent::Op::Delete;
  } else {
    throw ParseError("event must start with '+' or '-'", line_no);
  }

  const bool is_sdp = (kind == ProblemKind::Sdp || kind == ProblemKind::Saddle);
  if (is_sdp) {
    if (toks.size() < 2) throw ParseError("missing triplet count", line_no);
    const int k = parse_int(toks[1], line_no);
    if (k < 0) throw ParseError("negative triplet count", line_no);
    const std::size_t want = 2 + 3 * static_cast<std::size_t>(k) + 2;
    if (toks.size() != want || toks[toks.size() - 2] != "|")
      throw ParseError("sdp row must be '+ k i j v ... | b'", line_no);
    SdpConstraint row;
    for (int t = 0; t < k; ++t) {
      SdpEntry e;
      e.row = parse_int(toks[2 + 3 * t], line_no);
      e.col = parse_int(toks[3 + 3 * t], line_no);
      e.value = parse_num(toks[4 + 3 * t], line_no);
      if (e.row < 0 || e.col < 0) throw ParseError("negative matrix position", line_no);
      row.entries.push_back(e);
    }
    row.rhs = parse_num(toks.back(), line_no);
    ev.payload = std::move(row);
    return ev;
  }

  PointRecord rec;
  std::size_t end = toks.size();
  if (kind == ProblemKind::Svm || kind == ProblemKind::Classify) {
    if (toks.size() < 4 || toks[toks.size() - 2] != "|")
      throw ParseError("labeled point must be '+ x1 ... xd | y'", line_no);
    const int y = parse_int(toks.back(), line_no);
    if (y != 1 && y != -1) throw ParseError("label must be -1 or +1", line_no);
    rec.label = y;
    end = toks.size() - 2;
  }
  if (end < 2) throw ParseError("event has no coordinates", line_no);
  for (std::size_t i = 1; i < end; ++i)
    rec.coords.push_back(parse_num(toks[i], line_no));
  ev.payload = std::move(rec);
  return ev;
}

bool skippable(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::vector<StreamEvent> parse_stream_lines(const std::vector<std::string>& lines,
                                            ProblemKind kind, int first_line_no) {
  std::vector<StreamEvent> out;
  int line_no = first_line_no;
  std::size_t dim = 0;
  for (const std::string& line : lines) {
    if (!skippable(line)) {
      auto toks = tokenize(line);
      StreamEvent ev = parse_event_line(toks, kind, line_no);
      if (std::holds_alternative<PointRecord>(ev.payload)) {
        const auto& rec = ev.point();
        if (dim == 0) dim = rec.coords.size();
        if (rec.coords.size() != dim)
          throw ParseError("inconsistent dimension (expected " + std::to_string(dim) + ")",
                           line_no);
      }
      out.push_back(std::move(ev));
    }
    ++line_no;
  }
  return out;
}

std::vector<StreamEvent> parse_stream_file(const std::string& path, ProblemKind kind) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return parse_stream_lines(lines, kind, 1);
}

Instance load_instance(const std::string& path, ProblemKind kind) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file: " + path);
  Instance inst;
  inst.kind = kind;
  std::vector<std::string> event_lines;
  std::string line;
  int line_no = 0;
  int first_event_line = 1;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!header_done) {
      if (skippable(line)) continue;
      auto toks = tokenize(line);
      if (toks[0] == "objective") {
        if (kind == ProblemKind::Lp) {
          for (std::size_t i = 1; i < toks.size(); ++i)
            inst.lp_objective.push_back(parse_num(toks[i], line_no));
          if (inst.lp_objective.empty()) throw ParseError("empty objective", line_no);
        } else if (kind == ProblemKind::Sdp) {
          if (toks.size() < 2) throw ParseError("missing triplet count", line_no);
          const int k = parse_int(toks[1], line_no);
          if (toks.size() != 2 + 3 * static_cast<std::size_t>(k))
            throw ParseError("sdp objective must be 'objective k i j v ...'", line_no);
          for (int t = 0; t < k; ++t)
            inst.sdp_objective.push_back(SdpEntry{parse_int(toks[2 + 3 * t], line_no),
                                                  parse_int(toks[3 + 3 * t], line_no),
                                                  parse_num(toks[4 + 3 * t], line_no)});
        } else {
          throw ParseError("objective header not valid for problem " + problem_kind_name(kind),
                           line_no);
        }
        continue;
      }
      if (toks[0] == "bounds") {
        if (kind != ProblemKind::Sdp && kind != ProblemKind::Saddle)
          throw ParseError("bounds header only valid for sdp/saddle", line_no);
        if (toks.size() != 3) throw ParseError("bounds header must be 'bounds S F'", line_no);
        inst.sdp_sparsity = parse_int(toks[1], line_no);
        inst.sdp_frobenius = parse_num(toks[2], line_no);
        continue;
      }
      header_done = true;
      first_event_line = line_no;
    }
    event_lines.push_back(line);
  }
  if (kind == ProblemKind::Lp && inst.lp_objective.empty())
    throw ParseError("lp instance requires an 'objective' header", 1);
  if (kind == ProblemKind::Sdp && inst.sdp_objective.empty())
    throw ParseError("sdp instance requires an 'objective' header", 1);
  inst.events = parse_stream_lines(event_lines, kind, first_event_line);
  return inst;
}

}  // namespace streamlp
