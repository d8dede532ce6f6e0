#include "streamlp/solution.hpp"

namespace streamlp {

double SdpMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < d; ++i) t += at(i, i);
  return t;
}

bool is_infeasible(const Solution& s) {
  return std::holds_alternative<Infeasible>(s);
}

std::string solution_kind(const Solution& s) {
  struct Visitor {
    std::string operator()(const Ball&) const { return "ball"; }
    std::string operator()(const Hyperplane&) const { return "hyperplane"; }
    std::string operator()(const Infeasible&) const { return "infeasible"; }
    std::string operator()(const LpPoint&) const { return "lp_point"; }
    std::string operator()(const SdpMatrix&) const { return "sdp_matrix"; }
  };
  return std::visit(Visitor{}, s);
}

int solution_words(const Solution& s) {
  struct Visitor {
    int operator()(const Ball&) const { return 2; }
    int operator()(const Hyperplane&) const { return 2; }
    int operator()(const Infeasible&) const { return 1; }
    int operator()(const LpPoint&) const { return 1; }
    int operator()(const SdpMatrix&) const { return 1; }
  };
  return std::visit(Visitor{}, s);
}

}  // namespace streamlp
