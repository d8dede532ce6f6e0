#pragma once

#include <string>
#include <variant>
#include <vector>

#include "streamlp/common.hpp"

namespace streamlp {

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
  bool operator==(const Ball&) const = default;
};

struct Hyperplane {
  std::vector<double> u;
  double b = 0.0;
  bool operator==(const Hyperplane&) const = default;
};

struct Infeasible {
  bool operator==(const Infeasible&) const = default;
};

struct LpPoint {
  std::vector<double> x;
  bool operator==(const LpPoint&) const = default;
};

// Row-major symmetric d x d matrix. For the saddle-point reduction the
// optimal margin sigma rides along (0 for plain SDP solutions).
struct SdpMatrix {
  int d = 0;
  std::vector<double> entries;
  double margin = 0.0;

  double at(int i, int j) const { return entries[i * d + j]; }
  double& at(int i, int j) { return entries[i * d + j]; }
  double trace() const;
  bool operator==(const SdpMatrix&) const = default;
};

using Solution = std::variant<Ball, Hyperplane, Infeasible, LpPoint, SdpMatrix>;

bool is_infeasible(const Solution& s);
std::string solution_kind(const Solution& s);

// Word size of a solution under the cost model (a point or scalar is one
// word): Ball and Hyperplane take 2, the rest 1.
int solution_words(const Solution& s);

}  // namespace streamlp
