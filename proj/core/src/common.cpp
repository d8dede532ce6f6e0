#include "streamlp/common.hpp"

#include <algorithm>

namespace streamlp {

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

u128 checked_mul(u128 a, u128 b) {
  if (a != 0 && b > ~u128(0) / a)
    throw UsageError("128-bit overflow in universe size computation");
  return a * b;
}

u128 checked_pow(u128 base, int exp) {
  u128 out = 1;
  for (int i = 0; i < exp; ++i) out = checked_mul(out, base);
  return out;
}

std::size_t Rng::pick_weighted(const std::vector<long double>& weights) {
  long double total = 0.0L;
  for (long double w : weights) {
    if (w < 0.0L) throw UsageError("pick_weighted: negative weight");
    total += w;
  }
  if (total <= 0.0L) throw UsageError("pick_weighted: all weights zero");
  long double r = static_cast<long double>(next_double()) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    r -= weights[i];
    if (r < 0.0L) return i;
  }
  return weights.size() - 1;
}

}  // namespace streamlp
