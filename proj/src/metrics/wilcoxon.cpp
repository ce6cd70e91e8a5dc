#include "aac/metrics/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace aac {

std::string_view to_string(WilcoxonMethod method) {
  return method == WilcoxonMethod::exact ? "exact" : "normal_approx";
}

SignificanceResult wilcoxon_one_sided(std::span<const double> diffs, std::size_t exact_limit) {
  std::vector<double> nonzero;
  for (double d : diffs) {
    if (!std::isfinite(d)) throw std::invalid_argument("wilcoxon: differences must be finite");
    if (d != 0.0) nonzero.push_back(d);
  }
  const std::size_t n = nonzero.size();
  if (n == 0) throw std::invalid_argument("wilcoxon: every difference is zero");

  // Doubled mid-ranks stay integral: a tie block over sorted positions
  // [i, j) has rank (i + 1 + j) / 2, doubled i + 1 + j.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::abs(nonzero[a]) < std::abs(nonzero[b]); });
  std::vector<std::uint64_t> doubled_rank(n);
  double tie_term = 0.0;  // sum of t^3 - t over tie blocks
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && std::abs(nonzero[order[j]]) == std::abs(nonzero[order[i]])) ++j;
    for (std::size_t k = i; k < j; ++k) doubled_rank[order[k]] = i + 1 + j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }

  std::uint64_t observed2 = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (nonzero[i] > 0.0) observed2 += doubled_rank[i];

  SignificanceResult result;
  result.w_plus = static_cast<double>(observed2) / 2.0;
  result.n_effective = n;

  if (n <= exact_limit) {
    // ways[s] = number of sign assignments whose doubled W+ equals s.
    const std::uint64_t max_sum = std::accumulate(doubled_rank.begin(), doubled_rank.end(), std::uint64_t{0});
    std::vector<double> ways(max_sum + 1, 0.0);
    ways[0] = 1.0;
    std::uint64_t reach = 0;
    for (std::uint64_t r : doubled_rank) {
      for (std::uint64_t s = reach + 1; s-- > 0;)
        if (ways[s] != 0.0) ways[s + r] += ways[s];
      reach += r;
    }
    double tail = 0.0;
    for (std::uint64_t s = observed2; s <= max_sum; ++s) tail += ways[s];
    result.p_one_sided = tail / std::ldexp(1.0, static_cast<int>(n));
    result.method = WilcoxonMethod::exact;
    return result;
  }

  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  const double variance = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  result.method = WilcoxonMethod::normal_approx;
  if (variance <= 0.0) {
    result.p_one_sided = 1.0;
    return result;
  }
  const double z = (result.w_plus - mean - 0.5) / std::sqrt(variance);
  result.p_one_sided = std::clamp(0.5 * std::erfc(z / std::sqrt(2.0)), std::numeric_limits<double>::min(), 1.0);
  return result;
}

}  // namespace aac
