#include "fare/harness/metrics.hpp"

#include <cmath>

#include "fare/core/error.hpp"

namespace fare {

Judgment aggregate_self_consistency(std::span<const Judgment> judgments) {
  if (judgments.empty()) throw DomainError("self-consistency needs at least one judgment");
  const auto kind = judgments.front().index();
  std::vector<std::size_t> votes(judgments.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < judgments.size(); ++i) {
    if (judgments[i].index() != kind) throw DomainError("self-consistency over mixed judgments");
    // Credit the first occurrence of each distinct judgment.
    std::size_t first = i;
    for (std::size_t j = 0; j < i; ++j) {
      if (judgments[j] == judgments[i]) {
        first = j;
        break;
      }
    }
    if (++votes[first] > votes[best] || (votes[first] == votes[best] && first < best)) {
      best = first;
    }
  }
  return judgments[best];
}

ProcessBenchScore processbench_f1(std::span<const StepOutcome> outcomes) {
  // Integer counts so the ratio is computed once, in a single division.
  std::size_t ne = 0, ce = 0, nc = 0, cc = 0;
  for (const auto& o : outcomes) {
    if (o.gold == -1) {
      ++nc;
      cc += o.predicted == -1;
    } else {
      ++ne;
      ce += o.predicted == o.gold;
    }
  }
  if (ne == 0) throw UndefinedMetricError("ProcessBench F1: no samples with an error step");
  if (nc == 0) throw UndefinedMetricError("ProcessBench F1: no error-free samples");

  ProcessBenchScore s;
  s.n_error = ne;
  s.n_correct = nc;
  s.acc_error = static_cast<double>(ce) / static_cast<double>(ne);
  s.acc_correct = static_cast<double>(cc) / static_cast<double>(nc);
  // 2ab/(a+b) with a = ce/ne, b = cc/nc equals 2*ce*cc / (ce*nc + cc*ne).
  // Both sides are exact in a double for realistic counts, so the single
  // division is correctly rounded.
  const double num = 2.0 * static_cast<double>(ce) * static_cast<double>(cc);
  const double den = static_cast<double>(ce) * static_cast<double>(nc) +
                     static_cast<double>(cc) * static_cast<double>(ne);
  s.f1 = den == 0 ? 0.0 : num / den;
  return s;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("pearson: vectors differ in length");
  if (x.size() < 2) throw UndefinedMetricError("pearson: need at least two pairs");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw UndefinedMetricError("pearson: predictions have zero variance");
  if (syy == 0) throw UndefinedMetricError("pearson: reference ratings have zero variance");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace fare
