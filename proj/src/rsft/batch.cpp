#include "fare/rsft/batch.hpp"

#include <algorithm>
#include <cmath>

#include "fare/core/error.hpp"
#include "fare/core/rng.hpp"

namespace fare {

std::map<TaskKind, std::size_t> apportion(std::size_t size, const TaskFractions& weights) {
  double total = 0;
  for (const auto& [_, w] : weights) total += std::max(0.0, w);
  std::map<TaskKind, std::size_t> out;
  if (total <= 0 || size == 0) return out;

  struct Share {
    TaskKind task;
    double rest;
  };
  std::vector<Share> shares;
  std::size_t assigned = 0;
  for (const auto& [task, w] : weights) {
    if (w <= 0) continue;
    const double exact = static_cast<double>(size) * w / total;
    const auto base = static_cast<std::size_t>(std::floor(exact));
    out[task] = base;
    assigned += base;
    shares.push_back({task, exact - static_cast<double>(base)});
  }
  std::stable_sort(shares.begin(), shares.end(),
                   [](const Share& a, const Share& b) { return a.rest > b.rest; });
  for (std::size_t i = 0; assigned < size; ++i, ++assigned) ++out[shares[i % shares.size()].task];
  return out;
}

TaskFractions task_composition(std::span<const LabeledSample> samples) {
  TaskFractions out;
  if (samples.empty()) return out;
  for (const auto& s : samples) out[s.task()] += 1.0;
  for (auto& [_, f] : out) f /= static_cast<double>(samples.size());
  return out;
}

RolloutBatch compose_batch(std::span<const LabeledSample> pool, std::set<std::string>& seen,
                           std::size_t size, const TaskFractions& mix, std::uint64_t seed) {
  std::map<TaskKind, std::vector<std::size_t>> avail;
  std::size_t unseen = 0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (seen.count(pool[i].id())) continue;
    avail[pool[i].task()].push_back(i);
    ++unseen;
  }
  if (unseen == 0) throw PoolExhaustedError("no unseen samples left in the pool");

  RolloutBatch batch;
  std::size_t remaining = std::min(size, unseen);
  TaskFractions weights;
  for (const auto& [task, list] : avail) {
    const auto it = mix.find(task);
    if (it != mix.end() && it->second > 0) weights[task] = it->second;
  }
  while (remaining > 0) {
    if (weights.empty()) {
      // Everything the mix asks for is used up; fall back to what is left.
      for (const auto& [task, list] : avail) {
        const std::size_t left = list.size() - batch.per_task[task];
        if (left > 0) weights[task] = static_cast<double>(left);
      }
    }
    const auto quotas = apportion(remaining, weights);
    bool short_any = false;
    for (const auto& [task, q] : quotas) {
      const std::size_t left = avail[task].size() - batch.per_task[task];
      if (q > left) {
        short_any = true;
        batch.per_task[task] += left;
        remaining -= left;
        weights.erase(task);
      }
    }
    if (short_any) continue;
    for (const auto& [task, q] : quotas) batch.per_task[task] += q;
    remaining = 0;
  }

  Rng rng(seed);
  for (auto& [task, list] : avail) {
    const std::size_t want = batch.per_task[task];
    for (std::size_t i = 0; i < want; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.uniform_index(list.size() - i));
      std::swap(list[i], list[j]);
    }
    batch.indices.insert(batch.indices.end(), list.begin(), list.begin() + static_cast<long>(want));
  }
  std::sort(batch.indices.begin(), batch.indices.end());
  for (auto it = batch.per_task.begin(); it != batch.per_task.end();) {
    it = it->second == 0 ? batch.per_task.erase(it) : std::next(it);
  }
  for (auto i : batch.indices) seen.insert(pool[i].id());
  return batch;
}

}  // namespace fare
