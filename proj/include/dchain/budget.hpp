#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>

namespace dchain {

/// Node-count and wall-clock limit shared by the exhaustive searches. Zero
/// means unlimited. Running out is reported as an inconclusive outcome.
class SearchBudget {
 public:
  using Clock = std::chrono::steady_clock;

  SearchBudget() = default;
  SearchBudget(std::uint64_t max_nodes, std::optional<std::chrono::milliseconds> time_limit)
      : max_nodes_(max_nodes) {
    if (time_limit) deadline_ = Clock::now() + *time_limit;
  }

  /// Counts one search node; returns false once the budget is spent.
  bool tick() {
    const std::uint64_t n = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (max_nodes_ != 0 && n > max_nodes_) exhausted_.store(true, std::memory_order_relaxed);
    // Clock reads are comparatively slow; sample them.
    if (deadline_ && (n & 0x3FF) == 0 && Clock::now() > *deadline_) exhausted_.store(true, std::memory_order_relaxed);
    return !exhausted_.load(std::memory_order_relaxed);
  }

  bool exhausted() const { return exhausted_.load(std::memory_order_relaxed); }
  std::uint64_t nodes() const { return nodes_.load(std::memory_order_relaxed); }
  std::uint64_t max_nodes() const { return max_nodes_; }

 private:
  std::uint64_t max_nodes_ = 0;
  std::optional<Clock::time_point> deadline_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<bool> exhausted_{false};
};

}  // namespace dchain
