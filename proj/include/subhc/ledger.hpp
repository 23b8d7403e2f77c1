#ifndef SUBHC_LEDGER_HPP
#define SUBHC_LEDGER_HPP

#include <atomic>
#include <cstdint>
#include <mutex>
#include <vector>

namespace subhc {

/// Resource counters for the three computation models. Every counter only grows.
///
/// Query charges are atomic so concurrent samplers can share one oracle. MPC traffic is
/// recorded per machine and per round.
class ResourceLedger {
 public:
  ResourceLedger() = default;
  ResourceLedger(const ResourceLedger& other);
  ResourceLedger& operator=(const ResourceLedger& other);

  void charge_queries(std::uint64_t k = 1) noexcept { queries_.fetch_add(k, std::memory_order_relaxed); }
  std::uint64_t query_count() const noexcept { return queries_.load(std::memory_order_relaxed); }

  /// Records the current stream working-set size; the ledger keeps the peak.
  void observe_stream_words(std::uint64_t words);
  std::uint64_t stream_words() const;

  void set_machines(std::size_t k);
  /// Opens round r (0-based); rounds() becomes r + 1.
  void open_round(std::size_t r);
  void record_message(std::size_t from, std::size_t to, std::size_t round, std::uint64_t words);

  std::size_t rounds() const;
  std::size_t machines() const;
  std::uint64_t sent(std::size_t machine, std::size_t round) const;
  std::uint64_t received(std::size_t machine, std::size_t round) const;
  std::uint64_t total_sent() const;
  std::uint64_t total_received() const;

 private:
  std::atomic<std::uint64_t> queries_{0};
  mutable std::mutex mu_;
  std::uint64_t stream_peak_ = 0;
  std::size_t rounds_ = 0;
  // [machine][round]
  std::vector<std::vector<std::uint64_t>> sent_;
  std::vector<std::vector<std::uint64_t>> received_;
};

}  // namespace subhc

#endif  // SUBHC_LEDGER_HPP
