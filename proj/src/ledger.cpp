#include "subhc/ledger.hpp"

#include <algorithm>
#include <numeric>

#include "subhc/types.hpp"

namespace subhc {

ResourceLedger::ResourceLedger(const ResourceLedger& other) { *this = other; }

ResourceLedger& ResourceLedger::operator=(const ResourceLedger& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mu_, other.mu_);
  queries_.store(other.queries_.load());
  stream_peak_ = other.stream_peak_;
  rounds_ = other.rounds_;
  sent_ = other.sent_;
  received_ = other.received_;
  return *this;
}

void ResourceLedger::observe_stream_words(std::uint64_t words) {
  std::lock_guard lock(mu_);
  stream_peak_ = std::max(stream_peak_, words);
}

std::uint64_t ResourceLedger::stream_words() const {
  std::lock_guard lock(mu_);
  return stream_peak_;
}

void ResourceLedger::set_machines(std::size_t k) {
  std::lock_guard lock(mu_);
  if (k < sent_.size()) throw DomainError("ledger: machine count cannot shrink");
  sent_.resize(k, std::vector<std::uint64_t>(rounds_, 0));
  received_.resize(k, std::vector<std::uint64_t>(rounds_, 0));
}

void ResourceLedger::open_round(std::size_t r) {
  std::lock_guard lock(mu_);
  if (r + 1 < rounds_) throw DomainError("ledger: rounds cannot go back");
  rounds_ = std::max(rounds_, r + 1);
  for (auto& row : sent_) row.resize(rounds_, 0);
  for (auto& row : received_) row.resize(rounds_, 0);
}

void ResourceLedger::record_message(std::size_t from, std::size_t to, std::size_t round, std::uint64_t words) {
  std::lock_guard lock(mu_);
  if (from >= sent_.size() || to >= sent_.size() || round >= rounds_) throw DomainError("ledger: bad message");
  sent_[from][round] += words;
  received_[to][round] += words;
}

std::size_t ResourceLedger::rounds() const {
  std::lock_guard lock(mu_);
  return rounds_;
}

std::size_t ResourceLedger::machines() const {
  std::lock_guard lock(mu_);
  return sent_.size();
}

std::uint64_t ResourceLedger::sent(std::size_t machine, std::size_t round) const {
  std::lock_guard lock(mu_);
  return sent_.at(machine).at(round);
}

std::uint64_t ResourceLedger::received(std::size_t machine, std::size_t round) const {
  std::lock_guard lock(mu_);
  return received_.at(machine).at(round);
}

std::uint64_t ResourceLedger::total_sent() const {
  std::lock_guard lock(mu_);
  std::uint64_t s = 0;
  for (const auto& row : sent_) s = std::accumulate(row.begin(), row.end(), s);
  return s;
}

std::uint64_t ResourceLedger::total_received() const {
  std::lock_guard lock(mu_);
  std::uint64_t s = 0;
  for (const auto& row : received_) s = std::accumulate(row.begin(), row.end(), s);
  return s;
}

}  // namespace subhc
