#ifndef SUBHC_TYPES_HPP
#define SUBHC_TYPES_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace subhc {

using Vertex = std::uint32_t;
using Rational = boost::multiprecision::cpp_rational;

/// Input outside an operation's domain (bad vertex id, bad parameter range).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A pluggable component broke its contract (e.g. a cut oracle returned an improper split).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An MPC machine exceeded its per-round word budget, or a message was read too early.
class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sketch-based sparsifier recovery stalled: a nonempty supernode failed on every sampler copy.
class RecoveryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// splitmix64 finalizer; the base of every seed derivation and sketch hash.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed) noexcept { return mix64(seed); }

template <typename... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, Tags... rest) noexcept {
  return derive_seed(mix64(seed ^ mix64(tag + 0x632be59bd9b4e019ULL)), static_cast<std::uint64_t>(rest)...);
}

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits; independent of the standard library's distributions.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

template <typename Scalar>
double to_double(const Scalar& x) {
  return static_cast<double>(x);
}

}  // namespace subhc

#endif  // SUBHC_TYPES_HPP
