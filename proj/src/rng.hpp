#pragma once

#include <cstdint>
#include <span>

namespace episim {

/// SplitMix64 finalizer, used only to derive decorrelated child seeds.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic seed derivation: base scenario seed -> (stream tag, index).
/// Stream tags below keep the seeding draws identical across replicas and
/// sweep cells while dynamics streams stay independent.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, std::uint64_t index = 0);

inline constexpr std::uint64_t kSeedingStream = 1;
inline constexpr std::uint64_t kDynamicsStream = 2;
inline constexpr std::uint64_t kSynthStream = 3;

/// Algorithm identifier pinned into output metadata.
inline constexpr const char* kRngAlgorithm = "splitmix64-derive+gsl-mt19937";

/// Seeded mt19937 stream (GSL) with the samplers the engines need.
/// Draws with zero count or degenerate probability return without consuming
/// stream state, which is part of the reproducibility contract.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);
  ~RngStream();
  RngStream(RngStream&&) noexcept;
  RngStream& operator=(RngStream&&) noexcept;
  RngStream(const RngStream&) = delete;
  RngStream& operator=(const RngStream&) = delete;

  double uniform();                              // [0,1)
  std::uint64_t uniform_int(std::uint64_t n);    // [0,n)
  std::uint64_t binomial(std::uint64_t n, double p);
  /// Splits `n` over `p.size()` categories; weights need not be normalized.
  void multinomial(std::span<const double> p, std::uint64_t n, std::span<unsigned int> out);
  /// Successes among `draws` taken without replacement from n_success + n_fail.
  std::uint64_t hypergeometric(std::uint64_t n_success, std::uint64_t n_fail,
                               std::uint64_t draws);

 private:
  void* rng_ = nullptr;  // gsl_rng*, kept opaque (GSL's typedef is anonymous)
};

}  // namespace episim
