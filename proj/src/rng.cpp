#include "rng.hpp"

#include <gsl/gsl_randist.h>
#include <gsl/gsl_rng.h>

#include <limits>
#include <stdexcept>

namespace episim {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

unsigned int as_uint(std::uint64_t n) {
  if (n > std::numeric_limits<unsigned int>::max())
    throw std::invalid_argument("count exceeds sampler range");
  return static_cast<unsigned int>(n);
}
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, std::uint64_t index) {
  std::uint64_t h = mix64(base + kGolden);
  h = mix64(h ^ (tag * kGolden + 1));
  h = mix64(h ^ (index * kGolden + 1));
  return h;
}

namespace {
gsl_rng* as_gsl(void* p) { return static_cast<gsl_rng*>(p); }
}  // namespace

RngStream::RngStream(std::uint64_t seed) {
  rng_ = gsl_rng_alloc(gsl_rng_mt19937);
  if (!rng_) throw std::runtime_error("gsl_rng_alloc failed");
  gsl_rng_set(as_gsl(rng_), static_cast<unsigned long>(seed));
}

RngStream::~RngStream() {
  if (rng_) gsl_rng_free(as_gsl(rng_));
}

RngStream::RngStream(RngStream&& other) noexcept : rng_(other.rng_) { other.rng_ = nullptr; }

RngStream& RngStream::operator=(RngStream&& other) noexcept {
  if (this != &other) {
    if (rng_) gsl_rng_free(as_gsl(rng_));
    rng_ = other.rng_;
    other.rng_ = nullptr;
  }
  return *this;
}

double RngStream::uniform() { return gsl_rng_uniform(as_gsl(rng_)); }

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
  return gsl_rng_uniform_int(as_gsl(rng_), static_cast<unsigned long>(n));
}

std::uint64_t RngStream::binomial(std::uint64_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  return gsl_ran_binomial(as_gsl(rng_), p, as_uint(n));
}

void RngStream::multinomial(std::span<const double> p, std::uint64_t n,
                            std::span<unsigned int> out) {
  gsl_ran_multinomial(as_gsl(rng_), p.size(), as_uint(n), p.data(), out.data());
}

std::uint64_t RngStream::hypergeometric(std::uint64_t n_success, std::uint64_t n_fail,
                                        std::uint64_t draws) {
  if (draws == 0 || n_success == 0) return 0;
  if (n_fail == 0) return draws <= n_success ? draws : n_success;
  return gsl_ran_hypergeometric(as_gsl(rng_), as_uint(n_success), as_uint(n_fail),
                                as_uint(draws));
}

}  // namespace episim
