#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace pathwise {

/// Standard normals from mt19937_64 by the Marsaglia polar method; the
/// uniforms use the top 53 bits. Identical output on every standard library.
class PolarNormal {
 public:
  explicit PolarNormal(std::uint64_t seed) : gen_(seed) {}

  double operator()();

 private:
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// A seeded scalar Brownian path on a fixed grid t_i = i dt, i = 0..N.
///
/// Generator: std::mt19937_64 seeded with `seed`; uniforms from the top 53
/// bits; standard normals by the Marsaglia polar method, both values of each
/// accepted pair used in order. std::normal_distribution is avoided because
/// its output differs between standard libraries.
class BrownianPath {
 public:
  static constexpr const char* kGenerator = "mt19937_64+marsaglia-polar/v1";

  BrownianPath() = default;
  static BrownianPath generate(std::uint64_t seed, double dt, std::int64_t steps);

  std::uint64_t seed() const { return seed_; }
  double dt() const { return dt_; }
  std::int64_t steps() const { return static_cast<std::int64_t>(increments_.size()); }
  double horizon() const { return dt_ * static_cast<double>(steps()); }

  /// W(t_{i+1}) - W(t_i), i = 0..N-1.
  double increment(std::int64_t i) const { return increments_[static_cast<std::size_t>(i)]; }
  /// W(t_i), i = 0..N, with W(0) = 0.
  double W(std::int64_t i) const { return cumulative_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& increments() const { return increments_; }

  /// Sum of `count` increments starting at step `start`, added in order.
  double increment_sum(std::int64_t start, std::int64_t count) const;

  /// The same path at resolution block * dt (block must divide N).
  BrownianPath aggregate(int block) const;

  /// "generator=...;seed=...;dt=...;steps=..."
  std::string metadata() const;

 private:
  std::uint64_t seed_ = 0;
  double dt_ = 0.0;
  std::vector<double> increments_;
  std::vector<double> cumulative_;
};

}  // namespace pathwise
