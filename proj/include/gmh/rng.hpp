#pragma once

#include <cstdint>
#include <random>

namespace gmh {

/// Seeded random stream owned by exactly one chain.
///
/// The engine is seeded from (seed, stream id) through std::seed_seq, so each
/// replication gets its own decorrelated stream from a single base seed, and
/// replaying the same pair reproduces every draw bit for bit.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  std::uint64_t bits() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace gmh
