#pragma once

#include <array>
#include <cstdint>

namespace locreg {

// Identifies one reproducible random stream: every path of a Monte Carlo
// ensemble gets its own stream_index under a shared master_seed.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

// Philox 4x64 with 10 rounds, the counter-based block cipher of Salmon et al.
// Splittable by construction: the key selects the stream, the counter the
// position, so (master_seed, stream_index) streams never overlap.
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

// Counter-based stream of standard Gaussian variates (Box-Muller over Philox
// output). Deterministic in the seed; identical results regardless of how the
// stream is interleaved with other streams.
class GaussianStream {
public:
  explicit GaussianStream(SeedSpec seed)
      : key_{seed.master_seed, seed.stream_index}, block_(0), pos_(kBlockSize) {}

  double next();

private:
  static constexpr int kBlockSize = 4;

  void refill();

  std::array<std::uint64_t, 2> key_;
  std::uint64_t block_;
  int pos_;
  std::array<double, kBlockSize> buffer_{};
};

}  // namespace locreg
