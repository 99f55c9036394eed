#include "locreg/rng.hpp"

#include <cmath>

namespace locreg {

namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

// (0, 1]: the +1 keeps log() finite.
inline double to_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key) {
  std::array<std::uint64_t, 4> c = counter;
  std::array<std::uint64_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMult0, c[0], hi0, lo0);
    mulhilo(kMult1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

void GaussianStream::refill() {
  const std::array<std::uint64_t, 4> words = philox4x64({block_, 0, 0, 0}, key_);
  ++block_;
  constexpr double two_pi = 6.283185307179586476925286766559;
  for (int i = 0; i < 2; ++i) {
    const double u1 = to_unit(words[2 * i]);
    const double u2 = to_unit(words[2 * i + 1]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    buffer_[2 * i] = r * std::cos(two_pi * u2);
    buffer_[2 * i + 1] = r * std::sin(two_pi * u2);
  }
  pos_ = 0;
}

double GaussianStream::next() {
  if (pos_ == kBlockSize) refill();
  return buffer_[pos_++];
}

}  // namespace locreg
