#include "rng.hpp"

#include <cmath>

namespace affdim {

namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key) {
  std::array<std::uint64_t, 4> x = counter;
  std::uint64_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, x[0], hi0, lo0);
    mulhilo(kM1, x[2], hi1, lo1);
    x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
    k0 += kW0;
    k1 += kW1;
  }
  return x;
}

std::array<std::uint64_t, 4> rand_block(std::uint64_t seed, std::uint64_t c0,
                                        std::uint64_t c1) {
  return philox4x64({c0, c1, 0, 0}, {seed, 0});
}

std::uint64_t rand_u64(std::uint64_t seed, std::uint64_t c0, std::uint64_t c1) {
  return rand_block(seed, c0, c1)[0];
}

double rand_uniform(std::uint64_t seed, std::uint64_t c0, std::uint64_t c1) {
  return static_cast<double>(rand_u64(seed, c0, c1) >> 11) * 0x1.0p-53;
}

double rand_gaussian(std::uint64_t seed, std::uint64_t c0, std::uint64_t c1) {
  auto blk = rand_block(seed, c0, c1);
  double u1 = static_cast<double>((blk[0] >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  double u2 = static_cast<double>(blk[1] >> 11) * 0x1.0p-53;        // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace affdim
