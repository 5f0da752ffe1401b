#pragma once

#include <array>
#include <cstdint>

namespace affdim {

// Philox4x64-10 counter-based generator. Every draw is addressed by
// (seed, c0, c1): equal addresses give equal values regardless of how work
// is partitioned across threads, which is what makes sampling independent
// of the worker count.
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

std::array<std::uint64_t, 4> rand_block(std::uint64_t seed, std::uint64_t c0,
                                        std::uint64_t c1);

std::uint64_t rand_u64(std::uint64_t seed, std::uint64_t c0, std::uint64_t c1);

// Uniform on [0, 1), 53-bit resolution.
double rand_uniform(std::uint64_t seed, std::uint64_t c0, std::uint64_t c1);

// Standard normal via Box-Muller on one Philox block (deterministic).
double rand_gaussian(std::uint64_t seed, std::uint64_t c0, std::uint64_t c1);

// Draw-kind tags packed into the second counter word, next to the
// coordinate index: c1 = (coord << 8) | kind.
enum class DrawKind : std::uint64_t {
  kJointCell = 0,   // which (nu, x_d) support cell
  kNuBit = 1,       // per-coordinate Bernoulli
  kAtom = 2,        // per-coordinate atom pick
  kContinuous = 3,  // continuous component value
};

inline std::uint64_t draw_counter(std::uint64_t coord, DrawKind kind) {
  return (coord << 8) | static_cast<std::uint64_t>(kind);
}

}  // namespace affdim
