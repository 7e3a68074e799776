#pragma once
// Counter-based random streams: Philox4x32-10 keyed by the root seed, with
// the replica id in the counter block.  Identical (root_seed, replica_id)
// replay identical draw sequences bit-exactly regardless of scheduling;
// distinct replica ids give independent streams.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace shmod::stochastic {

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0,
                         std::uint32_t k1) {
  const std::uint64_t p0 = 0xD2511F53ULL * c[0];
  const std::uint64_t p1 = 0xCD9E8D57ULL * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

inline std::array<std::uint32_t, 4> philox4x32_10(std::uint64_t key,
                                                  std::array<std::uint32_t, 4> ctr) {
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    philox_round(ctr, k0, k1);
    k0 += 0x9E3779B9u;
    k1 += 0xBB67AE85u;
  }
  return ctr;
}

}  // namespace detail

class NoiseStream {
 public:
  NoiseStream(std::uint64_t root_seed, std::uint64_t replica_id)
      : root_seed_(root_seed), replica_id_(replica_id) {}

  std::uint64_t root_seed() const { return root_seed_; }
  std::uint64_t replica_id() const { return replica_id_; }
  std::uint64_t draws() const { return counter_; }

  // One complex standard normal: independent real/imaginary parts of
  // variance 1/2, so E|z|^2 = 1 and E z^2 = 0.
  std::complex<double> next_complex_normal() {
    const std::uint64_t n = counter_++;
    const auto out = detail::philox4x32_10(
        root_seed_,
        {static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32),
         static_cast<std::uint32_t>(replica_id_),
         static_cast<std::uint32_t>(replica_id_ >> 32)});
    const std::uint64_t a =
        (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    const std::uint64_t b =
        (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;          // [0,1)
    const double r = std::sqrt(-std::log(u1));
    const double phase = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phase), r * std::sin(phase)};
  }

 private:
  std::uint64_t root_seed_;
  std::uint64_t replica_id_;
  std::uint64_t counter_ = 0;
};

inline std::vector<std::complex<double>> sample_complex_gaussian(
    NoiseStream& stream, std::size_t n) {
  std::vector<std::complex<double>> out(n);
  for (auto& z : out) z = stream.next_complex_normal();
  return out;
}

}  // namespace shmod::stochastic
