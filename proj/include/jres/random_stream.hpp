#pragma once

#include <array>
#include <cstdint>

namespace jres {

/// Philox4x32-10 block function (Salmon et al., SC'11).
///
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Counter-based random stream identified by (seed, stream_id).
///
/// The seed is the Philox key; the stream id occupies the upper 64 bits of
/// the counter and the draw index the lower 64 bits. Two streams with the
/// same pair produce identical sequences; streams never share state, so a
/// stream may be moved to another thread but must not be used concurrently.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  /// Number of 128-bit blocks consumed so far.
  std::uint64_t position() const noexcept { return block_; }

  /// Next 32 random bits.
  std::uint32_t next_u32() noexcept;
  /// Next 64 random bits.
  std::uint64_t next_u64() noexcept;
  /// Uniform double in the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;

  /// Stream for an independent substream of this seed.
  RandomStream substream(std::uint64_t stream_id) const noexcept {
    return RandomStream(seed_, stream_id);
  }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

/// Stream id for trial `trial` of the experiment component tagged `purpose`.
/// Distinct (purpose, trial) pairs map to distinct ids.
constexpr std::uint64_t stream_id_for(std::uint32_t purpose, std::uint64_t trial) noexcept {
  return (static_cast<std::uint64_t>(purpose) << 40) ^ trial;
}

}  // namespace jres
