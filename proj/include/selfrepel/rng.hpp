// Copyright 2026 The selfrepel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SELFREPEL_RNG_HPP
#define SELFREPEL_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace selfrepel {

/// Philox4x32-10 counter-based generator.
/**
 * The 64-bit key is derived from the seed and the 64-bit stream id occupies the upper half of the
 * 128-bit counter, so streams (seed, 0), (seed, 1), ... never overlap. The whole state is
 * (seed, stream, block, lane), which makes checkpointing a matter of copying four integers.
 *
 * Satisfies std::uniform_random_bit_generator. Gaussian deviates come from `normal()`, which does
 * not cache a second value, so the state stays fully described by `State`.
 */
class CounterRng {
 public:
  using result_type = std::uint64_t;

  struct State {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t block = 0;
    std::uint32_t lane = 0;
    friend bool operator==(const State&, const State&) = default;
  };

  explicit CounterRng(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept;
  explicit CounterRng(const State& state) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1].
  double uniform_open_zero() noexcept;
  double normal() noexcept;
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

  [[nodiscard]] State state() const noexcept { return state_; }

  /// Independent generator on stream `stream` with the same seed.
  [[nodiscard]] CounterRng split(std::uint64_t stream) const noexcept { return CounterRng(state_.seed, stream); }

 private:
  void refill() noexcept;

  State state_;
  std::array<std::uint64_t, 2> buffer_{};
};

}  // namespace selfrepel

#endif
