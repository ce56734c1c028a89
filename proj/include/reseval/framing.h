#pragma once

#include <cstddef>
#include <span>

namespace reseval {

inline constexpr std::size_t kFrameLen = 320;  // 20 ms at 16 kHz
inline constexpr std::size_t kHop = kFrameLen / 2;

// Frame i covers samples [i*hop, i*hop + frame_len). Tail samples not covered
// by a complete frame belong to no frame.
struct FrameGrid {
  std::size_t frame_len = kFrameLen;
  std::size_t hop = kHop;
  std::size_t n_frames = 0;
  std::size_t signal_len = 0;

  std::size_t start(std::size_t frame) const { return frame * hop; }

  // Samples of `frame` within a sequence of length signal_len.
  template <typename T>
  std::span<T> frame(std::span<T> x, std::size_t index) const {
    return x.subspan(start(index), frame_len);
  }

  friend bool operator==(const FrameGrid&, const FrameGrid&) = default;
};

FrameGrid make_grid(std::size_t signal_len);

}  // namespace reseval
