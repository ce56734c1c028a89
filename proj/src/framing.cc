#include "reseval/framing.h"

namespace reseval {

FrameGrid make_grid(std::size_t signal_len) {
  FrameGrid grid;
  grid.signal_len = signal_len;
  grid.n_frames =
      signal_len < grid.frame_len ? 0 : (signal_len - grid.frame_len) / grid.hop + 1;
  return grid;
}

}  // namespace reseval
