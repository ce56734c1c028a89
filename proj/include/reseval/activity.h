#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reseval/framing.h"
#include "reseval/signal.h"

namespace reseval {

inline constexpr double kDefaultThresholdDb = -50.0;

enum class FrameLabel { kDoubleTalk, kNearEndST, kFarEndST, kSilence };

inline constexpr FrameLabel kAllLabels[] = {
    FrameLabel::kDoubleTalk, FrameLabel::kNearEndST, FrameLabel::kFarEndST,
    FrameLabel::kSilence};

std::string_view label_name(FrameLabel label);
std::optional<FrameLabel> parse_label(std::string_view name);

struct ActivityMask {
  std::vector<FrameLabel> labels;
  FrameGrid grid;
  double threshold_db = kDefaultThresholdDb;

  std::size_t count(FrameLabel label) const;
};

// Frame i is active iff energy_db(frame i) > threshold_db.
std::vector<bool> frame_active(const Signal& signal, const FrameGrid& grid,
                               double threshold_db);

// Labels frames from the near-end speech and an echo-side reference (the true
// echo y when known, otherwise the noisy residual e - s). Noise plays no part.
ActivityMask classify(const Signal& s, const Signal& echo_ref,
                      const FrameGrid& grid,
                      double threshold_db = kDefaultThresholdDb);

// Picks y when present, else e - s, and labels the scene on its full grid.
ActivityMask classify_scene(const SceneComponents& scene,
                            double threshold_db = kDefaultThresholdDb);

// "frame_index,label" rows with a header.
std::string mask_to_csv(const ActivityMask& mask);

}  // namespace reseval
