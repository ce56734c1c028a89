#include "reseval/activity.h"

#include <algorithm>
#include <string>

#include "reseval/error.h"

namespace reseval {

std::string_view label_name(FrameLabel label) {
  switch (label) {
    case FrameLabel::kDoubleTalk: return "DoubleTalk";
    case FrameLabel::kNearEndST: return "NearEndST";
    case FrameLabel::kFarEndST: return "FarEndST";
    case FrameLabel::kSilence: return "Silence";
  }
  return "Silence";
}

std::optional<FrameLabel> parse_label(std::string_view name) {
  for (FrameLabel l : kAllLabels) {
    if (label_name(l) == name) return l;
  }
  return std::nullopt;
}

std::size_t ActivityMask::count(FrameLabel label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

std::vector<bool> frame_active(const Signal& signal, const FrameGrid& grid,
                               double threshold_db) {
  if (grid.signal_len != signal.size()) {
    throw PreconditionError("frame grid built for a different signal length");
  }
  std::vector<bool> active(grid.n_frames);
  for (std::size_t f = 0; f < grid.n_frames; ++f) {
    active[f] = energy_db(grid.frame(signal.samples(), f)) > threshold_db;
  }
  return active;
}

ActivityMask classify(const Signal& s, const Signal& echo_ref,
                      const FrameGrid& grid, double threshold_db) {
  if (s.size() != echo_ref.size()) {
    throw PreconditionError("classify: s and echo reference differ in length");
  }
  const auto near = frame_active(s, grid, threshold_db);
  const auto far = frame_active(echo_ref, grid, threshold_db);
  ActivityMask mask;
  mask.grid = grid;
  mask.threshold_db = threshold_db;
  mask.labels.resize(grid.n_frames);
  for (std::size_t f = 0; f < grid.n_frames; ++f) {
    if (near[f] && far[f]) mask.labels[f] = FrameLabel::kDoubleTalk;
    else if (near[f]) mask.labels[f] = FrameLabel::kNearEndST;
    else if (far[f]) mask.labels[f] = FrameLabel::kFarEndST;
    else mask.labels[f] = FrameLabel::kSilence;
  }
  return mask;
}

ActivityMask classify_scene(const SceneComponents& scene, double threshold_db) {
  const Signal& s = scene.require("s");
  const FrameGrid grid = make_grid(s.size());
  if (scene.y) return classify(s, *scene.y, grid, threshold_db);
  return classify(s, subtract(scene.require("e"), s), grid, threshold_db);
}

std::string mask_to_csv(const ActivityMask& mask) {
  std::string out = "frame_index,label\n";
  for (std::size_t f = 0; f < mask.labels.size(); ++f) {
    out += std::to_string(f);
    out += ',';
    out += label_name(mask.labels[f]);
    out += '\n';
  }
  return out;
}

}  // namespace reseval
