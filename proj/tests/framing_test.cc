#include "reseval/framing.h"

#include <gtest/gtest.h>

#include <random>

namespace reseval {
namespace {

TEST(FrameGridTest, FrameCounts) {
  EXPECT_EQ(make_grid(320).n_frames, 1u);
  EXPECT_EQ(make_grid(480).n_frames, 2u);
  EXPECT_EQ(make_grid(479).n_frames, 1u);
  EXPECT_EQ(make_grid(160000).n_frames, 999u);
  EXPECT_EQ(make_grid(319).n_frames, 0u);
  EXPECT_EQ(make_grid(0).n_frames, 0u);
}

TEST(FrameGridTest, MatchesEnumerationOfFullFrames) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> len(0, 20000);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = len(rng);
    std::size_t expected = 0;
    for (std::size_t start = 0; start + 320 <= n; start += 160) ++expected;
    const FrameGrid grid = make_grid(n);
    ASSERT_EQ(grid.n_frames, expected) << "length " << n;
    if (expected > 0) {
      EXPECT_LE(grid.start(grid.n_frames - 1) + grid.frame_len, n);
      EXPECT_GT(grid.start(grid.n_frames) + grid.frame_len, n);
    }
  }
}

TEST(FrameGridTest, FrameViewsAreContiguousSlices) {
  std::vector<int> x(800);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<int>(i);
  const FrameGrid grid = make_grid(x.size());
  const auto f = grid.frame(std::span<const int>(x), 2);
  ASSERT_EQ(f.size(), 320u);
  EXPECT_EQ(f.front(), 320);
  EXPECT_EQ(f.back(), 639);
}

}  // namespace
}  // namespace reseval
