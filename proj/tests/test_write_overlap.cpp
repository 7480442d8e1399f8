#include <cmath>

#include "doctest.h"
#include "fdmsnn/write_overlap.hpp"

using namespace fdmsnn;

TEST_CASE("pair extrema follow the tail-under-apex closed forms") {
  WritePulseParams pre{0.5, 2e-3, 10e-3};
  WritePulseParams post{0.5, 2e-3, 20e-3};
  PulsePairModel pairs(pre, post);

  // Post-after-pre: the post hump rides the pre tail; depth decays with the
  // pre tail constant. Tail start 1.5 ms, hump apex +0.5 ms.
  for (double dt : {2e-3, 5e-3, 10e-3, 20e-3, 40e-3}) {
    const double expected = -0.5 - 0.5 * std::exp(-(dt - 1e-3) / 10e-3);
    CHECK(pairs.v_min(dt) == doctest::Approx(expected).epsilon(2e-3));
  }
  // Pre-after-post: mirrored with the post tail constant.
  for (double dt : {2e-3, 5e-3, 10e-3, 20e-3, 40e-3}) {
    const double expected = 0.5 + 0.5 * std::exp(-(dt - 1e-3) / 20e-3);
    CHECK(pairs.v_max(-dt) == doctest::Approx(expected).epsilon(2e-3));
  }
}

TEST_CASE("near coincidence suppresses the overlap") {
  WritePulseParams pre{0.5, 2e-3, 10e-3};
  WritePulseParams post{0.5, 2e-3, 20e-3};
  PulsePairModel pairs(pre, post);
  // Identical sine sections cancel at dt = 0; only the tail mismatch remains.
  CHECK(pairs.v_min(0.0) > -0.55);
  CHECK(pairs.v_max(0.0) < 0.55);
  // The hump-on-hump region never reaches the tail-under-apex depth.
  CHECK(pairs.v_min(1e-3) > -0.5 - 0.5 * std::exp(0.0));
}

TEST_CASE("far separation decays to single-pulse levels") {
  WritePulseParams pre{0.5, 2e-3, 10e-3};
  WritePulseParams post{0.5, 2e-3, 20e-3};
  PulsePairModel pairs(pre, post);
  CHECK(pairs.v_min(0.2) == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(pairs.v_max(-0.5) == doctest::Approx(0.5).epsilon(1e-6));
  // 200 ms separation: overlap below 1e-8 of the 10 ms value.
  const double depth_10 = -0.5 - pairs.v_min(10e-3);
  const double depth_200 = -0.5 - pairs.v_min(0.2);
  CHECK(std::fabs(depth_200) < 0.01 * std::fabs(depth_10));
}
