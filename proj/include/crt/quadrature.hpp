#pragma once

#include <array>

#include "crt/geometry.hpp"

namespace crt {

struct TriQuadPoint {
  std::array<double, 3> lambda;
  double weight;  // relative to cell area
};

// Edge-midpoint rule, exact for degree 2 on triangles.
inline const std::array<TriQuadPoint, 3>& tri_midpoint_rule() {
  static const std::array<TriQuadPoint, 3> rule = {{
      {{0.0, 0.5, 0.5}, 1.0 / 3.0},
      {{0.5, 0.0, 0.5}, 1.0 / 3.0},
      {{0.5, 0.5, 0.0}, 1.0 / 3.0},
  }};
  return rule;
}

// Six-point rule, exact for degree 4.
inline const std::array<TriQuadPoint, 6>& tri_degree4_rule() {
  constexpr double a1 = 0.445948490915965;
  constexpr double w1 = 0.223381589678011;
  constexpr double a2 = 0.091576213509771;
  constexpr double w2 = 0.109951743655322;
  static const std::array<TriQuadPoint, 6> rule = {{
      {{1.0 - 2.0 * a1, a1, a1}, w1},
      {{a1, 1.0 - 2.0 * a1, a1}, w1},
      {{a1, a1, 1.0 - 2.0 * a1}, w1},
      {{1.0 - 2.0 * a2, a2, a2}, w2},
      {{a2, 1.0 - 2.0 * a2, a2}, w2},
      {{a2, a2, 1.0 - 2.0 * a2}, w2},
  }};
  return rule;
}

// Two-point Gauss rule on [0,1], exact for degree 3.
struct SegQuadPoint {
  double s;       // parameter in [0,1]
  double weight;  // relative to segment length
};

inline const std::array<SegQuadPoint, 2>& seg_gauss2_rule() {
  constexpr double d = 0.28867513459481287;  // 1/(2*sqrt(3))
  static const std::array<SegQuadPoint, 2> rule = {{
      {0.5 - d, 0.5},
      {0.5 + d, 0.5},
  }};
  return rule;
}

inline Vec2 bary_point(const std::array<Vec2, 3>& v,
                       const std::array<double, 3>& lambda) {
  return v[0] * lambda[0] + v[1] * lambda[1] + v[2] * lambda[2];
}

}  // namespace crt
