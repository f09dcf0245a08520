#pragma once

#include <cmath>
#include <array>

namespace crt {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }
inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }

// Signed area of triangle (a,b,c), positive when counterclockwise.
// Uses the translated cross product so cancellation stays proportional
// to the triangle scale rather than the coordinate magnitude.
inline double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * cross(b - a, c - a);
}

// Diameter of the circumscribed circle of triangle (a,b,c).
inline double circumdiameter(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double la = dist(b, c);
  const double lb = dist(a, c);
  const double lc = dist(a, b);
  const double area = std::abs(signed_area(a, b, c));
  return la * lb * lc / (2.0 * area);
}

// Barycentric coordinates of p in triangle (a,b,c).
inline std::array<double, 3> barycentric(const Vec2& a, const Vec2& b,
                                         const Vec2& c, const Vec2& p) {
  const double area = signed_area(a, b, c);
  return {signed_area(p, b, c) / area,
          signed_area(a, p, c) / area,
          signed_area(a, b, p) / area};
}

// Kahan compensated accumulator.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace crt
