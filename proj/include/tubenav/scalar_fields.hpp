#pragma once

#include <Eigen/Core>

namespace tubenav {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Left-hand normal of a direction.
inline Vec2 rotate_left(const Vec2& v) { return {-v.y(), v.x()}; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Scale factor in (0, 1] that caps the norm of v at v_max; 1 for the zero vector.
double saturation_gain(const Vec2& v, double v_max);
Vec2 saturate(const Vec2& v, double v_max);

// C2 step that is 1 below d1, 0 above d2, cubic in between.
class Bump {
 public:
  Bump(double d1, double d2);

  double operator()(double x) const;
  double derivative(double x) const;

  double d1() const { return d1_; }
  double d2() const { return d2_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

 private:
  double d1_, d2_;
  double a_, b_, c_, d_;
};

// C1 approximation of min(x, 1): linear, then a circular arc of radius eps, then flat.
class SmoothSaturation {
 public:
  explicit SmoothSaturation(double eps);

  double operator()(double x) const;
  double derivative(double x) const;

  double epsilon() const { return eps_; }
  double x1() const { return x1_; }
  double x2() const { return x2_; }

  static double max_epsilon();

 private:
  double eps_;
  double x1_, x2_;
};

}  // namespace tubenav
