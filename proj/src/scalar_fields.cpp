#include "tubenav/scalar_fields.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tubenav/errors.hpp"

namespace tubenav {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
const double kTan675 = std::tan(67.5 * kDeg);
const double kSin45 = std::sin(45.0 * kDeg);

}  // namespace

double saturation_gain(const Vec2& v, double v_max) {
  const double n = v.norm();
  return n <= v_max ? 1.0 : v_max / n;
}

Vec2 saturate(const Vec2& v, double v_max) { return saturation_gain(v, v_max) * v; }

Bump::Bump(double d1, double d2) : d1_(d1), d2_(d2) {
  if (!(d1 < d2)) fail(Fault::InvalidConfig, "bump requires d1 < d2");
  const double den = std::pow(d1 - d2, 3);
  a_ = -2.0 / den;
  b_ = 3.0 * (d1 + d2) / den;
  c_ = -6.0 * d1 * d2 / den;
  d_ = d2 * d2 * (3.0 * d1 - d2) / den;
}

double Bump::operator()(double x) const {
  if (x < d1_) return 1.0;
  if (x >= d2_) return 0.0;
  return ((a_ * x + b_) * x + c_) * x + d_;
}

double Bump::derivative(double x) const {
  if (x < d1_ || x >= d2_) return 0.0;
  return (3.0 * a_ * x + 2.0 * b_) * x + c_;
}

SmoothSaturation::SmoothSaturation(double eps) : eps_(eps) {
  if (!(eps >= 0.0 && eps <= max_epsilon()))
    fail(Fault::EpsilonOutOfRange, "smooth saturation epsilon out of range: " + std::to_string(eps));
  x2_ = 1.0 + eps / kTan675;
  x1_ = x2_ - kSin45 * eps;
}

double SmoothSaturation::max_epsilon() { return kTan675 / (kTan675 * kSin45 - 1.0); }

double SmoothSaturation::operator()(double x) const {
  if (x < x1_) return x;
  if (x >= x2_) return 1.0;
  const double dx = x - x2_;
  return (1.0 - eps_) + std::sqrt(std::max(0.0, eps_ * eps_ - dx * dx));
}

double SmoothSaturation::derivative(double x) const {
  if (x < x1_) return 1.0;
  if (x >= x2_) return 0.0;
  const double dx = x - x2_;
  return -dx / std::sqrt(eps_ * eps_ - dx * dx);
}

}  // namespace tubenav
