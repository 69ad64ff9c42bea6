#include "ricb/angle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ricb/error.hpp"

namespace ricb {

AngleDeg wrap_deg(double degrees) {
  if (!std::isfinite(degrees)) {
    throw Error(ErrorCode::NonFinite, "angle is not finite");
  }
  double r = std::fmod(degrees, 360.0);
  if (r < 0.0) r += 360.0;
  // -tiny + 360 rounds to 360
  if (r >= 360.0) r = 0.0;
  if (r == 0.0) r = 0.0;  // drop negative zero
  return AngleDeg(r);
}

double angular_error(AngleDeg a, AngleDeg b) {
  double d = std::fabs(a.value() - b.value());
  return std::min(d, 360.0 - d);
}

CosSin cos_sin_deg(double degrees) {
  double r = std::fmod(degrees, 360.0);
  if (r < 0.0) r += 360.0;
  if (r == 0.0) return {1.0, 0.0};
  if (r == 90.0) return {0.0, 1.0};
  if (r == 180.0) return {-1.0, 0.0};
  if (r == 270.0) return {0.0, -1.0};
  double rad = r * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

}  // namespace ricb
