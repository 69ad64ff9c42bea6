#pragma once

#include <compare>

namespace ricb {

class AngleDeg;
AngleDeg wrap_deg(double degrees);

/// Orientation angle in degrees, always in [0, 360). Counterclockwise is
/// positive. The only way to make a nonzero one is wrap_deg().
class AngleDeg {
 public:
  constexpr AngleDeg() = default;

  constexpr double value() const noexcept { return value_; }

  auto operator<=>(const AngleDeg&) const = default;

 private:
  friend AngleDeg wrap_deg(double degrees);
  explicit constexpr AngleDeg(double v) : value_(v) {}

  double value_ = 0.0;
};

// Circular distance, in [0, 180].
double angular_error(AngleDeg a, AngleDeg b);

// cos/sin of an angle in degrees; exact at multiples of 90.
struct CosSin {
  double cos;
  double sin;
};
CosSin cos_sin_deg(double degrees);

}  // namespace ricb
