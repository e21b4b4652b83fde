#pragma once

#include "hoops/types.hpp"

namespace hoops {

// Court constants (feet). The court is 94 x 50 with the attacking basket,
// after offensive normalization, centered at (5.25, 25).
namespace court {
inline constexpr double kLength = 94.0;
inline constexpr double kWidth = 50.0;
inline constexpr double kBasketX = 5.25;
inline constexpr double kBasketY = 25.0;
inline constexpr double kDunkRadius = 3.0;
inline constexpr double kKeyDepth = 19.0;   // outer rectangle of the key
inline constexpr double kKeyWidth = 16.0;
inline constexpr double kArcRadius = 23.75;
inline constexpr double kCornerLineDist = 22.0;  // corner three lines at y = 3, y = 47
inline constexpr double kCornerBreakX = 14.0;    // straight segments end, arc begins
inline constexpr double kHeaveDist = kArcRadius + 10.0;
}  // namespace court

// Euclidean distance in the x-y plane.
double distance(const CourtPoint& a, const CourtPoint& b);

// Zone of a point in normalized offensive coordinates. Points exactly on a
// dividing line belong to the zone nearer the basket. Throws
// InvalidInputError on non-finite coordinates.
CourtZone zone_of(const CourtPoint& p);

}  // namespace hoops
