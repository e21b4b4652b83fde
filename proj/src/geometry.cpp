#include "hoops/geometry.hpp"

#include <cmath>

#include "hoops/errors.hpp"

namespace hoops {

double distance(const CourtPoint& a, const CourtPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

CourtZone zone_of(const CourtPoint& p) {
    using namespace court;
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw InvalidInputError("zone_of: non-finite coordinates");

    const double d = std::hypot(p.x - kBasketX, p.y - kBasketY);
    if (d <= kDunkRadius) return CourtZone::Dunk;

    // Two-point territory: inside the corner lines for x <= 14, inside the
    // arc beyond. Boundaries are inclusive toward the basket.
    const double yLow = kBasketY - kCornerLineDist;
    const double yHigh = kBasketY + kCornerLineDist;
    bool two_point = (p.x <= kCornerBreakX) ? (p.y >= yLow && p.y <= yHigh)
                                            : (d <= kArcRadius);
    if (two_point) {
        bool in_key = p.x <= kKeyDepth && p.y >= kBasketY - kKeyWidth / 2.0 &&
                      p.y <= kBasketY + kKeyWidth / 2.0;
        return in_key ? CourtZone::Paint : CourtZone::Long2;
    }

    if (p.x <= kCornerBreakX) return CourtZone::Corner3;
    return d <= kHeaveDist ? CourtZone::Arc3 : CourtZone::Heave;
}

}  // namespace hoops
