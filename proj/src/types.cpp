#include "hoops/types.hpp"

#include "hoops/errors.hpp"

namespace hoops {

Position parse_position(const std::string& s) {
    if (s == "PG") return Position::PointGuard;
    if (s == "SG") return Position::ShootingGuard;
    if (s == "SF") return Position::SmallForward;
    if (s == "PF") return Position::PowerForward;
    if (s == "C") return Position::Center;
    throw ParseError("unknown position: '" + s + "'");
}

const char* position_code(Position p) {
    switch (p) {
        case Position::PointGuard: return "PG";
        case Position::ShootingGuard: return "SG";
        case Position::SmallForward: return "SF";
        case Position::PowerForward: return "PF";
        case Position::Center: return "C";
    }
    return "?";
}

CourtZone parse_zone(const std::string& s) {
    if (s == "Dunk") return CourtZone::Dunk;
    if (s == "Paint") return CourtZone::Paint;
    if (s == "Long2") return CourtZone::Long2;
    if (s == "Arc3") return CourtZone::Arc3;
    if (s == "Corner3") return CourtZone::Corner3;
    if (s == "Heave") return CourtZone::Heave;
    throw ParseError("unknown court zone: '" + s + "'");
}

const char* zone_name(CourtZone z) {
    switch (z) {
        case CourtZone::Dunk: return "Dunk";
        case CourtZone::Paint: return "Paint";
        case CourtZone::Long2: return "Long2";
        case CourtZone::Arc3: return "Arc3";
        case CourtZone::Corner3: return "Corner3";
        case CourtZone::Heave: return "Heave";
    }
    return "?";
}

EventKind parse_event_kind(const std::string& s) {
    if (s == "PASS_RELEASE") return EventKind::PassRelease;
    if (s == "PASS_RECEIVE") return EventKind::PassReceive;
    if (s == "DRIBBLE") return EventKind::Dribble;
    if (s == "SHOT_RELEASE") return EventKind::ShotRelease;
    if (s == "SHOT_MADE") return EventKind::ShotMade;
    if (s == "SHOT_MISSED") return EventKind::ShotMissed;
    if (s == "REBOUND") return EventKind::Rebound;
    if (s == "TURNOVER") return EventKind::Turnover;
    if (s == "INBOUND_PASS") return EventKind::InboundPass;
    throw ParseError("unknown event kind: '" + s + "'");
}

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::PassRelease: return "PASS_RELEASE";
        case EventKind::PassReceive: return "PASS_RECEIVE";
        case EventKind::Dribble: return "DRIBBLE";
        case EventKind::ShotRelease: return "SHOT_RELEASE";
        case EventKind::ShotMade: return "SHOT_MADE";
        case EventKind::ShotMissed: return "SHOT_MISSED";
        case EventKind::Rebound: return "REBOUND";
        case EventKind::Turnover: return "TURNOVER";
        case EventKind::InboundPass: return "INBOUND_PASS";
    }
    return "?";
}

}  // namespace hoops
