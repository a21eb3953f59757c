#include "tubenav/errors.hpp"

namespace tubenav {

const char* to_string(Fault f) {
  switch (f) {
    case Fault::SelfIntersectingCurve: return "SelfIntersectingCurve";
    case Fault::ImproperTube: return "ImproperTube";
    case Fault::DegenerateSpacing: return "DegenerateSpacing";
    case Fault::EmptyTrajectory: return "EmptyTrajectory";
    case Fault::TubeTooNarrow: return "TubeTooNarrow";
    case Fault::ProjectionFailed: return "ProjectionFailed";
    case Fault::PanelTouchesPoint: return "PanelTouchesPoint";
    case Fault::DirectionalConstraintViolated: return "DirectionalConstraintViolated";
    case Fault::CoincidentPositions: return "CoincidentPositions";
    case Fault::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case Fault::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace tubenav
