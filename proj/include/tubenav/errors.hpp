#pragma once

#include <stdexcept>
#include <string>

namespace tubenav {

enum class Fault {
  SelfIntersectingCurve,
  ImproperTube,
  DegenerateSpacing,
  EmptyTrajectory,
  TubeTooNarrow,
  ProjectionFailed,
  PanelTouchesPoint,
  DirectionalConstraintViolated,
  CoincidentPositions,
  EpsilonOutOfRange,
  InvalidConfig,
};

enum class FaultClass { Geometry, Config };

constexpr FaultClass classify(Fault f) {
  switch (f) {
    case Fault::EpsilonOutOfRange:
    case Fault::InvalidConfig:
      return FaultClass::Config;
    default:
      return FaultClass::Geometry;
  }
}

const char* to_string(Fault f);

class Error : public std::runtime_error {
 public:
  Error(Fault fault, const std::string& what) : std::runtime_error(what), fault_(fault) {}
  Fault fault() const { return fault_; }

 private:
  Fault fault_;
};

[[noreturn]] inline void fail(Fault fault, const std::string& what) { throw Error(fault, what); }

}  // namespace tubenav
