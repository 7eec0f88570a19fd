#include "zeta4/errors.hpp"

namespace zeta4 {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Precision: return "precision";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Conditioning: return "conditioning";
    case ErrorKind::Coverage: return "coverage";
    case ErrorKind::NoBracket: return "no-bracket";
    case ErrorKind::Range: return "range";
    case ErrorKind::Convention: return "convention";
    case ErrorKind::MissedZero: return "missed-zero";
  }
  return "unknown";
}

}  // namespace zeta4
