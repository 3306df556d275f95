#include "msid/error.hpp"

namespace msid {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::instability: return "instability";
    case ErrorKind::covariance: return "covariance";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::non_stabilizing: return "non_stabilizing";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::length: return "length";
    case ErrorKind::size: return "size";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::schema: return "schema";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace msid
