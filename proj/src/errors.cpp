#include "pltor/errors.hpp"

namespace pltor {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonManifold: return "NON_MANIFOLD";
    case ErrorCode::OrientationClash: return "ORIENTATION_CLASH";
    case ErrorCode::BadArity: return "BAD_ARITY";
    case ErrorCode::OpenLink: return "OPEN_LINK";
    case ErrorCode::NotRealizable: return "NOT_REALIZABLE";
    case ErrorCode::Degenerate: return "DEGENERATE";
    case ErrorCode::ResampleExhausted: return "RESAMPLE_EXHAUSTED";
    case ErrorCode::CurvedInput: return "CURVED_INPUT";
    case ErrorCode::Monodromy: return "MONODROMY";
    case ErrorCode::GaugeDegenerate: return "GAUGE_DEGENERATE";
    case ErrorCode::ShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::Singular: return "SINGULAR";
    case ErrorCode::DegenerateSite: return "DEGENERATE_SITE";
    case ErrorCode::WrongLink: return "WRONG_LINK";
    case ErrorCode::BadParams: return "BAD_PARAMS";
  }
  return "UNKNOWN";
}

}  // namespace pltor
