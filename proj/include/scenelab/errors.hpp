#pragma once

#include <stdexcept>
#include <string>

namespace scenelab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ParseError : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct MissingPair : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };
struct UnknownLabel : Error { using Error::Error; };
struct OutOfBounds : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct EmptyRegion : Error { using Error::Error; };
struct ClassUnderrepresented : Error { using Error::Error; };
struct VersionMismatch : Error { using Error::Error; };
struct CorruptModel : Error { using Error::Error; };
struct DimensionInconsistency : Error { using Error::Error; };
struct EmptyEvalSet : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace scenelab
