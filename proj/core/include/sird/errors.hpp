#pragma once

#include <stdexcept>
#include <string>

namespace sird {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Validation of probability data.
struct NegativeProbability : Error { using Error::Error; };
struct SumNotOne : Error { using Error::Error; };
struct DuplicateAxis : Error { using Error::Error; };
struct UnknownVariable : Error { using Error::Error; };
struct OverlappingSets : Error { using Error::Error; };
struct AxisCollision : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct BadAxisLabeling : Error { using Error::Error; };
struct ChannelAxisMismatch : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct DegenerateMarginal : Error { using Error::Error; };

// Optimization and solving.
struct OptimizerDiverged : Error { using Error::Error; };
struct InfeasibleDistortion : Error { using Error::Error; };
struct NotDegraded : Error { using Error::Error; };
struct PsiMissing : Error { using Error::Error; };
struct NotTwoSource : Error { using Error::Error; };
struct NoDegradationRelation : Error { using Error::Error; };
struct DistortionViolated : Error { using Error::Error; };

// I/O.
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace sird
