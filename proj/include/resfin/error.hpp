#pragma once

#include <stdexcept>
#include <string>

namespace resfin {

// Typed failure conditions surfaced by the operations. `kind` is stable text
// used by the CLI and tests; `detail` names the offending index/inequality.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, std::string detail)
        : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)), detail_(std::move(detail)) {}

    const std::string& kind() const { return kind_; }
    const std::string& detail() const { return detail_; }

  private:
    std::string kind_, detail_;
};

namespace errk {
inline constexpr const char* NonBijective = "NonBijective";
inline constexpr const char* InvalidPoint = "InvalidPoint";
inline constexpr const char* ResolutionOverflow = "ResolutionOverflow";
inline constexpr const char* Mismatch = "Mismatch";
inline constexpr const char* NonEvaluable = "NonEvaluable";
inline constexpr const char* NoChain = "NoChain";
inline constexpr const char* NonInvertible = "NonInvertible";
inline constexpr const char* SizeOverflow = "SizeOverflow";
inline constexpr const char* Infinite = "Infinite";
inline constexpr const char* NotInvertible = "NotInvertible";
inline constexpr const char* Inconclusive = "Inconclusive";
inline constexpr const char* ContextOverflow = "ContextOverflow";
inline constexpr const char* StaleContext = "StaleContext";
inline constexpr const char* Unbounded = "Unbounded";
inline constexpr const char* NoPositiveRationalSolution = "NoPositiveRationalSolution";
inline constexpr const char* NotFixed = "NotFixed";
inline constexpr const char* SpectralGap = "SpectralGap";
inline constexpr const char* DeltaExceeded = "DeltaExceeded";
inline constexpr const char* CascadeExceeded = "CascadeExceeded";
inline constexpr const char* Singular = "Singular";
inline constexpr const char* TraceMismatch = "TraceMismatch";
inline constexpr const char* ThresholdExceeded = "ThresholdExceeded";
inline constexpr const char* PlacementError = "PlacementError";
inline constexpr const char* HypothesisError = "HypothesisError";
inline constexpr const char* ParseError = "ParseError";
inline constexpr const char* UnsupportedVersion = "UnsupportedVersion";
}  // namespace errk

}  // namespace resfin
