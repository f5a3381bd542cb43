#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "geospec/errors.hpp"

namespace geospec {

// Publication and citation counts at one thematic level, for a region or for
// the reference population. Counts stay integral until an indicator divides.
struct FieldCounts {
  std::uint64_t docs = 0;
  std::uint64_t cites = 0;

  bool operator==(const FieldCounts&) const = default;
};

inline void validate_counts(const FieldCounts& c) {
  if (c.cites > 0 && c.docs == 0)
    throw Error(errc::inconsistent_counts, "citations recorded without any documents");
}

// Ratio of a region's output share in the focal field to the reference
// population's share. 1 is the no-specialization point.
class ActivityIndexValue {
 public:
  ActivityIndexValue() = default;
  explicit ActivityIndexValue(double v) : value_(v) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(errc::out_of_domain, "activity index must be finite and non-negative");
  }

  double value() const { return value_; }
  bool operator==(const ActivityIndexValue&) const = default;

 private:
  double value_ = 0.0;
};

class RsiValue;
inline RsiValue rsi_from_activity(ActivityIndexValue aindx);
inline ActivityIndexValue activity_from_rsi(RsiValue rsi);

// Symmetric transform of the activity index, bounded in [-1, 1). -1 means no
// focal output at all; 0 is neutral.
class RsiValue {
 public:
  RsiValue() = default;
  explicit RsiValue(double v) : RsiValue(v, 1.0 - v) {}

  double value() const { return value_; }
  bool operator==(const RsiValue& other) const { return value_ == other.value_; }

 private:
  friend RsiValue rsi_from_activity(ActivityIndexValue);
  friend ActivityIndexValue activity_from_rsi(RsiValue);

  RsiValue(double v, double complement) : value_(v), complement_(complement) {
    if (!(v >= -1.0 && v < 1.0))
      throw Error(errc::out_of_domain, "RSI must lie in [-1, 1)");
  }

  double value_ = 0.0;
  // 1 - value_ at full relative precision. The difference cancels
  // catastrophically near +1, so the inverse transform divides by this
  // instead of recomputing it from value_.
  double complement_ = 1.0;
};

// Region's citations-per-paper in the focal field relative to the reference
// mean. Undefined when the region has no focal publications.
class RciValue {
 public:
  RciValue() = default;  // undefined
  explicit RciValue(double v) : value_(v), defined_(true) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(errc::out_of_domain, "RCI must be finite and non-negative");
  }

  static RciValue undefined() { return RciValue(); }

  bool defined() const { return defined_; }
  double value() const {
    if (!defined_)
      throw Error(errc::undefined_impact, "citation impact is undefined for this region");
    return value_;
  }

  bool operator==(const RciValue&) const = default;

 private:
  double value_ = 0.0;
  bool defined_ = false;
};

// Position in the RSI x RCI plane relative to the RSI = 0 and RCI = 1
// reference lines. Exact ties go to Boundary instead of a quadrant.
enum class QuadrantProfile {
  SpecializedHighImpact,
  SpecializedLowImpact,
  UnspecializedHighImpact,
  UnspecializedLowImpact,
  Boundary,
};

inline const char* to_string(QuadrantProfile q) {
  switch (q) {
    case QuadrantProfile::SpecializedHighImpact: return "SpecializedHighImpact";
    case QuadrantProfile::SpecializedLowImpact: return "SpecializedLowImpact";
    case QuadrantProfile::UnspecializedHighImpact: return "UnspecializedHighImpact";
    case QuadrantProfile::UnspecializedLowImpact: return "UnspecializedLowImpact";
    case QuadrantProfile::Boundary: return "Boundary";
  }
  return "Unknown";
}

// (region focal share) / (reference focal share), shares formed over the
// baseline totals passed in.
inline ActivityIndexValue activity_index(std::uint64_t region_focal_docs,
                                         std::uint64_t region_total_docs,
                                         std::uint64_t reference_focal_docs,
                                         std::uint64_t reference_total_docs) {
  if (region_total_docs == 0)
    throw Error(errc::zero_region_output, "region has no baseline publications to form a share");
  if (reference_focal_docs == 0 || reference_total_docs == 0)
    throw Error(errc::degenerate_reference, "reference share is undefined");
  if (region_focal_docs > region_total_docs)
    throw Error(errc::inconsistent_counts, "region focal count exceeds its total");
  if (reference_focal_docs > reference_total_docs)
    throw Error(errc::inconsistent_counts, "reference focal count exceeds its total");
  const double region_share =
      static_cast<double>(region_focal_docs) / static_cast<double>(region_total_docs);
  const double reference_share =
      static_cast<double>(reference_focal_docs) / static_cast<double>(reference_total_docs);
  return ActivityIndexValue(region_share / reference_share);
}

inline RsiValue rsi_from_activity(ActivityIndexValue aindx) {
  const double a = aindx.value();
  double r = (a - 1.0) / (a + 1.0);
  // The quotient rounds up to 1.0 for astronomically large indices; keep the
  // half-open upper bound.
  if (r >= 1.0) r = std::nextafter(1.0, 0.0);
  return RsiValue(r, 2.0 / (a + 1.0));
}

inline RsiValue rsi_from_activity(double aindx) {
  return rsi_from_activity(ActivityIndexValue(aindx));
}

inline ActivityIndexValue activity_from_rsi(RsiValue rsi) {
  double a = (1.0 + rsi.value_) / rsi.complement_;
  if (a > std::numeric_limits<double>::max()) a = std::numeric_limits<double>::max();
  return ActivityIndexValue(a);
}

inline ActivityIndexValue activity_from_rsi(double rsi) {
  return activity_from_rsi(RsiValue(rsi));
}

inline RciValue relative_citation_impact(std::uint64_t region_focal_cites,
                                         std::uint64_t region_focal_docs,
                                         std::uint64_t reference_focal_cites,
                                         std::uint64_t reference_focal_docs) {
  if (reference_focal_docs == 0 || reference_focal_cites == 0)
    throw Error(errc::degenerate_reference, "reference citation mean is zero or undefined");
  if (region_focal_docs == 0) return RciValue::undefined();
  const double region_mean =
      static_cast<double>(region_focal_cites) / static_cast<double>(region_focal_docs);
  const double reference_mean =
      static_cast<double>(reference_focal_cites) / static_cast<double>(reference_focal_docs);
  return RciValue(region_mean / reference_mean);
}

inline QuadrantProfile classify_quadrant(RsiValue rsi, RciValue rci) {
  const double impact = rci.value();  // throws UndefinedImpact when undefined
  const double spec = rsi.value();
  if (spec == 0.0 || impact == 1.0) return QuadrantProfile::Boundary;
  if (spec > 0.0) {
    return impact > 1.0 ? QuadrantProfile::SpecializedHighImpact
                        : QuadrantProfile::SpecializedLowImpact;
  }
  return impact > 1.0 ? QuadrantProfile::UnspecializedHighImpact
                      : QuadrantProfile::UnspecializedLowImpact;
}

}  // namespace geospec
