#pragma once

// Axis-aligned boxes over the design space and the primitive operations of
// the sample-trim-grow solver.

#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "solspace/design.hpp"
#include "solspace/rng.hpp"

namespace solspace {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool contains(double v) const { return v >= lower && v <= upper; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Cartesian product of closed intervals, one per design variable.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {}

  static Box design_space(std::span<const DesignVariable> variables);

  std::size_t dimension() const { return intervals_.size(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }
  Interval& operator[](std::size_t i) { return intervals_[i]; }
  const std::vector<Interval>& intervals() const { return intervals_; }

  /// Closed containment.
  bool contains(const DesignPoint& x) const;
  /// Strict containment: a point on any face is outside.
  bool interior_contains(const DesignPoint& x) const;

  /// lower <= upper per DV, each interval inside the design-space bounds.
  bool valid_for(std::span<const DesignVariable> variables) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Interval> intervals_;
};

/// Product of interval widths normalized by the design-space widths.
double mu(const Box& box, std::span<const DesignVariable> variables);

std::vector<DesignPoint> sample_uniform(const Box& box, std::size_t n, Rng& rng);

struct ClassifiedSample {
  DesignPoint point;
  bool good = false;
};

/// Removes every bad sample from the box interior. Bad samples are handled
/// in order; for each one still strictly inside, the 2d axis cuts through it
/// are scored by good samples retained, then resulting mu, then lower
/// dimension index, then keeping the lower part. Dimensions flagged in
/// `frozen` are never cut; a bad sample that could only be removed through
/// frozen dimensions is left in place.
Box trim(const Box& box, std::span<const ClassifiedSample> samples,
         std::span<const DesignVariable> variables, std::span<const bool> frozen = {});

/// Scales each non-frozen interval about its midpoint by factor (>= 1) and
/// clips it to the design-space bounds.
Box grow(const Box& box, double factor, std::span<const DesignVariable> variables,
         std::span<const bool> frozen = {});

nlohmann::json to_json(const Box& box);
Box box_from_json(const nlohmann::json& intervals);

}  // namespace solspace
