#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "biwave/core.hpp"

namespace biwave {

/// Uniform sample range over one spatial axis. count == 1 pins the axis at lo.
struct AxisRange {
  double lo = 0;
  double hi = 0;
  int count = 1;
};

/// Cartesian evaluation grid: per-axis ranges plus an explicit time list.
/// Flat order is time-major, then row-major over axes (x1 slowest).
class EvalGrid {
 public:
  EvalGrid(std::vector<AxisRange> axes, std::vector<double> times)
      : axes_(std::move(axes)), times_(std::move(times)) {
    if (axes_.empty() || axes_.size() > static_cast<std::size_t>(kMaxDim))
      fail(errc::bad_dimension, "grid axis count " + std::to_string(axes_.size()));
    if (times_.empty()) fail(errc::validation_error, "grid needs at least one time sample");
    for (std::size_t i = 1; i < times_.size(); ++i)
      if (!(times_[i] > times_[i - 1]))
        fail(errc::validation_error, "time samples must be strictly increasing");
    for (const auto& ax : axes_) {
      if (ax.count < 1) fail(errc::validation_error, "axis sample count must be >= 1");
      if (ax.count > 1 && !(ax.hi > ax.lo))
        fail(errc::validation_error, "axis range must be strictly increasing");
    }
  }

  int dim() const { return static_cast<int>(axes_.size()); }
  const std::vector<AxisRange>& axes() const { return axes_; }
  const std::vector<double>& times() const { return times_; }

  double axis_sample(int axis, int i) const {
    const AxisRange& ax = axes_[static_cast<std::size_t>(axis)];
    if (ax.count == 1) return ax.lo;
    return ax.lo + (ax.hi - ax.lo) * static_cast<double>(i) / static_cast<double>(ax.count - 1);
  }

  std::size_t spatial_count() const {
    std::size_t m = 1;
    for (const auto& ax : axes_) m *= static_cast<std::size_t>(ax.count);
    return m;
  }
  std::size_t size() const { return spatial_count() * times_.size(); }

  /// Decode a flat index into (point, time).
  std::pair<Point, double> at(std::size_t flat) const {
    const std::size_t sc = spatial_count();
    const std::size_t ti = flat / sc;
    std::size_t rest = flat % sc;
    Point p(dim());
    for (int axis = dim() - 1; axis >= 0; --axis) {
      const auto cnt = static_cast<std::size_t>(axes_[static_cast<std::size_t>(axis)].count);
      p[axis] = axis_sample(axis, static_cast<int>(rest % cnt));
      rest /= cnt;
    }
    return {p, times_[ti]};
  }

 private:
  std::vector<AxisRange> axes_;
  std::vector<double> times_;
};

}  // namespace biwave
