#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "heavenly/jet.hpp"

namespace heavenly {

// Axis-aligned box in a four-entry chart.
struct Region {
  Point lo{};
  Point hi{};

  bool contains(const Point& p) const;
  Point center() const;
};

using Resolution = std::array<int, 4>;

// Lexicographic grid, first axis slowest. Resolution n >= 2 includes both
// endpoints; n = 1 places the single node at the axis midpoint.
std::vector<Point> grid_points(const Region& region, const Resolution& resolution);

struct ScanPoint {
  Point point{};
  double value = 0.0;
  bool excluded = false;
  std::string reason;
};

// Evaluates fn at every grid point on `workers` threads. Points where fn throws
// DomainError are marked excluded; results are ordered as grid_points().
std::vector<ScanPoint> grid_scan(const std::function<double(const Point&)>& fn, const Region& region,
                                 const Resolution& resolution, int workers = 1);

// Runs body(i) for i in [0, n) on `workers` threads. The first exception by index
// is rethrown after all workers finish.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace heavenly
