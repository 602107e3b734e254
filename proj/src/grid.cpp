#include "heavenly/grid.hpp"

#include <atomic>
#include <exception>
#include <thread>

namespace heavenly {

bool Region::contains(const Point& p) const {
  for (int i = 0; i < 4; ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

Point Region::center() const {
  Point c;
  for (int i = 0; i < 4; ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

std::vector<Point> grid_points(const Region& region, const Resolution& res) {
  std::array<std::vector<double>, 4> axes;
  std::size_t total = 1;
  for (int a = 0; a < 4; ++a) {
    if (res[a] < 1) throw std::invalid_argument("grid resolution must be >= 1 on every axis");
    if (region.hi[a] < region.lo[a]) throw std::invalid_argument("grid region has hi < lo");
    if (res[a] == 1) {
      axes[a].push_back(0.5 * (region.lo[a] + region.hi[a]));
    } else {
      for (int k = 0; k < res[a]; ++k) {
        const double t = static_cast<double>(k) / (res[a] - 1);
        axes[a].push_back(k == res[a] - 1 ? region.hi[a] : region.lo[a] + t * (region.hi[a] - region.lo[a]));
      }
    }
    total *= axes[a].size();
  }
  std::vector<Point> pts;
  pts.reserve(total);
  for (double a : axes[0])
    for (double b : axes[1])
      for (double c : axes[2])
        for (double d : axes[3]) pts.push_back({a, b, c, d});
  return pts;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto run = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int w = std::max(1, workers);
  if (w == 1 || n < 2) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < w; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<ScanPoint> grid_scan(const std::function<double(const Point&)>& fn, const Region& region,
                                 const Resolution& resolution, int workers) {
  const std::vector<Point> pts = grid_points(region, resolution);
  std::vector<ScanPoint> out(pts.size());
  parallel_for(pts.size(), workers, [&](std::size_t i) {
    out[i].point = pts[i];
    try {
      out[i].value = fn(pts[i]);
    } catch (const DomainError& e) {
      out[i].excluded = true;
      out[i].reason = e.what();
    }
  });
  return out;
}

}  // namespace heavenly
