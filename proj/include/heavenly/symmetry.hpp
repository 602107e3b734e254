#pragma once

#include <array>
#include <string>
#include <vector>

#include "heavenly/families.hpp"
#include "heavenly/residuals.hpp"

namespace heavenly {

enum class Recurrence { SE1, SE2 };

std::string to_string(Recurrence r);
Recurrence parse_recurrence(const std::string& s);

struct SymmetrySolution {
  Field theta;
  std::string seed;  // v_y, v_z, v_ybar, v_zbar or a user label
  Recurrence variant = Recurrence::SE1;
  int depth = 0;
  Point base_point{};
};

// Gradient of the next level: SE1 gives (d/dybar, d/dzbar), SE2 gives (d/dy, d/dz).
struct GradientPair {
  Field first, second;
  int var_first = kYbar, var_second = kZbar;
};

// The four derivatives of v as depth-0 symmetries, each certified by
// symmetry_residual on sampled points; throws CertificationError naming the seed.
std::array<SymmetrySolution, 4> seed_symmetries(const SolutionBundle& b, const CertifyOptions& opt = {});
SymmetrySolution seed_symmetry(const SolutionBundle& b, const std::string& seed);

GradientPair recurrence_step(const SolutionBundle& b, const SymmetrySolution& theta, Recurrence variant);

struct PathOptions {
  double integrability_tolerance = 1e-8;
  int integrability_checks = 5;
  QuadratureOptions quadrature{1e-12, 1e-12, 60};
  double max_quadrature_error = 1e-9;
};

// Integral of the pair along the straight segment from base to target; both points
// must agree off the pair's plane. Throws IntegrabilityError when the pair is not
// a gradient along the segment and DomainError when the segment leaves the domain.
double reconstruct_by_path(const GradientPair& pair, const Point& base, const Point& target,
                           const PathOptions& opt = {});
// Same integral along the axis-parallel path base -> (target_i, base_j) -> target.
double reconstruct_by_l_path(const GradientPair& pair, const Point& base, const Point& target,
                             const PathOptions& opt = {});

// Next chain level as a field vanishing on the pair's plane through the base point.
SymmetrySolution next_symmetry(const SolutionBundle& b, const SymmetrySolution& theta, Recurrence variant);

// Levels 1..depth starting from the seed. depth < 1 raises std::invalid_argument;
// a depth beyond the derivative budget raises CapabilityError stating the cap.
std::vector<SymmetrySolution> build_chain(const SolutionBundle& b, const SymmetrySolution& seed, Recurrence variant,
                                          int depth);
int chain_depth_cap(const SymmetrySolution& seed);

// Report of symmetry_residual for one chain level, with theta values per point.
ResidualReport chain_level_report(const SolutionBundle& b, const SymmetrySolution& level, const std::vector<Point>& pts,
                                  int workers = 1);

struct ChainOptions {
  double tolerance = 1e-6;
  int samples = 100;
  std::uint64_t seed = 20240531;
  int workers = 1;
};

// One report per level; throws CertificationError naming the first failing level.
std::vector<ResidualReport> verify_chain(const SolutionBundle& b, const SymmetrySolution& seed, Recurrence variant,
                                         int depth, const ChainOptions& opt = {});

}  // namespace heavenly
