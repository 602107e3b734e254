#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "heavenly/bundle.hpp"
#include "heavenly/field.hpp"
#include "heavenly/grid.hpp"

namespace heavenly {

// v_{y,ybar} v_{z,zbar} - v_{y,zbar} v_{z,ybar} - 1
double plebanski_residual(const Field& v, const Point& p);

// Linearised equation: v_{ybar,y} th_{z,zbar} + th_{ybar,y} v_{z,zbar}
//                      - v_{y,zbar} th_{ybar,z} - th_{y,zbar} v_{ybar,z}
double symmetry_residual(const Field& v, const Field& theta, const Point& p);

// Four first-order relations between v and theta, in the order
// v_ybar, v_zbar, v_y, v_z (each: left side minus right side).
std::array<double, 4> first_order_relations_residual(const Field& v, const Field& theta, const Point& p);

// The two divergence forms of the equation, each minus 2. Needs third derivatives of v.
std::array<double, 2> divergence_form_residual(const Field& v, const Point& p);

// Chart (D, ybar, zbar): X_ybar X_{zbar,D} - X_zbar X_{ybar,D} - 1
double me_residual(const Field& X, const Point& p);

// Chart (Delta, d, ybar, zbar).
double gr2_residual(const Field& Theta, const Point& p);
// gr2_residual divided by max(1, sum of the absolute values of its six products).
// Near a pole of Theta the products grow without bound while their sum cancels;
// certification uses this form.
double gr2_scaled_residual(const Field& Theta, const Point& p);

// Chart (D, ybar, zbar): r^3 (1/r)_{D,ybar} - r_{D,zbar}
double r_equation_residual(const Field& r, const Point& p);

// d g1 / d x_{var2} - d g2 / d x_{var1}
double integrability_residual(const Field& g1, const Field& g2, int var1, int var2, const Point& p);

// Central-difference jet (order 2) of a scalar function; the stencil reaches 2h
// in every coordinate direction and must stay inside the domain.
Jet fd_oracle(const std::function<double(const Point&)>& f, int arity, const Point& p, double h,
              const DomainFn& domain = {});
Jet fd_oracle(const Field& field, const Point& p, double h);

// Finite-difference reimplementations of the residual functionals.
namespace fd {
double plebanski(const Field& v, const Point& p, double h);
double symmetry(const Field& v, const Field& theta, const Point& p, double h);
std::array<double, 4> first_order(const Field& v, const Field& theta, const Point& p, double h);
std::array<double, 2> divergence(const Field& v, const Point& p, double h);
double me(const Field& X, const Point& p, double h);
double gr2(const Field& Theta, const Point& p, double h);
double r_equation(const Field& r, const Point& p, double h);
double integrability(const Field& g1, const Field& g2, int var1, int var2, const Point& p, double h);
}  // namespace fd

struct ResidualReport {
  std::string equation;
  std::string bundle;
  std::string sampling = "grid";  // grid | sample
  Region region;
  Resolution resolution{1, 1, 1, 1};
  std::vector<ScanPoint> points;  // value = signed residual
  double max_abs = 0.0;
  double mean_abs = 0.0;
  std::size_t evaluated = 0;
  std::size_t excluded = 0;
  int level = -1;                 // chain level, -1 when not part of a chain
  std::vector<double> theta;      // chain levels: theta value per point
  nlohmann::json extra = nlohmann::json::object();

  // Recomputes the aggregates; throws DomainError when no point was evaluated.
  void finalize();
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

using PointResidual = std::function<double(const Point&)>;

// Equation names accepted by scan(): plebanski, integrability, divergence,
// first_order, symmetry_seeds, direct_check, reduced_static.
std::vector<std::string> equation_names();
PointResidual equation_functional(const std::string& equation, const SolutionBundle& bundle);

ResidualReport scan(const std::string& equation, const SolutionBundle& bundle, const Region& region,
                    const Resolution& resolution, int workers = 1);
ResidualReport scan_points(const std::string& equation, const std::string& bundle_name, const PointResidual& fn,
                           const std::vector<Point>& pts, int workers = 1);

std::string format_double(double x);

}  // namespace heavenly
