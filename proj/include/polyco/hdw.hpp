#pragma once

#include <functional>
#include <iosfwd>

#include "polyco/dynamics.hpp"

namespace polyco {

class CflViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedBoundary : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Boundary { periodic, dirichlet };
const char* boundary_name(Boundary b);

// One grid direction. The axis parametrises the chart coordinate `coord`.
// Periodic axes include both endpoints, so the period is count - 1 steps.
struct GridAxis {
  int coord = 0;
  double lo = 0.0;
  double hi = 1.0;
  int count = 2;
  bool periodic = false;

  double step() const { return (hi - lo) / (count - 1); }
  double at(int i) const { return lo + i * step(); }
};

// Section ψ sampled on a rectangular grid of at most three parameters.
// Each node stores the full chart point (base, fields, momenta in chart order).
class SectionGrid {
 public:
  SectionGrid(ChartPtr chart, std::vector<GridAxis> axes);

  const ChartPtr& chart() const { return chart_; }
  const std::vector<GridAxis>& axes() const { return axes_; }
  int dim() const { return chart_->dim(); }
  int nodes() const { return nodes_; }
  int index(std::span<const int> multi) const;
  std::vector<int> multi_index(int node) const;

  std::span<double> point(int node) { return {values_.data() + static_cast<std::size_t>(node) * dim(), std::size_t(dim())}; }
  std::span<const double> point(int node) const {
    return {values_.data() + static_cast<std::size_t>(node) * dim(), std::size_t(dim())};
  }
  double& value(int node, int coord) { return values_[static_cast<std::size_t>(node) * dim() + coord]; }
  double value(int node, int coord) const { return values_[static_cast<std::size_t>(node) * dim() + coord]; }

  // Writes the axis coordinates of every node; other coordinates untouched.
  void fill_base();
  // ∂ψ^c/∂s^a at a node: centred inside, periodic wrap, second-order
  // one-sided at non-periodic ends.
  double derivative(int node, int axis, int coord) const;
  // n×k matrix of ψ'_a at a node.
  Eigen::MatrixXd tangent(int node) const;

  std::string scheme;
  Boundary boundary = Boundary::periodic;

  void write_csv(std::ostream& os, const std::vector<std::string>& comments = {}) const;

 private:
  ChartPtr chart_;
  std::vector<GridAxis> axes_;
  int nodes_ = 0;
  std::vector<double> values_;
};

struct EquationResidual {
  std::string name;
  double max_abs = 0.0;
  double rms = 0.0;
};

struct HdwResiduals {
  std::vector<EquationResidual> equations;
  double max() const;
  double rms() const;
  const EquationResidual& at(const std::string& name) const;
  VerificationReport to_report(double tol, const std::string& prefix = "hdw") const;
  std::vector<std::string> comment_lines() const;
};

// Plugs the discrete tangent of the section into
//   Σ_α ι_{ψ'_α} ω^α = dh − (R_α h) τ^α,  τ^β(ψ'_α) = δ^β_α
// at every node. Equations are named omega.<coord> and tau.<α><β>.
HdwResiduals hdw_residuals(const SectionGrid& section, const HamiltonianSystem& sys);

// max over nodes of |Σ_a ∂_a J^a(ψ)| with the grid derivative; J has one
// output per axis.
double divergence_residual(const SectionGrid& section, const SmoothField& J);

// Two strings on the eight-coordinate chart (t, x, q1, q2, p1t, p1x, p2t, p2x).
// coupling is C(t, x, q) with q = q1 - q2.
struct StringsData {
  SmoothField coupling;
  std::function<double(double)> q1, v1, q2, v2;
};

struct StringsGrid {
  int nt = 201;
  int nx = 201;
  Boundary boundary = Boundary::periodic;
};

// Leapfrog on q^i_tt - q^i_xx = ∓C_q, momenta p_t = ∂_t q, p_x = -∂_x q by
// centred differences. t and x ranges come from the chart bounds.
SectionGrid solve_hdw_strings(const ChartPtr& chart, const StringsData& data, const StringsGrid& grid);

// Reduced strings on (t, x, q, pt, px): q_t = pt, pt_t = D_x D_x q - 2 C_q,
// px = -D_x q, centred D_x and classical RK4 in t.
struct ReducedStringsData {
  SmoothField coupling;
  std::function<double(double)> q, pt;
};
SectionGrid solve_reduced_strings(const ChartPtr& chart, const ReducedStringsData& data, const StringsGrid& grid);

struct RadialSolution {
  std::vector<double> r, zeta, pr;
};

// ∂p^r/∂r = r f(r), ∂ζ/∂r = -p^r/(r c²) from r0 to r1 in `steps` RK4 steps.
RadialSolution solve_reduced_membrane_ode(const SmoothField& f, double c, double r0, double r1, double zeta0,
                                          double pr0, int steps);
// max over interior nodes of |c²(ζ'' + ζ'/r) + f(r)|, centred differences.
double membrane_pde_residual(const RadialSolution& sol, const SmoothField& f, double c);

// Radial solution spread over (t, r, θ) on the chart (t, r, θ, ζ, pt, pr, pθ)
// with constant pt = lambda_t, pθ = lambda_theta. r nodes are the solution nodes.
SectionGrid lift_membrane(const ChartPtr& chart, const RadialSolution& sol, double lambda_t, double lambda_theta,
                          int nt, int ntheta, double t_end);

}  // namespace polyco
