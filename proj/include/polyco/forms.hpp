#pragma once

#include <string>
#include <vector>

#include "polyco/chart.hpp"
#include "polyco/smooth_field.hpp"

namespace polyco {

inline constexpr int kMaxDegree = 3;

class FormError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

int binomial(int n, int p);
// Strictly increasing p-tuples from {0..n-1}, lexicographic.
std::vector<std::vector<int>> multi_indices(int n, int p);
// Position of a strictly increasing tuple in the lexicographic list.
int multi_index_position(int n, std::span<const int> sorted);
// Sorts in place, returns the permutation sign, or 0 if an index repeats.
int sort_with_sign(std::vector<int>& idx);

// One term of a coefficient listing: coefficient * dx^{i1}∧...∧dx^{ip} ⊗ e_alpha.
// Indices may be given in any order; the sign of the sort is applied.
struct FormTerm {
  int alpha = 0;
  std::vector<int> indices;
  SmoothField coefficient;  // scalar field on the chart
};

// R^k-valued p-form on a chart. Coefficients are laid out as k blocks of
// binomial(n, p) entries, block alpha holding the strictly increasing
// multi-indices of component alpha in lexicographic order.
class VValuedForm {
 public:
  VValuedForm(ChartPtr chart, int degree, int k, SmoothField coefficients);

  static VValuedForm zero(ChartPtr chart, int degree, int k = 1);
  static VValuedForm function(ChartPtr chart, SmoothField f);
  static VValuedForm differential(ChartPtr chart, int coord);
  static VValuedForm differential(ChartPtr chart, const std::string& coord);
  static VValuedForm from_terms(ChartPtr chart, int degree, int k, std::vector<FormTerm> terms);
  // Constant coefficients; each entry is (alpha, indices, value).
  struct ConstTerm {
    int alpha;
    std::vector<int> indices;
    double value;
  };
  static VValuedForm constant(ChartPtr chart, int degree, int k, const std::vector<ConstTerm>& terms);
  // Assemble k scalar-valued forms of equal degree into one R^k-valued form.
  static VValuedForm stack(const std::vector<VValuedForm>& components);

  const ChartPtr& chart() const { return chart_; }
  int degree() const { return degree_; }
  int k() const { return k_; }
  int dim() const { return chart_->dim(); }
  int block() const { return binomial(dim(), degree_); }
  const SmoothField& coefficients() const { return coeffs_; }

  VValuedForm component(int alpha) const;
  std::vector<double> values(std::span<const double> x) const { return coeffs_.eval(x); }
  double coefficient(std::span<const double> x, int alpha, std::vector<int> indices) const;
  Eigen::VectorXd one_form(int alpha, std::span<const double> x) const;
  // W(i, j) = ω^alpha(∂_i, ∂_j)
  Eigen::MatrixXd two_form(int alpha, std::span<const double> x) const;
  double evaluate(int alpha, std::span<const double> x, const std::vector<Eigen::VectorXd>& vectors) const;

 private:
  ChartPtr chart_;
  int degree_;
  int k_;
  SmoothField coeffs_;
};

VValuedForm operator+(const VValuedForm& a, const VValuedForm& b);
VValuedForm operator-(const VValuedForm& a, const VValuedForm& b);
VValuedForm operator*(double c, const VValuedForm& a);

VValuedForm wedge(const VValuedForm& a, const VValuedForm& b);
VValuedForm barwedge(const VValuedForm& a, const VValuedForm& b);
VValuedForm interior_product(const SmoothField& X, const VValuedForm& omega);
VValuedForm contract_kvector(const SmoothField& X, const VValuedForm& omega);
VValuedForm exterior_derivative(const VValuedForm& omega);
VValuedForm lie_derivative(const SmoothField& X, const VValuedForm& omega);
SmoothField lie_bracket(const SmoothField& X, const SmoothField& Y);
// φ maps `source` into omega's chart.
VValuedForm pullback(const SmoothField& phi, const VValuedForm& omega, ChartPtr source);

// X(f) for a vector field X and a field f (componentwise for vector-valued f).
SmoothField directional_derivative(const SmoothField& X, const SmoothField& f);
// Component alpha of a k-vector field laid out as k blocks of n.
SmoothField kvector_component(const SmoothField& X, int k, int alpha);
SmoothField kvector_from(const std::vector<SmoothField>& parts);
// Time-s flow of X by `steps` classical RK4 steps; differentiable in x.
SmoothField flow_map(const SmoothField& X, double s, int steps);

// Max |coefficient| over points and all entries.
double max_abs_coefficient(const VValuedForm& omega, const std::vector<Coords>& points);
double max_abs_difference(const VValuedForm& a, const VValuedForm& b, const std::vector<Coords>& points);

}  // namespace polyco
