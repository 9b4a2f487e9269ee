#pragma once

#include "polyco/structures.hpp"

namespace polyco {

class InconsistentSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GaugeMode { minimal_norm, instance_supplied };

struct GaugeChoice {
  GaugeMode mode = GaugeMode::minimal_norm;
  // Momentum components (X_α)^{p_i^β}, laid out [α][β][i] (k·k·N outputs).
  // Only meaningful on a Darboux chart.
  SmoothField free_coefficients;

  static GaugeChoice minimal_norm() { return {}; }
  static GaugeChoice supplied(SmoothField c) { return {GaugeMode::instance_supplied, std::move(c)}; }
};

struct HamiltonianSystem {
  HamiltonianSystem(KPolycosymplecticStructure s, SmoothField hamiltonian, GaugeChoice g = {});
  int k() const { return structure.k(); }
  int dim() const { return structure.dim(); }

  KPolycosymplecticStructure structure;
  SmoothField h;
  GaugeChoice gauge;
};

struct DefiningResiduals {
  double omega_equation = 0.0;  // ‖ι_X ω − dh + (R_α h) τ^α‖∞
  double tau_equation = 0.0;    // max |τ^β(X_α) − δ^β_α|
  double max() const { return std::max(omega_equation, tau_equation); }
};

// n×k matrix, column α is X_α. Throws InconsistentSystem if the defining
// residuals exceed 1e-10.
Eigen::MatrixXd solve_hamiltonian_kvector(const HamiltonianSystem& sys, std::span<const double> x);
// The same solution as a differentiable k-vector field (α-major layout).
SmoothField hamiltonian_kvector_field(const HamiltonianSystem& sys);
DefiningResiduals kvector_residuals(const HamiltonianSystem& sys, const Eigen::MatrixXd& X, std::span<const double> x);
Eigen::MatrixXd kvector_matrix(const SmoothField& X, int k, std::span<const double> x);

struct FreeSlot {
  int alpha;  // which X_α
  int beta;   // momentum p_i^β
  int i;      // field index
  int coord;  // chart position of p_i^β
};

// Solutions of the defining equations in Darboux coordinates: fixed base and
// field components, free momentum components subject to one trace
// constraint per field index.
struct DarbouxFamily {
  int k = 0;
  int fields = 0;
  DarbouxLayout layout;
  SmoothField fixed;         // k-vector field with all free slots zero
  SmoothField trace_target;  // N outputs, −∂h/∂q^i
  std::vector<FreeSlot> slots;

  // ‖fixed part mismatch‖∞ + ‖trace mismatch‖∞
  double membership_residual(const Eigen::MatrixXd& X, std::span<const double> x) const;
  Eigen::MatrixXd minimal_norm_member(std::span<const double> x) const;
  // Member built from the [α][β][i] momentum components.
  Eigen::MatrixXd member(std::span<const double> x, std::span<const double> momentum_components) const;
};

DarbouxFamily darboux_family(const HamiltonianSystem& sys);

// max over points and α<β of ‖[X_α, X_β]‖∞
double check_integrability(const SmoothField& X, int k, const std::vector<Coords>& points);

}  // namespace polyco
