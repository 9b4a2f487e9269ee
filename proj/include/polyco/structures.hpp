#pragma once

#include <optional>
#include <variant>

#include "polyco/forms.hpp"
#include "polyco/linalg.hpp"
#include "polyco/report.hpp"

namespace polyco {

// Chart positions of adapted coordinates (t^α, q^i, p_i^α).
struct DarbouxLayout {
  std::vector<int> base;                  // t^α, size k
  std::vector<int> fields;                // q^i, size N
  std::vector<std::vector<int>> momenta;  // momenta[α][i] = position of p_i^α
};

struct KPolycosymplecticStructure {
  KPolycosymplecticStructure(VValuedForm tau, VValuedForm omega, std::optional<DarbouxLayout> darboux = {});
  const ChartPtr& chart() const { return tau.chart(); }
  int k() const { return tau.k(); }
  int dim() const { return tau.dim(); }

  VValuedForm tau;
  VValuedForm omega;
  std::optional<DarbouxLayout> darboux;
};

struct CosymplecticStructure {
  CosymplecticStructure(VValuedForm tau, VValuedForm omega, std::optional<DarbouxLayout> darboux = {});
  const ChartPtr& chart() const { return tau.chart(); }
  int dim() const { return tau.dim(); }
  KPolycosymplecticStructure as_polycosymplectic() const { return {tau, omega, darboux}; }

  VValuedForm tau;
  VValuedForm omega;
  std::optional<DarbouxLayout> darboux;
};

struct KPolysymplecticStructure {
  explicit KPolysymplecticStructure(VValuedForm omega);
  const ChartPtr& chart() const { return omega.chart(); }
  int k() const { return omega.k(); }

  VValuedForm omega;
};

using GeometricStructure = std::variant<CosymplecticStructure, KPolycosymplecticStructure, KPolysymplecticStructure>;

CosymplecticStructure as_cosymplectic(const KPolycosymplecticStructure& s);

VerificationReport verify_structure(const GeometricStructure& s, int samples, double tol, std::uint64_t seed = 0);

// (k·n)×n stack of the matrices W^α(i,j) = ω^α(∂_i, ∂_j).
Eigen::MatrixXd stacked_omega(const VValuedForm& omega, std::span<const double> x);
// k×n matrix of the τ^α rows.
Eigen::MatrixXd tau_rows(const VValuedForm& tau, std::span<const double> x);
// Rank of [stacked ω; τ]; n means the Reeb system has full column rank.
int reeb_system_rank(const KPolycosymplecticStructure& s, std::span<const double> x);

Eigen::VectorXd reeb_cosymplectic(const CosymplecticStructure& s, std::span<const double> x);
// n×k, column α is R_α.
Eigen::MatrixXd reeb_family(const KPolycosymplecticStructure& s, std::span<const double> x);
// Reeb fields as differentiable fields (k-vector layout, α-major).
SmoothField reeb_fields(const KPolycosymplecticStructure& s);
SmoothField reeb_field(const CosymplecticStructure& s);

// Matrix F with (♭v)_j = Σ_i F(j,i) v^i, i.e. Wᵀ + τ τᵀ.
Eigen::MatrixXd flat_matrix(const CosymplecticStructure& s, std::span<const double> x);
Eigen::MatrixXd flat_inverse(const CosymplecticStructure& s, std::span<const double> x);

SmoothField gradient_field(const CosymplecticStructure& s, const SmoothField& f);
SmoothField hamiltonian_field(const CosymplecticStructure& s, const SmoothField& f);
SmoothField evolution_field(const CosymplecticStructure& s, const SmoothField& f);
SmoothField poisson_bracket(const CosymplecticStructure& s, const SmoothField& f, const SmoothField& g);

struct FibredExtension {
  KPolycosymplecticStructure base;
  ChartPtr extended_chart;     // (u^1..u^k, base coordinates)
  VValuedForm omega_tilde;
  SmoothField projection;      // R^k × M -> M
  SmoothField reeb_tilde;      // k-vector field on the extended chart
  KPolysymplecticStructure as_polysymplectic() const { return KPolysymplecticStructure(omega_tilde); }
};

FibredExtension extend_to_fibred(const KPolycosymplecticStructure& s);

}  // namespace polyco
