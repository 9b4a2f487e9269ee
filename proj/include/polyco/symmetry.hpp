#pragma once

#include <functional>
#include <optional>

#include "polyco/dynamics.hpp"

namespace polyco {

class ReductionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Group elements are parameter vectors in R^m; the identity is the zero vector.
struct LieGroupModel {
  std::string name;
  int dim = 0;
  bool abelian = true;
  std::function<Coords(const Coords&, const Coords&)> multiply;
  std::function<Coords(const Coords&)> inverse;
  std::function<Coords(const Coords&)> exp;
  std::function<Eigen::MatrixXd(const Coords&)> Ad;  // m×m on Lie algebra coordinates
  std::function<Coords(const Coords&, const Coords&)> bracket;

  Coords identity() const { return Coords(dim, 0.0); }
  // Ad*_{g⁻¹} μ for one copy of 𝔤*, i.e. Ad_{g⁻¹}ᵀ μ.
  Coords coadjoint(const Coords& g, const Coords& mu) const;
  // Blockwise on (𝔤*)^k, blocks of size m.
  Coords coadjoint_k(const Coords& g, const Coords& mu) const;
};

LieGroupModel abelian_group(int m);
VerificationReport verify_group(const LieGroupModel& G, int samples, std::uint64_t seed = 0);
std::vector<Coords> group_samples(const LieGroupModel& G, int count, std::uint64_t seed = 0, double radius = 1.0);

struct ActionModel {
  LieGroupModel group;
  ChartPtr chart;
  std::function<SmoothField(const Coords& g)> phi;  // Φ_g on the chart
  SmoothField generators;                           // ξ_M for the basis, m blocks of n

  SmoothField generator(int a) const { return kvector_component(generators, group.dim, a); }
  // Fundamental field of an arbitrary ξ.
  SmoothField generator(const Coords& xi) const;
};

// Identity and composition axioms, generators against a finite-difference
// derivative of Φ along exp(sξ), Φ*_g τ = τ, Φ*_g ω = ω, ℒ_ξ τ = ℒ_ξ ω = 0
// and, when h is given, h∘Φ_g = h.
VerificationReport verify_action_invariance(const ActionModel& a, const KPolycosymplecticStructure& s,
                                            int group_count, int point_count, double tol = 1e-10,
                                            const SmoothField* h = nullptr, std::uint64_t seed = 0);

// J^α_a laid out α-major: output α·m + a.
struct MomentumMapModel {
  int k = 0;
  int m = 0;
  SmoothField J;

  Coords eval(std::span<const double> x) const { return J.eval(x); }
};

// ι_{ξ_a} ω^α = dJ^α_a, τ^β(ξ_a) = 0 and R_β J^α_a = 0 over the basis.
VerificationReport verify_momentum_map(const KPolycosymplecticStructure& s, const ActionModel& a,
                                       const MomentumMapModel& J, int samples, double tol = 1e-10,
                                       std::uint64_t seed = 0);

struct CocycleValue {
  Coords value;
  double deviation = 0.0;  // max spread across the sample points
};

// σ(g) = J∘Φ_g − Ad*^k_{g⁻¹} J; throws ReductionError if not constant to tol.
CocycleValue cocycle(const ActionModel& a, const MomentumMapModel& J, const Coords& g,
                     const std::vector<Coords>& points, double tol = 1e-10);
// ‖σ(g₁g₂) − σ(g₁) − Ad*^k_{g₁⁻¹} σ(g₂)‖∞
double cocycle_identity_residual(const ActionModel& a, const MomentumMapModel& J, const Coords& g1,
                                 const Coords& g2, const std::vector<Coords>& points);

// Δ_g μ = Ad*^k_{g⁻¹} μ + σ(g)
struct AffineAction {
  ActionModel action;
  MomentumMapModel momentum;
  std::vector<Coords> points;  // where σ is evaluated

  Coords apply(const Coords& g, const Coords& mu) const;
};

AffineAction affine_action(const ActionModel& a, const MomentumMapModel& J, int samples = 8, std::uint64_t seed = 0);
// Δ_e = id, Δ_{g₁}Δ_{g₂} = Δ_{g₁g₂}, J∘Φ_g = Δ_g∘J.
VerificationReport verify_affine_action(const AffineAction& D, int group_count, int point_count, double tol = 1e-10,
                                        std::uint64_t seed = 0);

// Parametrisation of J⁻¹(μ) by a level chart, with a left inverse on M.
struct LevelChart {
  ChartPtr chart;
  std::function<SmoothField(const Coords& mu)> embed;  // level -> M
  std::function<SmoothField(const Coords& mu)> coords;  // M -> level, coords∘embed = id
};

struct QuotientChart {
  ChartPtr chart;
  std::function<SmoothField(const Coords& mu)> project;  // level -> reduced
  std::function<SmoothField(const Coords& mu)> section;  // reduced -> level
  std::function<SmoothField(const Coords& mu)> alt_section;  // optional second section
};

// Generators (indices into the basis) spanning T(G^Δ_μ x) and, per α,
// T(G^{Δα}_{μα} x).
struct IsotropyData {
  std::vector<int> full;
  std::vector<std::vector<int>> per_alpha;
};

struct ReducedData {
  VValuedForm tau;
  VValuedForm omega;
  SmoothField h;
};

struct ReductionInstance {
  std::string name;
  std::string summary;
  KPolycosymplecticStructure structure;
  ActionModel action;
  std::optional<MomentumMapModel> momentum;
  SmoothField hamiltonian;
  std::optional<GaugeChoice> paper_gauge;
  std::optional<LevelChart> level;
  std::optional<QuotientChart> quotient;
  std::function<IsotropyData(const Coords& mu)> isotropy;
  std::function<ReducedData(const Coords& mu)> expected;
  Coords default_mu;

  int k() const { return structure.k(); }
  int dim() const { return structure.dim(); }
  int mu_dim() const { return momentum ? momentum->k * momentum->m : 0; }
};

// Level-set, weak-regularity, quotient and subspace conditions at samples of
// the level chart.
VerificationReport check_reduction_conditions(const ReductionInstance& inst, const Coords& mu, int samples,
                                              std::uint64_t seed = 0);

struct ReductionResult {
  KPolycosymplecticStructure reduced;
  SmoothField h;
  VerificationReport report;
  double section_gap = 0.0;  // -1 when the instance ships a single section
};

// Pulls the structure back along λ_μ∘s_μ and certifies the result.
ReductionResult reduce(const ReductionInstance& inst, const Coords& mu, int samples = 100, std::uint64_t seed = 0);

struct ReducedDynamics {
  SmoothField X;  // k-vector field on the reduced chart
  VerificationReport report;
};

// Pushforward of X along π_μ through the section. Throws ReductionError when
// the pushforward depends on the fibre point.
ReducedDynamics reduce_dynamics(const ReductionInstance& inst, const Coords& mu, const SmoothField& X,
                                const ReductionResult& reduced, int samples = 20, std::uint64_t seed = 0);

// Rank of TJ along the level chart and ker TJ against the level tangent.
struct WeakRegularity {
  int rank_min = 0;
  int rank_max = 0;
  bool kernel_matches = true;
  bool regular() const { return rank_min == rank_max && kernel_matches; }
};
WeakRegularity weak_regularity(const SmoothField& J, const SmoothField& embed, const std::vector<Coords>& level_points);

struct ExtendedSymmetry {
  ActionModel action;         // Φ̃_g(u, x) = (u, Φ_g(x))
  MomentumMapModel momentum;  // J̃(u, x) = J(x)
  LevelChart level;           // R^k × level chart
  VerificationReport report;
};

ExtendedSymmetry extend_action_momentum(const ReductionInstance& inst, const FibredExtension& fibred, int samples = 50,
                                        std::uint64_t seed = 0);

struct ExtendedHamiltonian {
  SmoothField h;  // h∘pr − Σ u^α
  SmoothField X;  // X^h + (R_α h) ∂/∂u^α
  double residual = 0.0;
};

ExtendedHamiltonian extended_hamiltonian(const FibredExtension& fibred, const SmoothField& h, const SmoothField& Xh,
                                         int samples = 50, std::uint64_t seed = 0);

// Base indices are split into `kept` (their τ combinations vanish on the
// fundamental fields) followed by `suppressed`; the basis change is this
// permutation.
struct SpacetimeReductionData {
  std::vector<int> kept;
  std::vector<int> suppressed;
  ChartPtr reduced_chart;
  SmoothField projection;                                             // M -> M_ℓ
  std::function<SmoothField(const Coords& lambda)> section;           // M_ℓ -> S_λ
  std::function<SmoothField(const Coords& g)> reduced_action;         // Φ_{ℓ,g}
  std::function<std::vector<Coords>(const Coords& lambda, int count, std::uint64_t seed)> level_samples;  // points of S_λ
};

struct SpacetimeReduction {
  VValuedForm tau_bar;
  VValuedForm omega_bar;
  KPolycosymplecticStructure reduced;
  SmoothField h;
  SmoothField X;  // ℓ-vector field on M_ℓ
  VerificationReport report;
};

// Throws ReductionError when h depends on suppressed base coordinates or the
// suppressed momentum trace of X̂ does not vanish.
SpacetimeReduction spacetime_reduce(const KPolycosymplecticStructure& s, const SmoothField& h, const SmoothField& X,
                                    const ActionModel& a, const SpacetimeReductionData& data, const Coords& lambda,
                                    int samples = 50, std::uint64_t seed = 0);

}  // namespace polyco
