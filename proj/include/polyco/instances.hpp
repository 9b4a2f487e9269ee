#pragma once

#include "polyco/symmetry.hpp"

namespace polyco {

struct InstanceOptions {
  std::string coupling = "qsinx";  // coupled-strings: zero | qsinx | q2x
  std::string variant;             // cosymplectic-darboux: empty | phase-translations
  double wave_speed = 1.0;         // membrane-polar: c
  std::string force = "unit";      // membrane-polar: unit | cos | zero
};

struct CatalogInstance : ReductionInstance {
  explicit CatalogInstance(ReductionInstance base) : ReductionInstance(std::move(base)) {}

  InstanceOptions options;
  std::string solver;     // "strings", "membrane" or empty
  SmoothField coupling;   // C(t, x, q) for the strings
  SmoothField force;      // f(r) for the membrane
  double wave_speed = 1.0;
  std::optional<SpacetimeReductionData> spacetime;
  Coords default_lambda;
};

struct InstanceInfo {
  std::string name;
  std::string summary;
};

// Stable order.
std::vector<InstanceInfo> list_instances();
// Throws std::invalid_argument for unknown names or options.
CatalogInstance get_instance(const std::string& name, const InstanceOptions& options = {});

// C(t, x, q) presets.
SmoothField coupling_preset(const std::string& name);
// f(r) presets.
SmoothField force_preset(const std::string& name);

CatalogInstance make_strings(const SmoothField& coupling, const std::string& coupling_label = "custom");
CatalogInstance make_product_cosymplectic();
CatalogInstance make_membrane(double c, const SmoothField& force, const std::string& force_label = "custom");
CatalogInstance make_cosymplectic_darboux(const std::string& variant = {});

// Polar membrane Hamiltonian with a force F(t, r, θ) on (t, r, θ, ζ, pt, pr, pθ).
SmoothField membrane_polar_hamiltonian(double c, const SmoothField& force_trt);

// Every coefficient field the instance ships, with the chart it lives on.
struct ShippedField {
  std::string name;
  SmoothField field;
  ChartPtr domain;
};
std::vector<ShippedField> shipped_fields(const CatalogInstance& inst);

// Hamiltonian k-vector field in the instance's listed gauge (minimal norm when none).
SmoothField instance_kvector_field(const ReductionInstance& inst, bool paper_gauge = true);

}  // namespace polyco
