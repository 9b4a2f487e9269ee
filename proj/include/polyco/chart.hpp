#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "polyco/smooth_field.hpp"

namespace polyco {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

class ChartBox {
 public:
  ChartBox(std::vector<std::string> names, std::vector<Interval> bounds);

  int dim() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Interval>& bounds() const { return bounds_; }
  const std::string& name(int i) const { return names_.at(i); }
  // -1 when absent
  int index_of(const std::string& name) const;
  int require(const std::string& name) const;
  bool contains(std::span<const double> x) const;
  bool same_as(const ChartBox& other) const;

 private:
  std::vector<std::string> names_;
  std::vector<Interval> bounds_;
};

using ChartPtr = std::shared_ptr<const ChartBox>;

ChartPtr make_chart(std::vector<std::string> names, std::vector<Interval> bounds);
void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* where);

// Radical inverse of `index` in `base`.
double halton(std::uint64_t index, int base);

// Deterministic Halton points filling the box. Different seeds start the
// sequence at different offsets.
std::vector<Coords> halton_samples(const ChartBox& box, int count, std::uint64_t seed = 0);

}  // namespace polyco
