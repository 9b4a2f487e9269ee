#include "polyco/chart.hpp"

#include <array>
#include <set>
#include <stdexcept>

namespace polyco {

ChartBox::ChartBox(std::vector<std::string> names, std::vector<Interval> bounds)
    : names_(std::move(names)), bounds_(std::move(bounds)) {
  if (names_.empty()) throw std::invalid_argument("ChartBox: dimension must be at least 1");
  if (names_.size() != bounds_.size())
    throw std::invalid_argument("ChartBox: names and bounds differ in length");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw std::invalid_argument("ChartBox: empty coordinate name");
    if (!seen.insert(n).second) throw std::invalid_argument("ChartBox: duplicate coordinate " + n);
  }
  for (std::size_t i = 0; i < bounds_.size(); ++i)
    if (!(bounds_[i].lo <= bounds_[i].hi))
      throw std::invalid_argument("ChartBox: empty interval for " + names_[i]);
}

int ChartBox::index_of(const std::string& name) const {
  for (int i = 0; i < dim(); ++i)
    if (names_[i] == name) return i;
  return -1;
}

int ChartBox::require(const std::string& name) const {
  int i = index_of(name);
  if (i < 0) throw std::invalid_argument("unknown coordinate " + name);
  return i;
}

bool ChartBox::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (x[i] < bounds_[i].lo || x[i] > bounds_[i].hi) return false;
  return true;
}

bool ChartBox::same_as(const ChartBox& other) const { return names_ == other.names_; }

ChartPtr make_chart(std::vector<std::string> names, std::vector<Interval> bounds) {
  return std::make_shared<const ChartBox>(std::move(names), std::move(bounds));
}

void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* where) {
  if (a.get() == b.get()) return;
  if (!a || !b || !a->same_as(*b)) throw std::invalid_argument(std::string(where) + ": chart mismatch");
}

double halton(std::uint64_t index, int base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

namespace {
constexpr std::array<int, 24> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                         41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
}

std::vector<Coords> halton_samples(const ChartBox& box, int count, std::uint64_t seed) {
  if (box.dim() > static_cast<int>(kPrimes.size()))
    throw std::invalid_argument("halton_samples: chart dimension too large");
  std::vector<Coords> pts;
  pts.reserve(count);
  // Skipping the first few indices avoids the all-zero corner and the
  // strongly correlated start of high bases.
  const std::uint64_t start = 17 + seed * 7919;
  for (int s = 0; s < count; ++s) {
    Coords x(box.dim());
    for (int i = 0; i < box.dim(); ++i) {
      const auto& b = box.bounds()[i];
      x[i] = b.lo + (b.hi - b.lo) * halton(start + s, kPrimes[i]);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

}  // namespace polyco
