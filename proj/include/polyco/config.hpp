#pragma once

#include <iosfwd>
#include <optional>

#include "polyco/instances.hpp"

namespace polyco {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// `[section]` headers and `key = value` lines; `#` starts a comment.
// Keys keep their file order within a section.
class ConfigFile {
 public:
  using Entries = std::vector<std::pair<std::string, std::string>>;

  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::string& path);

  bool has_section(const std::string& s) const;
  const Entries& section(const std::string& s) const;  // empty when absent
  std::optional<std::string> get(const std::string& s, const std::string& key) const;
  std::vector<std::string> sections() const;

 private:
  std::vector<std::pair<std::string, Entries>> data_;
};

std::vector<std::string> split_list(const std::string& text, char sep = ',');
std::vector<double> parse_reals(const std::string& text, const std::string& what);

// Catalog reference ([instance] name = ...) or a structure written out in
// [chart], [tau], [omega], [hamiltonian], [action], [momentum].
CatalogInstance instance_from_config(const ConfigFile& cfg);

// Config text for a structure and Hamiltonian on `chart`, coefficients fitted
// as polynomials of total degree <= 4. Non-polynomial entries are written as
// comments and listed in `unfitted`.
struct ExportResult {
  std::string text;
  std::vector<std::string> unfitted;
  double worst_fit = 0.0;
};
ExportResult export_structure(const std::string& label, const KPolycosymplecticStructure& s, const SmoothField& h,
                              int samples = 400, std::uint64_t seed = 0);

}  // namespace polyco
