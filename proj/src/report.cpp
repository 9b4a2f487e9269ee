#include "polyco/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace polyco {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

void VerificationReport::add(CheckResult c) { checks_.push_back(std::move(c)); }

CheckResult& VerificationReport::add_residual(const std::string& name, double residual, double tol,
                                              std::string note) {
  CheckResult c;
  c.name = name;
  c.max_residual = residual;
  c.tolerance = tol;
  c.pass = std::isfinite(residual) && residual <= tol;
  c.note = std::move(note);
  checks_.push_back(std::move(c));
  return checks_.back();
}

CheckResult& VerificationReport::add_rank(const std::string& name, int found, int expected, std::string note) {
  CheckResult c;
  c.name = name;
  c.rank_found = found;
  c.rank_expected = expected;
  c.pass = found == expected;
  c.note = std::move(note);
  checks_.push_back(std::move(c));
  return checks_.back();
}

CheckResult& VerificationReport::add_flag(const std::string& name, bool pass, std::string note) {
  CheckResult c;
  c.name = name;
  c.pass = pass;
  c.note = std::move(note);
  checks_.push_back(std::move(c));
  return checks_.back();
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
  for (auto c : other.checks_) {
    if (!prefix.empty()) c.name = prefix + "." + c.name;
    checks_.push_back(std::move(c));
  }
}

bool VerificationReport::passed() const { return first_failure() == nullptr; }

const CheckResult* VerificationReport::first_failure() const {
  for (const auto& c : checks_)
    if (!c.pass) return &c;
  return nullptr;
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

const CheckResult& VerificationReport::at(const std::string& name) const {
  if (const auto* c = find(name)) return *c;
  throw std::out_of_range("report has no check " + name);
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  if (!subject_.empty()) os << "# " << subject_ << "\n";
  for (const auto& c : checks_) {
    if (c.has_residual()) {
      os << c.name << ".max_residual = " << format_real(c.max_residual) << "\n";
      os << c.name << ".tolerance = " << format_real(c.tolerance) << "\n";
    }
    if (c.has_rank()) {
      os << c.name << ".rank_found = " << c.rank_found << "\n";
      os << c.name << ".rank_expected = " << c.rank_expected << "\n";
    }
    os << c.name << ".pass = " << (c.pass ? "true" : "false") << "\n";
    if (!c.note.empty()) os << c.name << ".note = " << c.note << "\n";
  }
  os << "overall.pass = " << (passed() ? "true" : "false") << "\n";
  if (const auto* f = first_failure()) os << "overall.first_failure = " << f->name << "\n";
  return os.str();
}

std::string VerificationReport::failure_summary() const {
  const auto* f = first_failure();
  if (!f) return "all checks passed";
  std::ostringstream os;
  os << "first failed check: " << f->name;
  if (f->has_residual())
    os << " (max residual " << format_real(f->max_residual) << " > tolerance " << format_real(f->tolerance) << ")";
  if (f->has_rank()) os << " (rank found " << f->rank_found << ", expected " << f->rank_expected << ")";
  if (!f->note.empty()) os << ": " << f->note;
  return os.str();
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

}  // namespace polyco
