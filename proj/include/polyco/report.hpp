#pragma once

#include <map>
#include <string>
#include <vector>

namespace polyco {

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  int rank_found = -1;
  int rank_expected = -1;
  bool pass = true;
  std::string note;

  bool has_residual() const { return tolerance > 0.0; }
  bool has_rank() const { return rank_expected >= 0; }
};

class VerificationReport {
 public:
  explicit VerificationReport(std::string subject = {}) : subject_(std::move(subject)) {}

  const std::string& subject() const { return subject_; }
  const std::vector<CheckResult>& checks() const { return checks_; }

  void add(CheckResult c);
  // pass iff residual <= tol (NaN fails)
  CheckResult& add_residual(const std::string& name, double residual, double tol, std::string note = {});
  CheckResult& add_rank(const std::string& name, int found, int expected, std::string note = {});
  CheckResult& add_flag(const std::string& name, bool pass, std::string note = {});
  void merge(const VerificationReport& other, const std::string& prefix = {});

  bool passed() const;
  const CheckResult* first_failure() const;
  const CheckResult* find(const std::string& name) const;
  const CheckResult& at(const std::string& name) const;

  // Flat `key = value` block; keys are `<check>.<field>` plus `overall.*`.
  std::string to_text() const;
  // One line naming the first failed check and its residual or rank.
  std::string failure_summary() const;

 private:
  std::string subject_;
  std::vector<CheckResult> checks_;
};

std::string format_real(double v);
std::map<std::string, std::string> parse_key_values(const std::string& text);

}  // namespace polyco
