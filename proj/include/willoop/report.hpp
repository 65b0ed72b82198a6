#ifndef WILLOOP_REPORT_HPP
#define WILLOOP_REPORT_HPP

#include <string>
#include <vector>

namespace willoop {

struct CheckResult {
  std::string check;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string subject;
  std::vector<CheckResult> checks;

  void add(const std::string& name, double residual, double tol);
  void add_value(const std::string& name, double value, double expected, double tol);
  bool all_pass() const;
  std::string to_json() const;
  std::string to_text() const;
};

}  // namespace willoop

#endif
