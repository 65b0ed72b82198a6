#include "willoop/report.hpp"

#include <json.hpp>
#include <sstream>
#include <iomanip>
#include <cmath>

namespace willoop {

void VerificationReport::add(const std::string& name, double residual, double tol) {
  checks.push_back({name, residual, tol, std::isfinite(residual) && residual < tol});
}

void VerificationReport::add_value(const std::string& name, double value, double expected,
                                   double tol) {
  add(name, std::abs(value - expected), tol);
}

bool VerificationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["subject"] = subject;
  j["pass"] = all_pass();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["check"] = c.check;
    e["residual"] = c.residual;
    e["tol"] = c.tol;
    e["pass"] = c.pass;
    j["checks"].push_back(e);
  }
  return j.dump(2);
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  os << "== " << subject << " ==\n";
  for (const auto& c : checks) {
    os << (c.pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(44) << c.check
       << " residual=" << std::scientific << std::setprecision(3) << c.residual
       << " tol=" << c.tol << "\n";
  }
  os << (all_pass() ? "all checks passed" : "SOME CHECKS FAILED") << "\n";
  return os.str();
}

}  // namespace willoop
