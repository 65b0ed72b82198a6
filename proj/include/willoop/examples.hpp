#ifndef WILLOOP_EXAMPLES_HPP
#define WILLOOP_EXAMPLES_HPP

#include "willoop/surface.hpp"
#include "willoop/dpw.hpp"
#include "willoop/report.hpp"

#include <functional>
#include <memory>
#include <optional>

namespace willoop {

// Registered surfaces with exact closed-form jets, their generating
// potentials where known, and the invariants the CLI verifies.
struct ExampleEntry {
  std::string name;
  std::string description;
  int n = 2;
  bool willmore = true;
  bool sphere_domain = true;  // defined on S^2 (two-chart atlas applies)
  double expected_energy = -1.0;  // < 0: not checked
  std::optional<HarmonicCase> expected_case;
  int expected_rank = 0;
  bool expect_dual = false;      // S-Willmore with a genuine dual
  bool totally_isotropic = false;

  // associated family member at |lambda| = 1; chart 2 covers z = infinity
  std::function<std::shared_ptr<JetProvider>(Cx lambda)> provider;
  std::function<std::shared_ptr<JetProvider>(Cx lambda)> chart2;
  std::optional<Potential> potential;
  std::function<CMat(double)> symmetry;  // R_t with x(e^{-it} z) = R_t x(z)
};

const std::vector<ExampleEntry>& example_registry();
const ExampleEntry& find_example(const std::string& name);
std::vector<std::string> example_names();

// registration-time self test: conformality and residuals of every entry
VerificationReport registry_self_test();

// full verification suite for one entry
VerificationReport verify_example(const std::string& name, int grid_n = 41, double radius = 1.0);

// expected normalized potential of the Veronese sphere (degree -1 block)
CMat veronese_eta_minus1();

}  // namespace willoop

#endif
