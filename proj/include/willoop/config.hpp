#ifndef WILLOOP_CONFIG_HPP
#define WILLOOP_CONFIG_HPP

#include <string>

namespace willoop {

// Global tolerances and numerical knobs. Every value here can be overridden
// from a config file (key = value lines) or CLI flags.
struct Config {
  double tol_null = 1e-10;      // lightlike test |<v,v>|
  double tol_group = 1e-10;     // group / algebra membership
  double tol_loop = 1e-10;      // twist / reality of loops
  double tol_fact = 1e-9;       // factorization residual
  double tol_cell = 1e-8;       // cell witness comparison
  double tol_conf_exact = 1e-9; // conformality, exact jets
  double tol_conf_fd = 1e-5;    // conformality, finite-difference jets
  double fd_step = 1e-3;        // default FD step for jet providers
  double quad_target = 1e-8;    // energy quadrature target
  double rk_tol = 1e-12;        // ODE integration tolerance
  double pole_detour = 1e-2;    // pole detour radius for potential integration
  double grid_eps = 1e-3;       // excluded disk radius around chart singularities
  int trunc_default = 10;       // default Laurent truncation for factorizations
  int deg_max = 8;              // default truncation for series arithmetic

  static Config& get();
  void load_file(const std::string& path);   // "key = value" per line, '#' comments
  bool set(const std::string& key, const std::string& value);
};

}  // namespace willoop

#endif
