#ifndef CHAPREL_ERRORS_HPP
#define CHAPREL_ERRORS_HPP

#include <array>
#include <stdexcept>
#include <string>

namespace chaprel {

/// Input lies outside the physical region or an operation's domain.
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Conserved -> primitive inversion failed (input outside the map's image).
class inversion_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Primitive recovery failed for a specific cell (Godunov mode).
class recovery_error : public inversion_error {
public:
  recovery_error(int cell, const std::string& what_arg)
      : inversion_error("cell " + std::to_string(cell) + ": " + what_arg),
        cell_index(cell) {}
  int cell_index;
};

/// Requested curve parameter leaves the admissible region; carries the
/// feasible parameter range.
class off_curve_error : public domain_error {
public:
  off_curve_error(const std::string& what_arg, double lo, double hi)
      : domain_error(what_arg), feasible_lo(lo), feasible_hi(hi) {}
  double feasible_lo;
  double feasible_hi;
};

/// Internal solver inconsistency (star state out of region, no real shock
/// speed, entropy selection failure).
class solver_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A flux scheme met data it cannot handle (Godunov at a delta-regime
/// interface); the message names the fallback.
class regime_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Quadrature did not reach the requested refinement; carries the
/// best-effort residuals and the level reached.
class quadrature_error : public std::runtime_error {
public:
  quadrature_error(const std::string& what_arg, std::array<double, 3> res,
                   int panels)
      : std::runtime_error(what_arg), best_effort(res), panels_reached(panels) {}
  std::array<double, 3> best_effort;
  int panels_reached;
};

} // namespace chaprel

#endif
