#ifndef CHAPREL_RIEMANN_HPP
#define CHAPREL_RIEMANN_HPP

#include <array>
#include <utility>
#include <variant>

#include "chaprel/state.hpp"

namespace chaprel {

/// Two admissible constant states separated by a jump at x = 0.
struct RiemannData {
  PrimitiveState left;
  PrimitiveState right;
  ModelParams params;
};

/// Solution made of three contact discontinuities: four constant states
/// separated by waves of speeds a = lambda1(U-), v*, b = lambda3(U+).
struct ClassicalFan {
  std::array<PrimitiveState, 4> states; // U-, U*1, U*2, U+
  std::array<double, 3> speeds;         // a, v*, b

  double a() const { return speeds[0]; }
  double v_star() const { return speeds[1]; }
  double b() const { return speeds[2]; }
  double rho_star() const { return states[1].rho; }
};

/// Delta shock: straight carrier x = sigma t with linear-in-t Dirac
/// weights h(t) = h_slope t on n and w(t) = w_slope t on rho, plus the
/// jump coefficients E, F, G of the integrated relation.
struct DeltaShock {
  double sigma = 0.0;
  double h_slope = 0.0;
  double w_slope = 0.0;
  double E = 0.0;
  double F = 0.0;
  double G = 0.0;
};

enum class Regime { Classical, Delta };

/// Tagged solution of a Riemann problem together with its data.
struct RiemannSolution {
  RiemannData data;
  std::variant<ClassicalFan, DeltaShock> wave;

  Regime regime() const {
    return std::holds_alternative<DeltaShock>(wave) ? Regime::Delta
                                                    : Regime::Classical;
  }
  const ClassicalFan& fan() const { return std::get<ClassicalFan>(wave); }
  const DeltaShock& delta() const { return std::get<DeltaShock>(wave); }
};

enum class RegionTag { Left, Star1, Star2, Right, DeltaCarrier };

/// Value of a solution at one self-similar coordinate. For DeltaCarrier
/// there is no finite primitive state; the carrier speed and weight
/// slopes are reported instead.
struct SamplePoint {
  RegionTag tag = RegionTag::Left;
  PrimitiveState state;
  double v_delta = 0.0;
  double h_slope = 0.0;
  double w_slope = 0.0;
};

/// a = lambda1(left), b = lambda3(right).
std::pair<double, double> edge_speeds(const RiemannData& data);

/// Delta iff b <= a (the boundary case belongs to the delta branch).
Regime classify(const RiemannData& data);

/// Star-state construction: rho* from the closed form
/// (c^2 - ab + sqrt((c^2-a^2)(c^2-b^2))) / (c^2 (b - a)), v* from the
/// 1-family relation, n*1/n*2 by Hugoniot scaling from each side.
/// Requires classify(data) == Classical. Throws solver_error if the star
/// state lands outside the region (never silently clamps).
ClassicalFan solve_classical(const RiemannData& data);

/// Shock speed from the quadratic E s^2 - 2 F s + G = 0, selected by the
/// entropy condition b <= s <= a; then w_slope = (E sigma - F)(1 -
/// sigma^2/c^2) and h_slope = sqrt(1 - sigma^2/c^2)([D] sigma - [D v]).
/// Requires classify(data) == Delta. Throws solver_error when no real
/// speed exists or entropy selects nothing / both roots.
DeltaShock solve_delta(const RiemannData& data);

/// Dispatch on the classifier.
RiemannSolution solve(const RiemannData& data);

/// Sample at xi = x/t. Classical regions use the closed-interval
/// convention: U- for xi < a, U*1 for a <= xi <= v*, U*2 for
/// v* < xi <= b, U+ for xi > b. Delta solutions return the carrier tag
/// exactly at xi == sigma.
SamplePoint sample(const RiemannSolution& sol, double xi);

} // namespace chaprel

#endif
