#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace dfp {

/// Supremum of r(t): 1 / (2 sqrt 2).
inline constexpr double kRLimit = 1.0 / (2.0 * std::numbers::sqrt2);

/// Predicted densities at scaled time t. q in pairs/n^2, x in vertices/n,
/// y in vertices/sqrt(n).
struct TrajectoryPoint {
  double t = 0, r = 0;
  double q0 = 0, q1 = 0;
  double x0 = 0, x1 = 0, x2 = 0;
  double y00 = 0, y01 = 0, y10 = 0, y11 = 0;

  double q() const { return q0 + q1; }
  double y() const { return y00 + y01 + y10 + y11; }
};

/// d/dt of (q0, q1, x0, x1, x2, y00, y01, y10, y11).
using Derivative = std::array<double, 9>;

/// Root of 8t + 4r - 3 sqrt2 artanh(2 sqrt2 r) = 0 together with
/// gap = 1 - 2 sqrt2 r, which keeps full relative precision when r is
/// within rounding distance of its limit (t beyond roughly 2).
struct RootR {
  double r = 0;
  double gap = 1;
};

RootR solve_r_precise(double t);
/// r(t); absolute accuracy better than 1e-13.
double solve_r(double t);
/// Left-hand side of the implicit equation at (t, root), evaluated through
/// the gap when it is small.
double implicit_residual(double t, const RootR& root);
/// dr/dt = (1 - 8r^2) / (1 + 4r^2)
double r_rate(double r);

TrajectoryPoint closed_form(double t);
/// Right-hand side of the nine-variable system. Throws SingularityError
/// when q0 + q1 <= 0.
Derivative ode_rhs(const TrajectoryPoint& p);
Derivative as_vector(const TrajectoryPoint& p);

/// Classical RK4 from the initial condition, carrying r alongside through
/// dr/dt. Returns the point at every step, starting with t = 0.
std::vector<TrajectoryPoint> integrate_ode(double t_max, double dt);

struct EnvelopeConfig {
  double K = 10.0;
  double epsilon = 1.0 / 41.0;
  std::optional<double> mu;  // defaults to epsilon / (2K)
  double n = 1e6;

  double horizon_mu() const { return mu.value_or(epsilon / (2.0 * K)); }
  /// m = mu sqrt(log n) n^{3/2}
  double step_budget() const;
  void validate() const;
};

struct Envelopes {
  double theta_y = 1, theta_q = 1, theta_x = 1, theta_r = 1;
  double delta_q = 0, delta_x = 0, delta_y = 0, delta_r = 0;
};

/// 1 + integral_0^t K e^{K(s^2 + s)} ds by adaptive Simpson.
double theta_q(double t, double K);
Envelopes envelopes(double t, const EnvelopeConfig& cfg);

struct InequalityReport {
  bool ok = true;
  std::size_t checked_points = 0;
  std::string violated;  // name of the first failing inequality
  double t = 0, lhs = 0, rhs = 0;
};

/// Evaluates the trajectory inequalities (q1 <= q0, x_j <= x0 = 4q0^2,
/// y00 <= 2 sqrt2 q0, y <= 12 t q0 <= 3/2, delta_x = 2 q0 delta_y,
/// t delta_q <= delta_y) on a uniform grid of `points` over [0, t_max].
InequalityReport check_envelope_inequalities(double t_max, const EnvelopeConfig& cfg, std::size_t points = 2001);

/// Header: t,r,q0,q1,x0,x1,x2,y00,y01,y10,y11,delta_q,delta_x,delta_y,delta_r
std::string trajectory_csv(const std::vector<TrajectoryPoint>& points, const EnvelopeConfig& cfg);
/// Reads the point columns back from trajectory_csv output; envelope columns
/// are ignored. Throws InvalidInput on a malformed header or row.
std::vector<TrajectoryPoint> parse_trajectory_csv(const std::string& text);

}  // namespace dfp
