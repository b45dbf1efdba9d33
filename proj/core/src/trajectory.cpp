#include "dfp/trajectory.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "dfp/errors.hpp"
#include "dfp/run_record.hpp"

namespace dfp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
// Below this gap the root is solved for in log-gap space.
constexpr double kGapSwitch = 0.1;

// Monotone bisection of f on [lo, hi] with f(lo) and f(hi) of opposite sign,
// f increasing if `increasing`. Stops after 200 halvings or when the midpoint
// no longer separates the endpoints.
double bisect(const std::function<double(double)>& f, double lo, double hi, bool increasing) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = f(mid);
    if ((v > 0) == increasing) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

RootR solve_r_precise(double t) {
  if (!(t >= 0)) throw InvalidParameter("solve_r: t must be nonnegative");
  if (t == 0) return {0.0, 1.0};
  const double r_switch = (1.0 - kGapSwitch) / (2.0 * kSqrt2);
  // f(r) = 8t + 4r - 3 sqrt2 artanh(2 sqrt2 r) is strictly decreasing in r
  auto f = [t](double r) { return 8 * t + 4 * r - 3 * kSqrt2 * std::atanh(2 * kSqrt2 * r); };
  if (f(r_switch) <= 0) {
    const double r = bisect(f, 0.0, r_switch, false);
    return {r, 1.0 - 2.0 * kSqrt2 * r};
  }
  // g(log s) with s = 1 - 2 sqrt2 r; increasing in s
  auto g = [t](double log_gap) {
    const double s = std::exp(log_gap);
    return 8 * t + 4 * (1 - s) / (2 * kSqrt2) - 1.5 * kSqrt2 * (std::log(2 - s) - log_gap);
  };
  const double log_gap = bisect(g, -745.0, std::log(kGapSwitch), true);
  const double s = std::exp(log_gap);
  return {(1.0 - s) / (2.0 * kSqrt2), s};
}

double solve_r(double t) { return solve_r_precise(t).r; }

double implicit_residual(double t, const RootR& root) {
  if (root.gap < kGapSwitch) {
    return 8 * t + 4 * root.r - 1.5 * kSqrt2 * (std::log(2 - root.gap) - std::log(root.gap));
  }
  return 8 * t + 4 * root.r - 3 * kSqrt2 * std::atanh(2 * kSqrt2 * root.r);
}

double r_rate(double r) { return (1 - 8 * r * r) / (1 + 4 * r * r); }

TrajectoryPoint closed_form(double t) {
  const double r = solve_r(t);
  const double e4 = std::exp(-4 * t * t);
  const double e8 = std::exp(-8 * t * t);
  const double r2 = r * r;
  TrajectoryPoint p;
  p.t = t;
  p.r = r;
  p.q0 = e4 / 2;
  p.q1 = 4 * r2 * e4 / 2;
  p.x0 = e8;
  p.x1 = 8 * r2 * e8;
  p.x2 = 16 * r2 * r2 * e8;
  p.y00 = 4 * r * e4;
  p.y01 = 16 * r2 * r * e4;
  p.y10 = 4 * (t - r) * e4;
  p.y11 = 16 * r2 * (t - r) * e4;
  return p;
}

Derivative ode_rhs(const TrajectoryPoint& p) {
  const double q = p.q();
  if (!(q > 0)) throw SingularityError("ode_rhs: q0 + q1 must be positive");
  const double y = p.y();
  return {
      -p.y00 - p.y10,
      -p.y01 - p.y11 + (p.q0 - 2 * p.q1) * p.y00 / q,
      -2 * p.x0 * y / q,
      (2 * p.x0 * p.y00 - 2 * p.x1 * (y + p.y00)) / q,
      (p.x1 * p.y00 - 2 * p.x2 * (y + 2 * p.y00)) / q,
      (2 * p.x0 - p.y00 * (p.y00 + y)) / q,
      (p.x1 + p.y00 * p.y00 - p.y01 * (y + 3 * p.y00)) / q,
      (p.x1 + p.y00 * p.y00 - p.y10 * y) / q,
      (2 * p.x2 + p.y01 * p.y00 + p.y10 * p.y00 - p.y11 * (y + 2 * p.y00)) / q,
  };
}

Derivative as_vector(const TrajectoryPoint& p) {
  return {p.q0, p.q1, p.x0, p.x1, p.x2, p.y00, p.y01, p.y10, p.y11};
}

namespace {

using State = std::array<double, 10>;  // r followed by the nine tracked densities

TrajectoryPoint to_point(double t, const State& s) {
  return {t, s[0], s[1], s[2], s[3], s[4], s[5], s[6], s[7], s[8], s[9]};
}

State rate(const State& s) {
  const Derivative d = ode_rhs(to_point(0, s));
  State out;
  out[0] = r_rate(s[0]);
  std::copy(d.begin(), d.end(), out.begin() + 1);
  return out;
}

State axpy(const State& s, double h, const State& k) {
  State out;
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] + h * k[i];
  return out;
}

}  // namespace

std::vector<TrajectoryPoint> integrate_ode(double t_max, double dt) {
  if (!(t_max > 0)) throw InvalidParameter("integrate_ode: t_max must be positive");
  if (!(dt > 0 && dt <= 1e-2)) throw InvalidParameter("integrate_ode: dt must lie in (0, 1e-2]");
  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  State s{0.0, 0.5, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  std::vector<TrajectoryPoint> out;
  out.reserve(steps + 1);
  out.push_back(to_point(0, s));
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * dt;
    const double h = std::min(dt, t_max - t0);
    const State k1 = rate(s);
    const State k2 = rate(axpy(s, h / 2, k1));
    const State k3 = rate(axpy(s, h / 2, k2));
    const State k4 = rate(axpy(s, h, k3));
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    if (!(s[1] + s[2] > 0)) throw SingularityError("integrate_ode: q underflowed");
    out.push_back(to_point(k + 1 == steps ? t_max : t0 + h, s));
  }
  return out;
}

double EnvelopeConfig::step_budget() const {
  return horizon_mu() * std::sqrt(std::log(n)) * std::pow(n, 1.5);
}

void EnvelopeConfig::validate() const {
  if (!(K > 0)) throw InvalidParameter("envelope constant K must be positive");
  if (!(epsilon > 0 && epsilon < 1.0 / 40.0)) throw InvalidParameter("epsilon must lie in (0, 1/40)");
  if (!(horizon_mu() > 0)) throw InvalidParameter("mu must be positive");
  if (!(n >= 2)) throw InvalidParameter("n must be at least 2");
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb, double m, double fm,
               double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15;
  return simpson(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
         simpson(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

}  // namespace

double theta_q(double t, double K) {
  if (!(t >= 0)) throw InvalidParameter("theta_q: t must be nonnegative");
  if (t == 0) return 1.0;
  auto f = [K](double s) { return K * std::exp(K * (s * s + s)); };
  const double fa = f(0), fb = f(t), fm = f(t / 2);
  const double whole = t / 6 * (fa + 4 * fm + fb);
  // the integrand spans e^{K t^2}, so the target is relative; the crude
  // first estimate overshoots, hence the extra factor of ten
  const double tol = 1e-10 * std::max(1.0, std::abs(whole));
  return 1.0 + simpson(f, 0, fa, t, fb, t / 2, fm, whole, tol, 60);
}

Envelopes envelopes(double t, const EnvelopeConfig& cfg) {
  if (!(t >= 0)) throw InvalidParameter("envelopes: t must be nonnegative");
  Envelopes e;
  e.theta_y = std::exp(cfg.K * (t * t + t));
  e.theta_q = theta_q(t, cfg.K);
  e.theta_x = std::exp(-4 * t * t) * e.theta_y;
  e.theta_r = std::exp(4 * t * t) * e.theta_y;
  const double scale = std::pow(cfg.n, -1.0 / 6.0);
  e.delta_q = e.theta_q * scale;
  e.delta_x = e.theta_x * scale;
  e.delta_y = e.theta_y * scale;
  e.delta_r = e.theta_r * scale;
  return e;
}

InequalityReport check_envelope_inequalities(double t_max, const EnvelopeConfig& cfg, std::size_t points) {
  cfg.validate();
  if (!(t_max >= 0)) throw InvalidParameter("check_envelope_inequalities: t_max must be nonnegative");
  if (points < 2) points = 2;
  InequalityReport rep;
  // rounding slack for quantities that are equal at some t
  auto le = [](double a, double b) { return a <= b + 1e-12 * std::max(std::abs(a), std::abs(b)); };
  auto eq = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
  for (std::size_t k = 0; k < points; ++k) {
    const double t = t_max * static_cast<double>(k) / static_cast<double>(points - 1);
    const auto p = closed_form(t);
    const auto e = envelopes(t, cfg);
    const double y = p.y();
    struct Check {
      const char* name;
      double lhs, rhs;
      bool ok;
    };
    const Check checks[] = {
        {"q1 <= q0", p.q1, p.q0, le(p.q1, p.q0)},
        {"x0 = 4 q0^2", p.x0, 4 * p.q0 * p.q0, eq(p.x0, 4 * p.q0 * p.q0)},
        {"x1 <= x0", p.x1, p.x0, le(p.x1, p.x0)},
        {"x2 <= x0", p.x2, p.x0, le(p.x2, p.x0)},
        {"y00 <= 2 sqrt2 q0", p.y00, 2 * kSqrt2 * p.q0, le(p.y00, 2 * kSqrt2 * p.q0)},
        {"y <= 12 t q0", y, 12 * t * p.q0, le(y, 12 * t * p.q0)},
        {"y <= 3/2", y, 1.5, le(y, 1.5)},
        {"delta_x = 2 q0 delta_y", e.delta_x, 2 * p.q0 * e.delta_y, eq(e.delta_x, 2 * p.q0 * e.delta_y)},
        {"t delta_q <= delta_y", t * e.delta_q, e.delta_y, le(t * e.delta_q, e.delta_y)},
    };
    for (const auto& c : checks) {
      if (!c.ok) {
        rep.ok = false;
        rep.violated = c.name;
        rep.t = t;
        rep.lhs = c.lhs;
        rep.rhs = c.rhs;
        rep.checked_points = k + 1;
        return rep;
      }
    }
  }
  rep.checked_points = points;
  return rep;
}

std::string trajectory_csv(const std::vector<TrajectoryPoint>& points, const EnvelopeConfig& cfg) {
  std::ostringstream out;
  out << "t,r,q0,q1,x0,x1,x2,y00,y01,y10,y11,delta_q,delta_x,delta_y,delta_r\n";
  for (const auto& p : points) {
    const auto e = envelopes(p.t, cfg);
    for (const double v : {p.t, p.r, p.q0, p.q1, p.x0, p.x1, p.x2, p.y00, p.y01, p.y10, p.y11, e.delta_q, e.delta_x,
                           e.delta_y}) {
      out << format_double(v) << ',';
    }
    out << format_double(e.delta_r) << '\n';
  }
  return out.str();
}

std::vector<TrajectoryPoint> parse_trajectory_csv(const std::string& text) {
  static const std::string header = "t,r,q0,q1,x0,x1,x2,y00,y01,y10,y11,delta_q,delta_x,delta_y,delta_r";
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header) throw InvalidInput("trajectory csv: unexpected header");
  std::vector<TrajectoryPoint> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::array<double, 15> v{};
    std::size_t pos = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const std::size_t end = line.find(',', pos);
      if ((end == std::string::npos) != (k + 1 == v.size())) {
        throw InvalidInput("trajectory csv: row " + std::to_string(row) + " has the wrong number of fields");
      }
      const std::string field = line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
      char* stop = nullptr;
      v[k] = std::strtod(field.c_str(), &stop);
      if (field.empty() || *stop != '\0') {
        throw InvalidInput("trajectory csv: row " + std::to_string(row) + ": bad number '" + field + "'");
      }
      pos = end + 1;
    }
    out.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]});
  }
  return out;
}

}  // namespace dfp
