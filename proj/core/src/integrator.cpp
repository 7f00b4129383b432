#include "spectral_flrw/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "spectral_flrw/action.hpp"
#include "spectral_flrw/errors.hpp"
#include "spectral_flrw/ode.hpp"

namespace sflrw {

std::string to_string(Method m) { return m == Method::rk4 ? "rk4" : "rk45"; }

Method method_from_string(const std::string& name) {
  if (name == "rk4") return Method::rk4;
  if (name == "rk45") return Method::rk45;
  throw std::invalid_argument(fmt::format("unknown method '{}' (expected rk4 or rk45)", name));
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::collapse: return "collapse";
    case Termination::non_finite: return "non_finite";
  }
  return "unknown";
}

void IntegratorConfig::validate() const {
  std::vector<std::string> problems;
  if (!(step > 0.0) || !std::isfinite(step)) problems.push_back(fmt::format("step = {} must be > 0", step));
  if (!(rel_tol > 0.0)) problems.push_back(fmt::format("rel_tol = {} must be > 0", rel_tol));
  if (!(abs_tol > 0.0)) problems.push_back(fmt::format("abs_tol = {} must be > 0", abs_tol));
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
    problems.push_back(fmt::format("t_span = [{}, {}] needs finite t1 > t0", t0, t1));
  }
  if (output_stride < 1) problems.push_back(fmt::format("output_stride = {} must be >= 1", output_stride));
  if (!(collapse_eps > 0.0)) problems.push_back(fmt::format("collapse_eps = {} must be > 0", collapse_eps));
  if (max_steps < 1) problems.push_back("max_steps must be >= 1");
  if (problems.empty()) return;
  std::string msg = "invalid integrator config:";
  for (const auto& p : problems) msg += " " + p + ";";
  throw ValidationError(msg);
}

double Trajectory::max_constraint() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.constraint));
  return m;
}

PhaseState solve_constraint_ic(double a1, double a2, double v2, Branch branch,
                               const CosmoParams& params, double t0) {
  if (!(a1 > 0.0) || !(a2 > 0.0)) {
    throw DomainError(fmt::format("initial scale factors must be positive (a1 = {}, a2 = {})", a1, a2));
  }
  const double rhs = params.lambda_eff * (a1 * a1 * a1 + a2 * a2 * a2) +
                     params.alpha * potential_W(a1, a2) - 6.0 * a2 * v2 * v2;
  if (rhs < 0.0) {
    throw DomainError(fmt::format(
        "constraint has no real root: 6 a1 v1^2 = {} < 0 (a1 = {}, a2 = {}, v2 = {})", rhs, a1,
        a2, v2));
  }
  const double v1 = std::sqrt(rhs / (6.0 * a1));
  return {t0, a1, branch == Branch::plus ? v1 : -v1, a2, v2};
}

namespace {

using Vec4 = ode::Vec<4>;

Vec4 pack(const PhaseState& s) { return {s.a1, s.v1, s.a2, s.v2}; }

PhaseState unpack(double t, const Vec4& y) { return {t, y[0], y[1], y[2], y[3]}; }

struct Rhs {
  const CosmoParams& params;
  double eps;
  Vec4 operator()(double t, const Vec4& y) const {
    const Accelerations acc = accelerations(unpack(t, y), params, eps);
    return {y[1], acc.a1, y[3], acc.a2};
  }
};

bool finite(const Vec4& y) { return y.allFinite(); }

class Recorder {
 public:
  Recorder(Trajectory& traj, const CosmoParams& params) : traj_(traj), params_(params) {}

  void push(double t, const Vec4& y) {
    const PhaseState s = unpack(t, y);
    traj_.samples.push_back({s, constraint_residual(s, params_)});
  }

  void fail(Termination cause, std::string note) {
    traj_.termination = cause;
    traj_.note = std::move(note);
  }

  // Returns false (and sets the termination cause) if y cannot be recorded.
  bool accept(double t, const Vec4& y, double eps) {
    if (!finite(y)) {
      traj_.termination = Termination::non_finite;
      traj_.note = fmt::format("non-finite state at t = {}", t);
      return false;
    }
    if (!(y[0] > eps) || !(y[2] > eps)) {
      traj_.termination = Termination::collapse;
      traj_.note = fmt::format("scale factor collapse at t = {}: a1 = {}, a2 = {}", t, y[0], y[2]);
      return false;
    }
    return true;
  }

 private:
  Trajectory& traj_;
  const CosmoParams& params_;
};

void run_rk4(const Vec4& y0, const Rhs& rhs, const IntegratorConfig& cfg, Recorder& rec) {
  const double span = cfg.t1 - cfg.t0;
  const auto n = static_cast<long>(std::ceil(span / cfg.step * (1.0 - 1e-12)));
  if (n > cfg.max_steps) {
    throw IntegrationError(fmt::format("rk4 needs {} steps, above max_steps = {}", n, cfg.max_steps));
  }
  Vec4 y = y0;
  for (long k = 0; k < n; ++k) {
    const double t = cfg.t0 + static_cast<double>(k) * cfg.step;
    const double t_next = k + 1 == n ? cfg.t1 : cfg.t0 + static_cast<double>(k + 1) * cfg.step;
    try {
      y = ode::rk4_step<4>(rhs, t, y, t_next - t);
    } catch (const CollapseError& e) {
      rec.fail(Termination::collapse, e.what());
      return;
    }
    if (!rec.accept(t_next, y, cfg.collapse_eps)) return;
    if ((k + 1) % cfg.output_stride == 0 || k + 1 == n) rec.push(t_next, y);
  }
}

void run_rk45(const Vec4& y0, const Rhs& rhs, const IntegratorConfig& cfg, Recorder& rec) {
  const double spacing = cfg.step * cfg.output_stride;
  const auto n_out = static_cast<long>(std::ceil((cfg.t1 - cfg.t0) / spacing * (1.0 - 1e-12)));
  Vec4 y = y0;
  double t = cfg.t0;
  double h = cfg.step;
  long steps = 0;
  for (long k = 1; k <= n_out; ++k) {
    const double target = k == n_out ? cfg.t1 : cfg.t0 + static_cast<double>(k) * spacing;
    while (t < target) {
      if (++steps > cfg.max_steps) {
        throw IntegrationError(fmt::format("rk45 exceeded max_steps = {} at t = {}", cfg.max_steps, t));
      }
      if (target - t <= 1e-13 * std::max(1.0, std::abs(target))) {
        t = target;
        break;
      }
      const bool last = t + h >= target;
      const double hh = last ? target - t : h;
      if (!(hh > 1e-14 * std::max(1.0, std::abs(t)))) {
        throw IntegrationError(fmt::format("rk45 step size underflow (h = {}) at t = {}", hh, t));
      }
      ode::EmbeddedStep<4> st;
      try {
        st = ode::dopri5_step<4>(rhs, t, y, hh);
      } catch (const CollapseError& e) {
        // a stage left the admissible region; retry smaller until the
        // collapse is resolved to the step floor
        h = 0.5 * hh;
        if (!(h > 1e-14 * std::max(1.0, std::abs(t)))) {
          rec.fail(Termination::collapse, e.what());
          return;
        }
        continue;
      }
      const double err = finite(st.y) && finite(st.err)
                             ? ode::error_norm<4>(st.err, y, st.y, cfg.rel_tol, cfg.abs_tol)
                             : std::numeric_limits<double>::infinity();
      if (err <= 1.0) {
        t = last ? target : t + hh;
        y = st.y;
        if (!rec.accept(t, y, cfg.collapse_eps)) return;
      }
      const double factor =
          err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      // a clipped final step says little about the natural step size
      if (!(last && err <= 1.0)) h = hh * factor;
    }
    rec.push(t, y);
  }
}

}  // namespace

Trajectory integrate(const PhaseState& ic, const CosmoParams& params,
                     const IntegratorConfig& cfg) {
  cfg.validate();
  Trajectory traj;
  traj.config = cfg;
  traj.params = params;
  Recorder rec(traj, params);
  const Vec4 y0 = pack(ic);
  if (!rec.accept(cfg.t0, y0, cfg.collapse_eps)) return traj;
  rec.push(cfg.t0, y0);
  const Rhs rhs{params, cfg.collapse_eps};
  if (cfg.method == Method::rk4) {
    run_rk4(y0, rhs, cfg, rec);
  } else {
    run_rk45(y0, rhs, cfg, rec);
  }
  return traj;
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  out << "t,a1,v1,a2,v2,constraint\n";
  for (const auto& s : traj.samples) {
    const PhaseState& p = s.state;
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", p.t, p.a1, p.v1, p.a2,
                       p.v2, s.constraint);
  }
}

OrderEstimate convergence_order(const PhaseState& ic, const CosmoParams& params,
                                const IntegratorConfig& cfg, std::span<const double> steps) {
  if (steps.size() < 3) throw std::invalid_argument("convergence_order needs >= 3 step sizes");
  const double q = steps[0] / steps[1];
  if (!(q > 1.0)) throw std::invalid_argument("step sizes must decrease");
  for (std::size_t k = 1; k + 1 < steps.size(); ++k) {
    if (std::abs(steps[k] / steps[k + 1] - q) > 1e-9 * q) {
      throw std::invalid_argument("step sizes must form a geometric progression");
    }
  }

  std::vector<Vec4> finals;
  for (double h : steps) {
    IntegratorConfig c = cfg;
    c.step = h;
    c.output_stride = std::numeric_limits<int>::max();
    const Trajectory traj = integrate(ic, params, c);
    if (traj.termination != Termination::completed) {
      throw IntegrationError(fmt::format("convergence run with h = {} ended early: {}", h, traj.note));
    }
    finals.push_back(pack(traj.final_state()));
  }

  OrderEstimate est;
  double scale = 0.0;
  for (const auto& y : finals) scale = std::max(scale, y.cwiseAbs().maxCoeff());
  for (std::size_t k = 0; k + 1 < finals.size(); ++k) {
    est.differences.push_back((finals[k] - finals[k + 1]).cwiseAbs().maxCoeff());
  }
  const std::size_t m = est.differences.size();
  const double d_coarse = est.differences[m - 2];
  const double d_fine = est.differences[m - 1];
  est.order = std::log(d_coarse / d_fine) / std::log(q);

  // Accumulated rounding in the final state grows like (steps) * eps.
  const double n_steps = (cfg.t1 - cfg.t0) / steps.back();
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() * scale *
                       std::max(1.0, std::sqrt(n_steps));
  bool monotone = true;
  for (std::size_t k = 0; k + 1 < m; ++k) monotone = monotone && est.differences[k + 1] < est.differences[k];
  const bool above_floor = d_fine > floor;
  est.conclusive = monotone && above_floor && std::isfinite(est.order);
  if (!monotone) est.note = "differences do not decrease with the step";
  else if (!above_floor) est.note = fmt::format("differences at the rounding floor ({:.3g})", floor);
  return est;
}

}  // namespace sflrw
