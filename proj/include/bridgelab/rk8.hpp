#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

namespace bridgelab {

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegratorStats {
  long steps = 0;
  long rejected = 0;
  double tol = 0;
};

/// Explicit Runge-Kutta-Fehlberg 7(8), propagating the 8th-order solution,
/// with a PI step-size controller.
///
/// The error of a step is the RMS over components of err_i / (tol * (1 + |x_i|)),
/// i.e. a mixed absolute/relative test with the same tolerance for both.
/// Steps are shortened to land exactly on every requested output time;
/// the controller's proposal is kept across such truncations.
class AdaptiveRK8 {
 public:
  using State = std::vector<double>;

  explicit AdaptiveRK8(double tol) : tol_(tol) {
    if (!(tol >= 1e-14 && tol <= 1e-3)) {
      throw std::invalid_argument("integrator tolerance out of range: " + std::to_string(tol));
    }
  }

  /// Integrates x from t0 through each time in `outputs` (strictly increasing,
  /// all > t0), calling observe(t, x) at each. x holds the final state on return.
  template <class Rhs, class Observer>
  IntegratorStats run(Rhs&& rhs, State& x, double t0, std::span<const double> outputs,
                      Observer&& observe) {
    IntegratorStats stats;
    stats.tol = tol_;
    if (outputs.empty()) return stats;
    namespace odeint = boost::numeric::odeint;
    odeint::runge_kutta_fehlberg78<State> stepper;
    auto system = [&rhs](const State& s, State& ds, double t) { rhs(s, ds, t); };

    State trial(x.size()), err(x.size());
    double t = t0;
    const double span = outputs.back() - t0;
    double h = initial_step(span);
    double err_prev = 1.0;
    const double h_min = 1e-14 * std::max(1.0, std::abs(outputs.back()));

    for (double target : outputs) {
      if (!(target > t)) throw std::invalid_argument("output times must be increasing");
      while (t < target) {
        const bool truncated = t + h >= target;
        const double step = truncated ? target - t : h;
        trial = x;
        stepper.do_step(system, trial, t, step, err);
        const double e = error_norm(x, trial, err);
        if (!std::isfinite(e)) {
          throw IntegrationError("non-finite state at t=" + std::to_string(t));
        }
        if (e <= 1.0) {
          x.swap(trial);
          t = truncated ? target : t + step;
          ++stats.steps;
          const double en = std::max(e, 1e-10);
          double factor = kSafety * std::pow(en, -kBeta1) * std::pow(err_prev, kBeta2);
          factor = std::clamp(factor, 0.2, 5.0);
          err_prev = en;
          // a truncated step says nothing new about the natural step size
          if (!truncated || step >= h) h = step * factor;
        } else {
          ++stats.rejected;
          h = step * std::max(0.2, kSafety * std::pow(e, -1.0 / 8.0));
        }
        if (h < h_min) {
          throw IntegrationError("step size underflow at t=" + std::to_string(t));
        }
        if (stats.steps + stats.rejected > kMaxSteps) {
          throw IntegrationError("step budget exhausted at t=" + std::to_string(t));
        }
      }
      observe(t, x);
    }
    return stats;
  }

  double tol() const { return tol_; }

 private:
  static constexpr double kSafety = 0.9;
  static constexpr double kBeta1 = 0.7 / 8.0;
  static constexpr double kBeta2 = 0.4 / 8.0;
  static constexpr long kMaxSteps = 20'000'000;

  double initial_step(double span) const {
    // 8th-order method: a step of span * tol^(1/8) is a safe first guess
    return span * std::min(0.05, std::pow(tol_, 1.0 / 8.0));
  }

  double error_norm(const State& x0, const State& x1, const State& err) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < x0.size(); ++i) {
      const double scale = tol_ * (1.0 + std::max(std::abs(x0[i]), std::abs(x1[i])));
      const double r = err[i] / scale;
      sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(x0.size()));
  }

  double tol_;
};

}  // namespace bridgelab
