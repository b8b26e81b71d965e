// SPDX-License-Identifier: Apache-2.0
#include "ris/impedance_optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>

#include "ris/errors.hpp"
#include "ris/kernels.hpp"

namespace ris {

std::vector<double> MaskSector::angles() const {
  std::vector<double> a;
  long cnt = std::lround((theta_u - theta_l) / step);
  for (long i = 0; i <= cnt; ++i) a.push_back(theta_l + step * static_cast<double>(i));
  return a;
}

MaskSector specular_mask() { return {0.0, deg2rad(1.0), deg2rad(0.1), 1e-4}; }

double ConstraintReport::max_helmholtz() const {
  return helmholtz.empty() ? 0.0 : *std::max_element(helmholtz.begin(), helmholtz.end());
}

double ConstraintReport::max_mask_violation() const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mask_flux.size(); ++i) m = std::max(m, mask_flux[i] / mask_delta[i] - 1.0);
  return m;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Phasor {
  std::vector<double> re, im;  // exp(-jk(sin ti - sin to) y)
  double obliquity2 = 0;       // (cos tr + cos to)^2
  double delta = 0;
};

Phasor make_phasor(const std::vector<double>& y, double k, double ti, double tr, double to) {
  Phasor p;
  p.re.resize(y.size());
  p.im.resize(y.size());
  double kk = k * (std::sin(ti) - std::sin(to));
  for (std::size_t i = 0; i < y.size(); ++i) {
    p.re[i] = std::cos(kk * y[i]);
    p.im[i] = -std::sin(kk * y[i]);
  }
  double ob = std::cos(tr) + std::cos(to);
  p.obliquity2 = ob * ob;
  return p;
}

// Merit function of the augmented Lagrangian on normalized impedances z = Z / eta0.
class Merit {
 public:
  Merit(const DesignProblem& prob, const ScenarioGeometry& geom, const WaveEnvironment& env, bool reactive)
      : prob_(prob), reactive_(reactive), n_(prob.init.size()), kt_(kernels::active()) {
    if (n_ != static_cast<std::size_t>(geom.n))
      throw Error(ErrorKind::Config, "design problem: profile length does not match geometry");
    const auto& y = prob.init.y;
    ti_ = prob.init.theta_i;
    tr_ = prob.init.theta_r;
    ci_ = std::cos(ti_);
    cr_ = std::cos(tr_);
    k_ = env.k;
    dy_ = geom.dy;
    kflow_ = env.e_amp2() * geom.lx / env.eta0;
    ly_ = geom.ly;
    pinc_ = incident_power(geom, env);
    cflux_ = flux_prefactor(geom, env);
    rx_ = make_phasor(y, k_, ti_, tr_, tr_);
    for (const auto& m : prob.masks) {
      if (!(m.delta > 0) || !(m.theta_u > m.theta_l) || !(m.step > 0))
        throw Error(ErrorKind::Config, "mask sector: need delta > 0, theta_l < theta_u, step > 0");
      for (double a : m.angles()) {
        masks_.push_back(make_phasor(y, k_, ti_, tr_, a));
        masks_.back().delta = m.delta;
      }
    }
    if (prob.epsilon) {
      if (!(*prob.epsilon > 0)) throw Error(ErrorKind::Config, "helmholtz bound must be positive");
      eps_ = *prob.epsilon;
      double kx = k_ * (std::sin(tr_) - std::sin(ti_));
      wr_.resize(n_);
      wi_.resize(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        wr_[i] = std::cos(kx * y[i]);
        wi_[i] = std::sin(kx * y[i]);
      }
      double s = std::sin(prob.sine == SineFactor::ThetaR ? tr_ : ti_);
      double d2 = 1.0 / (dy_ * dy_);
      cplx jks(0, 2.0 * k_ * s / dy_);
      ca_ = d2 + jks;
      cb_ = -2.0 * d2 - jks;
      cc_ = d2;
    }
    if (prob.objective == ObjectiveKind::FluxMatch) {
      if (!prob.reference) throw Error(ErrorKind::Config, "flux-match objective requires a reference profile");
      target_ = far_field_flux(reflection_of(*prob.reference, env), geom, env, tr_);
      if (!(target_ > 0)) throw Error(ErrorKind::Config, "reference profile has zero receiver flux");
    }
    u_.assign(n_, 0.0);
    v_.assign(n_, 0.0);
    gr_.resize(n_);
    gi_.resize(n_);
    dgr_.resize(n_);
    dgi_.resize(n_);
    ggr_.resize(n_);
    ggi_.resize(n_);
    lambda_.assign(constraint_count(), 0.0);
  }

  std::size_t dim() const { return reactive_ ? n_ : 2 * n_; }
  std::size_t constraint_count() const { return (prob_.epsilon ? n_ - 2 : 0) + masks_.size(); }
  std::vector<double>& multipliers() { return lambda_; }
  double& mu() { return mu_; }

  void unpack(const double* x) {
    if (reactive_) {
      std::fill(u_.begin(), u_.end(), 0.0);
      std::copy(x, x + n_, v_.begin());
    } else {
      std::copy(x, x + n_, u_.begin());
      std::copy(x + n_, x + 2 * n_, v_.begin());
    }
    kt_.gamma_of_z(u_.data(), v_.data(), n_, ci_, cr_, gr_.data(), gi_.data(), dgr_.data(), dgi_.data());
  }

  double objective_only(const double* x) {
    unpack(x);
    return objective(false);
  }

  // Constraint values c_j = g_j / bound_j - 1 at x.
  std::vector<double> constraints(const double* x) {
    unpack(x);
    std::vector<double> c;
    c.reserve(constraint_count());
    if (prob_.epsilon) {
      for (std::size_t i = 0; i + 2 < n_; ++i) c.push_back(helm_h(i) / eps_ - 1.0);
    }
    for (const auto& m : masks_) {
      cplx a = dy_ * kt_.cdot(gr_.data(), gi_.data(), m.re.data(), m.im.data(), n_);
      c.push_back(cflux_ * std::norm(a) * m.obliquity2 / m.delta - 1.0);
    }
    return c;
  }

  // Merit value and gradient with respect to x.
  double operator()(const double* x, double* grad) {
    unpack(x);
    std::fill(ggr_.begin(), ggr_.end(), 0.0);
    std::fill(ggi_.begin(), ggi_.end(), 0.0);
    double f = objective(true);
    std::size_t j = 0;
    if (prob_.epsilon) {
      const double k2 = k_ * k_;
      for (std::size_t i = 0; i + 2 < n_; ++i, ++j) {
        cplx r = ca_ * fval(i) + cb_ * fval(i + 1) + cc_ * fval(i + 2);
        double g2 = gr_[i] * gr_[i] + gi_[i] * gi_[i];
        double ar = std::abs(r), g = std::sqrt(g2);
        double h = ar / (k2 * g);
        double c = h / eps_ - 1.0;
        f += penalty(lambda_[j], c);
        double w = penalty_slope(lambda_[j], c);
        if (w == 0 || ar == 0) continue;
        cplx s = w / (eps_ * k2 * g) * r / ar;
        add(i, s * std::conj(ca_ * wv(i)));
        add(i + 1, s * std::conj(cb_ * wv(i + 1)));
        add(i + 2, s * std::conj(cc_ * wv(i + 2)));
        add(i, -w / eps_ * h / g2 * cplx(gr_[i], gi_[i]));
      }
    }
    for (const auto& m : masks_) {
      cplx a = dy_ * kt_.cdot(gr_.data(), gi_.data(), m.re.data(), m.im.data(), n_);
      double c = cflux_ * std::norm(a) * m.obliquity2 / m.delta - 1.0;
      f += penalty(lambda_[j], c);
      double w = penalty_slope(lambda_[j], c);
      ++j;
      if (w == 0) continue;
      cplx s = w * cflux_ * m.obliquity2 / m.delta * 2.0 * a * dy_;
      kt_.axpy_conj(s.real(), s.imag(), m.re.data(), m.im.data(), n_, ggr_.data(), ggi_.data());
    }
    // chain rule to z: g_z = conj(dGamma/dz) g_Gamma
    for (std::size_t i = 0; i < n_; ++i) {
      double zr = dgr_[i] * ggr_[i] + dgi_[i] * ggi_[i];
      double zi = dgr_[i] * ggi_[i] - dgi_[i] * ggr_[i];
      if (reactive_) {
        grad[i] = zi;
      } else {
        grad[i] = zr;
        grad[n_ + i] = zi;
      }
    }
    return f;
  }

 private:
  static double penalty(double lam, double c, double mu) {
    double t = std::max(0.0, lam + mu * c);
    return (t * t - lam * lam) / (2.0 * mu);
  }
  double penalty(double lam, double c) const { return penalty(lam, c, mu_); }
  double penalty_slope(double lam, double c) const { return std::max(0.0, lam + mu_ * c); }

  cplx wv(std::size_t i) const { return {wr_[i], wi_[i]}; }
  cplx fval(std::size_t i) const { return cplx(gr_[i], gi_[i]) * wv(i); }
  void add(std::size_t i, cplx g) {
    ggr_[i] += g.real();
    ggi_[i] += g.imag();
  }

  double helm_h(std::size_t i) const {
    cplx r = ca_ * fval(i) + cb_ * fval(i + 1) + cc_ * fval(i + 2);
    double g2 = gr_[i] * gr_[i] + gi_[i] * gi_[i];
    return std::abs(r) / (k_ * k_ * std::sqrt(g2));
  }

  double objective(bool with_grad) {
    if (prob_.objective == ObjectiveKind::GlobalFlow) {
      double o = kflow_ * (-2.0 * ly_ * ci_ + dy_ * kt_.flow_sum(gr_.data(), gi_.data(), n_, cr_, ci_));
      double q = o / pinc_;
      if (with_grad) {
        double s = 200.0 * o / (pinc_ * pinc_) * kflow_ * dy_;
        for (std::size_t i = 0; i < n_; ++i) {
          ggr_[i] += s * (2.0 * cr_ * gr_[i] + (cr_ - ci_));
          ggi_[i] += s * (2.0 * cr_ * gi_[i]);
        }
      }
      return 100.0 * q * q;
    }
    cplx a = dy_ * kt_.cdot(gr_.data(), gi_.data(), rx_.re.data(), rx_.im.data(), n_);
    double p = cflux_ * std::norm(a) * rx_.obliquity2;
    double q = (p - target_) / target_;
    if (with_grad) {
      cplx s = 200.0 * (p - target_) / (target_ * target_) * cflux_ * rx_.obliquity2 * 2.0 * a * dy_;
      kt_.axpy_conj(s.real(), s.imag(), rx_.re.data(), rx_.im.data(), n_, ggr_.data(), ggi_.data());
    }
    return 100.0 * q * q;
  }

  const DesignProblem& prob_;
  bool reactive_;
  std::size_t n_;
  const kernels::Table& kt_;
  double ti_ = 0, tr_ = 0, ci_ = 1, cr_ = 1, k_ = 0, dy_ = 0;
  double kflow_ = 0, ly_ = 0, pinc_ = 1, cflux_ = 0, target_ = 0, eps_ = 1;
  cplx ca_, cb_, cc_;
  Phasor rx_;
  std::vector<Phasor> masks_;
  std::vector<double> wr_, wi_;
  std::vector<double> u_, v_, gr_, gi_, dgr_, dgi_, ggr_, ggi_;
  std::vector<double> lambda_;
  double mu_ = 1.0;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const std::vector<double>& a) {
  double m = 0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct LineSearchResult {
  bool ok = false;
  double alpha = 0;
  double f = 0;
};

// Strong Wolfe line search with safeguarded cubic interpolation.
template <class F>
LineSearchResult wolfe_search(F& fun, const std::vector<double>& x, double f0, double d0,
                              const std::vector<double>& p, double alpha0, std::vector<double>& xt,
                              std::vector<double>& gt) {
  constexpr double c1 = 1e-4, c2 = 0.9, amax = 1e20;
  auto phi = [&](double a, double& d) {
    for (std::size_t i = 0; i < x.size(); ++i) xt[i] = x[i] + a * p[i];
    double f = fun(xt.data(), gt.data());
    d = dot(gt, p);
    return f;
  };
  auto cubic = [](double a, double fa, double da, double b, double fb, double db) {
    double d1 = da + db - 3.0 * (fa - fb) / (a - b);
    double disc = d1 * d1 - da * db;
    if (disc < 0) return 0.5 * (a + b);
    double d2 = std::copysign(std::sqrt(disc), b - a);
    double t = b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
    if (!std::isfinite(t)) return 0.5 * (a + b);
    return t;
  };
  // keeps the best Armijo point seen, returned if zoom stalls
  LineSearchResult best;
  std::vector<double> xbest, gbest;
  auto keep = [&](double a, double f) {
    if (f <= f0 + c1 * a * d0 && (!best.ok || f < best.f)) {
      best = {true, a, f};
      xbest = xt;
      gbest = gt;
    }
  };
  auto zoom = [&](double lo, double flo, double dlo, double hi, double fhi, double dhi) -> LineSearchResult {
    for (int it = 0; it < 40; ++it) {
      double a = cubic(lo, flo, dlo, hi, fhi, dhi);
      double left = std::min(lo, hi), right = std::max(lo, hi), w = right - left;
      if (!(a > left + 0.1 * w && a < right - 0.1 * w)) a = 0.5 * (lo + hi);
      if (w <= 1e-16 * std::max(1.0, right)) break;
      double da;
      double fa = phi(a, da);
      if (!std::isfinite(fa) || fa > f0 + c1 * a * d0 || fa >= flo) {
        hi = a;
        fhi = std::isfinite(fa) ? fa : flo + 1.0;
        dhi = std::isfinite(da) ? da : 0.0;
      } else {
        keep(a, fa);
        if (std::abs(da) <= -c2 * d0) return {true, a, fa};
        if (da * (hi - lo) >= 0) {
          hi = lo;
          fhi = flo;
          dhi = dlo;
        }
        lo = a;
        flo = fa;
        dlo = da;
      }
    }
    return {false, 0, 0};
  };

  double aprev = 0, fprev = f0, dprev = d0, a = alpha0;
  for (int it = 0; it < 30; ++it) {
    double da;
    double fa = phi(a, da);
    if (!std::isfinite(fa) || fa > f0 + c1 * a * d0 || (it > 0 && fa >= fprev)) {
      if (!std::isfinite(fa)) {
        a = 0.5 * (aprev + a);
        continue;
      }
      auto r = zoom(aprev, fprev, dprev, a, fa, da);
      if (r.ok) return r;
      break;
    }
    keep(a, fa);
    if (std::abs(da) <= -c2 * d0) return {true, a, fa};
    if (da >= 0) {
      auto r = zoom(a, fa, da, aprev, fprev, dprev);
      if (r.ok) return r;
      break;
    }
    aprev = a;
    fprev = fa;
    dprev = da;
    a = std::min(2.0 * a, amax);
  }
  if (best.ok) {
    xt = xbest;
    gt = gbest;
  }
  return best;
}

struct InnerResult {
  int iterations = 0;
  double f = 0;
};

template <class F>
InnerResult lbfgs(F& fun, std::vector<double>& x, const SolverSettings& s) {
  const std::size_t n = x.size();
  std::vector<double> g(n), p(n), xt(n), gt(n), q(n);
  std::deque<std::vector<double>> S, Y;
  std::deque<double> rho;
  double f = fun(x.data(), g.data());
  InnerResult res;
  bool fresh = true;
  for (int it = 0; it < s.max_inner; ++it) {
    if (inf_norm(g) <= s.grad_tol) break;
    // two-loop recursion
    q = g;
    std::vector<double> alpha(S.size());
    for (std::size_t m = S.size(); m-- > 0;) {
      alpha[m] = rho[m] * dot(S[m], q);
      for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[m] * Y[m][i];
    }
    double gamma = 1.0;
    if (!S.empty()) gamma = dot(S.back(), Y.back()) / dot(Y.back(), Y.back());
    for (std::size_t i = 0; i < n; ++i) q[i] *= gamma;
    for (std::size_t m = 0; m < S.size(); ++m) {
      double b = rho[m] * dot(Y[m], q);
      for (std::size_t i = 0; i < n; ++i) q[i] += S[m][i] * (alpha[m] - b);
    }
    for (std::size_t i = 0; i < n; ++i) p[i] = -q[i];
    double d0 = dot(g, p);
    if (!(d0 < 0)) {
      for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
      d0 = dot(g, p);
      S.clear();
      Y.clear();
      rho.clear();
      fresh = true;
    }
    double a0 = fresh ? std::min(1.0, 1.0 / std::sqrt(dot(p, p))) : 1.0;
    auto ls = wolfe_search(fun, x, f, d0, p, a0, xt, gt);
    if (!ls.ok) {
      if (fresh) break;
      S.clear();
      Y.clear();
      rho.clear();
      fresh = true;
      continue;
    }
    fresh = false;
    std::vector<double> sv(n), yv(n);
    for (std::size_t i = 0; i < n; ++i) {
      sv[i] = xt[i] - x[i];
      yv[i] = gt[i] - g[i];
    }
    double sy = dot(sv, yv);
    if (sy > 1e-300 && sy > 1e-12 * std::sqrt(dot(sv, sv) * dot(yv, yv))) {
      S.push_back(std::move(sv));
      Y.push_back(std::move(yv));
      rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > s.lbfgs_memory) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
    }
    double fold = f;
    x.swap(xt);
    g.swap(gt);
    f = ls.f;
    res.iterations = it + 1;
    if ((fold - f) <= s.ftol * std::max({std::abs(fold), std::abs(f), 1.0})) break;
  }
  res.f = f;
  return res;
}

SolveReport run_al(const DesignProblem& prob, const ScenarioGeometry& geom, const WaveEnvironment& env,
                   bool reactive) {
  auto t0 = Clock::now();
  const SolverSettings& s = prob.solver;
  Merit merit(prob, geom, env, reactive);
  const std::size_t n = prob.init.size();
  std::vector<double> x(merit.dim());
  for (std::size_t i = 0; i < n; ++i) {
    if (reactive) {
      x[i] = prob.init.z[i].imag() / env.eta0;
    } else {
      x[i] = prob.init.z[i].real() / env.eta0;
      x[n + i] = prob.init.z[i].imag() / env.eta0;
    }
  }
  SolveReport rep;
  merit.mu() = s.mu0;
  auto& lam = merit.multipliers();
  const bool constrained = merit.constraint_count() > 0;
  double prev_merit = std::numeric_limits<double>::quiet_NaN();
  int stall = 0;
  bool feasible = !constrained;
  for (int outer = 0; outer < s.max_outer; ++outer) {
    auto inner = lbfgs(merit, x, s);
    rep.iterations += inner.iterations;
    rep.outer_iterations = outer + 1;
    rep.objective_trace.push_back(merit.objective_only(x.data()));
    if (!constrained) break;
    auto c = merit.constraints(x.data());
    double viol = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c.size(); ++j) {
      lam[j] = std::max(0.0, lam[j] + merit.mu() * c[j]);
      viol = std::max(viol, c[j]);
    }
    feasible = viol < s.feas_tol;
    if (feasible && outer + 1 >= s.min_outer) break;
    if (std::isfinite(prev_merit) &&
        std::abs(prev_merit - inner.f) <= s.merit_rel_tol * std::max(std::abs(inner.f), 1e-300)) {
      if (++stall >= s.stall_outer) break;
    } else {
      stall = 0;
    }
    prev_merit = inner.f;
    if (!feasible) merit.mu() *= s.mu_growth;
  }
  rep.profile = prob.init;
  for (std::size_t i = 0; i < n; ++i) {
    double re = reactive ? 0.0 : x[i] * env.eta0;
    double im = (reactive ? x[i] : x[n + i]) * env.eta0;
    rep.profile.z[i] = cplx(re, im);
  }
  rep.objective = merit.objective_only(x.data());
  auto cons = evaluate_constraints(rep.profile, prob, geom, env);
  rep.max_helmholtz = cons.max_helmholtz();
  rep.max_mask_violation = cons.max_mask_violation();
  rep.converged = feasible;
  rep.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
  return rep;
}

cplx dgamma_dz(cplx z, double ti, double tr, double eta0) {
  cplx b = z * std::cos(tr) + eta0;
  return eta0 * (std::cos(ti) + std::cos(tr)) / (b * b);
}

}  // namespace

ConstraintReport evaluate_constraints(const SurfaceProfile& p, const DesignProblem& prob,
                                      const ScenarioGeometry& geom, const WaveEnvironment& env) {
  ConstraintReport rep;
  if (prob.epsilon) rep.helmholtz = helmholtz_residual(p, geom, env, prob.sine);
  ReflectionProfile r = reflection_of(p, env);
  for (const auto& m : prob.masks) {
    for (double a : m.angles()) {
      rep.mask_angles.push_back(a);
      rep.mask_flux.push_back(far_field_flux(r, geom, env, a));
      rep.mask_delta.push_back(m.delta);
    }
  }
  for (const cplx& z : p.z) rep.reactivity = std::max(rep.reactivity, std::abs(z.real()));
  return rep;
}

SolveReport solve_global(const DesignProblem& prob, const ScenarioGeometry& geom, const WaveEnvironment& env) {
  if (prob.objective != ObjectiveKind::GlobalFlow)
    throw Error(ErrorKind::Config, "solve_global: objective must be the global flow magnitude");
  return run_al(prob, geom, env, prob.reactive);
}

SolveReport solve_reactive(const DesignProblem& prob, const ScenarioGeometry& geom, const WaveEnvironment& env) {
  if (prob.objective != ObjectiveKind::FluxMatch)
    throw Error(ErrorKind::Config, "solve_reactive: objective must be flux matching");
  return run_al(prob, geom, env, true);
}

SolveReport solve(const DesignProblem& prob, const ScenarioGeometry& geom, const WaveEnvironment& env) {
  return prob.objective == ObjectiveKind::GlobalFlow ? solve_global(prob, geom, env)
                                                     : solve_reactive(prob, geom, env);
}

SurfaceProfile zero_real_part(const SurfaceProfile& p) {
  SurfaceProfile q = p;
  for (auto& z : q.z) z = cplx(0.0, z.imag());
  return q;
}

std::vector<cplx> global_flow_gradient(const SurfaceProfile& p, const ScenarioGeometry& geom,
                                       const WaveEnvironment& env) {
  ReflectionProfile r = reflection_of(p, env);
  double ci = std::cos(p.theta_i), cr = std::cos(p.theta_r);
  double s = env.e_amp2() * geom.lx / env.eta0 * geom.dy;
  std::vector<cplx> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    cplx gg = s * (2.0 * cr * r.gamma_s[i] + (cr - ci));
    g[i] = std::conj(dgamma_dz(p.z[i], p.theta_i, p.theta_r, env.eta0)) * gg;
  }
  return g;
}

std::vector<cplx> flux_gradient(const SurfaceProfile& p, const ScenarioGeometry& geom, const WaveEnvironment& env,
                                double theta_o) {
  ReflectionProfile r = reflection_of(p, env);
  cplx a = array_factor(r, geom, theta_o);
  double ob = std::cos(p.theta_r) + std::cos(theta_o);
  double pre = flux_prefactor(geom, env) * ob * ob;
  double kk = env.k * (std::sin(p.theta_i) - std::sin(theta_o));
  std::vector<cplx> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    cplx e = geom.dy * std::polar(1.0, -kk * p.y[i]);
    cplx gg = pre * 2.0 * a * std::conj(e);
    g[i] = std::conj(dgamma_dz(p.z[i], p.theta_i, p.theta_r, env.eta0)) * gg;
  }
  return g;
}

std::vector<cplx> helmholtz_gradient(const SurfaceProfile& p, const ScenarioGeometry& geom,
                                     const WaveEnvironment& env, const std::vector<double>& w, SineFactor sf) {
  const std::size_t n = p.size();
  if (w.size() + 2 != n) throw Error(ErrorKind::Config, "helmholtz_gradient: need N-2 weights");
  ReflectionProfile r = reflection_of(p, env);
  const double k = env.k, dy = geom.dy;
  const double s = std::sin(sf == SineFactor::ThetaR ? p.theta_r : p.theta_i);
  const double kx = k * (std::sin(p.theta_r) - std::sin(p.theta_i));
  const cplx jks(0, 2.0 * k * s / dy);
  const cplx coef[3] = {1.0 / (dy * dy) + jks, -2.0 / (dy * dy) - jks, 1.0 / (dy * dy)};
  std::vector<cplx> wv(n), gg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) wv[i] = std::polar(1.0, kx * p.y[i]);
  for (std::size_t i = 0; i + 2 < n; ++i) {
    cplx res = 0;
    for (int t = 0; t < 3; ++t) res += coef[t] * r.gamma_s[i + t] * wv[i + t];
    double g = std::abs(r.gamma_s[i]);
    double h = std::abs(res) / (k * k * g);
    if (h == 0) continue;  // H is not differentiable at zero
    // dH = d|res| / (k^2 g) - H dg / g
    double a = w[i] / (k * k * g);
    for (int t = 0; t < 3; ++t) gg[i + t] += a * (res / std::abs(res)) * std::conj(coef[t] * wv[i + t]);
    gg[i] -= w[i] * h * r.gamma_s[i] / (g * g);
  }
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::conj(dgamma_dz(p.z[i], p.theta_i, p.theta_r, env.eta0)) * gg[i];
  return out;
}

}  // namespace ris
