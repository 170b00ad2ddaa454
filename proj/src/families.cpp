#include "snalab/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace snalab {

namespace {

constexpr double kPi = std::numbers::pi;

double aq_integrand(int q, double z) { return 1.0 / (1.0 + std::pow(std::fabs(z), q)); }

double simpson_step(int q, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = aq_integrand(q, lm), frm = aq_integrand(q, rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double diff = left + right - whole;
  if (depth <= 0 || std::fabs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(q, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(q, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(int q, double a, double b, double tol) {
  double fa = aq_integrand(q, a), fb = aq_integrand(q, b), fm = aq_integrand(q, 0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(q, a, b, fa, fm, fb, whole, tol, 60);
}

// r in (-1/2, 1/2] with xhat = n + r.
inline double centered(double xhat, double& n) {
  n = std::ceil(xhat - 0.5);
  return xhat - n;
}

}  // namespace

double aq(int q, double x) {
  if (q == 2) return std::atan(x);
  if (x == 0.0) return 0.0;
  double v = adaptive_simpson(q, 0.0, std::fabs(x), 1e-12);
  return x < 0 ? -v : v;
}

CircleAngle hq(int q, double alpha, CircleAngle x) {
  return CircleAngle(aq(q, alpha * x.lift()) / (2.0 * aq(q, alpha / 2.0)));
}

CircleMapFamily CircleMapFamily::arctan(int q, double alpha, double tau, Forcing forcing, Phase omega) {
  CircleMapFamily f;
  f.kind_ = FamilyKind::ArctanFamily;
  f.q_ = q;
  f.alpha_ = alpha;
  f.tau_ = wrap_unit(tau);
  f.forcing_ = forcing;
  f.omega_ = wrap_phase(omega);
  f.validate();
  f.norm_ = 2.0 * aq(q, alpha / 2.0);
  return f;
}

CircleMapFamily CircleMapFamily::driven_arnold(double alpha, double beta, double tau, Phase omega) {
  CircleMapFamily f;
  f.kind_ = FamilyKind::DrivenArnold;
  f.alpha_ = alpha;
  f.tau_ = wrap_unit(tau);
  f.forcing_ = beta == 0.0 ? Forcing{} : Forcing{ForcingKind::ArctanSine, beta};
  f.omega_ = wrap_phase(omega);
  f.validate();
  return f;
}

CircleMapFamily CircleMapFamily::projective_cocycle(double alpha, double tau, Forcing forcing, Phase omega) {
  CircleMapFamily f;
  f.kind_ = FamilyKind::ProjectiveCocycle;
  f.alpha_ = alpha;
  f.tau_ = wrap_unit(tau);
  f.forcing_ = forcing;
  f.omega_ = wrap_phase(omega);
  f.validate();
  return f;
}

CircleMapFamily CircleMapFamily::rigid(double shift, Phase omega, Forcing forcing) {
  CircleMapFamily f;
  f.kind_ = FamilyKind::RigidTest;
  f.tau_ = wrap_unit(shift);
  f.forcing_ = forcing;
  f.omega_ = wrap_phase(omega);
  f.validate();
  return f;
}

CircleMapFamily CircleMapFamily::with_tau(double tau) const {
  CircleMapFamily f = *this;
  f.tau_ = wrap_unit(tau);
  return f;
}

CircleMapFamily CircleMapFamily::with_forcing(Forcing forcing) const {
  CircleMapFamily f = *this;
  f.forcing_ = forcing;
  return f;
}

CircleMapFamily CircleMapFamily::with_omega(Phase omega) const {
  CircleMapFamily f = *this;
  f.omega_ = wrap_phase(omega);
  return f;
}

void CircleMapFamily::validate() const {
  if (!std::isfinite(alpha_) || !std::isfinite(tau_) || !std::isfinite(forcing_.amplitude)) {
    throw std::invalid_argument("family parameters must be finite");
  }
  switch (kind_) {
    case FamilyKind::ArctanFamily:
      if (q_ < 2) throw std::invalid_argument("arctan family needs q >= 2");
      if (!(alpha_ > 0)) throw std::invalid_argument("arctan family needs alpha > 0");
      break;
    case FamilyKind::DrivenArnold:
      if (std::fabs(alpha_) > 1.0) {
        throw NotDiffeomorphicError("driven Arnold map is not invertible for |alpha| > 1");
      }
      break;
    case FamilyKind::ProjectiveCocycle:
      if (!(alpha_ > 0)) throw std::invalid_argument("projective cocycle needs alpha > 0");
      break;
    case FamilyKind::RigidTest:
      break;
  }
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::ArctanFamily: return "arctan";
    case FamilyKind::DrivenArnold: return "arnold";
    case FamilyKind::ProjectiveCocycle: return "cocycle";
    case FamilyKind::RigidTest: return "rigid";
  }
  return "?";
}

std::string to_string(ForcingKind kind) {
  switch (kind) {
    case ForcingKind::Cosine: return "cosine";
    case ForcingKind::ArctanSine: return "arctan-sine";
    case ForcingKind::None: return "none";
  }
  return "?";
}

double forcing_value(const Forcing& forcing, Phase theta) {
  double t = static_cast<double>(wrap_phase(theta));
  switch (forcing.kind) {
    case ForcingKind::Cosine: return forcing.amplitude * std::cos(2.0 * kPi * t);
    case ForcingKind::ArctanSine: return std::atan(forcing.amplitude * std::sin(2.0 * kPi * t)) / kPi;
    case ForcingKind::None: return 0.0;
  }
  return 0.0;
}

double forcing_derivative(const Forcing& forcing, Phase theta) {
  double t = static_cast<double>(wrap_phase(theta));
  switch (forcing.kind) {
    case ForcingKind::Cosine: return -2.0 * kPi * forcing.amplitude * std::sin(2.0 * kPi * t);
    case ForcingKind::ArctanSine: {
      double s = std::sin(2.0 * kPi * t);
      double b = forcing.amplitude;
      return 2.0 * b * std::cos(2.0 * kPi * t) / (1.0 + b * b * s * s);
    }
    case ForcingKind::None: return 0.0;
  }
  return 0.0;
}

double fiber_lift(const CircleMapFamily& fam, Phase theta, double xhat) {
  double shift = forcing_value(fam.forcing(), theta) + fam.tau();
  double n = 0.0;
  switch (fam.kind()) {
    case FamilyKind::ArctanFamily: {
      double r = centered(xhat, n);
      return n + aq(fam.q(), fam.alpha() * r) / fam.normalizer() + shift;
    }
    case FamilyKind::ProjectiveCocycle: {
      double r = centered(xhat, n);
      double a2 = fam.alpha() * fam.alpha();
      return n + std::atan2(std::sin(kPi * r), a2 * std::cos(kPi * r)) / kPi + shift;
    }
    case FamilyKind::DrivenArnold:
      return xhat + fam.alpha() / (2.0 * kPi) * std::sin(2.0 * kPi * xhat) + shift;
    case FamilyKind::RigidTest:
      return xhat + shift;
  }
  return xhat;
}

double fiber_derivative_lift(const CircleMapFamily& fam, Phase, double xhat) {
  double n = 0.0;
  switch (fam.kind()) {
    case FamilyKind::ArctanFamily: {
      double r = centered(xhat, n);
      double u = std::fabs(fam.alpha() * r);
      double denom = fam.q() == 2 ? 1.0 + u * u : 1.0 + std::pow(u, fam.q());
      return fam.alpha() / denom / fam.normalizer();
    }
    case FamilyKind::ProjectiveCocycle: {
      double r = centered(xhat, n);
      double c = std::cos(kPi * r), s = std::sin(kPi * r);
      double a2 = fam.alpha() * fam.alpha();
      return 1.0 / (a2 * c * c + s * s / a2);
    }
    case FamilyKind::DrivenArnold:
      return 1.0 + fam.alpha() * std::cos(2.0 * kPi * xhat);
    case FamilyKind::RigidTest:
      return 1.0;
  }
  return 1.0;
}

CircleAngle fiber_map(const CircleMapFamily& fam, Phase theta, CircleAngle x) {
  return CircleAngle(fiber_lift(fam, theta, x.value()));
}

double fiber_derivative(const CircleMapFamily& fam, Phase theta, CircleAngle x) {
  return fiber_derivative_lift(fam, theta, x.value());
}

double fiber_theta_derivative(const CircleMapFamily& fam, Phase theta, CircleAngle) {
  return forcing_derivative(fam.forcing(), theta);
}

double fiber_lift_inverse(const CircleMapFamily& fam, Phase theta, double yhat) {
  auto g = [&](double x) { return fiber_lift(fam, theta, x) - yhat; };
  double f0 = fiber_lift(fam, theta, 0.0);
  double f1 = fiber_lift(fam, theta, 1.0);
  if (!(std::fabs(f1 - f0 - 1.0) <= 1e-9)) {
    throw NotDiffeomorphicError("fibre lift is not of degree one");
  }
  double lo = std::floor(yhat - f0);
  double hi = lo + 1.0;
  double glo = g(lo), ghi = g(hi);
  if (glo > 0.0) {
    hi = lo;
    ghi = glo;
    lo -= 1.0;
    glo = g(lo);
  } else if (ghi < 0.0) {
    lo = hi;
    glo = ghi;
    hi += 1.0;
    ghi = g(hi);
  }
  if (!(glo <= 0.0 && ghi >= 0.0)) {
    throw NotDiffeomorphicError("monotone bracket for the fibre inverse could not be established");
  }
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;

  // Safeguarded Newton on the bracket; bisection whenever a step leaves it.
  double x = lo + (hi - lo) * (-glo) / (ghi - glo);
  double dx_old = hi - lo;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    double gx = g(x);
    if (gx == 0.0) return x;
    if (gx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double d = fiber_derivative_lift(fam, theta, x);
    double xn = d > 0.0 ? x - gx / d : lo - 1.0;
    if (!(xn > lo && xn < hi) || std::fabs(2.0 * gx) > std::fabs(dx_old * d)) {
      xn = 0.5 * (lo + hi);
    }
    dx_old = xn - x;
    if (std::fabs(dx_old) <= 4e-16 * std::max(1.0, std::fabs(x))) {
      x = xn;
      break;
    }
    x = xn;
  }
  double gx = g(x);
  for (int k = 0; k < 3 && gx != 0.0; ++k) {
    double d = fiber_derivative_lift(fam, theta, x);
    if (!(d > 0.0)) break;
    double xn = x - gx / d;
    double gn = g(xn);
    if (!(std::fabs(gn) < std::fabs(gx))) break;
    x = xn;
    gx = gn;
  }
  return x;
}

CircleAngle fiber_inverse(const CircleMapFamily& fam, Phase theta, CircleAngle y) {
  return CircleAngle(fiber_lift_inverse(fam, theta, y.value()));
}

bool axiom2_holds(const CircleMapFamily& fam, const Arc& C, const Arc& E, Phase theta) {
  double a = fiber_lift(fam, theta, E.left + E.length);
  double b = fiber_lift(fam, theta, E.left + 1.0);
  double a0 = a - std::floor(a - C.left);
  return a0 > C.left && a0 + (b - a) < C.left + C.length;
}

namespace {

struct Run {
  int start;
  int count;
};

// Longest circular run of true cells after closing single-cell gaps.
Run longest_run(const std::vector<char>& mask) {
  int n = static_cast<int>(mask.size());
  std::vector<char> m = mask;
  for (int j = 0; j < n; ++j) {
    if (!m[j] && mask[(j + n - 1) % n] && mask[(j + 1) % n]) m[j] = 1;
  }
  int first_false = -1;
  for (int j = 0; j < n; ++j) {
    if (!m[j]) {
      first_false = j;
      break;
    }
  }
  if (first_false < 0) return {0, n};
  Run best{0, 0};
  int j = first_false;
  for (int visited = 0; visited < n;) {
    while (visited < n && !m[j]) {
      j = (j + 1) % n;
      ++visited;
    }
    int start = j, count = 0;
    while (visited < n && m[j]) {
      j = (j + 1) % n;
      ++visited;
      ++count;
    }
    if (count > best.count) best = {start, count};
  }
  return best;
}

template <class Pred>
double refine_boundary(double inside, double outside, Pred pred, double tol) {
  while (std::fabs(outside - inside) > tol) {
    double mid = 0.5 * (inside + outside);
    if (pred(mid)) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return inside;
}

}  // namespace

ConstantsEstimate estimate_constants(const CircleMapFamily& fam, int theta_grid_size, int x_grid_size) {
  if (theta_grid_size < 256 || x_grid_size < 256) {
    throw std::invalid_argument("estimate_constants needs at least 256 points per axis");
  }
  const int nt = theta_grid_size, nx = x_grid_size;
  std::vector<double> dmax(nx), dmin(nx), smax(nx);

#pragma omp parallel for schedule(static)
  for (int j = 0; j < nx; ++j) {
    double x = static_cast<double>(j) / nx;
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (int i = 0; i < nt; ++i) {
      Phase t = static_cast<Phase>(i) / nt;
      double d = fiber_derivative_lift(fam, t, x);
      hi = std::max(hi, d);
      lo = std::min(lo, d);
      s = std::max(s, std::fabs(fiber_theta_derivative(fam, t, CircleAngle(x))));
    }
    dmax[j] = hi;
    dmin[j] = lo;
    smax[j] = s;
  }

  ConstantsEstimate out;
  ContractionExpansionData& d = out.data;
  d.sup_derivative = *std::max_element(dmax.begin(), dmax.end());
  d.inf_derivative = *std::min_element(dmin.begin(), dmin.end());
  d.S = *std::max_element(smax.begin(), smax.end());
  if (!(d.inf_derivative > 0.0)) {
    out.reason = "no contraction/expansion split: fibre derivative not positive";
    return out;
  }
  double alpha_global = std::max(std::sqrt(d.sup_derivative), 1.0 / std::sqrt(d.inf_derivative));
  d.level = std::max(5.0, alpha_global);

  std::vector<char> cmask(nx), emask(nx);
  for (int j = 0; j < nx; ++j) {
    cmask[j] = dmax[j] <= 1.0 / d.level;
    emask[j] = dmin[j] >= d.level;
  }
  Run rc = longest_run(cmask), re = longest_run(emask);
  if (rc.count == 0 || re.count == 0 || rc.count == nx || re.count == nx) {
    out.reason = "no contraction/expansion split at level " + std::to_string(d.level);
    return out;
  }

  auto column_max = [&](double x) {
    double hi = 0.0;
    for (int i = 0; i < nt; ++i) hi = std::max(hi, fiber_derivative_lift(fam, static_cast<Phase>(i) / nt, x));
    return hi;
  };
  auto column_min = [&](double x) {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nt; ++i) lo = std::min(lo, fiber_derivative_lift(fam, static_cast<Phase>(i) / nt, x));
    return lo;
  };
  auto in_c = [&](double x) { return column_max(x) <= 1.0 / d.level; };
  auto in_e = [&](double x) { return column_min(x) >= d.level; };
  const double h = 1.0 / nx;
  auto extract = [&](Run r, auto pred) {
    double left = r.start * h;
    double right = (r.start + r.count - 1) * h;
    left = refine_boundary(left, left - h, pred, 1e-14);
    right = refine_boundary(right, right + h, pred, 1e-14);
    return Arc{wrap_unit(left), right - left};
  };
  d.C = extract(rc, in_c);
  d.E = extract(re, in_e);
  if (ArcSet::arc(d.C.left, d.C.length).intersects(ArcSet::arc(d.E.left, d.E.length))) {
    out.reason = "no contraction/expansion split: C and E overlap";
    return out;
  }

  double sup_c = std::max(column_max(d.C.left), column_max(d.C.right_lift()));
  double inf_e = std::min(column_min(d.E.left), column_min(d.E.right_lift()));
  for (int j = 0; j < nx; ++j) {
    double x = j * h;
    if (d.C.contains(x)) sup_c = std::max(sup_c, dmax[j]);
    if (d.E.contains(x)) inf_e = std::min(inf_e, dmin[j]);
  }
  d.alpha_bound = std::min(1.0 / sup_c, inf_e);
  if (!(d.alpha_bound > 4.0)) {
    out.reason = "no contraction/expansion split with alpha_bound > 4";
    return out;
  }

  // I0: theta where axiom (2) fails.
  const int ns = std::max(16 * nt, 1 << 16);
  std::vector<char> bad(ns);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < ns; ++i) {
    bad[i] = !axiom2_holds(fam, d.C, d.E, (static_cast<Phase>(i) + 0.5L) / ns);
  }
  int nbad = static_cast<int>(std::count(bad.begin(), bad.end(), 1));
  if (nbad == ns) {
    out.reason = "axiom (2) fails for every sampled theta";
    return out;
  }
  std::vector<Arc> comps;
  if (nbad > 0) {
    auto violates = [&](double t) { return !axiom2_holds(fam, d.C, d.E, static_cast<Phase>(wrap_unit(t))); };
    const double st = 1.0 / ns;
    int i0 = 0;
    while (bad[i0]) ++i0;  // start scanning at a sample where the axiom holds
    for (int k = 1; k <= ns; ++k) {
      int i = (i0 + k) % ns;
      int prev = (i + ns - 1) % ns;
      if (bad[i] && !bad[prev]) {
        int len = 0;
        while (bad[(i + len) % ns]) ++len;
        double first = (i + 0.5) * st;
        double last = (i + len - 1 + 0.5) * st;
        double l = refine_boundary(first, first - st, violates, 1e-13);
        double r = refine_boundary(last, last + st, violates, 1e-13);
        comps.push_back({wrap_unit(l), r - l});
      }
    }
  }
  d.I0 = ArcSet::from_arcs(comps).merge_gaps(2.0 / ns);
  d.n_components = d.I0.component_count();
  out.split_found = true;
  return out;
}

}  // namespace snalab
