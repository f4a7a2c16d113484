#include "swrl/roc.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "swrl/errors.hpp"
#include "swrl/normal.hpp"

namespace swrl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Internal integrals run far below the public tolerance so sums of many
// pieces stay inside it.
constexpr double kInnerRelTol = 1e-11;

// Gaussian-weighted integrands are negligible beyond this many sd.
constexpr double kGaussianHalfWidth = 40.0;

double checked_integral(double value, double error, const char* what) {
  if (!std::isfinite(value) || !std::isfinite(error) || error > 0.1 * kQuadratureTolerance) {
    fail(Errc::DivergentIntegral,
         std::string(what) + ": quadrature did not converge (error estimate " +
             std::to_string(error) + ")");
  }
  return value;
}

double slope_between(RocPoint a, RocPoint b) { return (b.beta - a.beta) / (b.alpha - a.alpha); }

void require_unit_interval(double lo, double hi) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) {
    fail(Errc::InvalidArgument, "integration range must satisfy 0 <= lo <= hi <= 1");
  }
}

}  // namespace

// ---------------------------------------------------------------- RocCurve

double RocCurve::slope_sq_integral(double lo, double hi) const {
  require_unit_interval(lo, hi);
  if (lo == hi) return 0.0;
  double error = 0.0;
  double value = 0.0;
  try {
    boost::math::quadrature::tanh_sinh<double> integrator;
    value = integrator.integrate(
        [this](double a) {
          const double s = slope(a);
          return s * s;
        },
        lo, hi, kInnerRelTol, &error);
  } catch (const std::exception& e) {
    fail(Errc::DivergentIntegral, std::string("slope^2 integral: ") + e.what());
  }
  return checked_integral(value, error, "slope^2 integral");
}

double RocCurve::slope_inverse(double s) const {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ------------------------------------------------------------- LssRocCurve

LssRocCurve::LssRocCurve(double lambda)
    : lambda_(lambda), mu_(-std::log1p(-lambda * lambda)), half_shift_(std::sqrt(mu_ / 8.0)) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    fail(Errc::InvalidArgument, "phi_lambda needs lambda in [0, 1)");
  }
}

double LssRocCurve::threshold_of_alpha(double alpha) const {
  // Phi^{-1}(1 - alpha) written as -Phi^{-1}(alpha) to keep small alpha exact.
  return -normal_quantile(alpha) - half_shift_;
}

double LssRocCurve::alpha_of_threshold(double t) const { return normal_sf(t + half_shift_); }

double LssRocCurve::value(double alpha) const {
  if (alpha <= 0.0) return 0.0;
  if (alpha >= 1.0) return 1.0;
  return normal_sf(-normal_quantile(alpha) - 2.0 * half_shift_);
}

double LssRocCurve::slope(double alpha) const {
  if (alpha <= 0.0) return kInf;
  if (alpha >= 1.0) return 0.0;
  return std::exp(threshold_of_alpha(alpha) * 2.0 * half_shift_);
}

double LssRocCurve::slope_inverse(double s) const {
  if (half_shift_ == 0.0) return 0.5;  // identity curve: every point has slope 1
  return alpha_of_threshold(std::log(s) / (2.0 * half_shift_));
}

double LssRocCurve::slope_sq_integral(double lo, double hi) const {
  require_unit_interval(lo, hi);
  if (lo == hi) return 0.0;
  // alpha in [lo, hi]  <=>  t in [t(hi), t(lo)];  d alpha = pdf(t + c) dt.
  // Integrand exp(t sqrt(2 mu)) pdf(t + c) peaks at t = sqrt(2 mu) - c.
  const double centre = 3.0 * half_shift_;  // sqrt(2 mu) = 4c
  double t_lo = hi >= 1.0 ? -kInf : threshold_of_alpha(hi);
  double t_hi = lo <= 0.0 ? kInf : threshold_of_alpha(lo);
  t_lo = std::max(t_lo, centre - kGaussianHalfWidth);
  t_hi = std::min(t_hi, centre + kGaussianHalfWidth);
  if (t_lo >= t_hi) return 0.0;

  const double rate = 4.0 * half_shift_;  // sqrt(2 mu)
  auto integrand = [&](double t) { return std::exp(t * rate) * normal_pdf(t + half_shift_); };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, t_lo, t_hi, 20, kInnerRelTol, &error);
  return checked_integral(value, error, "phi_lambda slope^2 integral");
}

double phi_eval(double lambda, double alpha) { return LssRocCurve(lambda).value(alpha); }

double phi_deriv(double lambda, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(Errc::InvalidArgument, "phi_deriv needs alpha in (0, 1)");
  return LssRocCurve(lambda).slope(alpha);
}

double val_closed_form(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) fail(Errc::InvalidArgument, "val needs lambda in [0, 1)");
  return std::pow(1.0 - lambda * lambda, -0.25);
}

double val_numeric(const RocCurve& curve) { return std::sqrt(curve.slope_sq_integral(0.0, 1.0)); }

// ------------------------------------------------------------- polylines

bool concave_position_check(std::span<const RocPoint> points) {
  if (points.size() < 2) fail(Errc::MalformedSequence, "need at least the two endpoints");
  if (points.front() != RocPoint{0.0, 0.0} || points.back() != RocPoint{1.0, 1.0}) {
    fail(Errc::MalformedSequence, "sequence must start at (0,0) and end at (1,1)");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].alpha > points[i - 1].alpha)) {
      fail(Errc::MalformedSequence, "alpha must be strictly ascending (index " + std::to_string(i) + ")");
    }
  }
  double previous = kInf;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double m = slope_between(points[i], points[i + 1]);
    if (!(m > 0.0) || !(m < previous)) return false;
    previous = m;
  }
  return true;
}

RocPolyline::RocPolyline(std::vector<RocPoint> points) : points_(std::move(points)) {
  if (!concave_position_check(points_)) {
    fail(Errc::NotConcavePosition, "slopes must be strictly positive and strictly decreasing");
  }
  slopes_.reserve(points_.size() - 1);
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    slopes_.push_back(slope_between(points_[i], points_[i + 1]));
  }
}

std::size_t RocPolyline::segment_of(double alpha) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), alpha,
                             [](double a, const RocPoint& p) { return a < p.alpha; });
  const auto idx = static_cast<std::size_t>(it - points_.begin());
  return std::clamp<std::size_t>(idx, 1, points_.size() - 1) - 1;
}

double RocPolyline::value(double alpha) const {
  if (alpha <= 0.0) return 0.0;
  if (alpha >= 1.0) return 1.0;
  const std::size_t i = segment_of(alpha);
  return points_[i].beta + slopes_[i] * (alpha - points_[i].alpha);
}

double RocPolyline::slope(double alpha) const { return slopes_[segment_of(alpha)]; }

double RocPolyline::slope_sq_integral(double lo, double hi) const {
  require_unit_interval(lo, hi);
  double acc = 0.0;
  for (std::size_t i = 0; i < slopes_.size(); ++i) {
    const double a = std::max(lo, points_[i].alpha);
    const double b = std::min(hi, points_[i + 1].alpha);
    if (b > a) acc += slopes_[i] * slopes_[i] * (b - a);
  }
  return acc;
}

double val_piecewise(const RocPolyline& poly) {
  return std::sqrt(poly.slope_sq_integral(0.0, 1.0));
}

double val_piecewise(std::span<const RocPoint> points) {
  return val_piecewise(RocPolyline(std::vector<RocPoint>(points.begin(), points.end())));
}

RocPolyline inscribed_polyline(const RocCurve& curve, std::span<const double> interior_alphas) {
  std::vector<RocPoint> pts{{0.0, 0.0}};
  for (double a : interior_alphas) pts.push_back({a, curve.value(a)});
  pts.push_back({1.0, 1.0});
  return RocPolyline(std::move(pts));
}

// -------------------------------------------------------------- envelope

EnvelopeCurve::EnvelopeCurve(std::shared_ptr<const RocCurve> base, RocPoint exterior, double a1,
                             double a2)
    : base_(std::move(base)), exterior_(exterior), a1_(a1), a2_(a2) {
  left_slope_ = (exterior_.beta - base_->value(a1_)) / (exterior_.alpha - a1_);
  right_slope_ = (base_->value(a2_) - exterior_.beta) / (a2_ - exterior_.alpha);
}

double EnvelopeCurve::left_tangency_residual() const {
  return base_->slope(a1_) - left_slope_;
}

double EnvelopeCurve::right_tangency_residual() const {
  return base_->slope(a2_) - right_slope_;
}

double EnvelopeCurve::value(double alpha) const {
  if (alpha == exterior_.alpha) return exterior_.beta;
  if (alpha <= a1_ || alpha >= a2_) return base_->value(alpha);
  if (alpha < exterior_.alpha) return base_->value(a1_) + left_slope_ * (alpha - a1_);
  return exterior_.beta + right_slope_ * (alpha - exterior_.alpha);
}

double EnvelopeCurve::slope(double alpha) const {
  if (alpha < a1_ || alpha > a2_) return base_->slope(alpha);
  return alpha < exterior_.alpha ? left_slope_ : right_slope_;
}

double EnvelopeCurve::slope_sq_integral(double lo, double hi) const {
  require_unit_interval(lo, hi);
  double acc = 0.0;
  auto clip = [&](double a, double b) { return std::pair{std::max(lo, a), std::min(hi, b)}; };
  if (auto [a, b] = clip(0.0, a1_); b > a) acc += base_->slope_sq_integral(a, b);
  if (auto [a, b] = clip(a1_, exterior_.alpha); b > a) acc += left_slope_ * left_slope_ * (b - a);
  if (auto [a, b] = clip(exterior_.alpha, a2_); b > a) acc += right_slope_ * right_slope_ * (b - a);
  if (auto [a, b] = clip(a2_, 1.0); b > a) acc += base_->slope_sq_integral(a, b);
  return acc;
}

EnvelopeCurve upper_concave_envelope(std::shared_ptr<const RocCurve> base, RocPoint exterior) {
  const double as = exterior.alpha;
  const double bs = exterior.beta;
  if (!(as > 0.0 && as < 1.0)) {
    fail(Errc::InvalidArgument,
         "exterior alpha must lie in (0, 1); shift boundary points with shift_boundary_point first");
  }
  if (!(bs <= 1.0)) fail(Errc::InvalidArgument, "exterior beta must be at most 1");
  if (!(bs > base->value(as))) fail(Errc::NotExterior, "point is not above the curve");

  // g is decreasing on (0, alpha*) and increasing on (alpha*, 1).
  auto g = [&](double a) { return base->slope(a) * (as - a) - (bs - base->value(a)); };
  constexpr double kEdge = 1e-9;
  constexpr double kWidth = 1e-13;

  double lo = kEdge, hi = as - kEdge;
  for (int it = 0; it < 300 && hi - lo > kWidth; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  const double a1 = 0.5 * (lo + hi);

  lo = as + kEdge;
  hi = 1.0 - kEdge;
  for (int it = 0; it < 300 && hi - lo > kWidth; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  const double a2 = 0.5 * (lo + hi);

  return EnvelopeCurve(std::move(base), exterior, a1, a2);
}

EnvelopeCurve upper_concave_envelope(double lambda, RocPoint exterior) {
  return upper_concave_envelope(std::make_shared<LssRocCurve>(lambda), exterior);
}

RocPoint shift_boundary_point(RocPoint p, double mixture_prob) {
  if (!(mixture_prob > 0.0 && mixture_prob < 1.0)) {
    fail(Errc::InvalidArgument, "mixture probability must lie in (0, 1)");
  }
  return {mixture_prob + (1.0 - mixture_prob) * p.alpha, mixture_prob + (1.0 - mixture_prob) * p.beta};
}

PushoutResult pushout_check(const EnvelopeCurve& env) {
  PushoutResult r;
  const double phi_sq = env.base().slope_sq_integral(0.0, 1.0);
  const double inner_base = env.base().slope_sq_integral(env.a1(), env.a2());
  const double inner_linear = env.left_slope() * env.left_slope() * (env.exterior().alpha - env.a1()) +
                              env.right_slope() * env.right_slope() * (env.a2() - env.exterior().alpha);
  r.gap_sq = inner_linear - inner_base;
  r.val_phi = std::sqrt(phi_sq);
  r.val_psi = std::sqrt(phi_sq + r.gap_sq);
  r.eta = env.exterior().beta - env.base().value(env.exterior().alpha);
  if (r.gap_sq < kMarginFactor * kQuadratureTolerance) {
    fail(Errc::MarginTooSmall, "val(psi)^2 - val(phi)^2 = " + std::to_string(r.gap_sq) +
                                   " is below 10x the quadrature tolerance");
  }
  r.strict = r.val_psi > r.val_phi;
  return r;
}

// ------------------------------------------------------ discretization

namespace {

constexpr std::size_t kMaxDiscretizationPoints = 1'000'000;

// Largest a in (0, cap] with integral over [0, a] <= budget.
double left_tail_cut(const RocCurve& c, double cap, double budget) {
  if (c.slope_sq_integral(0.0, cap) <= budget) return cap;
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (c.slope_sq_integral(0.0, mid) <= budget ? lo : hi) = mid;
  }
  return lo > 0.0 ? lo : std::ldexp(hi, -1);
}

// Smallest a in [floor, 1) with integral over [a, 1] <= budget.
double right_tail_cut(const RocCurve& c, double floor, double budget) {
  if (c.slope_sq_integral(floor, 1.0) <= budget) return floor;
  double lo = floor, hi = 1.0;
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (c.slope_sq_integral(mid, 1.0) <= budget ? hi : lo) = mid;
  }
  return hi < 1.0 ? hi : 0.5 * (lo + 1.0);
}

// Geometric slope partition of [from, to]: each step lowers the slope by
// exactly a factor (1 + gamma) until `to` is reached.
void append_partition(const RocCurve& base, double from, double to, double gamma,
                      std::vector<double>& out) {
  out.push_back(from);
  double current = from;
  for (;;) {
    const double next = base.slope_inverse(base.slope(current) / (1.0 + gamma));
    if (!(next > current) || next >= to) break;
    out.push_back(next);
    current = next;
    if (out.size() > kMaxDiscretizationPoints) {
      fail(Errc::BudgetInfeasible, "gamma forces more than 10^6 partition points");
    }
  }
  out.push_back(to);
}

std::vector<RocPoint> drop_collinear(std::vector<RocPoint> pts) {
  std::vector<RocPoint> out;
  out.reserve(pts.size());
  for (const RocPoint& p : pts) {
    while (out.size() >= 2) {
      const double m_prev = slope_between(out[out.size() - 2], out.back());
      const double m_next = slope_between(out.back(), p);
      if (std::abs(m_prev - m_next) > 1e-12 * std::max(1.0, std::abs(m_prev))) break;
      out.pop_back();
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace

Discretization discretize_envelope(const EnvelopeCurve& env, double eps, double gamma) {
  if (!(eps > 0.0) || !(gamma > 0.0)) fail(Errc::InvalidArgument, "eps and gamma must be positive");

  const RocCurve& base = env.base();
  const double psi_sq = env.slope_sq_integral(0.0, 1.0);
  const double a_first = left_tail_cut(base, env.a1(), eps / 6.0);
  const double a_last = right_tail_cut(base, env.a2(), eps / 6.0);

  for (double g = gamma; g > 1e-9; g *= 0.5) {
    std::vector<double> alphas{0.0};
    append_partition(base, a_first, env.a1(), g, alphas);
    alphas.push_back(env.exterior().alpha);
    append_partition(base, env.a2(), a_last, g, alphas);
    alphas.push_back(1.0);
    if (alphas.size() > kMaxDiscretizationPoints) {
      fail(Errc::BudgetInfeasible, "gamma forces more than 10^6 partition points");
    }

    std::vector<RocPoint> pts;
    pts.reserve(alphas.size());
    for (double a : alphas) {
      const double b = a <= 0.0 ? 0.0 : (a >= 1.0 ? 1.0 : env.value(a));
      if (!pts.empty() && !(a > pts.back().alpha)) continue;
      pts.push_back({a, b});
    }
    RocPolyline u(drop_collinear(std::move(pts)));
    if (u.slope_sq_integral(0.0, 1.0) >= psi_sq - 2.0 * eps / 3.0) {
      return Discretization{std::move(u), g, eps, a_first, a_last};
    }
  }
  fail(Errc::BudgetInfeasible, "no gamma reaches val(conc(u))^2 >= val(psi)^2 - 2 eps / 3");
}

RocPolyline perturb_points(const RocPolyline& u, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) fail(Errc::InvalidArgument, "gamma must lie in (0, 1)");
  const auto& pts = u.points();
  const auto& m = u.slopes();
  std::vector<RocPoint> v = pts;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double left = pts[i].alpha - pts[i - 1].alpha;
    const double right = pts[i + 1].alpha - pts[i].alpha;
    // slope(u_{i-1}, v_i) = m_{i-1} - d/left >= (1 - gamma) m_{i-1}
    const double keep_slope = gamma * m[i - 1] * left;
    // m_{i-1} - d/left > m_i + d/right, with half the available room
    const double keep_order = 0.5 * (m[i - 1] - m[i]) / (1.0 / left + 1.0 / right);
    const double drop = std::min(keep_slope, keep_order);
    v[i].beta = pts[i].beta - drop;
  }
  return RocPolyline(std::move(v));
}

bool feasibility_bound_check(RocPoint point, double l2norm_sq) {
  const double a = point.alpha;
  const double b = point.beta;
  if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0)) {
    fail(Errc::InvalidArgument, "feasibility check needs alpha, beta in (0, 1)");
  }
  return b * b / a + (1.0 - b) * (1.0 - b) / (1.0 - a) <= l2norm_sq;
}

}  // namespace swrl
