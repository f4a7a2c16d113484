#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace swrl {

struct RocPoint {
  double alpha = 0.0;
  double beta = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// Absolute tolerance on squared val(.) for every numeric integral; strict
/// inequalities between val values are only reported with a margin of ten
/// times this.
inline constexpr double kQuadratureTolerance = 1e-4;
inline constexpr double kMarginFactor = 10.0;

/// ROC curve on [0, 1] with a derivative on (0, 1): continuous, positive and
/// decreasing slope, f(0) = 0, f(1) = 1.
class RocCurve {
 public:
  virtual ~RocCurve() = default;

  virtual double value(double alpha) const = 0;
  virtual double slope(double alpha) const = 0;

  /// Integral of slope^2 over [lo, hi]. The default runs tanh-sinh
  /// quadrature in alpha, which tolerates integrable endpoint singularities.
  /// Throws Error(DivergentIntegral) when the estimate does not converge.
  virtual double slope_sq_integral(double lo, double hi) const;

  /// Point in (0, 1) where the slope equals s (bisection by default).
  virtual double slope_inverse(double s) const;
};

/// Curve given by two callables; used for ad hoc curves in experiments.
class FunctionCurve final : public RocCurve {
 public:
  FunctionCurve(std::function<double(double)> value, std::function<double(double)> slope)
      : value_(std::move(value)), slope_(std::move(slope)) {}

  double value(double alpha) const override { return value_(alpha); }
  double slope(double alpha) const override { return slope_(alpha); }

 private:
  std::function<double(double)> value_;
  std::function<double(double)> slope_;
};

/// The LSS ROC curve
///   phi(alpha) = 1 - Phi[Phi^{-1}(1 - alpha) - sqrt(mu / 2)],  mu = -log(1 - lambda^2),
/// with phi(0) = 0 and phi(1) = 1. Along the threshold parametrization
///   alpha = 1 - Phi(t + sqrt(mu/8)),  beta = 1 - Phi(t - sqrt(mu/8)),
/// the slope is exp(t sqrt(mu/2)); integrals of slope^2 are taken in t, where
/// the integrand is a Gaussian-weighted exponential with no endpoint
/// singularity.
class LssRocCurve final : public RocCurve {
 public:
  explicit LssRocCurve(double lambda);

  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }

  double value(double alpha) const override;
  double slope(double alpha) const override;
  double slope_sq_integral(double lo, double hi) const override;
  double slope_inverse(double s) const override;

  double threshold_of_alpha(double alpha) const;
  double alpha_of_threshold(double t) const;

 private:
  double lambda_;
  double mu_;
  double half_shift_;  // sqrt(mu / 8)
};

double phi_eval(double lambda, double alpha);
double phi_deriv(double lambda, double alpha);

/// (1 - lambda^2)^{-1/4}.
double val_closed_form(double lambda);

/// sqrt of the integral of slope^2 over (0, 1).
double val_numeric(const RocCurve& curve);

/// True iff slopes between consecutive points are strictly positive and
/// strictly decreasing. Throws Error(MalformedSequence) unless the points
/// start at (0,0), end at (1,1) and have strictly ascending alpha.
bool concave_position_check(std::span<const RocPoint> points);

/// Points in concave position with cached segment slopes; conc(u) is the
/// piecewise-linear interpolant.
class RocPolyline final : public RocCurve {
 public:
  /// Throws MalformedSequence or NotConcavePosition.
  explicit RocPolyline(std::vector<RocPoint> points);

  const std::vector<RocPoint>& points() const noexcept { return points_; }
  const std::vector<double>& slopes() const noexcept { return slopes_; }
  std::size_t segments() const noexcept { return slopes_.size(); }

  double value(double alpha) const override;
  double slope(double alpha) const override;
  double slope_sq_integral(double lo, double hi) const override;

 private:
  std::size_t segment_of(double alpha) const;

  std::vector<RocPoint> points_;
  std::vector<double> slopes_;
};

/// sqrt(sum_i slope_i^2 (a_{i+1} - a_i)).
double val_piecewise(const RocPolyline& poly);
double val_piecewise(std::span<const RocPoint> points);  // validates first

/// Points (a, curve(a)) for the given interior abscissas plus the endpoints.
RocPolyline inscribed_polyline(const RocCurve& curve, std::span<const double> interior_alphas);

/// Minimal concave majorant of a base curve and one exterior point
/// (alpha*, beta*): psi equals the base outside [A1, A2] and is linear on
/// [A1, alpha*] and [alpha*, A2], each piece tangent to the base at its outer
/// end.
class EnvelopeCurve final : public RocCurve {
 public:
  EnvelopeCurve(std::shared_ptr<const RocCurve> base, RocPoint exterior, double a1, double a2);

  const RocCurve& base() const noexcept { return *base_; }
  RocPoint exterior() const noexcept { return exterior_; }
  double a1() const noexcept { return a1_; }
  double a2() const noexcept { return a2_; }
  double left_slope() const noexcept { return left_slope_; }
  double right_slope() const noexcept { return right_slope_; }

  /// slope(A) - (beta* - base(A)) / (alpha* - A) at A1 and A2.
  double left_tangency_residual() const;
  double right_tangency_residual() const;

  double value(double alpha) const override;
  double slope(double alpha) const override;
  double slope_sq_integral(double lo, double hi) const override;
  double slope_inverse(double s) const override { return base_->slope_inverse(s); }

 private:
  std::shared_ptr<const RocCurve> base_;
  RocPoint exterior_;
  double a1_;
  double a2_;
  double left_slope_;
  double right_slope_;
};

/// Tangency points by bisection on g(A) = base'(A)(alpha* - A) - (beta* - base(A)).
/// Throws NotExterior when beta* <= base(alpha*), InvalidArgument when
/// alpha* is not in (0, 1) or beta* > 1.
EnvelopeCurve upper_concave_envelope(std::shared_ptr<const RocCurve> base, RocPoint exterior);
EnvelopeCurve upper_concave_envelope(double lambda, RocPoint exterior);

/// A test achieving p with probability mixture_prob, and otherwise acting
/// like the test achieving p: moves a boundary point (alpha* = 0) inside.
RocPoint shift_boundary_point(RocPoint p, double mixture_prob);

struct PushoutResult {
  double val_psi = 0.0;
  double val_phi = 0.0;
  double gap_sq = 0.0;  // val_psi^2 - val_phi^2, integrated over [A1, A2] only
  double eta = 0.0;     // beta* - base(alpha*)
  bool strict = false;
};

/// Throws MarginTooSmall when gap_sq < 10 x quadrature tolerance.
PushoutResult pushout_check(const EnvelopeCurve& env);

struct Discretization {
  RocPolyline u;
  double gamma_used;  // may be below the requested gamma, see discretize_envelope
  double eps;
  double a_first;     // a_1
  double a_last;      // a_{r-1}
};

/// Points on the envelope: tails [0, a_1] and [a_{r-1}, 1] each carrying at
/// most eps/6 of the slope^2 integral, A1, alpha*, A2, and geometric
/// partitions of [a_1, A1] and [A2, a_{r-1}] with slope(a_i) <= (1 + gamma)
/// slope(a_{i+1}). Collinear points are dropped. If the result misses
/// val(conc(u))^2 >= val(psi)^2 - 2 eps / 3, gamma is halved and the
/// partition rebuilt. Throws BudgetInfeasible beyond 10^6 points.
Discretization discretize_envelope(const EnvelopeCurve& env, double eps, double gamma);

/// Lowers each interior point to b_i < u_i.beta so that
/// slope(u_{i-1}, v_i) >= (1 - gamma) m_{i-1} and
/// slope(u_{i-1}, v_i) > slope(v_i, u_{i+1}). Endpoints are kept.
RocPolyline perturb_points(const RocPolyline& u, double gamma);

/// beta^2 / alpha + (1 - beta)^2 / (1 - alpha) <= l2norm_sq, the constraint
/// every achievable pair must satisfy given the likelihood-ratio norm.
bool feasibility_bound_check(RocPoint point, double l2norm_sq);

inline constexpr double kDefaultDiscretizeGamma = 0.05;
inline constexpr double kDefaultPerturbGamma = 0.02;

}  // namespace swrl
