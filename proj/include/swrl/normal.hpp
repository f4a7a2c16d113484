#pragma once

namespace swrl {

/// Standard normal CDF.
double normal_cdf(double x);

/// Upper tail 1 - Phi(x), accurate for large x.
double normal_sf(double x);

/// Standard normal density.
double normal_pdf(double x);

/// Inverse of normal_cdf on (0, 1); -inf / +inf at 0 / 1.
double normal_quantile(double p);

}  // namespace swrl
