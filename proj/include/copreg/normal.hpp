#pragma once

namespace copreg {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal CDF, accurate to double precision in both tails.
double norm_cdf(double x);

/// Standard normal quantile. Wichura's AS241 rational approximation followed
/// by one Newton step against norm_cdf; returns -inf/+inf at p = 0/1.
double norm_quantile(double p);

} // namespace copreg
