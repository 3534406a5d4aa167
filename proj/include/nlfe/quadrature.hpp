#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nlfe {

/// Tolerances for the transverse-wavevector (and other 1D) integrals.
/// abs_tol is in the units of the integral being computed; all planar
/// Green's-function traces use the dimensionless normalization trace * c/w.
struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  /// The evanescent tail is truncated where the integrand falls below
  /// abs_tol * 10^-decades.
  double evanescent_cutoff_decades = 4.0;
  int max_subdivisions = 100000;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  int subdivisions = 0;
};

/// One piece of a piecewise-defined integral: f integrated over [a, b].
struct Segment {
  double a;
  double b;
  std::function<double(double)> f;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature.
///
/// All segments share one priority queue: the panel with the largest error
/// estimate is bisected until the summed error drops below
/// max(abs_tol, rel_tol * |value|). Segment end points are always panel
/// boundaries and never interior nodes. Throws QuadratureError (carrying
/// the achieved estimate) when max_subdivisions is exhausted.
QuadResult integrate_adaptive(std::span<const Segment> segments,
                              const QuadratureSpec& spec);

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, const QuadratureSpec& spec);

/// Single 21-point Kronrod rule on [a, b] with its embedded Gauss estimate.
QuadResult gauss_kronrod21(const std::function<double(double)>& f, double a,
                           double b);

/// Composite trapezoid rule with n uniform nodes (n >= 2).
double trapezoid_uniform(const std::function<double(double)>& f, double a,
                         double b, int n);

/// Trapezoid rule on a sampled, strictly increasing grid.
double trapezoid_samples(std::span<const double> x, std::span<const double> y);

/// Trapezoid on a grid plus a Richardson-style error estimate obtained by
/// comparison with the rule on every other node.
QuadResult trapezoid_with_error(std::span<const double> x,
                                std::span<const double> y);

}  // namespace nlfe
