#pragma once

#include <limits>
#include <optional>

#include "nlfe/material.hpp"
#include "nlfe/planar_stack.hpp"
#include "nlfe/quadrature.hpp"

namespace nlfe {

/// Result of a transverse-wavevector integral in SI units [1/m], together
/// with its value in the dimensionless normalization trace * c/w and the
/// quadrature error estimate (same normalization).
struct TraceResult {
  double value = 0.0;
  double scaled = 0.0;
  double error = 0.0;
  int evaluations = 0;
  /// Depth actually used when a requested depth below z_min was clamped.
  double depth_used = 0.0;
  bool clamped = false;
};

/// Smallest depth at which coincident-point traces inside absorbing plates
/// are evaluated: lambda0/1000 at the given frequency.
double minimum_depth(double omega);

/// Trace of Im G(r, r) in an unbounded medium, evaluated through the
/// plane-wave (Weyl) integral of the propagating spectrum. Real eps >= 0
/// gives sqrt(eps) w/(2 pi c); any Im eps > 0 yields std::nullopt, the
/// macroscopic trace being divergent.
std::optional<TraceResult> img_trace_bulk(cdouble eps, double omega,
                                          const QuadratureSpec& quad = {});

/// Reflection-induced part of Tr Im G(r, r) at depth z inside the last layer
/// of `stack` (the full coincident trace minus the bulk term of that layer).
/// For absorbing layers, depths below minimum_depth(omega) are clamped and
/// the clamp reported in the result.
TraceResult img_trace_scattered(const PlanarStack& stack, double z,
                                double omega, const QuadratureSpec& quad = {});

/// [Tr Im G with the second plate present] - [same, second plate absent] at
/// depth z in the lower plate of a plate | gap d | plate system. The
/// integrand is the reflection difference itself, so it is finite for
/// absorbing plates.
TraceResult img_trace_double_delta(const MaterialModel& plate, double gap,
                                   double z, double omega,
                                   const QuadratureSpec& quad = {});

/// Tr (G Im[-G0^-1] G*)(r, r): field intensity at depth z in the last layer
/// produced by environment dust in the semi-infinite vacuum layers of the
/// stack. Only modes propagating in vacuum contribute. Always >= 0.
/// Throws std::invalid_argument if neither end layer is vacuum.
TraceResult dust_kernel(const PlanarStack& stack, double z, double omega,
                        const QuadratureSpec& quad = {});

namespace detail {

/// Complex integrand of the scattered trace, scaled units:
///   (1/4pi) (q/qz) [R_s + (q^2 - qz^2)/eps R_p] exp(2 i qz zeta),
/// the scattered trace being the real part of its integral over q.
cdouble scattered_integrand(cdouble eps, cdouble r_s, cdouble r_p,
                            const TransverseNode& node, double zeta);

using TransverseIntegrand = std::function<cdouble(const TransverseNode&)>;

/// Scaled integral over q of a complex integrand g(q) whose real part is
/// wanted, using sin/cosh substitutions around the reference light line
/// n_ref and panel boundaries at the other light lines. Propagating
/// intervals below `split_below` are pre-split into `min_panels` initial
/// panels in proportion to their width.
QuadResult integrate_transverse(const TransverseIntegrand& g, double n_ref,
                                const std::vector<double>& light_lines,
                                const QuadratureSpec& quad, int min_panels = 1,
                                double split_below = std::numeric_limits<double>::infinity());

}  // namespace detail

}  // namespace nlfe
