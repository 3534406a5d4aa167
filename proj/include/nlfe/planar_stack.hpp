#pragma once

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "nlfe/material.hpp"

namespace nlfe {

inline constexpr double kSemiInfinite = std::numeric_limits<double>::infinity();

enum class Polarization { s, p };

struct Layer {
  MaterialModel material;
  double thickness = kSemiInfinite;  // [m]
};

/// Planar layers ordered along the stacking axis (top to bottom). The
/// first and last layers are semi-infinite. Green's-function evaluation
/// points always lie in the last layer, at a depth z > 0 below its top
/// interface.
class PlanarStack {
 public:
  explicit PlanarStack(std::vector<Layer> layers, std::string axis = "z");

  /// vacuum | plate: a single semi-infinite plate below vacuum.
  static PlanarStack single_plate(const MaterialModel& plate);
  /// plate | vacuum gap d | plate, evaluation inside the lower plate.
  static PlanarStack double_plate(const MaterialModel& plate, double gap);

  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t size() const { return layers_.size(); }
  const Layer& evaluation_layer() const { return layers_.back(); }
  const std::string& axis() const { return axis_; }

  std::vector<cdouble> permittivities(double omega) const;
  /// Thicknesses scaled by k0 = w/c (semi-infinite entries stay infinite).
  std::vector<double> scaled_thicknesses(double omega) const;

  /// Same layers in the opposite order.
  PlanarStack reversed() const;

 private:
  std::vector<Layer> layers_;
  std::string axis_;
};

// ---------------------------------------------------------------------------
// Plane-wave building blocks. Transverse wavevectors are passed either in SI
// (k_rho [1/m], with omega) or in units of k0 = w/c ("scaled", q = k_rho/k0).
// ---------------------------------------------------------------------------

/// A scaled transverse wavenumber q together with its exact offsets from
/// the nearest light lines below (lo) and above (hi). Quadrature maps know
/// these offsets to full relative precision; carrying them lets
/// eps - q^2 be formed without cancellation next to a branch point.
struct TransverseNode {
  double q = 0.0;
  double lo = 0.0;
  double q_minus_lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double hi_minus_q = std::numeric_limits<double>::infinity();

  TransverseNode() = default;
  explicit TransverseNode(double q_) : q(q_), q_minus_lo(q_) {}
  TransverseNode(double q_, double lo_, double q_minus_lo_, double hi_, double hi_minus_q_)
      : q(q_), lo(lo_), q_minus_lo(q_minus_lo_), hi(hi_), hi_minus_q(hi_minus_q_) {}
};

/// Longitudinal wavenumber sqrt(eps - q^2) on the branch Im >= 0
/// (non-negative real part on the cut).
cdouble scaled_kz(cdouble eps, double q);
cdouble scaled_kz(cdouble eps, const TransverseNode& node);

/// Single-interface reflection for a wave incident from medium a onto b:
///   r_s = (kza - kzb)/(kza + kzb),
///   r_p = (eps_b kza - eps_a kzb)/(eps_b kza + eps_a kzb).
/// r_p is the ratio of tangential magnetic fields, so at normal incidence
/// r_p = -r_s = (sqrt(eps_b) - sqrt(eps_a))/(sqrt(eps_b) + sqrt(eps_a)).
/// Throws DegenerateInterfaceError when the denominator vanishes.
cdouble fresnel_reflection(cdouble eps_a, cdouble eps_b, double omega,
                           double k_rho, Polarization pol);
cdouble scaled_fresnel_reflection(cdouble eps_a, cdouble eps_b, double q,
                                  Polarization pol);
cdouble scaled_fresnel_reflection(cdouble eps_a, cdouble eps_b,
                                  const TransverseNode& node, Polarization pol);

enum class Side { top, bottom };

/// Effective reflection of the stack for incidence from its first layer
/// (Side::top) or its last layer (Side::bottom).
cdouble stack_reflection(const PlanarStack& stack, Side side, double omega,
                         double k_rho, Polarization pol);

/// Amplitudes of the tangential field (E_y for s, H_y for p) for a unit
/// wave incident from the first layer: reflection back into it and the
/// downward amplitude just below the last interface.
struct StackAmplitudes {
  cdouble reflection;
  cdouble transmission;
};

/// Scaled form operating on precomputed permittivities and k0-scaled
/// thicknesses, ordered from the incidence side.
StackAmplitudes scaled_stack_amplitudes(const std::vector<cdouble>& eps,
                                        const std::vector<double>& thickness,
                                        double q, Polarization pol);
StackAmplitudes scaled_stack_amplitudes(const std::vector<cdouble>& eps,
                                        const std::vector<double>& thickness,
                                        const TransverseNode& node, Polarization pol);

StackAmplitudes stack_amplitudes(const PlanarStack& stack, double omega,
                                 double k_rho, Polarization pol);

}  // namespace nlfe
