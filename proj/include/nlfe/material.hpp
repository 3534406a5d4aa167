#pragma once

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nlfe {

using cdouble = std::complex<double>;

// ---------------------------------------------------------------------------
// Linear permittivity models
// ---------------------------------------------------------------------------

struct ConstantPermittivity {
  cdouble value{1.0, 0.0};
};

/// eps(w) = eps_inf + delta_eps w0^2 / (w0^2 - w^2 - i gamma w)
struct LorentzPermittivity {
  double eps_inf = 1.0;
  double delta_eps = 0.0;
  double resonance = 1.0;  // w0 [rad/s]
  double damping = 0.0;    // gamma [rad/s]
};

/// Linear interpolation of real and imaginary parts in w; evaluation
/// outside the table range throws std::domain_error.
struct TabulatedPermittivity {
  std::vector<double> omega;
  std::vector<cdouble> value;
};

using PermittivityModel =
    std::variant<ConstantPermittivity, LorentzPermittivity,
                 TabulatedPermittivity>;

// ---------------------------------------------------------------------------
// Scalar third-order susceptibility chi3(-w, w, w', -w') [m^2/V^2]
// ---------------------------------------------------------------------------

struct ConstantChi3 {
  cdouble value{0.0, 0.0};
};

/// chi3(w') = peak * gamma^2 / ((w' - w0)^2 + gamma^2), independent of w.
/// Its integral over the real w' axis is pi * gamma * peak.
struct LorentzianChi3 {
  double center = 1.0;  // w0' [rad/s]
  double width = 1.0;   // gamma [rad/s], half width at half maximum
  cdouble peak{0.0, 0.0};

  cdouble integrated_weight() const;
};

using Chi3Model = std::variant<ConstantChi3, LorentzianChi3>;

/// Narrow resonance of a chi3 model in w', used to refine w' grids.
struct Resonance {
  double center;
  double width;
};

/// Frequency-dependent complex permittivity plus scalar chi3 for one medium.
/// Immutable after construction; evaluation is pure.
class MaterialModel {
 public:
  MaterialModel() = default;
  MaterialModel(PermittivityModel eps, Chi3Model chi3 = ConstantChi3{},
                bool passive = true);

  static MaterialModel constant(cdouble eps, cdouble chi3 = {0.0, 0.0});
  static MaterialModel vacuum() { return constant({1.0, 0.0}); }

  cdouble epsilon(double omega) const;
  cdouble chi3(double omega, double omega_prime) const;

  bool passive() const { return passive_; }
  bool is_linear() const;
  /// True when eps is the constant 1 (the vacuum/environment medium).
  bool is_vacuum() const;
  std::optional<Resonance> chi3_resonance() const;

  const PermittivityModel& permittivity_model() const { return eps_; }
  const Chi3Model& chi3_model() const { return chi3_; }

  /// Copy with chi3 multiplied by `factor` (linearity checks, scans).
  MaterialModel with_scaled_chi3(double factor) const;
  MaterialModel with_chi3(Chi3Model chi3) const;

  std::string describe() const;

 private:
  PermittivityModel eps_ = ConstantPermittivity{};
  Chi3Model chi3_ = ConstantChi3{};
  bool passive_ = true;
};

}  // namespace nlfe
