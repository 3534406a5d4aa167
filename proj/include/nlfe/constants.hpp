#pragma once

#include <numbers>

namespace nlfe {

// CODATA 2018 exact / recommended values, SI units.
struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;   // J s
  static constexpr double k_B = 1.380649e-23;       // J/K
  static constexpr double c = 299792458.0;          // m/s
  static constexpr double mu0 = 1.25663706212e-6;   // H/m
  static constexpr double eps0 = 1.0 / (mu0 * c * c);  // F/m
  static constexpr double pi = std::numbers::pi;

  static constexpr double stefan_boltzmann() {
    return pi * pi * k_B * k_B * k_B * k_B /
           (60.0 * hbar * hbar * hbar * c * c);
  }
};

using Const = PhysicalConstants;

}  // namespace nlfe
