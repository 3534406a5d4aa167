#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "nlfe/material.hpp"

using namespace nlfe;

TEST_CASE("constant material") {
  const auto m = MaterialModel::constant({4.0, 1.0}, {2.0, -1.0});
  CHECK(m.epsilon(1e14) == cdouble(4.0, 1.0));
  CHECK(m.chi3(1e14, 3e14) == cdouble(2.0, -1.0));
  CHECK(m.passive());
  CHECK_FALSE(m.is_linear());
  CHECK(MaterialModel::vacuum().is_vacuum());
  CHECK_FALSE(m.is_vacuum());
}

TEST_CASE("passive flag rejects gain") {
  CHECK_THROWS_AS(MaterialModel(ConstantPermittivity{{2.0, -0.1}}), std::invalid_argument);
  CHECK_NOTHROW(MaterialModel(ConstantPermittivity{{2.0, -0.1}}, ConstantChi3{}, false));
}

TEST_CASE("Lorentz oscillator") {
  const LorentzPermittivity lz{2.0, 3.0, 1e15, 1e13};
  const MaterialModel m(lz);
  // Static limit eps_inf + delta_eps.
  CHECK(m.epsilon(1e3).real() == doctest::Approx(5.0).epsilon(1e-9));
  // At resonance: eps_inf + i delta_eps w0 / gamma.
  const cdouble at = m.epsilon(1e15);
  CHECK(at.real() == doctest::Approx(2.0));
  CHECK(at.imag() == doctest::Approx(300.0));
  for (double w = 1e13; w < 1e17; w *= 1.7) CHECK(m.epsilon(w).imag() >= 0.0);
}

TEST_CASE("tabulated permittivity interpolates linearly") {
  const MaterialModel m(TabulatedPermittivity{{1.0, 2.0, 4.0}, {{1.0, 0.0}, {3.0, 1.0}, {7.0, 3.0}}});
  CHECK(m.epsilon(1.5) == cdouble(2.0, 0.5));
  CHECK(m.epsilon(3.0) == cdouble(5.0, 2.0));
  CHECK(m.epsilon(4.0) == cdouble(7.0, 3.0));
  CHECK_THROWS_AS(m.epsilon(0.5), std::domain_error);
  CHECK_THROWS_AS(MaterialModel(TabulatedPermittivity{{2.0, 1.0}, {{1.0, 0.0}, {1.0, 0.0}}}),
                  std::invalid_argument);
}

TEST_CASE("Lorentzian chi3 resonance and scaling") {
  const LorentzianChi3 l{2e14, 1e11, {0.0, -3e-18}};
  const auto m = MaterialModel::constant({4.0, 0.0}).with_chi3(l);
  CHECK(m.chi3(1e14, 2e14) == l.peak);
  CHECK(std::abs(m.chi3(1e14, 2e14 + 1e11) - 0.5 * l.peak) < 1e-30);
  REQUIRE(m.chi3_resonance().has_value());
  CHECK(m.chi3_resonance()->width == 1e11);
  CHECK(l.integrated_weight() == std::numbers::pi * 1e11 * l.peak);
  const auto m2 = m.with_scaled_chi3(2.0);
  for (double w : {1e14, 1.9e14, 2e14, 3e14}) CHECK(m2.chi3(1e14, w) == 2.0 * m.chi3(1e14, w));
}

TEST_CASE("evaluation is deterministic") {
  const MaterialModel m(LorentzPermittivity{1.5, 2.0, 3e15, 2e13});
  for (double w = 1e13; w < 1e16; w *= 3.1) CHECK(m.epsilon(w) == m.epsilon(w));
}
