#include <cmath>
#include <random>

#include "doctest.h"
#include "nlfe/constants.hpp"
#include "nlfe/errors.hpp"
#include "nlfe/planar_stack.hpp"

using namespace nlfe;

namespace {

const double kOmega = 2.0 * Const::pi * Const::c / 600e-9;
const double kK0 = kOmega / Const::c;

// Characteristic-matrix (Abeles) oracle for the tangential-field amplitudes,
// independent of the reflection recursion.
StackAmplitudes abeles(const std::vector<cdouble>& eps, const std::vector<double>& thick, double q,
                       Polarization pol) {
  const auto y = [&](std::size_t j) {
    const cdouble kz = scaled_kz(eps[j], q);
    return pol == Polarization::s ? kz : kz / eps[j];
  };
  cdouble m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
  const cdouble i(0.0, 1.0);
  for (std::size_t j = 1; j + 1 < eps.size(); ++j) {
    const cdouble d = scaled_kz(eps[j], q) * thick[j];
    const cdouble yj = y(j);
    const cdouble a11 = std::cos(d), a12 = -i * std::sin(d) / yj, a21 = -i * yj * std::sin(d),
                  a22 = std::cos(d);
    const cdouble n11 = m11 * a11 + m12 * a21, n12 = m11 * a12 + m12 * a22;
    const cdouble n21 = m21 * a11 + m22 * a21, n22 = m21 * a12 + m22 * a22;
    m11 = n11; m12 = n12; m21 = n21; m22 = n22;
  }
  const cdouble y0 = y(0), ys = y(eps.size() - 1);
  const cdouble den = y0 * m11 + y0 * ys * m12 + m21 + ys * m22;
  return {(y0 * m11 + y0 * ys * m12 - m21 - ys * m22) / den, 2.0 * y0 / den};
}

}  // namespace

TEST_CASE("fresnel: identical media do not reflect") {
  for (double q : {0.0, 0.3, 0.99, 1.5, 4.0})
    for (auto pol : {Polarization::s, Polarization::p})
      CHECK(std::abs(scaled_fresnel_reflection({4.0, 1.0}, {4.0, 1.0}, q, pol)) == 0.0);
}

TEST_CASE("fresnel: normal incidence vacuum to eps = 4") {
  CHECK(fresnel_reflection(1.0, 4.0, kOmega, 0.0, Polarization::s).real() == doctest::Approx(-1.0 / 3.0));
  CHECK(fresnel_reflection(1.0, 4.0, kOmega, 0.0, Polarization::p).real() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("fresnel: grazing incidence") {
  const double kr = kK0 * (1.0 - 1e-12);
  CHECK(std::abs(fresnel_reflection(1.0, 4.0, kOmega, kr, Polarization::s) + 1.0) < 1e-5);
  CHECK(std::abs(fresnel_reflection(1.0, 4.0, kOmega, kK0, Polarization::s) + 1.0) < 1e-15);
  CHECK_THROWS_AS(fresnel_reflection(1.0, 1.0, kOmega, kK0, Polarization::s), DegenerateInterfaceError);
  CHECK_THROWS_AS(fresnel_reflection(1.0, 4.0, -1.0, 0.0, Polarization::s), std::domain_error);
}

TEST_CASE("branch: Im kz >= 0 and real kz for propagating lossless waves") {
  for (double q = 0.0; q < 5.0; q += 0.01) {
    for (cdouble e : {cdouble(1.0), cdouble(4.0), cdouble(4.0, 1.0), cdouble(-10.0, 0.5)}) {
      const cdouble kz = scaled_kz(e, q);
      CHECK(kz.imag() >= 0.0);
      if (e.imag() == 0.0 && q < std::sqrt(e.real())) {
        CHECK(kz.imag() == 0.0);
        CHECK(kz.real() >= 0.0);
      }
    }
  }
}

TEST_CASE("stack reflection limits") {
  const auto lossy = MaterialModel::constant({4.0, 1.0});
  const auto far = PlanarStack::double_plate(lossy, 1e6);
  const cdouble single = fresnel_reflection({4.0, 1.0}, 1.0, kOmega, 0.3 * kK0, Polarization::p);
  // Propagating in the gap: only the plate absorption cuts the round trip,
  // so use an evanescent gap wave where exp(2 i kz d) underflows.
  const cdouble single_ev = fresnel_reflection({4.0, 1.0}, 1.0, kOmega, 1.5 * kK0, Polarization::p);
  CHECK(std::abs(stack_reflection(far, Side::bottom, kOmega, 1.5 * kK0, Polarization::p) - single_ev) < 1e-10);

  const auto thick_lossy_slab = PlanarStack({{MaterialModel::vacuum(), kSemiInfinite},
                                             {lossy, 1e-3},
                                             {MaterialModel::vacuum(), kSemiInfinite}});
  const cdouble r_top = fresnel_reflection(1.0, {4.0, 1.0}, kOmega, 0.3 * kK0, Polarization::s);
  CHECK(std::abs(stack_reflection(thick_lossy_slab, Side::top, kOmega, 0.3 * kK0, Polarization::s) - r_top) < 1e-10);
  (void)single;

  const auto same = PlanarStack({{lossy, kSemiInfinite}, {lossy, 1e-7}, {lossy, kSemiInfinite}});
  for (auto pol : {Polarization::s, Polarization::p})
    CHECK(std::abs(stack_reflection(same, Side::top, kOmega, 0.7 * kK0, pol)) == 0.0);
}

TEST_CASE("slab reflection matches the characteristic-matrix oracle") {
  const std::vector<cdouble> eps{1.0, 4.0, 1.0};
  const std::vector<double> thick{kSemiInfinite, 0.37 * 2 * Const::pi, kSemiInfinite};
  for (auto pol : {Polarization::s, Polarization::p}) {
    const auto got = scaled_stack_amplitudes(eps, thick, 0.0, pol);
    const auto ref = abeles(eps, thick, 0.0, pol);
    CHECK(std::abs(got.reflection - ref.reflection) < 1e-10);
    CHECK(std::abs(got.transmission - ref.transmission) < 1e-10);
  }
}

TEST_CASE("random stacks: oracle agreement, passivity, energy conservation") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int nin = 1 + static_cast<int>(u(rng) * 4);
    std::vector<cdouble> eps{1.0};
    std::vector<double> thick{kSemiInfinite};
    for (int k = 0; k < nin; ++k) {
      eps.emplace_back(1.0 + 8.0 * u(rng), trial % 2 ? 2.0 * u(rng) : 0.0);
      thick.push_back(0.05 + 6.0 * u(rng));
    }
    eps.emplace_back(1.0 + 5.0 * u(rng), trial % 2 ? u(rng) : 0.0);
    thick.push_back(kSemiInfinite);
    const double q = 0.999 * u(rng);
    for (auto pol : {Polarization::s, Polarization::p}) {
      const auto got = scaled_stack_amplitudes(eps, thick, q, pol);
      const auto ref = abeles(eps, thick, q, pol);
      CHECK(std::abs(got.reflection - ref.reflection) < 1e-9);
      CHECK(std::abs(got.transmission - ref.transmission) < 1e-9 * std::max(1.0, std::abs(ref.transmission)));
      CHECK(std::abs(got.reflection) <= 1.0 + 1e-10);
      if (trial % 2 == 0) {
        const auto y = [&](cdouble e) {
          const cdouble kz = scaled_kz(e, q);
          return pol == Polarization::s ? kz : kz / e;
        };
        const double flux = std::norm(got.reflection) +
                            y(eps.back()).real() / y(eps.front()).real() * std::norm(got.transmission);
        CHECK(flux == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("single lossless interface conserves energy") {
  for (double q = 0.0; q < 1.0; q += 0.05)
    for (auto pol : {Polarization::s, Polarization::p}) {
      const auto a = scaled_stack_amplitudes({1.0, 2.25}, {kSemiInfinite, kSemiInfinite}, q, pol);
      const cdouble k1 = scaled_kz(1.0, q), k2 = scaled_kz(2.25, q);
      const double ratio = pol == Polarization::s ? (k2 / k1).real() : (k2 / 2.25 / k1).real();
      CHECK(std::norm(a.reflection) + ratio * std::norm(a.transmission) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("stack validation") {
  CHECK_THROWS_AS(PlanarStack({{MaterialModel::vacuum(), 1.0}, {MaterialModel::vacuum(), kSemiInfinite}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PlanarStack::double_plate(MaterialModel::vacuum(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(PlanarStack({{MaterialModel::vacuum(), kSemiInfinite}}), std::invalid_argument);
}
