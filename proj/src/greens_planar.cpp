#include "nlfe/greens_planar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlfe/constants.hpp"
#include "nlfe/errors.hpp"

namespace nlfe {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxTailU = 60.0;

void check_frequency(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw std::domain_error("omega must be finite and > 0");
}

double resolve_depth(double z, double omega, bool absorbing, TraceResult& out) {
  if (!(z > 0.0)) throw std::domain_error("depth z must be > 0");
  const double zmin = minimum_depth(omega);
  out.depth_used = z;
  if (absorbing && z < zmin) {
    out.depth_used = zmin;
    out.clamped = true;
  }
  return out.depth_used;
}

double reference_index(cdouble eps) {
  return eps.real() > 0.0 ? std::sqrt(eps.real()) : 1.0;
}

std::vector<double> light_lines(const std::vector<cdouble>& eps) {
  std::vector<double> lines;
  for (const auto& e : eps)
    if (e.real() > 0.0) lines.push_back(std::sqrt(e.real()));
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  return lines;
}

TraceResult finish(const QuadResult& q, double omega, TraceResult out) {
  const double k0 = omega / Const::c;
  out.scaled = q.value;
  out.value = q.value * k0;
  out.error = q.error;
  out.evaluations = q.evaluations;
  return out;
}

}  // namespace

double minimum_depth(double omega) {
  check_frequency(omega);
  return 2.0 * kPi * Const::c / omega / 1000.0;
}

namespace detail {

cdouble scattered_integrand(cdouble eps, cdouble r_s, cdouble r_p,
                            const TransverseNode& node, double zeta) {
  const double q = node.q;
  const cdouble kz = scaled_kz(eps, node);
  if (kz.imag() < 0.0) throw NumericError("k_z left the Im >= 0 branch");
  const cdouble bracket = r_s + (q * q - kz * kz) / eps * r_p;
  return (q / kz) * bracket * std::exp(cdouble(0.0, 2.0) * kz * zeta) / (4.0 * kPi);
}

QuadResult integrate_transverse(const TransverseIntegrand& g, double n_ref,
                                const std::vector<double>& lines,
                                const QuadratureSpec& quad, int min_panels,
                                double split_below) {
  std::vector<Segment> segments;

  // Propagating part: each interval [a, b] between consecutive light lines
  // is mapped by q = a + (b - a)(1 - cos t)/2, t in [0, pi], which turns the
  // square-root branch points of k_z at both ends into smooth behaviour.
  std::vector<double> qb{0.0};
  for (double l : lines)
    if (l < n_ref) qb.push_back(l);
  qb.push_back(n_ref);
  std::sort(qb.begin(), qb.end());
  qb.erase(std::unique(qb.begin(), qb.end()), qb.end());
  for (std::size_t i = 0; i + 1 < qb.size(); ++i) {
    const double a = qb[i], b = qb[i + 1], h = 0.5 * (b - a);
    const auto prop = [g, a, b, h](double t) {
      const double sl = std::sin(0.5 * t), cl = std::cos(0.5 * t);
      const double below = 2.0 * h * sl * sl, above = 2.0 * h * cl * cl;
      const double q = t < 0.5 * kPi ? a + below : b - above;
      return (g(TransverseNode(q, a, below, b, above)) * (h * std::sin(t))).real();
    };
    int pieces = 1;
    if (b <= split_below * (1.0 + 1e-14))
      pieces = std::max(1, static_cast<int>(std::ceil(min_panels * (b - a) / std::min(split_below, n_ref))));
    for (int k = 0; k < pieces; ++k)
      segments.push_back({kPi * k / pieces, kPi * (k + 1) / pieces, prop});
  }

  // Evanescent tail q = n_ref cosh u, with breakpoints at the light lines
  // above n_ref. Offsets from the neighbouring lines use the product form
  // cosh x - cosh y = 2 sinh((x + y)/2) sinh((x - y)/2).
  std::vector<double> ub{0.0}, lb{n_ref};
  for (double l : lines)
    if (l > n_ref) {
      ub.push_back(std::acosh(l / n_ref));
      lb.push_back(l);
    }
  const auto offset = [n_ref](double x, double y) {
    return 2.0 * n_ref * std::sinh(0.5 * (x + y)) * std::sinh(0.5 * (x - y));
  };
  const auto make_tail = [&](std::size_t i) {
    const double u_lo = ub[i], l_lo = lb[i];
    const bool last = i + 1 == ub.size();
    const double u_hi = last ? 0.0 : ub[i + 1];
    const double l_hi = last ? std::numeric_limits<double>::infinity() : lb[i + 1];
    return [g, n_ref, u_lo, l_lo, u_hi, l_hi, last, offset](double u) {
      const double q = n_ref * std::cosh(u);
      const TransverseNode node(q, l_lo, offset(u, u_lo), l_hi,
                                last ? std::numeric_limits<double>::infinity() : offset(u_hi, u));
      return g(node) * (n_ref * std::sinh(u));
    };
  };
  const auto outer = make_tail(ub.size() - 1);
  const double threshold = quad.abs_tol * std::pow(10.0, -quad.evanescent_cutoff_decades);
  double u = ub.back();
  const double du = 0.25;
  int below = 0;
  while (u < kMaxTailU) {
    u += du;
    if (std::abs(outer(u)) < threshold) {
      if (++below >= 3) break;
    } else {
      below = 0;
    }
  }
  const double u_end = std::min(u, kMaxTailU);
  for (std::size_t i = 0; i < ub.size(); ++i) {
    // Panels of width <= 1 in u keep the initial Kronrod estimate honest
    // over the exponential decay.
    const double a = ub[i], b = i + 1 < ub.size() ? ub[i + 1] : u_end;
    const auto piece = make_tail(i);
    const auto tail = [piece](double x) { return piece(x).real(); };
    const int pieces = std::max(1, static_cast<int>(std::ceil(b - a)));
    for (int k = 0; k < pieces; ++k)
      segments.push_back({a + (b - a) * k / pieces, a + (b - a) * (k + 1) / pieces, tail});
  }

  return integrate_adaptive(segments, quad);
}

}  // namespace detail

std::optional<TraceResult> img_trace_bulk(cdouble eps, double omega,
                                          const QuadratureSpec& quad) {
  check_frequency(omega);
  if (eps.imag() > 0.0) return std::nullopt;
  if (eps.imag() < 0.0 || eps.real() < 0.0)
    throw std::domain_error("bulk trace defined for passive media with real eps >= 0");
  TraceResult out;
  if (eps.real() == 0.0) return out;
  // Homogeneous Weyl integrand (i/4pi eps)(q/qz)[eps + q^2 + qz^2]: the s and
  // p dyads each contribute eps, and only propagating q carry an imaginary part.
  const double n = std::sqrt(eps.real());
  const auto integrand = [eps, n](double t) {
    const double q = n * std::sin(t);
    const cdouble kz = scaled_kz(eps, q);
    const cdouble g = cdouble(0.0, 1.0) * (q / kz) * (eps + q * q + kz * kz) / (4.0 * kPi * eps);
    return g.imag() * n * std::cos(t);
  };
  const QuadResult r = integrate_adaptive(integrand, 0.0, 0.5 * kPi, quad);
  return finish(r, omega, out);
}

TraceResult img_trace_scattered(const PlanarStack& stack, double z, double omega,
                                const QuadratureSpec& quad) {
  check_frequency(omega);
  quad.validate();
  const PlanarStack rev = stack.reversed();
  const std::vector<cdouble> eps = rev.permittivities(omega);
  const std::vector<double> thick = rev.scaled_thicknesses(omega);
  const cdouble eps1 = eps.front();
  TraceResult out;
  const double depth = resolve_depth(z, omega, eps1.imag() > 0.0, out);
  const double zeta = depth * omega / Const::c;

  const auto g = [&](const TransverseNode& node) {
    const cdouble rs = scaled_stack_amplitudes(eps, thick, node, Polarization::s).reflection;
    const cdouble rp = scaled_stack_amplitudes(eps, thick, node, Polarization::p).reflection;
    return detail::scattered_integrand(eps1, rs, rp, node, zeta);
  };
  const QuadResult r = detail::integrate_transverse(g, reference_index(eps1), light_lines(eps), quad);
  return finish(r, omega, out);
}

TraceResult img_trace_double_delta(const MaterialModel& plate, double gap, double z,
                                   double omega, const QuadratureSpec& quad) {
  check_frequency(omega);
  quad.validate();
  if (!(gap > 0.0)) throw std::domain_error("plate separation must be > 0");
  const cdouble eps1 = plate.epsilon(omega);
  TraceResult out;
  const double depth = resolve_depth(z, omega, eps1.imag() > 0.0, out);
  const double k0 = omega / Const::c;
  const double zeta = depth * k0;
  const double gap_scaled = gap * k0;
  const cdouble vac(1.0, 0.0);

  // R_double - R_single = r23 P (1 - r12^2) / (1 + r12 r23 P), with
  // r12: plate -> gap, r23 = -r12: gap -> plate, P = exp(2 i qz0 d).
  const auto delta_r = [&](const TransverseNode& node, Polarization pol) {
    const cdouble r12 = scaled_fresnel_reflection(eps1, vac, node, pol);
    const cdouble r23 = -r12;
    const cdouble phase = std::exp(cdouble(0.0, 2.0) * scaled_kz(vac, node) * gap_scaled);
    return r23 * phase * (1.0 - r12 * r12) / (1.0 + r12 * r23 * phase);
  };
  const auto g = [&](const TransverseNode& node) {
    return detail::scattered_integrand(eps1, delta_r(node, Polarization::s),
                                       delta_r(node, Polarization::p), node, zeta);
  };
  // Pre-split the propagating range so that each initial panel spans about
  // half a period of the gap round-trip phase.
  const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * gap_scaled / kPi)));
  const QuadResult r = detail::integrate_transverse(
      g, reference_index(eps1), light_lines({eps1, vac}), quad, panels, 1.0);
  return finish(r, omega, out);
}

TraceResult dust_kernel(const PlanarStack& stack, double z, double omega,
                        const QuadratureSpec& quad) {
  check_frequency(omega);
  quad.validate();
  const bool top_env = stack.layers().front().material.is_vacuum();
  const bool own_env = stack.evaluation_layer().material.is_vacuum();
  if (!top_env && !own_env)
    throw std::invalid_argument("dust kernel needs a semi-infinite vacuum environment layer");

  const std::vector<cdouble> eps = stack.permittivities(omega);
  const std::vector<double> thick = stack.scaled_thicknesses(omega);
  const PlanarStack rev = stack.reversed();
  const std::vector<cdouble> eps_rev = rev.permittivities(omega);
  const std::vector<double> thick_rev = rev.scaled_thicknesses(omega);
  const cdouble eps_b = eps.back();

  TraceResult out;
  const double depth = resolve_depth(z, omega, false, out);
  const double zeta = depth * omega / Const::c;

  // q = sin t over the vacuum propagating range; q dq / qz0 = sin t dt.
  const auto integrand = [&](double t) {
    const double q = std::sin(t);
    double sum = 0.0;
    if (top_env) {
      const cdouble kzb = scaled_kz(eps_b, q);
      const cdouble ts = scaled_stack_amplitudes(eps, thick, q, Polarization::s).transmission;
      const cdouble tp = scaled_stack_amplitudes(eps, thick, q, Polarization::p).transmission;
      const double pol_norm = (q * q + std::norm(kzb)) / std::norm(eps_b);
      sum += (std::norm(ts) + std::norm(tp) * pol_norm) * std::exp(-2.0 * kzb.imag() * zeta);
    }
    if (own_env) {
      const double kz = std::cos(t);
      const cdouble rs = scaled_stack_amplitudes(eps_rev, thick_rev, q, Polarization::s).reflection;
      const cdouble rp = scaled_stack_amplitudes(eps_rev, thick_rev, q, Polarization::p).reflection;
      const cdouble ph = std::exp(cdouble(0.0, 2.0 * kz * zeta));
      sum += std::norm(1.0 + rs * ph) + kz * kz * std::norm(1.0 - rp * ph) +
             q * q * std::norm(1.0 + rp * ph);
    }
    return sum * std::sin(t) / (8.0 * kPi);
  };
  const QuadResult r = integrate_adaptive(integrand, 0.0, 0.5 * kPi, quad);
  return finish(r, omega, out);
}

}  // namespace nlfe
