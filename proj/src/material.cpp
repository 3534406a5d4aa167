#include "nlfe/material.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace nlfe {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

cdouble eval(const ConstantPermittivity& m, double) { return m.value; }

cdouble eval(const LorentzPermittivity& m, double w) {
  const double w0 = m.resonance;
  return m.eps_inf +
         m.delta_eps * w0 * w0 / cdouble(w0 * w0 - w * w, -m.damping * w);
}

cdouble eval(const TabulatedPermittivity& m, double w) {
  const auto& x = m.omega;
  if (x.empty() || w < x.front() || w > x.back())
    throw std::domain_error("tabulated permittivity evaluated outside table");
  auto it = std::upper_bound(x.begin(), x.end(), w);
  if (it == x.end()) return m.value.back();
  const auto i = static_cast<std::size_t>(it - x.begin());
  const double t = (w - x[i - 1]) / (x[i] - x[i - 1]);
  return m.value[i - 1] + t * (m.value[i] - m.value[i - 1]);
}

void validate(const PermittivityModel& eps) {
  if (const auto* tab = std::get_if<TabulatedPermittivity>(&eps)) {
    if (tab->omega.size() < 2 || tab->omega.size() != tab->value.size())
      throw std::invalid_argument("tabulated permittivity needs >= 2 matching samples");
    if (!std::is_sorted(tab->omega.begin(), tab->omega.end()) ||
        std::adjacent_find(tab->omega.begin(), tab->omega.end()) != tab->omega.end())
      throw std::invalid_argument("tabulated permittivity grid must be strictly increasing");
  }
  if (const auto* lz = std::get_if<LorentzPermittivity>(&eps)) {
    if (!(lz->resonance > 0.0) || lz->damping < 0.0)
      throw std::invalid_argument("Lorentz oscillator needs w0 > 0 and gamma >= 0");
  }
}

}  // namespace

cdouble LorentzianChi3::integrated_weight() const {
  return std::numbers::pi * width * peak;
}

MaterialModel::MaterialModel(PermittivityModel eps, Chi3Model chi3, bool passive)
    : eps_(std::move(eps)), chi3_(std::move(chi3)), passive_(passive) {
  validate(eps_);
  if (const auto* lc = std::get_if<LorentzianChi3>(&chi3_)) {
    if (!(lc->width > 0.0) || !(lc->center > 0.0))
      throw std::invalid_argument("Lorentzian chi3 needs center > 0 and width > 0");
  }
  if (passive_) {
    if (const auto* c = std::get_if<ConstantPermittivity>(&eps_); c && c->value.imag() < 0.0)
      throw std::invalid_argument("passive material with Im eps < 0");
    if (const auto* t = std::get_if<TabulatedPermittivity>(&eps_)) {
      for (const auto& v : t->value)
        if (v.imag() < 0.0)
          throw std::invalid_argument("passive tabulated material with Im eps < 0");
    }
    if (const auto* lz = std::get_if<LorentzPermittivity>(&eps_); lz && lz->delta_eps < 0.0)
      throw std::invalid_argument("passive Lorentz material needs delta_eps >= 0");
  }
}

MaterialModel MaterialModel::constant(cdouble eps, cdouble chi3) {
  return MaterialModel(ConstantPermittivity{eps}, ConstantChi3{chi3},
                       eps.imag() >= 0.0);
}

cdouble MaterialModel::epsilon(double omega) const {
  return std::visit([&](const auto& m) { return eval(m, omega); }, eps_);
}

cdouble MaterialModel::chi3(double /*omega*/, double omega_prime) const {
  return std::visit(
      overloaded{
          [](const ConstantChi3& c) { return c.value; },
          [&](const LorentzianChi3& l) {
            const double d = omega_prime - l.center;
            const double g2 = l.width * l.width;
            return l.peak * (g2 / (d * d + g2));
          },
      },
      chi3_);
}

bool MaterialModel::is_linear() const {
  return std::visit(
      overloaded{[](const ConstantChi3& c) { return c.value == cdouble{}; },
                 [](const LorentzianChi3& l) { return l.peak == cdouble{}; }},
      chi3_);
}

bool MaterialModel::is_vacuum() const {
  const auto* c = std::get_if<ConstantPermittivity>(&eps_);
  return c && c->value == cdouble(1.0, 0.0);
}

std::optional<Resonance> MaterialModel::chi3_resonance() const {
  if (const auto* l = std::get_if<LorentzianChi3>(&chi3_))
    return Resonance{l->center, l->width};
  return std::nullopt;
}

MaterialModel MaterialModel::with_chi3(Chi3Model chi3) const {
  MaterialModel m = *this;
  m.chi3_ = std::move(chi3);
  return m;
}

MaterialModel MaterialModel::with_scaled_chi3(double factor) const {
  return with_chi3(std::visit(
      overloaded{[&](ConstantChi3 c) -> Chi3Model {
                   c.value *= factor;
                   return c;
                 },
                 [&](LorentzianChi3 l) -> Chi3Model {
                   l.peak *= factor;
                   return l;
                 }},
      chi3_));
}

std::string MaterialModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const ConstantPermittivity& c) { os << "eps=const" << c.value; },
                 [&](const LorentzPermittivity& l) {
                   os << "eps=lorentz(eps_inf=" << l.eps_inf << ",delta=" << l.delta_eps
                      << ",w0=" << l.resonance << ",gamma=" << l.damping << ")";
                 },
                 [&](const TabulatedPermittivity& t) {
                   os << "eps=table(" << t.omega.size() << " samples)";
                 }},
             eps_);
  std::visit(overloaded{
                 [&](const ConstantChi3& c) { os << " chi3=const" << c.value; },
                 [&](const LorentzianChi3& l) {
                   os << " chi3=lorentzian(center=" << l.center << ",width=" << l.width
                      << ",peak=" << l.peak << ")";
                 }},
             chi3_);
  return os.str();
}

}  // namespace nlfe
