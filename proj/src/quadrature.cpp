#include "nlfe/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "nlfe/errors.hpp"

namespace nlfe {

namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600855225412, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  std::size_t segment;
  bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("quadrature tolerances must be > 0");
  if (max_subdivisions < 1)
    throw std::invalid_argument("max_subdivisions must be >= 1");
  if (!(evanescent_cutoff_decades >= 0.0))
    throw std::invalid_argument("evanescent_cutoff_decades must be >= 0");
}

QuadResult gauss_kronrod21(const std::function<double(double)>& f, double a,
                           double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[10];
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double s = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  QuadResult r;
  r.value = kronrod * half;
  r.error = std::abs((kronrod - gauss) * half);
  r.evaluations = 21;
  return r;
}

QuadResult integrate_adaptive(std::span<const Segment> segments,
                              const QuadratureSpec& spec) {
  spec.validate();
  std::priority_queue<Panel> heap;
  QuadResult total;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const Segment& seg = segments[s];
    if (!(seg.b > seg.a)) continue;
    const QuadResult r = gauss_kronrod21(seg.f, seg.a, seg.b);
    heap.push({seg.a, seg.b, r.value, r.error, s});
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
  }
  const auto converged = [&] {
    return total.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total.value));
  };
  while (!heap.empty() && !converged()) {
    if (total.subdivisions >= spec.max_subdivisions) {
      std::ostringstream os;
      os << "adaptive quadrature did not converge after " << total.subdivisions
         << " subdivisions (value " << total.value << ", error estimate "
         << total.error << ")";
      throw QuadratureError(os.str(), total.value, total.error);
    }
    const Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) {
      // Panel cannot be split further in floating point; accept it.
      heap.push({p.a, p.b, p.value, 0.0, p.segment});
      total.error -= p.error;
      continue;
    }
    const auto& f = segments[p.segment].f;
    const QuadResult left = gauss_kronrod21(f, p.a, mid);
    const QuadResult right = gauss_kronrod21(f, mid, p.b);
    total.value += left.value + right.value - p.value;
    total.error += left.error + right.error - p.error;
    total.evaluations += 42;
    ++total.subdivisions;
    heap.push({p.a, mid, left.value, left.error, p.segment});
    heap.push({mid, p.b, right.value, right.error, p.segment});
  }
  // Re-sum from the panels to avoid drift from the running updates.
  double value = 0.0, error = 0.0;
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) {
    return x.segment != y.segment ? x.segment < y.segment : x.a < y.a;
  });
  for (const Panel& p : panels) {
    value += p.value;
    error += p.error;
  }
  total.value = value;
  total.error = error;
  return total;
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, const QuadratureSpec& spec) {
  const Segment seg{a, b, f};
  return integrate_adaptive(std::span<const Segment>(&seg, 1), spec);
}

double trapezoid_uniform(const std::function<double(double)>& f, double a,
                         double b, int n) {
  if (n < 2) throw std::invalid_argument("trapezoid needs >= 2 nodes");
  const double h = (b - a) / (n - 1);
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n - 1; ++i) sum += f(a + i * h);
  return sum * h;
}

double trapezoid_samples(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return sum;
}

QuadResult trapezoid_with_error(std::span<const double> x,
                                std::span<const double> y) {
  QuadResult r;
  r.value = trapezoid_samples(x, y);
  r.evaluations = static_cast<int>(x.size());
  if (x.size() >= 5 && x.size() % 2 == 1) {
    std::vector<double> xc, yc;
    for (std::size_t i = 0; i < x.size(); i += 2) {
      xc.push_back(x[i]);
      yc.push_back(y[i]);
    }
    r.error = std::abs(r.value - trapezoid_samples(xc, yc)) / 3.0;
  } else if (x.size() >= 4) {
    // Even node count: drop the last interval from the comparison and add
    // its own one-step estimate.
    std::vector<double> xc, yc;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      xc.push_back(x[i]);
      yc.push_back(y[i]);
    }
    std::span<const double> xs = x.first(xc.size() * 2 - 1);
    std::span<const double> ys = y.first(yc.size() * 2 - 1);
    r.error = std::abs(trapezoid_samples(xs, ys) - trapezoid_samples(xc, yc)) / 3.0 +
              std::abs(0.5 * (x.back() - x[x.size() - 2]) * (y.back() - y[y.size() - 2]));
  } else {
    r.error = std::numeric_limits<double>::infinity();
  }
  return r;
}

}  // namespace nlfe
