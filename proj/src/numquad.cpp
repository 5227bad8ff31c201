#include "ellip/numquad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "ellip/error.hpp"

namespace ellip {
namespace {

// Kronrod abscissae/weights for the 15-point rule and the embedded 7-point
// Gauss weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double a, b, value, error;
  bool splittable;
  bool operator<(const Segment& other) const { return error < other.error; }
};

double eval(const Integrand1d& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream msg;
    msg << "integrand is not finite at x = " << x;
    throw IntegrationError(x, msg.str());
  }
  return y;
}

Segment gauss_kronrod15(const Integrand1d& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = eval(f, center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> fv1{}, fv2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = eval(f, center - dx);
    const double f2 = eval(f, center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const double hl = std::abs(half);
  resasc *= hl;
  resabs *= hl;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  const bool splittable = hl > 100.0 * kEps * std::max(std::abs(center), 1e-300);
  return {a, b, resk * half, err, splittable};
}

void check_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw Error(ErrorCode::Domain, "quadrature tolerance must be positive and finite");
  }
}

}  // namespace

QuadResult integrate_partitioned(const Integrand1d& f, std::span<const double> breakpoints,
                                 double tol, std::size_t budget) {
  check_tol(tol);
  if (breakpoints.size() < 2) {
    throw Error(ErrorCode::Domain, "integration needs at least two breakpoints");
  }
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i]) || !std::isfinite(breakpoints[i + 1]) ||
        !(breakpoints[i] < breakpoints[i + 1])) {
      throw Error(ErrorCode::Domain, "integration limits must be finite and increasing");
    }
  }

  constexpr std::size_t kPerRule = 15;
  std::size_t evaluations = 0;
  auto charge = [&] {
    evaluations += kPerRule;
    if (evaluations > budget) {
      throw Error(ErrorCode::BudgetExceeded, "quadrature did not converge within " +
                                                 std::to_string(budget) + " evaluations");
    }
  };

  std::priority_queue<Segment> active;
  std::vector<Segment> frozen;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    charge();
    Segment s = gauss_kronrod15(f, breakpoints[i], breakpoints[i + 1]);
    total += s.value;
    total_err += s.error;
    if (s.splittable) {
      active.push(s);
    } else {
      frozen.push_back(s);
    }
  }

  std::size_t iterations = 0;
  while (!active.empty() && total_err > std::max(tol, 50.0 * kEps * std::abs(total))) {
    Segment worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    charge();
    Segment left = gauss_kronrod15(f, worst.a, mid);
    charge();
    Segment right = gauss_kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    for (const Segment& s : {left, right}) {
      if (s.splittable) {
        active.push(s);
      } else {
        frozen.push_back(s);
      }
    }
    // Running sums drift; refresh them from the segments now and then.
    if (++iterations % 256 == 0) {
      total = 0.0;
      total_err = 0.0;
      auto copy = active;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
      }
      for (const Segment& s : frozen) {
        total += s.value;
        total_err += s.error;
      }
    }
  }

  // Final pass: sum smallest contributions first.
  std::vector<Segment> all = std::move(frozen);
  while (!active.empty()) {
    all.push_back(active.top());
    active.pop();
  }
  std::sort(all.begin(), all.end(),
            [](const Segment& x, const Segment& y) { return std::abs(x.value) < std::abs(y.value); });
  double value = 0.0, err = 0.0;
  for (const Segment& s : all) {
    value += s.value;
    err += s.error;
  }
  return {value, err, evaluations};
}

QuadResult integrate1d(const Integrand1d& f, double a, double b, double tol, std::size_t budget) {
  const std::array<double, 2> limits{a, b};
  return integrate_partitioned(f, limits, tol, budget);
}

QuadResult integrate2d(const Integrand2d& f, const Rect& rect, double tol, std::size_t budget) {
  check_tol(tol);
  const double outer_width = rect.b1 - rect.a1;
  if (!std::isfinite(outer_width) || !std::isfinite(rect.b2 - rect.a2) || !(outer_width > 0.0) ||
      !(rect.b2 > rect.a2)) {
    throw Error(ErrorCode::Domain, "integration rectangle must be finite and non-empty");
  }
  // Half of the tolerance goes to the outer rule, half to the inner integrals
  // (each inner error is amplified by at most the outer width).
  const double inner_tol = 0.5 * tol / outer_width;
  std::size_t used = 0;
  double worst_inner_err = 0.0;
  auto inner = [&](double x) {
    const std::size_t remaining = budget > used ? budget - used : 0;
    QuadResult r = integrate1d([&](double y) { return f(x, y); }, rect.a2, rect.b2, inner_tol,
                               remaining);
    used += r.evaluations;
    worst_inner_err = std::max(worst_inner_err, r.abs_error_estimate);
    return r.value;
  };
  QuadResult outer = integrate1d(inner, rect.a1, rect.b1, 0.5 * tol, budget);
  return {outer.value, outer.abs_error_estimate + outer_width * worst_inner_err, used};
}

WeightSpectrum::WeightSpectrum(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
  for (double l : lambdas_) {
    if (!std::isfinite(l) || l < 0.0) {
      throw Error(ErrorCode::Domain, "spectrum weights must be finite and non-negative");
    }
  }
  std::sort(lambdas_.begin(), lambdas_.end(), std::greater<>());
}

double WeightSpectrum::sum() const noexcept {
  double s = 0.0;
  for (double l : lambdas_) s += l;
  return s;
}

namespace {

struct ImhofIntegrand {
  std::span<const double> lambdas;
  double x;

  // theta(u)/u and the rest of the integrand are well defined at u -> 0.
  double theta(double u) const {
    double s = 0.0;
    for (double l : lambdas) s += std::atan(l * u);
    return 0.5 * s - 0.5 * x * u;
  }
  double log_rho(double u) const {
    double s = 0.0;
    for (double l : lambdas) s += std::log1p(l * l * u * u);
    return 0.25 * s;
  }
  double dtheta(double u) const {
    double s = 0.0;
    for (double l : lambdas) s += l / (1.0 + l * l * u * u);
    return 0.5 * s - 0.5 * x;
  }
  double ddtheta(double u) const {
    double s = 0.0;
    for (double l : lambdas) {
      const double q = 1.0 + l * l * u * u;
      s += l * l * l * u / (q * q);
    }
    return -s;
  }
  double dlog_rho(double u) const {
    double s = 0.0;
    for (double l : lambdas) s += l * l * u / (1.0 + l * l * u * u);
    return 0.5 * s;
  }
  // a(u) = 1 / (u rho(u)), the amplitude of the oscillating integrand.
  double amplitude(double u) const { return std::exp(-log_rho(u)) / u; }
  double operator()(double u) const {
    if (u == 0.0) return dtheta(0.0);
    return std::sin(theta(u)) * std::exp(-log_rho(u)) / u;
  }
};

// Smallest U such that Imhof's envelope bound on the discarded tail, using
// the k largest weights, is below `target`; minimised over k.
double imhof_envelope_cutoff(std::span<const double> lambdas, double target) {
  double best = std::numeric_limits<double>::infinity();
  double half_log_prod = 0.0;
  for (std::size_t k = 1; k <= lambdas.size(); ++k) {
    half_log_prod += 0.5 * std::log(lambdas[k - 1]);
    const double kk = static_cast<double>(k);
    const double log_u = (2.0 / kk) * (std::log(4.0 / (std::numbers::pi * kk * target)) - half_log_prod);
    best = std::min(best, std::exp(log_u));
  }
  return best;
}

// Two integrations by parts on the oscillating tail, with c = a / theta':
//   int_U^inf a sin(theta) = c(U) cos(theta(U)) - b(U) sin(theta(U)) - int_U^inf b' sin(theta),
// b = c' / theta'. The first term is kept as a correction; the rest is
// bounded by 2 |b(U)| once theta' < 0 and b has settled into its monotone decay.
double oscillation_remainder(const ImhofIntegrand& g, double u) {
  const double slope = g.dtheta(u);
  if (slope >= 0.0) return std::numeric_limits<double>::infinity();
  const double c = g.amplitude(u) / slope;
  const double dc = c * ((-1.0 / u - g.dlog_rho(u)) - g.ddtheta(u) / slope);
  return 2.0 * std::abs(dc / slope);
}

double oscillation_correction(const ImhofIntegrand& g, double u) {
  return g.amplitude(u) / g.dtheta(u) * std::cos(g.theta(u));
}

double oscillation_cutoff(const ImhofIntegrand& g, double lambda_max, double target) {
  if (!(g.x > 0.0)) return std::numeric_limits<double>::infinity();
  double hi = 1.0 / lambda_max;
  int guard = 0;
  while (oscillation_remainder(g, hi) > target) {
    hi *= 2.0;
    if (++guard > 200) return std::numeric_limits<double>::infinity();
  }
  double lo = hi / 2.0;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (oscillation_remainder(g, mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

double imhof_tail(const WeightSpectrum& spectrum, double x, double tol, std::size_t budget) {
  check_tol(tol);
  if (!std::isfinite(x) || x < 0.0) {
    throw Error(ErrorCode::Domain, "imhof_tail requires a finite x >= 0");
  }
  const double lmax = spectrum.max();
  if (!(lmax > 0.0)) {
    throw Error(ErrorCode::DegenerateSpectrum, "weight spectrum has no positive entry");
  }
  std::vector<double> kept;
  for (double l : spectrum.lambdas()) {
    if (l >= 1e-12 * lmax) kept.push_back(l);
  }
  if (x == 0.0) return 1.0;

  ImhofIntegrand g{kept, x};
  const double target = 0.5 * tol;
  const double envelope = imhof_envelope_cutoff(kept, target);
  const double oscillation = oscillation_cutoff(g, lmax, target);
  const bool corrected = oscillation < envelope;
  const double cutoff = corrected ? oscillation : envelope;
  if (!std::isfinite(cutoff)) {
    throw Error(ErrorCode::BudgetExceeded, "no finite truncation point meets the tail bound");
  }

  // Roughly one panel per half-oscillation of sin(theta(u)).
  double sum = 0.0;
  for (double l : kept) sum += l;
  const double speed = 0.5 * (sum + x);
  const double half_periods = cutoff * speed / std::numbers::pi;
  if (half_periods * 15.0 > static_cast<double>(budget)) {
    throw Error(ErrorCode::BudgetExceeded, "truncated inversion integral needs more than the evaluation budget");
  }
  const std::size_t panels = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(half_periods)), 1, budget / 15);
  std::vector<double> breaks(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    breaks[i] = cutoff * static_cast<double>(i) / static_cast<double>(panels);
  }
  const QuadResult r = integrate_partitioned(g, breaks, target * std::numbers::pi, budget);
  const double tail = corrected ? oscillation_correction(g, cutoff) : 0.0;
  const double p = 0.5 + (r.value + tail) / std::numbers::pi;
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace ellip
