#pragma once

// Snowflake embedding of an interval: x -> sum_j a_j (cos w_j x, sin w_j x)
// with a geometric frequency ladder, so that
//   (1-eps) sqrt|x-y| <= ||K(x) - K(y)||_2 <= sqrt|x-y|
// over the calibrated range, and its coordinatewise composition with an l1
// embedding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "l1lab/error.hpp"
#include "l1lab/metric.hpp"
#include "l1lab/rng.hpp"

namespace l1lab {

class KahaneMap {
 public:
  KahaneMap(double eps, double lo, double hi, std::vector<double> frequencies,
            std::vector<double> amplitudes, double achieved_eps, double min_scale)
      : eps_(eps), lo_(lo), hi_(hi), freq_(std::move(frequencies)), amp_(std::move(amplitudes)),
        achieved_eps_(achieved_eps), min_scale_(min_scale) {
    if (freq_.size() != amp_.size()) throw InvalidArgument("frequency/amplitude size mismatch");
  }

  double eps() const { return eps_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& frequencies() const { return freq_; }
  const std::vector<double>& amplitudes() const { return amp_; }
  double achieved_eps() const { return achieved_eps_; }
  double min_scale() const { return min_scale_; }
  // Extra slack beyond the requested eps; zero when calibration met eps.
  double calibration_slack() const { return std::max(0.0, achieved_eps_ - eps_); }
  std::size_t dim() const { return 2 * freq_.size(); }

  void apply(double x, double* out) const {
    for (std::size_t j = 0; j < freq_.size(); ++j) {
      out[2 * j] = amp_[j] * std::cos(freq_[j] * x);
      out[2 * j + 1] = amp_[j] * std::sin(freq_[j] * x);
    }
  }

  std::vector<double> operator()(double x) const {
    std::vector<double> out(dim());
    apply(x, out.data());
    return out;
  }

  // ||K(x) - K(y)||^2 for |x - y| = t, in closed form.
  double squared_distance(double t) const {
    double s = 0.0;
    for (std::size_t j = 0; j < freq_.size(); ++j) {
      const double h = std::sin(0.5 * freq_[j] * t);
      s += 4.0 * amp_[j] * amp_[j] * h * h;
    }
    return s;
  }

 private:
  double eps_, lo_, hi_;
  std::vector<double> freq_, amp_;
  double achieved_eps_, min_scale_;
};

namespace detail {

inline std::vector<double> log_grid(double from, double to, double step) {
  std::vector<double> t;
  const double a = std::log(from), b = std::log(to);
  const auto count = static_cast<std::size_t>(std::ceil((b - a) / step));
  for (std::size_t i = 0; i <= count; ++i) t.push_back(std::exp(std::min(b, a + step * static_cast<double>(i))));
  return t;
}

// Golden-section refinement of a local maximum of f on [a, b].
template <typename F>
double refine_max(F&& f, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80; ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d);
    }
  }
  return std::max({fc, fd, f(a), f(b)});
}

}  // namespace detail

inline constexpr double kKahaneCoverage = 1e-4;
inline constexpr double kKahanePadOctaves = 6.0;

// Calibrates the ladder on [lo, hi]: frequencies w_j = w_0 r^j spanning
// [2^-6 / (hi-lo), 2^6 / min_scale], squared amplitudes proportional to 1/w_j
// and scaled so the upper bound is tight. The ratio r starts at 2 and is
// refined until the lower bound holds with eps on [min_scale, hi-lo] or the
// achieved eps plateaus.
// min_scale defaults to 1e-4 (hi - lo).
inline KahaneMap kahane_map(double eps, double lo, double hi, double min_scale = 0.0) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("kahane_map needs 0 < eps < 1");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument("kahane_map needs lo < hi");
  const double length = hi - lo;
  if (!(min_scale > 0.0)) min_scale = kKahaneCoverage * length;
  min_scale = std::min(min_scale, length);

  const double w_lo = std::exp2(-kKahanePadOctaves) / length;
  const double w_hi = std::exp2(kKahanePadOctaves) / min_scale;
  double best_eps = std::numeric_limits<double>::infinity();

  for (double ratio = 2.0; ratio > 1.01; ratio = std::sqrt(ratio)) {
    std::vector<double> freq, amp2;
    for (double w = w_lo; w <= w_hi * ratio; w *= ratio) {
      freq.push_back(w);
      amp2.push_back(1.0 / w);
    }
    auto ratio_at = [&](double t) {
      double s = 0.0;
      for (std::size_t j = 0; j < freq.size(); ++j) {
        const double h = std::sin(0.5 * freq[j] * t);
        s += 4.0 * amp2[j] * h * h;
      }
      return s / t;
    };

    // Upper bound: scan below the coverage floor too, then polish local maxima.
    const double step = std::log(ratio) / 256.0;
    const auto grid = detail::log_grid(min_scale * std::exp2(-12.0), length, step);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = ratio_at(grid[i]);
    double top = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      top = std::max(top, values[i]);
      const bool local = (i == 0 || values[i] >= values[i - 1]) &&
                         (i + 1 == grid.size() || values[i] >= values[i + 1]);
      if (local) {
        const double a = grid[i == 0 ? 0 : i - 1], b = grid[i + 1 == grid.size() ? i : i + 1];
        top = std::max(top, detail::refine_max(ratio_at, a, b));
      }
    }
    const double scale = 1.0 / (top * (1.0 + 1e-9));

    double bottom = std::numeric_limits<double>::infinity();
    auto negated = [&](double t) { return -ratio_at(t); };
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] < min_scale) continue;
      bottom = std::min(bottom, values[i]);
      const bool local = (i == 0 || values[i] <= values[i - 1]) &&
                         (i + 1 == grid.size() || values[i] <= values[i + 1]);
      if (local) {
        const double a = std::max(min_scale, grid[i == 0 ? 0 : i - 1]);
        const double b = grid[i + 1 == grid.size() ? i : i + 1];
        bottom = std::min(bottom, -detail::refine_max(negated, a, b));
      }
    }
    bottom *= scale;
    const double achieved = 1.0 - std::sqrt(bottom);
    const double previous = best_eps;
    best_eps = std::min(best_eps, achieved);

    if (achieved <= eps) {
      std::vector<double> amp(freq.size());
      for (std::size_t j = 0; j < freq.size(); ++j) amp[j] = std::sqrt(amp2[j] * scale);
      return KahaneMap(eps, lo, hi, std::move(freq), std::move(amp), achieved, min_scale);
    }
    // Past a certain r the ladder ends dominate and halving the ratio stops
    // helping while the cost keeps doubling.
    if (achieved > 0.95 * previous) break;
  }
  throw CalibrationError("kahane_map could not reach the requested eps", best_eps);
}

struct KahaneAudit {
  std::size_t pairs = 0;
  std::size_t within = 0;          // pairs meeting both bounds
  double max_upper_excess = 0.0;   // max ||K(x)-K(y)|| / sqrt|x-y| - 1, clamped at 0
  double min_ratio = std::numeric_limits<double>::infinity();
  double mean_ratio = 0.0;
  double fraction_within() const { return pairs ? static_cast<double>(within) / static_cast<double>(pairs) : 1.0; }
};

// Samples uniform pairs from [lo, hi] and measures distances through the
// explicit coordinates (not the closed form).
inline KahaneAudit audit_kahane_map(const KahaneMap& k, std::size_t pairs, std::uint64_t seed) {
  KahaneAudit a;
  CounterRng rng(seed);
  std::vector<double> kx(k.dim()), ky(k.dim());
  double sum = 0.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    const double x = rng.uniform(k.lo(), k.hi()), y = rng.uniform(k.lo(), k.hi());
    if (x == y) continue;
    k.apply(x, kx.data());
    k.apply(y, ky.data());
    double s = 0.0;
    for (std::size_t c = 0; c < kx.size(); ++c) s += (kx[c] - ky[c]) * (kx[c] - ky[c]);
    const double ratio = std::sqrt(s) / std::sqrt(std::abs(x - y));
    ++a.pairs;
    sum += ratio;
    a.min_ratio = std::min(a.min_ratio, ratio);
    a.max_upper_excess = std::max(a.max_upper_excess, ratio - 1.0);
    if (ratio >= 1.0 - k.eps() && ratio <= 1.0 + 1e-6) ++a.within;
  }
  a.mean_ratio = a.pairs ? sum / static_cast<double>(a.pairs) : 0.0;
  return a;
}

struct SqrtComposition {
  Embedding image;  // in l2^{d*m}
  KahaneMap map;
  double eps_cal = 0.0;
  double max_upper_ratio = 0.0;  // max ||g(x)-g(y)||^2 / ||f(x)-f(y)||_1
  double min_lower_ratio = 0.0;  // min ||g(x)-g(y)|| / sqrt(rho(x,y))
};

// g(x) = (K(f(x)_1), ..., K(f(x)_d)) for f rescaled to Lipschitz constant 1.
// Asserted on every pair:
//   ||g(x)-g(y)||^2 <= ||f(x)-f(y)||_1 (1 + 1e-6)
//   ||g(x)-g(y)||   >= (1 - 2 eps - eps_cal) sqrt(rho(x, y)).
inline SqrtComposition compose_sqrt_embedding(const Embedding& f, double eps) {
  if (f.norm() != Norm::L1) throw InvalidArgument("compose_sqrt_embedding needs an l1 embedding");
  if (f.dim() == 0) throw DegenerateEmbedding("zero-dimensional embedding is not injective");
  const DistortionReport rep = distortion_report(f);
  if (!rep.injective()) throw DegenerateEmbedding("embedding is not injective");
  if (!(rep.distortion <= 1.0 + eps + kMetricTolerance)) throw NotAnEmbedding("embedding distortion exceeds 1+eps");

  const std::size_t n = f.size(), d = f.dim();
  std::vector<double> pts(f.coordinates());
  for (double& x : pts) x /= rep.expansion;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double x : pts) { lo = std::min(lo, x); hi = std::max(hi, x); }
  if (!(hi > lo)) hi = lo + 1.0;
  const double length = hi - lo;

  // Cover every nonzero coordinate gap that occurs between two points.
  double gap = kKahaneCoverage * length;
  std::vector<double> column(n);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t i = 0; i < n; ++i) column[i] = pts[i * d + c];
    std::sort(column.begin(), column.end());
    for (std::size_t i = 1; i < n; ++i)
      if (column[i] > column[i - 1]) gap = std::min(gap, column[i] - column[i - 1]);
  }
  gap = std::max(gap, 1e-12 * length);

  KahaneMap map = kahane_map(eps, lo, hi, gap);
  const std::size_t m = map.dim();
  std::vector<double> image(n * d * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) map.apply(pts[i * d + c], image.data() + (i * d + c) * m);

  SqrtComposition out{Embedding(f.source_ptr(), d * m, Norm::L2, std::move(image)), map,
                      map.calibration_slack(), 0.0, std::numeric_limits<double>::infinity()};
  const double lower = 1.0 - 2.0 * eps - out.eps_cal;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double l1 = 0.0;
      for (std::size_t c = 0; c < d; ++c) l1 += std::abs(pts[i * d + c] - pts[j * d + c]);
      const double g = out.image.image_distance(i, j);
      out.max_upper_ratio = std::max(out.max_upper_ratio, g * g / l1);
      out.min_lower_ratio = std::min(out.min_lower_ratio, g / std::sqrt(f.source()(i, j)));
    }
  }
  if (out.max_upper_ratio > 1.0 + 1e-6) {
    throw CertificateViolation("compose.upper", "squared l2 distance exceeds the l1 distance");
  }
  if (out.min_lower_ratio < lower) {
    throw CertificateViolation("compose.lower", "composed map contracts more than 1-2eps-eps_cal");
  }
  return out;
}

}  // namespace l1lab
