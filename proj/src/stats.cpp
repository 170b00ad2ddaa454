#include "snalab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace snalab {

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ols_fit needs >= 2 paired points");
  double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

MeanEstimate batch_means(std::span<const double> v, int blocks) {
  MeanEstimate out;
  if (v.empty()) return out;
  double total = 0;
  for (double x : v) total += x;
  out.mean = total / static_cast<double>(v.size());
  std::size_t nb = std::min<std::size_t>(static_cast<std::size_t>(blocks), v.size());
  if (nb < 2) return out;
  std::vector<double> means(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    std::size_t lo = b * v.size() / nb, hi = (b + 1) * v.size() / nb;
    double s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    means[b] = s / static_cast<double>(hi - lo);
  }
  double mm = 0;
  for (double m : means) mm += m;
  mm /= static_cast<double>(nb);
  double var = 0;
  for (double m : means) var += (m - mm) * (m - mm);
  var /= static_cast<double>(nb - 1);
  out.std_error = std::sqrt(var / static_cast<double>(nb));
  return out;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  std::size_t i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= v.size()) return v.back();
  double w = pos - static_cast<double>(i);
  return v[i] * (1 - w) + v[i + 1] * w;
}

}  // namespace snalab
