#ifndef HEISLAB_COMMON_HPP
#define HEISLAB_COMMON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace heislab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when an operation's preconditions are violated by its inputs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an input sits on a degenerate configuration that a caller can
/// escape by perturbing it (e.g. a target value hitting a mesh vertex value).
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

inline constexpr double kPi = std::numbers::pi;

/// All randomized routines draw from this engine so that a seed fully
/// determines a run: 64-bit Mersenne Twister, seeded with the caller's integer.
using Rng = std::mt19937_64;

inline Vec random_in_ball(Rng& rng, int dim, double radius) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec v(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    norm = v.norm();
  } while (norm == 0.0);
  const double r = radius * std::pow(unif(rng), 1.0 / dim);
  return v * (r / norm);
}

inline Vec random_unit_vector(Rng& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

/// Least-squares slope and intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "fit_line: need at least two points");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, "fit_line: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / m);
  return fit;
}

/// Slope of log(values) against log(scales); the usual convergence-order fit.
inline LineFit fit_loglog(const std::vector<double>& scales, const std::vector<double>& values) {
  std::vector<double> lx, ly;
  lx.reserve(scales.size());
  ly.reserve(values.size());
  for (std::size_t i = 0; i < scales.size(); ++i) {
    lx.push_back(std::log(scales[i]));
    ly.push_back(std::log(values[i]));
  }
  return fit_line(lx, ly);
}

}  // namespace heislab

#endif  // HEISLAB_COMMON_HPP
