#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "rulehier/math.hpp"

using namespace rulehier;

namespace {

double ulp_distance(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::abs(std::nextafter(b, std::numeric_limits<double>::infinity()) - b);
}

}  // namespace

TEST_CASE("exp_portable tracks libm") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> wide(-700.0, 700.0);
  std::uniform_real_distribution<double> narrow(-5.0, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = i % 2 ? wide(rng) : narrow(rng);
    worst = std::max(worst, ulp_distance(exp_portable(x), std::exp(x)));
  }
  CHECK(worst <= 2.0);
  CHECK(exp_portable(0.0) == 1.0);
  CHECK(exp_portable(-800.0) == 0.0);
  CHECK(std::isinf(exp_portable(710.0)));
}

TEST_CASE("log_portable tracks libm and handles edge values") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> expo(-300.0, 300.0);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = std::pow(10.0, expo(rng) / 10.0);
    worst = std::max(worst, ulp_distance(log_portable(x), std::log(x)));
  }
  CHECK(worst <= 2.0);
  CHECK(log_portable(1.0) == 0.0);
  CHECK(log_portable(0.0) == -std::numeric_limits<double>::infinity());
  CHECK(std::isnan(log_portable(-1.0)));
  CHECK(std::isnan(log_portable(std::numeric_limits<double>::quiet_NaN())));
  CHECK(log_portable(std::numeric_limits<double>::infinity()) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("smooth min/max stay within log-sum-exp bounds") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> xs(1 + trial % 7);
    for (double& x : xs) x = u(rng);
    const double t = 0.05 + 0.5 * (trial % 3);
    const double lo = hard_min(xs);
    const double hi = hard_max(xs);
    const double slack = t * std::log(static_cast<double>(xs.size()));
    const double smin = smooth_min(xs, t);
    const double smax = smooth_max(xs, t);
    CHECK(smin <= lo + 1e-12);
    CHECK(smin >= lo - slack - 1e-12);
    CHECK(smax >= hi - 1e-12);
    CHECK(smax <= hi + slack + 1e-12);
  }
}

TEST_CASE("smooth min of a single value is the value") {
  const double x = 0.3;
  CHECK(smooth_min(std::span<const double>(&x, 1), 0.05) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(smooth_max(std::span<const double>(&x, 1), 0.05) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  for (double a = -20.0; a <= 20.0; a += 0.137) {
    const double w = wrap_angle(a);
    CHECK(w > -std::numbers::pi);
    CHECK(w <= std::numbers::pi);
    CHECK(std::abs(std::remainder(a - w, 2.0 * std::numbers::pi)) < 1e-12);
  }
  CHECK(wrap_angle(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("sigmoid is symmetric and stable") {
  for (double x : {-800.0, -30.0, -1.0, 0.0, 2.5, 40.0, 800.0}) {
    CHECK(sigmoid(x) + sigmoid(-x) == doctest::Approx(1.0));
    CHECK(std::isfinite(sigmoid(x)));
  }
}
