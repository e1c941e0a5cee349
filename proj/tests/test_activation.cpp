#include <doctest.h>

#include <cmath>
#include <limits>

#include "atlas/activation.hpp"
#include "atlas/rng.hpp"

using atlas::activation;
using atlas::active_window;
using atlas::ActiveWindow;

namespace {

// Piecewise definition evaluated term by term, kept independent of the
// Horner forms in the header.
double activation_reference(double x) {
  if (x <= 0.0 || x >= 4.0) return 0.0;
  if (x < 1.0) return x * x * x / 6.0;
  if (x < 2.0) {
    const double t = x - 1.0;
    return (-3.0 * t * t * t + 3.0 * t * t + 3.0 * t + 1.0) / 6.0;
  }
  if (x < 3.0) {
    const double t = x - 2.0;
    return (3.0 * t * t * t - 6.0 * t * t + 4.0) / 6.0;
  }
  const double t = 4.0 - x;
  return t * t * t / 6.0;
}

}  // namespace

TEST_SUITE_BEGIN("activation");

TEST_CASE("point values") {
  CHECK(activation(0.0) == 0.0);
  CHECK(activation(4.0) == 0.0);
  CHECK(activation(-1.0) == 0.0);
  CHECK(activation(5.0) == 0.0);
  CHECK(activation(0.5) == doctest::Approx(1.0 / 48.0).epsilon(1e-15));
  CHECK(activation(1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(activation(1.5) == doctest::Approx(2.875 / 6.0).epsilon(1e-15));
  CHECK(activation(2.0) == atlas::kActivationPeak);
  CHECK(activation(2.5) == doctest::Approx(2.875 / 6.0).epsilon(1e-15));
  CHECK(activation(3.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(activation(3.5) == doctest::Approx(1.0 / 48.0).epsilon(1e-15));
  CHECK(activation(std::numeric_limits<double>::quiet_NaN()) == 0.0);
  CHECK(activation(std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("matches piecewise reference") {
  for (int i = 0; i <= 4000; ++i) {
    const double x = -0.5 + 5.0 * i / 4000.0;
    CHECK(activation(x) == doctest::Approx(activation_reference(x)).epsilon(1e-14));
  }
}

TEST_CASE("symmetry about x = 2") {
  atlas::SplitRng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double d = rng.uniform(0.0, 2.0);
    CHECK(activation(2.0 + d) == doctest::Approx(activation(2.0 - d)).epsilon(1e-14));
  }
}

TEST_CASE("peak value and location") {
  CHECK(atlas::kActivationPeak == 2.0 / 3.0);
  for (int i = 0; i <= 4000; ++i) {
    const double x = 4.0 * i / 4000.0;
    CHECK(activation(x) <= atlas::kActivationPeak + 1e-15);
  }
}

TEST_CASE("unit integral") {
  // Simpson on [0, 4]; a cubic B-spline bump integrates to exactly 1.
  const int intervals = 4000;
  const double h = 4.0 / intervals;
  double acc = activation(0.0) + activation(4.0);
  for (int i = 1; i < intervals; ++i)
    acc += activation(i * h) * (i % 2 ? 4.0 : 2.0);
  CHECK(acc * h / 3.0 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("continuity of value, slope and curvature at the knots") {
  const double h = 1e-6;
  for (double k : {0.0, 1.0, 2.0, 3.0, 4.0}) {
    CHECK(std::abs(activation(k + 1e-12) - activation(k - 1e-12)) < 1e-11);
    const double left_slope = (activation(k) - activation(k - h)) / h;
    const double right_slope = (activation(k + h) - activation(k)) / h;
    CHECK(std::abs(left_slope - right_slope) < 1e-5);
    const double left_curv =
        (activation(k) - 2.0 * activation(k - h) + activation(k - 2.0 * h)) / (h * h);
    const double right_curv =
        (activation(k + 2.0 * h) - 2.0 * activation(k + h) + activation(k)) / (h * h);
    CHECK(std::abs(left_curv - right_curv) < 1e-2);
  }
}

TEST_CASE("bank sizing") {
  CHECK(atlas::bank_size(0) == 4);
  CHECK(atlas::bank_size(1) == 8);
  CHECK(atlas::bank_size(2) == 16);
  CHECK(atlas::bank_size(4) == 64);
  CHECK(atlas::bank_scale(0) == 1);
  CHECK(atlas::bank_scale(1) == 5);
  CHECK(atlas::bank_scale(2) == 13);
  CHECK(atlas::bank_scale(4) == 61);
  CHECK(atlas::bank_support_width(4) == 4.0 / 61.0);
  CHECK_THROWS_AS(atlas::bank_size(-1), std::invalid_argument);
  CHECK_THROWS_AS(atlas::bank_size(27), std::invalid_argument);
}

TEST_CASE("window oracle at density 0") {
  const ActiveWindow mid = active_window(0, 0.5);
  CHECK(mid.first_index == 1);
  CHECK(mid.count == 4);
  CHECK(mid.values[0] == doctest::Approx(1.0 / 48.0).epsilon(1e-15));
  CHECK(mid.values[1] == doctest::Approx(23.0 / 48.0).epsilon(1e-15));
  CHECK(mid.values[2] == doctest::Approx(23.0 / 48.0).epsilon(1e-15));
  CHECK(mid.values[3] == doctest::Approx(1.0 / 48.0).epsilon(1e-15));

  const ActiveWindow left = active_window(0, 0.0);
  CHECK(left.first_index == 1);
  CHECK(left.count == 4);
  CHECK(left.values[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(left.values[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(left.values[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(left.values[3] == 0.0);

  const ActiveWindow right = active_window(0, 1.0);
  CHECK(right.first_index == 2);
  CHECK(right.count == 3);
  CHECK(right.values[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(right.values[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(right.values[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("window oracle at density 1, right edge") {
  const ActiveWindow win = active_window(1, 1.0);
  CHECK(win.first_index == 6);
  CHECK(win.count == 3);
  CHECK(win.values[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(win.values[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(win.values[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("window matches direct evaluation over all indices") {
  atlas::SplitRng rng(3);
  for (int rho = 0; rho <= 4; ++rho) {
    const int size = atlas::bank_size(rho);
    const double w = atlas::bank_scale(rho);
    for (int rep = 0; rep < 100; ++rep) {
      const double x = rng.uniform();
      const ActiveWindow win = active_window(rho, x);
      CHECK(win.first_index >= 1);
      CHECK(win.first_index + win.count - 1 <= size);
      for (int i = 1; i <= size; ++i) {
        const double direct = activation(w * x + 4.0 - i);
        if (i >= win.first_index && i < win.first_index + win.count) {
          CHECK(win.values[i - win.first_index] == direct);
        } else {
          CHECK(direct == 0.0);  // everything outside the window vanishes
        }
      }
    }
  }
}

TEST_CASE("partition of unity") {
  atlas::SplitRng rng(17);
  for (int rho = 0; rho <= 5; ++rho) {
    for (int rep = 0; rep < 400; ++rep) {
      const double x = rep < 2 ? static_cast<double>(rep) : rng.uniform();
      const ActiveWindow win = active_window(rho, x);
      double sum = 0.0;
      for (int t = 0; t < win.count; ++t) sum += win.values[t];
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("separated points activate disjoint index ranges") {
  atlas::SplitRng rng(23);
  for (int rho = 1; rho <= 4; ++rho) {
    const double gap = atlas::bank_support_width(rho);
    int tested = 0;
    while (tested < 200) {
      const double x = rng.uniform();
      const double y = rng.uniform();
      if (std::abs(x - y) < gap) continue;
      ++tested;
      const ActiveWindow a = active_window(rho, x);
      const ActiveWindow b = active_window(rho, y);
      const bool disjoint = a.first_index + a.count <= b.first_index ||
                            b.first_index + b.count <= a.first_index;
      CHECK(disjoint);
    }
  }
}

TEST_CASE("window rejects out-of-domain points") {
  CHECK_THROWS_AS(active_window(0, -0.001), std::domain_error);
  CHECK_THROWS_AS(active_window(0, 1.001), std::domain_error);
  CHECK_THROWS_AS(active_window(2, std::numeric_limits<double>::quiet_NaN()),
                  std::domain_error);
}

TEST_SUITE_END();
