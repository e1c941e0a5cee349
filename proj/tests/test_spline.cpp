#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "atlas/rng.hpp"
#include "atlas/spline.hpp"

using atlas::MixedDensitySpline;
using atlas::RhoDensitySpline;

namespace {

// Direct sum over every basis index, independent of the windowed fast path.
double eval_reference(const RhoDensitySpline& s, double x) {
  const double w = atlas::bank_scale(s.rho());
  double acc = 0.0;
  for (int i = 1; i <= s.size(); ++i)
    acc += s.coeffs()[static_cast<std::size_t>(i - 1)] *
           atlas::activation(w * x + 4.0 - i);
  return acc;
}

void randomize(MixedDensitySpline& s, atlas::SplitRng& rng) {
  for (int rho = 0; rho < s.bank_count(); ++rho)
    for (double& c : s.bank(rho).coeffs()) c = rng.normal();
}

}  // namespace

TEST_SUITE_BEGIN("spline");

TEST_CASE("single bank starts at zero") {
  const RhoDensitySpline s(1);
  CHECK(s.rho() == 1);
  CHECK(s.size() == 8);
  for (int i = 0; i <= 20; ++i) CHECK(s.eval(i / 20.0) == 0.0);
}

TEST_CASE("single bank matches full-sum reference") {
  atlas::SplitRng rng(2);
  for (int rho = 0; rho <= 3; ++rho) {
    RhoDensitySpline s(rho);
    for (double& c : s.coeffs()) c = rng.normal();
    for (int rep = 0; rep < 80; ++rep) {
      const double x = rep == 0 ? 0.0 : rep == 1 ? 1.0 : rng.uniform();
      CHECK(s.eval(x) == doctest::Approx(eval_reference(s, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("constant coefficients reproduce the constant") {
  for (int rho = 0; rho <= 3; ++rho) {
    RhoDensitySpline s(rho);
    for (double& c : s.coeffs()) c = 2.5;
    atlas::SplitRng rng(4);
    for (int rep = 0; rep < 50; ++rep)
      CHECK(s.eval(rng.uniform()) == doctest::Approx(2.5).epsilon(1e-12));
  }
}

TEST_CASE("mixed spline structure and trainability") {
  MixedDensitySpline s(2);
  CHECK(s.bank_count() == 3);
  CHECK(s.max_density() == 2);
  CHECK_FALSE(s.trainable(0));
  CHECK_FALSE(s.trainable(1));
  CHECK(s.trainable(2));
  CHECK(s.coeff_count() == 4 + 8 + 16);
  CHECK(s.trainable_count() == 16);

  s.set_all_trainable();
  CHECK(s.trainable(0));
  CHECK(s.trainable_count() == 28);

  CHECK_THROWS_AS(MixedDensitySpline(-1), std::invalid_argument);
}

TEST_CASE("mixed eval is the sum of its banks") {
  atlas::SplitRng rng(6);
  MixedDensitySpline s(3);
  randomize(s, rng);
  for (int rep = 0; rep < 60; ++rep) {
    const double x = rng.uniform();
    double expected = 0.0;
    for (int rho = 0; rho < s.bank_count(); ++rho)
      expected += eval_reference(s.bank(rho), x);
    CHECK(s.eval(x) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("gradient matches finite differences on trainable coefficients") {
  atlas::SplitRng rng(8);
  for (const bool all : {false, true}) {
    MixedDensitySpline s(2);
    if (all) s.set_all_trainable();
    randomize(s, rng);
    for (int rep = 0; rep < 20; ++rep) {
      const double x = rng.uniform();
      const atlas::SparseGradient g = s.grad(x);
      CHECK(g.sorted_unique());
      CHECK(g.nnz() <= static_cast<std::size_t>(all ? 12 : 4));

      const double h = 1e-6;
      std::vector<double> dense(static_cast<std::size_t>(s.trainable_count()), 0.0);
      for (const auto& e : g.entries) {
        REQUIRE(e.index >= 0);
        REQUIRE(e.index < s.trainable_count());
        dense[static_cast<std::size_t>(e.index)] = e.value;
      }
      for (std::int64_t i = 0; i < s.trainable_count(); ++i) {
        const double saved = s.trainable_coeff(i);
        s.set_trainable_coeff(i, saved + h);
        const double up = s.eval(x);
        s.set_trainable_coeff(i, saved - h);
        const double down = s.eval(x);
        s.set_trainable_coeff(i, saved);
        const double fd = (up - down) / (2.0 * h);
        CHECK(dense[static_cast<std::size_t>(i)] == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("trainable coefficient access bounds") {
  MixedDensitySpline s(1);
  CHECK(s.trainable_count() == 8);
  s.set_trainable_coeff(5, 3.25);
  CHECK(s.trainable_coeff(5) == 3.25);
  CHECK(s.bank(1).coeffs()[5] == 3.25);  // default layout trains the top bank
  CHECK_THROWS_AS(s.trainable_coeff(-1), std::out_of_range);
  CHECK_THROWS_AS(s.trainable_coeff(8), std::out_of_range);
  CHECK_THROWS_AS(s.set_trainable_coeff(8, 0.0), std::out_of_range);
}

TEST_CASE("density expansion preserves outputs exactly") {
  atlas::SplitRng rng(10);
  MixedDensitySpline s(1);
  randomize(s, rng);
  std::vector<double> xs, before;
  for (int i = 0; i <= 100; ++i) {
    xs.push_back(i / 100.0);
    before.push_back(s.eval(xs.back()));
  }
  const std::vector<double> old_top(s.bank(1).coeffs().begin(),
                                    s.bank(1).coeffs().end());

  s.expand_density();
  CHECK(s.bank_count() == 3);
  CHECK(s.max_density() == 2);
  CHECK_FALSE(s.trainable(0));
  CHECK_FALSE(s.trainable(1));
  CHECK(s.trainable(2));
  CHECK(s.trainable_count() == 16);
  for (double c : s.bank(2).coeffs()) CHECK(c == 0.0);
  for (std::size_t i = 0; i < old_top.size(); ++i)
    CHECK(s.bank(1).coeffs()[i] == old_top[i]);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(s.eval(xs[i]) == before[i]);
}

TEST_SUITE_END();
