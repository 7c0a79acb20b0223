#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "interact/common.hpp"
#include "interact/rng.hpp"
#include "interact/sampler_core.hpp"

using namespace interact;

TEST_CASE("engine output is the standard mt19937_64 sequence") {
  // 10000th output for the default seed, as pinned by the C++ standard
  Rng rng(5489u);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.next_u64();
  CHECK(x == 9981545732273789042ULL);
}

TEST_CASE("mix_seed is SplitMix64") {
  CHECK(mix_seed(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix_seed(1) != mix_seed(2));
}

TEST_CASE("same seed, same stream") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    differs |= x != c.uniform();
  }
  CHECK(differs);
}

TEST_CASE("uniform stays in [0, 1)") {
  Rng rng(1);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("below is bounded and roughly uniform") {
  Rng rng(7);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
  CHECK(chi2 < 22.46);  // 6 dof, p = 0.001
  CHECK(rng.below(1) == 0);
}

TEST_CASE("gamma moments") {
  for (double shape : {0.1, 0.5, 1.0, 3.5}) {
    Rng rng(11);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = rng.gamma(shape);
      REQUIRE(g >= 0.0);
      s += g;
      s2 += g * g;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(mean == doctest::Approx(shape).epsilon(0.03));
    CHECK(var == doctest::Approx(shape).epsilon(0.06));
  }
}

TEST_CASE("poisson and normal moments") {
  Rng rng(3);
  const int n = 100000;
  double ps = 0.0, ns = 0.0, ns2 = 0.0;
  for (int i = 0; i < n; ++i) {
    ps += static_cast<double>(rng.poisson(20.0));
    const double z = rng.normal();
    ns += z;
    ns2 += z * z;
  }
  CHECK(ps / n == doctest::Approx(20.0).epsilon(0.01));
  CHECK(std::abs(ns / n) < 0.02);
  CHECK(ns2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("dirichlet rows lie on the simplex") {
  Rng rng(5);
  std::vector<double> p(50);
  for (double a : {0.001, 0.01, 1.0, 1e6}) {
    rng.dirichlet(a, p);
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : p) CHECK(v >= 0.0);
  }
}

TEST_CASE("sample_categorical") {
  Rng rng(9);
  SUBCASE("point mass") {
    const std::vector<double> w{0.0, 1.0, 0.0};
    for (int i = 0; i < 100; ++i) CHECK(sample_categorical(w, rng) == 1);
  }
  SUBCASE("zero weight never drawn") {
    const std::vector<double> w{2.0, 0.0, 2.0};
    for (int i = 0; i < 10000; ++i) CHECK(sample_categorical(w, rng) != 1);
  }
  SUBCASE("uniform frequencies") {
    const std::vector<double> w{1, 1, 1, 1};
    std::vector<int> counts(4, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[sample_categorical(w, rng)];
    double chi2 = 0.0;
    for (int c : counts) {
      CHECK(c / double(n) == doctest::Approx(0.25).epsilon(0.02 / 0.25));
      chi2 += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
    }
    CHECK(chi2 < 16.27);  // 3 dof, p = 0.001
  }
  SUBCASE("consumes exactly one uniform") {
    Rng a(77), b(77);
    const std::vector<double> w{0.3, 0.3, 0.4};
    sample_categorical(w, a);
    b.uniform();
    CHECK(a.next_u64() == b.next_u64());
  }
  SUBCASE("invalid weights") {
    CHECK_THROWS_AS(sample_categorical(std::vector<double>{0.0, 0.0}, rng), ValidationError);
    CHECK_THROWS_AS(sample_categorical(std::vector<double>{1.0, -1.0}, rng), ValidationError);
    CHECK_THROWS_AS(sample_categorical(std::vector<double>{1.0, std::nan("")}, rng), ValidationError);
    CHECK_THROWS_AS(sample_categorical(std::vector<double>{}, rng), ValidationError);
  }
}

TEST_CASE("smoothed_ratio") {
  CHECK(smoothed_ratio(0, 0, 0.1, 10) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(smoothed_ratio(2, 5, 0.5, 4) == doctest::Approx(2.5 / 7.0).epsilon(1e-15));
  for (double b : {1e-6, 0.01, 3.0}) CHECK(smoothed_ratio(0, 0, b, 37) == doctest::Approx(1.0 / 37).epsilon(1e-14));
  CHECK_THROWS_AS(smoothed_ratio(0, 0, 0.0, 3), ValidationError);
  CHECK_THROWS_AS(smoothed_ratio(0, 0, -1.0, 3), ValidationError);
}

TEST_CASE("hyperparameter validation") {
  const Hyperparams hp = Hyperparams::defaults(100);
  CHECK(hp.alpha == 0.5);
  CHECK(hp.beta == 0.01);
  CHECK(hp.gamma == hp.delta);
  Hyperparams bad = hp;
  bad.beta = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = hp;
  bad.num_communities = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}
