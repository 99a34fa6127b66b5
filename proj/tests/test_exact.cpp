#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rbm/exact.hpp"
#include "rbm/training.hpp"

using namespace rbm;

namespace {

Dataset full_space(std::size_t n) {
  Dataset ds;
  ds.name = "full";
  ds.n_visible = n;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k)
    ds.states.emplace_back(k, n);
  return ds;
}

}  // namespace

TEST_CASE("log_partition: zero parameters") {
  RbmParams p(10, 10);
  CHECK(log_partition(p) ==
        doctest::Approx(20.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("log_partition: fully factorized model (W = 0)") {
  RngStream rng(3);
  RbmParams p(6, 4);
  for (double& v : p.b) v = 2.0 * rng.next_double() - 1.0;
  for (double& v : p.c) v = 2.0 * rng.next_double() - 1.0;
  double expected = 0.0;
  for (double v : p.b) expected += std::log1p(std::exp(v));
  for (double v : p.c) expected += std::log1p(std::exp(v));
  CHECK(log_partition(p) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("log_partition: matches joint (x,h) enumeration") {
  RngStream rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    const RbmParams p = oracle::random_params(6, 4, 1.0, rng);
    CHECK(log_partition(p) ==
          doctest::Approx(oracle::log_partition_joint(p)).epsilon(1e-10));
  }
}

TEST_CASE("log_partition: enumeration bound enforced") {
  RbmParams p(25, 2);
  CHECK_THROWS_AS(log_partition(p), CapabilityError);
  CHECK_NOTHROW(log_partition(RbmParams(10, 2), 10));
}

TEST_CASE("log_partition: invariant under hidden unit permutation") {
  RngStream rng(19);
  const RbmParams p = oracle::random_params(6, 5, 1.0, rng);
  RbmParams q(6, 5);
  const std::size_t perm[5] = {3, 0, 4, 1, 2};
  for (std::size_t j = 0; j < 5; ++j) {
    q.c[perm[j]] = p.c[j];
    for (std::size_t i = 0; i < 6; ++i) q.w(perm[j], i) = p.w(j, i);
  }
  q.b = p.b;
  CHECK(std::abs(log_partition(p) - log_partition(q)) <= 1e-12);
}

TEST_CASE("log_likelihood: uniform model") {
  RbmParams p(6, 3);
  Dataset ds;
  ds.n_visible = 6;
  for (std::uint64_t k = 0; k < 5; ++k) ds.states.emplace_back(k, 6);
  CHECK(log_likelihood(p, ds) ==
        doctest::Approx(-5.0 * 6.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("log_likelihood: uniform maximizes full-space likelihood") {
  const Dataset full = full_space(5);
  const RbmParams uniform(5, 3);
  RngStream rng(7);
  const double best = log_likelihood(uniform, full);
  for (int rep = 0; rep < 10; ++rep) {
    const RbmParams p = oracle::random_params(5, 3, 1.0, rng);
    CHECK(log_likelihood(p, full) <= best + 1e-9);
  }
}

TEST_CASE("log_likelihood: matches direct normalization") {
  RngStream rng(9);
  const RbmParams p = oracle::random_params(6, 4, 1.2, rng);
  Dataset ds;
  ds.n_visible = 6;
  for (std::uint64_t k : {3u, 17u, 42u, 63u}) ds.states.emplace_back(k, 6);
  // Direct route: normalize e^{F} over all states without the Gray sweep.
  std::vector<double> fs;
  double max_f = -1e300;
  for (std::uint64_t k = 0; k < 64; ++k) {
    fs.push_back(oracle::free_energy_enum(p, BinaryState(k, 6)));
    max_f = std::max(max_f, fs.back());
  }
  double z = 0.0;
  for (double f : fs) z += std::exp(f - max_f);
  const double log_z = max_f + std::log(z);
  double expected = 0.0;
  for (const BinaryState& x : ds.states)
    expected += oracle::free_energy_enum(p, x) - log_z;
  CHECK(log_likelihood(p, ds) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("exact_eval: probabilities normalize and are nonpositive in log") {
  RngStream rng(13);
  const RbmParams p = oracle::random_params(8, 4, 1.0, rng);
  const Dataset full = full_space(8);
  const ExactEval ev = exact_eval(p, full);
  double total = 0.0;
  for (const auto& [x, lp] : ev.log_px) {
    CHECK(lp <= 1e-12);
    total += std::exp(lp);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("exact_gradient: matches finite differences of log_likelihood") {
  RngStream rng(15);
  for (int rep = 0; rep < 5; ++rep) {
    const RbmParams p = oracle::random_params(5, 3, 1.0, rng);
    Dataset ds;
    ds.n_visible = 5;
    for (int k = 0; k < 4; ++k)
      ds.states.push_back(oracle::random_state(5, rng));
    const GradientEstimate g = exact_gradient(p, ds);
    // exact_gradient is the mean-per-example ascent direction.
    const auto mean_ll = [&](const RbmParams& q) {
      return log_likelihood(q, ds) / static_cast<double>(ds.size());
    };
    const GradientEstimate fd = oracle::finite_difference(p, mean_ll);
    for (std::size_t k = 0; k < g.dW.size(); ++k)
      CHECK(std::abs(g.dW[k] - fd.dW[k]) <= 1e-6);
    for (std::size_t k = 0; k < g.db.size(); ++k)
      CHECK(std::abs(g.db[k] - fd.db[k]) <= 1e-6);
    for (std::size_t k = 0; k < g.dc.size(); ++k)
      CHECK(std::abs(g.dc[k] - fd.dc[k]) <= 1e-6);
  }
}

TEST_CASE("exact_gradient: complement-symmetric data zeroes the bias gradient") {
  RbmParams p(4, 2);
  Dataset ds;
  ds.n_visible = 4;
  ds.states.emplace_back(0b0101, 4);
  ds.states.emplace_back(0b1010, 4);  // bit complement
  const GradientEstimate g = exact_gradient(p, ds);
  for (double v : g.db) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("exact_gradient: vanishes at a likelihood critical point") {
  // Locate a critical point by long exact-gradient ascent on a tiny problem.
  // The empirical target puts mass on every state (all eight, one of them
  // three times), so the maximum sits at finite parameters: any weight
  // escaping to infinity would zero out a supported state.
  Dataset ds;
  ds.n_visible = 3;
  for (std::uint64_t k = 0; k < 8; ++k) ds.states.emplace_back(k, 3);
  ds.states.emplace_back(0b111, 3);
  ds.states.emplace_back(0b111, 3);
  RngStream rng(21);
  RbmParams p = oracle::random_params(3, 2, 0.1, rng);
  for (int it = 0; it < 5000000; ++it) {
    const GradientEstimate g = exact_gradient(p, ds);
    for (std::size_t k = 0; k < p.W.size(); ++k) p.W[k] += 0.5 * g.dW[k];
    for (std::size_t k = 0; k < p.b.size(); ++k) p.b[k] += 0.5 * g.db[k];
    for (std::size_t k = 0; k < p.c.size(); ++k) p.c[k] += 0.5 * g.dc[k];
    if (g.max_abs() < 1e-9) break;
  }
  const GradientEstimate g = exact_gradient(p, ds);
  double norm = 0.0;
  for (double v : g.dW) norm += v * v;
  for (double v : g.db) norm += v * v;
  for (double v : g.dc) norm += v * v;
  CHECK(std::sqrt(norm) <= 1e-6);
}
