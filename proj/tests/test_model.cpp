#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rbm/exact.hpp"
#include "rbm/model.hpp"

using namespace rbm;

TEST_CASE("energy: zero parameters give zero energy") {
  RbmParams p(4, 3);
  CHECK(energy(p, BinaryState(0b1010, 4), BinaryState(0b101, 3)) == 0.0);
  CHECK(energy(p, BinaryState(0, 4), BinaryState(0, 3)) == 0.0);
}

TEST_CASE("energy: only visible bias term survives") {
  RbmParams p(2, 3);
  p.b = {1.0, -1.0};
  const BinaryState x(0b01, 2);  // x = (1, 0)
  for (std::uint64_t hk = 0; hk < 8; ++hk)
    CHECK(energy(p, x, BinaryState(hk, 3)) == doctest::Approx(-1.0));
}

TEST_CASE("energy: matches naive triple-loop evaluation") {
  RngStream rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const RbmParams p = oracle::random_params(4, 3, 1.0, rng);
    const BinaryState x = oracle::random_state(4, rng);
    const BinaryState h = oracle::random_state(3, rng);
    CHECK(energy(p, x, h) ==
          doctest::Approx(oracle::energy_naive(p, x, h)).epsilon(1e-12));
  }
}

TEST_CASE("energy: dimension mismatch throws") {
  RbmParams p(4, 3);
  CHECK_THROWS_AS(energy(p, BinaryState(3), BinaryState(3)), DimensionError);
  CHECK_THROWS_AS(energy(p, BinaryState(4), BinaryState(4)), DimensionError);
}

TEST_CASE("free_energy_unnorm: zero parameters give n_h log 2") {
  RbmParams p(5, 3);
  CHECK(free_energy_unnorm(p, BinaryState(0b10110, 5)) ==
        doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("free_energy_unnorm: bias-only model") {
  RbmParams p(2, 1);
  p.b = {1.0, 1.0};
  CHECK(free_energy_unnorm(p, BinaryState(0b11, 2)) ==
        doctest::Approx(2.0 + std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("free_energy_unnorm: matches hidden-state enumeration") {
  RngStream rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const RbmParams p = oracle::random_params(4, 3, 1.5, rng);
    const BinaryState x = oracle::random_state(4, rng);
    const double expected = oracle::free_energy_enum(p, x);
    CHECK(free_energy_unnorm(p, x) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("free_energy_unnorm: enumeration identity up to n_hidden = 12") {
  RngStream rng(13);
  const RbmParams p = oracle::random_params(3, 12, 0.7, rng);
  for (std::uint64_t xk = 0; xk < 8; ++xk) {
    const BinaryState x(xk, 3);
    const double expected = oracle::free_energy_enum(p, x);
    CHECK(std::abs(free_energy_unnorm(p, x) - expected) <=
          1e-10 * std::abs(expected));
  }
}

TEST_CASE("hidden_activation_probs: zero parameters give 0.5") {
  RbmParams p(4, 3);
  for (double v : hidden_activation_probs(p, BinaryState(0b1001, 4)))
    CHECK(v == 0.5);
}

TEST_CASE("hidden_activation_probs: saturates without overflow") {
  RbmParams p(2, 2);
  p.c = {40.0, -40.0};
  const Vec v = hidden_activation_probs(p, BinaryState(0, 2));
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("conditionals factorize: product of unit masses = joint conditional") {
  RngStream rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    const RbmParams p = oracle::random_params(4, 3, 1.0, rng);
    const BinaryState x = oracle::random_state(4, rng);
    const Vec ph = hidden_activation_probs(p, x);
    for (std::uint64_t hk = 0; hk < 8; ++hk) {
      const BinaryState h(hk, 3);
      double mass = 1.0;
      for (std::size_t j = 0; j < 3; ++j)
        mass *= h.bit(j) ? ph[j] : 1.0 - ph[j];
      CHECK(mass ==
            doctest::Approx(oracle::conditional_hidden_mass(p, x, h))
                .epsilon(1e-10));
    }
    // Visible side, roles swapped.
    const BinaryState h = oracle::random_state(3, rng);
    const Vec px = visible_activation_probs(p, h);
    for (std::uint64_t xk = 0; xk < 16; ++xk) {
      const BinaryState xc(xk, 4);
      double mass = 1.0;
      for (std::size_t i = 0; i < 4; ++i)
        mass *= xc.bit(i) ? px[i] : 1.0 - px[i];
      CHECK(mass ==
            doctest::Approx(oracle::conditional_visible_mass(p, xc, h))
                .epsilon(1e-10));
    }
  }
}

TEST_CASE("visible_activation_probs: saturated negative bias") {
  RbmParams p(2, 2);
  p.b = {-40.0, 0.0};
  const Vec v = visible_activation_probs(p, BinaryState(0, 2));
  CHECK(v[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(v[1] == 0.5);
}

TEST_CASE("sigmoid and softplus stay finite over [-700, 700]") {
  for (double z = -700.0; z <= 700.0; z += 13.7) {
    CHECK(std::isfinite(sigmoid(z)));
    CHECK(std::isfinite(softplus(z)));
    CHECK(softplus(z) >= 0.0);
  }
  CHECK(softplus(700.0) == doctest::Approx(700.0));
  CHECK(sigmoid(700.0) == 1.0);
  CHECK(sigmoid(-700.0) == doctest::Approx(0.0));
}

TEST_CASE("gibbs_chain: uniform model gives unbiased bits") {
  RbmParams p(4, 3);
  RngStream rng(23);
  const BinaryState x0(0b1111, 4);
  double mean[4] = {0, 0, 0, 0};
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    const GibbsResult r = gibbs_chain(p, x0, 1, rng);
    for (std::size_t i = 0; i < 4; ++i) mean[i] += r.x_n.bit(i) ? 1.0 : 0.0;
  }
  for (double m : mean) CHECK(std::abs(m / draws - 0.5) < 0.01);
}

TEST_CASE("gibbs_chain: bit-reproducible for a fixed seed") {
  RngStream rng(31);
  const RbmParams p = oracle::random_params(6, 4, 0.8, rng);
  const BinaryState x0 = oracle::random_state(6, rng);
  RngStream a(99), b(99);
  const GibbsResult ra = gibbs_chain(p, x0, 7, a);
  const GibbsResult rb = gibbs_chain(p, x0, 7, b);
  CHECK(ra.x_n == rb.x_n);
  CHECK(ra.h1_probs == rb.h1_probs);
  CHECK(ra.hn_probs == rb.hn_probs);
}

TEST_CASE("gibbs_chain: long chain matches exact marginal on a peaked model") {
  // Strong visible biases concentrate mass on one state.
  RbmParams p(4, 2);
  const BinaryState target(0b0110, 4);
  for (std::size_t i = 0; i < 4; ++i) p.b[i] = target.bit(i) ? 4.0 : -4.0;

  Dataset full;
  full.n_visible = 4;
  for (std::uint64_t k = 0; k < 16; ++k) full.states.emplace_back(k, 4);
  const ExactEval ev = exact_eval(p, full);
  const double p_target = std::exp(ev.log_px.at(target));

  RngStream rng(41);
  const int draws = 20000;
  int hits = 0;
  for (int k = 0; k < draws; ++k) {
    const BinaryState x0 = oracle::random_state(4, rng);
    if (gibbs_chain(p, x0, 10, rng).x_n == target) ++hits;
  }
  const double freq = static_cast<double>(hits) / draws;
  const double sigma = std::sqrt(p_target * (1.0 - p_target) / draws);
  CHECK(std::abs(freq - p_target) <= 3.0 * sigma);
}
