#include "rbm/model.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace rbm {

bool RbmParams::all_finite() const {
  for (double v : W)
    if (!std::isfinite(v)) return false;
  for (double v : b)
    if (!std::isfinite(v)) return false;
  for (double v : c)
    if (!std::isfinite(v)) return false;
  return true;
}

double RbmParams::max_abs_weight() const {
  double m = 0.0;
  for (double v : W) m = std::max(m, std::abs(v));
  return m;
}

double sigmoid(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 36.0) return z;             // log1p(e^-z) below double epsilon
  if (z < -745.0) return 0.0;         // e^z underflows
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

namespace {

void check_visible(const RbmParams& p, const BinaryState& x,
                   const char* where) {
  if (x.size() != p.n_visible)
    throw DimensionError(std::string(where) + ": visible dimension mismatch");
}

void check_hidden(const RbmParams& p, const BinaryState& h,
                  const char* where) {
  if (h.size() != p.n_hidden)
    throw DimensionError(std::string(where) + ": hidden dimension mismatch");
}

}  // namespace

double energy(const RbmParams& params, const BinaryState& x,
              const BinaryState& h) {
  check_visible(params, x, "energy");
  check_hidden(params, h, "energy");
  double e = 0.0;
  for (std::size_t i = 0; i < params.n_visible; ++i)
    if (x.bit(i)) e -= params.b[i];
  for (std::size_t j = 0; j < params.n_hidden; ++j) {
    if (!h.bit(j)) continue;
    e -= params.c[j];
    const double* row = params.W.data() + j * params.n_visible;
    for (std::size_t i = 0; i < params.n_visible; ++i)
      if (x.bit(i)) e -= row[i];
  }
  return e;
}

double free_energy_unnorm(const RbmParams& params, const BinaryState& x) {
  check_visible(params, x, "free_energy_unnorm");
  double f = 0.0;
  for (std::uint64_t m = x.key(); m; m &= m - 1)
    f += params.b[std::countr_zero(m)];
  for (std::size_t j = 0; j < params.n_hidden; ++j) {
    double a = params.c[j];
    const double* row = params.W.data() + j * params.n_visible;
    for (std::uint64_t m = x.key(); m; m &= m - 1)
      a += row[std::countr_zero(m)];
    f += softplus(a);
  }
  return f;
}

Vec hidden_activation_probs(const RbmParams& params, const BinaryState& x) {
  check_visible(params, x, "hidden_activation_probs");
  Vec p(params.n_hidden);
  for (std::size_t j = 0; j < params.n_hidden; ++j) {
    double a = params.c[j];
    const double* row = params.W.data() + j * params.n_visible;
    for (std::uint64_t m = x.key(); m; m &= m - 1)
      a += row[std::countr_zero(m)];
    p[j] = sigmoid(a);
  }
  return p;
}

Vec visible_activation_probs(const RbmParams& params, const BinaryState& h) {
  check_hidden(params, h, "visible_activation_probs");
  Vec a(params.b);
  for (std::size_t j = 0; j < params.n_hidden; ++j) {
    if (!h.bit(j)) continue;
    const double* row = params.W.data() + j * params.n_visible;
    for (std::size_t i = 0; i < params.n_visible; ++i) a[i] += row[i];
  }
  for (double& v : a) v = sigmoid(v);
  return a;
}

Vec visible_activation_probs(const RbmParams& params, const Vec& h) {
  if (h.size() != params.n_hidden)
    throw DimensionError("visible_activation_probs: hidden dimension mismatch");
  Vec a(params.b);
  for (std::size_t j = 0; j < params.n_hidden; ++j) {
    const double hj = h[j];
    if (hj == 0.0) continue;
    const double* row = params.W.data() + j * params.n_visible;
    for (std::size_t i = 0; i < params.n_visible; ++i) a[i] += hj * row[i];
  }
  for (double& v : a) v = sigmoid(v);
  return a;
}

BinaryState sample_bernoulli(const Vec& probs, RngStream& rng) {
  BinaryState s(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    if (rng.bernoulli(probs[i])) s.set_bit(i, true);
  return s;
}

GibbsResult gibbs_chain(const RbmParams& params, const BinaryState& x0,
                        std::size_t n, RngStream& rng) {
  check_visible(params, x0, "gibbs_chain");
  if (n < 1) throw std::invalid_argument("gibbs_chain: n must be >= 1");
  GibbsResult r;
  r.h1_probs = hidden_activation_probs(params, x0);
  BinaryState h = sample_bernoulli(r.h1_probs, rng);
  BinaryState x = sample_bernoulli(visible_activation_probs(params, h), rng);
  for (std::size_t k = 1; k < n; ++k) {
    h = sample_bernoulli(hidden_activation_probs(params, x), rng);
    x = sample_bernoulli(visible_activation_probs(params, h), rng);
  }
  r.hn_probs = hidden_activation_probs(params, x);
  r.x_n = x;
  return r;
}

}  // namespace rbm
