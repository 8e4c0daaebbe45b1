#include "bpl/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "bpl/error.hpp"

namespace bpl {

IntegralResult mc_integrate(const IntegrandND& f, const Sampler& sampler, std::size_t n, std::uint64_t seed) {
  if (n < 1000) fail(ErrorCode::InvalidArgument, "Monte Carlo needs at least 1000 samples");
  CounterRng rng(seed);
  // Welford accumulation keeps the variance accurate for large n.
  double mean = 0.0;
  double m2 = 0.0;
  bool hit = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point x = sampler(rng);
    const double v = f(x);
    if (v != 0.0) hit = true;
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  if (!hit) fail(ErrorCode::SupportNotHit, "support not hit: every Monte Carlo sample evaluated to 0");
  const double var = m2 / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n)), "monte-carlo", n, true};
}

IntegralResult mc_integrate(const IntegrandND& f, const Box& box, std::size_t n, std::uint64_t seed) {
  if (!box.finite() || box.empty()) fail(ErrorCode::InvalidArgument, "Monte Carlo box must be finite and nonempty");
  const double vol = box.volume();
  IntegralResult r = mc_integrate(
      [&](PointView x) { return vol * f(x); },
      [&](CounterRng& rng) {
        Point x(box.dim());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(box.axes[i].lo, box.axes[i].hi);
        return x;
      },
      n, seed);
  r.method = "monte-carlo-box";
  return r;
}

PointView ChainSample::point(std::size_t i) const {
  const std::size_t end = i + 1 < offset.size() ? offset[i + 1] : values.size();
  return PointView(values.data() + offset[i], end - offset[i]);
}

double ChainSample::frequency(int which) const {
  if (k.empty()) return 0.0;
  return static_cast<double>(std::count(k.begin(), k.end(), which)) / static_cast<double>(k.size());
}

MeanEstimate batch_means(const std::vector<double>& series, std::size_t batches) {
  if (batches < 2 || series.size() < 2 * batches) fail(ErrorCode::InvalidArgument, "series too short for batch means");
  const std::size_t len = series.size() / batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < len; ++i) means[b] += series[b * len + i];
    means[b] /= static_cast<double>(len);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(batches);
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= static_cast<double>(batches - 1);
  return {mean, std::sqrt(var / static_cast<double>(batches))};
}

namespace {

class StuckWatch {
 public:
  void step(bool accepted) {
    window_accepts_ += accepted ? 1 : 0;
    if (++window_steps_ == kStuckWindow) {
      if (window_accepts_ == 0) fail(ErrorCode::StuckChain, "stuck chain: no move accepted in 10000 steps");
      window_steps_ = 0;
      window_accepts_ = 0;
    }
  }

 private:
  std::size_t window_steps_ = 0;
  std::size_t window_accepts_ = 0;
};

void record(ChainSample& chain, int k, const Point& x) {
  chain.k.push_back(k);
  chain.offset.push_back(chain.values.size());
  chain.values.insert(chain.values.end(), x.begin(), x.end());
}

bool accept(CounterRng& rng, double alpha) { return alpha >= 1.0 || rng.uniform() < alpha; }

}  // namespace

ChainSample metropolis(const IntegrandND& target, Point init, std::size_t steps, double scale, std::uint64_t seed) {
  if (!(scale > 0.0)) fail(ErrorCode::InvalidArgument, "proposal scale must be positive");
  double current = target(init);
  if (!(current > 0.0)) fail(ErrorCode::ZeroProbabilityInit, "zero-probability initial state");
  CounterRng rng(seed);
  ChainSample chain;
  chain.seed = seed;
  chain.k.reserve(steps);
  chain.offset.reserve(steps);
  chain.values.reserve(steps * init.size());
  MoveStats& stats = chain.moves["random-walk"];
  StuckWatch watch;
  Point x = std::move(init);
  Point y(x.size());
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + scale * rng.normal();
    const double proposed = target(y);
    ++stats.proposed;
    const bool ok = proposed > 0.0 && accept(rng, proposed / current);
    if (ok) {
      x.swap(y);
      current = proposed;
      ++stats.accepted;
    }
    watch.step(ok);
    record(chain, 1, x);
  }
  return chain;
}

double rj_birth_acceptance(double post_from, double post_to, double extra_prior, double p_k_from, double p_k_to,
                           double move_ratio) {
  if (post_to <= 0.0 || p_k_to <= 0.0) return 0.0;
  return std::min(1.0, post_to * p_k_to * move_ratio / (post_from * p_k_from * extra_prior));
}

double rj_death_acceptance(double post_from, double post_to, double extra_prior, double p_k_from, double p_k_to,
                           double move_ratio) {
  if (post_to <= 0.0 || p_k_to <= 0.0) return 0.0;
  return std::min(1.0, post_to * p_k_to * extra_prior * move_ratio / (post_from * p_k_from));
}

ChainSample rj_mcmc(const RjTarget& t, std::size_t steps, std::uint64_t seed) {
  if (t.init_k != 1 && t.init_k != 2) fail(ErrorCode::InvalidArgument, "rj chain supports k in {1, 2}");
  if (t.scale.size() != 2) fail(ErrorCode::InvalidArgument, "rj chain needs one proposal scale per k");
  if (!(t.jump_probability > 0.0 && t.jump_probability < 1.0)) {
    fail(ErrorCode::InvalidArgument, "jump probability must lie in (0, 1)");
  }
  const std::size_t expected = t.init_k == 1 ? t.dim1 : t.dim1 + 1;
  if (t.init.size() != expected) fail(ErrorCode::DimensionMismatch, "initial state has the wrong dimension");
  const double p_k[2] = {t.p_k1, t.p_k2};
  const IntegrandND* post[2] = {&t.posterior1, &t.posterior2};

  int k = t.init_k;
  Point x = t.init;
  double current = (*post[k - 1])(x);
  if (!(current > 0.0) || !(p_k[k - 1] > 0.0)) fail(ErrorCode::ZeroProbabilityInit, "zero-probability initial state");

  CounterRng rng(seed);
  ChainSample chain;
  chain.seed = seed;
  chain.k.reserve(steps);
  chain.offset.reserve(steps);
  chain.values.reserve(steps * (t.dim1 + 1));
  MoveStats& births = chain.moves["birth"];
  MoveStats& deaths = chain.moves["death"];
  MoveStats* within[2] = {&chain.moves["within-k1"], &chain.moves["within-k2"]};
  StuckWatch watch;
  Point y;
  for (std::size_t s = 0; s < steps; ++s) {
    bool ok = false;
    if (rng.uniform() < t.jump_probability) {
      if (k == 1) {
        const double extra = t.draw_extra(rng);
        y = x;
        y.push_back(extra);
        const double proposed = t.posterior2(y);
        const double alpha = rj_birth_acceptance(current, proposed, t.extra_prior(extra), p_k[0], p_k[1]);
        ++births.proposed;
        ok = alpha > 0.0 && accept(rng, alpha);
        if (ok) {
          ++births.accepted;
          x.swap(y);
          current = proposed;
          k = 2;
        }
      } else {
        y.assign(x.begin(), x.end() - 1);
        const double proposed = t.posterior1(y);
        const double alpha = rj_death_acceptance(current, proposed, t.extra_prior(x.back()), p_k[1], p_k[0]);
        ++deaths.proposed;
        ok = alpha > 0.0 && accept(rng, alpha);
        if (ok) {
          ++deaths.accepted;
          x.swap(y);
          current = proposed;
          k = 1;
        }
      }
    } else {
      y = x;
      for (double& v : y) v += t.scale[k - 1] * rng.normal();
      const double proposed = (*post[k - 1])(y);
      ++within[k - 1]->proposed;
      ok = proposed > 0.0 && accept(rng, proposed / current);
      if (ok) {
        ++within[k - 1]->accepted;
        x.swap(y);
        current = proposed;
      }
    }
    watch.step(ok);
    record(chain, k, x);
  }
  return chain;
}

std::vector<std::vector<double>> rj_toy_transition(const RjToy& toy) {
  const double r[2] = {toy.extra_y1, 1.0 - toy.extra_y1};
  const double like2[2] = {toy.like2_y1, toy.like2_y2};
  const double pk1 = toy.p_k1;
  const double pk2 = 1.0 - toy.p_k1;
  const double j = toy.jump_probability;
  std::vector<std::vector<double>> P(3, std::vector<double>(3, 0.0));
  for (int i = 0; i < 2; ++i) {
    P[0][i + 1] = j * r[i] * rj_birth_acceptance(toy.like1, like2[i] * r[i], r[i], pk1, pk2);
    P[i + 1][0] = j * rj_death_acceptance(like2[i] * r[i], toy.like1, r[i], pk2, pk1);
    // Within k = 2 the only proposal is the other extra value.
    const double from = like2[i] * r[i];
    const double to = like2[1 - i] * r[1 - i];
    P[i + 1][2 - i] = (1.0 - j) * std::min(1.0, to / from);
  }
  for (int s = 0; s < 3; ++s) {
    double out = 0.0;
    for (int t = 0; t < 3; ++t) {
      if (t != s) out += P[s][t];
    }
    P[s][s] = 1.0 - out;
  }
  return P;
}

std::vector<double> rj_toy_stationary(const RjToy& toy) {
  std::vector<double> pi{toy.p_k1 * toy.like1, (1.0 - toy.p_k1) * toy.like2_y1 * toy.extra_y1,
                         (1.0 - toy.p_k1) * toy.like2_y2 * (1.0 - toy.extra_y1)};
  const double total = pi[0] + pi[1] + pi[2];
  for (double& v : pi) v /= total;
  return pi;
}

}  // namespace bpl
