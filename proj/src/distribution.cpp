#include "multibid/distribution.hpp"

#include "multibid/errors.hpp"
#include "multibid/rng.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace multibid {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

} // namespace

void validate_distribution(const Distribution& dist, const std::string& where)
{
    auto fail = [&](const std::string& what) { throw ConfigError(where + ": " + what); };
    std::visit(overloaded{
                   [&](const Discrete& d) {
                       if (d.support.empty())
                           fail("discrete support is empty");
                       if (d.support.size() != d.probs.size())
                           fail("support and probs differ in length");
                       for (std::size_t k = 0; k < d.support.size(); ++k) {
                           if (!in_unit(d.support[k]))
                               fail("support value outside [0,1]");
                           if (k > 0 && !(d.support[k] > d.support[k - 1]))
                               fail("support not strictly increasing");
                           if (!(d.probs[k] >= 0.0) || !std::isfinite(d.probs[k]))
                               fail("negative probability");
                       }
                       const double total = std::accumulate(d.probs.begin(), d.probs.end(), 0.0);
                       if (std::abs(total - 1.0) > 1e-9) {
                           std::ostringstream os;
                           os << "probs sum " << total << " != 1";
                           fail(os.str());
                       }
                   },
                   [&](const Uniform& u) {
                       if (!in_unit(u.lo) || !in_unit(u.hi) || u.lo > u.hi)
                           fail("uniform needs 0 <= lo <= hi <= 1");
                   },
                   [&](const Beta& b) {
                       if (!(b.alpha > 0.0) || !(b.beta > 0.0) || !std::isfinite(b.alpha) ||
                           !std::isfinite(b.beta))
                           fail("beta parameters must be positive");
                   },
                   [&](const PointMass& p) {
                       if (!in_unit(p.value))
                           fail("point mass outside [0,1]");
                   },
               },
               dist);
}

double mean(const Distribution& dist)
{
    return std::visit(overloaded{
                          [](const Discrete& d) {
                              return std::inner_product(d.support.begin(), d.support.end(),
                                                        d.probs.begin(), 0.0);
                          },
                          [](const Uniform& u) { return 0.5 * (u.lo + u.hi); },
                          [](const Beta& b) { return b.alpha / (b.alpha + b.beta); },
                          [](const PointMass& p) { return p.value; },
                      },
                      dist);
}

double variance(const Distribution& dist)
{
    return std::visit(overloaded{
                          [](const Discrete& d) {
                              const double mu = std::inner_product(d.support.begin(), d.support.end(),
                                                                   d.probs.begin(), 0.0);
                              double v = 0.0;
                              for (std::size_t k = 0; k < d.support.size(); ++k)
                                  v += d.probs[k] * (d.support[k] - mu) * (d.support[k] - mu);
                              return v;
                          },
                          [](const Uniform& u) { return (u.hi - u.lo) * (u.hi - u.lo) / 12.0; },
                          [](const Beta& b) {
                              const double s = b.alpha + b.beta;
                              return b.alpha * b.beta / (s * s * (s + 1.0));
                          },
                          [](const PointMass&) { return 0.0; },
                      },
                      dist);
}

double support_min(const Distribution& dist)
{
    return std::visit(overloaded{
                          [](const Discrete& d) {
                              for (std::size_t k = 0; k < d.support.size(); ++k)
                                  if (d.probs[k] > 0.0)
                                      return d.support[k];
                              return d.support.front();
                          },
                          [](const Uniform& u) { return u.lo; },
                          [](const Beta&) { return 0.0; },
                          [](const PointMass& p) { return p.value; },
                      },
                      dist);
}

double cdf(const Distribution& dist, double x)
{
    return std::visit(overloaded{
                          [x](const Discrete& d) {
                              double acc = 0.0;
                              for (std::size_t k = 0; k < d.support.size() && d.support[k] <= x; ++k)
                                  acc += d.probs[k];
                              return std::min(acc, 1.0);
                          },
                          [x](const Uniform& u) {
                              if (x < u.lo)
                                  return 0.0;
                              if (x >= u.hi)
                                  return 1.0;
                              return (x - u.lo) / (u.hi - u.lo);
                          },
                          [x](const Beta& b) {
                              if (x <= 0.0)
                                  return 0.0;
                              if (x >= 1.0)
                                  return 1.0;
                              return boost::math::ibeta(b.alpha, b.beta, x);
                          },
                          [x](const PointMass& p) { return x >= p.value ? 1.0 : 0.0; },
                      },
                      dist);
}

double partial_mean(const Distribution& dist, double x)
{
    return std::visit(overloaded{
                          [x](const Discrete& d) {
                              double acc = 0.0;
                              for (std::size_t k = 0; k < d.support.size() && d.support[k] <= x; ++k)
                                  acc += d.probs[k] * d.support[k];
                              return acc;
                          },
                          [x](const Uniform& u) {
                              if (x < u.lo)
                                  return 0.0;
                              if (u.hi == u.lo)
                                  return u.lo;
                              const double top = std::min(x, u.hi);
                              return (top * top - u.lo * u.lo) / (2.0 * (u.hi - u.lo));
                          },
                          [x](const Beta& b) {
                              // x f(x; a, b) = a/(a+b) f(x; a+1, b)
                              const double mu = b.alpha / (b.alpha + b.beta);
                              if (x <= 0.0)
                                  return 0.0;
                              if (x >= 1.0)
                                  return mu;
                              return mu * boost::math::ibeta(b.alpha + 1.0, b.beta, x);
                          },
                          [x](const PointMass& p) { return x >= p.value ? p.value : 0.0; },
                      },
                      dist);
}

double sample(const Distribution& dist, SplitMix64& engine)
{
    return std::visit(overloaded{
                          [&](const Discrete& d) {
                              const double u = engine.uniform();
                              double acc = 0.0;
                              for (std::size_t k = 0; k < d.support.size(); ++k) {
                                  acc += d.probs[k];
                                  if (u < acc)
                                      return d.support[k];
                              }
                              // rounding left u above the accumulated mass
                              for (std::size_t k = d.support.size(); k-- > 0;)
                                  if (d.probs[k] > 0.0)
                                      return d.support[k];
                              return d.support.back();
                          },
                          [&](const Uniform& u) { return u.lo + engine.uniform() * (u.hi - u.lo); },
                          [&](const Beta& b) {
                              std::gamma_distribution<double> ga(b.alpha, 1.0);
                              std::gamma_distribution<double> gb(b.beta, 1.0);
                              const double x = ga(engine);
                              const double y = gb(engine);
                              if (x + y <= 0.0)
                                  return b.alpha >= b.beta ? 1.0 : 0.0;
                              return x / (x + y);
                          },
                          [&](const PointMass& p) {
                              (void)engine.uniform();
                              return p.value;
                          },
                      },
                      dist);
}

std::string describe(const Distribution& dist)
{
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const Discrete& d) { os << "discrete(" << d.support.size() << " atoms)"; },
                   [&](const Uniform& u) { os << "uniform(" << u.lo << ", " << u.hi << ")"; },
                   [&](const Beta& b) { os << "beta(" << b.alpha << ", " << b.beta << ")"; },
                   [&](const PointMass& p) { os << "point(" << p.value << ")"; },
               },
               dist);
    return os.str();
}

} // namespace multibid
