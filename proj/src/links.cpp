#include "porank/links.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace porank {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
// Below this point the normal log-c.d.f. switches to its asymptotic series.
constexpr double kNormalTailCut = -30.0;

void require_finite(double t) {
  if (!std::isfinite(t)) throw std::domain_error("link function argument must be finite");
}

// log(1 + e^x) without overflow.
double softplus(double x) {
  if (x > 30.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double normal_cdf(double t) { return 0.5 * std::erfc(-t * kInvSqrt2); }

// log Phi(t) for t <= kNormalTailCut via the Mills-ratio series
// Phi(t) ~ phi(t)/|t| * (1 - 1/t^2 + 3/t^4 - 15/t^6 + 105/t^8 - 945/t^10).
double normal_log_cdf_tail(double t) {
  const double inv2 = 1.0 / (t * t);
  const double series =
      1.0 + inv2 * (-1.0 + inv2 * (3.0 + inv2 * (-15.0 + inv2 * (105.0 + inv2 * -945.0))));
  return -0.5 * t * t - kLogSqrt2Pi - std::log(-t) + std::log(series);
}

}  // namespace

std::string_view to_string(LinkModel m) {
  switch (m) {
    case LinkModel::Uniform: return "uniform";
    case LinkModel::BradleyTerry: return "bradley-terry";
    case LinkModel::ThurstoneMosteller: return "thurstone-mosteller";
  }
  return "unknown";
}

LinkModel parse_link(std::string_view name) {
  for (const auto m : kAllLinks)
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown model '" + std::string(name) +
                              "' (expected uniform, bradley-terry or thurstone-mosteller)");
}

double cdf(LinkModel m, double t) {
  require_finite(t);
  switch (m) {
    case LinkModel::Uniform:
      if (t <= -1.0) return 0.0;
      if (t >= 1.0) return 1.0;
      return 0.5 * (t + 1.0);
    case LinkModel::BradleyTerry: return logistic(t);
    case LinkModel::ThurstoneMosteller: return normal_cdf(t);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double pdf(LinkModel m, double t) {
  require_finite(t);
  switch (m) {
    case LinkModel::Uniform: return std::abs(t) <= 1.0 ? 0.5 : 0.0;
    case LinkModel::BradleyTerry: {
      const double e = std::exp(-std::abs(t));
      return e / ((1.0 + e) * (1.0 + e));
    }
    case LinkModel::ThurstoneMosteller: return kInvSqrt2Pi * std::exp(-0.5 * t * t);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double pdf_prime(LinkModel m, double t) {
  require_finite(t);
  if (m == LinkModel::Uniform) return 0.0;
  return pdf_log_slope(m, t) * pdf(m, t);
}

double log_cdf(LinkModel m, double t) {
  require_finite(t);
  switch (m) {
    case LinkModel::Uniform:
      if (t <= -1.0) return -std::numeric_limits<double>::infinity();
      if (t >= 1.0) return 0.0;
      return std::log(0.5 * (t + 1.0));
    case LinkModel::BradleyTerry: return -softplus(-t);
    case LinkModel::ThurstoneMosteller:
      if (t <= kNormalTailCut) return normal_log_cdf_tail(t);
      if (t > 5.0) return std::log1p(-normal_cdf(-t));
      return std::log(normal_cdf(t));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double log_pdf(LinkModel m, double t) {
  require_finite(t);
  switch (m) {
    case LinkModel::Uniform:
      return std::abs(t) <= 1.0 ? -std::numbers::ln2 : -std::numeric_limits<double>::infinity();
    case LinkModel::BradleyTerry: {
      const double a = std::abs(t);
      return -a - 2.0 * std::log1p(std::exp(-a));
    }
    case LinkModel::ThurstoneMosteller: return -0.5 * t * t - kLogSqrt2Pi;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double pdf_log_slope(LinkModel m, double t) {
  require_finite(t);
  switch (m) {
    case LinkModel::Uniform: return 0.0;
    case LinkModel::BradleyTerry: return -std::tanh(0.5 * t);
    case LinkModel::ThurstoneMosteller: return -t;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace porank
