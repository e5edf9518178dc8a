#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace porank {

/// Noise distribution of the comparison model: Phi is the c.d.f. of the
/// additive noise on the score difference.
enum class LinkModel { Uniform, BradleyTerry, ThurstoneMosteller };

inline constexpr LinkModel kAllLinks[] = {LinkModel::Uniform, LinkModel::BradleyTerry,
                                          LinkModel::ThurstoneMosteller};

/// "uniform", "bradley-terry" or "thurstone-mosteller".
std::string_view to_string(LinkModel m);
/// Inverse of to_string; throws std::invalid_argument on unknown names.
LinkModel parse_link(std::string_view name);

/// Phi(t). Uniform saturates at 0 below -1 and at 1 above +1.
double cdf(LinkModel m, double t);
/// phi(t) = Phi'(t).
double pdf(LinkModel m, double t);
/// phi'(t); zero everywhere for Uniform.
double pdf_prime(LinkModel m, double t);

// Log-domain helpers for the likelihood. These stay finite deep in the
// tails where cdf() underflows. log_cdf and log_pdf return -inf where the
// value is exactly zero (Uniform outside its support).
double log_cdf(LinkModel m, double t);
double log_pdf(LinkModel m, double t);
/// phi'(t) / phi(t), the log-density slope; 0 for Uniform.
double pdf_log_slope(LinkModel m, double t);

}  // namespace porank
