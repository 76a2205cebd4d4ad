#include "kinalloc/fitness.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace kinalloc {

std::string_view to_string(FitnessKind kind) {
  switch (kind) {
    case FitnessKind::Log: return "log";
    case FitnessKind::Power: return "power";
    case FitnessKind::SatExp: return "satexp";
    case FitnessKind::Linear: return "linear";
  }
  return "unknown";
}

FitnessKind fitness_kind_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "log") return FitnessKind::Log;
  if (lower == "power") return FitnessKind::Power;
  if (lower == "satexp" || lower == "sat_exp") return FitnessKind::SatExp;
  if (lower == "linear") return FitnessKind::Linear;
  throw std::invalid_argument("unknown fitness kind '" + std::string(name) + "'");
}

std::vector<std::string> FitnessFunction::parameter_errors() const {
  std::vector<std::string> errors;
  if (!(std::isfinite(weight_) && weight_ > 0.0)) errors.emplace_back("weight w must be positive");
  switch (kind_) {
    case FitnessKind::Log:
    case FitnessKind::SatExp:
      if (!(std::isfinite(scale_) && scale_ > 0.0)) errors.emplace_back("scale c must be positive");
      break;
    case FitnessKind::Power:
      if (!(std::isfinite(scale_) && scale_ >= 0.0)) errors.emplace_back("scale c must be nonnegative");
      if (!(exponent_ > 0.0 && exponent_ < 1.0)) errors.emplace_back("exponent p must lie in (0,1)");
      break;
    case FitnessKind::Linear:
      break;
  }
  return errors;
}

double FitnessFunction::value(double x) const {
  if (x < 0.0) throw std::domain_error("fitness evaluated at negative investment");
  switch (kind_) {
    case FitnessKind::Log: return weight_ * std::log1p(x / scale_);
    case FitnessKind::Power: return weight_ * (std::pow(x + scale_, exponent_) - std::pow(scale_, exponent_));
    case FitnessKind::SatExp: return -weight_ * std::expm1(-x / scale_);
    case FitnessKind::Linear: return weight_ * x;
  }
  return 0.0;
}

ExtendedReal FitnessFunction::marginal(double x) const {
  if (x < 0.0) throw std::domain_error("marginal evaluated at negative investment");
  switch (kind_) {
    case FitnessKind::Log:
      return ExtendedReal::finite(weight_ / (scale_ + x));
    case FitnessKind::Power: {
      const double base = x + scale_;
      if (base == 0.0) return ExtendedReal::infinity();
      return ExtendedReal::finite(weight_ * exponent_ * std::pow(base, exponent_ - 1.0));
    }
    case FitnessKind::SatExp:
      return ExtendedReal::finite(weight_ / scale_ * std::exp(-x / scale_));
    case FitnessKind::Linear:
      return ExtendedReal::finite(weight_);
  }
  return ExtendedReal::finite(0.0);
}

ExtendedReal FitnessFunction::marginal_inverse(double lambda) const {
  if (!(lambda > 0.0)) throw std::domain_error("marginal inverse needs a positive level");
  switch (kind_) {
    case FitnessKind::Log:
      return ExtendedReal::finite(std::max(0.0, weight_ / lambda - scale_));
    case FitnessKind::Power: {
      // w p (x+c)^(p-1) = lambda
      const double base = std::pow(lambda / (weight_ * exponent_), 1.0 / (exponent_ - 1.0));
      return ExtendedReal::finite(std::max(0.0, base - scale_));
    }
    case FitnessKind::SatExp: {
      const double ratio = lambda * scale_ / weight_;
      if (ratio >= 1.0) return ExtendedReal::finite(0.0);
      return ExtendedReal::finite(-scale_ * std::log(ratio));
    }
    case FitnessKind::Linear:
      if (lambda >= weight_) return ExtendedReal::finite(0.0);
      return ExtendedReal::infinity();
  }
  return ExtendedReal::finite(0.0);
}

}  // namespace kinalloc
