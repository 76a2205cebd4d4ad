#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace kinalloc {

/// A real number that may also be +infinity, with the infinity carried as a
/// flag so it never leaks into arithmetic by accident.
struct ExtendedReal {
  double value = 0.0;
  bool infinite = false;

  static constexpr ExtendedReal finite(double v) { return {v, false}; }
  static constexpr ExtendedReal infinity() { return {0.0, true}; }

  bool is_finite() const { return !infinite; }

  /// Plain double view; +inf when the flag is set.
  double as_double() const {
    return infinite ? std::numeric_limits<double>::infinity() : value;
  }

  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
  }
  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.value == b.value;
  }
};

enum class FitnessKind { Log, Power, SatExp, Linear };

std::string_view to_string(FitnessKind kind);
/// Case-insensitive; throws std::invalid_argument on an unknown name.
FitnessKind fitness_kind_from_string(std::string_view name);

/// Concave nondecreasing personal-fitness curve of the total investment a
/// target receives. Every kind satisfies f(0) = 0.
///
///   Log     f(x) = w ln(1 + x/c)          c > 0
///   Power   f(x) = w ((x+c)^p - c^p)      c >= 0, 0 < p < 1
///   SatExp  f(x) = w (1 - exp(-x/c))      c > 0
///   Linear  f(x) = w x
class FitnessFunction {
 public:
  FitnessFunction() = default;

  static FitnessFunction log(double w, double c) { return {FitnessKind::Log, w, c, 0.0}; }
  static FitnessFunction power(double w, double c, double p) { return {FitnessKind::Power, w, c, p}; }
  static FitnessFunction sat_exp(double w, double c) { return {FitnessKind::SatExp, w, c, 0.0}; }
  static FitnessFunction linear(double w) { return {FitnessKind::Linear, w, 0.0, 0.0}; }

  FitnessKind kind() const { return kind_; }
  double weight() const { return weight_; }
  double scale() const { return scale_; }
  double exponent() const { return exponent_; }

  /// Parameter problems, empty when the curve is well formed.
  std::vector<std::string> parameter_errors() const;

  /// f(x) for x >= 0.
  double value(double x) const;

  /// f'(x) for x >= 0. Infinite only for Power with c = 0 at x = 0.
  /// Throws std::domain_error for negative x.
  ExtendedReal marginal(double x) const;

  /// Generalized inverse of the marginal: inf{x >= 0 : f'(x) <= lambda}.
  /// Returns 0 when lambda >= f'(0). For Linear the set is empty when
  /// lambda < w, reported as infinity (unbounded demand).
  /// Throws std::domain_error for lambda <= 0.
  ExtendedReal marginal_inverse(double lambda) const;

  /// True when f' is strictly decreasing, i.e. every kind but Linear.
  bool strictly_concave() const { return kind_ != FitnessKind::Linear; }

  friend bool operator==(const FitnessFunction&, const FitnessFunction&) = default;

 private:
  FitnessFunction(FitnessKind kind, double w, double c, double p)
      : kind_(kind), weight_(w), scale_(c), exponent_(p) {}

  FitnessKind kind_ = FitnessKind::Linear;
  double weight_ = 1.0;
  double scale_ = 0.0;
  double exponent_ = 0.0;
};

}  // namespace kinalloc
