#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kinalloc/best_response.hpp"
#include "kinalloc/family_model.hpp"

namespace kinalloc {

inline constexpr double kKktTolerance = 1e-8;
inline constexpr double kSupportTolerance = 1e-9;
inline constexpr double kArgmaxTolerance = 1e-7;

struct KktResiduals {
  double stationarity = 0.0;
  double complementarity = 0.0;
  double budget = 0.0;
  double nonnegativity = 0.0;
  double mu_sign = 0.0;

  double worst() const;
};

/// Multipliers and residuals of the first-order conditions of every source's
/// budget problem. lambda(s) is the largest adjusted marginal of s and
/// mu(s,t) = lambda(s) - r(s,t) f'_t(incoming_t). Infinite marginals show up
/// as +inf entries.
struct KktCertificate {
  std::vector<double> lambda;
  Matrix mu;
  KktResiduals residuals;
  double tolerance = kKktTolerance;
  bool certified = false;
};

/// Builds the certificate for x. Because each source's problem is a concave
/// maximization over a polytope, a certified profile is a Nash equilibrium
/// and every Nash equilibrium certifies. Throws std::invalid_argument if x
/// is not an admissible profile.
KktCertificate kkt_verify(const FamilyGame& game, const AllocationProfile& x,
                          double kkt_tol = kKktTolerance);

struct Classification {
  std::vector<std::vector<std::size_t>> beneficiaries;  // per source
  std::vector<std::size_t> selfish;
  std::vector<std::size_t> altruistic;
  std::vector<std::size_t> totally_altruistic;
  std::vector<std::vector<std::size_t>> argmax_adjusted;  // per source
  std::vector<std::size_t> argmax_plain;
  double support_tol = kSupportTolerance;
  double argmax_tol = kArgmaxTolerance;
};

Classification classify(const FamilyGame& game, const AllocationProfile& x,
                        double support_tol = kSupportTolerance,
                        double argmax_tol = kArgmaxTolerance);

enum class SolveMode { Simultaneous, RoundRobin };

std::string_view to_string(SolveMode mode);
SolveMode solve_mode_from_string(std::string_view name);

struct SolveOptions {
  SolveMode mode = SolveMode::RoundRobin;
  double damping = 0.5;
  int max_iterations = 10000;
  double kkt_tol = kKktTolerance;
  double support_tol = kSupportTolerance;
  double argmax_tol = kArgmaxTolerance;
  /// Starting point; defaults to the spend-on-self profile.
  std::optional<AllocationProfile> initial;
};

struct SolverDiagnostics {
  SolveMode mode = SolveMode::Simultaneous;
  int iterations = 0;
  double initial_damping = 0.0;
  double final_damping = 0.0;
  double displacement = 0.0;  // max |BR(x) - x| on the last iteration
  int degenerate_responses = 0;
  bool converged = false;
};

struct EquilibriumReport {
  AllocationProfile profile;
  std::vector<double> incoming;
  std::vector<double> inclusive_fitness;
  KktCertificate certificate;
  Classification classification;
  SolverDiagnostics diagnostics;
};

/// Assembles a report for an arbitrary admissible profile (no solving).
EquilibriumReport make_report(const FamilyGame& game, AllocationProfile x,
                              const SolveOptions& options = {});

/// Best-response iteration from the spend-on-self profile.
///
/// Round robin (default): sources replaced by their exact best response in
/// index order, one sweep per iteration. Simultaneous: x <- (1-g) x + g BR(x),
/// g halved (down to 1/64) whenever the complementarity residual grows.
///
/// A profile is accepted once it certifies and every invested-in target sits
/// in its source's highest-adjusted-marginal set at the argmax tolerance. The
/// solver then sweeps on until complementarity drops to kkt_tol / 100, for at
/// most as many iterations again as the first acceptance took (at least 50),
/// and returns the best accepted iterate. Running out
/// of iterations before any acceptance is reported, not thrown.
EquilibriumReport solve_nash(const FamilyGame& game, const SolveOptions& options = {});

enum class InclusionStatus { Holds, Violated, HypothesisNotMet };

std::string_view to_string(InclusionStatus status);

struct InclusionWitness {
  std::size_t source = 0;
  std::size_t target = 0;
  std::string detail;
};

struct PropertyReport {
  InclusionStatus beneficiaries_in_argmax = InclusionStatus::Holds;
  InclusionStatus argmax_plain_selfish = InclusionStatus::Holds;
  std::vector<InclusionWitness> witnesses;
  std::string hypothesis_note;
};

/// Checks that (i) every source only invests in targets of highest adjusted
/// marginal and (ii), when every marginal is positive and every individual is
/// strictly more related to itself than to anyone else, that the individuals
/// with highest plain marginal are selfish.
PropertyReport check_support_inclusions(const FamilyGame& game, const EquilibriumReport& report);

}  // namespace kinalloc
