#include "kinalloc/equilibrium.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace kinalloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Adjusted marginals of every (source, target) pair as plain doubles (+inf
// allowed).
Matrix adjusted_marginal_matrix(const FamilyGame& game, std::span<const double> incoming) {
  const std::size_t n = game.size();
  Matrix a(n, n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto row = adjusted_marginal(game, s, incoming);
    for (std::size_t t = 0; t < n; ++t) a(s, t) = row[t].as_double();
  }
  return a;
}

bool in_argmax(double value, double best, double tol) {
  if (std::isinf(best)) return std::isinf(value);
  return value >= best - tol * std::abs(best);
}

// True when every investment above the support tolerance goes to a target
// whose adjusted marginal is within the argmax tolerance of the source's
// multiplier. The absolute complementarity residual cannot guarantee this
// for small multipliers, so the solver keeps iterating until it holds.
constexpr double kPolishFactor = 1e-2;
constexpr int kMinPolishSweeps = 50;

bool support_resolved(const FamilyGame& game, const AllocationProfile& x,
                      const KktCertificate& cert, const SolveOptions& options) {
  const std::size_t n = game.size();
  for (std::size_t s = 0; s < n; ++s) {
    const double lambda = cert.lambda[s];
    if (std::isinf(lambda)) return false;
    for (std::size_t t = 0; t < n; ++t) {
      if (x(s, t) > options.support_tol && cert.mu(s, t) > options.argmax_tol * lambda) return false;
    }
  }
  return true;
}

}  // namespace

double KktResiduals::worst() const {
  return std::max({stationarity, complementarity, budget, nonnegativity, mu_sign});
}

KktCertificate kkt_verify(const FamilyGame& game, const AllocationProfile& x, double kkt_tol) {
  const auto feasibility = validate_profile(game, x);
  if (!feasibility.ok())
    throw std::invalid_argument("cannot certify an inadmissible profile: " + feasibility.to_string());

  const std::size_t n = game.size();
  const auto incoming = incoming_investment(x);
  const Matrix a = adjusted_marginal_matrix(game, incoming);

  KktCertificate cert;
  cert.tolerance = kkt_tol;
  cert.lambda.assign(n, 0.0);
  cert.mu = Matrix(n, n);
  auto& res = cert.residuals;

  for (std::size_t s = 0; s < n; ++s) {
    double lambda = 0.0;
    for (std::size_t t = 0; t < n; ++t) lambda = std::max(lambda, a(s, t));
    cert.lambda[s] = lambda;

    double spent = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double adj = a(s, t);
      const double xst = x(s, t);
      spent += xst;
      double mu = 0.0;
      if (std::isinf(lambda)) {
        mu = std::isinf(adj) ? 0.0 : kInf;
      } else {
        mu = lambda - adj;
        res.stationarity = std::max(res.stationarity, std::abs(adj - lambda + mu));
      }
      cert.mu(s, t) = mu;
      res.mu_sign = std::max(res.mu_sign, -mu);
      res.nonnegativity = std::max(res.nonnegativity, -xst);
      if (xst > 0.0) res.complementarity = std::max(res.complementarity, mu * xst);
    }
    res.budget = std::max(res.budget, std::abs(spent - game.budget(s)));
  }
  cert.certified = res.worst() <= kkt_tol;
  return cert;
}

Classification classify(const FamilyGame& game, const AllocationProfile& x, double support_tol,
                        double argmax_tol) {
  const std::size_t n = game.size();
  if (x.rows() != n || x.cols() != n)
    throw std::invalid_argument("allocation profile dimensions do not match the game");
  Classification c;
  c.support_tol = support_tol;
  c.argmax_tol = argmax_tol;
  c.beneficiaries.resize(n);
  c.argmax_adjusted.resize(n);

  for (std::size_t s = 0; s < n; ++s) {
    bool selfish = true;
    for (std::size_t t = 0; t < n; ++t) {
      if (x(s, t) > support_tol) {
        c.beneficiaries[s].push_back(t);
        if (t != s) selfish = false;
      }
    }
    (selfish ? c.selfish : c.altruistic).push_back(s);
    if (x(s, s) <= support_tol) c.totally_altruistic.push_back(s);
  }

  const auto incoming = incoming_investment(x);
  const Matrix a = adjusted_marginal_matrix(game, incoming);
  for (std::size_t s = 0; s < n; ++s) {
    double best = 0.0;
    for (std::size_t t = 0; t < n; ++t) best = std::max(best, a(s, t));
    for (std::size_t t = 0; t < n; ++t)
      if (in_argmax(a(s, t), best, argmax_tol)) c.argmax_adjusted[s].push_back(t);
  }

  std::vector<double> plain(n);
  double best_plain = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    plain[i] = game.fitness(i).marginal(incoming[i]).as_double();
    best_plain = std::max(best_plain, plain[i]);
  }
  for (std::size_t i = 0; i < n; ++i)
    if (in_argmax(plain[i], best_plain, argmax_tol)) c.argmax_plain.push_back(i);
  return c;
}

std::string_view to_string(SolveMode mode) {
  return mode == SolveMode::Simultaneous ? "simultaneous" : "round_robin";
}

SolveMode solve_mode_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  std::replace(lower.begin(), lower.end(), '-', '_');
  if (lower == "simultaneous") return SolveMode::Simultaneous;
  if (lower == "round_robin") return SolveMode::RoundRobin;
  throw std::invalid_argument("unknown solve mode '" + std::string(name) + "'");
}

EquilibriumReport make_report(const FamilyGame& game, AllocationProfile x,
                              const SolveOptions& options) {
  EquilibriumReport report;
  report.certificate = kkt_verify(game, x, options.kkt_tol);
  report.classification = classify(game, x, options.support_tol, options.argmax_tol);
  report.incoming = incoming_investment(x);
  report.inclusive_fitness.resize(game.size());
  for (std::size_t i = 0; i < game.size(); ++i)
    report.inclusive_fitness[i] = inclusive_fitness_from_incoming(game, report.incoming, i);
  report.profile = std::move(x);
  report.diagnostics.mode = options.mode;
  report.diagnostics.initial_damping = options.damping;
  report.diagnostics.final_damping = options.damping;
  report.diagnostics.converged = report.certificate.certified;
  return report;
}

EquilibriumReport solve_nash(const FamilyGame& game, const SolveOptions& options) {
  if (!(options.damping > 0.0 && options.damping <= 1.0))
    throw std::invalid_argument("damping must lie in (0,1]");
  const std::size_t n = game.size();
  AllocationProfile x = options.initial ? *options.initial : self_investment_profile(game);

  SolverDiagnostics diag;
  diag.mode = options.mode;
  diag.initial_damping = options.damping;
  double damping = options.damping;
  double previous_complementarity = kInf;

  // Once certified, keep sweeping to leave headroom below the tolerance (as
  // many sweeps again as the first certification took, at least 50) and
  // return the best certified iterate seen.
  std::optional<AllocationProfile> best;
  double best_complementarity = kInf;
  int polish_sweeps = 0;
  int polish_budget = 0;

  int iteration = 0;
  for (;; ++iteration) {
    const KktCertificate cert = kkt_verify(game, x, options.kkt_tol);
    if (cert.certified && support_resolved(game, x, cert, options)) {
      if (!best) polish_budget = std::max(kMinPolishSweeps, iteration);
      if (cert.residuals.complementarity < best_complementarity) {
        best = x;
        best_complementarity = cert.residuals.complementarity;
      }
      if (best_complementarity <= options.kkt_tol * kPolishFactor || polish_sweeps >= polish_budget) break;
      ++polish_sweeps;
    }
    if (iteration >= options.max_iterations) break;
    const double complementarity = cert.residuals.complementarity;
    if (options.mode == SolveMode::Simultaneous && complementarity > previous_complementarity)
      damping = std::max(damping * 0.5, 1.0 / 64);
    previous_complementarity = complementarity;

    double displacement = 0.0;
    if (options.mode == SolveMode::Simultaneous) {
      AllocationProfile next(n, n);
      for (std::size_t s = 0; s < n; ++s) {
        const auto external = external_investment(x, s);
        const auto br = water_fill(game, s, external);
        if (br.degenerate) ++diag.degenerate_responses;
        for (std::size_t t = 0; t < n; ++t) {
          displacement = std::max(displacement, std::abs(br.allocation[t] - x(s, t)));
          next(s, t) = (1.0 - damping) * x(s, t) + damping * br.allocation[t];
        }
      }
      x = std::move(next);
    } else {
      for (std::size_t s = 0; s < n; ++s) {
        const auto external = external_investment(x, s);
        const auto br = water_fill(game, s, external);
        if (br.degenerate) ++diag.degenerate_responses;
        for (std::size_t t = 0; t < n; ++t) {
          displacement = std::max(displacement, std::abs(br.allocation[t] - x(s, t)));
          x(s, t) = br.allocation[t];
        }
      }
    }
    diag.displacement = displacement;
  }

  if (best) {
    x = std::move(*best);
    diag.converged = true;
  }
  diag.iterations = iteration;
  diag.final_damping = damping;
  EquilibriumReport report = make_report(game, std::move(x), options);
  report.diagnostics = diag;
  return report;
}

std::string_view to_string(InclusionStatus status) {
  switch (status) {
    case InclusionStatus::Holds: return "holds";
    case InclusionStatus::Violated: return "violated";
    case InclusionStatus::HypothesisNotMet: return "hypothesis not met";
  }
  return "unknown";
}

PropertyReport check_support_inclusions(const FamilyGame& game, const EquilibriumReport& report) {
  const std::size_t n = game.size();
  const Classification& c = report.classification;
  PropertyReport out;

  for (std::size_t s = 0; s < n; ++s) {
    const auto& argmax = c.argmax_adjusted[s];
    for (std::size_t t : c.beneficiaries[s]) {
      if (std::find(argmax.begin(), argmax.end(), t) == argmax.end()) {
        out.beneficiaries_in_argmax = InclusionStatus::Violated;
        std::ostringstream msg;
        msg << "source " << game.individuals()[s] << " invests " << report.profile(s, t) << " in "
            << game.individuals()[t] << " outside its highest adjusted marginal set";
        out.witnesses.push_back({s, t, msg.str()});
      }
    }
  }

  std::ostringstream note;
  for (std::size_t i = 0; i < n && note.tellp() == 0; ++i) {
    for (std::size_t t = 0; t < n; ++t) {
      if (t != i && !(game.relatedness(i, i) > game.relatedness(i, t))) {
        note << "relatedness of " << game.individuals()[i] << " to " << game.individuals()[t]
             << " is not strictly below self-relatedness";
        break;
      }
    }
  }
  for (std::size_t t = 0; t < n && note.tellp() == 0; ++t) {
    if (!(game.fitness(t).marginal(report.incoming[t]).as_double() > 0.0))
      note << "marginal fitness of " << game.individuals()[t] << " vanishes at equilibrium";
  }

  if (note.tellp() != 0) {
    out.argmax_plain_selfish = InclusionStatus::HypothesisNotMet;
    out.hypothesis_note = note.str();
  } else {
    for (std::size_t i : c.argmax_plain) {
      if (std::find(c.selfish.begin(), c.selfish.end(), i) == c.selfish.end()) {
        out.argmax_plain_selfish = InclusionStatus::Violated;
        out.witnesses.push_back({i, i,
                                 "individual " + game.individuals()[i] +
                                     " has the highest marginal fitness but is not selfish"});
      }
    }
  }
  return out;
}

}  // namespace kinalloc
