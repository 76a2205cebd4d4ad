#include "cli.hpp"

#include <fstream>

#include <CLI11.hpp>

#include "kinalloc/equilibrium.hpp"
#include "kinalloc/io.hpp"
#include "kinalloc/oracle.hpp"
#include "kinalloc/pedigree.hpp"
#include "kinalloc/sweep.hpp"

namespace kinalloc::cli {

namespace {

struct SolveFlags {
  std::string mode = "round_robin";
  double gamma = 0.5;
  int max_iter = 10000;
  double kkt_tol = kKktTolerance;

  SolveOptions options() const {
    SolveOptions o;
    o.mode = solve_mode_from_string(mode);
    o.damping = gamma;
    o.max_iterations = max_iter;
    o.kkt_tol = kkt_tol;
    return o;
  }
};

void add_solve_flags(CLI::App* cmd, SolveFlags& flags) {
  cmd->add_option("--mode", flags.mode, "Best-response schedule")
      ->check(CLI::IsMember({"simultaneous", "round_robin", "round-robin"}));
  cmd->add_option("--gamma", flags.gamma, "Damping for simultaneous mode")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--max-iter", flags.max_iter, "Iteration budget")->check(CLI::NonNegativeNumber);
  cmd->add_option("--kkt-tol", flags.kkt_tol, "Certificate tolerance")->check(CLI::PositiveNumber);
}

// Writes to the named file, or to `out` when the name is empty.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write '" + path + "'");
  file << text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nash equilibria of inclusive-fitness allocation games", "kinalloc"};
  app.require_subcommand(1);

  std::string game_path;
  std::string profile_path;
  std::string output_path;

  SolveFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "Compute an equilibrium and write its report");
  solve->add_option("GAME", game_path, "Game document")->required();
  solve->add_option("-o,--output", output_path, "Report file (default: stdout)");
  add_solve_flags(solve, solve_flags);

  double verify_tol = kKktTolerance;
  auto* verify = app.add_subcommand("verify", "Check a profile against the KKT certificate");
  verify->add_option("GAME", game_path, "Game document")->required();
  verify->add_option("PROFILE", profile_path, "Profile or report document")->required();
  verify->add_option("--kkt-tol", verify_tol, "Certificate tolerance")->check(CLI::PositiveNumber);
  verify->add_option("-o,--output", output_path, "Certificate file (default: stdout)");

  double support_tol = kSupportTolerance;
  double argmax_tol = kArgmaxTolerance;
  auto* classify_cmd = app.add_subcommand("classify", "Selfish/altruistic sets and support inclusions");
  classify_cmd->add_option("GAME", game_path, "Game document")->required();
  classify_cmd->add_option("PROFILE", profile_path, "Profile or report document")->required();
  classify_cmd->add_option("--support-tol", support_tol)->check(CLI::PositiveNumber);
  classify_cmd->add_option("--argmax-tol", argmax_tol)->check(CLI::PositiveNumber);
  classify_cmd->add_option("-o,--output", output_path, "Output file (default: stdout)");

  GridSpec grid;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Exhaustive epsilon-Nash test on a budget lattice");
  oracle_cmd->add_option("GAME", game_path, "Game document")->required();
  oracle_cmd->add_option("PROFILE", profile_path, "Profile or report document")->required();
  oracle_cmd->add_option("--step", grid.step, "Lattice spacing")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--epsilon", grid.epsilon, "Allowed improvement")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("-o,--output", output_path, "Output file (default: stdout)");

  std::string pedigree_path;
  auto* pedigree_cmd = app.add_subcommand("pedigree", "Wright relatedness matrix of a pedigree");
  pedigree_cmd->add_option("PED", pedigree_path, "Pedigree document")->required();
  pedigree_cmd->add_option("-o,--output", output_path, "Matrix file (default: stdout)");

  SolveFlags sweep_flags;
  SweepSpec sweep_spec;
  std::string param_path;
  unsigned threads = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Re-solve along a scalar parameter path, one CSV row per step");
  sweep_cmd->add_option("GAME", game_path, "Game document")->required();
  sweep_cmd->add_option("--param", param_path,
                        "relatedness/<source>/<target>, budget/<id> or fitness/<id>/<w|c|p>")
      ->required();
  sweep_cmd->add_option("--from", sweep_spec.from)->required();
  sweep_cmd->add_option("--to", sweep_spec.to)->required();
  sweep_cmd->add_option("--steps", sweep_spec.steps)->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--threads", threads, "Worker threads (default: hardware concurrency)");
  sweep_cmd->add_option("-o,--output", output_path, "CSV file (default: stdout)");
  add_solve_flags(sweep_cmd, sweep_flags);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) {
      const FamilyGame game = load_game_config(game_path);
      const EquilibriumReport report = solve_nash(game, solve_flags.options());
      emit(output_path, dump(report_to_json(game, report)), out);
      if (!report.diagnostics.converged) {
        err << "solve: no certified equilibrium after " << report.diagnostics.iterations
            << " iterations (complementarity " << report.certificate.residuals.complementarity
            << ", budget " << report.certificate.residuals.budget << ")\n";
        return kNotCertified;
      }
      return kOk;
    }

    if (*verify) {
      const FamilyGame game = load_game_config(game_path);
      const AllocationProfile x = load_profile(profile_path, game);
      const ValidationResult admissible = validate_profile(game, x);
      if (!admissible.ok()) {
        err << "verify: profile is not admissible: " << admissible.to_string() << "\n";
        return kInput;
      }
      const KktCertificate cert = kkt_verify(game, x, verify_tol);
      emit(output_path, dump(certificate_to_json(cert)), out);
      if (!cert.certified) {
        err << "verify: not certified (worst residual " << cert.residuals.worst() << ")\n";
        return kNotCertified;
      }
      return kOk;
    }

    if (*classify_cmd) {
      const FamilyGame game = load_game_config(game_path);
      const AllocationProfile x = load_profile(profile_path, game);
      const ValidationResult admissible = validate_profile(game, x);
      if (!admissible.ok()) {
        err << "classify: profile is not admissible: " << admissible.to_string() << "\n";
        return kInput;
      }
      SolveOptions opts;
      opts.support_tol = support_tol;
      opts.argmax_tol = argmax_tol;
      const EquilibriumReport report = make_report(game, x, opts);
      nlohmann::json doc = classification_to_json(game, report.classification);
      doc["certified"] = report.certificate.certified;
      if (report.certificate.certified) {
        doc["inclusions"] = properties_to_json(game, check_support_inclusions(game, report));
      } else {
        err << "classify: profile is not certified; support inclusions not checked\n";
      }
      emit(output_path, dump(doc), out);
      return kOk;
    }

    if (*oracle_cmd) {
      const FamilyGame game = load_game_config(game_path);
      const AllocationProfile x = load_profile(profile_path, game);
      const GridNashCheck check = grid_nash_check(game, x, grid);
      emit(output_path, dump(nash_check_to_json(game, check, grid)), out);
      if (!check.pass) {
        err << "oracle-check: " << game.individuals()[check.worst_source] << " improves by "
            << check.worst_gain << " > epsilon " << grid.epsilon << "\n";
        return kNotCertified;
      }
      return kOk;
    }

    if (*pedigree_cmd) {
      const Pedigree ped = load_pedigree(pedigree_path);
      emit(output_path, dump(relatedness_to_json(ped.ids(), pedigree_to_relatedness(ped))), out);
      return kOk;
    }

    if (*sweep_cmd) {
      const FamilyGame game = load_game_config(game_path);
      sweep_spec.parameter = parse_parameter_path(param_path, game);
      sweep_spec.options = sweep_flags.options();
      sweep_spec.threads = threads;
      const SweepResult result = run_sweep(game, sweep_spec);
      emit(output_path, sweep_to_csv(game, result), out);
      if (result.unconverged > 0) {
        err << "sweep: " << result.unconverged << " of " << result.rows.size()
            << " steps did not certify\n";
        return kNotCertified;
      }
      return kOk;
    }
  } catch (const InputError& e) {
    err << e.what() << "\n";
    return kInput;
  } catch (const std::length_error& e) {
    err << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  }
  return kUsage;
}

}  // namespace kinalloc::cli
