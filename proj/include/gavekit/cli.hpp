#pragma once

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gavekit/generator.hpp"
#include "gavekit/json_io.hpp"
#include "gavekit/solvers.hpp"

namespace gavekit::cli {

// exit codes shared by every subcommand
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kInputError = 2;
inline constexpr int kInconclusive = 3;
inline constexpr int kNumericalFailure = 4;

namespace detail {

inline std::optional<SignPattern> parse_pattern_flag(const std::string& text) {
  std::vector<int> digits;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "+") digits.push_back(1);
    else if (tok == "-") digits.push_back(-1);
    else if (tok == "0") digits.push_back(0);
    else return std::nullopt;
  }
  if (digits.empty()) return std::nullopt;
  return SignPattern(std::move(digits));
}

inline Tolerances tolerances_from_env() {
  Tolerances tol;
  if (const char* env = std::getenv("GAVEKIT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end && *end == '\0' && v > 0) {
      tol.feas_tol = v;
      tol.strict_tol = v;
      tol.residual_tol = v;
    }
  }
  return tol;
}

inline void emit(const std::string& text, const std::string& output_path, std::ostream& out) {
  if (output_path.empty())
    out << text;
  else
    write_file(output_path, text);
}

inline std::string render_text(const AnalysisReport& report) {
  std::ostringstream os;
  os << "analysis verdicts (" << report.verdicts.size() << " evaluated):\n";
  for (const TheoremVerdict& v : report.verdicts) {
    if (!v.applies) continue;
    os << "  [" << theorem_name(v.id) << "] " << conclusion_name(v.conclusion);
    if (v.witness.contains("gamma")) os << "  gamma=" << v.witness["gamma"].get<double>();
    if (v.witness.contains("norm")) os << "  norm=" << v.witness["norm"].get<double>();
    if (v.witness.contains("norm_inf")) os << "  norm_inf=" << v.witness["norm_inf"].get<double>();
    if (v.witness.contains("contraction_factor"))
      os << "  factor=" << v.witness["contraction_factor"].get<double>();
    if (v.witness.contains("p")) os << "  p=" << v.witness["p"].get<std::string>();
    os << "\n    " << theorem_description(v.id) << "\n";
  }
  os << "strongest: " << report.summary << "\n";
  return os.str();
}

}  // namespace detail

// render_report: canonical JSON (sorted keys, shortest-round-trip floats) or
// a plain-text digest naming the conditions that fired.
inline std::string render_report(const AnalysisReport& report, const std::string& format) {
  if (format == "text") return detail::render_text(report);
  return report_to_json(report).dump(2) + "\n";
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"analyzer and solver for equations A x - B |x| = b with m <= n"};
  app.require_subcommand(1);

  std::string input_path, output_path, solution_path, splitting_path, splitting_out;
  std::string pattern_flag, format = "json", p_flag = "2", property_name = "none", method = "auto";
  std::uint64_t seed = 0;
  std::size_t budget = 531441;
  std::size_t gen_m = 2, gen_n = 3;

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "evaluate every applicability condition");
  analyze_cmd->add_option("instance", input_path)->required();
  analyze_cmd->add_option("--output", output_path);
  analyze_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  analyze_cmd->add_option("--pattern", pattern_flag, "extra sign pattern, e.g. +,-,0");
  analyze_cmd->add_option("--splitting", splitting_path, "extra splitting JSON file");
  analyze_cmd->add_option("--solution", solution_path, "known solution enabling classification");

  CLI::App* solve_cmd = app.add_subcommand("solve", "find a solution");
  solve_cmd->add_option("instance", input_path)->required();
  solve_cmd->add_option("--pattern", pattern_flag, "target sign pattern, e.g. +,-,0");
  solve_cmd->add_option("--splitting", splitting_path);
  solve_cmd->add_option("--p", p_flag)->check(CLI::IsMember({"1", "2", "inf"}));
  solve_cmd->add_option("--method", method)->check(CLI::IsMember({"auto", "lp", "fixedpoint"}));
  solve_cmd->add_option("--output", output_path);

  CLI::App* enum_cmd = app.add_subcommand("enumerate", "decide every sign pattern exactly");
  enum_cmd->add_option("instance", input_path)->required();
  enum_cmd->add_option("--budget", budget);
  enum_cmd->add_option("--output", output_path);

  CLI::App* certify_cmd = app.add_subcommand("certify", "infeasibility certificate for a pattern");
  certify_cmd->add_option("instance", input_path)->required();
  certify_cmd->add_option("--pattern", pattern_flag)->required();
  certify_cmd->add_option("--output", output_path);

  CLI::App* gen_cmd = app.add_subcommand("generate", "seeded random instance with a target property");
  gen_cmd->add_option("--m", gen_m)->required();
  gen_cmd->add_option("--n", gen_n)->required();
  gen_cmd->add_option("--property", property_name)
      ->check(CLI::IsMember({"none", "contraction-A", "submatrix", "signcone-B", "strict-signcone-B"}));
  gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("--output", output_path);
  gen_cmd->add_option("--splitting-out", splitting_out, "where to save the certifying splitting");

  CLI::App* verify_cmd = app.add_subcommand("verify", "recompute residuals of a solution file");
  verify_cmd->add_option("instance", input_path)->required();
  verify_cmd->add_option("--solution", solution_path)->required();
  verify_cmd->add_option("--output", output_path);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // drop program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    err << "argument error: " << e.what() << "\n";
    return kInputError;
  }

  const Tolerances tol = detail::tolerances_from_env();
  try {
    std::optional<SignPattern> pattern;
    if (!pattern_flag.empty()) {
      pattern = detail::parse_pattern_flag(pattern_flag);
      if (!pattern) {
        err << "flag --pattern: expected comma-separated +, -, 0\n";
        return kInputError;
      }
    }

    if (gen_cmd->parsed()) {
      GeneratorConfig cfg;
      cfg.m = gen_m;
      cfg.n = gen_n;
      cfg.tol = tol;
      const auto prop = property_from_name(property_name);
      if (!prop) {
        err << "flag --property: unknown property\n";
        return kInputError;
      }
      cfg.property = *prop;
      const GeneratorResult result = random_instance(cfg, seed);
      detail::emit(serialize_instance(result.inst), output_path, out);
      if (!splitting_out.empty() && result.splitting)
        write_file(splitting_out, splitting_to_json(*result.splitting).dump(2) + "\n");
      return kOk;
    }

    const GaveInstance inst = parse_instance(read_file(input_path));
    if (pattern && pattern->size() != inst.n()) {
      err << "flag --pattern: length differs from n\n";
      return kInputError;
    }

    if (analyze_cmd->parsed()) {
      AnalyzeOptions opt;
      opt.tol = tol;
      opt.pattern = pattern;
      if (!splitting_path.empty()) opt.user_splittings.push_back(parse_splitting(read_file(splitting_path), inst));
      if (!solution_path.empty()) opt.known_solution = solution_vector_from_json(read_file(solution_path), inst.n());
      const AnalysisReport report = analyze(inst, opt);
      detail::emit(render_report(report, format), output_path, out);
      return kOk;
    }

    if (solve_cmd->parsed()) {
      const NormKind p = p_flag == "1" ? NormKind::One : (p_flag == "2" ? NormKind::Two : NormKind::Inf);
      std::optional<Splitting> split;
      if (!splitting_path.empty()) split = parse_splitting(read_file(splitting_path), inst);
      const bool use_lp = method == "lp" || (method == "auto" && pattern.has_value());

      nlohmann::json j;
      if (use_lp) {
        if (!pattern) {
          err << "flag --pattern: required for the lp method\n";
          return kInputError;
        }
        const SolvePatternOutcome r = solve_pattern(inst, *pattern, tol);
        switch (r.status) {
          case SolvePatternOutcome::Status::Solved:
            j = solution_to_json(*r.record);
            j["status"] = "solved";
            j["margin"] = r.margin;
            break;
          case SolvePatternOutcome::Status::Boundary:
            j["status"] = "boundary";
            j["margin"] = r.margin;
            break;
          case SolvePatternOutcome::Status::Infeasible:
            j["status"] = "infeasible";
            j["certificate"] = gavekit::detail::vector_to(r.certificate);
            break;
        }
        detail::emit(j.dump(2) + "\n", output_path, out);
        return kOk;
      }

      // fixed-point route; --p picks the norm for the applicability pre-check
      bool condition_applies = false;
      FixedPointResult r = [&] {
        if (pattern) {
          if (!pattern->full_sign()) {
            throw InputError(ErrorCode::BadField,
                             "flag --pattern: fixed-point solving needs a full sign pattern");
          }
          const Splitting s = split ? *split : Splitting::trivial_on(inst, SplitTarget::OnB);
          const auto verdicts = s.target == SplitTarget::OnB
                                    ? check_signcone_B(inst, s, *pattern, p, tol)
                                    : check_signcone_A(inst, s, *pattern, p, tol);
          for (const TheoremVerdict& v : verdicts) condition_applies = condition_applies || v.applies;
          return fixed_point_y(inst, s, *pattern, tol);
        }
        const Splitting s = split ? *split : Splitting::trivial_on(inst, SplitTarget::OnA);
        if (s.target != SplitTarget::OnA)
          throw InputError(ErrorCode::BadField, "flag --splitting: x-iteration needs an A-splitting; pass --pattern for the y-iteration");
        condition_applies = check_contraction_A(inst, s, p, tol).applies;
        return fixed_point_x(inst, s, Vector::zeros(inst.n()), tol);
      }();
      j = solution_to_json(r.record);
      j["status"] = r.residual_accepted ? "solved" : "not_converged";
      j["iterations"] = r.trace.iterations;
      j["converged"] = r.trace.converged;
      j["pattern_matched"] = r.pattern_matched;
      j["condition_applies"] = condition_applies;
      detail::emit(j.dump(2) + "\n", output_path, out);
      return r.residual_accepted ? kOk : kInconclusive;
    }

    if (enum_cmd->parsed()) {
      const EnumerationReport report = enumerate_patterns(inst, budget, tol);
      detail::emit(enumeration_to_json(report).dump(2) + "\n", output_path, out);
      return kOk;
    }

    if (certify_cmd->parsed()) {
      const SolvePatternOutcome r = solve_pattern(inst, *pattern, tol);
      nlohmann::json j;
      if (r.status == SolvePatternOutcome::Status::Infeasible) {
        const Matrix c_support = select_columns(sign_transform(inst, *pattern), pattern->support());
        j["status"] = "infeasible";
        j["certificate"] = gavekit::detail::vector_to(r.certificate);
        j["verified"] = verify_farkas(c_support, inst.b, r.certificate, tol);
        if (!j["verified"].get<bool>()) {
          err << "certificate failed re-verification\n";
          return kNumericalFailure;
        }
      } else {
        j["status"] = r.status == SolvePatternOutcome::Status::Boundary ? "boundary" : "feasible";
        j["margin"] = r.margin;
        if (r.record) j["x"] = gavekit::detail::vector_to(r.record->x);
      }
      detail::emit(j.dump(2) + "\n", output_path, out);
      return kOk;
    }

    if (verify_cmd->parsed()) {
      const Vector x = solution_vector_from_json(read_file(solution_path), inst.n());
      const double r = residual(inst, x).inf_norm();
      const bool ok = r <= tol.residual_tol * (1.0 + inst.b.inf_norm());
      nlohmann::json j;
      j["residual_inf"] = r;
      j["ok"] = ok;
      j["pattern"] = pattern_to_json(sign_of(x, tol));
      detail::emit(j.dump(2) + "\n", output_path, out);
      return ok ? kOk : kVerifyFailed;
    }

    err << "no subcommand selected\n";
    return kInputError;
  } catch (const BudgetError& e) {
    err << "budget: " << e.what() << "\n";
    return kInconclusive;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const Error& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace gavekit::cli
