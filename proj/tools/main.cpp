// Command-line frontend: construction, verification, protocol simulation and
// machine-readable reports for the key-shield state family.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 invalid configuration.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boundkey/json_io.hpp"
#include "boundkey/private_key.hpp"
#include "boundkey/protocol.hpp"
#include "boundkey/random.hpp"
#include "boundkey/states.hpp"

using namespace boundkey;

namespace {

constexpr double kSecureTol = 1e-9;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct RunConfig {
  int D = 3;
  int k = 2;
  int k_max = 20;
  double p1 = 0.75;
  std::uint64_t seed = 1;
  double tol_psd = tol::psd;
  double tol_herm = tol::hermitian;
  std::string out;
  std::string format = "csv";
  std::string config_path;
  std::string pdit_path;
  std::string export_target = "rho";
  int export_k = 1;
};

// Accumulates named checks; renders one line per check and an overall verdict.
class CheckList {
 public:
  void add(const std::string& name, bool pass, const std::string& detail) {
    checks_.push_back({name, pass, detail});
    all_pass_ &= pass;
  }
  void add_deviation(const std::string& name, double deviation, double bound) {
    add(name, deviation <= bound,
        "deviation = " + fmt(deviation) + " (bound " + fmt(bound) + ")");
  }
  bool all_pass() const { return all_pass_; }

  void print(std::ostream& os) const {
    for (const auto& c : checks_)
      os << (c.pass ? "PASS  " : "FAIL  ") << c.name << ": " << c.detail << "\n";
    os << (all_pass_ ? "result: PASS" : "result: FAIL") << " (" << passed()
       << "/" << checks_.size() << " checks)\n";
  }

  nlohmann::json to_json() const {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : checks_)
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return {{"checks", std::move(checks)}, {"pass", all_pass_}};
  }

 private:
  struct Check {
    std::string name;
    bool pass;
    std::string detail;
  };
  std::size_t passed() const {
    std::size_t n = 0;
    for (const auto& c : checks_) n += c.pass;
    return n;
  }
  std::vector<Check> checks_;
  bool all_pass_ = true;
};

double max_entry_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

void emit(const RunConfig& cfg, const std::string& text_report,
          const nlohmann::json& artifact) {
  std::cout << text_report;
  if (!cfg.out.empty()) write_text_file(cfg.out, artifact.dump(2) + "\n");
}

int cmd_verify_state(const RunConfig& cfg) {
  CheckList checks;
  const ProjectorFamily f = make_projector_family(cfg.D);
  const auto idem = [](const MultipartiteOperator& m) {
    return (m.matrix() * m.matrix() - m.matrix()).cwiseAbs().maxCoeff();
  };
  checks.add_deviation("projectors_idempotent",
                       std::max({idem(f.P_plus), idem(f.P), idem(f.Q), idem(f.S)}),
                       1e-12);
  checks.add_deviation(
      "projectors_orthogonal",
      std::max({(f.P_plus.matrix() * f.P.matrix()).cwiseAbs().maxCoeff(),
                (f.P_plus.matrix() * f.Q.matrix()).cwiseAbs().maxCoeff(),
                (f.P.matrix() * f.Q.matrix()).cwiseAbs().maxCoeff()}),
      1e-12);
  checks.add_deviation(
      "projectors_complete",
      max_entry_diff(f.P_plus.matrix() + f.P.matrix() + f.Q.matrix(),
                     f.identity.matrix()),
      1e-12);
  checks.add_deviation("swap_involution",
                       max_entry_diff(f.V.matrix() * f.V.matrix(),
                                      f.identity.matrix()),
                       1e-12);

  const XFamily x = make_x(cfg.D);
  checks.add_deviation(
      "x_symmetric_real",
      std::max(max_entry_diff(x.X.matrix(), x.X.matrix().transpose()),
               x.X.matrix().imag().cwiseAbs().maxCoeff()),
      0.0);
  const double x_norm = trace_norm(x.X);
  checks.add("trace_norm_X", std::abs(x_norm - 1.0) <= 1e-10,
             "trace_norm_X = " + fmt(x_norm) + " [expected 1]");
  checks.add_deviation("abs_x_closed_form",
                       max_entry_diff(x.absX.matrix(), matrix_abs(x.X).matrix()),
                       1e-10);
  const MultipartiteOperator x_pt = partial_transpose(x.X, {1});
  checks.add_deviation("x_partial_transpose_closed_form",
                       max_entry_diff(x.X_ptB.matrix(), x_pt.matrix()), 1e-10);
  checks.add_deviation(
      "abs_x_partial_transpose_closed_form",
      max_entry_diff(x.abs_X_ptB.matrix(), matrix_abs(x_pt).matrix()), 1e-10);
  checks.add_deviation(
      "abs_x_pt_pt_closed_form",
      max_entry_diff(x.abs_X_ptB_ptB.matrix(),
                     partial_transpose(matrix_abs(x_pt), {1}).matrix()),
      1e-10);
  checks.add("abs_x_pt_psd", is_psd(partial_transpose(x.absX, {1}), cfg.tol_psd),
             "min eigenvalue = " +
                 fmt(min_eigenvalue(partial_transpose(x.absX, {1}))));
  checks.add("abs_x_pt_pt_psd", is_psd(x.abs_X_ptB_ptB, cfg.tol_psd),
             "min eigenvalue = " + fmt(min_eigenvalue(x.abs_X_ptB_ptB)));

  const KeyShieldState rho = make_rho(cfg.D);
  const Rational pref = rho_prefactor(cfg.D);
  checks.add("prefactor", true,
             "prefactor = " + fmt(pref.value()) + " (" +
                 std::to_string(pref.num) + "/" + std::to_string(pref.den) + ")");
  checks.add_deviation("rho_unit_trace", std::abs(rho.rho().trace() - Complex(1.0)),
                       1e-12);
  checks.add_deviation("rho_hermitian",
                       (rho.rho().matrix() - rho.rho().matrix().adjoint())
                           .cwiseAbs()
                           .maxCoeff(),
                       cfg.tol_herm);
  const double rho_min = min_eigenvalue(rho.rho());
  checks.add("rho_psd", rho_min >= -cfg.tol_psd,
             "min eigenvalue = " + fmt(rho_min));
  const PptReport ppt = check_ppt(rho, cfg.tol_psd);
  checks.add("ppt", ppt.is_ppt,
             std::string("ppt = ") + (ppt.is_ppt ? "true" : "false") +
                 " (min eigenvalue after T_BB' = " +
                 fmt(ppt.min_eigenvalue_after_T_BBprime) + ")");

  std::string text = "verify-state D=" + std::to_string(cfg.D) + "\n";
  {
    std::ostringstream os;
    checks.print(os);
    text += os.str();
  }
  nlohmann::json artifact = checks.to_json();
  artifact["command"] = "verify-state";
  artifact["D"] = cfg.D;
  emit(cfg, text, artifact);
  return checks.all_pass() ? 0 : 1;
}

int cmd_ppt(const RunConfig& cfg) {
  const PptReport report = check_ppt(make_rho(cfg.D), cfg.tol_psd);
  std::string text = "ppt D=" + std::to_string(cfg.D) +
                     "\nmin_eigenvalue_after_T_BB' = " +
                     fmt(report.min_eigenvalue_after_T_BBprime) +
                     "\nis_ppt = " + (report.is_ppt ? "true" : "false") + "\n";
  nlohmann::json artifact = {
      {"command", "ppt"},
      {"D", cfg.D},
      {"min_eigenvalue_after_T_BBprime", report.min_eigenvalue_after_T_BBprime},
      {"is_ppt", report.is_ppt}};
  emit(cfg, text, artifact);
  return report.is_ppt ? 0 : 1;
}

int cmd_criterion(const RunConfig& cfg) {
  const CriterionSeries series = criterion_series(cfg.D, cfg.k_max);
  bool dense_consistent = true;
  for (const CriterionEntry& e : series.entries)
    if (e.dense_checked &&
        std::abs(*e.dense_key_block_trace_norm - e.key_block_trace_norm) > 1e-9)
      dense_consistent = false;

  const std::string csv = criterion_series_csv(series);
  std::string text;
  nlohmann::json artifact;
  if (cfg.format == "json") {
    nlohmann::json entries = nlohmann::json::array();
    for (const CriterionEntry& e : series.entries) {
      nlohmann::json row = {{"k", e.k},
                            {"key_block_trace_norm", e.key_block_trace_norm},
                            {"gap_to_half", e.gap_to_half},
                            {"dense_checked", e.dense_checked}};
      if (e.pbit_trace_distance)
        row["pbit_trace_distance"] = *e.pbit_trace_distance;
      entries.push_back(std::move(row));
    }
    artifact = {{"command", "criterion"},
                {"D", series.D},
                {"entries", std::move(entries)},
                {"dense_consistent", dense_consistent}};
    text = artifact.dump(2) + "\n";
    std::cout << text;
    if (!cfg.out.empty()) write_text_file(cfg.out, text);
  } else {
    std::cout << csv;
    if (!cfg.out.empty()) write_text_file(cfg.out, csv);
  }
  if (!dense_consistent)
    std::cerr << "criterion: dense cross-check disagrees with the formula\n";
  return dense_consistent ? 0 : 1;
}

int cmd_protocol(const RunConfig& cfg) {
  const auto steps = run_protocol(cfg.D, cfg.k);
  CheckList checks;
  double yield = 1.0;
  std::string text = "protocol D=" + std::to_string(cfg.D) +
                     " copies=" + std::to_string(cfg.k) + "\n";
  nlohmann::json step_rows = nlohmann::json::array();
  for (const RecurrenceResult& step : steps) {
    const KeyShieldState closed = rho_k_closed_form(cfg.D, step.step_index);
    const double diff =
        max_entry_diff(step.state.rho().matrix(), closed.rho().matrix());
    const double dense_norm = key_block_trace_norm(step.state);
    const double analytic_norm =
        1.0 / recurrence_normalization(cfg.D, step.step_index);
    yield *= step.success_probability;
    checks.add_deviation("closed_form_match_k" + std::to_string(step.step_index),
                         diff, 1e-10);
    checks.add_deviation(
        "key_block_norm_match_k" + std::to_string(step.step_index),
        std::abs(dense_norm - analytic_norm), 1e-9);
    text += "step " + std::to_string(step.step_index - 1) +
            ": success_probability = " + fmt(step.success_probability) +
            ", key_block_trace_norm = " + fmt(dense_norm) +
            ", closed_form_deviation = " + fmt(diff) + "\n";
    step_rows.push_back({{"copies", step.step_index},
                         {"success_probability", step.success_probability},
                         {"key_block_trace_norm", dense_norm},
                         {"closed_form_deviation", diff}});
  }
  text += "overall_yield = " + fmt(yield) + "\n";
  {
    std::ostringstream os;
    checks.print(os);
    text += os.str();
  }
  nlohmann::json artifact = checks.to_json();
  artifact["command"] = "protocol";
  artifact["D"] = cfg.D;
  artifact["steps"] = std::move(step_rows);
  artifact["overall_yield"] = yield;
  emit(cfg, text, artifact);
  return checks.all_pass() ? 0 : 1;
}

int cmd_ccq(const RunConfig& cfg) {
  CcqState c;
  if (!cfg.pdit_path.empty()) {
    const PrivateState pdit = pdit_from_json(read_json_file(cfg.pdit_path));
    c = ccq(pdit.assemble(), pdit.basis);
  } else {
    c = ccq(make_rho(cfg.D), ProductBasis::standard(2));
  }
  const nlohmann::json artifact = ccq_report_json(c, kSecureTol);
  const std::string text = artifact.dump(2) + "\n";
  std::cout << text;
  if (!cfg.out.empty()) write_text_file(cfg.out, text);
  return 0;
}

int cmd_pbit_mixture(const RunConfig& cfg) {
  Rng rng(cfg.seed);
  const PrivateState g1 = random_pdit(2, {2, 2}, rng);
  const PrivateState g2 = random_pdit(2, {2, 2}, rng);
  const KeyShieldState mix = pbit_mixture(g1, g2, cfg.p1);
  const double rate = dw_rate(ccq(mix, ProductBasis::standard(2)));
  const double bound = 1.0 - binary_entropy(cfg.p1);
  const bool pass = rate >= bound - 1e-9;
  const std::string text = "pbit-mixture p1=" + fmt(cfg.p1) +
                           " seed=" + std::to_string(cfg.seed) +
                           "\ndw_rate = " + fmt(rate) +
                           "\nbound_one_minus_h = " + fmt(bound) + "\n" +
                           (pass ? "result: PASS\n" : "result: FAIL\n");
  const nlohmann::json artifact = {{"command", "pbit-mixture"},
                                   {"p1", cfg.p1},
                                   {"seed", cfg.seed},
                                   {"dw_rate", rate},
                                   {"bound", bound},
                                   {"pass", pass}};
  emit(cfg, text, artifact);
  return pass ? 0 : 1;
}

int cmd_export(const RunConfig& cfg) {
  nlohmann::json artifact;
  if (cfg.export_target == "rho") {
    const KeyShieldState state = cfg.export_k > 1
                                     ? rho_k_closed_form(cfg.D, cfg.export_k)
                                     : make_rho(cfg.D);
    artifact = operator_to_json(state.rho());
  } else if (cfg.export_target == "x") {
    artifact = operator_to_json(make_x(cfg.D).X);
  } else if (cfg.export_target == "projectors") {
    const ProjectorFamily f = make_projector_family(cfg.D);
    artifact = {{"P_plus", operator_to_json(f.P_plus)},
                {"P", operator_to_json(f.P)},
                {"Q", operator_to_json(f.Q)},
                {"S", operator_to_json(f.S)},
                {"V", operator_to_json(f.V)}};
  } else {
    throw CLI::ValidationError("export",
                               "unknown target (use rho, x or projectors)");
  }
  const std::string text = artifact.dump(2) + "\n";
  if (cfg.out.empty())
    std::cout << text;
  else
    write_text_file(cfg.out, text);
  return 0;
}

// Command-line flags win over config-file values, which win over defaults.
void apply_config_file(const nlohmann::json& file, CLI::App* sub, RunConfig& cfg) {
  const auto maybe = [&](const char* flag, auto& field) {
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    std::string key = std::string(flag).substr(2);
    for (char& c : key)
      if (c == '-') c = '_';
    if (opt && opt->count() == 0 && file.contains(key))
      file.at(key).get_to(field);
  };
  maybe("--D", cfg.D);
  maybe("--k", cfg.k);
  maybe("--k-max", cfg.k_max);
  maybe("--p1", cfg.p1);
  maybe("--seed", cfg.seed);
  maybe("--tol-psd", cfg.tol_psd);
  maybe("--tol-herm", cfg.tol_herm);
  maybe("--out", cfg.out);
  maybe("--format", cfg.format);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"key-shield state construction, verification and protocol runs"};
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--D", cfg.D, "shield dimension per side (>= 3)");
    sub->add_option("--seed", cfg.seed, "PRNG seed");
    sub->add_option("--tol-psd", cfg.tol_psd, "positivity tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol-herm", cfg.tol_herm, "Hermiticity tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "write the report artifact to this path");
    sub->add_option("--format", cfg.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", cfg.config_path, "JSON config file");
    return sub;
  };

  CLI::App* verify = add_common(app.add_subcommand(
      "verify-state", "check the algebraic identities of the state family"));
  CLI::App* ppt = add_common(
      app.add_subcommand("ppt", "partial-transpose positivity of the state"));
  CLI::App* criterion = add_common(app.add_subcommand(
      "criterion", "key-block trace-norm series towards 1/2"));
  criterion->add_option("--k-max", cfg.k_max, "largest copy count")
      ->check(CLI::PositiveNumber);
  CLI::App* protocol = add_common(app.add_subcommand(
      "protocol", "dense recurrence run cross-checked against the closed form"));
  protocol->add_option("--k", cfg.k, "copies to consume")->check(CLI::PositiveNumber);
  CLI::App* ccq_cmd = add_common(app.add_subcommand(
      "ccq", "measured-key distribution, security verdict and one-way rate"));
  ccq_cmd->add_option("--pdit", cfg.pdit_path,
                      "analyze this private-state JSON file instead of the "
                      "built-in family");
  CLI::App* mixture = add_common(app.add_subcommand(
      "pbit-mixture", "one-way rate of a biased two-pbit mixture"));
  mixture->add_option("--p1", cfg.p1, "mixture weight")
      ->check(CLI::Range(0.0, 1.0));
  CLI::App* exporter = add_common(
      app.add_subcommand("export", "dump a constructed operator as JSON"));
  exporter->add_option("target", cfg.export_target,
                       "what to export: rho, x or projectors");
  exporter->add_option("--k", cfg.export_k,
                       "copies for the iterated state (rho only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    app.exit(e);
    return 2;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (!cfg.config_path.empty())
      apply_config_file(read_json_file(cfg.config_path), active, cfg);

    // The projector family alone admits D = 2; everything else needs D >= 3
    // (the constructors throw on their own, this just gives a cleaner
    // message).
    if (active != mixture && active != exporter && cfg.D < 3)
      throw CLI::ValidationError("--D", "shield dimension must be >= 3");
    if (active == exporter && cfg.export_target != "projectors" && cfg.D < 3)
      throw CLI::ValidationError("--D", "shield dimension must be >= 3");

    if (active == verify) return cmd_verify_state(cfg);
    if (active == ppt) return cmd_ppt(cfg);
    if (active == criterion) return cmd_criterion(cfg);
    if (active == protocol) return cmd_protocol(cfg);
    if (active == ccq_cmd) return cmd_ccq(cfg);
    if (active == mixture) return cmd_pbit_mixture(cfg);
    if (active == exporter) return cmd_export(cfg);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
