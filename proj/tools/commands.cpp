#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "swapbell/correlation.hpp"
#include "swapbell/io.hpp"
#include "swapbell/lhv.hpp"
#include "swapbell/parity_solver.hpp"

namespace swapbell::cli {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxListedViolations = 50;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double to_radians(double value, bool degrees) { return degrees ? value * kPi / 180.0 : value; }

AngleSettings settings_from_flags(const std::array<double, 4>& phi, bool degrees) {
  for (double v : phi) {
    if (!std::isfinite(v)) throw UsageError("angles must be finite");
  }
  return {to_radians(phi[0], degrees), to_radians(phi[1], degrees), to_radians(phi[2], degrees),
          to_radians(phi[3], degrees)};
}

void add_angle_flags(CLI::App* cmd, std::array<double, 4>& phi, bool& degrees) {
  cmd->add_option("--phi1", phi[0], "rotation of photon a")->capture_default_str();
  cmd->add_option("--phi2", phi[1], "rotation of photon b")->capture_default_str();
  cmd->add_option("--phi3", phi[2], "rotation of photon c")->capture_default_str();
  cmd->add_option("--phi4", phi[3], "rotation of photon d")->capture_default_str();
  cmd->add_flag("--degrees", degrees, "interpret angles as degrees instead of radians");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::string fixed(double v) {
  if (std::abs(v) < 5e-16) v = 0.0;  // avoid printing "-0.0000000000"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.10f", v);
  return buf;
}

std::string complex_cell(const Complex& c) {
  if (std::abs(c.imag()) < 1e-15) return fixed(c.real());
  return fixed(c.real()) + fixed(c.imag()) + "i";
}

void print_matrix(std::ostream& out, const std::string& title, const BellBellAmplitudes& amps) {
  out << title << " [rows: bc, columns: ad]\n";
  out << "        ";
  for (BellOutcome ad : kBellOutcomes) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%14s", std::string(to_string(ad)).c_str());
    out << buf;
  }
  out << '\n';
  for (BellOutcome bc : kBellOutcomes) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "  %-6s", std::string(to_string(bc)).c_str());
    out << buf;
    for (BellOutcome ad : kBellOutcomes) {
      std::snprintf(buf, sizeof buf, "%14s", complex_cell(amps(bc, ad)).c_str());
      out << buf;
    }
    out << '\n';
  }
}

// ------------------------------------------------------------------ decompose

struct DecomposeArgs {
  std::array<double, 4> phi{};
  bool degrees = false;
  bool as_json = false;
  bool as_table = false;
};

int cmd_decompose(const DecomposeArgs& args, std::ostream& out) {
  const AngleSettings angles = settings_from_flags(args.phi, args.degrees);
  const auto phases = compute_phases(angles);
  const auto numeric = bell_bell_amplitudes_numeric(apply_all_rotations(make_vw_state(), angles));
  const auto closed = bell_bell_amplitudes_closed_form(angles);
  const double deviation = numeric.max_abs_diff(closed);
  const bool ok = deviation < 1e-10;

  if (args.as_json) {
    io::ReportDocument doc;
    doc.command = "decompose";
    doc.body = {{"angles", io::angles_to_json(angles)},
                {"xi", phases.xi},
                {"eta", phases.eta},
                {"numeric", io::amplitudes_to_json(numeric)},
                {"closed_form", io::amplitudes_to_json(closed)},
                {"max_deviation", deviation},
                {"passed", ok}};
    out << io::serialize(doc) << '\n';
  } else {
    out << "angles (rad): phi1=" << io::format_double(angles.phi1)
        << " phi2=" << io::format_double(angles.phi2) << " phi3=" << io::format_double(angles.phi3)
        << " phi4=" << io::format_double(angles.phi4) << '\n';
    out << "xi=" << io::format_double(phases.xi) << " eta=" << io::format_double(phases.eta) << '\n';
    print_matrix(out, "numeric decomposition", numeric);
    print_matrix(out, "closed form", closed);
    char buf[64];
    std::snprintf(buf, sizeof buf, "max_deviation: %.3e", deviation);
    out << buf << '\n';
  }
  return ok ? kExitOk : kExitViolation;
}

// ------------------------------------------------------------------ verify-qm

struct CheckTally {
  double worst = 0.0;
  double threshold = 0.0;
  std::size_t evaluated = 0;
  std::size_t failed = 0;
};

class Verifier {
 public:
  explicit Verifier(const VerifyQmOptions& options) : options_(options) {}

  void check(const std::string& name, double value, double threshold, const std::string& family,
             std::size_t index, const AngleSettings& angles) {
    auto& t = tallies_[name];
    t.threshold = threshold;
    ++t.evaluated;
    t.worst = std::max(t.worst, value);
    if (value < threshold && std::isfinite(value)) return;
    ++t.failed;
    ++violation_count_;
    if (violations_.size() < kMaxListedViolations) {
      violations_.push_back({{"family", family},
                             {"setting_index", index},
                             {"angles", io::angles_to_json(angles)},
                             {"check", name},
                             {"value", value},
                             {"threshold", threshold}});
    }
  }

  void expect(const std::string& name, bool condition, const std::string& family,
              std::size_t index, const AngleSettings& angles) {
    check(name, condition ? 0.0 : 1.0, 0.5, family, index, angles);
  }

  bool passed() const noexcept { return violation_count_ == 0; }

  json checks_json() const {
    json j = json::object();
    for (const auto& [name, t] : tallies_) {
      j[name] = {{"max_value", t.worst},
                 {"threshold", t.threshold},
                 {"evaluated", t.evaluated},
                 {"failed", t.failed},
                 {"passed", t.failed == 0}};
    }
    return j;
  }

  json violations_json() const { return violations_; }
  std::size_t violation_count() const noexcept { return violation_count_; }
  const VerifyQmOptions& options() const noexcept { return options_; }

 private:
  VerifyQmOptions options_;
  std::map<std::string, CheckTally> tallies_;
  json violations_ = json::array();
  std::size_t violation_count_ = 0;
};

// Identities that hold at every setting.
void check_setting(Verifier& v, const QmModel& model, const std::string& family,
                   std::size_t index, const AngleSettings& angles, double shift_a,
                   double shift_b) {
  const auto& opt = v.options();
  const auto rotated = apply_all_rotations(model.initial_state(), angles);
  v.check("state_norm", std::abs(1.0 - rotated.norm_squared()), opt.tol, family, index, angles);

  const auto numeric = bell_bell_amplitudes_numeric(rotated);
  v.check("double_bell_completeness", std::abs(1.0 - numeric.total_weight()), opt.tol, family,
          index, angles);
  v.check("closed_form_vs_numeric", numeric.max_abs_diff(model.closed_form(angles)),
          opt.closed_form_tol, family, index, angles);

  const AngleSettings shifted{angles.phi1 + shift_a, angles.phi2 + shift_a, angles.phi3 + shift_b,
                              angles.phi4 + shift_b};
  const auto numeric_shifted =
      bell_bell_amplitudes_numeric(apply_all_rotations(model.initial_state(), shifted));
  v.check("difference_invariance", numeric.max_abs_diff(numeric_shifted), opt.tol, family, index,
          angles);

  const auto probabilities = joint_bell_probabilities(angles);
  v.check("kappa_mismatch", kappa_mismatch_probability(probabilities), opt.tol, family, index,
          angles);
  double marginal_error = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double row = 0.0;
    double col = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      row += probabilities[i][j];
      col += probabilities[j][i];
    }
    marginal_error = std::max({marginal_error, std::abs(row - 0.25), std::abs(col - 0.25)});
  }
  v.check("bell_marginals", marginal_error, opt.tol, family, index, angles);

  const auto fig1 = fig1_joint_distribution(angles);
  double total = 0.0;
  for (double p : fig1) total += p;
  v.check("fig1_normalization", std::abs(1.0 - total), opt.tol, family, index, angles);

  const auto report = perfect_correlation_report(angles, opt.angle_tol, opt.tol);
  for (const auto& sector : report.sectors) {
    if (!sector.predicted_product) continue;
    v.check("perfect_product", sector.product_violation, opt.tol, family, index, angles);
    v.check("perfect_bell_pairing", sector.pairing_violation, opt.tol, family, index, angles);
  }
}

struct Family {
  std::string name;
  int kappa;
  PhaseClass expected;
  AngleSettings (*make)(double alpha, double beta);
};

const std::vector<Family>& special_families() {
  static const std::vector<Family> families = {
      {"kappa+:zeta=0", +1, PhaseClass::ZeroOrPi,
       [](double a, double b) { return AngleSettings{a, a + kPi / 4, b + kPi / 4, b}; }},
      {"kappa+:zeta=pi", +1, PhaseClass::ZeroOrPi,
       [](double a, double b) { return AngleSettings{a, a, b + kPi, b}; }},
      {"kappa+:zeta=-pi/2", +1, PhaseClass::HalfPi,
       [](double a, double b) { return AngleSettings{a, a + kPi / 4, b, b + kPi / 4}; }},
      {"kappa+:zeta=+pi/2", +1, PhaseClass::HalfPi,
       [](double a, double b) { return AngleSettings{a + kPi / 2, a, b, b}; }},
      {"kappa-:zeta=0", -1, PhaseClass::ZeroOrPi,
       [](double a, double b) { return AngleSettings{a, a + kPi / 4, b, b + kPi / 4}; }},
      {"kappa-:zeta=pi", -1, PhaseClass::ZeroOrPi,
       [](double a, double b) { return AngleSettings{a + kPi, a, b, b}; }},
      {"kappa-:zeta=-pi/2", -1, PhaseClass::HalfPi,
       [](double a, double b) { return AngleSettings{a, a + kPi / 4, b + kPi / 4, b}; }},
      {"kappa-:zeta=+pi/2", -1, PhaseClass::HalfPi,
       [](double a, double b) { return AngleSettings{a, a, b, b + kPi / 2}; }},
  };
  return families;
}

double draw_angle(std::mt19937_64& rng) { return (uniform_from_bits(rng()) * 4.0 - 2.0) * kPi; }

}  // namespace

int verify_qm(const VerifyQmOptions& options, std::ostream& out, const QmModel& model) {
  Verifier v(options);
  std::mt19937_64 rng(options.seed);

  for (std::size_t i = 0; i < options.grid; ++i) {
    const AngleSettings angles{draw_angle(rng), draw_angle(rng), draw_angle(rng), draw_angle(rng)};
    const double shift_a = draw_angle(rng);
    const double shift_b = draw_angle(rng);
    check_setting(v, model, "random", i, angles, shift_a, shift_b);
  }

  json families = json::array();
  for (const auto& family : special_families()) {
    std::size_t mc_violations = 0;
    for (std::size_t i = 0; i < options.families; ++i) {
      const double alpha = draw_angle(rng);
      const double beta = draw_angle(rng);
      const AngleSettings angles = family.make(alpha, beta);
      check_setting(v, model, family.name, i, angles, draw_angle(rng), draw_angle(rng));

      const PhaseClass cls = classify_zeta(angles, family.kappa, options.angle_tol);
      v.expect("family_classification", cls == family.expected, family.name, i, angles);

      if (i == 0 && options.events > 0) {
        const int predicted = *predicted_product(family.expected);
        for (const auto& e : sample_events(angles, options.events, options.seed)) {
          if (e.kappa == family.kappa && e.product != predicted) ++mc_violations;
        }
        v.check("monte_carlo_sector_violations", static_cast<double>(mc_violations), 0.5,
                family.name, i, angles);
      }
    }
    families.push_back({{"family", family.name},
                        {"kappa", family.kappa},
                        {"expected_class", std::string(to_string(family.expected))},
                        {"instances", options.families},
                        {"monte_carlo_events", options.events},
                        {"monte_carlo_violations", mc_violations}});
  }

  io::ReportDocument doc;
  doc.command = "verify-qm";
  doc.body = {{"options",
               {{"grid", options.grid},
                {"families", options.families},
                {"events", options.events},
                {"tol", options.tol},
                {"closed_form_tol", options.closed_form_tol},
                {"angle_tol", options.angle_tol},
                {"seed", options.seed}}},
              {"checks", v.checks_json()},
              {"special_families", families},
              {"violation_count", v.violation_count()},
              {"violations", v.violations_json()},
              {"passed", v.passed()}};
  out << io::serialize(doc) << '\n';
  return v.passed() ? kExitOk : kExitViolation;
}

namespace {

// ------------------------------------------------------------------ simulate

struct SimulateArgs {
  std::array<double, 4> phi{};
  bool degrees = false;
  std::size_t events = 1000;
  std::uint64_t seed = 42;
  std::string out_path;
  double angle_tol = kDefaultAngleTolerance;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  const AngleSettings angles = settings_from_flags(args.phi, args.degrees);
  const auto events = sample_events(angles, args.events, args.seed);

  std::ostringstream csv;
  io::write_events_csv(csv, events);
  write_text(args.out_path, csv.str(), out);

  std::array<std::optional<int>, 2> predicted;
  for (int kappa : {+1, -1}) {
    predicted[kappa == 1 ? 0 : 1] = predicted_product(classify_zeta(angles, kappa, args.angle_tol));
  }
  std::size_t violations = 0;
  for (const auto& e : events) {
    const auto& p = predicted[e.kappa == 1 ? 0 : 1];
    if (p && e.product != *p) ++violations;
  }

  std::ostream& summary = args.out_path.empty() ? err : out;
  summary << "events=" << events.size() << " seed=" << args.seed
          << " zeta+=" << to_string(classify_zeta(angles, +1, args.angle_tol))
          << " zeta-=" << to_string(classify_zeta(angles, -1, args.angle_tol))
          << " sector_product_violations=" << violations << '\n';
  return violations == 0 ? kExitOk : kExitViolation;
}

// ------------------------------------------------------------------ refute

SolveResult solve_with(const std::string& method, const ConstraintSet& cs) {
  if (method == "enumerate") return enumerate_solve(cs);
  return gf2_solve(cs);
}

struct RefuteArgs {
  double alpha = 0.0;
  double beta = 0.0;
  int kappa = 1;
  std::string method = "enumerate";
  bool fig2 = false;
  bool degrees = false;
};

int cmd_refute(const RefuteArgs& args, std::ostream& out) {
  if (!std::isfinite(args.alpha) || !std::isfinite(args.beta)) {
    throw UsageError("alpha and beta must be finite");
  }
  const double alpha = to_radians(args.alpha, args.degrees);
  const double beta = to_radians(args.beta, args.degrees);

  ConstraintSet cs;
  if (args.fig2) {
    const auto settings = proof_settings(alpha, beta, args.kappa);
    cs = compile_fig2(settings, HiddenContext{args.kappa, args.kappa == 1 ? "kappa+" : "kappa-"});
  } else {
    cs = paper_proof_instance(alpha, beta, args.kappa);
  }
  const SolveResult result = solve_with(args.method, cs);
  const bool verified = verify_certificate(cs, result);
  const SolveStatus expected = args.fig2 ? SolveStatus::Sat : SolveStatus::Unsat;

  io::ReportDocument doc;
  doc.command = "refute";
  doc.body = {{"alpha", alpha},
              {"beta", beta},
              {"kappa", args.kappa},
              {"arrangement", args.fig2 ? "fig2" : "fig1-reduced"},
              {"expected", std::string(to_string(expected))},
              {"instance", io::constraint_set_to_json(cs)},
              {"result", io::solve_result_to_json(cs, result, args.method)},
              {"verified", verified}};
  out << io::serialize(doc) << '\n';
  return (verified && result.status == expected) ? kExitOk : kExitViolation;
}

// ------------------------------------------------------------------ compile / solve

struct CompileArgs {
  std::string settings_path;
  int kappa = 1;
  int fig = 1;
  bool factorize = false;
  bool degrees = false;
  double tol = kDefaultAngleTolerance;
  std::string label;
  std::string out_path;
};

int cmd_compile(const CompileArgs& args, std::ostream& out) {
  std::vector<AngleSettings> settings;
  try {
    settings = io::settings_from_json(read_json_file(args.settings_path));
  } catch (const io::FormatError& e) {
    throw UsageError(e.what());
  }
  if (args.degrees) {
    for (auto& s : settings) s = settings_from_flags({s.phi1, s.phi2, s.phi3, s.phi4}, true);
  }
  HiddenContext context{args.kappa,
                        args.label.empty() ? (args.kappa == 1 ? "kappa+" : "kappa-") : args.label};
  ConstraintSet cs = args.fig == 1 ? compile_fig1(settings, context, args.tol)
                                   : compile_fig2(settings, context, args.tol);
  if (args.factorize) cs = apply_factorization(cs);
  write_text(args.out_path, io::constraint_set_to_json(cs).dump(2) + "\n", out);
  return kExitOk;
}

struct SolveArgs {
  std::string in_path;
  std::string method = "gf2";
  std::string expect;
  std::string out_path;
};

int cmd_solve(const SolveArgs& args, std::ostream& out) {
  ConstraintSet cs;
  try {
    cs = io::constraint_set_from_json(read_json_file(args.in_path));
  } catch (const io::FormatError& e) {
    throw UsageError(e.what());
  }
  SolveResult result;
  try {
    result = solve_with(args.method, cs);
  } catch (const SolverLimitError& e) {
    throw UsageError(std::string(e.what()) + "; use --method gf2");
  }
  const bool verified = verify_certificate(cs, result);
  json j = io::solve_result_to_json(cs, result, args.method);
  j["verified"] = verified;
  j["variables"] = cs.variable_count();
  j["constraints"] = cs.constraint_count();
  write_text(args.out_path, j.dump(2) + "\n", out);

  if (!verified) return kExitViolation;
  if (!args.expect.empty() && args.expect != to_string(result.status)) return kExitViolation;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement-swapping perfect correlations and their local-realistic refutation",
               "swapbell"};
  app.require_subcommand(1);

  DecomposeArgs decompose;
  auto* dec = app.add_subcommand("decompose", "double-Bell decomposition of the rotated state");
  add_angle_flags(dec, decompose.phi, decompose.degrees);
  auto* json_flag = dec->add_flag("--json", decompose.as_json, "emit a JSON report");
  dec->add_flag("--table", decompose.as_table, "emit text tables (default)")->excludes(json_flag);

  VerifyQmOptions verify;
  auto* ver = app.add_subcommand("verify-qm", "check every quantum perfect-correlation invariant");
  ver->add_option("--grid", verify.grid, "number of random angle settings")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ver->add_option("--families", verify.families, "random (alpha, beta) per special-zeta family")
      ->capture_default_str();
  ver->add_option("--events", verify.events, "Monte Carlo events per family")
      ->capture_default_str();
  ver->add_option("--tol", verify.tol, "residual bound for probability identities")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ver->add_option("--angle-tol", verify.angle_tol, "zeta classification tolerance (rad)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ver->add_option("--seed", verify.seed, "random seed")->capture_default_str();

  SimulateArgs simulate;
  auto* sim = app.add_subcommand("simulate", "sample Bell/polarization events to CSV");
  add_angle_flags(sim, simulate.phi, simulate.degrees);
  sim->add_option("--events", simulate.events, "number of events")->capture_default_str();
  sim->add_option("--seed", simulate.seed, "random seed")->capture_default_str();
  sim->add_option("--out", simulate.out_path, "CSV output file (stdout if omitted)");

  RefuteArgs refute;
  auto* ref = app.add_subcommand("refute", "solve the two-setting contradiction instance");
  ref->add_option("--alpha", refute.alpha, "offset of the phi1/phi2 settings")->capture_default_str();
  ref->add_option("--beta", refute.beta, "offset of the phi3/phi4 settings")->capture_default_str();
  ref->add_option("--kappa", refute.kappa, "hidden-context kappa")
      ->check(CLI::IsMember({-1, 1}))
      ->capture_default_str();
  ref->add_option("--method", refute.method, "solver")
      ->check(CLI::IsMember({"enumerate", "gf2"}))
      ->capture_default_str();
  ref->add_flag("--fig2", refute.fig2, "use the unfactored Bell/Bell constraints (expected Sat)");
  ref->add_flag("--degrees", refute.degrees, "interpret alpha and beta as degrees");

  CompileArgs compile;
  auto* comp = app.add_subcommand("compile", "compile angle settings into parity constraints");
  comp->add_option("--settings", compile.settings_path, "settings JSON file")->required();
  comp->add_option("--kappa", compile.kappa, "hidden-context kappa")
      ->check(CLI::IsMember({-1, 1}))
      ->capture_default_str();
  comp->add_option("--fig", compile.fig, "1 = Bell/polarization, 2 = Bell/Bell")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  comp->add_flag("--factorize", compile.factorize, "add F(x,y) A(x) D(y) = +1 for every F");
  comp->add_flag("--degrees", compile.degrees, "settings file angles are degrees");
  comp->add_option("--tol", compile.tol, "zeta classification tolerance (rad)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  comp->add_option("--label", compile.label, "hidden-context label");
  comp->add_option("--out", compile.out_path, "constraint JSON output (stdout if omitted)");

  SolveArgs solve;
  auto* sol = app.add_subcommand("solve", "decide a constraint JSON file");
  sol->add_option("--in", solve.in_path, "constraint JSON file")->required();
  sol->add_option("--method", solve.method, "solver")
      ->check(CLI::IsMember({"enumerate", "gf2"}))
      ->capture_default_str();
  sol->add_option("--expect", solve.expect, "exit 1 unless the status matches")
      ->check(CLI::IsMember({"sat", "unsat"}));
  sol->add_option("--out", solve.out_path, "result JSON output (stdout if omitted)");

  std::vector<const char*> cargs;
  cargs.reserve(argv.size());
  for (const auto& a : argv) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*dec) return cmd_decompose(decompose, out);
    if (*ver) return verify_qm(verify, out);
    if (*sim) return cmd_simulate(simulate, out, err);
    if (*ref) return cmd_refute(refute, out);
    if (*comp) return cmd_compile(compile, out);
    if (*sol) return cmd_solve(solve, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace swapbell::cli
