#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

namespace mpnormal::cli {

using nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = MPNORMAL_VERSION;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json complex_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

Tolerances resolve_tolerances(const Options& opt, const InstanceFile& file) {
  Tolerances tol = file.effective_tolerances(tolerances_from_environment());
  for (const auto& item : opt.tol_overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--tol expects name=value, got '" + item + "'");
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "--tol value is not a number: '" + item + "'");
    }
    tol.set(item.substr(0, eq), value);
  }
  return tol;
}

ordered_json validation_json(const ValidationReport& r, std::size_t n) {
  return {{"block", n},
          {"hermitian_defect", r.hermitian_defect},
          {"positivity_margin", r.positivity_margin},
          {"unitarity_defect", r.unitarity_defect},
          {"commutation_defect", r.commutation_defect},
          {"interval_ok", r.interval_ok},
          {"verdict", r.valid ? "valid" : "invalid"},
          {"reasons", r.reasons}};
}

ordered_json evidence_json(const std::vector<EvidenceItem>& items) {
  ordered_json out = ordered_json::array();
  for (const auto& e : items) out.push_back({{"kind", e.kind}, {"detail", e.detail}, {"value", e.value}});
  return out;
}

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

// --- commands -------------------------------------------------------------

int cmd_validate(const InstanceFile& file, const Tolerances& tol, ordered_json& results, std::string& csv) {
  ordered_json blocks = ordered_json::array();
  std::ostringstream os;
  os << "block,hermitian_defect,positivity_margin,unitarity_defect,commutation_defect,interval_ok,verdict\n";
  bool all_valid = true;
  for (std::size_t n = 0; n < file.blocks.size(); ++n) {
    const auto r = validate_block(file.blocks[n], tol.validation);
    all_valid = all_valid && r.valid;
    blocks.push_back(validation_json(r, n + 1));
    os << n + 1 << "," << g17(r.hermitian_defect) << "," << g17(r.positivity_margin) << "," << g17(r.unitarity_defect)
       << "," << g17(r.commutation_defect) << "," << (r.interval_ok ? "true" : "false") << ","
       << (r.valid ? "valid" : "invalid") << "\n";
  }
  bool order_ok = true;
  for (std::size_t n = 1; n < file.blocks.size(); ++n) {
    order_ok = order_ok && file.blocks[n - 1].interval().b() < file.blocks[n].interval().a();
  }
  results["blocks"] = std::move(blocks);
  results["intervals_ordered"] = order_ok;
  results["verdict"] = all_valid && order_ok ? "valid" : "invalid";
  csv = os.str();
  return all_valid && order_ok ? kExitOk : kExitValidation;
}

int cmd_spectrum(const Instance& instance, const Options& opt, const Tolerances& tol, ordered_json& results,
                 std::string& csv) {
  const auto slice = operator_spectrum(instance, opt.k_max, tol);
  results = spectrum_to_json(slice);
  const auto structure = verify_normal_spectrum_structure(slice);
  results["structure_check"] = {{"pass", structure.pass}, {"failures", structure.failures}};
  csv = spectrum_to_csv(slice);
  return kExitOk;
}

int cmd_schatten(const InstanceFile& file, const Instance& instance, const Options& opt, const Tolerances& tol,
                 ordered_json& results, std::string& csv) {
  const auto verdict = schatten_membership(instance, opt.p, opt.k_max, file.growth_model, tol);
  results["p"] = opt.p;
  results["k_max"] = opt.k_max;
  results["verdict"] = to_string(verdict.verdict);
  results["partial_sum"] = verdict.series.partial_sum;
  if (std::isfinite(verdict.series.tail_bound)) {
    results["tail_bound"] = verdict.series.tail_bound;
    results["total_upper"] = verdict.series.total();
  } else {
    results["tail_bound"] = "infinite";
  }
  results["mode_tail_note"] = verdict.series.mode_tail_note;
  results["evidence"] = evidence_json(verdict.evidence);
  results["mu"] = verdict.series.mu;

  const Complex probe(opt.probe_re, opt.probe_im);
  ordered_json discrete;
  try {
    const auto d = discrete_spectrum_check(instance, file.growth_model, probe, ResolventTarget::coefficient, tol);
    discrete["probe"] = complex_json(probe);
    discrete["resolvent_norms"] = d.resolvent_norms;
    discrete["decreasing"] = d.decreasing;
    discrete["truncation_verdict"] = to_string(d.truncation_verdict);
    if (d.model_verdict) discrete["model_verdict"] = to_string(*d.model_verdict);
    discrete["evidence"] = evidence_json(d.evidence);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ProbeInSpectrum) throw;
    discrete["error"] = e.what();
  }
  results["discrete_spectrum"] = std::move(discrete);

  std::vector<double> inverse_norms;
  for (const auto& b : instance.blocks()) inverse_norms.push_back(1.0 / spectral_distance(b, Complex(0.0, 0.0)));
  std::optional<Sequence> inverse_model;
  if (file.growth_model) {
    const auto law = file.growth_model->lambda1.asymptotic();
    inverse_model = Sequence::power(1.0 / law.coefficient, -law.exponent);
  }
  const auto norm = direct_sum_norm(inverse_norms, inverse_model);
  results["inverse_coefficient_norm"] = {{"value", norm.value}};
  if (norm.certified_bounded) results["inverse_coefficient_norm"]["certified_bounded"] = *norm.certified_bounded;

  std::ostringstream os;
  os << "q,mu\n";
  for (std::size_t q = 0; q < verdict.series.mu.size(); ++q) os << q + 1 << "," << g17(verdict.series.mu[q]) << "\n";
  csv = os.str();
  return kExitOk;
}

int cmd_verify(const Instance& instance, const Options& opt, const Tolerances& tol, ordered_json& results,
               std::string& csv) {
  std::vector<Check> checks;
  const bool use_char = opt.oracle == "char" || opt.oracle == "both";
  const bool use_fd = opt.oracle == "fd" || opt.oracle == "both";
  double max_set_distance = 0.0;

  for (std::size_t n = 0; n < instance.size(); ++n) {
    const Block& block = instance.block(n);
    const std::string tag = "block" + std::to_string(n + 1) + ".";
    const auto modes = simultaneous_eigenbasis(block, tol.mode_residual, tol.cluster);
    const auto records = block_eigenvalues(block, modes, opt.k_max, n + 1);
    std::vector<Complex> formula;
    for (const auto& r : records) formula.push_back(r.lambda);

    if (use_char) {
      const auto oracle = characteristic_eigenvalues(block, opt.k_max);
      // Enumerations can differ at |k| = k_max when a phase sits on the branch
      // cut; compare each interior point against the other full set.
      std::vector<Complex> formula_inner, oracle_inner;
      const double len = block.length();
      const double reach = (2.0 * static_cast<double>(opt.k_max) - 1.0) * std::numbers::pi / len;
      for (Complex z : formula)
        if (std::abs(z.imag()) <= reach) formula_inner.push_back(z);
      for (Complex z : oracle)
        if (std::abs(z.imag()) <= reach) oracle_inner.push_back(z);
      const double dist = std::max(max_matched_distance(formula_inner, oracle, HUGE_VAL),
                                   max_matched_distance(oracle_inner, formula, HUGE_VAL));
      max_set_distance = std::max(max_set_distance, dist);
      checks.push_back({tag + "char_set_distance", dist, tol.set_distance, dist <= tol.set_distance});

      double worst = 0.0;
      for (Complex z : formula) worst = std::max(worst, characteristic_residual(block, z));
      checks.push_back({tag + "char_residual_max", worst, tol.char_residual, worst <= tol.char_residual});
    }

    if (use_fd) {
      const std::size_t count = std::min<std::size_t>(3 * block.dim(), block.dim() * opt.grid);
      const auto fd = fd_eigenvalues(block, opt.grid, count);
      const double im_limit = std::numbers::pi * (static_cast<double>(opt.grid) / 8.0) / block.length();
      const long wide_k = std::max<long>(opt.k_max, 8);
      const auto wide = block_eigenvalues(block, modes, wide_k, n + 1);
      std::vector<Complex> exact;
      for (const auto& r : wide) exact.push_back(r.lambda);
      const double dist = max_matched_distance(fd, exact, im_limit);
      checks.push_back({tag + "fd_match_max", dist, tol.fd_match, dist <= tol.fd_match});
      double worst = 0.0;
      for (Complex z : fd) worst = std::max(worst, characteristic_residual(block, z));
      checks.push_back({tag + "fd_char_residual_max", worst, 1e-2, worst <= 1e-2});
    }
  }

  const auto slice = operator_spectrum(instance, opt.k_max, tol);
  const auto structure = verify_normal_spectrum_structure(slice);
  checks.push_back({"structure", structure.pass ? 0.0 : 1.0, 0.0, structure.pass});

  bool all = true;
  ordered_json list = ordered_json::array();
  std::ostringstream os;
  os << "check,value,threshold,pass\n";
  for (const auto& c : checks) {
    all = all && c.pass;
    list.push_back({{"check", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
    os << c.name << "," << g17(c.value) << "," << g17(c.threshold) << "," << (c.pass ? "pass" : "fail") << "\n";
  }
  results["oracle"] = opt.oracle;
  results["grid"] = opt.grid;
  if (use_char) results["max_set_distance"] = max_set_distance;
  results["checks"] = std::move(list);
  results["pass"] = all;
  csv = os.str();
  return all ? kExitOk : kExitOracle;
}

}  // namespace

ordered_json spectrum_to_json(const SpectrumSlice& slice) {
  ordered_json out;
  out["k_max"] = slice.k_max;
  out["m_max"] = slice.m_max;
  out["complete_modes"] = slice.complete_modes;
  ordered_json recs = ordered_json::array();
  for (const auto& r : slice.records) {
    recs.push_back({{"block", r.block_index},
                    {"m", r.mode_index},
                    {"k", r.k},
                    {"re", r.lambda.real()},
                    {"im", r.lambda.imag()},
                    {"delta", r.delta}});
  }
  out["records"] = std::move(recs);
  return out;
}

std::string spectrum_to_csv(const SpectrumSlice& slice) {
  std::ostringstream os;
  os << "block,m,k,re,im,delta\n";
  for (const auto& r : slice.records) {
    os << r.block_index << "," << r.mode_index << "," << r.k << "," << g17(r.lambda.real()) << ","
       << g17(r.lambda.imag()) << "," << g17(r.delta) << "\n";
  }
  return os.str();
}

std::string strip_wall_time(const std::string& report_json) {
  auto doc = ordered_json::parse(report_json);
  doc.erase("wall_time_ms");
  return doc.dump();
}

CommandResult run_command(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  if (opt.format != "json" && opt.format != "csv") throw Error(ErrorCode::InvalidArgument, "--format must be json or csv");
  if (opt.oracle != "char" && opt.oracle != "fd" && opt.oracle != "both") {
    throw Error(ErrorCode::InvalidArgument, "--oracle must be char, fd or both");
  }
  if (opt.k_max < 0) throw Error(ErrorCode::InvalidArgument, "--k-max must be >= 0");
  if (opt.format == "csv" && opt.command == "report") {
    throw Error(ErrorCode::InvalidArgument, "report bundles several tables and is JSON only");
  }

  // Structural parse first; validation failures become a reported verdict for
  // `validate` and exit 1 elsewhere.
  std::ifstream in(opt.instance);
  if (!in) throw InstanceError(ErrorCode::ParseError, {"cannot open '" + opt.instance.string() + "'"});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const InstanceFile file = parse_instance_text(buffer.str());
  const Tolerances tol = resolve_tolerances(opt, file);

  CommandResult result;
  ordered_json& rep = result.report;
  rep["tool"] = "mpnormal";
  rep["tool_version"] = kToolVersion;
  rep["command"] = opt.command;
  rep["flags"] = {{"k_max", opt.k_max}, {"p", opt.p},           {"grid", opt.grid},
                  {"oracle", opt.oracle}, {"format", opt.format}, {"probe", {opt.probe_re, opt.probe_im}},
                  {"tolerances", tol.as_map()}};
  rep["instance_digest"] = instance_digest(file);
  ordered_json results;

  if (opt.command == "validate") {
    result.exit_code = cmd_validate(file, tol, results, result.csv);
  } else {
    try {
      validate_instance_file(file, tol);
    } catch (const InstanceError& e) {
      ordered_json v;
      v["error"] = std::string(to_string(e.code()));
      v["violations"] = e.violations();
      rep["results"] = {{"validation", v}};
      result.exit_code = kExitValidation;
      ordered_json detail;
      cmd_validate(file, tol, detail, result.csv);
      rep["results"]["validation"]["blocks"] = detail["blocks"];
      rep["wall_time_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      return result;
    }
    const Instance instance = file.to_instance();
    if (opt.command == "spectrum") {
      result.exit_code = cmd_spectrum(instance, opt, tol, results, result.csv);
    } else if (opt.command == "schatten") {
      result.exit_code = cmd_schatten(file, instance, opt, tol, results, result.csv);
    } else if (opt.command == "verify") {
      result.exit_code = cmd_verify(instance, opt, tol, results, result.csv);
    } else if (opt.command == "report") {
      std::string unused;
      ordered_json part;
      int code = cmd_validate(file, tol, part, unused);
      results["validate"] = std::move(part);
      part = ordered_json();
      cmd_spectrum(instance, opt, tol, part, unused);
      results["spectrum"] = std::move(part);
      part = ordered_json();
      cmd_schatten(file, instance, opt, tol, part, unused);
      results["schatten"] = std::move(part);
      part = ordered_json();
      code = std::max(code, cmd_verify(instance, opt, tol, part, unused));
      results["verify"] = std::move(part);
      result.exit_code = code;
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown command '" + opt.command + "'");
    }
  }
  rep["results"] = std::move(results);
  rep["wall_time_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra and Schatten-class tests for multipoint normal first-order differential operators"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("instance", opt.instance, "Instance file (JSON)")->required();
    sub->add_option("--k-max", opt.k_max, "Fourier truncation |k| <= k_max")->capture_default_str();
    sub->add_option("--p", opt.p, "Schatten exponent")->capture_default_str();
    sub->add_option("--grid", opt.grid, "Finite-difference intervals N")->capture_default_str();
    sub->add_option("--oracle", opt.oracle, "char | fd | both")->capture_default_str();
    sub->add_option("--format", opt.format, "json | csv")->capture_default_str();
    sub->add_option("--tol", opt.tol_overrides, "Tolerance override name=value (repeatable)");
    sub->add_option("--out", opt.out, "Write output here instead of stdout");
    sub->add_option("--probe-re", opt.probe_re, "Resolvent probe, real part")->capture_default_str();
    sub->add_option("--probe-im", opt.probe_im, "Resolvent probe, imaginary part")->capture_default_str();
  };
  for (const char* name : {"validate", "spectrum", "schatten", "verify", "report"}) {
    add_common(app.add_subcommand(name, std::string("Run ") + name));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  opt.command = app.get_subcommands().front()->get_name();

  CommandResult result;
  try {
    result = run_command(opt);
  } catch (const Error& e) {
    err << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::ValidationError:
      case ErrorCode::OrderError:
      case ErrorCode::InvalidBlock: return kExitValidation;
      default: return kExitUsage;
    }
  }

  const std::string text = opt.format == "csv" ? result.csv : result.report.dump(2) + "\n";
  if (opt.out) {
    std::ofstream file(*opt.out);
    if (!file) {
      err << "cannot write '" << opt.out->string() << "'\n";
      return kExitUsage;
    }
    file << text;
  } else {
    out << text;
  }
  return result.exit_code;
}

}  // namespace mpnormal::cli
