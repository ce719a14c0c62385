#include "cli.hpp"

#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "qbench/error.hpp"
#include "qbench/protocols.hpp"
#include "qbench/qasm.hpp"
#include "qbench/report.hpp"
#include "qbench/serialize.hpp"

namespace qbench::cli {

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<int> repetitions;
  std::string out;
};

void emit(const Globals& g, const std::string& text, std::ostream& out) {
  if (g.out.empty()) {
    out << text;
  } else {
    write_text_file(g.out, text);
  }
}

Json stats_json(const CircuitStats& s) {
  return {{"width", s.width},
          {"depth", s.depth},
          {"gate_density", s.gate_density},
          {"measurement_density", s.measurement_density},
          {"gate_count", s.gate_count},
          {"two_qubit_count", s.two_qubit_count},
          {"measure_count", s.measure_count}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qbench: benchmark harness for simulated quantum processors", "qbench"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  int repetitions = 1;
  auto* seed_opt = app.add_option("--seed", seed, "master seed")->check(CLI::NonNegativeNumber);
  auto* rep_opt = app.add_option("--repetitions", repetitions, "repetitions per protocol")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "write the main output here instead of stdout");

  // verify
  auto* verify = app.add_subcommand("verify", "XEB device verification");
  verify->fallthrough();
  std::string device_path, noise_path;
  XebVerifyOptions vopt;
  verify->add_option("--device", device_path, "device model (devmodel/1)")->required()->check(CLI::ExistingFile);
  verify->add_option("--noise", noise_path, "noise overrides JSON")->check(CLI::ExistingFile);
  verify->add_option("--n", vopt.n, "qubits");
  verify->add_option("--depth", vopt.depth, "layers, 0 for max(n, 8)");
  verify->add_option("--circuits", vopt.circuits, "random circuits");
  verify->add_option("--shots", vopt.shots, "shots per circuit");
  verify->add_option("--threshold", vopt.threshold, "minimum normalized XEB fidelity");

  // run
  auto* runc = app.add_subcommand("run", "run a benchmark suite");
  runc->fallthrough();
  std::string config_path, text_path;
  bool peak = false;
  runc->add_option("--config", config_path, "run configuration (runcfg/1)")->required()->check(CLI::ExistingFile);
  runc->add_flag("--peak", peak, "also run the peak pipeline");
  runc->add_option("--text", text_path, "also write the text rendering here");

  // report
  auto* reportc = app.add_subcommand("report", "render a report");
  reportc->fallthrough();
  std::string in_path, format = "text";
  reportc->add_option("--in", in_path, "report JSON")->required()->check(CLI::ExistingFile);
  reportc->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  // check
  auto* check = app.add_subcommand("check", "self-verify a report");
  check->fallthrough();
  std::string check_path;
  std::size_t reexecute = 0;
  check->add_option("--report", check_path, "report JSON")->required()->check(CLI::ExistingFile);
  check->add_option("--reexecute", reexecute, "items per result to re-execute from their seeds");

  // parse / stats
  auto* parse = app.add_subcommand("parse", "parse OpenQASM 2.0 into circuit JSON");
  parse->fallthrough();
  std::string qasm_path;
  parse->add_option("--qasm", qasm_path, "OpenQASM file")->required()->check(CLI::ExistingFile);
  auto* stats = app.add_subcommand("stats", "circuit statistics of an OpenQASM file");
  stats->fallthrough();
  stats->add_option("--qasm", qasm_path, "OpenQASM file")->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (seed_opt->count()) g.seed = seed;
  if (rep_opt->count()) g.repetitions = repetitions;

  try {
    if (*verify) {
      DeviceModel d = device_from_json(load_json_file(device_path));
      NoiseModel noise = NoiseModel::from_device(d);
      if (!noise_path.empty()) noise = noise_from_json(load_json_file(noise_path), noise, d.n_qubits);
      Rng rng = protocol_rng(g.seed.value_or(0), "verification", 0);
      XebVerification v = xeb_verify_device(d, noise, vopt, rng);
      Json j = {{"device", d.name},
                {"master_seed", g.seed.value_or(0)},
                {"verification", to_json(v)},
                {"verified", v.verified}};
      emit(g, canonical_json(j), out);
      err << (v.verified ? "device verified" : "device verification failed") << ": fidelity " << v.fidelity
          << " (threshold " << v.threshold << ")\n";
      return v.verified ? kExitOk : kExitUnverified;
    }
    if (*runc) {
      RunConfig cfg = load_run_config(config_path);
      if (g.seed) cfg.seed = *g.seed;
      if (g.repetitions) cfg.repetitions = *g.repetitions;
      if (peak && !cfg.peak) cfg.peak = default_peak_config(cfg.seed);
      if (!text_path.empty()) cfg.text_path = text_path;
      Report r = run_benchmark_suite(cfg);
      std::string json = render_report(r, ReportFormat::Json);
      if (!g.out.empty()) {
        write_text_file(g.out, json);
      } else if (!cfg.report_path.empty()) {
        write_text_file(cfg.report_path, json);
      } else {
        out << json;
      }
      if (!cfg.text_path.empty()) write_text_file(cfg.text_path, render_report(r, ReportFormat::Text));
      err << report_status_name(r.status) << "\n";
      return r.status == ReportStatus::VerificationFailed ? kExitUnverified : kExitOk;
    }
    if (*reportc) {
      Report r = load_report(in_path);
      emit(g, render_report(r, report_format_from_name(format)), out);
      return kExitOk;
    }
    if (*check) {
      SelfVerifyOptions opt;
      opt.reexecute = reexecute;
      SelfVerifyResult res = self_verify_report(load_json_file(check_path), opt);
      std::string text = "status: " + verify_status_name(res.status) + "\nchecked: " + std::to_string(res.checked) +
                         "\nreexecuted: " + std::to_string(res.reexecuted) + "\n";
      for (const auto& d : res.discrepancies) text += "discrepancy: " + d + "\n";
      for (const auto& u : res.unverifiable) text += "unverifiable: " + u + "\n";
      emit(g, text, out);
      return res.ok() ? kExitOk : kExitDiscrepancy;
    }
    if (*parse) {
      Circuit c = parse_qasm(read_text_file(qasm_path));
      emit(g, canonical_json(to_json(c)), out);
      return kExitOk;
    }
    if (*stats) {
      Circuit c = parse_qasm(read_text_file(qasm_path));
      emit(g, canonical_json(stats_json(circuit_stats(c))), out);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qbench::cli
