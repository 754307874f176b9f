#include "cher/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cher/dephasing.hpp"
#include "cher/io.hpp"
#include "cher/lie.hpp"
#include "cher/mode_oracle.hpp"
#include "cher/nonclassicality.hpp"
#include "cher/retrieval.hpp"
#include "cher/spin_boson.hpp"
#include "cher/st0.hpp"

namespace cher::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

struct Common {
  std::string out_dir;
};

// Parameters of one run; the hash of its JSON form tags every output.
struct RunConfig {
  Json params;

  std::string hash() const { return io::fnv1a_hex(params.dump()); }
};

struct Outputs {
  fs::path dir;
  std::string hash;
  Json files = Json::array();

  fs::path write(const std::string& name, const std::string& content) {
    const fs::path p = dir / name;
    io::write_atomic(p, content);
    files.push_back(p.string());
    return p;
  }
};

Json summary(const std::string& command, const RunConfig& cfg, const Outputs& out) {
  Json j;
  j["command"] = command;
  j["format"] = io::kFormatVersion;
  j["config_hash"] = cfg.hash();
  j["config"] = cfg.params;
  j["outputs"] = out.files;
  return j;
}

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "cher-out";
}

std::string root_table_csv(const RootSystem& roots) {
  std::string s = "# jacobian " + io::format_double(roots.jacobian) + "\nindex,row,col,positive,simple";
  for (int k = 2; k <= roots.n; ++k) s += ",lambda" + std::to_string(diagonal_index(k));
  s += "\n";
  for (const auto& r : roots.roots) {
    s += std::to_string(r.index) + "," + std::to_string(r.row) + "," + std::to_string(r.col) + "," +
         (r.positive ? "1" : "0") + "," + (r.simple ? "1" : "0");
    for (Eigen::Index d = 0; d < r.vector.size(); ++d) {
      const double v = std::abs(r.vector(d)) < 1e-15 ? 0.0 : r.vector(d);
      s += "," + io::format_double(v);
    }
    s += "\n";
  }
  return s;
}

SpectralDensity spectral_density(const std::string& model, double wc, const std::string& table) {
  if (model == "ohmic") return SpectralDensity::ohmic(wc);
  if (model == "table") {
    require(!table.empty(), "--table is required with --model table");
    return io::load_spectral_table(table);
  }
  throw ValidationError("unknown spectral model '" + model + "' (expected ohmic or table)");
}

Json report_json(const InversionReport& rep) {
  Json j;
  j["strategy"] = rep.strategy;
  j["t_max"] = rep.t_max;
  j["dt"] = rep.dt;
  j["samples"] = rep.samples;
  j["windowed"] = rep.windowed;
  j["tail_modulus"] = rep.tail_modulus;
  j["max_imag_residue"] = rep.max_imag_residue;
  j["mass_defect"] = rep.mass_defect;
  Json fr = Json::object();
  for (const auto& [name, err] : rep.forward_residuals) fr[name] = err;
  j["forward_residuals"] = std::move(fr);
  return j;
}

int run_error(std::ostream& err, const std::string& message, int code) {
  err << "error: " << message << "\n";
  return code;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hamiltonian-ensemble retrieval and nonclassicality of pure-dephasing dynamics", "cher"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--out", common.out_dir, std::string("Output directory (default $") + kOutputDirEnv + " or ./cher-out)");

  // roots
  auto* roots_cmd = app.add_subcommand("roots", "Print the root table of su(n) as CSV");
  int roots_n = 3;
  roots_cmd->add_option("--n", roots_n, "Dimension n >= 2")->required();

  // factors
  auto* factors_cmd = app.add_subcommand("factors", "Spin-boson dephasing factors on a uniform time grid");
  std::string model = "ohmic", table;
  double wc = 1.0, temperature = 0.0, prefactor = 1.0, t_max = 40.0;
  int qubits = 2;
  std::size_t samples = 401;
  factors_cmd->add_option("--model", model, "ohmic or table")->capture_default_str();
  factors_cmd->add_option("--wc", wc, "Ohmic cutoff frequency")->capture_default_str();
  factors_cmd->add_option("--table", table, "Spectral-density table CSV (omega, J)");
  factors_cmd->add_option("--temperature", temperature, "Bath temperature (k_B = hbar = 1)")->capture_default_str();
  factors_cmd->add_option("--prefactor", prefactor, "Coupling prefactor")->capture_default_str();
  factors_cmd->add_option("--qubits", qubits, "1 (n = 2) or 2 (n = 4)")->capture_default_str();
  factors_cmd->add_option("--t-max", t_max, "Final time in units of 1/wc")->capture_default_str();
  factors_cmd->add_option("--samples", samples, "Number of time samples")->capture_default_str();

  // retrieve
  auto* retrieve_cmd = app.add_subcommand("retrieve", "Invert dephasing factors into quasi-distributions");
  std::string input;
  Inversion1DOptions inv;
  PairInversionOptions pair;
  retrieve_cmd->add_option("--input", input, "Dephasing-factor CSV")->required();
  retrieve_cmd->add_flag("--window", inv.window, "Raised-cosine taper before inversion");
  retrieve_cmd->add_option("--window-fraction", inv.window_fraction)->capture_default_str();
  retrieve_cmd->add_option("--refine", inv.refine, "Output grid refinement factor")->capture_default_str();
  retrieve_cmd->add_option("--wc", wc, "Ohmic cutoff (pair strategy)")->capture_default_str();
  retrieve_cmd->add_option("--grid", pair.half_samples, "Pair kernel half-grid N")->capture_default_str();
  retrieve_cmd->add_option("--pair-t-max", pair.t_max, "Pair kernel span in units of 1/wc")->capture_default_str();

  // measure
  auto* measure_cmd = app.add_subcommand("measure", "Nonclassicality of a quasi-distribution file");
  std::string method = "negativity";
  MeasureOptions measure;
  bool no_refine = false;
  bool span_check = false;
  measure_cmd->add_option("--input", input, "QuasiDistribution CSV or JSON")->required();
  measure_cmd->add_option("--method", method, "negativity or lp")->capture_default_str();
  measure_cmd->add_option("--lp-cap", measure.lp_cell_cap, "Largest grid for the LP oracle")->capture_default_str();
  measure_cmd->add_flag("--no-refine", no_refine, "Skip the 2x grid refinement check");

  // chi
  auto* chi_cmd = app.add_subcommand("chi", "Process-matrix conversions");
  std::string from_factors;
  chi_cmd->add_option("--input", input, "ChiSeries JSON to reconstruct into a map and factors");
  chi_cmd->add_option("--from-factors", from_factors, "Dephasing-factor CSV to convert into a ChiSeries");

  // st0
  auto* st0_cmd = app.add_subcommand("st0", "Singlet-triplet qubit tomography");
  st0_cmd->require_subcommand(1);
  auto* st0_sim = st0_cmd->add_subcommand("simulate", "Simulate, recover p(omega) and run the noise study");
  ST0Params st0;
  double db_mt = st0.delta_b * 1e3;
  NoiseConfig noise;
  double tau_max = 120.0, tau_step = 0.1;
  st0_sim->add_option("--j", st0.j, "Exchange J in micro-eV")->capture_default_str();
  st0_sim->add_option("--db", db_mt, "Hyperfine gradient in mT")->capture_default_str();
  st0_sim->add_option("--t2star", st0.t2star, "T2* in ns")->capture_default_str();
  st0_sim->add_option("--noise-sigma", noise.sigma)->capture_default_str();
  st0_sim->add_option("--repeats", noise.repeats)->capture_default_str();
  st0_sim->add_option("--seed", noise.seed)->capture_default_str();
  st0_sim->add_option("--tau-max", tau_max, "Last delay in ns")->capture_default_str();
  st0_sim->add_option("--tau-step", tau_step, "Delay step in ns")->capture_default_str();

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Few-mode spin-boson oracle");
  std::string modes_file, oracle_method;
  oracle_cmd->add_option("--modes", modes_file, "ModeConfig JSON")->required();
  oracle_cmd->add_option("--method", oracle_method, "analytic-displacement or truncated-fock");
  oracle_cmd->add_option("--t-max", t_max)->capture_default_str();
  oracle_cmd->add_option("--samples", samples)->capture_default_str();

  // pipeline
  auto* pipeline_cmd = app.add_subcommand("pipeline", "End-to-end pipelines");
  pipeline_cmd->require_subcommand(1);
  auto* pair_cmd = pipeline_cmd->add_subcommand("pair-ohmic", "Qubit pair in an Ohmic bath at T = 0");
  pair_cmd->add_option("--wc", wc)->capture_default_str();
  pair_cmd->add_option("--grid", pair.half_samples, "Kernel half-grid N")->capture_default_str();
  pair_cmd->add_option("--t-max", pair.t_max, "Kernel span in units of 1/wc")->capture_default_str();
  pair_cmd->add_option("--samples", samples, "Factor samples on [0, t-max]")->capture_default_str();
  pair_cmd->add_flag("--span-check", span_check, "Re-invert on a doubled x-span and report the change in N");
  auto* rel_cmd = pipeline_cmd->add_subcommand("relative-phase", "Single-qubit nonclassicality versus relative phase");
  double phi_min = 0.0, phi_max = kPi;
  int phi_steps = 9, n_modes = 256;
  double scale = 1.0;
  std::size_t rel_samples = 801;
  double rel_t_max = 40.0;
  rel_cmd->add_option("--phi-min", phi_min)->capture_default_str();
  rel_cmd->add_option("--phi-max", phi_max)->capture_default_str();
  rel_cmd->add_option("--phi-steps", phi_steps)->capture_default_str();
  rel_cmd->add_option("--modes", n_modes, "Number of bath modes")->capture_default_str();
  rel_cmd->add_option("--scale", scale, "Coupling scale")->capture_default_str();
  rel_cmd->add_option("--wc", wc)->capture_default_str();
  rel_cmd->add_option("--temperature", temperature)->capture_default_str();
  rel_cmd->add_option("--t-max", rel_t_max, "Final time in units of 1/wc")->capture_default_str();
  rel_cmd->add_option("--samples", rel_samples)->capture_default_str();
  rel_cmd->add_flag("--window", inv.window, "Raised-cosine taper before inversion");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* target = &app;
    for (CLI::App* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front(); sub;
         sub = sub->get_subcommands().empty() ? nullptr : sub->get_subcommands().front()) {
      target = sub;
    }
    err << target->help();
    return 1;
  }

  try {
    Outputs outputs;
    outputs.dir = output_dir(common.out_dir);
    RunConfig cfg;

    if (*roots_cmd) {
      cfg.params = {{"command", "roots"}, {"n", roots_n}};
      require(roots_n >= 2, "--n must be at least 2");
      const std::string csv = root_table_csv(root_system(roots_n));
      out << csv;
      if (!common.out_dir.empty()) outputs.write("roots_n" + std::to_string(roots_n) + ".csv", csv);
      return 0;
    }

    if (*factors_cmd) {
      cfg.params = {{"command", "factors"}, {"model", model},   {"wc", wc},           {"table", table},
                    {"temperature", temperature}, {"prefactor", prefactor}, {"qubits", qubits},
                    {"t_max", t_max},  {"samples", samples}};
      require(qubits == 1 || qubits == 2, "--qubits must be 1 or 2");
      require(wc > 0.0 && t_max > 0.0 && samples >= 2, "--wc, --t-max and --samples must be positive");
      const SpectralDensity sd = spectral_density(model, wc, table);
      const BathParams bath{temperature, prefactor};
      const auto times = uniform_time_grid(t_max / wc, samples);
      const ModelFactors m = compute_theta_phi(sd, bath, times);
      const DephasingFactors f = qubits == 1 ? single_qubit_factor(m) : qubit_pair_factors(m);
      outputs.hash = cfg.hash();
      outputs.write("factors.csv", io::to_csv(f, outputs.hash));
      Json s = summary("factors", cfg, outputs);
      s["n"] = f.n;
      s["samples"] = times.size();
      out << s.dump(2) << "\n";
      return 0;
    }

    if (*retrieve_cmd) {
      cfg.params = {{"command", "retrieve"},           {"input", input},           {"window", inv.window},
                    {"window_fraction", inv.window_fraction}, {"refine", inv.refine}, {"wc", wc},
                    {"grid", pair.half_samples},       {"pair_t_max", pair.t_max}};
      outputs.hash = cfg.hash();
      const DephasingFactors f = io::load_factors(input);
      const RootSystem roots = root_system(f.n);
      Json reports = Json::array();
      const bool product = is_simple_root_product(f, roots);
      if (product) {
        for (int s : roots.simple_indices) {
          const std::string label = "x" + std::to_string(s);
          InversionReport rep;
          const QuasiDistribution q = invert_1d(f.times, f.at(s), label, inv, &rep);
          outputs.write("quasi_" + label + ".csv", io::to_csv(q, outputs.hash));
          Json r = report_json(rep);
          r["label"] = label;
          reports.push_back(std::move(r));
        }
      } else {
        InversionReport rep;
        const QuasiDistribution q =
            invert_pair_correlated(f, SpectralDensity::ohmic(wc), BathParams{}, pair, &rep);
        outputs.write("quasi_x1_x13.csv", io::to_csv(q, outputs.hash));
        reports.push_back(report_json(rep));
      }
      Json s = summary("retrieve", cfg, outputs);
      s["reports"] = std::move(reports);
      out << s.dump(2) << "\n";
      return 0;
    }

    if (*measure_cmd) {
      cfg.params = {{"command", "measure"}, {"input", input}, {"method", method},
                    {"lp_cap", measure.lp_cell_cap}, {"refine", !no_refine}};
      outputs.hash = cfg.hash();
      const QuasiDistribution q = io::load_quasi(input);
      NonclassicalityResult r;
      if (method == "negativity") {
        r = nonclassicality_negativity(q, measure);
        if (!no_refine && q.dims() > 0) {
          QuasiDistribution fine = refine_2x(q);
          const double mass = fine.mass();
          for (double& v : fine.values) v /= mass;
          r.refinement_delta = nonclassicality_negativity(fine, measure).value - r.value;
        }
      } else if (method == "lp" || method == "lp-oracle") {
        r = nonclassicality_lp(q, measure);
      } else {
        throw ValidationError("unknown method '" + method + "' (expected negativity or lp)");
      }
      const Json j = io::to_json(r, outputs.hash);
      outputs.write("measure.json", j.dump(2) + "\n");
      out << j.dump(2) << "\n";
      return 0;
    }

    if (*chi_cmd) {
      cfg.params = {{"command", "chi"}, {"input", input}, {"from_factors", from_factors}};
      outputs.hash = cfg.hash();
      require(input.empty() != from_factors.empty(), "give exactly one of --input or --from-factors");
      Json s;
      if (!from_factors.empty()) {
        const DephasingFactors f = io::load_factors(from_factors);
        const GeneratorSet gens = build_generators(f.n);
        io::save_chi_series(outputs.dir / "chi.json", chi_from_map(map_from_factors(f), gens), outputs.hash);
        outputs.files.push_back((outputs.dir / "chi.json").string());
        s = summary("chi", cfg, outputs);
      } else {
        const ChiSeries c = io::load_chi_series(input);
        const GeneratorSet gens = build_generators(c.n);
        const DynamicalMapSeries m = reconstruct_from_chi(c, gens);
        outputs.write("map.csv", io::to_csv(m, outputs.hash));
        PureDephasingCheck check;
        const DephasingFactors f = factors_from_map(m, 1e-8, &check);
        outputs.write("factors.csv", io::to_csv(f, outputs.hash));
        s = summary("chi", cfg, outputs);
        s["cp_violation"] = m.cp_violation;
        s["max_offdiagonal"] = check.max_offdiagonal;
      }
      out << s.dump(2) << "\n";
      return 0;
    }

    if (*st0_sim) {
      st0.delta_b = db_mt * 1e-3;
      cfg.params = {{"command", "st0 simulate"}, {"j", st0.j},       {"db_mT", db_mt},
                    {"t2star", st0.t2star},      {"noise_sigma", noise.sigma}, {"repeats", noise.repeats},
                    {"seed", noise.seed},        {"tau_max", tau_max}, {"tau_step", tau_step}};
      outputs.hash = cfg.hash();
      require(tau_max > 0.0 && tau_step > 0.0, "--tau-max and --tau-step must be positive");
      const auto count = static_cast<std::size_t>(std::llround(tau_max / tau_step)) + 1;
      const auto tau = uniform_time_grid(tau_step * static_cast<double>(count - 1), count);
      const ReturnProbabilities p = simulate_return_probs(st0, tau);
      const Trajectory traj = to_trajectory(p);
      const AxisFit fit = identify_axis(traj);
      InversionReport rep;
      const QuasiDistribution q = recover_distribution(traj, fit, false, {}, &rep);
      const NonclassicalityResult noiseless = nonclassicality_negativity(q);
      outputs.write("probabilities.csv", io::table_csv({"tau", "PX", "PY", "PZ"}, {p.tau, p.px, p.py, p.pz},
                                                       "return_probabilities", outputs.hash));
      std::vector<double> rx, ry, rz;
      for (const auto& r : traj.r) {
        rx.push_back(r[0]);
        ry.push_back(r[1]);
        rz.push_back(r[2]);
      }
      outputs.write("trajectory.csv", io::table_csv({"tau", "rx", "ry", "rz"}, {traj.tau, rx, ry, rz}, "trajectory",
                                                    outputs.hash));
      outputs.write("p_omega.csv", io::to_csv(q, outputs.hash));
      Json result;
      result["omega"] = fit.omega;
      result["omega_expected"] = st0.omega();
      result["Omega"] = fit.tilt;
      result["Omega_deg"] = fit.tilt * 180.0 / kPi;
      result["N_noiseless"] = noiseless.value;
      if (noise.sigma > 0.0) {
        const NoiseStudy study = noise_study(st0, tau, noise);
        result["N_mean"] = study.mean;
        result["N_std"] = study.std;
        result["failures"] = study.failures;
      } else {
        result["N_mean"] = noiseless.value;
        result["N_std"] = 0.0;
        result["failures"] = 0;
      }
      result["format"] = io::kFormatVersion;
      result["kind"] = "st0_result";
      result["config_hash"] = outputs.hash;
      outputs.write("result.json", result.dump(2) + "\n");
      Json s = summary("st0 simulate", cfg, outputs);
      s["result"] = result;
      out << s.dump(2) << "\n";
      return 0;
    }

    if (*oracle_cmd) {
      ModeConfig mc = io::load_mode_config(modes_file);
      if (!oracle_method.empty()) mc.method = parse_method(oracle_method);
      cfg.params = {{"command", "oracle"}, {"modes", io::to_json(mc)}, {"t_max", t_max}, {"samples", samples}};
      outputs.hash = cfg.hash();
      require(t_max > 0.0 && samples >= 2, "--t-max and --samples must be positive");
      OracleReport report;
      const DephasingFactors f = reduced_coherences(mc, uniform_time_grid(t_max, samples), &report);
      outputs.write("factors.csv", io::to_csv(f, outputs.hash));
      Json s = summary("oracle", cfg, outputs);
      s["method"] = to_string(mc.method);
      s["max_leakage"] = report.max_leakage;
      out << s.dump(2) << "\n";
      return 0;
    }

    if (*pair_cmd) {
      cfg.params = {{"command", "pipeline pair-ohmic"}, {"wc", wc}, {"grid", pair.half_samples},
                    {"t_max", pair.t_max}, {"samples", samples}, {"span_check", span_check}};
      outputs.hash = cfg.hash();
      require(wc > 0.0 && samples >= 2, "--wc and --samples must be positive");
      const SpectralDensity sd = SpectralDensity::ohmic(wc);
      const auto times = uniform_time_grid(pair.t_max / wc, samples);
      const DephasingFactors f = qubit_pair_factors(sd, BathParams{}, times);
      outputs.write("factors.csv", io::to_csv(f, outputs.hash));
      InversionReport rep;
      const QuasiDistribution q = invert_pair_correlated(f, sd, BathParams{}, pair, &rep);
      outputs.write("quasi_x1_x13.csv", io::to_csv(q, outputs.hash));
      NonclassicalityResult r = nonclassicality_negativity(q);
      r.inversion = rep;
      if (span_check) {
        // Same kernel span with half the time step: twice the x-span at the same x step.
        PairInversionOptions wide = pair;
        wide.half_samples *= 2;
        r.span_delta = nonclassicality_negativity(invert_pair_correlated(f, sd, BathParams{}, wide)).value - r.value;
      }
      const Json j = io::to_json(r, outputs.hash);
      outputs.write("measure.json", j.dump(2) + "\n");
      Json s = summary("pipeline pair-ohmic", cfg, outputs);
      s["measure"] = j;
      out << s.dump(2) << "\n";
      return 0;
    }

    if (*rel_cmd) {
      cfg.params = {{"command", "pipeline relative-phase"}, {"phi_min", phi_min}, {"phi_max", phi_max},
                    {"phi_steps", phi_steps}, {"modes", n_modes},  {"scale", scale},
                    {"wc", wc}, {"temperature", temperature}, {"t_max", rel_t_max},
                    {"samples", rel_samples}, {"window", inv.window}};
      outputs.hash = cfg.hash();
      require(phi_steps >= 1 && n_modes >= 1 && rel_samples >= 2, "--phi-steps, --modes and --samples must be positive");
      RelativePhaseConfig rc;
      rc.sd = SpectralDensity::ohmic(wc);
      rc.bath.temperature = temperature;
      rc.n_modes = n_modes;
      rc.coupling_scale = scale;
      const auto times = uniform_time_grid(rel_t_max / wc, rel_samples);
      std::vector<double> phis, values, refined;
      for (int k = 0; k < phi_steps; ++k) {
        const double phi = phi_steps == 1 ? phi_min : phi_min + (phi_max - phi_min) * k / (phi_steps - 1);
        const DephasingFactors f = relative_phase_factor(phi, rc, times);
        DynamicsOptions dyn;
        dyn.inversion = inv;
        dyn.inversion.forward_check = false;
        const NonclassicalityResult r = nonclassicality_of_dynamics(f, root_system(2), dyn);
        phis.push_back(phi);
        values.push_back(r.value);
        refined.push_back(r.value + r.refinement_delta.value_or(0.0));
      }
      outputs.write("relative_phase.csv",
                    io::table_csv({"phi", "N", "N_refined"}, {phis, values, refined}, "relative_phase", outputs.hash));
      Json s = summary("pipeline relative-phase", cfg, outputs);
      s["N"] = values;
      out << s.dump(2) << "\n";
      return 0;
    }
    return run_error(err, "no subcommand given", 1);
  } catch (const NumericalError& e) {
    return run_error(err, e.what(), 2);
  } catch (const ValidationError& e) {
    return run_error(err, e.what(), 1);
  } catch (const fs::filesystem_error& e) {
    return run_error(err, e.what(), 1);
  } catch (const std::exception& e) {
    return run_error(err, e.what(), 2);
  }
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

}  // namespace cher::cli
