// Command-line front end: sweeps, single-scenario optimization, the iDRF bound,
// and polynomial/envelope frontend synthesis.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tbq/envelope.hpp"
#include "tbq/errors.hpp"
#include "tbq/experiments.hpp"
#include "tbq/idrf.hpp"
#include "tbq/optimize.hpp"
#include "tbq/polynomial.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + item + "'");
    }
    if (used != item.size()) throw std::invalid_argument("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v[i]);
    out += buf;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json chain_json(const tbq::EnvelopeChain& chain) {
  return json{{"offsets", chain.offsets}, {"adc_threshold", chain.adc_threshold}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task-based quantization with non-linear analog frontends"};
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Optimize every requested scenario over sigma_n");
  std::string sweep_sigma, sweep_scenarios, sweep_out, sweep_format, sweep_config;
  double sweep_step = 0.0, sweep_range = 0.0, sweep_sigma_s = 0.0;
  sweep->add_option("--sigma-n", sweep_sigma, "Comma-separated noise levels");
  sweep->add_option("--scenarios", sweep_scenarios,
                    "Subset of linear,delay,quadratic,envelope,idrf");
  sweep->add_option("--step", sweep_step, "Threshold grid step");
  sweep->add_option("--range", sweep_range, "Threshold grid half-width in units of sigma_x");
  sweep->add_option("--sigma-s", sweep_sigma_s, "Task standard deviation");
  sweep->add_option("--out", sweep_out, "Output path (stdout when omitted)");
  sweep->add_option("--format", sweep_format, "csv, json or svg");
  sweep->add_option("--config", sweep_config, "JSON config file; flags take precedence");

  // optimize
  auto* opt = app.add_subcommand("optimize", "Optimize one scenario and print its report");
  std::string opt_scenario = "linear";
  double opt_sigma_n = 1.0, opt_sigma_s = 1.0, opt_step = 0.01, opt_range = 3.0;
  opt->add_option("--scenario", opt_scenario, "linear, quadratic, envelope or delay");
  opt->add_option("--sigma-n", opt_sigma_n, "Noise standard deviation");
  opt->add_option("--sigma-s", opt_sigma_s, "Task standard deviation");
  opt->add_option("--step", opt_step, "Threshold grid step");
  opt->add_option("--range", opt_range, "Threshold grid half-width in units of sigma_x");

  // idrf
  auto* idrf = app.add_subcommand("idrf", "Indirect distortion-rate bound");
  double idrf_sigma_n = 1.0, idrf_sigma_s = 1.0, idrf_rate = 2.0;
  bool idrf_curve = false, idrf_ba = false;
  std::size_t idrf_points = 601, idrf_recon = 121;
  auto* rate_opt = idrf->add_option("--rate", idrf_rate, "Rate in bits per symbol");
  auto* curve_opt = idrf->add_flag("--curve", idrf_curve, "Trace the Blahut-Arimoto curve");
  rate_opt->excludes(curve_opt);
  idrf->add_option("--sigma-n", idrf_sigma_n, "Noise standard deviation");
  idrf->add_option("--sigma-s", idrf_sigma_s, "Task standard deviation");
  idrf->add_flag("--blahut-arimoto", idrf_ba, "Cross-check --rate with Blahut-Arimoto");
  idrf->add_option("--points", idrf_points, "Measurement grid points (+-6 sigma_x)");
  idrf->add_option("--recon-points", idrf_recon, "Reproduction grid points");

  // emulate
  auto* emulate = app.add_subcommand("emulate", "Synthesize a polynomial bank for thresholds");
  std::string emu_thresholds;
  std::size_t emu_nq = 2, emu_delta = 2;
  emulate->add_option("--thresholds", emu_thresholds, "Comma-separated increasing thresholds")
      ->required();
  emulate->add_option("--nq", emu_nq, "Number of one-bit ADCs");
  emulate->add_option("--delta", emu_delta, "Maximum polynomial degree");

  // envelope
  auto* envelope = app.add_subcommand("envelope", "Envelope-detector chain tools");
  std::string env_check, env_synth;
  std::vector<std::string> env_induce;
  std::size_t env_nq = 0, env_delta = 0;
  bool env_shallow = false;
  auto* check_opt = envelope->add_option("--check", env_check, "Threshold list to test");
  auto* synth_opt = envelope->add_option("--synthesize", env_synth, "Fully-symmetric thresholds");
  auto* induce_opt =
      envelope->add_option("--induce", env_induce, "Offsets list and ADC threshold")->expected(2);
  check_opt->excludes(synth_opt)->excludes(induce_opt);
  synth_opt->excludes(induce_opt);
  envelope->add_option("--nq", env_nq, "With --check: number of chains");
  envelope->add_option("--delta", env_delta, "With --check: chain depth");
  envelope->add_flag("--shallow", env_shallow, "With --check: allow chains shallower than delta");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sweep) {
      tbq::SweepConfig cfg;
      cfg.sigma_n_values.clear();
      if (!sweep_config.empty()) tbq::apply_config_json(read_file(sweep_config), cfg);
      if (!sweep_sigma.empty()) cfg.sigma_n_values = parse_list(sweep_sigma);
      if (!sweep_scenarios.empty()) cfg.scenarios = split_names(sweep_scenarios);
      if (sweep->count("--step")) cfg.grid_step = sweep_step;
      if (sweep->count("--range")) cfg.grid_range = sweep_range;
      if (sweep->count("--sigma-s")) cfg.sigma_s = sweep_sigma_s;
      if (!sweep_out.empty()) cfg.output_path = sweep_out;
      if (!sweep_format.empty()) cfg.format = tbq::parse_format(sweep_format);
      if (cfg.sigma_n_values.empty()) {
        for (int i = 1; i <= 20; ++i) cfg.sigma_n_values.push_back(0.1 * i);
      }
      cfg.validate();
      const auto table = tbq::run_sweep(cfg);
      if (cfg.output_path.empty()) {
        std::cout << tbq::emit(table, cfg.format);
      } else {
        tbq::write_table(table, cfg.format, cfg.output_path);
      }
      return kExitOk;
    }

    if (*opt) {
      tbq::ScenarioSpec spec;
      spec.kind = tbq::scenario_from_string(opt_scenario);
      spec.model = tbq::GaussianTaskModel(opt_sigma_s, opt_sigma_n);
      spec.grid_step = opt_step;
      spec.grid_range = opt_range;
      std::cout << tbq::report_to_json(tbq::optimize_scenario(spec)) << "\n";
      return kExitOk;
    }

    if (*idrf) {
      const tbq::GaussianTaskModel model(idrf_sigma_s, idrf_sigma_n);
      if (idrf_curve || idrf_ba) {
        const auto dm = tbq::discretize(model, 6.0, idrf_points);
        const auto d = tbq::reduce_to_direct(dm, tbq::default_reconstruction_grid(model, idrf_recon));
        if (idrf_curve) {
          std::cout << "rate_bits,distortion,slope,closed_form\n";
          const auto slopes = tbq::default_slopes();
          for (const auto& p : tbq::trace_rd_curve(d, dm.x_pmf, slopes)) {
            std::printf("%.9g,%.9g,%.9g,%.9g\n", p.rate, p.distortion, p.slope,
                        tbq::gaussian_idrf(model, p.rate));
          }
          return kExitOk;
        }
        const auto p = tbq::solve_for_rate(d, dm.x_pmf, idrf_rate);
        json j{{"sigma_s", idrf_sigma_s},
               {"sigma_n", idrf_sigma_n},
               {"rate_bits", idrf_rate},
               {"closed_form", tbq::gaussian_idrf(model, idrf_rate)},
               {"blahut_arimoto", {{"rate_bits", p.rate}, {"distortion", p.distortion}, {"slope", p.slope}}}};
        std::cout << j.dump(2) << "\n";
        return kExitOk;
      }
      std::printf("%.9g\n", tbq::gaussian_idrf(model, idrf_rate));
      return kExitOk;
    }

    if (*emulate) {
      const auto thresholds = parse_list(emu_thresholds);
      const auto code = tbq::build_associated_code(thresholds.size(), emu_nq, emu_delta);
      const auto bank = tbq::synthesize_polynomials(thresholds, code, emu_delta);
      json polys = json::array();
      for (const auto& p : bank.polynomials) polys.push_back(p.coefficients());
      const bool ok = tbq::verify_emulation(bank, thresholds);
      json j{{"thresholds", thresholds},
             {"nq", emu_nq},
             {"delta", emu_delta},
             {"associated_code", code.to_string()},
             {"polynomials", polys},
             {"verified", ok}};
      std::cout << j.dump(2) << "\n";
      return ok ? kExitOk : kExitNumeric;
    }

    if (*envelope) {
      if (!env_induce.empty()) {
        tbq::EnvelopeChain chain;
        chain.offsets = parse_list(env_induce.at(0));
        const auto t = parse_list(env_induce.at(1));
        if (t.size() != 1) throw std::invalid_argument("--induce expects a single ADC threshold");
        chain.adc_threshold = t.front();
        std::cout << join(tbq::induced_thresholds(chain)) << "\n";
        return kExitOk;
      }
      if (!env_synth.empty()) {
        const auto chain = tbq::synthesize_envelope_chain(parse_list(env_synth));
        std::cout << chain_json(chain).dump(2) << "\n";
        return kExitOk;
      }
      if (!env_check.empty()) {
        const auto v = parse_list(env_check);
        if (env_nq == 0 && env_delta == 0) {
          std::cout << (tbq::is_fully_symmetric(v) ? "true" : "false") << "\n";
          return kExitOk;
        }
        if (env_nq == 0 || env_delta == 0) {
          throw std::invalid_argument("--nq and --delta must be given together");
        }
        const auto verdict = tbq::is_achievable_envelope_set(v, env_nq, env_delta, env_shallow);
        json j{{"achievable", verdict.achievable}, {"witness", verdict.witness}};
        std::cout << j.dump(2) << "\n";
        return kExitOk;
      }
      throw std::invalid_argument("envelope needs one of --check, --synthesize, --induce");
    }
  } catch (const tbq::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
