#include "fjmask/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fjmask/attacker.hpp"
#include "fjmask/dynamics.hpp"
#include "fjmask/errors.hpp"
#include "fjmask/experiments.hpp"
#include "fjmask/mask.hpp"
#include "fjmask/plot.hpp"
#include "json.hpp"

namespace fjmask {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

std::string redacted_path(const std::string& out) {
  const fs::path p(out);
  if (p.extension() == ".json")
    return (p.parent_path() / (p.stem().string() + ".redacted.json")).string();
  return out + ".redacted.json";
}

struct RedactedSystem {
  Network net;
  Eigen::VectorXd lambda;
  Eigen::VectorXd u;
};

RedactedSystem load_redacted_system(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed system JSON: ") + e.what());
  }
  if (j.contains("W"))
    throw ParameterError(
        "attack input must be the redacted system file; the eavesdropper "
        "never holds W");
  if (!j.contains("network"))
    throw ParameterError(
        "system file has no network: the attack requires knowledge of the "
        "influence graph, without it the estimate degree grows from d to n "
        "and the row becomes undiscoverable");
  Network net = Network::from_json(j["network"].dump());
  const int n = net.agent_count();
  auto vec = [&](const char* key) {
    if (!j.contains(key)) throw IoError(std::string("system JSON missing ") + key);
    auto v = j[key].get<std::vector<double>>();
    if (static_cast<int>(v.size()) != n)
      throw IoError(std::string(key) + " length does not match agent count");
    return Eigen::Map<Eigen::VectorXd>(v.data(), n).eval();
  };
  return RedactedSystem{std::move(net), vec("lambda"), vec("u")};
}

std::vector<double> errors_from_results_csv(const std::string& text,
                                            std::vector<double>* values_out) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "swept_value,trial,estimate_error")
    throw IoError("expected results CSV header 'swept_value,trial,estimate_error'");
  std::vector<double> errors;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string value_s, trial_s, error_s;
    if (!std::getline(row, value_s, ',') || !std::getline(row, trial_s, ',') ||
        !std::getline(row, error_s, ','))
      throw IoError("malformed results CSV row: " + line);
    try {
      if (values_out) values_out->push_back(std::stod(value_s));
      errors.push_back(error_s == "inf"
                           ? std::numeric_limits<double>::infinity()
                           : std::stod(error_s));
    } catch (const std::exception&) {
      throw IoError("non-numeric cell in results CSV row: " + line);
    }
  }
  if (errors.empty()) throw IoError("results CSV has no data rows");
  return errors;
}

std::vector<ValueSummary> summary_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("swept_value,count,excluded,", 0) != 0)
    throw IoError("expected a summary CSV header");
  std::vector<ValueSummary> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) throw IoError("malformed summary CSV row: " + line);
    try {
      ValueSummary s;
      s.swept_value = std::stod(cells[0]);
      s.count = std::stoi(cells[1]);
      s.excluded = std::stoi(cells[2]);
      s.fraction_infinite = std::stod(cells[3]);
      s.min = std::stod(cells[4]);
      s.q1 = std::stod(cells[5]);
      s.median = std::stod(cells[6]);
      s.q3 = std::stod(cells[7]);
      s.max = std::stod(cells[8]);
      s.mean = std::stod(cells[9]);
      rows.push_back(s);
    } catch (const std::exception&) {
      throw IoError("non-numeric cell in summary CSV row: " + line);
    }
  }
  if (rows.empty()) throw IoError("summary CSV has no data rows");
  return rows;
}

int cmd_generate(int n, int d, double lambda_lo, double lambda_hi,
                 std::uint64_t seed, bool example1, const std::string& out) {
  FjSystem sys = example1 ? example1_system()
                          : random_fj_system(
                                random_regular_network(n, d, seed), lambda_lo,
                                lambda_hi, seed);
  write_file(out, sys.to_json(false));
  write_file(redacted_path(out), sys.to_json(true));
  std::cout << "wrote " << out << " and " << redacted_path(out) << " (n="
            << sys.agent_count() << ")\n";
  return 0;
}

int cmd_simulate(const std::string& system_path, double eps, long t_max,
                 bool masked, double phi, std::uint64_t mask_seed,
                 const std::string& noise_log_path, const std::string& out) {
  const FjSystem sys = FjSystem::from_json(read_file(system_path));
  if (!is_stable(sys))
    throw NumericalError("system is unstable; opinions would not converge");
  Trajectory traj;
  if (masked) {
    MaskedRun run = simulate_masked(sys, MaskConfig(phi, mask_seed), eps, t_max);
    if (!noise_log_path.empty())
      write_file(noise_log_path, run.noise_log_to_json());
    traj = std::move(run.trajectory);
  } else {
    traj = simulate(sys, eps, t_max);
  }
  write_file(out, traj.to_csv());
  std::cout << (traj.converged ? "converged" : "step cap reached") << " at t="
            << traj.final_step() << "\n";
  if (!traj.converged)
    throw NumericalError("trajectory did not converge within the step cap");
  return 0;
}

int cmd_attack(const std::string& system_path, const std::string& traj_path,
               int agent, bool masked, double phi, const std::string& out) {
  const RedactedSystem sys = load_redacted_system(system_path);
  const Trajectory traj = Trajectory::from_csv(read_file(traj_path));
  const KnowledgeSet knowledge(sys.net, sys.u, sys.lambda, traj.states);
  if (masked) {
    const auto obs = build_observations(knowledge, agent);
    const EstimateReport report = mle_estimate(obs, phi);
    write_file(out, report.to_json(agent));
    std::cout << "agent " << agent << " estimate error: "
              << (std::isinf(report.error) ? std::string("inf")
                                           : std::to_string(report.error))
              << "\n";
  } else {
    const Identification ident = identify_unmasked(knowledge);
    nlohmann::ordered_json j;
    j["lambda_hat"] = std::vector<double>(
        ident.lambda_hat.data(), ident.lambda_hat.data() + ident.lambda_hat.size());
    std::vector<std::vector<double>> rows(ident.w_hat.rows());
    for (int i = 0; i < ident.w_hat.rows(); ++i) {
      rows[i].resize(ident.w_hat.cols());
      for (int c = 0; c < ident.w_hat.cols(); ++c) rows[i][c] = ident.w_hat(i, c);
    }
    j["W_hat"] = rows;
    j["identifiable"] = ident.identifiable;
    write_file(out, j.dump());
    std::cout << "identified lambda and W for " << ident.lambda_hat.size()
              << " agents\n";
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              int workers, bool overwrite) {
  const SweepConfig cfg = SweepConfig::from_json(read_file(config_path));
  fs::create_directories(out_dir);
  const std::string results_path = (fs::path(out_dir) / "results.csv").string();
  const std::string summary_path = (fs::path(out_dir) / "summary.csv").string();
  if (!overwrite && (fs::exists(results_path) || fs::exists(summary_path)))
    throw IoError("output files exist; pass --overwrite to replace them");
  const SweepResult result = run_sweep(cfg, workers);
  const auto summary = summarize(result);
  write_file(results_path, result.to_csv());
  write_file(summary_path, summary_to_csv(summary));
  for (const auto& s : summary) {
    std::cout << swept_parameter_name(cfg.swept) << "=" << s.swept_value
              << ": median=" << s.median << " mean=" << s.mean
              << " fraction_infinite=" << s.fraction_infinite
              << " excluded=" << s.excluded << "\n";
  }
  return 0;
}

int cmd_plot(const std::string& input, const std::string& kind,
             const std::string& input2, const std::string& out) {
  std::string svg;
  if (kind == "box") {
    svg = render_box_plot(summary_from_csv(read_file(input)));
  } else if (kind == "histogram") {
    svg = render_histogram(errors_from_results_csv(read_file(input), nullptr));
  } else if (kind == "trajectory") {
    const Trajectory top = Trajectory::from_csv(read_file(input));
    if (input2.empty()) {
      svg = render_trajectory(top);
    } else {
      const Trajectory bottom = Trajectory::from_csv(read_file(input2));
      svg = render_trajectory(top, &bottom);
    }
  } else {
    throw ParameterError("unknown plot kind: " + kind);
  }
  write_file(out, svg);
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Friedkin-Johnsen consensus simulator with an influence-"
               "structure mask and eavesdropper analysis"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "emit a random FJ system as JSON");
  int n = 100, d = 10;
  double lambda_lo = 0.0, lambda_hi = 1.0;
  std::uint64_t seed = 0;
  bool example1 = false;
  std::string gen_out;
  gen->add_option("--n", n, "agent count");
  gen->add_option("--d", d, "in-degree");
  gen->add_option("--lambda-lo", lambda_lo, "susceptibility lower bound");
  gen->add_option("--lambda-hi", lambda_hi, "susceptibility upper bound");
  gen->add_option("--seed", seed, "construction seed");
  gen->add_flag("--example1", example1, "emit the 3-agent worked example");
  gen->add_option("--out", gen_out, "output system JSON path")->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "run the opinion dynamics");
  std::string sim_system, sim_out, noise_log_path;
  double eps = 1e-4, mask_phi = 0.0;
  long t_max = 200000;
  std::uint64_t mask_seed = 0;
  sim->add_option("--system", sim_system, "system JSON path")->required();
  sim->add_option("--eps", eps, "convergence tolerance");
  sim->add_option("--t-max", t_max, "step cap");
  auto* phi_opt = sim->add_option("--mask-phi", mask_phi,
                                  "apply the decaying mask with this decay rate");
  sim->add_option("--mask-seed", mask_seed, "mask noise seed")->needs(phi_opt);
  sim->add_option("--noise-log", noise_log_path,
                  "write the mask noise log (test use only)")
      ->needs(phi_opt);
  sim->add_option("--out", sim_out, "output trajectory CSV path")->required();

  // attack
  auto* atk = app.add_subcommand("attack", "eavesdropper estimation");
  std::string atk_system, atk_traj, atk_out;
  int agent = 0;
  double atk_phi = 0.0;
  atk->add_option("--system", atk_system, "redacted system JSON path")
      ->required();
  atk->add_option("--trajectory", atk_traj, "observed trajectory CSV")
      ->required();
  atk->add_option("--agent", agent, "target agent index");
  auto* atk_phi_opt =
      atk->add_option("--phi", atk_phi, "mask decay rate (masked attack)");
  atk->add_option("--out", atk_out, "output report JSON path")->required();

  // sweep
  auto* swp = app.add_subcommand("sweep", "Monte Carlo parameter sweep");
  std::string sweep_config, sweep_out_dir;
  int workers = 1;
  bool overwrite = false;
  swp->add_option("--config", sweep_config, "sweep config JSON")->required();
  swp->add_option("--out", sweep_out_dir, "output directory")->required();
  swp->add_option("--workers", workers, "worker thread count");
  swp->add_flag("--overwrite", overwrite, "replace existing output files");

  // plot
  auto* plt = app.add_subcommand("plot", "render a static SVG figure");
  std::string plot_input, plot_input2, plot_kind, plot_out;
  plt->add_option("--input", plot_input, "input CSV")->required();
  plt->add_option("--kind", plot_kind, "box | histogram | trajectory")
      ->required();
  plt->add_option("--input2", plot_input2,
                  "second trajectory CSV (two-panel comparison)");
  plt->add_option("--out", plot_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
    if (gen->parsed())
      return cmd_generate(n, d, lambda_lo, lambda_hi, seed, example1, gen_out);
    if (sim->parsed())
      return cmd_simulate(sim_system, eps, t_max, phi_opt->count() > 0,
                          mask_phi, mask_seed, noise_log_path, sim_out);
    if (atk->parsed())
      return cmd_attack(atk_system, atk_traj, agent, atk_phi_opt->count() > 0,
                        atk_phi, atk_out);
    if (swp->parsed())
      return cmd_sweep(sweep_config, sweep_out_dir, workers, overwrite);
    if (plt->parsed())
      return cmd_plot(plot_input, plot_kind, plot_input2, plot_out);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace fjmask
