// platoon_sim: run the CAM-based platoon scenario or a CAM-frequency sweep.
//
//   platoon_sim run   --config config/default_scenario.json --out out/
//   platoon_sim sweep --config config/default_scenario.json --cam-hz 10,5,2.5 --seeds 1,2,3 --out out/

#include "platoon/scenario/config.hpp"
#include "platoon/scenario/metrics_io.hpp"
#include "platoon/scenario/runner.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace platoon;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> duration_s;
  std::optional<double> loss_prob;
  std::optional<double> jitter_ms;
  std::optional<double> lost_timeout_s;
  std::optional<double> gap_m;

  void add_to(CLI::App& app) {
    app.add_option("--seed", seed, "Override the config seed");
    app.add_option("--duration", duration_s, "Override duration_s");
    app.add_option("--loss-prob", loss_prob, "Override channel.loss_prob");
    app.add_option("--jitter-ms", jitter_ms, "Override channel.delay_jitter_ms");
    app.add_option("--lost-timeout", lost_timeout_s, "Override controller.lost_track_timeout_s");
    app.add_option("--gap", gap_m, "Override controller.gap_setpoint_m");
  }

  void apply(scenario::ScenarioConfig& cfg) const {
    if (seed) cfg.seed = *seed;
    if (duration_s) cfg.duration = cosim::from_seconds(*duration_s);
    if (loss_prob) cfg.channel.loss_prob = *loss_prob;
    if (jitter_ms) cfg.channel.delay_jitter = cosim::from_seconds(*jitter_ms * 1e-3);
    if (lost_timeout_s) cfg.follower.lost_track_timeout = cosim::from_seconds(*lost_timeout_s);
    if (gap_m) cfg.follower.gap_setpoint = *gap_m;
  }
};

std::size_t follower_count(const scenario::ScenarioConfig& cfg) {
  std::size_t n = 0;
  for (const auto& v : cfg.vehicles) n += v.role == scenario::Role::Follower ? 1 : 0;
  return n;
}

std::string hz_tag(double hz) {
  std::string s = scenario::format_double(hz);
  for (char& c : s) {
    if (c == '.') c = 'p';
  }
  return s;
}

void print_summary(const scenario::RunSummary& s) {
  std::cout << "cam_hz=" << scenario::format_double(s.cam_hz) << " seed=" << s.seed
            << " cams sent=" << s.cams_sent << " received=" << s.cams_received
            << " dropped=" << s.cams_dropped << '\n';
  for (std::size_t i = 0; i < s.followers.size(); ++i) {
    const auto& f = s.followers[i];
    std::cout << "  follower " << (i + 1) << " (car" << f.vehicle_id
              << "): rms_gap_error=" << scenario::format_double(f.rms_gap_error)
              << " m, gap=[" << scenario::format_double(f.min_gap) << ", "
              << scenario::format_double(f.max_gap)
              << "] m, steer_std=" << scenario::format_double(f.steer_std)
              << " rad, lost_track_events=" << f.lost_track_events << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CAM-based vehicle platooning co-simulation"};
  app.require_subcommand(1);

  std::string run_config;
  std::string run_out;
  std::optional<double> run_hz;
  Overrides run_over;
  auto* run = app.add_subcommand("run", "Run one scenario and write metrics.csv and summary.csv");
  run->add_option("--config", run_config, "Scenario config (JSON)")->required();
  run->add_option("--out", run_out, "Output directory")->required();
  run->add_option("--cam-hz", run_hz, "Override cam_hz");
  run_over.add_to(*run);

  std::string sweep_config;
  std::string sweep_out;
  std::vector<double> sweep_hz{10.0, 5.0, 2.5};
  std::vector<std::uint64_t> sweep_seeds;
  Overrides sweep_over;
  auto* sweep = app.add_subcommand("sweep", "Run every (cam_hz, seed) pair and write summary.csv");
  sweep->add_option("--config", sweep_config, "Scenario config (JSON)")->required();
  sweep->add_option("--out", sweep_out, "Output directory")->required();
  sweep->add_option("--cam-hz", sweep_hz, "CAM frequencies in Hz")->delimiter(',')->capture_default_str();
  sweep->add_option("--seeds", sweep_seeds, "Seeds (default: config seed)")->delimiter(',');
  sweep_over.add_to(*sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = scenario::load_config(run_config);
      run_over.apply(cfg);
      if (run_hz) cfg.cam_hz = *run_hz;
      cfg.validate();
      fs::create_directories(run_out);
      const auto result = scenario::run_scenario(cfg);
      scenario::emit_metrics(result.records, follower_count(cfg), fs::path(run_out) / "metrics.csv");
      scenario::emit_summary({result.summary}, fs::path(run_out) / "summary.csv");
      print_summary(result.summary);
    } else if (*sweep) {
      auto cfg = scenario::load_config(sweep_config);
      sweep_over.apply(cfg);
      cfg.validate();
      if (sweep_seeds.empty()) sweep_seeds.push_back(cfg.seed);
      fs::create_directories(sweep_out);
      const auto runs = scenario::run_sweep(cfg, sweep_hz, sweep_seeds);
      std::vector<scenario::RunSummary> summaries;
      for (const auto& r : runs) {
        const auto name = "metrics_" + hz_tag(r.cam_hz) + "hz_seed" + std::to_string(r.seed) + ".csv";
        scenario::emit_metrics(r.result.records, follower_count(cfg), fs::path(sweep_out) / name);
        summaries.push_back(r.result.summary);
        print_summary(r.result.summary);
      }
      scenario::emit_summary(summaries, fs::path(sweep_out) / "summary.csv");
    }
  } catch (const scenario::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
