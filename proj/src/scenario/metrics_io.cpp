#include "platoon/scenario/metrics_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace platoon::scenario {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string metrics_header(std::size_t followers) {
  std::string h = "iteration,time_s";
  for (std::size_t i = 1; i <= followers; ++i) {
    const auto n = std::to_string(i);
    h += ",gap" + n + "_m,steer" + n + "_rad,speed" + n + "_mps,lost" + n;
  }
  return h;
}

std::string summary_header() {
  return "cam_hz,seed,follower,vehicle_id,rms_gap_error_m,max_gap_m,min_gap_m,steer_std_rad,"
         "lost_track_events,cams_sent,cams_received,cams_dropped,cams_out_of_range";
}

void write_metrics(std::ostream& out, const std::vector<MetricsRecord>& records,
                   std::size_t followers) {
  out << metrics_header(followers) << '\n';
  for (const auto& r : records) {
    out << r.iteration << ',' << format_double(r.time_s);
    for (std::size_t i = 0; i < followers; ++i) {
      const FollowerSample s = i < r.followers.size() ? r.followers[i] : FollowerSample{};
      out << ',' << format_double(s.gap) << ',' << format_double(s.steer) << ','
          << format_double(s.speed) << ',' << (s.lost ? 1 : 0);
    }
    out << '\n';
  }
}

void write_summary(std::ostream& out, const std::vector<RunSummary>& summaries) {
  out << summary_header() << '\n';
  for (const auto& s : summaries) {
    for (std::size_t i = 0; i < s.followers.size(); ++i) {
      const auto& f = s.followers[i];
      out << format_double(s.cam_hz) << ',' << s.seed << ',' << (i + 1) << ',' << f.vehicle_id
          << ',' << format_double(f.rms_gap_error) << ',' << format_double(f.max_gap) << ','
          << format_double(f.min_gap) << ',' << format_double(f.steer_std) << ','
          << f.lost_track_events << ',' << s.cams_sent << ',' << s.cams_received << ','
          << s.cams_dropped << ',' << s.cams_out_of_range << '\n';
    }
  }
}

namespace {

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void emit_metrics(const std::vector<MetricsRecord>& records, std::size_t followers,
                  const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { write_metrics(out, records, followers); });
}

void emit_summary(const std::vector<RunSummary>& summaries, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { write_summary(out, summaries); });
}

}  // namespace platoon::scenario
