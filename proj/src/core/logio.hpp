#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "core/env.hpp"

namespace asknav {

// JSON-Lines episode log schema. A file starts with one header record, then
// per episode: one record per step followed by one trailer record.
inline constexpr const char* kLogSchema = "asknav.episode.v1";

struct StepRecord {
  int t = 0;  // 1-based
  std::string action;
  Pose pose;
  double reward = 0.0;
  double lambda = 0.0;
  double delta_lambda = 0.0;
  std::string action_class;
  bool teacher_present = false;
  std::string feedback_kind;
  bool asked = false;
  bool target_in_view = false;
  std::optional<std::vector<double>> phi;  // row-major ledger snapshot
};

struct EpisodeTrailer {
  bool success = false;
  int steps = 0;
  int shortest_path_len = -1;  // -1 = unreachable
  std::string scene_id;
  std::string target;
  uint64_t seed = 0;
  double lambda_0 = 0.0;
  bool scene_seen = true;
  bool object_seen = true;
};

struct EpisodeLog {
  std::vector<StepRecord> records;
  EpisodeTrailer trailer;
};

StepRecord make_step_record(const StepResult& result, int t, bool teacher_present);

std::string step_record_line(const StepRecord& rec);
std::string trailer_line(const EpisodeTrailer& trailer);
std::string header_line(const std::string& config_hash);

class LogWriter {
public:
  LogWriter(const std::string& path, const std::string& config_hash);
  void write(const EpisodeLog& log);
  void write_trailer_only(const EpisodeTrailer& trailer);
  void close();

private:
  std::ofstream out_;
  std::string path_;
};

// Parses one or more log files; validates the schema header and the
// per-episode invariants (step count, non-increasing lambda).
std::vector<EpisodeLog> read_logs(const std::string& path);
std::vector<EpisodeLog> read_logs(const std::vector<std::string>& paths);
std::string read_log_config_hash(const std::string& path);

}  // namespace asknav
