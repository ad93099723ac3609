#include "core/logio.hpp"

#include <json.hpp>

namespace asknav {

using nlohmann::json;

StepRecord make_step_record(const StepResult& result, int t, bool teacher_present) {
  StepRecord rec;
  rec.t = t;
  rec.pose = result.info.pose;
  rec.reward = result.reward;
  rec.lambda = result.info.lambda;
  rec.delta_lambda = result.info.delta_lambda;
  rec.action_class = action_class_name(result.info.action_class);
  rec.teacher_present = teacher_present;
  rec.feedback_kind = feedback_kind_name(result.info.feedback_kind);
  rec.asked = result.info.asked;
  rec.target_in_view = result.info.target_in_view;
  return rec;
}

std::string step_record_line(const StepRecord& rec) {
  json j;
  j["t"] = rec.t;
  j["action"] = rec.action;
  j["pose"] = {{"x", rec.pose.cell.x}, {"y", rec.pose.cell.y},
               {"h", std::string(1, heading_char(rec.pose.heading))}};
  j["reward"] = rec.reward;
  j["lambda"] = rec.lambda;
  j["delta_lambda"] = rec.delta_lambda;
  j["action_class"] = rec.action_class;
  j["teacher_present"] = rec.teacher_present;
  j["feedback_kind"] = rec.feedback_kind;
  j["asked"] = rec.asked;
  j["target_in_view"] = rec.target_in_view;
  if (rec.phi) j["phi"] = *rec.phi;
  return j.dump();
}

std::string trailer_line(const EpisodeTrailer& trailer) {
  json j;
  j["outcome"] = trailer.success ? "success" : "failure";
  j["steps"] = trailer.steps;
  j["shortest_path_len"] = trailer.shortest_path_len;
  j["scene_id"] = trailer.scene_id;
  j["target"] = trailer.target;
  j["seed"] = trailer.seed;
  j["lambda_0"] = trailer.lambda_0;
  j["scene_seen"] = trailer.scene_seen;
  j["object_seen"] = trailer.object_seen;
  return j.dump();
}

std::string header_line(const std::string& config_hash) {
  json j;
  j["schema"] = kLogSchema;
  j["config_hash"] = config_hash;
  return j.dump();
}

LogWriter::LogWriter(const std::string& path, const std::string& config_hash)
    : out_(path), path_(path) {
  if (!out_) fail(Errc::io, "cannot open log for write: " + path);
  out_ << header_line(config_hash) << "\n";
}

void LogWriter::write(const EpisodeLog& log) {
  for (const StepRecord& rec : log.records) out_ << step_record_line(rec) << "\n";
  out_ << trailer_line(log.trailer) << "\n";
  if (!out_) fail(Errc::io, "log write failed: " + path_);
}

void LogWriter::write_trailer_only(const EpisodeTrailer& trailer) {
  out_ << trailer_line(trailer) << "\n";
  if (!out_) fail(Errc::io, "log write failed: " + path_);
}

void LogWriter::close() {
  out_.close();
  if (out_.fail()) fail(Errc::io, "log close failed: " + path_);
}

namespace {

[[noreturn]] void log_fail(const std::string& path, int line, const std::string& msg) {
  fail(Errc::parse, path + ":" + std::to_string(line) + ": " + msg);
}

StepRecord parse_step(const json& j, const std::string& path, int lineno) {
  StepRecord rec;
  try {
    rec.t = j.at("t").get<int>();
    rec.action = j.at("action").get<std::string>();
    const json& pose = j.at("pose");
    rec.pose.cell = {pose.at("x").get<int>(), pose.at("y").get<int>()};
    std::string h = pose.at("h").get<std::string>();
    auto heading = h.size() == 1 ? heading_from_char(h[0]) : std::nullopt;
    if (!heading) log_fail(path, lineno, "invalid heading in pose");
    rec.pose.heading = *heading;
    rec.reward = j.at("reward").get<double>();
    rec.lambda = j.at("lambda").get<double>();
    rec.delta_lambda = j.at("delta_lambda").get<double>();
    rec.action_class = j.at("action_class").get<std::string>();
    rec.teacher_present = j.at("teacher_present").get<bool>();
    rec.feedback_kind = j.at("feedback_kind").get<std::string>();
    rec.asked = j.at("asked").get<bool>();
    rec.target_in_view = j.at("target_in_view").get<bool>();
    if (j.contains("phi")) rec.phi = j.at("phi").get<std::vector<double>>();
  } catch (const json::exception& e) {
    log_fail(path, lineno, std::string("bad step record: ") + e.what());
  }
  return rec;
}

EpisodeTrailer parse_trailer(const json& j, const std::string& path, int lineno) {
  EpisodeTrailer trailer;
  try {
    std::string outcome = j.at("outcome").get<std::string>();
    if (outcome != "success" && outcome != "failure")
      log_fail(path, lineno, "outcome must be success or failure");
    trailer.success = outcome == "success";
    trailer.steps = j.at("steps").get<int>();
    trailer.shortest_path_len = j.at("shortest_path_len").get<int>();
    trailer.scene_id = j.at("scene_id").get<std::string>();
    trailer.target = j.at("target").get<std::string>();
    trailer.seed = j.at("seed").get<uint64_t>();
    trailer.lambda_0 = j.at("lambda_0").get<double>();
    trailer.scene_seen = j.at("scene_seen").get<bool>();
    trailer.object_seen = j.at("object_seen").get<bool>();
  } catch (const json::exception& e) {
    log_fail(path, lineno, std::string("bad trailer record: ") + e.what());
  }
  return trailer;
}

}  // namespace

std::vector<EpisodeLog> read_logs(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open log: " + path);
  std::vector<EpisodeLog> logs;
  EpisodeLog current;
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) log_fail(path, lineno, "invalid JSON");
    if (j.contains("schema")) {
      std::string schema = j.at("schema").get<std::string>();
      if (schema != kLogSchema)
        log_fail(path, lineno, "unsupported log schema '" + schema + "' (want " + kLogSchema + ")");
      saw_header = true;
      continue;
    }
    if (!saw_header) log_fail(path, lineno, "missing schema header record");
    if (j.contains("outcome")) {
      current.trailer = parse_trailer(j, path, lineno);
      if (current.trailer.steps != static_cast<int>(current.records.size()))
        log_fail(path, lineno,
                 "trailer steps " + std::to_string(current.trailer.steps) + " != record count " +
                     std::to_string(current.records.size()));
      double prev_lambda = current.trailer.lambda_0;
      for (const StepRecord& rec : current.records) {
        if (rec.lambda > prev_lambda + 1e-9)
          log_fail(path, lineno, "lambda increased within episode ending here");
        prev_lambda = rec.lambda;
      }
      logs.push_back(std::move(current));
      current = EpisodeLog{};
    } else {
      current.records.push_back(parse_step(j, path, lineno));
    }
  }
  if (!current.records.empty())
    fail(Errc::parse, path + ": trailing step records without an episode trailer");
  return logs;
}

std::vector<EpisodeLog> read_logs(const std::vector<std::string>& paths) {
  std::vector<EpisodeLog> all;
  for (const std::string& path : paths) {
    std::vector<EpisodeLog> logs = read_logs(path);
    all.insert(all.end(), std::make_move_iterator(logs.begin()), std::make_move_iterator(logs.end()));
  }
  return all;
}

std::string read_log_config_hash(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open log: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("schema")) break;
    return j.value("config_hash", "");
  }
  fail(Errc::parse, path + ": missing schema header record");
}

}  // namespace asknav
