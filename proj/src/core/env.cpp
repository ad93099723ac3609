#include "core/env.hpp"

#include <algorithm>
#include <cmath>

namespace asknav {

const char* action_name(Action a) {
  switch (a) {
    case Action::RotateLeft: return "rotate_left";
    case Action::RotateRight: return "rotate_right";
    case Action::MoveForward: return "move_forward";
    case Action::Stop: return "stop";
    case Action::Ask: return "ask";
  }
  return "?";
}

std::optional<Action> action_from_name(const std::string& name) {
  for (int i = 0; i < kActionCount; ++i) {
    Action a = static_cast<Action>(i);
    if (name == action_name(a)) return a;
  }
  return std::nullopt;
}

const char* action_class_name(ActionClass c) {
  switch (c) {
    case ActionClass::Nav: return "nav";
    case ActionClass::Ask: return "ask";
    case ActionClass::Terminal: return "terminal";
  }
  return "?";
}

const char* feedback_variant_name(FeedbackVariant v) {
  switch (v) {
    case FeedbackVariant::Mask: return "mask";
    case FeedbackVariant::Binary: return "binary";
    case FeedbackVariant::NoisyMask: return "noisy";
    case FeedbackVariant::Language: return "language";
  }
  return "?";
}

std::optional<FeedbackVariant> feedback_variant_from_name(const std::string& name) {
  for (int i = 0; i < 4; ++i) {
    FeedbackVariant v = static_cast<FeedbackVariant>(i);
    if (name == feedback_variant_name(v)) return v;
  }
  return std::nullopt;
}

const char* feedback_kind_name(Feedback::Kind k) {
  switch (k) {
    case Feedback::Kind::Absent: return "absent";
    case Feedback::Kind::Mask: return "mask";
    case Feedback::Kind::Binary: return "binary";
    case Feedback::Kind::NoisyMask: return "noisy_mask";
    case Feedback::Kind::Language: return "language";
  }
  return "?";
}

Cell window_slot_cell(const Pose& pose, int row, int col) {
  const int depth = kWindowDepth - row;
  const int lateral = col - kWindowWidth / 2;
  const Cell f = heading_vec(pose.heading);
  const Cell r = heading_vec(rotate_right(pose.heading));
  return {pose.cell.x + depth * f.x + lateral * r.x, pose.cell.y + depth * f.y + lateral * r.y};
}

std::optional<std::pair<int, int>> window_slot_of_cell(const Pose& pose, Cell c) {
  const Cell f = heading_vec(pose.heading);
  const Cell r = heading_vec(rotate_right(pose.heading));
  const int dx = c.x - pose.cell.x;
  const int dy = c.y - pose.cell.y;
  const int depth = dx * f.x + dy * f.y;
  const int lateral = dx * r.x + dy * r.y;
  if (depth < 1 || depth > kWindowDepth) return std::nullopt;
  if (lateral < -(kWindowWidth / 2) || lateral > kWindowWidth / 2) return std::nullopt;
  return std::make_pair(ViewWindow::row_for_depth(depth), ViewWindow::col_for_lateral(lateral));
}

int window_block_of_slot(int row, int col) {
  const int block_row = std::min(row / (kWindowDepth / 3), 2);
  const int block_col = std::min(col / (kWindowWidth / 3), 2);
  return block_row * 3 + block_col;
}

const char* window_block_name(int block) {
  static const char* kNames[9] = {"top-left", "top",    "top-right",   "left",  "middle",
                                  "right",    "bottom-left", "bottom", "bottom-right"};
  if (block < 0 || block > 8) fail(Errc::invalid_argument, "window_block_name: block out of range");
  return kNames[block];
}

Mask ground_truth_mask(const ViewWindow& window, const std::string& target_category) {
  Mask mask{};
  for (int i = 0; i < kWindowSlots; ++i)
    if (window.slots[i].kind == SlotKind::Object && window.slots[i].category == target_category)
      mask[i] = 1;
  return mask;
}

Mask perturb_mask(const Mask& mask, const NoiseParams& params, Rng& rng) {
  int r0 = kWindowDepth, r1 = -1, c0 = kWindowWidth, c1 = -1;
  for (int row = 0; row < kWindowDepth; ++row)
    for (int col = 0; col < kWindowWidth; ++col)
      if (mask[row * kWindowWidth + col]) {
        r0 = std::min(r0, row);
        r1 = std::max(r1, row);
        c0 = std::min(c0, col);
        c1 = std::max(c1, col);
      }
  if (r1 < 0) return mask;  // nothing to perturb

  // Draw order is part of the format: axis, scale, then the four edge
  // jitters top/bottom/left/right.
  const int axis = rand_int(rng, 0, 1);  // 0 horizontal, 1 vertical
  const double scale = rand_real(rng, params.scale_min, params.scale_max);
  const int jt = rand_int(rng, -params.jitter_cells, params.jitter_cells);
  const int jb = rand_int(rng, -params.jitter_cells, params.jitter_cells);
  const int jl = rand_int(rng, -params.jitter_cells, params.jitter_cells);
  const int jr = rand_int(rng, -params.jitter_cells, params.jitter_cells);

  double fr0 = r0, fr1 = r1, fc0 = c0, fc1 = c1;
  if (axis == 0) {
    const double cc = (fc0 + fc1) / 2.0;
    fc0 = cc - scale * (cc - fc0);
    fc1 = cc + scale * (fc1 - cc);
  } else {
    const double cr = (fr0 + fr1) / 2.0;
    fr0 = cr - scale * (cr - fr0);
    fr1 = cr + scale * (fr1 - cr);
  }
  int nr0 = static_cast<int>(std::floor(fr0 + 0.5)) + jt;
  int nr1 = static_cast<int>(std::floor(fr1 + 0.5)) + jb;
  int nc0 = static_cast<int>(std::floor(fc0 + 0.5)) + jl;
  int nc1 = static_cast<int>(std::floor(fc1 + 0.5)) + jr;
  nr0 = std::max(nr0, 0);
  nc0 = std::max(nc0, 0);
  nr1 = std::min(nr1, kWindowDepth - 1);
  nc1 = std::min(nc1, kWindowWidth - 1);

  Mask out{};
  if (nr0 <= nr1 && nc0 <= nc1)
    for (int row = nr0; row <= nr1; ++row)
      for (int col = nc0; col <= nc1; ++col) out[row * kWindowWidth + col] = 1;
  return out;
}

namespace {
constexpr double kCloseThresholdUnits = 1.0;  // the task's success radius
}

std::string language_feedback(const ViewWindow& window, const std::string& target_category,
                              const std::string& target_color, double dist_units, bool asked) {
  if (!asked) return "The target object is " + target_category + ".";
  Mask mask = ground_truth_mask(window, target_category);
  int slot = -1;
  for (int i = 0; i < kWindowSlots; ++i)
    if (mask[i]) slot = i;
  if (slot < 0) return "The " + target_category + " is absent from the frame.";
  const int block = window_block_of_slot(slot / kWindowWidth, slot % kWindowWidth);
  const std::string range = dist_units <= kCloseThresholdUnits ? "close" : "far";
  return "The " + target_color + " " + target_category + " is " + range + ", at the " +
         window_block_name(block) + " of the frame.";
}

Feedback make_feedback(FeedbackVariant variant, const ViewWindow& window,
                       const std::string& target_category, const std::string& target_color,
                       double dist_units, bool asked, const NoiseParams& noise, Rng& rng) {
  Feedback fb;
  const Mask gt = ground_truth_mask(window, target_category);
  const bool in_frame = std::any_of(gt.begin(), gt.end(), [](uint8_t v) { return v != 0; });
  switch (variant) {
    case FeedbackVariant::Mask:
      if (asked) {
        fb.kind = Feedback::Kind::Mask;
        fb.mask = gt;
      }
      break;
    case FeedbackVariant::Binary:
      fb.kind = Feedback::Kind::Binary;
      fb.binary = asked ? (in_frame ? 1 : 0) : -1;
      break;
    case FeedbackVariant::NoisyMask:
      if (asked) {
        fb.kind = Feedback::Kind::NoisyMask;
        fb.mask = perturb_mask(gt, noise, rng);
      }
      break;
    case FeedbackVariant::Language:
      fb.kind = Feedback::Kind::Language;
      fb.text = language_feedback(window, target_category, target_color, dist_units, asked);
      break;
  }
  return fb;
}

bool is_success(const GridScene& scene, const Pose& pose, Cell target_cell, double success_radius,
                const FovParams& fov) {
  if (!scene.is_free(target_cell)) return false;
  if (euclid_dist(pose.cell, target_cell, scene.cell_size) > success_radius) return false;
  return cell_in_fov(pose, target_cell, fov, scene.cell_size) && ray_clear(scene, pose.cell, target_cell);
}

Episode::Episode(std::shared_ptr<const GridScene> scene, EpisodeConfig config)
    : scene_(std::move(scene)), config_(std::move(config)) {
  if (!scene_) fail(Errc::invalid_argument, "Episode: null scene");
}

const Observation& Episode::reset() {
  if (config_.max_steps < 1) fail(Errc::invalid_argument, "Episode: max_steps must be >= 1");
  auto it = scene_->objects.find(config_.target_category);
  if (it == scene_->objects.end())
    fail(Errc::validation,
         "Episode: scene " + scene_->id + " has no object '" + config_.target_category + "'");
  target_cell_ = it->second.cell;
  target_color_ = it->second.color;
  pose_ = scene_->start;
  ledger_ = LikelihoodMap::init(*scene_);
  lambda0_ = lambda_ = ledger_.lambda();
  steps_ = 0;
  done_ = false;
  started_ = true;
  noise_rng_ = make_rng(config_.seed, 0x4e);
  obs_ = make_observation(idle_feedback());
  return obs_;
}

const Observation& Episode::observation() const {
  if (!started_) fail(Errc::state, "Episode: not reset");
  return obs_;
}

ViewWindow Episode::render_window() const {
  ViewWindow window;
  for (int row = 0; row < kWindowDepth; ++row) {
    for (int col = 0; col < kWindowWidth; ++col) {
      Cell c = window_slot_cell(pose_, row, col);
      WindowSlot& slot = window.at(row, col);
      if (!scene_->in_bounds(c)) continue;
      if (!cell_in_fov(pose_, c, config_.fov, scene_->cell_size)) continue;
      if (!ray_clear(*scene_, pose_.cell, c)) continue;
      if (scene_->is_blocked(c)) {
        slot.kind = SlotKind::Blocked;
        continue;
      }
      slot.kind = SlotKind::Free;
      for (const auto& [category, placement] : scene_->objects) {
        if (placement.cell == c) {
          slot.kind = SlotKind::Object;
          slot.category = category;
          break;
        }
      }
    }
  }
  return window;
}

std::vector<Cell> Episode::view_cone() const { return visible_cells(*scene_, pose_, config_.fov); }

std::vector<Cell> Episode::framed_view() const {
  ViewWindow window = render_window();
  std::vector<Cell> cells;
  for (int row = 0; row < kWindowDepth; ++row)
    for (int col = 0; col < kWindowWidth; ++col) {
      SlotKind kind = window.at(row, col).kind;
      if (kind == SlotKind::Free || kind == SlotKind::Object)
        cells.push_back(window_slot_cell(pose_, row, col));
    }
  return cells;
}

Feedback Episode::idle_feedback() const {
  Feedback fb;
  if (!config_.teacher_present) return fb;
  if (config_.variant == FeedbackVariant::Binary) {
    fb.kind = Feedback::Kind::Binary;
    fb.binary = -1;
  } else if (config_.variant == FeedbackVariant::Language) {
    fb.kind = Feedback::Kind::Language;
    fb.text = language_feedback(ViewWindow{}, config_.target_category, target_color_, 0.0, false);
  }
  return fb;
}

Observation Episode::make_observation(Feedback feedback) const {
  Observation obs;
  obs.window = render_window();
  obs.target_category = config_.target_category;
  obs.teacher_present = config_.teacher_present;
  obs.last_feedback = std::move(feedback);
  obs.pose = pose_;
  return obs;
}

StepResult Episode::step(Action action) {
  if (!started_) fail(Errc::state, "Episode: step before reset");
  if (done_) fail(Errc::state, "Episode: step after episode done");
  ++steps_;

  double reward = config_.step_penalty;
  Feedback feedback = idle_feedback();
  StepInfo info;
  double delta = 0.0;

  switch (action) {
    case Action::RotateLeft:
    case Action::RotateRight: {
      pose_.heading =
          action == Action::RotateLeft ? rotate_left(pose_.heading) : rotate_right(pose_.heading);
      info.action_class = ActionClass::Nav;
      auto view = framed_view();
      delta = update_on_nav(ledger_, view, pose_.cell, target_cell_, config_.decay);
      break;
    }
    case Action::MoveForward: {
      Cell step_vec = heading_vec(pose_.heading);
      Cell next{pose_.cell.x + step_vec.x, pose_.cell.y + step_vec.y};
      if (scene_->is_free(next)) pose_.cell = next;  // blocked moves are a no-op, still cost a step
      info.action_class = ActionClass::Nav;
      auto view = framed_view();
      delta = update_on_nav(ledger_, view, pose_.cell, target_cell_, config_.decay);
      break;
    }
    case Action::Stop: {
      info.action_class = ActionClass::Terminal;
      done_ = true;
      info.success = is_success(*scene_, pose_, target_cell_, config_.success_radius, config_.fov);
      if (info.success) reward += config_.success_reward;
      break;
    }
    case Action::Ask: {
      info.action_class = ActionClass::Ask;
      info.asked = true;
      reward += config_.ask_penalty;
      if (config_.teacher_present) {
        auto view = framed_view();
        delta = update_on_ask(ledger_, view, pose_.cell, target_cell_, config_.decay);
        feedback = make_feedback(config_.variant, render_window(), config_.target_category,
                                 target_color_, euclid_dist(pose_.cell, target_cell_, scene_->cell_size),
                                 true, config_.noise, noise_rng_);
      }
      break;
    }
  }

  if (steps_ >= config_.max_steps) done_ = true;
  lambda_ = ledger_.lambda();

  info.lambda = lambda_;
  info.delta_lambda = delta;
  info.pose = pose_;
  info.target_in_view = cell_in_fov(pose_, target_cell_, config_.fov, scene_->cell_size) &&
                        ray_clear(*scene_, pose_.cell, target_cell_);
  info.feedback_kind = feedback.kind;

  obs_ = make_observation(std::move(feedback));
  return {obs_, reward, done_, info};
}

}  // namespace asknav
