#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/uncertainty.hpp"

namespace asknav {

enum class Action : uint8_t { RotateLeft = 0, RotateRight = 1, MoveForward = 2, Stop = 3, Ask = 4 };
constexpr int kActionCount = 5;

const char* action_name(Action a);
std::optional<Action> action_from_name(const std::string& name);

enum class ActionClass : uint8_t { Nav, Ask, Terminal };
const char* action_class_name(ActionClass c);

enum class FeedbackVariant : uint8_t { Mask, Binary, NoisyMask, Language };
const char* feedback_variant_name(FeedbackVariant v);
std::optional<FeedbackVariant> feedback_variant_from_name(const std::string& name);

// Egocentric view window: kWindowDepth cells ahead of the agent (the agent's
// own cell is not a slot) by kWindowWidth cells across. Stored image-style:
// row 0 is the farthest depth, the middle column is straight ahead.
constexpr int kWindowDepth = 12;
constexpr int kWindowWidth = 9;
constexpr int kWindowSlots = kWindowDepth * kWindowWidth;

enum class SlotKind : uint8_t { Unseen, Free, Blocked, Object };

struct WindowSlot {
  SlotKind kind = SlotKind::Unseen;
  std::string category;  // set only for Object slots
  bool operator==(const WindowSlot&) const = default;
};

struct ViewWindow {
  std::array<WindowSlot, kWindowSlots> slots;

  static int row_for_depth(int depth) { return kWindowDepth - depth; }       // depth 1..12
  static int col_for_lateral(int lateral) { return lateral + kWindowWidth / 2; }  // -4..4
  const WindowSlot& at(int row, int col) const { return slots[row * kWindowWidth + col]; }
  WindowSlot& at(int row, int col) { return slots[row * kWindowWidth + col]; }
  bool operator==(const ViewWindow&) const = default;
};

// Scene cell a window slot looks at (may be out of bounds).
Cell window_slot_cell(const Pose& pose, int row, int col);
// Window slot covering a scene cell, if any.
std::optional<std::pair<int, int>> window_slot_of_cell(const Pose& pose, Cell c);
// 3x3 frame block of a slot: 0..8 reading order (top-left .. bottom-right).
int window_block_of_slot(int row, int col);
const char* window_block_name(int block);

using Mask = std::array<uint8_t, kWindowSlots>;

struct Feedback {
  enum class Kind : uint8_t { Absent, Mask, Binary, NoisyMask, Language };
  Kind kind = Kind::Absent;
  asknav::Mask mask{};  // Mask / NoisyMask
  int binary = -1;      // 1 in view, 0 not, -1 when no ask was taken
  std::string text;     // Language
  bool operator==(const Feedback&) const = default;
};
const char* feedback_kind_name(Feedback::Kind k);

struct Observation {
  ViewWindow window;
  std::string target_category;
  bool teacher_present = false;
  Feedback last_feedback;
  Pose pose;  // odometry
  bool operator==(const Observation&) const = default;
};

struct NoiseParams {
  double scale_min = 0.6;
  double scale_max = 1.0;
  int jitter_cells = 1;
};

struct EpisodeConfig {
  std::string target_category;
  bool teacher_present = true;
  FeedbackVariant variant = FeedbackVariant::Mask;
  int max_steps = 500;
  double success_radius = 1.0;
  double step_penalty = -0.01;
  double success_reward = 10.0;
  double ask_penalty = 0.0;  // extra reward term on ask actions; 0 by default
  uint64_t seed = 0;
  DecayParams decay{};
  FovParams fov{};
  NoiseParams noise{};
};

struct StepInfo {
  bool success = false;
  double lambda = 0.0;
  double delta_lambda = 0.0;
  ActionClass action_class = ActionClass::Nav;
  bool asked = false;
  bool target_in_view = false;
  Feedback::Kind feedback_kind = Feedback::Kind::Absent;
  Pose pose;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

// Slot mask marking the target's location in the window; all zero when the
// target is not in a visible slot.
Mask ground_truth_mask(const ViewWindow& window, const std::string& target_category);

// Scales the mask blob along one random axis then jitters each boundary edge
// by up to jitter_cells. All-zero masks pass through unchanged.
Mask perturb_mask(const Mask& mask, const NoiseParams& params, Rng& rng);

std::string language_feedback(const ViewWindow& window, const std::string& target_category,
                              const std::string& target_color, double dist_units, bool asked);

Feedback make_feedback(FeedbackVariant variant, const ViewWindow& window,
                       const std::string& target_category, const std::string& target_color,
                       double dist_units, bool asked, const NoiseParams& noise, Rng& rng);

bool is_success(const GridScene& scene, const Pose& pose, Cell target_cell, double success_radius,
                const FovParams& fov = {});

// One episode: owns the pose, step counter, and the uncertainty ledger.
// Strictly sequential; reset() before stepping.
class Episode {
public:
  Episode(std::shared_ptr<const GridScene> scene, EpisodeConfig config);

  const Observation& reset();
  StepResult step(Action action);

  const GridScene& scene() const { return *scene_; }
  const EpisodeConfig& config() const { return config_; }
  const Observation& observation() const;
  const Pose& pose() const { return pose_; }
  Cell target_cell() const { return target_cell_; }
  const LikelihoodMap& ledger() const { return ledger_; }
  double lambda() const { return lambda_; }
  double lambda0() const { return lambda0_; }
  int steps_taken() const { return steps_; }
  bool done() const { return done_; }

  // Visible free cells from the current pose (full view cone).
  std::vector<Cell> view_cone() const;
  // Visible free cells that fall inside the window; this framed view is what
  // the ledger updates and the feedback describe.
  std::vector<Cell> framed_view() const;

  ViewWindow render_window() const;

private:
  Feedback idle_feedback() const;
  Observation make_observation(Feedback feedback) const;

  std::shared_ptr<const GridScene> scene_;
  EpisodeConfig config_;
  Pose pose_;
  Cell target_cell_;
  std::string target_color_;
  LikelihoodMap ledger_;
  double lambda_ = 0.0;
  double lambda0_ = 0.0;
  int steps_ = 0;
  bool done_ = false;
  bool started_ = false;
  Observation obs_;
  Rng noise_rng_;
};

}  // namespace asknav
