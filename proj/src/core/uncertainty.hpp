#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/gridworld.hpp"

namespace asknav {

struct DecayParams {
  double alpha = 1.0;  // length units
  double beta = 2.0;
};

// Piecewise-linear distance discount: 1 within alpha, linear ramp to 0 at beta.
double psi(double dist, const DecayParams& params = {});

// Per-free-cell target likelihood in [0,1]. The domain is exactly the free
// cells of the scene the map was initialized from.
class LikelihoodMap {
public:
  LikelihoodMap() = default;

  // Every free cell starts at likelihood 1.
  static LikelihoodMap init(const GridScene& scene);

  const std::string& scene_id() const { return scene_id_; }
  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return cell_size_; }

  bool in_domain(Cell c) const {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_ && free_[index(c)];
  }
  size_t domain_size() const { return domain_size_; }

  double value(Cell c) const;
  void set_value(Cell c, double v);  // clamped to [0,1]

  // Sum of all likelihoods minus their maximum. Throws on an empty domain.
  double lambda() const;

  // Row-major width*height snapshot; out-of-domain slots are 0.
  std::vector<double> flat_row_major() const;
  // Rebuild a map from a snapshot produced by flat_row_major().
  static LikelihoodMap from_flat(const GridScene& scene, std::span<const double> values);

  size_t index(Cell c) const { return static_cast<size_t>(c.y) * width_ + c.x; }
  const std::vector<uint8_t>& free_mask() const { return free_; }

private:
  std::string scene_id_;
  int width_ = 0;
  int height_ = 0;
  double cell_size_ = 0.25;
  size_t domain_size_ = 0;
  std::vector<uint8_t> free_;
  std::vector<double> phi_;
};

// Applies the navigation observation update and returns the drop in lambda.
// Cells the agent saw lose psi(distance); if the target itself was seen every
// other cell additionally loses psi(distance-to-target), and the target cell
// is never decremented.
double update_on_nav(LikelihoodMap& map, std::span<const Cell> view, Cell agent_cell,
                     Cell target_cell, const DecayParams& params = {});

// Applies the ground-truth feedback update and returns the drop in lambda.
// Seen cells are eliminated outright; if the target was seen, unseen cells
// lose psi(distance-to-target) and the target cell is never decremented.
double update_on_ask(LikelihoodMap& map, std::span<const Cell> view, Cell agent_cell,
                     Cell target_cell, const DecayParams& params = {});

// Plain P2 graymap, one pixel per cell, gray = round(255 * phi), blocked = 0.
std::string heatmap_pgm(const LikelihoodMap& map, const GridScene& scene);

}  // namespace asknav
