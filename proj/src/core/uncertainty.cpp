#include "core/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace asknav {

double psi(double dist, const DecayParams& params) {
  if (dist < 0.0) fail(Errc::invalid_argument, "psi: negative distance");
  if (!(params.alpha > 0.0 && params.alpha < params.beta))
    fail(Errc::invalid_argument, "psi: need 0 < alpha < beta");
  if (dist <= params.alpha) return 1.0;
  if (dist <= params.beta) return 1.0 - (dist - params.alpha) / (params.beta - params.alpha);
  return 0.0;
}

LikelihoodMap LikelihoodMap::init(const GridScene& scene) {
  LikelihoodMap map;
  map.scene_id_ = scene.id;
  map.width_ = scene.width;
  map.height_ = scene.height;
  map.cell_size_ = scene.cell_size;
  map.free_.assign(scene.blocked.size(), 0);
  map.phi_.assign(scene.blocked.size(), 0.0);
  for (size_t i = 0; i < scene.blocked.size(); ++i) {
    if (!scene.blocked[i]) {
      map.free_[i] = 1;
      map.phi_[i] = 1.0;
      ++map.domain_size_;
    }
  }
  return map;
}

double LikelihoodMap::value(Cell c) const {
  if (!in_domain(c)) fail(Errc::invalid_argument, "LikelihoodMap::value: cell not in domain");
  return phi_[index(c)];
}

void LikelihoodMap::set_value(Cell c, double v) {
  if (!in_domain(c)) fail(Errc::invalid_argument, "LikelihoodMap::set_value: cell not in domain");
  phi_[index(c)] = std::clamp(v, 0.0, 1.0);
}

double LikelihoodMap::lambda() const {
  if (domain_size_ == 0) fail(Errc::state, "lambda: empty likelihood domain");
  double sum = 0.0;
  double max = 0.0;
  for (size_t i = 0; i < phi_.size(); ++i) {
    if (!free_[i]) continue;
    sum += phi_[i];
    max = std::max(max, phi_[i]);
  }
  return sum - max;
}

std::vector<double> LikelihoodMap::flat_row_major() const {
  std::vector<double> out(phi_.size(), 0.0);
  for (size_t i = 0; i < phi_.size(); ++i)
    if (free_[i]) out[i] = phi_[i];
  return out;
}

LikelihoodMap LikelihoodMap::from_flat(const GridScene& scene, std::span<const double> values) {
  if (values.size() != scene.blocked.size())
    fail(Errc::invalid_argument, "from_flat: value count does not match scene");
  LikelihoodMap map = init(scene);
  for (int y = 0; y < scene.height; ++y)
    for (int x = 0; x < scene.width; ++x) {
      Cell c{x, y};
      if (map.in_domain(c)) map.set_value(c, values[map.index(c)]);
    }
  return map;
}

namespace {

struct UpdateContext {
  std::vector<uint8_t> in_view;
  bool target_in_view = false;
};

UpdateContext check_and_stamp(const LikelihoodMap& map, std::span<const Cell> view, Cell agent_cell,
                              Cell target_cell) {
  if (!map.in_domain(agent_cell))
    fail(Errc::validation, "uncertainty update: agent cell not in map domain");
  if (!map.in_domain(target_cell))
    fail(Errc::validation, "uncertainty update: target cell not in map domain");
  UpdateContext ctx;
  ctx.in_view.assign(static_cast<size_t>(map.width()) * map.height(), 0);
  for (Cell c : view) {
    if (!map.in_domain(c)) fail(Errc::validation, "uncertainty update: view cell not in map domain");
    ctx.in_view[map.index(c)] = 1;
    if (c == target_cell) ctx.target_in_view = true;
  }
  return ctx;
}

}  // namespace

double update_on_nav(LikelihoodMap& map, std::span<const Cell> view, Cell agent_cell,
                     Cell target_cell, const DecayParams& params) {
  UpdateContext ctx = check_and_stamp(map, view, agent_cell, target_cell);
  const double before = map.lambda();
  const double target_decay =
      ctx.target_in_view ? psi(euclid_dist(agent_cell, target_cell, map.cell_size()), params) : 0.0;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      Cell c{x, y};
      if (!map.in_domain(c)) continue;
      if (ctx.target_in_view && c == target_cell) continue;
      double dec = 0.0;
      if (ctx.in_view[map.index(c)])
        dec = psi(euclid_dist(agent_cell, c, map.cell_size()), params) + target_decay;
      else
        dec = target_decay;
      if (dec > 0.0) map.set_value(c, map.value(c) - dec);
    }
  }
  return before - map.lambda();
}

double update_on_ask(LikelihoodMap& map, std::span<const Cell> view, Cell agent_cell,
                     Cell target_cell, const DecayParams& params) {
  UpdateContext ctx = check_and_stamp(map, view, agent_cell, target_cell);
  const double before = map.lambda();
  const double target_decay =
      ctx.target_in_view ? psi(euclid_dist(agent_cell, target_cell, map.cell_size()), params) : 0.0;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      Cell c{x, y};
      if (!map.in_domain(c)) continue;
      if (ctx.target_in_view && c == target_cell) continue;
      if (ctx.in_view[map.index(c)])
        map.set_value(c, 0.0);
      else if (target_decay > 0.0)
        map.set_value(c, map.value(c) - target_decay);
    }
  }
  return before - map.lambda();
}

std::string heatmap_pgm(const LikelihoodMap& map, const GridScene& scene) {
  if (map.scene_id() != scene.id || map.width() != scene.width || map.height() != scene.height)
    fail(Errc::validation, "heatmap: map is not bound to this scene");
  std::ostringstream out;
  out << "P2\n" << map.width() << " " << map.height() << "\n255\n";
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      Cell c{x, y};
      int gray = 0;
      if (map.in_domain(c)) gray = static_cast<int>(std::floor(255.0 * map.value(c) + 0.5));
      out << gray << (x + 1 == map.width() ? "" : " ");
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace asknav
