#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace asknav {

struct Cell {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Screen-style grid: x grows east (right), y grows south (down).
enum class Heading : uint8_t { North = 0, East = 1, South = 2, West = 3 };

Heading rotate_left(Heading h);
Heading rotate_right(Heading h);
Cell heading_vec(Heading h);
char heading_char(Heading h);
std::optional<Heading> heading_from_char(char c);

struct Pose {
  Cell cell;
  Heading heading = Heading::North;
  friend auto operator<=>(const Pose&, const Pose&) = default;
};

struct ObjectPlacement {
  Cell cell;
  std::string color;
};

// Grid analog of a camera frustum: a cone around the heading vector.
struct FovParams {
  double half_angle_deg = 45.0;
  double max_range = 3.0;  // length units
};

struct GridScene {
  std::string id;
  int width = 0;
  int height = 0;
  double cell_size = 0.25;  // length units per cell
  std::vector<uint8_t> blocked;                    // row-major width*height
  std::map<std::string, ObjectPlacement> objects;  // category -> placement
  Pose start;

  size_t index(Cell c) const { return static_cast<size_t>(c.y) * width + c.x; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height; }
  bool is_blocked(Cell c) const { return blocked[index(c)] != 0; }
  bool is_free(Cell c) const { return in_bounds(c) && !is_blocked(c); }

  int free_count() const;
  std::vector<Cell> free_cells() const;  // row-major order

  // Throws Error(validation) on any invariant breach, including an
  // unreachable free region.
  void validate() const;
};

struct GenParams {
  int width = 8;
  int height = 8;
  double obstacle_density = 0.2;
  std::vector<std::string> categories;
  double cell_size = 0.25;
};

// Deterministic: identical (seed, params) produce identical scenes.
GridScene generate_scene(uint64_t seed, const GenParams& params);

void write_scene(const GridScene& scene, std::ostream& out);
GridScene parse_scene(std::istream& in, const std::string& source_name);
void save_scene(const GridScene& scene, const std::string& path);
GridScene load_scene(const std::string& path);

double euclid_dist(Cell a, Cell b, double cell_size);

// True when no blocked cell lies strictly between the centers of a and b
// (the endpoint cells themselves are not tested). Exact integer traversal;
// a segment through a lattice corner enters only the diagonal neighbor.
bool ray_clear(const GridScene& scene, Cell a, Cell b);

// ray_clear plus both endpoints free. a == b on a free cell is true.
bool line_of_sight(const GridScene& scene, Cell a, Cell b);

// Range + cone test only (no occlusion). The agent's own cell always passes.
bool cell_in_fov(const Pose& pose, Cell c, const FovParams& fov, double cell_size);

// Free cells that are in range, inside the view cone, and unoccluded,
// in row-major order. The agent's own cell is always included.
std::vector<Cell> visible_cells(const GridScene& scene, const Pose& pose,
                                const FovParams& fov = {});

// Minimum number of primitive actions (rotations and forward moves) from
// `start` to any pose within `success_radius` of `goal` with `goal` visible.
// nullopt when no such pose is reachable.
std::optional<int> shortest_path_len(const GridScene& scene, const Pose& start, Cell goal,
                                     double success_radius, const FovParams& fov = {});

}  // namespace asknav
