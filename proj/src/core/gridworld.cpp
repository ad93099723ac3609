#include "core/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numbers>
#include <sstream>

namespace asknav {

Heading rotate_left(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 3) % 4); }
Heading rotate_right(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 1) % 4); }

Cell heading_vec(Heading h) {
  switch (h) {
    case Heading::North: return {0, -1};
    case Heading::East: return {1, 0};
    case Heading::South: return {0, 1};
    case Heading::West: return {-1, 0};
  }
  return {0, 0};
}

char heading_char(Heading h) {
  switch (h) {
    case Heading::North: return 'N';
    case Heading::East: return 'E';
    case Heading::South: return 'S';
    case Heading::West: return 'W';
  }
  return '?';
}

std::optional<Heading> heading_from_char(char c) {
  switch (c) {
    case 'N': return Heading::North;
    case 'E': return Heading::East;
    case 'S': return Heading::South;
    case 'W': return Heading::West;
    default: return std::nullopt;
  }
}

int GridScene::free_count() const {
  int n = 0;
  for (uint8_t b : blocked) n += (b == 0);
  return n;
}

std::vector<Cell> GridScene::free_cells() const {
  std::vector<Cell> cells;
  cells.reserve(blocked.size());
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (!blocked[static_cast<size_t>(y) * width + x]) cells.push_back({x, y});
  return cells;
}

namespace {

// BFS over 4-connected free cells; returns number of reached cells.
int count_reachable(const GridScene& scene, Cell from) {
  std::vector<uint8_t> seen(scene.blocked.size(), 0);
  std::deque<Cell> queue;
  queue.push_back(from);
  seen[scene.index(from)] = 1;
  int reached = 0;
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    ++reached;
    const Cell steps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (Cell d : steps) {
      Cell n{c.x + d.x, c.y + d.y};
      if (!scene.is_free(n)) continue;
      if (seen[scene.index(n)]) continue;
      seen[scene.index(n)] = 1;
      queue.push_back(n);
    }
  }
  return reached;
}

}  // namespace

void GridScene::validate() const {
  if (width < 1 || height < 1) fail(Errc::validation, "scene " + id + ": non-positive dimensions");
  if (cell_size <= 0.0) fail(Errc::validation, "scene " + id + ": cell_size must be positive");
  if (blocked.size() != static_cast<size_t>(width) * height)
    fail(Errc::validation, "scene " + id + ": blocked mask size mismatch");
  if (id.empty() || id.find_first_of(" \t\n") != std::string::npos)
    fail(Errc::validation, "scene id must be a non-empty token");
  if (!in_bounds(start.cell) || is_blocked(start.cell))
    fail(Errc::validation, "scene " + id + ": start cell is not free");
  for (const auto& [category, placement] : objects) {
    if (category.empty() || category.find_first_of(" \t\n") != std::string::npos)
      fail(Errc::validation, "scene " + id + ": object category must be a non-empty token");
    if (!in_bounds(placement.cell) || is_blocked(placement.cell))
      fail(Errc::validation, "scene " + id + ": object '" + category + "' is not on a free cell");
  }
  if (count_reachable(*this, start.cell) != free_count())
    fail(Errc::validation, "scene " + id + ": free region not fully reachable from start");
}

GridScene generate_scene(uint64_t seed, const GenParams& params) {
  if (params.width < 4 || params.height < 4)
    fail(Errc::invalid_argument, "generate_scene: width and height must be >= 4");
  if (params.obstacle_density < 0.0 || params.obstacle_density > 0.4)
    fail(Errc::invalid_argument, "generate_scene: obstacle_density must be in [0, 0.4]");
  if (params.categories.empty())
    fail(Errc::invalid_argument, "generate_scene: category list must be non-empty");
  if (params.cell_size <= 0.0)
    fail(Errc::invalid_argument, "generate_scene: cell_size must be positive");
  for (size_t i = 0; i < params.categories.size(); ++i)
    for (size_t j = i + 1; j < params.categories.size(); ++j)
      if (params.categories[i] == params.categories[j])
        fail(Errc::invalid_argument, "generate_scene: duplicate category '" + params.categories[i] + "'");

  static const char* kPalette[] = {"red",  "green",  "blue",  "yellow", "purple",
                                   "orange", "teal", "brown", "pink",  "gray"};
  const int total = params.width * params.height;
  const int n_blocked = static_cast<int>(std::lround(params.obstacle_density * total));
  const int n_objects = static_cast<int>(params.categories.size());
  if (total - n_blocked < n_objects + 1)
    fail(Errc::invalid_argument, "generate_scene: grid too small for requested objects");

  const int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng = make_rng(seed, static_cast<uint64_t>(attempt));
    GridScene scene;
    scene.width = params.width;
    scene.height = params.height;
    scene.cell_size = params.cell_size;
    scene.blocked.assign(static_cast<size_t>(total), 0);
    {
      std::ostringstream oss;
      oss << "g" << std::hex << seed << std::dec << "-" << params.width << "x" << params.height;
      scene.id = oss.str();
    }

    // Fisher-Yates over all cell indices; first n_blocked become obstacles.
    std::vector<int> order(total);
    for (int i = 0; i < total; ++i) order[i] = i;
    for (int i = total - 1; i > 0; --i) std::swap(order[i], order[rand_int(rng, 0, i)]);
    for (int i = 0; i < n_blocked; ++i) scene.blocked[order[i]] = 1;

    std::vector<Cell> free = scene.free_cells();
    Cell start_cell = free[rand_int(rng, 0, static_cast<int>(free.size()) - 1)];
    scene.start = {start_cell, static_cast<Heading>(rand_int(rng, 0, 3))};

    if (count_reachable(scene, start_cell) != static_cast<int>(free.size())) continue;

    // Keep objects outside the default success radius of the start so a
    // fresh episode never begins already solved.
    std::vector<Cell> candidates;
    for (Cell c : free)
      if (c != start_cell && euclid_dist(c, start_cell, params.cell_size) > 1.0)
        candidates.push_back(c);
    if (static_cast<int>(candidates.size()) < n_objects) {
      candidates.clear();
      for (Cell c : free)
        if (c != start_cell) candidates.push_back(c);
      if (static_cast<int>(candidates.size()) < n_objects) continue;
    }
    for (const std::string& category : params.categories) {
      int pick = rand_int(rng, 0, static_cast<int>(candidates.size()) - 1);
      Cell cell = candidates[pick];
      candidates.erase(candidates.begin() + pick);
      const char* color = kPalette[rand_int(rng, 0, 9)];
      scene.objects[category] = ObjectPlacement{cell, color};
    }

    scene.validate();
    return scene;
  }
  fail(Errc::validation, "generate_scene: no connected scene after " + std::to_string(kMaxAttempts) +
                             " attempts (seed=" + std::to_string(seed) + ")");
}

void write_scene(const GridScene& scene, std::ostream& out) {
  out << "scene " << scene.id << " " << scene.width << " " << scene.height << " "
      << fmt_double(scene.cell_size) << "\n";
  for (int y = 0; y < scene.height; ++y) {
    out << "row " << y << " ";
    for (int x = 0; x < scene.width; ++x) out << (scene.is_blocked({x, y}) ? '#' : '.');
    out << "\n";
  }
  for (const auto& [category, placement] : scene.objects)
    out << "object " << category << " " << placement.color << " " << placement.cell.x << " "
        << placement.cell.y << "\n";
  out << "start " << scene.start.cell.x << " " << scene.start.cell.y << " "
      << heading_char(scene.start.heading) << "\n";
}

namespace {

[[noreturn]] void parse_fail(const std::string& source, int line, const std::string& msg) {
  fail(Errc::parse, source + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

GridScene parse_scene(std::istream& in, const std::string& source_name) {
  GridScene scene;
  bool have_header = false;
  bool have_start = false;
  int rows_seen = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "scene") {
      if (have_header) parse_fail(source_name, lineno, "duplicate scene header");
      ls >> scene.id >> scene.width >> scene.height >> scene.cell_size;
      if (!ls) parse_fail(source_name, lineno, "malformed scene header (want: scene <id> <w> <h> <cell_size>)");
      if (scene.width < 1 || scene.height < 1)
        parse_fail(source_name, lineno, "scene dimensions must be positive");
      scene.blocked.assign(static_cast<size_t>(scene.width) * scene.height, 0);
      have_header = true;
    } else if (tag == "row") {
      if (!have_header) parse_fail(source_name, lineno, "row before scene header");
      int y = -1;
      std::string cells;
      ls >> y >> cells;
      if (!ls) parse_fail(source_name, lineno, "malformed row line");
      if (y != rows_seen) parse_fail(source_name, lineno, "expected row " + std::to_string(rows_seen));
      if (static_cast<int>(cells.size()) != scene.width)
        parse_fail(source_name, lineno,
                   "row length " + std::to_string(cells.size()) + " != width " + std::to_string(scene.width));
      for (int x = 0; x < scene.width; ++x) {
        if (cells[x] == '#')
          scene.blocked[scene.index({x, y})] = 1;
        else if (cells[x] != '.')
          parse_fail(source_name, lineno, std::string("invalid cell character '") + cells[x] + "'");
      }
      ++rows_seen;
    } else if (tag == "object") {
      if (!have_header) parse_fail(source_name, lineno, "object before scene header");
      std::string category, color;
      int x = 0, y = 0;
      ls >> category >> color >> x >> y;
      if (!ls) parse_fail(source_name, lineno, "malformed object line (want: object <category> <color> <x> <y>)");
      if (scene.objects.count(category))
        parse_fail(source_name, lineno, "duplicate object category '" + category + "'");
      if (!scene.in_bounds({x, y})) parse_fail(source_name, lineno, "object position out of bounds");
      scene.objects[category] = ObjectPlacement{{x, y}, color};
    } else if (tag == "start") {
      if (!have_header) parse_fail(source_name, lineno, "start before scene header");
      int x = 0, y = 0;
      std::string h;
      ls >> x >> y >> h;
      if (!ls || h.size() != 1) parse_fail(source_name, lineno, "malformed start line (want: start <x> <y> <N|E|S|W>)");
      auto heading = heading_from_char(h[0]);
      if (!heading) parse_fail(source_name, lineno, "invalid heading '" + h + "'");
      if (!scene.in_bounds({x, y})) parse_fail(source_name, lineno, "start position out of bounds");
      scene.start = {{x, y}, *heading};
      have_start = true;
    } else {
      parse_fail(source_name, lineno, "unknown directive '" + tag + "'");
    }
  }
  if (!have_header) fail(Errc::parse, source_name + ": missing scene header");
  if (rows_seen != scene.height)
    fail(Errc::parse, source_name + ": expected " + std::to_string(scene.height) + " rows, got " +
                          std::to_string(rows_seen));
  if (!have_start) fail(Errc::parse, source_name + ": missing start line");
  scene.validate();
  return scene;
}

void save_scene(const GridScene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot open for write: " + path);
  write_scene(scene, out);
  if (!out) fail(Errc::io, "write failed: " + path);
}

GridScene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open: " + path);
  return parse_scene(in, path);
}

double euclid_dist(Cell a, Cell b, double cell_size) {
  double dx = a.x - b.x;
  double dy = a.y - b.y;
  return cell_size * std::sqrt(dx * dx + dy * dy);
}

bool ray_clear(const GridScene& scene, Cell a, Cell b) {
  if (!scene.in_bounds(a) || !scene.in_bounds(b))
    fail(Errc::invalid_argument, "ray_clear: cell out of bounds");
  if (a == b) return true;
  // Doubled coordinates: centers at odd integers, cell boundaries at even.
  const int64_t ax = 2 * a.x + 1, ay = 2 * a.y + 1;
  const int64_t dx = 2 * (b.x - a.x), dy = 2 * (b.y - a.y);
  const int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  const int64_t adx = std::abs(dx), ady = std::abs(dy);
  int cx = a.x, cy = a.y;
  while (cx != b.x || cy != b.y) {
    if (sx == 0) {
      cy += sy;
    } else if (sy == 0) {
      cx += sx;
    } else {
      // Distance (numerator over |dx| resp. |dy|) to the next boundary.
      int64_t rx = sx > 0 ? (2 * (cx + 1) - ax) : (ax - 2 * cx);
      int64_t ry = sy > 0 ? (2 * (cy + 1) - ay) : (ay - 2 * cy);
      int64_t cmp = rx * ady - ry * adx;
      if (cmp < 0) {
        cx += sx;
      } else if (cmp > 0) {
        cy += sy;
      } else {
        cx += sx;  // exact corner: step diagonally, side cells untouched
        cy += sy;
      }
    }
    if (cx == b.x && cy == b.y) break;
    if (scene.is_blocked({cx, cy})) return false;
  }
  return true;
}

bool line_of_sight(const GridScene& scene, Cell a, Cell b) {
  if (!scene.in_bounds(a) || !scene.in_bounds(b))
    fail(Errc::invalid_argument, "line_of_sight: cell out of bounds");
  if (scene.is_blocked(a) || scene.is_blocked(b)) return false;
  return ray_clear(scene, a, b);
}

bool cell_in_fov(const Pose& pose, Cell c, const FovParams& fov, double cell_size) {
  if (c == pose.cell) return true;
  const double dx = c.x - pose.cell.x;
  const double dy = c.y - pose.cell.y;
  const double d2 = dx * dx + dy * dy;
  if (cell_size * cell_size * d2 > fov.max_range * fov.max_range * (1.0 + 1e-12)) return false;
  const Cell h = heading_vec(pose.heading);
  const double dot = dx * h.x + dy * h.y;
  const double cos_half = std::cos(fov.half_angle_deg * std::numbers::pi / 180.0);
  // Integer cell geometry keeps directions well away from the cone boundary,
  // so the epsilon only absorbs rounding in cos().
  return dot + 1e-9 >= cos_half * std::sqrt(d2);
}

std::vector<Cell> visible_cells(const GridScene& scene, const Pose& pose, const FovParams& fov) {
  if (!scene.is_free(pose.cell)) fail(Errc::invalid_argument, "visible_cells: pose cell not free");
  std::vector<Cell> out;
  for (int y = 0; y < scene.height; ++y) {
    for (int x = 0; x < scene.width; ++x) {
      Cell c{x, y};
      if (!scene.is_free(c)) continue;
      if (c == pose.cell) {
        out.push_back(c);
        continue;
      }
      if (!cell_in_fov(pose, c, fov, scene.cell_size)) continue;
      if (!ray_clear(scene, pose.cell, c)) continue;
      out.push_back(c);
    }
  }
  return out;
}

std::optional<int> shortest_path_len(const GridScene& scene, const Pose& start, Cell goal,
                                     double success_radius, const FovParams& fov) {
  if (!scene.is_free(goal)) fail(Errc::invalid_argument, "shortest_path_len: goal cell not free");
  if (!scene.is_free(start.cell)) fail(Errc::invalid_argument, "shortest_path_len: start cell not free");

  auto succeeds = [&](const Pose& p) {
    if (euclid_dist(p.cell, goal, scene.cell_size) > success_radius) return false;
    return cell_in_fov(p, goal, fov, scene.cell_size) && ray_clear(scene, p.cell, goal);
  };
  if (succeeds(start)) return 0;

  auto state_index = [&](const Pose& p) {
    return (scene.index(p.cell)) * 4 + static_cast<size_t>(p.heading);
  };
  std::vector<int> dist(static_cast<size_t>(scene.width) * scene.height * 4, -1);
  std::deque<Pose> queue;
  dist[state_index(start)] = 0;
  queue.push_back(start);
  while (!queue.empty()) {
    Pose p = queue.front();
    queue.pop_front();
    int d = dist[state_index(p)];
    Pose nexts[3] = {{p.cell, rotate_left(p.heading)},
                     {p.cell, rotate_right(p.heading)},
                     {{p.cell.x + heading_vec(p.heading).x, p.cell.y + heading_vec(p.heading).y},
                      p.heading}};
    for (const Pose& n : nexts) {
      if (!scene.is_free(n.cell)) continue;
      if (dist[state_index(n)] != -1) continue;
      if (succeeds(n)) return d + 1;
      dist[state_index(n)] = d + 1;
      queue.push_back(n);
    }
  }
  return std::nullopt;
}

}  // namespace asknav
