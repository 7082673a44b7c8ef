#pragma once

#include <string>
#include <vector>

#include "ltlcc/automata.hpp"

namespace ltlcc {

struct CarState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // wrapped to [-pi, pi]
};

struct CarAction {
  double v = 0.0;    // velocity command, clipped to [-1, 1]
  double phi = 0.0;  // steering command, clipped to [-1, 1]
};

/* Closed axis-aligned rectangle labeled with one atomic proposition. */
struct Region {
  std::string name;
  double x_lo, x_hi, y_lo, y_hi;

  bool contains(double x, double y) const {
    return x >= x_lo && x <= x_hi && y >= y_lo && y <= y_hi;
  }
};

struct Bounds {
  double x_lo = -5.0, x_hi = 5.0;
  double y_lo = -5.0, y_hi = 5.0;
};

struct Workspace {
  Bounds bounds;
  double dt = 0.1;
  std::vector<Region> regions;
  bool allow_overlap = false;  // explicit opt-in; labeling stays well defined

  const Region* find_region(const std::string& name) const;
};

/* Validates geometry: positive dt, regions inside the bounds, nonempty
 * rectangles, and pairwise disjoint regions unless allow_overlap is set.
 * Throws std::invalid_argument. */
void validate_workspace(const Workspace& w);

double wrap_angle(double theta);

/* One explicit forward-Euler step of the car model
 *   dx = v cos(g + theta) / cos g,  dy = v sin(g + theta) / cos g,
 *   dth = v tan(phi),               g  = arctan(tan(phi)) / 2
 * (slip angle g, not the RL discount). Inputs are clipped to [-1, 1],
 * theta is wrapped and the position clamped to the workspace walls. */
CarState step_dynamics(const CarState& s, const CarAction& a, double dt, const Bounds& bounds);

/* Label symbol of (x, y): bit set for every region containing the point,
 * using the given AP ordering. Propositions with no matching region label
 * nothing. Closed rectangles, so boundaries are inside. */
Symbol label(const Workspace& w, const CarState& s,
             const std::vector<std::string>& ap_list);

/* Euclidean point-to-rectangle distance in the plane; 0 inside. */
double distance_to_region(double x, double y, const Region& r);

/* Minimum distance to any of the regions. Throws on an empty set (callers
 * use the documented d_max fallback instead of calling). */
double distance_to_regions(const CarState& s, const std::vector<const Region*>& regions);

/* Workspace JSON (schema documented in configs/): bounds, dt, regions. */
Workspace workspace_from_json(const std::string& text);
std::string workspace_to_json(const Workspace& w);

}  // namespace ltlcc
