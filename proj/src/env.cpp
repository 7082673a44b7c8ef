#include "ltlcc/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ltlcc {

const Region* Workspace::find_region(const std::string& name) const {
  for (const Region& r : regions) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

void validate_workspace(const Workspace& w) {
  if (w.dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (w.bounds.x_lo >= w.bounds.x_hi || w.bounds.y_lo >= w.bounds.y_hi) {
    throw std::invalid_argument("workspace bounds must be a nonempty box");
  }
  for (const Region& r : w.regions) {
    if (r.x_lo >= r.x_hi || r.y_lo >= r.y_hi) {
      throw std::invalid_argument("region '" + r.name + "' is empty");
    }
    if (r.x_lo < w.bounds.x_lo || r.x_hi > w.bounds.x_hi || r.y_lo < w.bounds.y_lo ||
        r.y_hi > w.bounds.y_hi) {
      throw std::invalid_argument("region '" + r.name + "' leaves the workspace");
    }
  }
  if (!w.allow_overlap) {
    for (std::size_t i = 0; i < w.regions.size(); ++i) {
      for (std::size_t j = i + 1; j < w.regions.size(); ++j) {
        const Region& a = w.regions[i];
        const Region& b = w.regions[j];
        bool disjoint = a.x_hi < b.x_lo || b.x_hi < a.x_lo || a.y_hi < b.y_lo || b.y_hi < a.y_lo;
        if (!disjoint) {
          throw std::invalid_argument("regions '" + a.name + "' and '" + b.name +
                                      "' overlap (set allow_overlap to permit)");
        }
      }
    }
  }
}

double wrap_angle(double theta) {
  constexpr double kPi = 3.14159265358979323846;
  while (theta > kPi) theta -= 2.0 * kPi;
  while (theta < -kPi) theta += 2.0 * kPi;
  return theta;
}

CarState step_dynamics(const CarState& s, const CarAction& a, double dt, const Bounds& bounds) {
  double v = std::clamp(a.v, -1.0, 1.0);
  double phi = std::clamp(a.phi, -1.0, 1.0);
  double slip_gamma = std::atan(std::tan(phi)) / 2.0;
  double dx = v * std::cos(slip_gamma + s.theta) / std::cos(slip_gamma);
  double dy = v * std::sin(slip_gamma + s.theta) / std::cos(slip_gamma);
  double dtheta = v * std::tan(phi);

  CarState next;
  next.x = std::clamp(s.x + dt * dx, bounds.x_lo, bounds.x_hi);
  next.y = std::clamp(s.y + dt * dy, bounds.y_lo, bounds.y_hi);
  next.theta = wrap_angle(s.theta + dt * dtheta);
  return next;
}

Symbol label(const Workspace& w, const CarState& s, const std::vector<std::string>& ap_list) {
  Symbol sigma = 0;
  for (std::size_t i = 0; i < ap_list.size(); ++i) {
    const Region* r = w.find_region(ap_list[i]);
    if (r && r->contains(s.x, s.y)) sigma |= Symbol{1} << i;
  }
  return sigma;
}

double distance_to_region(double x, double y, const Region& r) {
  double dx = std::max({r.x_lo - x, 0.0, x - r.x_hi});
  double dy = std::max({r.y_lo - y, 0.0, y - r.y_hi});
  return std::hypot(dx, dy);
}

double distance_to_regions(const CarState& s, const std::vector<const Region*>& regions) {
  if (regions.empty()) throw std::invalid_argument("distance over an empty region set");
  double best = std::numeric_limits<double>::infinity();
  for (const Region* r : regions) {
    best = std::min(best, distance_to_region(s.x, s.y, *r));
  }
  return best;
}

Workspace workspace_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Workspace w;
  if (j.contains("bounds")) {
    const auto& b = j.at("bounds");
    w.bounds.x_lo = b.at("x").at(0).get<double>();
    w.bounds.x_hi = b.at("x").at(1).get<double>();
    w.bounds.y_lo = b.at("y").at(0).get<double>();
    w.bounds.y_hi = b.at("y").at(1).get<double>();
  }
  w.dt = j.value("dt", 0.1);
  w.allow_overlap = j.value("allow_overlap", false);
  for (const auto& rj : j.value("regions", nlohmann::json::array())) {
    Region r;
    r.name = rj.at("name").get<std::string>();
    const auto& rect = rj.at("rect");
    r.x_lo = rect.at(0).get<double>();
    r.x_hi = rect.at(1).get<double>();
    r.y_lo = rect.at(2).get<double>();
    r.y_hi = rect.at(3).get<double>();
    w.regions.push_back(r);
  }
  validate_workspace(w);
  return w;
}

std::string workspace_to_json(const Workspace& w) {
  nlohmann::json j;
  j["bounds"]["x"] = {w.bounds.x_lo, w.bounds.x_hi};
  j["bounds"]["y"] = {w.bounds.y_lo, w.bounds.y_hi};
  j["bounds"]["theta"] = {-3.14159265358979323846, 3.14159265358979323846};
  j["dt"] = w.dt;
  j["allow_overlap"] = w.allow_overlap;
  j["regions"] = nlohmann::json::array();
  for (const Region& r : w.regions) {
    j["regions"].push_back({{"name", r.name}, {"rect", {r.x_lo, r.x_hi, r.y_lo, r.y_hi}}});
  }
  return j.dump(2) + "\n";
}

}  // namespace ltlcc
