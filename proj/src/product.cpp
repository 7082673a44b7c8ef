#include "ltlcc/product.hpp"

#include <cmath>
#include <cstdio>

namespace ltlcc {

const char* episode_event_name(EpisodeEvent e) {
  switch (e) {
    case EpisodeEvent::running: return "running";
    case EpisodeEvent::trap: return "trap";
    case EpisodeEvent::accepted_round: return "accepted_round";
    case EpisodeEvent::step_limit: return "step_limit";
  }
  return "?";
}

ProductEnv::ProductEnv(AnnotatedLdba annotated, Workspace workspace, RewardParams params,
                       int max_episode_steps)
    : annotated_(std::move(annotated)),
      workspace_(std::move(workspace)),
      params_(params),
      max_steps_(max_episode_steps) {
  validate_workspace(workspace_);
  for (int q = 0; q < annotated_.aut().num_states; ++q) {
    if (!annotated_.is_trap(q)) non_trap_states_.push_back(q);
  }
  if (non_trap_states_.empty()) {
    throw automaton_error("every automaton state is a trap; nothing to learn");
  }
}

Symbol ProductEnv::label_of(const CarState& s) const {
  return label(workspace_, s, annotated_.aut().ap_list);
}

double ProductEnv::distance_to_progress(const CarState& s, const std::vector<int>& aps) const {
  std::vector<const Region*> regions;
  for (int ap : aps) {
    const Region* r = workspace_.find_region(annotated_.aut().ap_list[ap]);
    if (r) regions.push_back(r);
  }
  if (regions.empty()) return params_.d_max;
  return distance_to_regions(s, regions);
}

ProductState ProductEnv::reset(std::mt19937_64& rng, QInitMode mode) const {
  constexpr double kPi = 3.14159265358979323846;
  std::uniform_real_distribution<double> ux(workspace_.bounds.x_lo, workspace_.bounds.x_hi);
  std::uniform_real_distribution<double> uy(workspace_.bounds.y_lo, workspace_.bounds.y_hi);
  std::uniform_real_distribution<double> ut(-kPi, kPi);

  ProductState ps;
  ps.s.x = ux(rng);
  ps.s.y = uy(rng);
  ps.s.theta = ut(rng);
  if (mode == QInitMode::fixed_q0) {
    ps.q = annotated_.aut().initial;
  } else {
    std::uniform_int_distribution<std::size_t> uq(0, non_trap_states_.size() - 1);
    ps.q = non_trap_states_[uq(rng)];
  }
  ps.v = VisitVector(annotated_.num_sets());
  ps.steps = 0;
  return ps;
}

ProductState ProductEnv::reset_at(const CarState& s0, int q) const {
  ProductState ps;
  ps.s = s0;
  ps.q = q;
  ps.v = VisitVector(annotated_.num_sets());
  ps.steps = 0;
  return ps;
}

StepOutcome ProductEnv::step(const ProductState& ps, const CarAction& a) const {
  Symbol sigma = label_of(ps.s);
  int edge = edge_on_symbol(annotated_.aut(), ps.q, sigma);

  StepOutcome out;
  out.edge_taken = edge;
  out.reward = shaped_reward(
      annotated_, ps.v, ps.q, sigma, params_,
      [&](const std::vector<int>& aps) { return distance_to_progress(ps.s, aps); });

  out.next = ps;
  out.next.s = step_dynamics(ps.s, a, workspace_.dt, workspace_.bounds);
  out.next.q = annotated_.aut().edges[edge].dst;
  bool round = update_visits(out.next.v, edge, annotated_);
  out.next.steps = ps.steps + 1;

  if (annotated_.is_trap(out.next.q)) {
    out.terminated = EpisodeEvent::trap;
  } else if (round) {
    out.terminated = EpisodeEvent::accepted_round;
  } else if (out.next.steps >= max_steps_) {
    out.terminated = EpisodeEvent::step_limit;
  } else {
    out.terminated = EpisodeEvent::running;
  }
  return out;
}

std::vector<int> ProductEnv::epsilon_options(const ProductState& ps) const {
  std::vector<int> out;
  for (auto [src, dst] : annotated_.ldba.eps_edges) {
    if (src == ps.q) out.push_back(dst);
  }
  return out;
}

std::optional<ProductState> ProductEnv::apply_epsilon(const ProductState& ps) const {
  for (int target : epsilon_options(ps)) {
    for (int e : annotated_.aut().edges_from(target)) {
      if (b_value(annotated_, ps.v, e)) {
        ProductState next = ps;
        next.q = target;
        return next;
      }
    }
  }
  return std::nullopt;
}

TrajectoryLog::TrajectoryLog() : csv_("step,x,y,theta,q,reward,V_bits,event\n") {}

void TrajectoryLog::record(const ProductState& before, const StepOutcome& out) {
  char buf[160];
  std::string vbits;
  for (bool b : out.next.v.slots) vbits += b ? '1' : '0';
  std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%d,%.6f,%s,%s\n", before.steps, before.s.x,
                before.s.y, before.s.theta, before.q, out.reward, vbits.c_str(),
                episode_event_name(out.terminated));
  csv_ += buf;
}

}  // namespace ltlcc
