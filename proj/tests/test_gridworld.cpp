#include <doctest.h>

#include "helpers.hpp"
#include "ltlcc/gridworld.hpp"
#include "ltlcc/hoa.hpp"

using namespace ltlcc;

namespace {

AnnotatedLdba fixture_annotated(const std::string& name) {
  Tgba aut = parse_hoa(slurp(fixture_path(name)));
  return annotate(validate_ldba(aut, std::vector<bool>(aut.num_states, true), {}));
}

RewardParams oracle_params() {
  RewardParams p;
  p.r_g = 50.0;
  p.r_n = -0.1;
  p.r_d = -10.0;
  p.d_max = 10.0;
  return p;
}

}  // namespace

TEST_CASE("grid JSON and moves") {
  Gridworld gw = gridworld_from_json(slurp(fixture_path("grid_phi1_walled.json")));
  CHECK(gw.width == 5);
  CHECK(gw.wall[gw.index(3, 3)]);
  // Off-grid and wall moves stay put.
  CHECK(grid_move(gw, gw.index(0, 0), 1) == gw.index(0, 0));
  CHECK(grid_move(gw, gw.index(0, 0), 0) == gw.index(0, 1));
  CHECK(grid_move(gw, gw.index(2, 3), 3) == gw.index(2, 3));  // into wall
  CHECK_THROWS_AS(gridworld_from_json("{\"schema_version\": 2}"), gridworld_error);

  std::vector<Symbol> sym = grid_symbols(gw, {"a", "b"});
  CHECK(sym[gw.index(0, 0)] == 1);
  CHECK(sym[gw.index(4, 4)] == 2);
  CHECK(sym[gw.index(2, 2)] == 0);
}

TEST_CASE("oracle matches reachability on the open grid") {
  Gridworld gw = gridworld_from_json(slurp(fixture_path("grid_phi1.json")));
  AnnotatedLdba ann = fixture_annotated("phi1.hoa");
  OracleResult res = tabular_oracle(gw, ann, oracle_params(), 0.99, 1e-9);
  std::vector<bool> truth = bfs_satisfiable(gw, ann);
  CHECK(res.satisfied == truth);
  // Everything is reachable on the open grid, so every non-trap product
  // state should satisfy.
  for (int cell = 0; cell < 25; ++cell) {
    for (int q = 0; q < 3; ++q) {
      CHECK(res.satisfied[cell * 3 + q]);
    }
  }
}

TEST_CASE("walled-off goal shows up in both maps identically") {
  Gridworld gw = gridworld_from_json(slurp(fixture_path("grid_phi1_walled.json")));
  AnnotatedLdba ann = fixture_annotated("phi1.hoa");
  OracleResult res = tabular_oracle(gw, ann, oracle_params(), 0.99, 1e-9);
  std::vector<bool> truth = bfs_satisfiable(gw, ann);
  CHECK(res.satisfied == truth);
  // b is sealed off: the await-b state cannot be satisfied from the start
  // cell, only from inside the enclosure.
  CHECK_FALSE(truth[gw.index(0, 0) * 3 + 1]);
  CHECK(truth[gw.index(4, 4) * 3 + 1]);
  // And the full task is unsatisfiable from everywhere outside the pocket.
  CHECK_FALSE(truth[gw.index(0, 0) * 3 + 0]);
}

TEST_CASE("size guard") {
  Gridworld gw;
  gw.width = 200;
  gw.height = 200;
  gw.wall.assign(40000, false);
  gw.cell_labels.assign(40000, {});
  AnnotatedLdba ann = fixture_annotated("phi1.hoa");
  CHECK_THROWS_AS(tabular_oracle(gw, ann, oracle_params(), 0.99, 1e-6), gridworld_error);
}
