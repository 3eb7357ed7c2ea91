#include <doctest.h>

#include "oracles.hpp"
#include "swarmengage/gridworld.hpp"

using namespace swarmengage;

namespace {

// 8x8 map with the 2x4 block in the middle and the 2x2 corner base.
GridSpec corner_map() {
  GridSpec probe({8, 8}, {}, {0});
  return GridSpec({8, 8}, probe.box({3, 2}, {4, 5}), probe.box({0, 0}, {1, 1}));
}

oracle::Grid2 corner_map_oracle() {
  std::vector<std::pair<int, int>> walls;
  for (int r = 3; r <= 4; ++r)
    for (int c = 2; c <= 5; ++c) walls.push_back({r, c});
  return oracle::make_grid(8, 8, walls);
}

AdjacencyMatrix chain(std::size_t n) {
  return build_grid_adjacency(GridSpec({1, n}, {}, {0}));
}

}  // namespace

TEST_CASE("grid indexing is row-major with the last axis fastest") {
  GridSpec g({3, 4, 5}, {}, {0});
  CHECK(g.bin_count() == 60);
  CHECK(g.linear_index({1, 2, 3}) == 1 * 20 + 2 * 5 + 3);
  CHECK(g.coords(33) == std::vector<std::size_t>{1, 2, 3});
  CHECK(g.box({0, 0, 0}, {0, 0, 1}) == BinSet{0, 1});
  CHECK_THROWS_AS(g.linear_index({3, 0, 0}), ConfigError);
}

TEST_CASE("grid spec rejects bad inputs") {
  CHECK_THROWS_AS(GridSpec({4}, {}, {0}), ConfigError);
  CHECK_THROWS_AS(GridSpec({2, 2}, {}, {}), ConfigError);
  CHECK_THROWS_AS(GridSpec({2, 2}, {1}, {1}), ConfigError);
  CHECK_THROWS_AS(GridSpec({2, 2}, {9}, {0}), ConfigError);
}

TEST_CASE("1x3 grid is a path with self loops") {
  auto A = chain(3);
  CHECK(A.allowed(0, 1));
  CHECK(A.allowed(1, 0));
  CHECK(A.allowed(1, 2));
  CHECK(A.allowed(2, 1));
  for (Bin i = 0; i < 3; ++i) CHECK(A.allowed(i, i));
  CHECK_FALSE(A.allowed(0, 2));
  CHECK_FALSE(A.allowed(2, 0));
}

TEST_CASE("2x2 grid with an obstacle leaves an L-shaped path") {
  auto A = build_grid_adjacency(GridSpec({2, 2}, {3}, {0}));
  for (Bin i = 0; i < 4; ++i) {
    CHECK_FALSE(A.allowed(3, i));
    CHECK_FALSE(A.allowed(i, 3));
  }
  CHECK(A.allowed(0, 1));
  CHECK(A.allowed(0, 2));
  CHECK_FALSE(A.allowed(1, 2));
  CHECK(A.free_bins() == BinSet{0, 1, 2});
}

TEST_CASE("8x8 adjacency matches a brute-force neighbour scan") {
  auto g = corner_map();
  auto o = corner_map_oracle();
  auto A = build_grid_adjacency(g);
  std::size_t edges = 0, oracle_edges = 0;
  for (int a = 0; a < 64; ++a) {
    for (int b = 0; b < 64; ++b) {
      bool want = !o.blocked[a] && !o.blocked[b] && (a == b || oracle::grid_neighbors(o, a, b));
      CHECK(A.allowed(static_cast<Bin>(a), static_cast<Bin>(b)) == want);
      oracle_edges += (want && a != b);
    }
    edges += A.successors(static_cast<Bin>(a)).size();
    CHECK(A.successors(static_cast<Bin>(a)).size() <= 4);
  }
  CHECK(edges == oracle_edges);
  CHECK(A.free_bins().size() == 56);
}

TEST_CASE("strong connectivity") {
  auto g = corner_map();
  auto A = build_grid_adjacency(g);
  CHECK(is_strongly_connected(A, g.free_bins()));
  CHECK(is_strongly_connected(A, {17}));

  // a full wall down column 2 of a 3x5 map
  GridSpec probe({3, 5}, {}, {0});
  GridSpec walled({3, 5}, probe.box({0, 2}, {2, 2}), {0});
  auto W = build_grid_adjacency(walled);
  CHECK_FALSE(is_strongly_connected(W, {0, 4}));
  CHECK_FALSE(is_strongly_connected(W, walled.free_bins()));
  // non-adjacent bins of one row are not connected inside their own set
  CHECK_FALSE(is_strongly_connected(A, {2, 4}));
}

TEST_CASE("connected components split a ring of bins") {
  auto A = chain(6);
  auto comps = connected_components(A, {0, 1, 3, 5});
  REQUIRE(comps.size() == 3);
  CHECK(comps[0] == BinSet{0, 1});
  CHECK(comps[1] == BinSet{3});
  CHECK(comps[2] == BinSet{5});
}

TEST_CASE("boundary layers on a chain") {
  auto L = compute_boundary_layers(chain(5), {0});
  REQUIRE(L.count() == 4);
  for (std::size_t p = 1; p <= 4; ++p) CHECK(L.layer(p) == BinSet{p});
  CHECK(L.inside(3) == BinSet{0, 1, 2});
  CHECK_THROWS_AS(compute_boundary_layers(chain(5), {}), ConfigError);
}

TEST_CASE("boundary layers cover everything exactly once") {
  auto g = corner_map();
  auto A = build_grid_adjacency(g);
  auto L = compute_boundary_layers(A, g.base_bins());
  // first ring around the corner base
  BinSet first{g.linear_index({0, 2}), g.linear_index({1, 2}), g.linear_index({2, 0}),
               g.linear_index({2, 1})};
  CHECK(L.layer(1) == normalize(first));

  auto o = corner_map_oracle();
  auto dist = oracle::grid_bfs(o, {0, 1, 8, 9});
  std::size_t total = L.base.size() + g.obstacles().size();
  for (std::size_t p = 1; p <= L.count(); ++p) {
    total += L.layer(p).size();
    for (Bin b : L.layer(p)) CHECK(dist[b] == static_cast<int>(p));
  }
  CHECK(total == g.bin_count());

  auto all = compute_boundary_layers(A, g.free_bins());
  CHECK(all.count() == 0);
}

TEST_CASE("next hop on a chain") {
  auto hop = shortest_path_next_hop(chain(5), {4});
  CHECK(hop[0] == 1);
  CHECK(hop[3] == 4);
  CHECK(hop[4] == 4);
}

TEST_CASE("next hop prefers the smaller bin on ties") {
  // bin 6 of a 3x5 map reaches target 12 via 7 or 11 in two moves
  auto A = build_grid_adjacency(GridSpec({3, 5}, {}, {0}));
  auto hop = shortest_path_next_hop(A, {12});
  CHECK(hop[6] == 7);
  auto hop2 = shortest_path_next_hop(A, {2, 7});
  CHECK(hop2[12] == 7);
  CHECK(hop2[2] == 2);
}

TEST_CASE("next hop routes around the obstacle in BFS distance") {
  auto g = corner_map();
  auto A = build_grid_adjacency(g);
  auto o = corner_map_oracle();
  auto dist = oracle::grid_bfs(o, {0, 1, 8, 9});
  auto hop = shortest_path_next_hop(A, g.base_bins());
  for (Bin b = 0; b < 64; ++b) {
    if (g.is_obstacle(b)) {
      CHECK(hop[b] == kNoBin);
      continue;
    }
    Bin cur = b;
    int moves = 0;
    while (!g.is_base(cur)) {
      Bin nxt = hop[cur];
      CHECK(A.allowed(cur, nxt));
      CHECK(dist[nxt] == dist[cur] - 1);
      cur = nxt;
      ++moves;
    }
    CHECK(moves == dist[b]);
  }
}

TEST_CASE("next hop fails when a bin cannot reach the targets") {
  GridSpec probe({3, 5}, {}, {0});
  GridSpec walled({3, 5}, probe.box({0, 2}, {2, 2}), {0});
  CHECK_THROWS_AS(shortest_path_next_hop(build_grid_adjacency(walled), {0}), InfeasibleError);
}
