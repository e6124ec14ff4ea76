#include "fjmask/network.hpp"

#include <vector>

#include "doctest.h"
#include "fjmask/errors.hpp"
#include "fjmask/rng.hpp"

using namespace fjmask;

TEST_CASE("single agent with d = n = 1 is its own neighbor") {
  const Network net = random_regular_network(1, 1, 123);
  CHECK(net.agent_count() == 1);
  REQUIRE(net.degree(0) == 1);
  CHECK(net.in_neighbors(0)[0] == 0);
}

TEST_CASE("d = n forces the complete graph with self-loops") {
  const Network net = random_regular_network(3, 3, 999);
  for (int i = 0; i < 3; ++i) {
    CHECK(net.in_neighbors(i) == std::vector<int>{0, 1, 2});
  }
}

TEST_CASE("regular construction gives every agent exactly d in-neighbors") {
  const Network net = random_regular_network(100, 10, 42);
  int total = 0;
  for (int i = 0; i < 100; ++i) {
    CHECK(net.degree(i) == 10);
    total += net.degree(i);
  }
  CHECK(total == 100 * 10);
}

TEST_CASE("construction is deterministic in the seed") {
  const Network a = random_regular_network(50, 7, 5);
  const Network b = random_regular_network(50, 7, 5);
  CHECK(a == b);
  const Network c = random_regular_network(50, 7, 6);
  CHECK(a != c);
}

TEST_CASE("degree bounds are validated") {
  CHECK_THROWS_AS(random_regular_network(5, 6, 0), ParameterError);
  CHECK_THROWS_AS(random_regular_network(5, 0, 0), ParameterError);
  CHECK_THROWS_AS(random_regular_network(0, 1, 0), ParameterError);
}

TEST_CASE("influence elements follow the neighbor lists") {
  const Network complete = random_regular_network(3, 3, 1);
  CHECK(complete.is_influence_element(0, 2));
  // Permitted edges may still carry a zero weight; the dense worked example
  // has a structural zero on an existing edge, so (1, 0) stays present.
  CHECK(complete.is_influence_element(1, 0));

  const Network sparse(2, {{1}, {0, 1}});
  CHECK_FALSE(sparse.is_influence_element(0, 0));
  CHECK(sparse.is_influence_element(0, 1));
  CHECK_THROWS_AS(sparse.is_influence_element(2, 0), ParameterError);
}

TEST_CASE("neighbor lists reject bad indices and duplicates") {
  CHECK_THROWS_AS(Network(2, {{0, 2}, {1}}), ParameterError);
  CHECK_THROWS_AS(Network(2, {{-1}, {1}}), ParameterError);
  CHECK_THROWS_AS(Network(2, {{1, 1}, {0}}), ParameterError);
  CHECK_THROWS_AS(Network(2, {{0}}), ParameterError);
}

TEST_CASE("neighbor lists are stored sorted ascending") {
  const Network net(3, {{2, 0}, {1}, {2, 1, 0}});
  CHECK(net.in_neighbors(0) == std::vector<int>{0, 2});
  CHECK(net.in_neighbors(2) == std::vector<int>{0, 1, 2});
}

namespace {

// Boolean transitive closure over the in-neighbor relation; matrix-power
// oracle for the breadth-first path query.
std::vector<std::vector<char>> reach_closure(const Network& net) {
  const int n = net.agent_count();
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    r[i][i] = 1;
    for (int j : net.in_neighbors(i)) r[i][j] = 1;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = 1;
  return r;
}

}  // namespace

TEST_CASE("path query agrees with the transitive-closure oracle on small graphs") {
  SplitMix64 rng(77);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform_below(5));
    std::vector<std::vector<int>> nbrs(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rng.uniform01() < 0.3) nbrs[i].push_back(j);
    const Network net(n, nbrs);
    const auto closure = reach_closure(net);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(net.path_exists(i, j) == static_cast<bool>(closure[i][j]));
  }
}

TEST_CASE("zero-length paths always exist") {
  const Network net(2, {{1}, {0}});
  CHECK(net.path_exists(0, 0));
  CHECK(net.path_exists(1, 1));
}

TEST_CASE("network JSON round trip preserves structure and field order") {
  const Network net = random_regular_network(6, 2, 11);
  const std::string text = net.to_json();
  CHECK(text.find("\"n\"") < text.find("\"in_neighbors\""));
  CHECK(Network::from_json(text) == net);
  CHECK_THROWS_AS(Network::from_json("{\"n\": 2}"), IoError);
  CHECK_THROWS_AS(Network::from_json("not json"), IoError);
}
