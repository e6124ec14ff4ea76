#ifndef FJMASK_NETWORK_HPP
#define FJMASK_NETWORK_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace fjmask {

// Directed influence graph. An edge (i, j) means agent j directly
// influences agent i; in_neighbors[i] is that set, kept sorted ascending so
// every module that flattens a weight row into a vector agrees on the
// element order.
class Network {
 public:
  Network(int n, std::vector<std::vector<int>> in_neighbors);

  int agent_count() const { return n_; }
  const std::vector<int>& in_neighbors(int agent) const;
  int degree(int agent) const;

  // True iff j may influence i, i.e. W^{ij} is an influence element.
  bool is_influence_element(int i, int j) const;

  // True iff a directed path of influence leads from `to` back to `from`,
  // i.e. `to` indirectly influences `from`. Zero-length paths count, so
  // path_exists(i, i) is always true.
  bool path_exists(int from, int to) const;

  std::string to_json() const;
  static Network from_json(const std::string& text);

  bool operator==(const Network& other) const = default;

 private:
  int n_;
  std::vector<std::vector<int>> in_neighbors_;
};

// Every agent receives exactly d in-neighbors drawn uniformly without
// replacement from all n agents; self-loops are permitted. Deterministic in
// the seed.
Network random_regular_network(int n, int d, std::uint64_t seed);

}  // namespace fjmask

#endif
