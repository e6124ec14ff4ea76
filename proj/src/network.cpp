#include "fjmask/network.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_set>

#include "fjmask/errors.hpp"
#include "fjmask/rng.hpp"
#include "json.hpp"

namespace fjmask {

Network::Network(int n, std::vector<std::vector<int>> in_neighbors)
    : n_(n), in_neighbors_(std::move(in_neighbors)) {
  if (n_ < 1) throw ParameterError("network needs at least one agent");
  if (static_cast<int>(in_neighbors_.size()) != n_)
    throw ParameterError("in_neighbors size does not match agent count");
  for (auto& nbrs : in_neighbors_) {
    std::sort(nbrs.begin(), nbrs.end());
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (nbrs[k] < 0 || nbrs[k] >= n_)
        throw ParameterError("neighbor index out of range");
      if (k > 0 && nbrs[k] == nbrs[k - 1])
        throw ParameterError("duplicate neighbor entry");
    }
  }
}

const std::vector<int>& Network::in_neighbors(int agent) const {
  if (agent < 0 || agent >= n_) throw ParameterError("agent index out of range");
  return in_neighbors_[agent];
}

int Network::degree(int agent) const {
  return static_cast<int>(in_neighbors(agent).size());
}

bool Network::is_influence_element(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw ParameterError("agent index out of range");
  const auto& nbrs = in_neighbors_[i];
  return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

bool Network::path_exists(int from, int to) const {
  if (from < 0 || from >= n_ || to < 0 || to >= n_)
    throw ParameterError("agent index out of range");
  if (from == to) return true;
  std::vector<char> seen(n_, 0);
  std::deque<int> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int nb : in_neighbors_[v]) {
      if (nb == to) return true;
      if (!seen[nb]) {
        seen[nb] = 1;
        queue.push_back(nb);
      }
    }
  }
  return false;
}

std::string Network::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n_;
  j["in_neighbors"] = in_neighbors_;
  return j.dump();
}

Network Network::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed network JSON: ") + e.what());
  }
  if (!j.contains("n") || !j.contains("in_neighbors"))
    throw IoError("network JSON missing 'n' or 'in_neighbors'");
  return Network(j["n"].get<int>(),
                 j["in_neighbors"].get<std::vector<std::vector<int>>>());
}

Network random_regular_network(int n, int d, std::uint64_t seed) {
  if (n < 1) throw ParameterError("agent count must be positive");
  if (d < 1 || d > n)
    throw ParameterError("degree must satisfy 1 <= d <= n");
  SplitMix64 rng(mix_keys(seed, 0x6e6574776f726bULL));
  std::vector<int> pool(n);
  std::vector<std::vector<int>> nbrs(n);
  for (int i = 0; i < n; ++i) {
    std::iota(pool.begin(), pool.end(), 0);
    // Partial Fisher-Yates: the first d entries are a uniform sample
    // without replacement.
    for (int k = 0; k < d; ++k) {
      const int pick = k + static_cast<int>(rng.uniform_below(n - k));
      std::swap(pool[k], pool[pick]);
    }
    nbrs[i].assign(pool.begin(), pool.begin() + d);
  }
  return Network(n, std::move(nbrs));
}

}  // namespace fjmask
