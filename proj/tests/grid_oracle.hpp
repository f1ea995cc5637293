#pragma once

#include "support.hpp"

#include "hyperdyn/hyperspace.hpp"
#include "hyperdyn/random_maps.hpp"

#include <deque>

namespace testing {

constexpr long K = 512;

// Brute force on the graph subdivided into steps of 1/K: both sets are sampled
// on grid nodes (plus the nodes nearest to their interval ends) and the directed
// distances come from multi-source BFS.
class GridOracle {
 public:
  explicit GridOracle(const Graph& g) : g_(g) {
    adj_.resize(g.vertex_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      std::vector<std::size_t> row(K + 1);
      row[0] = g.edge(e).u;
      row[K] = g.edge(e).v;
      for (long k = 1; k < K; ++k) {
        row[k] = adj_.size();
        adj_.emplace_back();
      }
      for (long k = 0; k < K; ++k) {
        adj_[row[k]].push_back(row[k + 1]);
        adj_[row[k + 1]].push_back(row[k]);
      }
      nodes_.push_back(std::move(row));
    }
  }

  std::vector<std::size_t> sample(const Continuum& c) const {
    std::vector<std::size_t> out;
    for (EdgeId e = 0; e < g_.edge_count(); ++e)
      for (const auto& iv : c.intervals().on_edge(e)) {
        for (long k = 0; k <= K; ++k) {
          Rational t = rat(k, K);
          if (t >= iv.lo && t <= iv.hi) out.push_back(nodes_[e][k]);
        }
        for (const Rational& end : {iv.lo, iv.hi}) {
          Rational scaled = end * K;
          mpz_class twice = scaled.get_num() * 2 + scaled.get_den();
          long k = mpz_class(twice / (2 * scaled.get_den())).get_si();
          out.push_back(nodes_[e][k]);
        }
      }
    return out;
  }

  Rational directed(const Continuum& a, const Continuum& b) const {
    std::vector<long> dist(adj_.size(), -1);
    std::deque<std::size_t> q;
    for (std::size_t n : sample(b))
      if (dist[n] < 0) {
        dist[n] = 0;
        q.push_back(n);
      }
    while (!q.empty()) {
      std::size_t x = q.front();
      q.pop_front();
      for (std::size_t y : adj_[x])
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          q.push_back(y);
        }
    }
    long worst = 0;
    for (std::size_t n : sample(a)) worst = std::max(worst, dist[n]);
    return rat(worst, K);
  }

  Rational hausdorff(const Continuum& a, const Continuum& b) const { return max(directed(a, b), directed(b, a)); }

 private:
  const Graph& g_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::vector<std::size_t>> nodes_;
};

// Continua with coordinates off the 1/K grid, as well as the library's own sampler.
inline Continuum odd_continuum(const Graph& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  switch (kind(rng)) {
    case 0: {
      EdgeId e = std::uniform_int_distribution<std::size_t>(0, g.edge_count() - 1)(rng);
      Rational x = grid(rng, 301), y = grid(rng, 301);
      return Continuum::interval(g, e, min(x, y), max(x, y));
    }
    case 1: {
      Continuum p = Continuum::point(g, random_point(g, rng, 301));
      return neighborhood(g, p, grid(rng, 211) * rat(3, 2));
    }
    default:
      return random_continuum(g, rng);
  }
}

}  // namespace testing
