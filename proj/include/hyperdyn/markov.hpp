#pragma once

#include "hyperdyn/continuum.hpp"
#include "hyperdyn/metric_graph.hpp"
#include "hyperdyn/pl_map.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace hyperdyn {

/// Fixed-width-at-runtime bit set over partition cells.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const noexcept { return n_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool none() const;
  std::size_t count() const;
  CellSet& operator|=(const CellSet& o);
  bool subset_of(const CellSet& o) const;
  bool intersects(const CellSet& o) const;
  std::vector<std::size_t> members() const;
  std::size_t hash() const noexcept;

  friend bool operator==(const CellSet& a, const CellSet& b) { return a.words_ == b.words_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct CellSetHash {
  std::size_t operator()(const CellSet& s) const noexcept { return s.hash(); }
};

struct MarkovCell {
  EdgeId edge = 0;
  Rational lo;
  Rational hi;
  std::size_t lo_point = 0;  // indices into MarkovData::points
  std::size_t hi_point = 0;
};

/// A forward-invariant finite partition and the induced cell transitions.
/// Each cell maps either onto a union of whole cells or onto one partition point.
struct MarkovData {
  std::vector<PointOnGraph> points;     // canonical, sorted by (edge, t)
  std::vector<std::size_t> point_image; // f(points[i]) == points[point_image[i]]
  std::vector<MarkovCell> cells;        // sorted by (edge, lo)
  std::vector<CellSet> cell_image;      // empty when the cell is collapsed
  std::vector<std::size_t> collapsed_to;  // point index when cell_image is empty
  std::vector<std::vector<std::size_t>> point_cells;  // cells having the point as an end

  std::size_t cell_count() const noexcept { return cells.size(); }
  std::optional<std::size_t> point_index(const Graph& g, const PointOnGraph& p) const;
};

struct MarkovOptions {
  unsigned depth = 64;
  std::size_t point_cap = 4096;
  std::vector<PointOnGraph> extra_seeds;
};

/// Forward closure of vertices, breakpoints, junction preimages and fixed-point
/// data. Throws ValidationError when the closure does not stabilise within
/// `depth` rounds or exceeds `point_cap` points.
MarkovData build_markov(const PLMap& f, const MarkovOptions& options = {});

/// Element of the finite family of partition-aligned continua: either a single
/// partition point or a connected union of closed cells.
struct AlignedElement {
  std::optional<std::size_t> point;
  CellSet cells;

  bool degenerate() const { return point.has_value(); }
};

Continuum to_continuum(const Graph& g, const MarkovData& m, const AlignedElement& a);
/// Aligned element equal to `c`, if `c` is aligned with the partition.
std::optional<AlignedElement> aligned_element(const Graph& g, const MarkovData& m, const Continuum& c);
/// f(A) computed combinatorially.
AlignedElement aligned_image(const MarkovData& m, const AlignedElement& a);
/// Whether the cells form a connected union.
bool cells_connected(const MarkovData& m, const CellSet& s);

/// Calls `visit` for every connected nonempty cell set; throws
/// CombinatorialBlowup past `cap` sets.
void for_each_connected_cell_set(const MarkovData& m, std::size_t cap, const std::function<void(const CellSet&)>& visit);

}  // namespace hyperdyn
