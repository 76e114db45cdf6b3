#pragma once

#include "sqtb/dyadic.hpp"
#include "sqtb/measure.hpp"

#include <map>

namespace sqtb {

/// One positive-mass cube of the grid with its atom list.
struct TreeNode {
    Cube cube;
    std::vector<Eigen::Index> atoms;  // indices into the measure
    double mass = 0.0;
    bool good = true;
};

/// The positive-mass cubes of one shifted grid over one measure,
/// generation by generation, each with atoms, mass and goodness.
/// Zero-mass cubes are never materialized; every operation downstream
/// works on this index. Immutable after construction.
class MeasureTree {
  public:
    MeasureTree(DiscreteMeasure mu, ShiftedGrid grid);

    const DiscreteMeasure& measure() const { return mu_; }
    const ShiftedGrid& grid() const { return grid_; }
    const GridParams& params() const { return grid_.params(); }

    /// Deterministically ordered (generation, index) node map.
    const std::map<CubeKey, TreeNode>& nodes() const { return nodes_; }
    const TreeNode& node(const CubeKey& key) const;
    const TreeNode* find(const CubeKey& key) const;

    /// Positive-mass cubes of one generation, in index order.
    std::vector<const TreeNode*> generation(int gen) const;

    /// Key of the generation-(gen) ancestor of the node's cube.
    CubeKey ancestor_key(const CubeKey& key, int k) const;

    /// Atoms lying exactly on a cube boundary at some randomized scale
    /// (generations coarser than the finest); the partition stays exact
    /// via half-open boxes but the contact is surfaced for reports.
    std::size_t boundary_contacts() const { return boundary_contacts_; }
    /// Contacts at the finest generation, where the truncated shift is
    /// deterministic (unavoidable for lattice-aligned measures).
    std::size_t finest_scale_contacts() const { return finest_contacts_; }

    /// Sum of masses of atoms of `f` restricted to the node's cube.
    double integral(const TreeNode& node, const Vector& f) const;

  private:
    const DiscreteMeasure* mu_;
    const ShiftedGrid* grid_;
    std::map<CubeKey, TreeNode> nodes_;
    std::size_t boundary_contacts_ = 0;
    std::size_t finest_contacts_ = 0;
};

}  // namespace sqtb
