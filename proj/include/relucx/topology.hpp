/**
 * The sign sequence cubical complex, its mod-2 cellular chain complex and
 * the topology of the decision boundary.
 *
 * Cells are stored by sign sequence.  A sequence with z zeros is a cell of
 * dimension n0 - z in the polyhedral complex (and a z-cube in the dual).
 * Boundaries are always taken in the polyhedral complex: the facets of a
 * cell are the present sequences with one more zero.
 */

#ifndef RELUCX_TOPOLOGY_HPP
#define RELUCX_TOPOLOGY_HPP

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "relucx/gf2.hpp"
#include "relucx/signs.hpp"

namespace relucx {

class CubicalComplex
{
  public:
    CubicalComplex() = default;

    /**
     * Complex from an explicit cell list.  Throws ClosureViolation unless the
     * cells are exactly the cube closure of the cells with n0 zeros.
     */
    static CubicalComplex from_cells(std::vector<SignSequence> cells, int n0);

    int input_dim() const { return n0_; }
    std::size_t sequence_length() const { return length_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }

    /// All cells in canonical order; a cell's id is its position here.
    const std::vector<SignSequence>& cells() const { return cells_; }
    const SignSequence& cell(std::size_t id) const { return cells_[id]; }
    int dimension(std::size_t id) const { return n0_ - static_cast<int>(cells_[id].zero_count()); }

    /// Ids of the cells of polyhedral dimension k (0 <= k <= n0), ascending.
    const std::vector<std::size_t>& cells_of_dim(int k) const;

    std::optional<std::size_t> find(const SignSequence& s) const;
    bool contains(const SignSequence& s) const { return find(s).has_value(); }

    /// Present cells obtained by zeroing one nonzero entry of cell `id`, ascending ids.
    std::vector<std::size_t> facets(std::size_t id) const;

    /// Present cells obtained by replacing one zero of cell `id` with +-1.
    std::vector<std::size_t> cofaces(std::size_t id) const;

  private:
    friend CubicalComplex make_complex(std::vector<SignSequence> cells, int n0, std::size_t length);

    int n0_ = 0;
    std::size_t length_ = 0;
    std::vector<SignSequence> cells_;
    std::unordered_map<SignSequence, std::size_t, SignSequenceHash> index_;
    std::vector<std::vector<std::size_t>> by_dim_;
};

/// Mod-2 chain complex; boundary[k] maps k-cells to (k-1)-cells (boundary[0] is empty).
struct ChainComplexGF2
{
    std::vector<std::size_t> cell_counts;
    std::vector<Gf2Columns> boundary;
    /// When set, the last 0-cell is the point at infinity.
    bool infinity_vertex = false;
};

struct BettiReport
{
    std::vector<long> betti;
    /// beta_0 - 1
    long bounded = 0;
    /// beta_top - beta_0 + 1, top = betti.size() - 1
    long unbounded = 0;
};

/// Cube closure of the vertex sequences over all coordinates.
CubicalComplex assemble(const std::vector<SignSequence>& vertices, int n0);

/// Cellular boundary of the polyhedral complex, no point at infinity.
ChainComplexGF2 boundary_matrices(const CubicalComplex& cx);

/// Cells whose last entry (the output node map) is zero.
CubicalComplex decision_boundary(const CubicalComplex& cx);

/**
 * Chain complex of the one-point compactification of a decision boundary:
 * dimensions 0..n0-1, plus a 0-cell at infinity that every edge with exactly
 * one present endpoint attaches to.
 */
ChainComplexGF2 compactify(const CubicalComplex& db);

/// True when every composite boundary[k] * boundary[k+1] vanishes.
bool boundary_squares_to_zero(const ChainComplexGF2& chain);

/// Betti numbers over GF(2); throws BoundaryInconsistent when the boundary does not square to zero.
BettiReport betti_gf2(const ChainComplexGF2& chain);

}   // namespace relucx

#endif
