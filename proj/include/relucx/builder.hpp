/**
 * Layer-by-layer vertex enumeration for the canonical polyhedral complex.
 *
 * Vertices of the first layer are intersections of n0 first-layer
 * hyperplanes.  Each later layer k revisits every top-dimensional region of
 * the complex built so far, intersects l layer-k bent hyperplanes with
 * n0 - l older ones that meet at a face of the region, and keeps a solution
 * when all remaining older node maps keep the region's signs there.
 *
 * Zeros of a vertex's sign sequence are exactly the equations that were
 * solved; remaining signs come from strict evaluation.  A remaining value
 * smaller than degeneracy_tol means the network is not supertransversal at
 * that point and aborts the build.
 */

#ifndef RELUCX_BUILDER_HPP
#define RELUCX_BUILDER_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "relucx/model.hpp"
#include "relucx/signs.hpp"

namespace relucx {

struct Tolerances
{
    double degeneracy_tol = 1e-8;
    double cond_max = 1e12;
    double residual_tol = 1e-6;
    /// Relative; two points agree when |a - b| <= merge_tol * (1 + |a|).
    double merge_tol = 1e-6;
};

struct BuildOptions
{
    Tolerances tol;
    /// Workers for the per-region loop of extend_layer.
    unsigned threads = 1;
    /// When set, regions are visited in a shuffled order (schedule-independence checks).
    std::optional<std::uint64_t> shuffle_seed;
};

struct Vertex
{
    Eigen::VectorXd coords;
    SignSequence signs;
    /// Flat indices of the n0 solved node maps, ascending.
    std::vector<std::size_t> zero_set;
    double max_residual = 0.0;
    double solve_condition = 1.0;
};

/// Vertices and top-dimensional regions of the complex truncated after `layer`.
struct LayerBuildState
{
    int layer = 0;
    /// Number of node maps covered by every sign sequence in the state.
    std::size_t prefix_length = 0;
    /// Sorted by canonical sign order, unique keys.
    std::vector<Vertex> vertices;
    /// Region sign prefix -> indices into `vertices` of the vertices in its closure.
    std::map<SignSequence, std::vector<std::size_t>> regions;
};

/// Cells of the closure of a set of vertex cubes, graded by zero count.
struct CubeClosure
{
    /// by_zeros[z] holds the cells with exactly z zeros, sorted.
    std::vector<std::vector<SignSequence>> by_zeros;
    /// Same as by_zeros[0].
    std::vector<SignSequence> regions;
};

/**
 * Every sequence obtained from a vertex sequence by replacing any subset of
 * its zeros with +-1 values, truncated to the first active_prefix_length
 * entries.  Each vertex must have the same number of zeros inside the prefix.
 */
CubeClosure cube_closure(const std::vector<SignSequence>& vertices, std::size_t active_prefix_length);

/// Region prefix -> indices of the input vertices whose cube contains it.
std::map<SignSequence, std::vector<std::size_t>>
incident_regions(const std::vector<SignSequence>& vertices, std::size_t active_prefix_length);

/// Throws ArchitectureUnsupported when n1 < n0.
LayerBuildState first_layer_vertices(const ReluNetwork& net, const BuildOptions& options = {});

/// Adds layer k to a complete state for layers < k.
LayerBuildState extend_layer(const ReluNetwork& net, int k, const LayerBuildState& state,
                             const BuildOptions& options = {});

/// All vertices of the canonical polyhedral complex with full sign sequences.
LayerBuildState build_complex(const ReluNetwork& net, const BuildOptions& options = {});

std::vector<SignSequence> vertex_signs(const std::vector<Vertex>& vertices);

}   // namespace relucx

#endif
