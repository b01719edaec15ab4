/**
 * Brute-force validators.  Nothing here is used by the build pipeline; these
 * exist so its output can be checked against evaluation of the network alone.
 */

#ifndef RELUCX_ORACLE_HPP
#define RELUCX_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "relucx/builder.hpp"
#include "relucx/model.hpp"
#include "relucx/signs.hpp"

namespace relucx {

/// Axis-aligned box sampled at `resolution` evenly spaced points per axis.
struct SampleGrid
{
    std::vector<double> lower;
    std::vector<double> upper;
    int resolution = 2;

    /// Throws std::invalid_argument on resolution < 2 or a non-positive extent.
    void validate() const;

    /// Cube [-half, half]^dim.
    static SampleGrid cube(int dim, double half, int resolution);
};

/**
 * Strict sign sequences of every grid point at which all node maps are at
 * least exclusion_tol away from zero.
 */
std::set<SignSequence> sample_region_signs(const ReluNetwork& net, const SampleGrid& grid,
                                           double exclusion_tol = 1e-6, unsigned threads = 1);

/// (C(n1, n0), sum_{i<=n0} C(n1, i)) for a generic arrangement of n1 hyperplanes in R^n0.
std::pair<std::uint64_t, std::uint64_t> arrangement_counts(int n0, int n1);

/**
 * Samples `trials` points on the sphere of radius epsilon around the vertex.
 * True when every zero coordinate of the vertex takes both signs among the
 * samples and every nonzero coordinate keeps its sign.
 */
bool perturb_check(const ReluNetwork& net, const Vertex& vertex, double epsilon, int trials,
                   std::uint64_t seed = 0);

/**
 * A point near one of the region's vertices whose evaluated strict signs equal
 * the region's, when such a point is found; confirms that a region too thin for
 * grid sampling is real.
 */
bool local_region_witness(const ReluNetwork& net, const SignSequence& region,
                          const std::vector<Vertex>& vertices);

struct OracleReport
{
    std::size_t regions_builder = 0;
    std::size_t regions_sampled = 0;
    /// Sampled sequences the builder does not have (subset violations).
    std::vector<SignSequence> unexpected;
    /// Built regions the grid did not hit.
    std::vector<SignSequence> missing;
    /// Missing regions that a local witness could not confirm either.
    std::vector<SignSequence> unwitnessed;

    bool subset_ok() const { return unexpected.empty(); }
    bool counts_ok() const { return unexpected.empty() && unwitnessed.empty(); }
};

/// Bounding box of the vertices grown by `margin` times its extent (plus one unit).
SampleGrid vertex_bounding_grid(const std::vector<Vertex>& vertices, int n0, int resolution,
                                double margin = 0.25);

/// Compares a built region set with a sampled one, witnessing unsampled regions locally.
OracleReport compare_regions(const ReluNetwork& net, const std::vector<SignSequence>& built_regions,
                             const std::set<SignSequence>& sampled, const std::vector<Vertex>& vertices);

}   // namespace relucx

#endif
