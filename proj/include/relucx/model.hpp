/**
 * Fully-connected ReLU networks and their node maps.
 *
 * A network with architecture (n0, n1, ..., nm, 1) has layers 1..m+1; layer
 * m+1 is the scalar output map and carries no ReLU.  Every unit of every
 * layer, including the output, is a node map.  Node maps are numbered
 * layer-major, unit-ascending, so there are N = n1 + ... + nm + 1 of them.
 */

#ifndef RELUCX_MODEL_HPP
#define RELUCX_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "relucx/signs.hpp"

namespace relucx {

struct AffineLayer
{
    Eigen::MatrixXd weights;   // n_t x n_{t-1}; row r is the incoming vector of unit r
    Eigen::VectorXd bias;      // n_t
};

/// Position of a node map; layer and unit are 1-based, flat is 0-based.
struct NodeIndex
{
    /// 1-based, layer_count() is the output.
    int layer = 0;
    /// 1-based within the layer.
    int unit = 0;
    std::size_t flat = 0;

    friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

/// x -> normal . x + offset.
struct AffineFunctional
{
    Eigen::VectorXd normal;
    double offset = 0.0;

    double operator()(const Eigen::VectorXd& x) const { return normal.dot(x) + offset; }
};

class ReluNetwork
{
  public:
    /// Validates shapes; throws DimensionMismatch on any inconsistency.
    explicit ReluNetwork(std::vector<AffineLayer> layers);

    const std::vector<int>& architecture() const { return architecture_; }
    const std::vector<AffineLayer>& layers() const { return layers_; }
    const AffineLayer& layer(int t) const { return layers_.at(static_cast<std::size_t>(t - 1)); }

    int input_dim() const { return architecture_.front(); }
    /// m + 1: hidden layers plus the output map.
    int layer_count() const { return static_cast<int>(layers_.size()); }
    int layer_width(int t) const { return architecture_.at(static_cast<std::size_t>(t)); }
    /// N.
    std::size_t node_count() const { return offsets_.back(); }

    /// Flat index of the first node map of layer t; layer_offset(layer_count()+1) == N.
    std::size_t layer_offset(int t) const { return offsets_.at(static_cast<std::size_t>(t - 1)); }

    NodeIndex node(std::size_t flat) const;
    NodeIndex node(int layer, int unit) const;

  private:
    std::vector<AffineLayer> layers_;
    std::vector<int> architecture_;
    std::vector<std::size_t> offsets_;
};

/// Throws DimensionMismatch unless the architecture has at least one hidden
/// layer, positive widths and a scalar output.
void validate_architecture(const std::vector<int>& architecture);

/// Pre-activations of every node map at x, in flat order; the last entry is F(x).
Eigen::VectorXd node_map_values(const ReluNetwork& net, const Eigen::VectorXd& x);

/// F(x).
double network_output(const ReluNetwork& net, const Eigen::VectorXd& x);

/**
 * Exact affine functionals of every node map in layers 1..upto_layer on the
 * region named by the signs of layers 1..upto_layer-1 (entries beyond that
 * prefix are ignored).  Throws NotTopDimensional on a zero in the prefix.
 */
std::vector<AffineFunctional> region_affine_maps(const ReluNetwork& net,
                                                 const SignSequence& region_signs,
                                                 int upto_layer);

/// Standard-normal weights and biases from a seeded mt19937_64, drawn layer by
/// layer, weights row-major then biases.
ReluNetwork random_init(const std::vector<int>& architecture, std::uint64_t seed);

}   // namespace relucx

#endif
