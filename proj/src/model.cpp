#include "relucx/model.hpp"

#include <random>
#include <string>

#include "relucx/errors.hpp"

namespace relucx {

void validate_architecture(const std::vector<int>& architecture)
{
    if (architecture.size() < 3)
        throw DimensionMismatch("architecture needs an input width, at least one hidden layer and an output");
    for (int n : architecture)
        if (n <= 0)
            throw DimensionMismatch("architecture widths must be positive");
    if (architecture.back() != 1)
        throw DimensionMismatch("network output must be scalar");
}

ReluNetwork::ReluNetwork(std::vector<AffineLayer> layers) : layers_(std::move(layers))
{
    if (layers_.empty())
        throw DimensionMismatch("network has no layers");
    architecture_.push_back(static_cast<int>(layers_.front().weights.cols()));
    for (std::size_t t = 0; t < layers_.size(); ++t) {
        const auto& l = layers_[t];
        if (l.weights.cols() != architecture_.back())
            throw DimensionMismatch("layer " + std::to_string(t + 1) + " expects "
                                    + std::to_string(l.weights.cols()) + " inputs, previous layer has "
                                    + std::to_string(architecture_.back()));
        if (l.bias.size() != l.weights.rows())
            throw DimensionMismatch("layer " + std::to_string(t + 1) + " bias length "
                                    + std::to_string(l.bias.size()) + " != "
                                    + std::to_string(l.weights.rows()));
        architecture_.push_back(static_cast<int>(l.weights.rows()));
    }
    validate_architecture(architecture_);

    offsets_.push_back(0);
    for (std::size_t t = 1; t < architecture_.size(); ++t)
        offsets_.push_back(offsets_.back() + static_cast<std::size_t>(architecture_[t]));
}

NodeIndex ReluNetwork::node(std::size_t flat) const
{
    if (flat >= node_count())
        throw std::out_of_range("node index " + std::to_string(flat));
    int t = 1;
    while (offsets_[static_cast<std::size_t>(t)] <= flat)
        ++t;
    return NodeIndex{t, static_cast<int>(flat - offsets_[static_cast<std::size_t>(t - 1)]) + 1, flat};
}

NodeIndex ReluNetwork::node(int layer, int unit) const
{
    if (layer < 1 || layer > layer_count() || unit < 1 || unit > layer_width(layer))
        throw std::out_of_range("node (" + std::to_string(layer) + "," + std::to_string(unit) + ")");
    return NodeIndex{layer, unit, layer_offset(layer) + static_cast<std::size_t>(unit - 1)};
}

Eigen::VectorXd node_map_values(const ReluNetwork& net, const Eigen::VectorXd& x)
{
    if (x.size() != net.input_dim())
        throw DimensionMismatch("point has dimension " + std::to_string(x.size()) + ", network input is "
                                + std::to_string(net.input_dim()));
    Eigen::VectorXd out(static_cast<Eigen::Index>(net.node_count()));
    Eigen::VectorXd h = x;
    for (int t = 1; t <= net.layer_count(); ++t) {
        const auto& l = net.layer(t);
        Eigen::VectorXd pre = l.weights * h + l.bias;
        out.segment(static_cast<Eigen::Index>(net.layer_offset(t)), pre.size()) = pre;
        h = pre.cwiseMax(0.0);
    }
    return out;
}

double network_output(const ReluNetwork& net, const Eigen::VectorXd& x)
{
    return node_map_values(net, x)(static_cast<Eigen::Index>(net.node_count() - 1));
}

std::vector<AffineFunctional> region_affine_maps(const ReluNetwork& net,
                                                 const SignSequence& region_signs,
                                                 int upto_layer)
{
    if (upto_layer < 1 || upto_layer > net.layer_count())
        throw std::out_of_range("upto_layer " + std::to_string(upto_layer));
    const std::size_t needed = net.layer_offset(upto_layer);
    if (region_signs.size() < needed)
        throw DimensionMismatch("region prefix has " + std::to_string(region_signs.size())
                                + " entries, layers below " + std::to_string(upto_layer) + " need "
                                + std::to_string(needed));

    const int n0 = net.input_dim();
    // Hidden representation on the region as an affine map of the input.
    Eigen::MatrixXd lin = Eigen::MatrixXd::Identity(n0, n0);
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(n0);

    std::vector<AffineFunctional> out;
    out.reserve(net.layer_offset(upto_layer + 1));
    for (int t = 1; t <= upto_layer; ++t) {
        const auto& l = net.layer(t);
        Eigen::MatrixXd pre_lin = l.weights * lin;
        Eigen::VectorXd pre_shift = l.weights * shift + l.bias;
        for (Eigen::Index r = 0; r < pre_lin.rows(); ++r)
            out.push_back(AffineFunctional{pre_lin.row(r).transpose(), pre_shift(r)});
        if (t == upto_layer)
            break;
        const std::size_t base = net.layer_offset(t);
        for (Eigen::Index r = 0; r < pre_lin.rows(); ++r) {
            const int s = region_signs[base + static_cast<std::size_t>(r)];
            if (s == 0)
                throw NotTopDimensional("zero sign at node " + std::to_string(base + static_cast<std::size_t>(r))
                                        + " in region prefix " + region_signs.to_string());
            if (s < 0) {
                pre_lin.row(r).setZero();
                pre_shift(r) = 0.0;
            }
        }
        lin = std::move(pre_lin);
        shift = std::move(pre_shift);
    }
    return out;
}

ReluNetwork random_init(const std::vector<int>& architecture, std::uint64_t seed)
{
    validate_architecture(architecture);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<AffineLayer> layers;
    for (std::size_t t = 1; t < architecture.size(); ++t) {
        AffineLayer l{Eigen::MatrixXd(architecture[t], architecture[t - 1]), Eigen::VectorXd(architecture[t])};
        for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weights.cols(); ++c)
                l.weights(r, c) = normal(rng);
        for (Eigen::Index r = 0; r < l.bias.size(); ++r)
            l.bias(r) = normal(rng);
        layers.push_back(std::move(l));
    }
    return ReluNetwork(std::move(layers));
}

}   // namespace relucx
