#ifndef RELUCX_TEST_SUPPORT_HPP
#define RELUCX_TEST_SUPPORT_HPP

#include <vector>

#include "relucx/model.hpp"

namespace test_support {

/// Identity first layer, output relu(x) + relu(y) - 1.
inline relucx::ReluNetwork hand_network()
{
    std::vector<relucx::AffineLayer> layers(2);
    layers[0].weights = Eigen::MatrixXd::Identity(2, 2);
    layers[0].bias = Eigen::VectorXd::Zero(2);
    layers[1].weights = Eigen::MatrixXd::Ones(1, 2);
    layers[1].bias = Eigen::VectorXd::Constant(1, -1.0);
    return relucx::ReluNetwork(layers);
}

/// Affine layers given row by row.
inline relucx::ReluNetwork make_network(const std::vector<std::vector<std::vector<double>>>& weights,
                                        const std::vector<std::vector<double>>& biases)
{
    std::vector<relucx::AffineLayer> layers;
    for (std::size_t t = 0; t < weights.size(); ++t) {
        relucx::AffineLayer l;
        const auto rows = static_cast<Eigen::Index>(weights[t].size());
        const auto cols = static_cast<Eigen::Index>(weights[t][0].size());
        l.weights.resize(rows, cols);
        l.bias.resize(rows);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c)
                l.weights(r, c) = weights[t][static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            l.bias(r) = biases[t][static_cast<std::size_t>(r)];
        }
        layers.push_back(std::move(l));
    }
    return relucx::ReluNetwork(layers);
}

}   // namespace test_support

#endif
