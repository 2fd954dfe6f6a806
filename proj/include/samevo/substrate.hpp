#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "samevo/genome.hpp"

namespace samevo {

// Feed-forward layered substrate in [-1,1]^2. Layer 0 is the input layer,
// the last layer is the output layer; connections only join adjacent layers.
struct SubstrateLayout {
    std::vector<std::vector<std::array<double, 2>>> layers;

    int total_nodes() const;
    int node_base(int layer) const;  // global index of the layer's first node
};

// 4 inputs, one hidden layer per entry of hidden_sizes, 1 output. Layers sit
// on evenly spaced horizontal lines from y=-1 to y=1; nodes are evenly spaced
// on x in [-1,1] (a single node sits at x=0).
SubstrateLayout make_substrate_layout(const std::vector<int>& hidden_sizes = {7, 6});

struct SubstrateConnection {
    int src = 0;  // global node index
    int dst = 0;
    double weight = 0.0;
};

struct SubstrateNet {
    SubstrateLayout layout;
    std::vector<SubstrateConnection> connections;
    std::vector<double> biases;  // per global node index, input biases unused

    int count_connections() const { return static_cast<int>(connections.size()); }
    int count_hidden() const;
};

// Affine map from raw CPPN output (clamped to [-1,1]) onto [-3,3]:
// sign(r) * ((|r| - 0.2) / 0.8) * 3.
double substrate_normalize(double raw);

// CPPN inputs are (x_dst, y_dst, x_src, y_src); output 0 is the weight.
// Absent when |raw| < threshold, otherwise normalized.
std::optional<double> query_weight_2d(const CppnGenome& cppn,
                                      const std::array<double, 2>& src,
                                      const std::array<double, 2>& dst,
                                      double threshold = 0.2);

// CPPN inputs are (x, y, 0, 0); output 1 is the bias. No thresholding.
double query_bias_2d(const CppnGenome& cppn, const std::array<double, 2>& node);

// 6-input analogues: (x_dst, y_dst, z_dst, x_src, y_src, z_src); the bias
// query zero-pads the source coordinates.
std::optional<double> query_weight_3d(const CppnGenome& cppn,
                                      const std::array<double, 3>& src,
                                      const std::array<double, 3>& dst,
                                      double threshold = 0.2);
double query_bias_3d(const CppnGenome& cppn, const std::array<double, 3>& node);

// Queries every adjacent-layer node pair and every bias once, layer-major,
// index-minor. Deterministic for a fixed CPPN and layout.
SubstrateNet build_substrate(const CppnGenome& cppn, const SubstrateLayout& layout,
                             double threshold = 0.2);

// Hidden neurons are ReLU; the output neuron is identity clamped to
// [-2pi, 2pi]. Inputs must already be normalized to the substrate's domain.
double substrate_forward(const SubstrateNet& net, std::span<const double> inputs);

std::string substrate_to_json(const SubstrateNet& net);

} // namespace samevo
