#include "samevo/substrate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

namespace samevo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> spaced(int n) {
    std::vector<double> xs(n);
    if (n == 1) {
        xs[0] = 0.0;
        return xs;
    }
    for (int k = 0; k < n; ++k) xs[k] = -1.0 + 2.0 * k / (n - 1);
    return xs;
}

double query_raw(const CppnGenome& cppn, std::span<const double> inputs, int output) {
    auto out = cppn_forward(cppn, inputs);
    if (output >= static_cast<int>(out.size())) {
        throw StructuralError("substrate query needs a CPPN with weight and bias outputs");
    }
    return out[output];
}

} // namespace

int SubstrateLayout::total_nodes() const {
    int n = 0;
    for (const auto& layer : layers) n += static_cast<int>(layer.size());
    return n;
}

int SubstrateLayout::node_base(int layer) const {
    int base = 0;
    for (int l = 0; l < layer; ++l) base += static_cast<int>(layers[l].size());
    return base;
}

SubstrateLayout make_substrate_layout(const std::vector<int>& hidden_sizes) {
    if (hidden_sizes.empty()) throw ConfigError("substrate needs at least one hidden layer");
    for (int s : hidden_sizes) {
        if (s < 1 || s > 10) throw ConfigError("hidden layer size out of range [1,10]");
    }
    SubstrateLayout layout;
    const int n_layers = static_cast<int>(hidden_sizes.size()) + 2;
    std::vector<int> sizes;
    sizes.push_back(4);
    sizes.insert(sizes.end(), hidden_sizes.begin(), hidden_sizes.end());
    sizes.push_back(1);
    for (int l = 0; l < n_layers; ++l) {
        double y = -1.0 + 2.0 * l / (n_layers - 1);
        std::vector<std::array<double, 2>> layer;
        for (double x : spaced(sizes[l])) layer.push_back({x, y});
        layout.layers.push_back(std::move(layer));
    }
    return layout;
}

int SubstrateNet::count_hidden() const {
    int n = 0;
    for (std::size_t l = 1; l + 1 < layout.layers.size(); ++l) {
        n += static_cast<int>(layout.layers[l].size());
    }
    return n;
}

double substrate_normalize(double raw) {
    double r = std::clamp(raw, -1.0, 1.0);
    double sign = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
    return sign * ((std::fabs(r) - 0.2) / 0.8) * 3.0;
}

std::optional<double> query_weight_2d(const CppnGenome& cppn,
                                      const std::array<double, 2>& src,
                                      const std::array<double, 2>& dst,
                                      double threshold) {
    double inputs[4] = {dst[0], dst[1], src[0], src[1]};
    double raw = query_raw(cppn, inputs, 0);
    if (std::fabs(raw) < threshold) return std::nullopt;
    return substrate_normalize(raw);
}

double query_bias_2d(const CppnGenome& cppn, const std::array<double, 2>& node) {
    double inputs[4] = {node[0], node[1], 0.0, 0.0};
    return substrate_normalize(query_raw(cppn, inputs, 1));
}

std::optional<double> query_weight_3d(const CppnGenome& cppn,
                                      const std::array<double, 3>& src,
                                      const std::array<double, 3>& dst,
                                      double threshold) {
    double inputs[6] = {dst[0], dst[1], dst[2], src[0], src[1], src[2]};
    double raw = query_raw(cppn, inputs, 0);
    if (std::fabs(raw) < threshold) return std::nullopt;
    return substrate_normalize(raw);
}

double query_bias_3d(const CppnGenome& cppn, const std::array<double, 3>& node) {
    double inputs[6] = {node[0], node[1], node[2], 0.0, 0.0, 0.0};
    return substrate_normalize(query_raw(cppn, inputs, 1));
}

SubstrateNet build_substrate(const CppnGenome& cppn, const SubstrateLayout& layout,
                             double threshold) {
    SubstrateNet net;
    net.layout = layout;
    net.biases.resize(layout.total_nodes(), 0.0);
    for (std::size_t l = 0; l < layout.layers.size(); ++l) {
        int base = net.layout.node_base(static_cast<int>(l));
        for (std::size_t k = 0; k < layout.layers[l].size(); ++k) {
            net.biases[base + k] = query_bias_2d(cppn, layout.layers[l][k]);
        }
    }
    for (std::size_t l = 0; l + 1 < layout.layers.size(); ++l) {
        int src_base = net.layout.node_base(static_cast<int>(l));
        int dst_base = net.layout.node_base(static_cast<int>(l + 1));
        for (std::size_t i = 0; i < layout.layers[l].size(); ++i) {
            for (std::size_t j = 0; j < layout.layers[l + 1].size(); ++j) {
                auto w = query_weight_2d(cppn, layout.layers[l][i], layout.layers[l + 1][j],
                                         threshold);
                if (w) {
                    net.connections.push_back({src_base + static_cast<int>(i),
                                               dst_base + static_cast<int>(j), *w});
                }
            }
        }
    }
    return net;
}

double substrate_forward(const SubstrateNet& net, std::span<const double> inputs) {
    const auto& layers = net.layout.layers;
    if (layers.empty()) throw StructuralError("empty substrate layout");
    if (inputs.size() != layers.front().size()) throw StructuralError("substrate input arity mismatch");

    std::vector<double> value(net.layout.total_nodes(), 0.0);
    for (std::size_t i = 0; i < inputs.size(); ++i) value[i] = inputs[i];

    const int last = static_cast<int>(layers.size()) - 1;
    for (int l = 1; l <= last; ++l) {
        int base = net.layout.node_base(l);
        int count = static_cast<int>(layers[l].size());
        std::vector<double> pre(count);
        for (int k = 0; k < count; ++k) pre[k] = net.biases[base + k];
        for (const auto& c : net.connections) {
            if (c.dst >= base && c.dst < base + count) pre[c.dst - base] += c.weight * value[c.src];
        }
        for (int k = 0; k < count; ++k) {
            value[base + k] = l == last ? pre[k] : std::max(0.0, pre[k]);
        }
    }
    double out = value[net.layout.node_base(last)];
    return std::clamp(out, -kTwoPi, kTwoPi);
}

std::string substrate_to_json(const SubstrateNet& net) {
    nlohmann::json j;
    j["layout"] = nlohmann::json::array();
    for (const auto& layer : net.layout.layers) {
        nlohmann::json jl = nlohmann::json::array();
        for (const auto& p : layer) jl.push_back({p[0], p[1]});
        j["layout"].push_back(jl);
    }
    j["connections"] = nlohmann::json::array();
    for (const auto& c : net.connections) {
        j["connections"].push_back({{"src", c.src}, {"dst", c.dst}, {"w", c.weight}});
    }
    j["biases"] = net.biases;
    return j.dump(2);
}

} // namespace samevo
