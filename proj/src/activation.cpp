#include "samevo/activation.hpp"

#include <algorithm>
#include <cmath>

namespace samevo {

namespace {

const std::vector<ActivationId> kFullDictionary = {
    ActivationId::Sine,
    ActivationId::NegativeSine,
    ActivationId::Absolute,
    ActivationId::NegativeAbsolute,
    ActivationId::Squared,
    ActivationId::NegativeSquared,
    ActivationId::SquaredAbsolute,
    ActivationId::NegativeSquaredAbsolute,
    ActivationId::Sigmoid,
    ActivationId::Clamped,
    ActivationId::Cubical,
    ActivationId::Exponential,
    ActivationId::Gaussian,
    ActivationId::Hat,
    ActivationId::Identity,
    ActivationId::Inverse,
    ActivationId::Logarithmic,
    ActivationId::ReLU,
    ActivationId::SeLU,
    ActivationId::LeLU,
    ActivationId::ELU,
    ActivationId::Softplus,
    ActivationId::Tanh,
};

const std::vector<ActivationId> kReducedDictionary = {
    ActivationId::Sine,
    ActivationId::NegativeSine,
    ActivationId::Squared,
    ActivationId::NegativeSquared,
    ActivationId::Sigmoid,
    ActivationId::Cubical,
    ActivationId::Gaussian,
    ActivationId::Logarithmic,
    ActivationId::Tanh,
};

} // namespace

const std::vector<ActivationId>& dictionary_members(Dictionary dict) {
    return dict == Dictionary::FD ? kFullDictionary : kReducedDictionary;
}

bool dictionary_contains(Dictionary dict, ActivationId id) {
    const auto& members = dictionary_members(dict);
    return std::find(members.begin(), members.end(), id) != members.end();
}

const char* activation_name(ActivationId id) {
    switch (id) {
        case ActivationId::Sine: return "sine";
        case ActivationId::NegativeSine: return "negative_sine";
        case ActivationId::Absolute: return "absolute";
        case ActivationId::NegativeAbsolute: return "negative_absolute";
        case ActivationId::Squared: return "squared";
        case ActivationId::NegativeSquared: return "negative_squared";
        case ActivationId::SquaredAbsolute: return "squared_absolute";
        case ActivationId::NegativeSquaredAbsolute: return "negative_squared_absolute";
        case ActivationId::Sigmoid: return "sigmoid";
        case ActivationId::Clamped: return "clamped";
        case ActivationId::Cubical: return "cubical";
        case ActivationId::Exponential: return "exponential";
        case ActivationId::Gaussian: return "gaussian";
        case ActivationId::Hat: return "hat";
        case ActivationId::Identity: return "identity";
        case ActivationId::Inverse: return "inverse";
        case ActivationId::Logarithmic: return "logarithmic";
        case ActivationId::ReLU: return "relu";
        case ActivationId::SeLU: return "selu";
        case ActivationId::LeLU: return "lelu";
        case ActivationId::ELU: return "elu";
        case ActivationId::Softplus: return "softplus";
        case ActivationId::Tanh: return "tanh";
    }
    return "?";
}

ActivationId activation_from_name(const std::string& name) {
    for (ActivationId id : kFullDictionary) {
        if (name == activation_name(id)) return id;
    }
    throw ConfigError("unknown activation function: " + name);
}

double activation_eval(ActivationId id, double x) {
    switch (id) {
        case ActivationId::Sine: return std::sin(x);
        case ActivationId::NegativeSine: return -std::sin(x);
        case ActivationId::Absolute: return std::fabs(x);
        case ActivationId::NegativeAbsolute: return -std::fabs(x);
        case ActivationId::Squared: return x * x;
        case ActivationId::NegativeSquared: return -(x * x);
        case ActivationId::SquaredAbsolute: return std::fabs(x) * std::fabs(x);
        case ActivationId::NegativeSquaredAbsolute: return -(x * x);
        case ActivationId::Sigmoid: return 1.0 / (1.0 + std::exp(-4.9 * x));
        case ActivationId::Clamped: return std::clamp(x, -1.0, 1.0);
        case ActivationId::Cubical: return x * x * x;
        case ActivationId::Exponential: return std::exp(std::clamp(x, -60.0, 60.0));
        case ActivationId::Gaussian: return std::exp(-5.0 * x * x);
        case ActivationId::Hat: return std::max(0.0, 1.0 - std::fabs(x));
        case ActivationId::Identity: return x;
        case ActivationId::Inverse: return std::fabs(x) < 1e-7 ? 0.0 : 1.0 / x;
        case ActivationId::Logarithmic: return std::log(std::max(x, 1e-7));
        case ActivationId::ReLU: return std::max(0.0, x);
        case ActivationId::SeLU: {
            constexpr double lambda = 1.0507;
            constexpr double alpha = 1.6733;
            return x > 0.0 ? lambda * x : lambda * alpha * (std::exp(x) - 1.0);
        }
        case ActivationId::LeLU: return x > 0.0 ? x : 0.005 * x;
        case ActivationId::ELU: return x > 0.0 ? x : std::exp(x) - 1.0;
        case ActivationId::Softplus: {
            if (x > 30.0) return x;
            if (x < -30.0) return 0.0;
            return std::log1p(std::exp(x));
        }
        case ActivationId::Tanh: return std::tanh(x);
    }
    throw ConfigError("unknown activation id");
}

Dictionary dictionary_from_name(const std::string& name) {
    if (name == "fd" || name == "FD") return Dictionary::FD;
    if (name == "rd" || name == "RD") return Dictionary::RD;
    throw ConfigError("unknown dictionary: " + name + " (expected fd or rd)");
}

const char* dictionary_name(Dictionary dict) {
    return dict == Dictionary::FD ? "fd" : "rd";
}

} // namespace samevo
