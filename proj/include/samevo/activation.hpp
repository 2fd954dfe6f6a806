#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace samevo {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Activation functions available to CPPN nodes. The full dictionary has 23
// entries; the reduced dictionary is a 9-entry subset. Squared and
// SquaredAbs are numerically identical but kept as distinct ids so usage
// histograms report them separately.
enum class ActivationId : std::uint8_t {
    Sine,
    NegativeSine,
    Absolute,
    NegativeAbsolute,
    Squared,
    NegativeSquared,
    SquaredAbsolute,
    NegativeSquaredAbsolute,
    Sigmoid,
    Clamped,
    Cubical,
    Exponential,
    Gaussian,
    Hat,
    Identity,
    Inverse,
    Logarithmic,
    ReLU,
    SeLU,
    LeLU,
    ELU,
    Softplus,
    Tanh,
};

enum class Dictionary { FD, RD };

// Members of a dictionary, in a fixed order (used for seeded sampling).
const std::vector<ActivationId>& dictionary_members(Dictionary dict);

bool dictionary_contains(Dictionary dict, ActivationId id);

const char* activation_name(ActivationId id);

// Name -> id; throws ConfigError for unknown names.
ActivationId activation_from_name(const std::string& name);

// Total on all finite inputs: every function is guarded so it returns a
// finite value for x in [-1e6, 1e6].
double activation_eval(ActivationId id, double x);

Dictionary dictionary_from_name(const std::string& name);
const char* dictionary_name(Dictionary dict);

} // namespace samevo
