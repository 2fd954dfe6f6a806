#pragma once

#include <map>
#include <vector>

#include "samevo/controller.hpp"

namespace samevo {

// Mean yz-plane displacement of one controller over exactly nine
// morphologies; any other count is an arity error. Divergent evaluations
// contribute 0.
double aptitude(const ControllerSource& source, const std::vector<Sam>& sams,
                const MaterialParams& mat, double duration, double dt = 0.0);

struct ComplexityReport {
    int connections = 0;
    int hidden_nodes = 0;
};

// NEAT counts the champion CPPN itself (enabled connections, hidden nodes);
// HyperNEAT counts the substrate that the CPPN produces.
ComplexityReport complexity_report(Algorithm algorithm, const CppnGenome& champion);

// Usage share, in percent, of each activation over the hidden and output
// nodes of the champions. Percentages sum to 100.
std::map<ActivationId, double> activation_histogram(const std::vector<CppnGenome>& champions);

struct CiCurve {
    std::vector<double> mean;
    std::vector<double> half_width;
};

// Pointwise mean and 1.96 * s / sqrt(n) over equally long per-run curves,
// with s the sample standard deviation. Needs at least two runs.
CiCurve ci95(const std::vector<std::vector<double>>& series);

} // namespace samevo
