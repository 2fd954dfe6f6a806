#include "samevo/metrics.hpp"

#include <cmath>
#include <cstddef>

namespace samevo {

double aptitude(const ControllerSource& source, const std::vector<Sam>& sams,
                const MaterialParams& mat, double duration, double dt) {
    if (sams.size() != 9) {
        throw ConfigError("aptitude requires exactly 9 morphologies, got " +
                          std::to_string(sams.size()));
    }
    double sum = 0.0;
    for (const Sam& sam : sams) sum += evaluate(source, sam, mat, duration, dt).fitness;
    return sum / 9.0;
}

ComplexityReport complexity_report(Algorithm algorithm, const CppnGenome& champion) {
    if (algorithm == Algorithm::Neat) {
        return {champion.count_enabled_connections(), champion.count_hidden()};
    }
    if (algorithm == Algorithm::Hyperneat) {
        const SubstrateNet net = build_substrate(champion, make_substrate_layout());
        return {net.count_connections(), net.count_hidden()};
    }
    throw ConfigError("complexity_report: no network to report for this algorithm");
}

std::map<ActivationId, double> activation_histogram(const std::vector<CppnGenome>& champions) {
    if (champions.empty()) throw ConfigError("activation_histogram: no champions");
    std::map<ActivationId, long long> counts;
    long long total = 0;
    for (const CppnGenome& genome : champions) {
        for (const NodeGene& node : genome.nodes) {
            if (node.kind == NodeKind::Input) continue;
            ++counts[node.activation];
            ++total;
        }
    }
    std::map<ActivationId, double> shares;
    for (const auto& [id, count] : counts) shares[id] = 100.0 * count / total;
    return shares;
}

CiCurve ci95(const std::vector<std::vector<double>>& series) {
    const std::size_t n = series.size();
    if (n < 2) throw ConfigError("ci95 needs at least two runs");
    const std::size_t len = series.front().size();
    for (const auto& run : series) {
        if (run.size() != len) throw ConfigError("ci95: runs differ in length");
    }
    CiCurve curve;
    curve.mean.resize(len);
    curve.half_width.resize(len);
    for (std::size_t g = 0; g < len; ++g) {
        double sum = 0.0;
        for (const auto& run : series) sum += run[g];
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (const auto& run : series) {
            const double d = run[g] - mean;
            ss += d * d;
        }
        const double s = std::sqrt(ss / static_cast<double>(n - 1));
        curve.mean[g] = mean;
        curve.half_width[g] = 1.96 * s / std::sqrt(static_cast<double>(n));
    }
    return curve;
}

} // namespace samevo
