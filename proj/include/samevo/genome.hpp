#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "samevo/activation.hpp"
#include "samevo/rng.hpp"

namespace samevo {

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class NodeKind : std::uint8_t { Input, Output, Hidden };

struct NodeGene {
    int id = 0;
    NodeKind kind = NodeKind::Hidden;
    // Ignored for input nodes (pass-through, no bias).
    ActivationId activation = ActivationId::Identity;
    double bias = 0.0;

    bool operator==(const NodeGene&) const = default;
};

struct ConnectionGene {
    int innovation = 0;
    int src = 0;
    int dst = 0;
    double weight = 0.0;
    bool enabled = true;

    bool operator==(const ConnectionGene&) const = default;
};

// CPPN genotype. Immutable by convention once constructed: operators return
// new genomes. The enabled-connection digraph is always acyclic.
struct CppnGenome {
    std::vector<NodeGene> nodes;
    std::vector<ConnectionGene> connections;
    std::optional<double> fitness;

    int count_inputs() const;
    int count_outputs() const;
    int count_hidden() const;
    int count_enabled_connections() const;

    const NodeGene* find_node(int id) const;
    const ConnectionGene* find_connection(int src, int dst) const;
    int max_node_id() const;

    bool structurally_equal(const CppnGenome& other) const;
};

// Assigns innovation numbers and hidden-node ids. Identical structural
// mutations within one generation get identical numbers via the memos; the
// generation loop clears the memos (begin_generation) and owns all access.
class InnovationRegistry {
public:
    explicit InnovationRegistry(int first_innovation = 0, int first_node_id = 0)
        : next_innovation_(first_innovation), next_node_id_(first_node_id) {}

    int connection_innovation(int src, int dst);

    struct SplitRecord {
        int node_id;
        int innovation_in;   // src -> new node
        int innovation_out;  // new node -> dst
    };
    SplitRecord node_split(int connection_innovation);

    int reserve_node_id();

    // Raises the node-id counter so freshly split nodes never collide with
    // ids already used by initial genomes.
    void bump_node_floor(int min_next_id);

    void begin_generation();

    int peek_innovation() const { return next_innovation_; }

private:
    int next_innovation_;
    int next_node_id_;
    std::map<std::pair<int, int>, int> connection_memo_;
    std::map<int, SplitRecord> split_memo_;
};

// Mutation rates and distance coefficients (see EvolutionParams for the
// population-level knobs that wrap these).
struct MutationParams {
    Dictionary dictionary = Dictionary::FD;
    double add_connection_rate = 0.2;
    double delete_connection_rate = 0.1;
    double toggle_connection_rate = 0.5;
    double add_node_rate = 0.2;
    double delete_node_rate = 0.1;
    double activation_mutate_rate = 0.4;
    // Per-gene weight/bias scheme: resample wins over perturb when both fire.
    double weight_perturb_prob = 0.8;
    double weight_perturb_sd = 0.5;
    double weight_resample_prob = 0.1;
    double weight_clamp = 8.0;
};

// Minimal genome: no hidden nodes, inputs fully connected to outputs.
// Input ids are 0..n_inputs-1, output ids follow.
CppnGenome make_minimal_genome(int n_inputs, int n_outputs, Dictionary dict,
                               InnovationRegistry& registry, Rng& rng);

// Deterministic feed-forward evaluation. Throws StructuralError on a cycle.
std::vector<double> cppn_forward(const CppnGenome& genome, std::span<const double> inputs);

// Eq-style distance: c1*E/N + c2*D/N + c3*Wbar. Exposed separately so the
// formula can be checked by direct substitution.
double delta_formula(int excess, int disjoint, double n, double mean_weight_diff,
                     double c1, double c2, double c3);

// N = larger connection-gene count, except N = 1 when both genomes have
// fewer than 20 genes. Wbar = 0 when no innovations match.
double compatibility_distance(const CppnGenome& a, const CppnGenome& b,
                              double c1, double c2, double c3);

// Matching genes from either parent at random; disjoint/excess from the
// fitter parent (random parent on a fitness tie). Requires fitness on both.
CppnGenome crossover(const CppnGenome& a, const CppnGenome& b, Rng& rng);

CppnGenome mutate(const CppnGenome& genome, const MutationParams& params,
                  InnovationRegistry& registry, Rng& rng);

// Lossless (shortest-round-trip doubles) JSON serialization.
std::string genome_to_json(const CppnGenome& genome);
CppnGenome genome_from_json(const std::string& text);

// Internal invariant check used by tests: acyclic, unique node ids, unique
// innovations, unique (src,dst) pairs. Throws StructuralError on violation.
void check_genome_invariants(const CppnGenome& genome);

} // namespace samevo
