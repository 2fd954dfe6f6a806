#include "samevo/genome.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include <json.hpp>

namespace samevo {

namespace {

const char* kind_to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Input: return "input";
        case NodeKind::Output: return "output";
        case NodeKind::Hidden: return "hidden";
    }
    return "hidden";
}

NodeKind kind_from_string(const std::string& s) {
    if (s == "input") return NodeKind::Input;
    if (s == "output") return NodeKind::Output;
    if (s == "hidden") return NodeKind::Hidden;
    throw ConfigError("unknown node kind: " + s);
}

std::vector<ConnectionGene> sorted_by_innovation(const std::vector<ConnectionGene>& genes) {
    std::vector<ConnectionGene> out = genes;
    std::sort(out.begin(), out.end(),
              [](const ConnectionGene& a, const ConnectionGene& b) { return a.innovation < b.innovation; });
    return out;
}

// Path dst -> ... -> src over all genes, enabled or not. The genome keeps the
// full gene digraph acyclic so that re-enabling (toggle, crossover) can never
// introduce a cycle.
bool would_close_cycle(const CppnGenome& g, int src, int dst) {
    if (src == dst) return true;
    std::vector<int> stack{dst};
    std::set<int> seen{dst};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (u == src) return true;
        for (const auto& c : g.connections) {
            if (c.src == u && seen.insert(c.dst).second) stack.push_back(c.dst);
        }
    }
    return false;
}

void try_add_connection(CppnGenome& g, InnovationRegistry& registry, Rng& rng) {
    std::vector<int> src_pool;
    std::vector<int> dst_pool;
    for (const auto& n : g.nodes) {
        if (n.kind != NodeKind::Output) src_pool.push_back(n.id);
        if (n.kind != NodeKind::Input) dst_pool.push_back(n.id);
    }
    std::sort(src_pool.begin(), src_pool.end());
    std::sort(dst_pool.begin(), dst_pool.end());
    if (src_pool.empty() || dst_pool.empty()) return;

    for (int attempt = 0; attempt < 20; ++attempt) {
        int src = src_pool[rng.uniform_int(src_pool.size())];
        int dst = dst_pool[rng.uniform_int(dst_pool.size())];
        if (src == dst) continue;
        bool handled = false;
        for (auto& c : g.connections) {
            if (c.src == src && c.dst == dst) {
                if (!c.enabled) {
                    c.enabled = true;
                    return;
                }
                handled = true;
                break;
            }
        }
        if (handled) continue;
        if (would_close_cycle(g, src, dst)) continue;
        g.connections.push_back({registry.connection_innovation(src, dst), src, dst,
                                 rng.uniform(-1.0, 1.0), true});
        return;
    }
}

void try_delete_connection(CppnGenome& g, Rng& rng) {
    if (g.connections.empty()) return;
    int idx = rng.uniform_int(g.connections.size());
    g.connections.erase(g.connections.begin() + idx);
}

void try_toggle_connection(CppnGenome& g, Rng& rng) {
    if (g.connections.empty()) return;
    int idx = rng.uniform_int(g.connections.size());
    g.connections[idx].enabled = !g.connections[idx].enabled;
}

void try_add_node(CppnGenome& g, const MutationParams& params, InnovationRegistry& registry, Rng& rng) {
    std::vector<int> enabled_idx;
    for (int i = 0; i < static_cast<int>(g.connections.size()); ++i) {
        if (g.connections[i].enabled) enabled_idx.push_back(i);
    }
    if (enabled_idx.empty()) return;
    int ci = enabled_idx[rng.uniform_int(enabled_idx.size())];

    auto rec = registry.node_split(g.connections[ci].innovation);
    // A re-enabled connection can be picked for a second split; the memoized
    // node already exists then and pushing it again would duplicate genes.
    for (const auto& n : g.nodes) {
        if (n.id == rec.node_id) return;
    }
    const auto& dict = dictionary_members(params.dictionary);
    ActivationId act = dict[rng.uniform_int(dict.size())];

    int src = g.connections[ci].src;
    int dst = g.connections[ci].dst;
    double w = g.connections[ci].weight;
    g.connections[ci].enabled = false;
    g.nodes.push_back({rec.node_id, NodeKind::Hidden, act, 0.0});
    g.connections.push_back({rec.innovation_in, src, rec.node_id, 1.0, true});
    g.connections.push_back({rec.innovation_out, rec.node_id, dst, w, true});
}

void try_delete_node(CppnGenome& g, Rng& rng) {
    std::vector<int> hidden;
    for (const auto& n : g.nodes) {
        if (n.kind == NodeKind::Hidden) hidden.push_back(n.id);
    }
    if (hidden.empty()) return;
    std::sort(hidden.begin(), hidden.end());
    int id = hidden[rng.uniform_int(hidden.size())];
    std::erase_if(g.nodes, [id](const NodeGene& n) { return n.id == id; });
    std::erase_if(g.connections, [id](const ConnectionGene& c) { return c.src == id || c.dst == id; });
}

void try_mutate_activation(CppnGenome& g, const MutationParams& params, Rng& rng) {
    std::vector<int> pool;
    for (const auto& n : g.nodes) {
        if (n.kind != NodeKind::Input) pool.push_back(n.id);
    }
    if (pool.empty()) return;
    std::sort(pool.begin(), pool.end());
    int id = pool[rng.uniform_int(pool.size())];
    const auto& dict = dictionary_members(params.dictionary);
    ActivationId act = dict[rng.uniform_int(dict.size())];
    for (auto& n : g.nodes) {
        if (n.id == id) n.activation = act;
    }
}

// Per-value scheme: full resample wins over perturbation; both draws are
// taken from the same stream in a fixed order.
double perturb_value(double v, const MutationParams& params, Rng& rng) {
    if (rng.bernoulli(params.weight_resample_prob)) {
        return rng.uniform(-params.weight_clamp, params.weight_clamp);
    }
    if (rng.bernoulli(params.weight_perturb_prob)) {
        double next = v + rng.normal(0.0, params.weight_perturb_sd);
        return std::clamp(next, -params.weight_clamp, params.weight_clamp);
    }
    return v;
}

} // namespace

int CppnGenome::count_inputs() const {
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(),
                                          [](const NodeGene& n) { return n.kind == NodeKind::Input; }));
}

int CppnGenome::count_outputs() const {
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(),
                                          [](const NodeGene& n) { return n.kind == NodeKind::Output; }));
}

int CppnGenome::count_hidden() const {
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(),
                                          [](const NodeGene& n) { return n.kind == NodeKind::Hidden; }));
}

int CppnGenome::count_enabled_connections() const {
    return static_cast<int>(std::count_if(connections.begin(), connections.end(),
                                          [](const ConnectionGene& c) { return c.enabled; }));
}

const NodeGene* CppnGenome::find_node(int id) const {
    for (const auto& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

const ConnectionGene* CppnGenome::find_connection(int src, int dst) const {
    for (const auto& c : connections) {
        if (c.src == src && c.dst == dst) return &c;
    }
    return nullptr;
}

int CppnGenome::max_node_id() const {
    int best = -1;
    for (const auto& n : nodes) best = std::max(best, n.id);
    return best;
}

bool CppnGenome::structurally_equal(const CppnGenome& other) const {
    auto na = nodes;
    auto nb = other.nodes;
    auto by_id = [](const NodeGene& a, const NodeGene& b) { return a.id < b.id; };
    std::sort(na.begin(), na.end(), by_id);
    std::sort(nb.begin(), nb.end(), by_id);
    return na == nb && sorted_by_innovation(connections) == sorted_by_innovation(other.connections);
}

int InnovationRegistry::connection_innovation(int src, int dst) {
    auto key = std::make_pair(src, dst);
    auto it = connection_memo_.find(key);
    if (it != connection_memo_.end()) return it->second;
    int innov = next_innovation_++;
    connection_memo_.emplace(key, innov);
    return innov;
}

InnovationRegistry::SplitRecord InnovationRegistry::node_split(int connection_innovation) {
    auto it = split_memo_.find(connection_innovation);
    if (it != split_memo_.end()) return it->second;
    SplitRecord rec{next_node_id_++, next_innovation_++, next_innovation_++};
    split_memo_.emplace(connection_innovation, rec);
    return rec;
}

int InnovationRegistry::reserve_node_id() { return next_node_id_++; }

void InnovationRegistry::bump_node_floor(int min_next_id) {
    next_node_id_ = std::max(next_node_id_, min_next_id);
}

void InnovationRegistry::begin_generation() {
    connection_memo_.clear();
    split_memo_.clear();
}

CppnGenome make_minimal_genome(int n_inputs, int n_outputs, Dictionary dict,
                               InnovationRegistry& registry, Rng& rng) {
    if (n_inputs < 1 || n_outputs < 1) throw ConfigError("genome needs at least one input and one output");
    registry.bump_node_floor(n_inputs + n_outputs);

    CppnGenome g;
    const auto& members = dictionary_members(dict);
    for (int i = 0; i < n_inputs; ++i) {
        g.nodes.push_back({i, NodeKind::Input, ActivationId::Identity, 0.0});
    }
    for (int o = 0; o < n_outputs; ++o) {
        ActivationId act = members[rng.uniform_int(members.size())];
        g.nodes.push_back({n_inputs + o, NodeKind::Output, act, 0.0});
    }
    for (int o = 0; o < n_outputs; ++o) {
        for (int i = 0; i < n_inputs; ++i) {
            int dst = n_inputs + o;
            g.connections.push_back({registry.connection_innovation(i, dst), i, dst,
                                     rng.uniform(-1.0, 1.0), true});
        }
    }
    return g;
}

std::vector<double> cppn_forward(const CppnGenome& genome, std::span<const double> inputs) {
    const int n = static_cast<int>(genome.nodes.size());
    std::vector<const NodeGene*> by_id(n);
    for (int i = 0; i < n; ++i) by_id[i] = &genome.nodes[i];
    std::sort(by_id.begin(), by_id.end(),
              [](const NodeGene* a, const NodeGene* b) { return a->id < b->id; });

    auto index_of = [&](int id) {
        auto it = std::lower_bound(by_id.begin(), by_id.end(), id,
                                   [](const NodeGene* n_, int v) { return n_->id < v; });
        if (it == by_id.end() || (*it)->id != id) throw StructuralError("connection references missing node");
        return static_cast<int>(it - by_id.begin());
    };

    std::vector<int> input_rank(n, -1);
    int n_inputs = 0;
    for (int i = 0; i < n; ++i) {
        if (by_id[i]->kind == NodeKind::Input) input_rank[i] = n_inputs++;
    }
    if (static_cast<int>(inputs.size()) != n_inputs) throw StructuralError("input arity mismatch");

    std::vector<double> sum(n, 0.0);
    std::vector<double> value(n, 0.0);
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<std::pair<int, double>>> out(n);
    for (const auto& c : genome.connections) {
        if (!c.enabled) continue;
        int si = index_of(c.src);
        int di = index_of(c.dst);
        out[si].push_back({di, c.weight});
        ++indeg[di];
    }

    std::set<int> ready;
    for (int i = 0; i < n; ++i) {
        if (indeg[i] == 0) ready.insert(i);
    }
    int processed = 0;
    while (!ready.empty()) {
        int i = *ready.begin();
        ready.erase(ready.begin());
        double v = by_id[i]->kind == NodeKind::Input
                       ? inputs[input_rank[i]]
                       : activation_eval(by_id[i]->activation, by_id[i]->bias + sum[i]);
        value[i] = v;
        ++processed;
        for (auto [di, w] : out[i]) {
            sum[di] += w * v;
            if (--indeg[di] == 0) ready.insert(di);
        }
    }
    if (processed != n) throw StructuralError("cycle among enabled connections");

    std::vector<double> outputs;
    for (int i = 0; i < n; ++i) {
        if (by_id[i]->kind == NodeKind::Output) outputs.push_back(value[i]);
    }
    return outputs;
}

double delta_formula(int excess, int disjoint, double n, double mean_weight_diff,
                     double c1, double c2, double c3) {
    return c1 * excess / n + c2 * disjoint / n + c3 * mean_weight_diff;
}

double compatibility_distance(const CppnGenome& a, const CppnGenome& b,
                              double c1, double c2, double c3) {
    auto ga = sorted_by_innovation(a.connections);
    auto gb = sorted_by_innovation(b.connections);
    int excess = 0;
    int disjoint = 0;
    int matches = 0;
    double weight_diff = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ga.size() && j < gb.size()) {
        if (ga[i].innovation == gb[j].innovation) {
            weight_diff += std::fabs(ga[i].weight - gb[j].weight);
            ++matches;
            ++i;
            ++j;
        } else if (ga[i].innovation < gb[j].innovation) {
            ++disjoint;
            ++i;
        } else {
            ++disjoint;
            ++j;
        }
    }
    excess += static_cast<int>(ga.size() - i) + static_cast<int>(gb.size() - j);

    double n = static_cast<double>(std::max(ga.size(), gb.size()));
    if (ga.size() < 20 && gb.size() < 20) n = 1.0;
    double wbar = matches > 0 ? weight_diff / matches : 0.0;
    return delta_formula(excess, disjoint, n, wbar, c1, c2, c3);
}

CppnGenome crossover(const CppnGenome& a, const CppnGenome& b, Rng& rng) {
    if (!a.fitness || !b.fitness) throw StructuralError("crossover requires evaluated parents");

    const CppnGenome* fitter = nullptr;
    const CppnGenome* other = nullptr;
    if (*a.fitness > *b.fitness) {
        fitter = &a;
        other = &b;
    } else if (*a.fitness < *b.fitness) {
        fitter = &b;
        other = &a;
    } else if (rng.bernoulli(0.5)) {
        fitter = &a;
        other = &b;
    } else {
        fitter = &b;
        other = &a;
    }

    std::unordered_map<int, const ConnectionGene*> other_genes;
    for (const auto& c : other->connections) other_genes.emplace(c.innovation, &c);

    // The child copies the fitter parent's structure; matching genes flip a
    // coin for which parent supplies weight and enabled flag. Same innovation
    // always means the same (src, dst), so structure is unaffected.
    CppnGenome child;
    child.nodes = fitter->nodes;
    child.connections.reserve(fitter->connections.size());
    for (const auto& c : fitter->connections) {
        auto it = other_genes.find(c.innovation);
        if (it != other_genes.end() && rng.bernoulli(0.5)) {
            child.connections.push_back(*it->second);
        } else {
            child.connections.push_back(c);
        }
    }
    return child;
}

CppnGenome mutate(const CppnGenome& genome, const MutationParams& params,
                  InnovationRegistry& registry, Rng& rng) {
    CppnGenome g = genome;
    g.fitness.reset();

    if (rng.bernoulli(params.add_connection_rate)) try_add_connection(g, registry, rng);
    if (rng.bernoulli(params.delete_connection_rate)) try_delete_connection(g, rng);
    if (rng.bernoulli(params.toggle_connection_rate)) try_toggle_connection(g, rng);
    if (rng.bernoulli(params.add_node_rate)) try_add_node(g, params, registry, rng);
    if (rng.bernoulli(params.delete_node_rate)) try_delete_node(g, rng);
    if (rng.bernoulli(params.activation_mutate_rate)) try_mutate_activation(g, params, rng);

    for (auto& c : g.connections) c.weight = perturb_value(c.weight, params, rng);
    for (auto& n : g.nodes) {
        if (n.kind != NodeKind::Input) n.bias = perturb_value(n.bias, params, rng);
    }
    return g;
}

std::string genome_to_json(const CppnGenome& genome) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : genome.nodes) {
        j["nodes"].push_back({{"id", n.id},
                              {"kind", kind_to_string(n.kind)},
                              {"activation", activation_name(n.activation)},
                              {"bias", n.bias}});
    }
    j["connections"] = nlohmann::json::array();
    for (const auto& c : genome.connections) {
        j["connections"].push_back({{"innovation", c.innovation},
                                    {"src", c.src},
                                    {"dst", c.dst},
                                    {"weight", c.weight},
                                    {"enabled", c.enabled}});
    }
    return j.dump(2);
}

CppnGenome genome_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("genome JSON parse error: ") + e.what());
    }
    CppnGenome g;
    try {
        for (const auto& jn : j.at("nodes")) {
            g.nodes.push_back({jn.at("id").get<int>(),
                               kind_from_string(jn.at("kind").get<std::string>()),
                               activation_from_name(jn.at("activation").get<std::string>()),
                               jn.at("bias").get<double>()});
        }
        for (const auto& jc : j.at("connections")) {
            g.connections.push_back({jc.at("innovation").get<int>(),
                                     jc.at("src").get<int>(),
                                     jc.at("dst").get<int>(),
                                     jc.at("weight").get<double>(),
                                     jc.at("enabled").get<bool>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("genome JSON schema error: ") + e.what());
    }
    return g;
}

void check_genome_invariants(const CppnGenome& genome) {
    std::set<int> node_ids;
    for (const auto& n : genome.nodes) {
        if (!node_ids.insert(n.id).second) throw StructuralError("duplicate node id");
    }
    std::set<int> innovations;
    std::set<std::pair<int, int>> pairs;
    for (const auto& c : genome.connections) {
        if (!node_ids.count(c.src) || !node_ids.count(c.dst)) {
            throw StructuralError("connection references missing node");
        }
        if (!innovations.insert(c.innovation).second) throw StructuralError("duplicate innovation");
        if (!pairs.insert({c.src, c.dst}).second) throw StructuralError("duplicate (src,dst) pair");
        const NodeGene* src = genome.find_node(c.src);
        const NodeGene* dst = genome.find_node(c.dst);
        if (src->kind == NodeKind::Output) throw StructuralError("connection out of an output node");
        if (dst->kind == NodeKind::Input) throw StructuralError("connection into an input node");
    }

    // Kahn over all genes; the full gene digraph must be acyclic.
    std::map<int, int> indeg;
    for (int id : node_ids) indeg[id] = 0;
    for (const auto& c : genome.connections) ++indeg[c.dst];
    std::set<int> ready;
    for (auto& [id, d] : indeg) {
        if (d == 0) ready.insert(id);
    }
    std::size_t processed = 0;
    while (!ready.empty()) {
        int u = *ready.begin();
        ready.erase(ready.begin());
        ++processed;
        for (const auto& c : genome.connections) {
            if (c.src == u && --indeg[c.dst] == 0) ready.insert(c.dst);
        }
    }
    if (processed != node_ids.size()) throw StructuralError("cycle in gene digraph");
}

} // namespace samevo
