#pragma once

#include <cstdint>
#include <functional>

#include "proofweave/graph.hpp"
#include "proofweave/mall.hpp"
#include "proofweave/mll.hpp"

namespace proofweave {

struct OracleError : std::runtime_error {
    std::string code;
    OracleError(std::string c, const std::string& msg)
        : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

// All cycles up to rotation/reflection. Guarded to desk scale.
std::vector<Path> enumerate_cycles(const LocallyColoredGraph& g);

// Vertices v such that every enumerated cycle through v has a cusp at v.
std::vector<Vertex> brute_splitting(const LocallyColoredGraph& g);
bool brute_is_splitting(const LocallyColoredGraph& g, Vertex v);

struct SwitchingsReport {
    bool correct = false;
    int degree = 0;      // common component count when correct
    int switchings = 0;  // 2^(#par)
};
// Checks all correctness graphs of the structure for acyclicity.
SwitchingsReport brute_switchings(const ProofStructure& ps);

struct MallBrute {
    bool p1 = false, p2 = false, p3 = false;
};
// Definition-level P1-P3 by literal enumeration.
MallBrute brute_mall_check(const MallNet& net);

struct GeneratorConfig {
    uint64_t seed = 1;
    int max_vertices = 6;
    int max_edges = 8;
    int max_colors = 3;
    int max_rules = 10;
    int atoms = 3;
    bool allow_partial = false;
    bool allow_mix = true;
    bool allow_hyp = true;
    bool allow_cut = true;
    int max_with = 2;
};

// Deterministic generator state (splitmix64); identical seeds and configs give
// identical outputs on every platform.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    int below(int n) { return n <= 1 ? 0 : static_cast<int>(next() % static_cast<uint64_t>(n)); }
    bool chance(int pct) { return below(100) < pct; }
};

LocallyColoredGraph generate_graph(const GeneratorConfig& cfg);
Deriv generate_mll_derivation(const GeneratorConfig& cfg, LocGen& gen);
Deriv generate_mall_derivation(const GeneratorConfig& cfg, LocGen& gen);

struct MatchingInstance {
    LocallyColoredGraph graph;
    std::vector<std::string> matching;
};
MatchingInstance generate_matching_instance(const GeneratorConfig& cfg);

// Every locally colored total multigraph with at most max_v vertices, max_e
// edges and max_c colors, one representative per color renaming class.
void enumerate_small_graphs(int max_v, int max_e, int max_c,
                            const std::function<void(const LocallyColoredGraph&)>& fn);

}  // namespace proofweave
