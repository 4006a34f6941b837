#ifndef OUTERTRACK_CORE_GRAPH_HPP
#define OUTERTRACK_CORE_GRAPH_HPP

#include "outertrack/construction.hpp"
#include "outertrack/sequence.hpp"

#include <optional>

namespace outertrack {

struct NoIllegalTurn : std::runtime_error {
    NoIllegalTurn() : std::runtime_error("core has no illegal turn") {}
};

struct MonotonicityViolation : std::runtime_error {
    explicit MonotonicityViolation(const std::string& what) : std::runtime_error(what) {}
};

// Stallings core: a folded labeled graph immersing into the ambient graph.
// Each core half-edge carries an ambient half-edge label; the labeling
// commutes with the involutions and no vertex has two outgoing half-edges
// with the same label.
class CoreGraph {
public:
    struct Edge {
        int init;
        int term;
        HalfEdge label;  // ambient label of the forward half
    };

    CoreGraph() = default;

    int vertex_count() const { return vertex_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    std::optional<int> basepoint() const { return basepoint_; }

    HalfEdge label(HalfEdge core_half) const {
        const Edge& e = edges_[edge_of(core_half)];
        return is_reverse(core_half) ? reversed(e.label) : e.label;
    }
    int init_vertex(HalfEdge core_half) const {
        const Edge& e = edges_[edge_of(core_half)];
        return is_reverse(core_half) ? e.term : e.init;
    }

    std::vector<std::vector<HalfEdge>> directions() const;  // per vertex
    int rank() const;
    bool is_folded() const;
    bool has_valence_one(bool ignore_basepoint) const;

    // Loop word read around a cyclic core (rank-1 cores), up to rotation.
    std::vector<HalfEdge> cycle_word() const;

    // Wedge of labeled loops at a common base vertex, folded and cored.
    // keep_basepoint retains the wedge point even at valence one.
    static CoreGraph from_generators(const MarkedGraph& ambient,
                                     const std::vector<std::vector<HalfEdge>>& loops,
                                     bool keep_basepoint = false);

    // Relabel by f-images, fold back to an immersion and re-core.
    CoreGraph pushforward(const Morphism& f, std::size_t max_edges = 1u << 26) const;

    friend CoreGraph fold_and_core(int vertex_count, std::vector<CoreGraph::Edge> edges,
                                   std::optional<int> basepoint);

private:
    int vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::optional<int> basepoint_;
};

CoreGraph fold_and_core(int vertex_count, std::vector<CoreGraph::Edge> edges,
                        std::optional<int> basepoint);

struct LocatedTurn {
    int vertex;
    HalfEdge d1, d2;  // core directions whose labels share a gate
};

struct CoreIllegalTurns {
    int count;  // sum over vertices and gates of (class size - 1)
    std::vector<LocatedTurn> turns;
};

CoreIllegalTurns core_illegal_turns(const CoreGraph& core, const TrainTrack& ambient_tt);

// Maximal-root extraction on the cyclic word; the root-closure check offered
// for cyclic subgroups only.
bool cyclic_subgroup_root_closed(const std::vector<HalfEdge>& loop);

enum class InsertionCase { One, Two, Three, DeltaCopy, Wait };

struct InsertionMove {
    InsertionCase kind;
    Morphism splice;  // self-map of the ambient graph (empty for DeltaCopy/Wait)
    Int exponent;     // k of Case 1 (s of the bounded variant), 0 otherwise
    std::string description;
};

// Classify the lowest illegal turn of the core against the ambient structure
// and return the matching insertion move. The ambient pair (gamma, tt) is the
// rein structure at the current position.
InsertionMove propose_insertion(const CoreGraph& core, const GammaGraph& gamma,
                                const TrainTrack& tt, Int case1_max_k = Int(1) << 20);

struct MonitorReport {
    struct Trajectory {
        std::vector<std::vector<HalfEdge>> generators;
        std::vector<int> counts;         // illegal turns per step boundary
        std::vector<Int> core_sizes;     // edges per step boundary
        std::vector<std::string> insertions;  // description per step, "" if none
        // the spliced morphisms with the step index they precede; splicing
        // them into the run perturbs the matrices, so certificates are
        // recomputed rather than trusted
        std::vector<std::pair<std::size_t, Morphism>> applied;
        bool reached_zero = false;
        bool monotone = true;
        bool delta_copy = false;         // distinguished Case-2 terminal outcome
        std::size_t frozen_from = 0;     // counts constant 0 from this index on
    };
    std::vector<Trajectory> trajectories;
    bool all_monotone = true;
};

enum class MonitorPolicy { Manual, Greedy };

// Track cores along the run's step morphisms, counting illegal turns at every
// step boundary with the base rein structure. Greedy splices the proposed
// insertion whenever a count is positive; throws MonotonicityViolation only
// when asked to (check_monotone) since insertions legitimately change counts.
MonitorReport monitor(const SequenceRun& run, const GammaGraph& gamma,
                      const std::vector<std::vector<std::vector<HalfEdge>>>& subgroups,
                      MonitorPolicy policy, bool check_monotone = true);

// Splice a trajectory's insertions into a copy of the run and recertify the
// full cumulative product; returns the modified run.
SequenceRun run_with_insertions(const SequenceRun& run, const GammaGraph& gamma,
                                const MonitorReport::Trajectory& trajectory);

}  // namespace outertrack

#endif
