#ifndef OUTERTRACK_GRAPH_HPP
#define OUTERTRACK_GRAPH_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace outertrack {

// Directed half-edges of edge e are 2e (forward) and 2e+1 (reverse); the
// orientation involution is h ^ 1, which is fixed-point free by construction.
using HalfEdge = int;

inline HalfEdge reversed(HalfEdge h) { return h ^ 1; }
inline int edge_of(HalfEdge h) { return h >> 1; }
inline bool is_reverse(HalfEdge h) { return h & 1; }
inline HalfEdge forward_half(int edge) { return 2 * edge; }

// Finite graph with stable small integer ids; labels are display-only.
// Vertices are 0..vertex_count-1, edges 0..edge_count-1. Graphs may be
// disconnected; rank = |E| - |V| + (number of components).
class MarkedGraph {
public:
    struct Edge {
        int init;
        int term;
        std::string label;
        bool operator==(const Edge& o) const {
            return init == o.init && term == o.term && label == o.label;
        }
    };

    MarkedGraph() = default;
    MarkedGraph(int vertex_count, std::vector<Edge> edges);

    int vertex_count() const { return vertex_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int half_edge_count() const { return 2 * edge_count(); }

    const Edge& edge(int e) const { return edges_.at(e); }
    const std::string& label(int e) const { return edges_.at(e).label; }

    int init_vertex(HalfEdge h) const {
        const Edge& e = edges_[edge_of(h)];
        return is_reverse(h) ? e.term : e.init;
    }
    int term_vertex(HalfEdge h) const { return init_vertex(reversed(h)); }

    // Directed half-edges based at v.
    const std::vector<HalfEdge>& directions_at(int v) const { return directions_.at(v); }
    int valence(int v) const { return static_cast<int>(directions_.at(v).size()); }

    // Label of a directed half-edge: "a_0" forward, "~a_0" reversed.
    std::string half_edge_label(HalfEdge h) const;
    // Lookup by label; accepts the "~" prefix. Throws if unknown.
    HalfEdge half_edge_by_label(const std::string& s) const;
    std::optional<int> edge_by_label(const std::string& s) const;

    int component_count() const;
    std::vector<int> component_of_vertices() const;
    int rank() const;

    bool all_valences_at_least(int k) const;

    bool operator==(const MarkedGraph& o) const {
        return vertex_count_ == o.vertex_count_ && edges_ == o.edges_;
    }
    bool operator!=(const MarkedGraph& o) const { return !(*this == o); }

    static MarkedGraph rose(int petals, const std::string& stem = "x");
    static MarkedGraph disjoint_union(const MarkedGraph& a, const MarkedGraph& b);

private:
    int vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<HalfEdge>> directions_;
};

// Per-vertex partition of the directions at that vertex into gates. A turn
// {d1, d2} is legal iff the two directions lie in different gates.
class TrainTrack {
public:
    TrainTrack() = default;
    // All-singleton gates.
    static TrainTrack discrete(const MarkedGraph& g);
    // Singleton gates except the listed groups; each group must be based at a
    // single vertex and groups must be disjoint.
    static TrainTrack with_gates(const MarkedGraph& g,
                                 const std::vector<std::vector<HalfEdge>>& groups);

    int gate_of(HalfEdge h) const { return gate_of_.at(h); }
    bool legal_turn(HalfEdge d1, HalfEdge d2) const {
        return d1 != d2 && gate_of_.at(d1) != gate_of_.at(d2);
    }
    const std::vector<std::vector<HalfEdge>>& gates() const { return gates_; }

    bool defined() const { return !gate_of_.empty(); }

private:
    std::vector<int> gate_of_;
    std::vector<std::vector<HalfEdge>> gates_;
};

int illegal_turn_count(const MarkedGraph& g, const TrainTrack& tt);

struct RecurrenceResult {
    bool recurrent;
    std::vector<HalfEdge> witness;  // legal closed walk crossing every edge when recurrent
};

RecurrenceResult is_recurrent(const MarkedGraph& g, const TrainTrack& tt);

}  // namespace outertrack

#endif
