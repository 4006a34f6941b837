#include "outertrack/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

namespace outertrack {

MarkedGraph::MarkedGraph(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
    directions_.assign(vertex_count_, {});
    for (int e = 0; e < edge_count(); ++e) {
        const Edge& ed = edges_[e];
        if (ed.init < 0 || ed.init >= vertex_count_ || ed.term < 0 || ed.term >= vertex_count_)
            throw std::invalid_argument("edge endpoint out of range");
        directions_[ed.init].push_back(forward_half(e));
        directions_[ed.term].push_back(reversed(forward_half(e)));
    }
}

std::string MarkedGraph::half_edge_label(HalfEdge h) const {
    const std::string& base = edges_.at(edge_of(h)).label;
    return is_reverse(h) ? "~" + base : base;
}

std::optional<int> MarkedGraph::edge_by_label(const std::string& s) const {
    for (int e = 0; e < edge_count(); ++e)
        if (edges_[e].label == s) return e;
    return std::nullopt;
}

HalfEdge MarkedGraph::half_edge_by_label(const std::string& s) const {
    bool rev = !s.empty() && s[0] == '~';
    std::string base = rev ? s.substr(1) : s;
    auto e = edge_by_label(base);
    if (!e) throw std::invalid_argument("unknown edge label: " + s);
    HalfEdge h = forward_half(*e);
    return rev ? reversed(h) : h;
}

std::vector<int> MarkedGraph::component_of_vertices() const {
    std::vector<int> comp(vertex_count_, -1);
    int next = 0;
    for (int v = 0; v < vertex_count_; ++v) {
        if (comp[v] != -1) continue;
        comp[v] = next;
        std::queue<int> q;
        q.push(v);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (HalfEdge h : directions_[u]) {
                int w = term_vertex(h);
                if (comp[w] == -1) {
                    comp[w] = next;
                    q.push(w);
                }
            }
        }
        ++next;
    }
    return comp;
}

int MarkedGraph::component_count() const {
    auto comp = component_of_vertices();
    return comp.empty() ? 0 : 1 + *std::max_element(comp.begin(), comp.end());
}

int MarkedGraph::rank() const { return edge_count() - vertex_count_ + component_count(); }

bool MarkedGraph::all_valences_at_least(int k) const {
    for (int v = 0; v < vertex_count_; ++v)
        if (valence(v) < k) return false;
    return true;
}

MarkedGraph MarkedGraph::rose(int petals, const std::string& stem) {
    std::vector<Edge> edges;
    for (int i = 0; i < petals; ++i) edges.push_back({0, 0, stem + "_" + std::to_string(i)});
    return MarkedGraph(1, std::move(edges));
}

MarkedGraph MarkedGraph::disjoint_union(const MarkedGraph& a, const MarkedGraph& b) {
    std::vector<Edge> edges = a.edges_;
    for (const Edge& e : b.edges_)
        edges.push_back({e.init + a.vertex_count_, e.term + a.vertex_count_, e.label + "'"});
    return MarkedGraph(a.vertex_count_ + b.vertex_count_, std::move(edges));
}

TrainTrack TrainTrack::discrete(const MarkedGraph& g) {
    TrainTrack tt;
    tt.gate_of_.resize(g.half_edge_count());
    tt.gates_.resize(g.half_edge_count());
    for (HalfEdge h = 0; h < g.half_edge_count(); ++h) {
        tt.gate_of_[h] = h;
        tt.gates_[h] = {h};
    }
    return tt;
}

TrainTrack TrainTrack::with_gates(const MarkedGraph& g,
                                  const std::vector<std::vector<HalfEdge>>& groups) {
    TrainTrack tt;
    tt.gate_of_.assign(g.half_edge_count(), -1);
    for (const auto& group : groups) {
        if (group.empty()) throw std::invalid_argument("empty gate");
        int v = g.init_vertex(group[0]);
        int id = static_cast<int>(tt.gates_.size());
        for (HalfEdge h : group) {
            if (g.init_vertex(h) != v) throw std::invalid_argument("gate spans several vertices");
            if (tt.gate_of_[h] != -1) throw std::invalid_argument("gates overlap");
            tt.gate_of_[h] = id;
        }
        tt.gates_.push_back(group);
    }
    for (HalfEdge h = 0; h < g.half_edge_count(); ++h) {
        if (tt.gate_of_[h] != -1) continue;
        tt.gate_of_[h] = static_cast<int>(tt.gates_.size());
        tt.gates_.push_back({h});
    }
    return tt;
}

int illegal_turn_count(const MarkedGraph&, const TrainTrack& tt) {
    // A gate of size k contributes k - 1 illegal turns.
    int count = 0;
    for (const auto& gate : tt.gates()) count += static_cast<int>(gate.size()) - 1;
    return count;
}

RecurrenceResult is_recurrent(const MarkedGraph& g, const TrainTrack& tt) {
    int H = g.half_edge_count();
    if (H == 0) return {true, {}};
    // Legal-turn digraph: node = directed half-edge, arc h1 -> h2 when h2 is
    // based at the terminus of h1 and the turn {~h1, h2} is legal.
    auto arcs_from = [&](HalfEdge h1) {
        std::vector<HalfEdge> out;
        for (HalfEdge h2 : g.directions_at(g.term_vertex(h1)))
            if (tt.legal_turn(reversed(h1), h2)) out.push_back(h2);
        return out;
    };
    // Tarjan-style SCC via iterative Kosaraju.
    std::vector<std::vector<HalfEdge>> fwd(H), bwd(H);
    for (HalfEdge h = 0; h < H; ++h)
        for (HalfEdge h2 : arcs_from(h)) {
            fwd[h].push_back(h2);
            bwd[h2].push_back(h);
        }
    std::vector<int> order;
    std::vector<char> seen(H, 0);
    for (int s = 0; s < H; ++s) {
        if (seen[s]) continue;
        std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
        seen[s] = 1;
        while (!stack.empty()) {
            auto& [u, idx] = stack.back();
            if (idx < fwd[u].size()) {
                int v = fwd[u][idx++];
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back({v, 0});
                }
            } else {
                order.push_back(u);
                stack.pop_back();
            }
        }
    }
    std::vector<int> scc(H, -1);
    int nscc = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (scc[*it] != -1) continue;
        std::vector<int> stack{*it};
        scc[*it] = nscc;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : bwd[u])
                if (scc[v] == -1) {
                    scc[v] = nscc;
                    stack.push_back(v);
                }
        }
        ++nscc;
    }
    // A legal closed walk crossing every edge exists iff one SCC contains, for
    // every edge, at least one of its two directions.
    for (int c = 0; c < nscc; ++c) {
        std::vector<char> covered(g.edge_count(), 0);
        bool ok = true;
        for (HalfEdge h = 0; h < H; ++h)
            if (scc[h] == c) covered[edge_of(h)] = 1;
        for (int e = 0; e < g.edge_count(); ++e)
            if (!covered[e]) {
                ok = false;
                break;
            }
        if (!ok) continue;
        // Build a witness walk inside the SCC: chain BFS paths through one
        // direction of each edge and close up.
        std::vector<HalfEdge> targets;
        for (int e = 0; e < g.edge_count(); ++e) {
            HalfEdge h = forward_half(e);
            targets.push_back(scc[h] == c ? h : reversed(h));
        }
        // Nodes strictly after src, ending at dst; requires src != dst.
        auto bfs_nodes = [&](HalfEdge src, HalfEdge dst) {
            std::vector<int> prev(H, -2);
            std::queue<HalfEdge> q;
            q.push(src);
            prev[src] = -1;
            while (!q.empty() && prev[dst] == -2) {
                HalfEdge u = q.front();
                q.pop();
                for (HalfEdge v : fwd[u])
                    if (scc[v] == c && prev[v] == -2) {
                        prev[v] = u;
                        q.push(v);
                    }
            }
            std::vector<HalfEdge> path;
            for (HalfEdge u = dst; u != src; u = prev[u]) path.push_back(u);
            std::reverse(path.begin(), path.end());
            return path;
        };
        auto leg = [&](HalfEdge from, HalfEdge to) -> std::vector<HalfEdge> {
            if (from != to) return bfs_nodes(from, to);
            for (HalfEdge v : fwd[from]) {
                if (scc[v] != c) continue;
                if (v == from) return {v};
                auto rest = bfs_nodes(v, from);
                rest.insert(rest.begin(), v);
                return rest;
            }
            return {};
        };
        if (targets.size() == 1 && leg(targets[0], targets[0]).empty())
            continue;  // isolated node without a legal self-turn
        std::vector<HalfEdge> walk{targets[0]};
        for (std::size_t i = 1; i < targets.size(); ++i) {
            auto piece = leg(walk.back(), targets[i]);
            walk.insert(walk.end(), piece.begin(), piece.end());
        }
        auto back = leg(walk.back(), targets[0]);
        if (!back.empty()) back.pop_back();  // final node repeats the start
        walk.insert(walk.end(), back.begin(), back.end());
        return {true, walk};
    }
    return {false, {}};
}

}  // namespace outertrack
