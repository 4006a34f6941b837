#include "outertrack/core_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

namespace outertrack {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

}  // namespace

std::vector<std::vector<HalfEdge>> CoreGraph::directions() const {
    std::vector<std::vector<HalfEdge>> out(vertex_count_);
    for (int e = 0; e < edge_count(); ++e) {
        out[edges_[e].init].push_back(forward_half(e));
        out[edges_[e].term].push_back(reversed(forward_half(e)));
    }
    return out;
}

int CoreGraph::rank() const {
    // rank = E - V + C; an isolated vertex is its own component and adds 0.
    if (edge_count() == 0) return 0;
    UnionFind uf(vertex_count_);
    int comps = vertex_count_;
    for (const Edge& e : edges_)
        if (uf.unite(e.init, e.term)) --comps;
    return edge_count() - vertex_count_ + comps;
}

bool CoreGraph::is_folded() const {
    auto dirs = directions();
    for (const auto& at_v : dirs) {
        std::vector<HalfEdge> labels;
        for (HalfEdge d : at_v) labels.push_back(label(d));
        std::sort(labels.begin(), labels.end());
        if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) return false;
    }
    return true;
}

bool CoreGraph::has_valence_one(bool ignore_basepoint) const {
    auto dirs = directions();
    for (int v = 0; v < vertex_count_; ++v) {
        if (ignore_basepoint && basepoint_ && *basepoint_ == v) continue;
        if (dirs[v].size() == 1) return true;
    }
    return false;
}

std::vector<HalfEdge> CoreGraph::cycle_word() const {
    auto dirs = directions();
    for (const auto& at_v : dirs)
        if (at_v.size() != 2) throw std::logic_error("cycle_word: core is not a cycle");
    if (edge_count() == 0) return {};
    std::vector<HalfEdge> word;
    HalfEdge h = forward_half(0);
    int start = init_vertex(h);
    int at = start;
    do {
        word.push_back(label(h));
        if (static_cast<int>(word.size()) > edge_count())
            throw std::logic_error("cycle_word: core is not a single cycle");
        at = init_vertex(reversed(h));
        HalfEdge next = -1;
        for (HalfEdge d : dirs[at])
            if (d != reversed(h)) next = d;
        if (next == -1) throw std::logic_error("cycle_word: dead end");
        h = next;
    } while (at != start || static_cast<int>(word.size()) < edge_count());
    return word;
}

CoreGraph fold_and_core(int vertex_count, std::vector<CoreGraph::Edge> edges,
                        std::optional<int> basepoint) {
    // Stallings folding with a worklist: directions register into a per-class
    // label map; a collision folds the two edges (identify far endpoints,
    // drop one edge) and the smaller class map is re-queued on merges.
    UnionFind uf(vertex_count);
    std::vector<char> dead(edges.size(), 0);
    std::vector<std::map<HalfEdge, std::pair<int, int>>> dirmap(vertex_count);
    std::vector<std::pair<int, int>> work;  // (edge, sign)
    work.reserve(edges.size() * 2);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        work.push_back({static_cast<int>(e), 0});
        work.push_back({static_cast<int>(e), 1});
    }
    while (!work.empty()) {
        auto [e, sign] = work.back();
        work.pop_back();
        if (dead[e]) continue;
        int v = uf.find(sign ? edges[e].term : edges[e].init);
        HalfEdge lab = sign ? reversed(edges[e].label) : edges[e].label;
        auto& m = dirmap[v];
        auto it = m.find(lab);
        if (it == m.end()) {
            m[lab] = {e, sign};
            continue;
        }
        auto [e0, sign0] = it->second;
        if (dead[e0]) {
            it->second = {e, sign};
            continue;
        }
        if (e0 == e && sign0 == sign) continue;
        // fold e onto e0: identify the far endpoints
        int w0 = uf.find(sign0 ? edges[e0].init : edges[e0].term);
        int w = uf.find(sign ? edges[e].init : edges[e].term);
        dead[e] = 1;
        if (w0 != w) {
            int keep = dirmap[w0].size() >= dirmap[w].size() ? w0 : w;
            int lose = keep == w0 ? w : w0;
            uf.unite(keep, lose);
            for (auto& kv : dirmap[lose])
                if (!dead[kv.second.first]) work.push_back(kv.second);
            dirmap[lose].clear();
        }
    }
    // compact vertices
    std::vector<int> vmap(vertex_count, -1);
    int vc = 0;
    std::vector<CoreGraph::Edge> folded;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (dead[e]) continue;
        int a = uf.find(edges[e].init), b = uf.find(edges[e].term);
        if (vmap[a] == -1) vmap[a] = vc++;
        if (vmap[b] == -1) vmap[b] = vc++;
        folded.push_back({vmap[a], vmap[b], edges[e].label});
    }
    std::optional<int> base;
    if (basepoint) {
        int a = uf.find(*basepoint);
        if (vmap[a] == -1) vmap[a] = vc++;
        base = vmap[a];
    }
    // core: peel valence-1 vertices (keeping the basepoint if set)
    std::vector<int> valence(vc, 0);
    std::vector<std::vector<int>> incident(vc);
    for (std::size_t e = 0; e < folded.size(); ++e) {
        ++valence[folded[e].init];
        ++valence[folded[e].term];
        incident[folded[e].init].push_back(static_cast<int>(e));
        incident[folded[e].term].push_back(static_cast<int>(e));
    }
    std::vector<char> gone(folded.size(), 0);
    std::vector<int> queue;
    for (int v = 0; v < vc; ++v)
        if (valence[v] == 1 && !(base && *base == v)) queue.push_back(v);
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        if (valence[v] != 1 || (base && *base == v)) continue;
        for (int e : incident[v]) {
            if (gone[e]) continue;
            gone[e] = 1;
            for (int u : {folded[e].init, folded[e].term}) {
                --valence[u];
                if (valence[u] == 1 && !(base && *base == u)) queue.push_back(u);
            }
        }
    }
    std::vector<CoreGraph::Edge> kept;
    for (std::size_t e = 0; e < folded.size(); ++e)
        if (!gone[e]) kept.push_back(folded[e]);
    // drop isolated vertices
    std::vector<int> used(vc, -1);
    int vc2 = 0;
    std::optional<int> base2;
    if (base) {
        used[*base] = vc2++;
        base2 = 0;
    }
    for (auto& e : kept) {
        if (used[e.init] == -1) used[e.init] = vc2++;
        if (used[e.term] == -1) used[e.term] = vc2++;
        e.init = used[e.init];
        e.term = used[e.term];
    }
    CoreGraph out;
    out.vertex_count_ = vc2;
    out.edges_ = std::move(kept);
    out.basepoint_ = base2;
    return out;
}

CoreGraph CoreGraph::from_generators(const MarkedGraph& ambient,
                                     const std::vector<std::vector<HalfEdge>>& loops,
                                     bool keep_basepoint) {
    int vc = 1;
    std::vector<Edge> edges;
    for (const auto& loop : loops) {
        if (loop.empty()) continue;
        int common = ambient.init_vertex(loop.front());
        if (ambient.term_vertex(loop.back()) != common)
            throw std::invalid_argument("generator word is not a loop");
        int prev = 0;
        for (std::size_t k = 0; k < loop.size(); ++k) {
            if (k + 1 < loop.size() && ambient.term_vertex(loop[k]) != ambient.init_vertex(loop[k + 1]))
                throw std::invalid_argument("generator word is not a path");
            int next = (k + 1 == loop.size()) ? 0 : vc++;
            HalfEdge lab = loop[k];
            if (is_reverse(lab))
                edges.push_back({next, prev, reversed(lab)});
            else
                edges.push_back({prev, next, lab});
            prev = next;
        }
    }
    return fold_and_core(vc, std::move(edges), keep_basepoint ? std::optional<int>(0) : std::nullopt);
}

CoreGraph CoreGraph::pushforward(const Morphism& f, std::size_t max_edges) const {
    // Substitute each core edge by the expanded image of its label, then fold
    // and re-core; substitution cancellations are resolved by the folding.
    Int total = 0;
    std::vector<std::vector<HalfEdge>> images(edge_count());
    for (int e = 0; e < edge_count(); ++e) {
        EdgePath img = f.image(edges_[e].label);
        total += img.length();
        if (total > Int(static_cast<unsigned long long>(max_edges)))
            throw std::length_error("pushforward: core grows past the configured bound");
        images[e] = img.expand(max_edges);
    }
    int vc = vertex_count_;
    std::vector<Edge> out;
    for (int e = 0; e < edge_count(); ++e) {
        int prev = edges_[e].init;
        const auto& word = images[e];
        for (std::size_t k = 0; k < word.size(); ++k) {
            int next = (k + 1 == word.size()) ? edges_[e].term : vc++;
            HalfEdge lab = word[k];
            if (is_reverse(lab))
                out.push_back({next, prev, reversed(lab)});
            else
                out.push_back({prev, next, lab});
            prev = next;
        }
    }
    std::optional<int> base = basepoint_;
    return fold_and_core(vc, std::move(out), base);
}

CoreIllegalTurns core_illegal_turns(const CoreGraph& core, const TrainTrack& ambient_tt) {
    CoreIllegalTurns out{0, {}};
    auto dirs = core.directions();
    for (int v = 0; v < core.vertex_count(); ++v) {
        std::map<int, std::vector<HalfEdge>> by_gate;
        for (HalfEdge d : dirs[v]) by_gate[ambient_tt.gate_of(core.label(d))].push_back(d);
        for (auto& [gate, group] : by_gate) {
            out.count += static_cast<int>(group.size()) - 1;
            for (std::size_t i = 1; i < group.size(); ++i)
                out.turns.push_back({v, group[i - 1], group[i]});
        }
    }
    return out;
}

bool cyclic_subgroup_root_closed(const std::vector<HalfEdge>& loop) {
    std::vector<HalfEdge> w = cyclic_tighten(loop);
    std::size_t n = w.size();
    if (n == 0) return false;
    for (std::size_t period = 1; period <= n / 2; ++period) {
        if (n % period != 0) continue;
        bool repeats = true;
        for (std::size_t i = period; i < n && repeats; ++i)
            if (w[i] != w[i - period]) repeats = false;
        if (repeats) return false;  // proper power: <w> is not root-closed
    }
    return true;
}

namespace {

// Self-map of gamma's graph sending c to the given loop at the rein vertex
// and fixing everything else.
Morphism rein_splice(const GammaGraph& gamma, const EdgePath& c_image, const std::string&) {
    const MarkedGraph& g = *gamma.graph();
    std::vector<int> vmap(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) vmap[v] = v;
    std::vector<EdgePath> imgs;
    for (int e = 0; e < g.edge_count(); ++e) imgs.push_back(EdgePath::of(g, {forward_half(e)}));
    imgs[gamma.c_edge()] = c_image;
    return Morphism(gamma.graph(), gamma.graph(), std::move(vmap), std::move(imgs));
}

// Index i with b_i based at the rein vertex.
int rein_b_index(const GammaGraph& gamma) {
    for (int i = 0; i < gamma.n() - 2; ++i)
        if (gamma.graph()->edge(gamma.b_edge(i)).init == gamma.rein_vertex()) return i;
    throw std::logic_error("no b loop at the rein vertex");
}

// Longest path labeled b_i^k from the given core vertex.
Int max_b_power(const CoreGraph& core, int v, HalfEdge b_forward) {
    auto dirs = core.directions();
    Int k = 0;
    int at = v;
    std::vector<char> visited(core.vertex_count(), 0);
    while (true) {
        if (visited[at]) break;  // b-cycle: the power path wraps
        visited[at] = 1;
        HalfEdge next = -1;
        for (HalfEdge d : dirs[at])
            if (core.label(d) == b_forward) next = d;
        if (next == -1) break;
        ++k;
        at = core.init_vertex(reversed(next));
    }
    return k;
}

}  // namespace

InsertionMove propose_insertion(const CoreGraph& core, const GammaGraph& gamma, const TrainTrack& tt,
                                Int case1_max_k) {
    CoreIllegalTurns found = core_illegal_turns(core, tt);
    if (found.turns.empty()) throw NoIllegalTurn();
    const MarkedGraph& g = *gamma.graph();
    const LocatedTurn& turn = found.turns.front();
    int c_edge = gamma.c_edge();
    int bi = rein_b_index(gamma);
    // paths are built at the rein vertex; indices mod n-2
    auto b_fwd = [&](int i) { return forward_half(gamma.b_edge(i)); };
    auto a_fwd = [&](int i) { return forward_half(gamma.a_edge(i)); };

    HalfEdge l1 = core.label(turn.d1), l2 = core.label(turn.d2);
    bool c1 = edge_of(l1) == c_edge, c2 = edge_of(l2) == c_edge;

    auto block = [&](std::vector<HalfEdge> word, Int exp) { return EdgePath::Block{std::move(word), exp}; };

    if (!c1 && !c2) {
        // a turn between two non-rein directions resolves on its own as the
        // rein travels; advance one step before re-testing
        return {InsertionCase::Wait, Morphism(), Int(0), "wait"};
    }
    if (c1 && c2) {
        // Case 3: the {c, ~c} turn; c -> b_i c ~b_i^2 splits the two ends.
        EdgePath img = EdgePath::of_blocks(
            g, {block({b_fwd(bi)}, 1), block({forward_half(c_edge)}, 1), block({reversed(b_fwd(bi))}, 2)});
        return {InsertionCase::Three, rein_splice(gamma, img, "case3"), Int(0),
                "case3: c -> b_" + std::to_string(bi) + " c ~b_" + std::to_string(bi) + "^2"};
    }
    HalfEdge other = c1 ? l2 : l1;  // the non-c label of the turn
    int other_edge = edge_of(other);
    bool is_b = other_edge == gamma.b_edge(bi);
    int v = turn.vertex;
    if (is_b) {
        // Case 1: the turn enters through a lift of b_i. k = maximal b_i-power
        // path from v; insert c -> b_i^k c ~b_i^{k+1}, or the bounded variant
        // ending at a valence-2 vertex when k is out of range.
        Int k = max_b_power(core, v, b_fwd(bi));
        if (k <= case1_max_k) {
            std::vector<EdgePath::Block> blocks;
            if (k > 0) blocks.push_back(block({b_fwd(bi)}, k));
            blocks.push_back(block({forward_half(c_edge)}, 1));
            blocks.push_back(block({reversed(b_fwd(bi))}, k + 1));
            EdgePath img = EdgePath::of_blocks(g, blocks);
            return {InsertionCase::One, rein_splice(gamma, img, "case1"), k,
                    "case1: c -> b^" + k.str() + " c ~b^" + Int(k + 1).str()};
        }
        // bounded variant: c -> b_i^s ~a_{i-1} b_{i-1} a_{i-1} ~b_i^s c with s
        // the largest prefix of the b-power path ending at a valence-2 vertex
        auto dirs = core.directions();
        Int s = 0, best = 0;
        int at = v;
        while (true) {
            HalfEdge next = -1;
            for (HalfEdge d : dirs[at])
                if (core.label(d) == b_fwd(bi)) next = d;
            if (next == -1) break;
            ++s;
            at = core.init_vertex(reversed(next));
            if (dirs[at].size() == 2) {
                best = s;
                break;
            }
            if (s > case1_max_k) break;
        }
        int prev = gamma.mod(bi - 1);
        std::vector<EdgePath::Block> blocks;
        if (best > 0) blocks.push_back(block({b_fwd(bi)}, best));
        blocks.push_back(block({reversed(a_fwd(prev)), b_fwd(prev), a_fwd(prev)}, 1));
        if (best > 0) blocks.push_back(block({reversed(b_fwd(bi))}, best));
        blocks.push_back(block({forward_half(c_edge)}, 1));
        EdgePath img = EdgePath::of_blocks(g, blocks);
        return {InsertionCase::One, rein_splice(gamma, img, "case1s"), best,
                "case1 bounded: c -> b^s ~a b a ~b^s c, s=" + best.str()};
    }
    // Case 2: the turn enters through a lift of the rein edge's a-side. If b_i
    // is not a loop at v in the core, convert to a Case-1 move; else if
    // a_{i-1} is absent at v, insert c -> ~a_{i-1} b_{i-1} a_{i-1} c; else the
    // core carries a copy of Delta, the distinguished terminal outcome.
    auto dirs = core.directions();
    bool b_loop_here = false, a_prev_here = false;
    int prev = gamma.mod(bi - 1);
    for (HalfEdge d : dirs[v]) {
        if (edge_of(core.label(d)) == gamma.b_edge(bi) && core.init_vertex(reversed(d)) == v)
            b_loop_here = true;
        if (edge_of(core.label(d)) == gamma.a_edge(prev)) a_prev_here = true;
    }
    if (!b_loop_here) {
        Int k = max_b_power(core, v, b_fwd(bi));
        std::vector<EdgePath::Block> blocks;
        if (k > 0) blocks.push_back(block({b_fwd(bi)}, k));
        blocks.push_back(block({forward_half(c_edge)}, 1));
        blocks.push_back(block({reversed(b_fwd(bi))}, k + 1));
        EdgePath img = EdgePath::of_blocks(g, blocks);
        return {InsertionCase::Two, rein_splice(gamma, img, "case2"), k,
                "case2 via case1 move: c -> b^" + k.str() + " c ~b^" + Int(k + 1).str()};
    }
    if (!a_prev_here) {
        EdgePath img = EdgePath::of_blocks(
            g, {block({reversed(a_fwd(prev)), b_fwd(prev), a_fwd(prev), forward_half(c_edge)}, 1)});
        return {InsertionCase::Two, rein_splice(gamma, img, "case2conv"), Int(0),
                "case2: c -> ~a_" + std::to_string(prev) + " b_" + std::to_string(prev) + " a_" +
                    std::to_string(prev) + " c"};
    }
    return {InsertionCase::DeltaCopy, Morphism(), Int(0), "delta-copy detected"};
}

SequenceRun run_with_insertions(const SequenceRun& run, const GammaGraph& gamma,
                                const MonitorReport::Trajectory& trajectory) {
    SequenceRun out(run.direction(), run.tier_width(), run.steps(), run.edge_labels());
    auto glabels = run.edge_labels();
    std::vector<int> order_edges;
    for (const std::string& lab : glabels) {
        auto e = gamma.graph()->edge_by_label(lab);
        if (!e) throw std::invalid_argument("run edge labels do not match the gamma graph");
        order_edges.push_back(*e);
    }
    std::size_t offset = 0;
    for (const auto& [pos, splice] : trajectory.applied) {
        SequenceRun::Step step;
        step.morphism = splice;
        step.matrix = transition_matrix(splice, order_edges, order_edges);
        step.note = "insertion";
        out.insert_step(pos + offset, std::move(step));
        ++offset;
    }
    return out;
}

MonitorReport monitor(const SequenceRun& run, const GammaGraph& gamma,
                      const std::vector<std::vector<std::vector<HalfEdge>>>& subgroups,
                      MonitorPolicy policy, bool check_monotone) {
    MonitorReport report;
    const TrainTrack& tt = gamma.train_track();
    for (const auto& generators : subgroups) {
        MonitorReport::Trajectory traj;
        traj.generators = generators;
        CoreGraph core = CoreGraph::from_generators(*gamma.graph(), generators);
        bool frozen = false;
        // per-ambient-edge label counts; sizes of frozen cores propagate
        // through the transition matrix without materializing the core
        std::vector<Int> label_counts(gamma.graph()->edge_count(), Int(0));
        auto refresh_counts = [&](const CoreGraph& c) {
            std::fill(label_counts.begin(), label_counts.end(), Int(0));
            for (const auto& e : c.edges()) ++label_counts[edge_of(e.label)];
        };
        auto record = [&](const CoreGraph& c) {
            int count = core_illegal_turns(c, tt).count;
            traj.counts.push_back(count);
            traj.core_sizes.push_back(Int(c.edge_count()));
            refresh_counts(c);
            return count;
        };
        int count = record(core);
        traj.frozen_from = run.size() + 1;
        auto glabels = run.edge_labels();
        // map run edge order to ambient ids once
        std::vector<int> order_edges(glabels.size());
        for (std::size_t i = 0; i < glabels.size(); ++i) {
            auto e = gamma.graph()->edge_by_label(glabels[i]);
            if (!e) throw std::invalid_argument("run edge labels do not match the gamma graph");
            order_edges[i] = *e;
        }
        for (std::size_t step = 0; step < run.size(); ++step) {
            std::string inserted;
            if (frozen) {
                // A legal core stays legal: images of distinct gates start with
                // distinct letters, so no folding happens, no new turns appear,
                // and each edge subdivides into its image word. The size is the
                // total image length, read from the step matrix.
                const ExactMatrix& M = run.steps()[step].matrix;
                std::vector<Int> next(label_counts.size(), Int(0));
                for (std::size_t col = 0; col < label_counts.size(); ++col) {
                    const Int& c = label_counts[order_edges[col]];
                    if (c == 0) continue;
                    for (std::size_t row = 0; row < label_counts.size(); ++row)
                        next[order_edges[row]] += M.at(row, col) * c;
                }
                label_counts = std::move(next);
                Int total = 0;
                for (const Int& c : label_counts) total += c;
                traj.counts.push_back(0);
                traj.core_sizes.push_back(total);
                traj.insertions.push_back("");
                continue;
            }
            if (policy == MonitorPolicy::Greedy && count > 0) {
                InsertionMove move = propose_insertion(core, gamma, tt);
                if (move.kind == InsertionCase::DeltaCopy) {
                    traj.delta_copy = true;
                } else if (move.kind != InsertionCase::Wait) {
                    core = core.pushforward(move.splice);
                    inserted = move.description;
                    traj.applied.push_back({step, move.splice});
                    count = core_illegal_turns(core, tt).count;
                }
            }
            if (!run.steps()[step].morphism)
                throw std::invalid_argument("monitor needs a run with morphisms");
            core = core.pushforward(*run.steps()[step].morphism);
            int next = record(core);
            traj.insertions.push_back(inserted);
            if (inserted.empty() && next > count) {
                traj.monotone = false;
                report.all_monotone = false;
                if (check_monotone)
                    throw MonotonicityViolation("illegal-turn count rose from " +
                                                std::to_string(count) + " to " + std::to_string(next) +
                                                " at step " + std::to_string(step));
            }
            count = next;
            if (count == 0 && !frozen) {
                frozen = true;
                traj.frozen_from = step + 1;
            }
        }
        traj.reached_zero = count == 0;
        report.trajectories.push_back(std::move(traj));
    }
    return report;
}

}  // namespace outertrack
