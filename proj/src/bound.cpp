#include "outertrack/bound.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace outertrack {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

ComplexityValue chi_of_edges(const MarkedGraph& g, const std::vector<int>& edges) {
    UnionFind uf(g.vertex_count());
    for (int e : edges) uf.unite(g.edge(e).init, g.edge(e).term);
    std::map<int, ComplexityValue::Component> comps;
    std::map<int, std::set<int>> vertices;
    for (int e : edges) {
        int root = uf.find(g.edge(e).init);
        comps[root].edges.push_back(e);
        vertices[root].insert(g.edge(e).init);
        vertices[root].insert(g.edge(e).term);
    }
    ComplexityValue out{0, {}};
    for (auto& [root, comp] : comps) {
        comp.rank = static_cast<int>(comp.edges.size()) - static_cast<int>(vertices[root].size()) + 1;
        if (comp.rank >= 1) {
            out.total += comp.rank - 1;
            out.non_contractible.push_back(comp);
        }
    }
    return out;
}

}  // namespace

ComplexityValue chi_minus(const MarkedGraph& g) {
    std::vector<int> all(g.edge_count());
    std::iota(all.begin(), all.end(), 0);
    return chi_of_edges(g, all);
}

ComplexityValue chi_minus(const MarkedGraph& g, const std::vector<int>& edge_subset) {
    return chi_of_edges(g, edge_subset);
}

std::optional<std::size_t> mixing_certificate(const SequenceRun& run, const Int& K) {
    for (std::size_t s = 1; s <= run.size(); ++s)
        if (run.cumulative(0, s).entrywise_greater_than(K)) return s;
    return std::nullopt;
}

EdgeOrder estimate_edge_order(const SequenceRun& run, std::size_t horizon, const Rat& margin,
                              std::size_t stride) {
    if (!(margin > 1)) throw std::invalid_argument("margin must exceed 1");
    if (horizon > run.size() || horizon < 3 * stride)
        throw std::invalid_argument("horizon must allow three checkpoints within the run");
    std::size_t d = run.dim();
    // growth vectors at the last three checkpoints
    std::vector<std::vector<Rat>> w;
    for (std::size_t c = 3; c >= 1; --c) {
        std::size_t s = horizon - (c - 1) * stride;
        const ExactMatrix& m = run.cumulative(0, s);
        std::vector<Rat> v(d, Rat(0));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                // folding: frequency mu_s = M 1 (row sums); unfolding: length
                // ell_s = M^T 1 (column sums)
                if (run.direction() == Direction::Folding)
                    v[i] += Rat(m.at(i, j));
                else
                    v[i] += Rat(m.at(j, i));
            }
        w.push_back(std::move(v));
    }
    // ratio(e, e') per checkpoint, oriented so that "small" edges divide:
    // folding: mu(e')/mu(e); unfolding: ell(e)/ell(e').
    auto ratio = [&](std::size_t cp, std::size_t e, std::size_t ep) {
        return run.direction() == Direction::Folding ? w[cp][ep] / w[cp][e] : w[cp][e] / w[cp][ep];
    };
    EdgeOrder order;
    Rat inv_margin = Rat(1) / margin;
    // pair classification: -1 e < e', 0 e ~ e', +1 e > e', 2 unknown
    std::vector<std::vector<int>> rel(d, std::vector<int>(d, 0));
    for (std::size_t e = 0; e < d; ++e)
        for (std::size_t ep = e + 1; ep < d; ++ep) {
            Rat r0 = ratio(0, e, ep), r1 = ratio(1, e, ep), r2 = ratio(2, e, ep);
            order.last_ratios.push_back({r0, r1, r2});
            int cls;
            if (r2 < inv_margin && r1 < inv_margin && r0 < inv_margin && r2 <= r1 && r1 <= r0)
                cls = +1;  // ratio of e'-growth over e-growth dying: e' < e... see below
            else if (r2 > margin && r1 > margin && r0 > margin && r2 >= r1 && r1 >= r0)
                cls = -1;
            else if (r0 >= inv_margin && r0 <= margin && r1 >= inv_margin && r1 <= margin &&
                     r2 >= inv_margin && r2 <= margin)
                cls = 0;
            else
                cls = 2;
            // ratio(e, e') -> 0 means e < e' by the definitions above
            if (cls == 2) {
                order.unclassified.push_back({e, ep});
                rel[e][ep] = rel[ep][e] = 2;
            } else if (cls == 0) {
                rel[e][ep] = rel[ep][e] = 0;
            } else {
                // cls == +1: ratios stayed small: ratio(e,e') small means e' grows
                // slower (folding) or e shorter (unfolding): e < e' exactly when
                // ratio(e, e') -> 0.
                rel[e][ep] = (cls == +1) ? -1 : +1;
                rel[ep][e] = -rel[e][ep];
            }
        }
    // classes: union of ~, ordered by <
    UnionFind uf(static_cast<int>(d));
    for (std::size_t e = 0; e < d; ++e)
        for (std::size_t ep = e + 1; ep < d; ++ep)
            if (rel[e][ep] == 0) uf.unite(static_cast<int>(e), static_cast<int>(ep));
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t e = 0; e < d; ++e) groups[uf.find(static_cast<int>(e))].push_back(e);
    std::vector<std::vector<std::size_t>> classes;
    for (auto& [root, members] : groups) classes.push_back(members);
    std::sort(classes.begin(), classes.end(),
              [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
                  int r = rel[a[0]][b[0]];
                  if (r == -1) return true;
                  if (r == +1) return false;
                  return a[0] < b[0];
              });
    // consistency sweep: every cross-class pair must agree with the class
    // order and same-class pairs must compare ~; failures get flagged rather
    // than guessed.
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = i; j < classes.size(); ++j)
            for (std::size_t x : classes[i])
                for (std::size_t y : classes[j]) {
                    if (x == y) continue;
                    int want = i == j ? 0 : -1;
                    if (rel[x][y] != want)
                        order.unclassified.push_back({std::min(x, y), std::max(x, y)});
                }
    std::sort(order.unclassified.begin(), order.unclassified.end());
    order.unclassified.erase(std::unique(order.unclassified.begin(), order.unclassified.end()),
                             order.unclassified.end());
    order.classes = std::move(classes);
    return order;
}

namespace {

bool reduced_closed(const MarkedGraph& g, const std::vector<HalfEdge>& loop) {
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
        if (g.term_vertex(loop[i]) != g.init_vertex(loop[i + 1])) return false;
        if (loop[i + 1] == reversed(loop[i])) return false;
    }
    if (g.term_vertex(loop.back()) != g.init_vertex(loop.front())) return false;
    if (loop.front() == reversed(loop.back())) return false;
    return true;
}

}  // namespace

std::optional<EdgePath> witness_loop(const MarkedGraph& g, const std::optional<EdgePath>& image_word,
                                     int e, const std::vector<int>& forbidden) {
    std::set<int> banned(forbidden.begin(), forbidden.end());
    if (banned.count(e)) throw std::invalid_argument("witness edge is forbidden");
    // single-edged loop: alpha = e
    if (g.edge(e).init == g.edge(e).term) return EdgePath::of(g, {forward_half(e)});

    auto verify = [&](const std::vector<HalfEdge>& loop) {
        if (!reduced_closed(g, loop)) return false;
        bool through = false;
        for (HalfEdge h : loop) {
            if (banned.count(edge_of(h))) return false;
            if (edge_of(h) == e) through = true;
        }
        return through;
    };

    // gap scan: two same-oriented occurrences of e with a clean gap between
    if (image_word) {
        std::vector<HalfEdge> word = image_word->expand();
        for (HalfEdge target : {forward_half(e), reversed(forward_half(e))}) {
            std::optional<std::size_t> open;
            for (std::size_t i = 0; i < word.size(); ++i) {
                if (banned.count(edge_of(word[i]))) {
                    open.reset();
                    continue;
                }
                if (word[i] != target) continue;
                if (open) {
                    std::vector<HalfEdge> loop(word.begin() + static_cast<long>(*open),
                                               word.begin() + static_cast<long>(i));
                    if (verify(loop)) return EdgePath::of(g, loop);
                }
                open = i;
            }
        }
    }
    // fallback: reduced-path search from term(e) back to init(e)
    HalfEdge h0 = forward_half(e);
    // BFS over (current half-edge) states; path must avoid banned edges and
    // never backtrack; close up at init(e) without cancelling against e.
    std::vector<int> prev(g.half_edge_count(), -2);
    std::vector<HalfEdge> queue;
    queue.push_back(h0);
    prev[h0] = -1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        HalfEdge h = queue[qi];
        for (HalfEdge d : g.directions_at(g.term_vertex(h))) {
            if (d == reversed(h) || banned.count(edge_of(d)) || prev[d] != -2) continue;
            prev[d] = h;
            queue.push_back(d);
        }
    }
    for (HalfEdge last = 0; last < g.half_edge_count(); ++last) {
        if (prev[last] == -2 || banned.count(edge_of(last))) continue;
        if (g.term_vertex(last) != g.init_vertex(h0)) continue;
        if (last == reversed(h0) || reversed(last) == h0) continue;
        std::vector<HalfEdge> loop;
        for (HalfEdge h = last; h != -1; h = prev[h]) loop.push_back(h);
        std::reverse(loop.begin(), loop.end());
        if (verify(loop)) return EdgePath::of(g, loop);
    }
    return std::nullopt;
}

AuditReport upper_bound_audit(const MarkedGraph& g,
                              const std::vector<std::vector<int>>& decomposition_h0_first,
                              const EdgeOrder& order) {
    if (decomposition_h0_first.empty()) throw std::invalid_argument("empty decomposition");
    if (!order.complete())
        throw OrderViolation("edge order has unclassified pairs; audit blocked");
    std::size_t k = decomposition_h0_first.size() - 1;
    // decomposition must partition the edges
    {
        std::vector<char> seen(g.edge_count(), 0);
        for (const auto& part : decomposition_h0_first)
            for (int e : part) {
                if (e < 0 || e >= g.edge_count() || seen[e])
                    throw std::invalid_argument("decomposition is not a partition of the edges");
                seen[e] = 1;
            }
        for (int e = 0; e < g.edge_count(); ++e)
            if (!seen[e]) throw std::invalid_argument("decomposition misses an edge");
    }
    AuditReport rep;
    rep.n_rank = g.rank();
    const std::vector<int>& h0 = decomposition_h0_first[0];
    std::set<int> in_I(h0.begin(), h0.end());
    rep.initial_h0 = h0;

    // class index per edge from the order
    std::vector<int> class_of(g.edge_count(), -1);
    for (std::size_t j = 0; j < order.classes.size(); ++j)
        for (std::size_t e : order.classes[j]) class_of[e] = static_cast<int>(j);

    // B_j^i = A_j cap H^i over the non-H0 edges
    std::map<std::pair<std::size_t, std::size_t>, std::vector<int>> B;
    for (std::size_t i = 1; i <= k; ++i)
        for (int e : decomposition_h0_first[i]) {
            if (in_I.count(e)) continue;  // H^0 handled above
            if (class_of[e] < 0) throw OrderViolation("edge missing from the order");
            B[{static_cast<std::size_t>(class_of[e]), i}].push_back(e);
        }

    // single-edged loops join I
    for (int e = 0; e < g.edge_count(); ++e) {
        if (in_I.count(e)) continue;
        if (g.edge(e).init == g.edge(e).term) {
            rep.initial_loops.push_back(e);
            in_I.insert(e);
        }
    }
    rep.s = static_cast<int>(rep.initial_loops.size());

    // rank-1 components of B_j^i not attached to the current I or to earlier B's
    auto vertices_of = [&](const std::vector<int>& edges) {
        std::set<int> vs;
        for (int e : edges) {
            vs.insert(g.edge(e).init);
            vs.insert(g.edge(e).term);
        }
        return vs;
    };
    std::set<int> earlier_vertices = vertices_of(std::vector<int>(in_I.begin(), in_I.end()));
    for (auto& [ji, edges] : B) {
        ComplexityValue cv = chi_of_edges(g, edges);
        for (const auto& comp : cv.non_contractible) {
            if (comp.rank != 1) continue;
            bool attached = false;
            for (int e : comp.edges)
                if (earlier_vertices.count(g.edge(e).init) || earlier_vertices.count(g.edge(e).term))
                    attached = true;
            if (!attached) {
                rep.initial_rank1.push_back(comp.edges);
                for (int e : comp.edges) in_I.insert(e);
            }
        }
        auto vs = vertices_of(edges);
        earlier_vertices.insert(vs.begin(), vs.end());
    }
    rep.m = static_cast<int>(rep.initial_rank1.size());

    // attach B_j^i in lexicographic (j, i) order; each must raise chi_-
    std::vector<int> current(in_I.begin(), in_I.end());
    int chi = chi_of_edges(g, current).total;
    for (auto& [ji, edges] : B) {
        std::vector<int> fresh;
        for (int e : edges)
            if (!in_I.count(e)) fresh.push_back(e);
        if (fresh.empty()) continue;
        for (int e : fresh) current.push_back(e);
        int chi_next = chi_of_edges(g, current).total;
        // corroborating loop: through the piece, avoiding strictly later classes
        std::vector<int> later;
        for (int e = 0; e < g.edge_count(); ++e)
            if (class_of[e] > static_cast<int>(ji.first)) later.push_back(e);
        std::optional<EdgePath> witness;
        for (int e : fresh) {
            witness = witness_loop(g, std::nullopt, e, later);
            if (witness) break;
        }
        rep.additions.push_back({ji.first, ji.second, fresh, chi, chi_next, witness});
        if (chi_next < chi + 1)
            throw OrderViolation("attaching B_" + std::to_string(ji.first) + "^" +
                                 std::to_string(ji.second) + " did not raise the complexity");
        chi = chi_next;
        for (int e : fresh) in_I.insert(e);
    }

    // count the nonempty measure components
    for (std::size_t i = 1; i <= k; ++i)
        if (!decomposition_h0_first[i].empty()) ++rep.k;
    rep.bound = (rep.s + rep.m) + (rep.n_rank - 1);
    rep.holds = rep.k <= rep.bound && rep.bound <= 2 * rep.n_rank - 1 &&
                rep.s + rep.m <= rep.n_rank &&
                static_cast<int>(rep.additions.size()) <= rep.n_rank - 1;
    return rep;
}

}  // namespace outertrack
