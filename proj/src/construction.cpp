#include "outertrack/construction.hpp"

#include <set>

namespace outertrack {

ConstructionParams ConstructionParams::uniform(int n, const Int& alpha, const Int& beta) {
    ConstructionParams p;
    p.n = n;
    p.alphas.assign(n - 3, alpha);
    p.betas.assign(n - 3, beta);
    return p;
}

void ConstructionParams::validate() const {
    if (n < 4) throw RankTooSmall(n);
    if (static_cast<int>(alphas.size()) != n - 3 || static_cast<int>(betas.size()) != n - 3)
        throw std::invalid_argument("expected n-3 alpha and beta parameters");
    for (const Int& a : alphas)
        if (a < 1) throw std::invalid_argument("alpha parameters must be >= 1");
    for (const Int& b : betas)
        if (b < 1) throw std::invalid_argument("beta parameters must be >= 1");
}

GammaGraph::GammaGraph(int n, HalfEdge rein_at) : n_(n) {
    if (n < 4) throw RankTooSmall(n);
    int base_vertices = n - 2;
    std::vector<MarkedGraph::Edge> edges;
    a_.resize(base_vertices);
    b_.resize(base_vertices);
    for (int i = 0; i < base_vertices; ++i) {
        a_[i] = static_cast<int>(edges.size());
        edges.push_back({i, (i + 1) % base_vertices, "a_" + std::to_string(i)});
    }
    for (int i = 0; i < base_vertices; ++i) {
        b_[i] = static_cast<int>(edges.size());
        edges.push_back({i, i, "b_" + std::to_string(i)});
    }
    // The rein vertex is read off the bare graph before c exists.
    {
        MarkedGraph bare(base_vertices, edges);
        rein_vertex_ = bare.init_vertex(rein_at);
    }
    c_ = static_cast<int>(edges.size());
    edges.push_back({rein_vertex_, rein_vertex_, "c"});
    graph_ = std::make_shared<MarkedGraph>(base_vertices, std::move(edges));
    rein_dir_ = rein_at;
    HalfEdge c_fwd = forward_half(c_);
    tt_ = TrainTrack::with_gates(*graph_, {{c_fwd, reversed(c_fwd), rein_at}});
}

GammaGraph build_gamma(int n) { return GammaGraph(n, forward_half(0) /* a_0 */); }

namespace {

// Small builder for edge paths over a GammaGraph.
struct PathBuilder {
    const GammaGraph& g;
    std::vector<EdgePath::Block> blocks;

    PathBuilder& step(HalfEdge h) {
        if (!blocks.empty() && blocks.back().exp == 1)
            blocks.back().word.push_back(h);
        else
            blocks.push_back({{h}, Int(1)});
        return *this;
    }
    PathBuilder& a(int i) { return step(forward_half(g.a_edge(i))); }
    PathBuilder& A(int i) { return step(reversed(forward_half(g.a_edge(i)))); }
    PathBuilder& b(int i) { return step(forward_half(g.b_edge(i))); }
    PathBuilder& B(int i) { return step(reversed(forward_half(g.b_edge(i)))); }
    PathBuilder& c() { return step(forward_half(g.c_edge())); }
    PathBuilder& C() { return step(reversed(forward_half(g.c_edge()))); }
    PathBuilder& power(const std::vector<HalfEdge>& word, const Int& exp) {
        if (exp == 1) {
            for (HalfEdge h : word) step(h);
        } else {
            blocks.push_back({word, exp});
        }
        return *this;
    }
    EdgePath done() { return EdgePath::of_blocks(*g.graph(), std::move(blocks)); }
};

Morphism map_with_images(const GammaGraph& src, const GammaGraph& dst,
                         const std::vector<std::pair<int, EdgePath>>& overrides,
                         const std::vector<int>* vertex_map = nullptr) {
    std::vector<int> vmap;
    if (vertex_map) {
        vmap = *vertex_map;
    } else {
        vmap.resize(src.graph()->vertex_count());
        for (int v = 0; v < src.graph()->vertex_count(); ++v) vmap[v] = v;
    }
    std::vector<EdgePath> imgs;
    for (int e = 0; e < src.graph()->edge_count(); ++e)
        imgs.push_back(EdgePath::of(*dst.graph(), {forward_half(e)}));
    for (const auto& [e, p] : overrides) imgs[e] = p;
    return Morphism(src.graph(), dst.graph(), std::move(vmap), std::move(imgs));
}

HalfEdge fwd_a(const GammaGraph& g, int i) { return forward_half(g.a_edge(i)); }
HalfEdge fwd_b(const GammaGraph& g, int i) { return forward_half(g.b_edge(i)); }

}  // namespace

ElementaryMaps elementary_maps(const ConstructionParams& params) {
    params.validate();
    int n = params.n;
    ElementaryMaps out;
    auto& st = out.stations;

    // Stations in application order: Gamma_{a_0}, then for i = 1..n-3 the
    // block Gamma_{b_i}, Gamma_{b_i}, Gamma_{a_i}, Gamma_{a_i}, ending with
    // rho back to Gamma_{a_0}.
    st.push_back(GammaGraph(n, forward_half(0)));  // Gamma_{a_0}
    for (int i = 1; i <= n - 3; ++i) {
        GammaGraph gb(n, fwd_b(st[0], i));
        GammaGraph ga(n, fwd_a(st[0], i));
        st.push_back(gb);  // after R_{a_{i-1}}
        st.push_back(gb);  // after L_{b_i}
        st.push_back(ga);  // after R_{b_i}
        st.push_back(ga);  // after L_{a_i}
    }
    st.push_back(GammaGraph(n, forward_half(0)));  // after rho

    auto alpha = [&](int i) { return params.alphas.at(i - 1); };
    auto beta = [&](int i) { return params.betas.at(i - 1); };

    std::size_t pos = 0;
    for (int i = 1; i <= n - 3; ++i) {
        {  // R_{a_{i-1}} : Gamma_{a_{i-1}} -> Gamma_{b_i},  c -> a_{i-1} c ~a_{i-1}
            const GammaGraph& s = st[pos];
            const GammaGraph& t = st[pos + 1];
            PathBuilder pb{t, {}};
            pb.a(i - 1).c().A(i - 1);
            out.maps.push_back(map_with_images(s, t, {{s.c_edge(), pb.done()}}));
            out.names.push_back("R_a" + std::to_string(i - 1));
            ++pos;
        }
        {  // L_{b_i} : Gamma_{b_i} -> Gamma_{b_i},  b_i -> c ~a_{i-1} b_{i-1}^beta a_{i-1} b_i
            const GammaGraph& s = st[pos];
            const GammaGraph& t = st[pos + 1];
            PathBuilder pb{t, {}};
            pb.c().A(i - 1).power({fwd_b(t, i - 1)}, beta(i)).a(i - 1).b(i);
            out.maps.push_back(map_with_images(s, t, {{s.b_edge(i), pb.done()}}));
            out.names.push_back("L_b" + std::to_string(i));
            ++pos;
        }
        {  // R_{b_i} : Gamma_{b_i} -> Gamma_{a_i},  c -> b_i^2 c ~b_i
            const GammaGraph& s = st[pos];
            const GammaGraph& t = st[pos + 1];
            PathBuilder pb{t, {}};
            pb.power({fwd_b(t, i)}, Int(2)).c().B(i);
            out.maps.push_back(map_with_images(s, t, {{s.c_edge(), pb.done()}}));
            out.names.push_back("R_b" + std::to_string(i));
            ++pos;
        }
        {  // L_{a_i} : Gamma_{a_i} -> Gamma_{a_i},
           //   a_i -> c (~a_{i-1} b_{i-1} a_{i-1} b_i)^alpha a_i
            const GammaGraph& s = st[pos];
            const GammaGraph& t = st[pos + 1];
            std::vector<HalfEdge> unit{reversed(fwd_a(t, i - 1)), fwd_b(t, i - 1), fwd_a(t, i - 1),
                                       fwd_b(t, i)};
            PathBuilder pb{t, {}};
            pb.c().power(unit, alpha(i)).a(i);
            out.maps.push_back(map_with_images(s, t, {{s.a_edge(i), pb.done()}}));
            out.names.push_back("L_a" + std::to_string(i));
            ++pos;
        }
    }
    {  // rho : Gamma_{a_{n-3}} -> Gamma_{a_0}, indices shifted up by one mod n-2
        const GammaGraph& s = st[pos];
        const GammaGraph& t = st[pos + 1];
        int base = n - 2;
        std::vector<int> vmap(base);
        for (int v = 0; v < base; ++v) vmap[v] = (v + 1) % base;
        std::vector<std::pair<int, EdgePath>> overrides;
        for (int i = 0; i < base; ++i) {
            overrides.push_back({s.a_edge(i), EdgePath::of(*t.graph(), {fwd_a(t, i + 1)})});
            overrides.push_back({s.b_edge(i), EdgePath::of(*t.graph(), {fwd_b(t, i + 1)})});
        }
        out.maps.push_back(map_with_images(s, t, overrides, &vmap));
        out.names.push_back("rho");
    }
    return out;
}

Morphism big_F(const GammaGraph& gamma, const ConstructionParams& params) {
    ElementaryMaps em = elementary_maps(params);
    Morphism acc = em.maps.front();
    for (std::size_t k = 1; k < em.maps.size(); ++k) acc = compose(acc, em.maps[k]);
    // Re-seat the composite on the caller's Gamma_{a_0} object so repeated
    // calls compose with each other.
    const MarkedGraph& g = *gamma.graph();
    std::vector<int> vmap(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) vmap[v] = acc.map_vertex(v);
    std::vector<EdgePath> imgs;
    for (int e = 0; e < g.edge_count(); ++e) {
        std::vector<EdgePath::Block> blocks = acc.forward_image(e).blocks();
        imgs.push_back(EdgePath::of_blocks(g, std::move(blocks)));
    }
    return Morphism(gamma.graph(), gamma.graph(), std::move(vmap), std::move(imgs));
}

std::vector<int> folding_edge_order(const GammaGraph& gamma) {
    std::vector<int> order;
    int n = gamma.n();
    for (int i = 1; i <= n - 3; ++i) order.push_back(gamma.b_edge(i));
    for (int i = 1; i <= n - 3; ++i) order.push_back(gamma.a_edge(i));
    order.push_back(gamma.a_edge(0));
    order.push_back(gamma.b_edge(0));
    order.push_back(gamma.c_edge());
    return order;
}

std::vector<int> unfolding_edge_order(const GammaGraph& gamma) {
    std::vector<int> order;
    int n = gamma.n();
    for (int i = n - 3; i >= 1; --i) order.push_back(gamma.a_edge(i));
    for (int i = n - 3; i >= 1; --i) order.push_back(gamma.b_edge(i));
    order.push_back(gamma.a_edge(0));
    order.push_back(gamma.b_edge(0));
    order.push_back(gamma.c_edge());
    return order;
}

std::vector<std::string> edge_order_labels(const GammaGraph& gamma, Direction dir) {
    auto order = dir == Direction::Folding ? folding_edge_order(gamma) : unfolding_edge_order(gamma);
    std::vector<std::string> labels;
    for (int e : order) labels.push_back(gamma.graph()->label(e));
    return labels;
}

namespace {

// Symbolic edge descriptor for the closed-form entries.
struct Sym {
    enum Kind { A, B, C } kind;
    int idx;  // unused for C
};

Int closed_entry(const ConstructionParams& p, Sym row, Sym col) {
    int n = p.n;
    auto alpha = [&](int i) { return p.alphas.at(i - 1); };
    auto beta = [&](int i) { return p.betas.at(i - 1); };
    // Column a_k, 1 <= k <= n-4.
    if (col.kind == Sym::A && col.idx >= 1 && col.idx <= n - 4) {
        int k = col.idx;
        if (row.kind == Sym::B) {
            if (row.idx == k || row.idx == k + 1) return alpha(k);
            if (row.idx == 0 || row.idx >= k + 2) return 3;
            return 0;
        }
        if (row.kind == Sym::A) {
            if (row.idx == k) return 2 * alpha(k);
            if (row.idx == k + 1) return 3;
            if (row.idx >= k + 2) return 2;
            return 0;  // a_0 and a_i with i < k
        }
        return 1;  // c row
    }
    // Column a_{n-3}.
    if (col.kind == Sym::A && col.idx == n - 3) {
        if (row.kind == Sym::B) return row.idx == n - 3 || row.idx == 0 ? alpha(n - 3) : Int(0);
        if (row.kind == Sym::A) {
            if (row.idx == n - 3) return 2 * alpha(n - 3);
            return row.idx == 0 ? 1 : 0;
        }
        return 1;  // c row
    }
    // Column a_0.
    if (col.kind == Sym::A) {
        return (row.kind == Sym::A && row.idx == 1) ? 1 : 0;
    }
    // Column b_k, 1 <= k <= n-4.
    if (col.kind == Sym::B && col.idx >= 1 && col.idx <= n - 4) {
        int k = col.idx;
        if (row.kind == Sym::B) {
            if (row.idx == k) return beta(k);
            if (row.idx == k + 1) return 4;
            if (row.idx == 0 || row.idx >= k + 2) return 3;
            return 0;
        }
        if (row.kind == Sym::A) return (row.idx >= k && row.idx <= n - 3) ? 2 : 0;
        return 1;  // c row
    }
    // Column b_{n-3}.
    if (col.kind == Sym::B && col.idx == n - 3) {
        if (row.kind == Sym::B) {
            if (row.idx == n - 3) return beta(n - 3);
            return row.idx == 0 ? 4 : 0;
        }
        if (row.kind == Sym::A) return row.idx == n - 3 ? 2 : 0;
        return 1;  // c row
    }
    // Column b_0.
    if (col.kind == Sym::B) {
        return (row.kind == Sym::B && row.idx == 1) ? 1 : 0;
    }
    // Column c.
    if (row.kind == Sym::B) return (row.idx == 0 || row.idx >= 2) ? 3 : 0;
    if (row.kind == Sym::A) return row.idx >= 1 ? 2 : 0;
    return 1;  // (c, c)
}

std::vector<Sym> order_symbols(int n, Direction dir) {
    std::vector<Sym> syms;
    if (dir == Direction::Folding) {
        for (int i = 1; i <= n - 3; ++i) syms.push_back({Sym::B, i});
        for (int i = 1; i <= n - 3; ++i) syms.push_back({Sym::A, i});
    } else {
        for (int i = n - 3; i >= 1; --i) syms.push_back({Sym::A, i});
        for (int i = n - 3; i >= 1; --i) syms.push_back({Sym::B, i});
    }
    syms.push_back({Sym::A, 0});
    syms.push_back({Sym::B, 0});
    syms.push_back({Sym::C, 0});
    return syms;
}

}  // namespace

ExactMatrix closed_form_M(const ConstructionParams& params, Direction dir) {
    params.validate();
    auto syms = order_symbols(params.n, dir);
    std::size_t d = syms.size();
    ExactMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m.at(i, j) = closed_entry(params, syms[i], syms[j]);
    return m;
}

TrainTrack pair_train_track(const GammaGraph& gamma, HalfEdge e1, HalfEdge e2) {
    const MarkedGraph& g = *gamma.graph();
    HalfEdge c_fwd = forward_half(gamma.c_edge());
    bool touches_c = edge_of(e1) == gamma.c_edge() || edge_of(e2) == gamma.c_edge();
    if (touches_c) {
        std::set<HalfEdge> gate{e1, e2, c_fwd, reversed(c_fwd)};
        return TrainTrack::with_gates(g, {std::vector<HalfEdge>(gate.begin(), gate.end())});
    }
    return TrainTrack::with_gates(g, {{e1, e2}, {c_fwd, reversed(c_fwd)}});
}

InverseConstruction inverse_construction(const ConstructionParams& params) {
    params.validate();
    int n = params.n;
    InverseConstruction out{build_gamma(n), {}, {}, {}, {}, {}};

    // Stations in application order, starting and ending at Gamma_{~b_0, a_0}.
    std::vector<GammaGraph> st;
    std::vector<TrainTrack> tags;
    GammaGraph g0(n, forward_half(0));
    st.push_back(g0);
    tags.push_back(pair_train_track(g0, reversed(fwd_b(g0, 0)), fwd_a(g0, 0)));
    // after rho^{-1}: Gamma_{~b_{n-3}, a_{n-3}}
    {
        GammaGraph g(n, fwd_a(g0, n - 3));
        st.push_back(g);
        tags.push_back(pair_train_track(g, reversed(fwd_b(g, n - 3)), fwd_a(g, n - 3)));
    }
    for (int i = n - 3; i >= 1; --i) {
        GammaGraph gi(n, fwd_a(g0, i));     // c at v_i
        GammaGraph gprev(n, fwd_a(g0, i - 1));  // c at v_{i-1}
        HalfEdge c_i = forward_half(gi.c_edge());
        // after L_{a_i}^{-1}: Gamma_{~b_i, c}
        st.push_back(gi);
        tags.push_back(pair_train_track(gi, reversed(fwd_b(gi, i)), c_i));
        // after R_{b_i}^{-1}: Gamma_{~a_{i-1}, b_i}
        st.push_back(gi);
        tags.push_back(pair_train_track(gi, reversed(fwd_a(gi, i - 1)), fwd_b(gi, i)));
        // after L_{b_i}^{-1}: Gamma_{~a_{i-1}, c}
        st.push_back(gi);
        tags.push_back(pair_train_track(gi, reversed(fwd_a(gi, i - 1)), c_i));
        // after R_{a_{i-1}}^{-1}: Gamma_{~b_{i-1}, a_{i-1}}
        st.push_back(gprev);
        tags.push_back(pair_train_track(gprev, reversed(fwd_b(gprev, i - 1)), fwd_a(gprev, i - 1)));
    }

    auto alpha = [&](int i) { return params.alphas.at(i - 1); };
    auto beta = [&](int i) { return params.betas.at(i - 1); };

    std::size_t pos = 0;
    {  // rho^{-1}: indices shifted down by one mod n-2
        const GammaGraph& s = st[pos];
        const GammaGraph& t = st[pos + 1];
        int base = n - 2;
        std::vector<int> vmap(base);
        for (int v = 0; v < base; ++v) vmap[v] = (v + base - 1) % base;
        std::vector<std::pair<int, EdgePath>> overrides;
        for (int i = 0; i < base; ++i) {
            overrides.push_back({s.a_edge(i), EdgePath::of(*t.graph(), {fwd_a(t, i - 1)})});
            overrides.push_back({s.b_edge(i), EdgePath::of(*t.graph(), {fwd_b(t, i - 1)})});
        }
        out.maps.push_back(map_with_images(s, t, overrides, &vmap));
        out.names.push_back("rho^-1");
        ++pos;
    }
    for (int i = n - 3; i >= 1; --i) {
        {  // L_{a_i}^{-1}: a_i -> (~b_i ~a_{i-1} ~b_{i-1} a_{i-1})^alpha ~c a_i
            const GammaGraph& s = st[pos];
            const GammaGraph& t = st[pos + 1];
            std::vector<HalfEdge> unit{reversed(fwd_b(t, i)), reversed(fwd_a(t, i - 1)),
                                       reversed(fwd_b(t, i - 1)), fwd_a(t, i - 1)};
            PathBuilder pb{t, {}};
            pb.power(unit, alpha(i)).C().a(i);
            out.maps.push_back(map_with_images(s, t, {{s.a_edge(i), pb.done()}}));
            out.names.push_back("L_a" + std::to_string(i) + "^-1");
            ++pos;
        }
        {  // R_{b_i}^{-1}: c -> ~b_i^2 c b_i
            const GammaGraph& s = st[pos];
            const GammaGraph& t = st[pos + 1];
            PathBuilder pb{t, {}};
            pb.power({reversed(fwd_b(t, i))}, Int(2)).c().b(i);
            out.maps.push_back(map_with_images(s, t, {{s.c_edge(), pb.done()}}));
            out.names.push_back("R_b" + std::to_string(i) + "^-1");
            ++pos;
        }
        {  // L_{b_i}^{-1}: b_i -> ~a_{i-1} ~b_{i-1}^beta a_{i-1} ~c b_i
            const GammaGraph& s = st[pos];
            const GammaGraph& t = st[pos + 1];
            PathBuilder pb{t, {}};
            pb.A(i - 1).power({reversed(fwd_b(t, i - 1))}, beta(i)).a(i - 1).C().b(i);
            out.maps.push_back(map_with_images(s, t, {{s.b_edge(i), pb.done()}}));
            out.names.push_back("L_b" + std::to_string(i) + "^-1");
            ++pos;
        }
        {  // R_{a_{i-1}}^{-1}: c -> ~a_{i-1} c a_{i-1}
            const GammaGraph& s = st[pos];
            const GammaGraph& t = st[pos + 1];
            PathBuilder pb{t, {}};
            pb.A(i - 1).c().a(i - 1);
            out.maps.push_back(map_with_images(s, t, {{s.c_edge(), pb.done()}}));
            out.names.push_back("R_a" + std::to_string(i - 1) + "^-1");
            ++pos;
        }
    }

    // The elementary inverses compose with interior cancellation (for example
    // L_b^-1 applied after L_a^-1 cancels an a-pair inside the powered unit),
    // so the composite is assembled with tightening.
    Morphism acc = out.maps.front();
    for (std::size_t k = 1; k < out.maps.size(); ++k) acc = compose_tightened(acc, out.maps[k]);
    const MarkedGraph& g = *out.base.graph();
    std::vector<int> vmap(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) vmap[v] = acc.map_vertex(v);
    std::vector<EdgePath> imgs;
    for (int e = 0; e < g.edge_count(); ++e)
        imgs.push_back(EdgePath::of_blocks(g, acc.forward_image(e).blocks()));
    out.f_inverse = Morphism(out.base.graph(), out.base.graph(), std::move(vmap), std::move(imgs));
    out.source_structure = pair_train_track(out.base, reversed(fwd_b(out.base, 0)), fwd_a(out.base, 0));
    out.station_tags = tags;
    return out;
}

}  // namespace outertrack
