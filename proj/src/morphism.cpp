#include "outertrack/morphism.hpp"

#include <algorithm>
#include <map>

namespace outertrack {

Morphism::Morphism(std::shared_ptr<const MarkedGraph> source,
                   std::shared_ptr<const MarkedGraph> target, std::vector<int> vertex_map,
                   std::vector<EdgePath> edge_images)
    : source_(std::move(source)),
      target_(std::move(target)),
      vertex_map_(std::move(vertex_map)),
      edge_images_(std::move(edge_images)) {
    if (static_cast<int>(vertex_map_.size()) != source_->vertex_count())
        throw std::invalid_argument("vertex map size mismatch");
    if (static_cast<int>(edge_images_.size()) != source_->edge_count())
        throw std::invalid_argument("edge image count mismatch");
    for (int v : vertex_map_)
        if (v < 0 || v >= target_->vertex_count()) throw std::invalid_argument("vertex map out of range");
    for (int e = 0; e < source_->edge_count(); ++e) {
        const EdgePath& img = edge_images_[e];
        img.validate(*target_);
        HalfEdge h = forward_half(e);
        if (img.initial_vertex(*target_) != vertex_map_[source_->init_vertex(h)] ||
            img.terminal_vertex(*target_) != vertex_map_[source_->term_vertex(h)])
            throw std::invalid_argument("edge image endpoints do not match vertex map (edge " +
                                        source_->label(e) + ")");
    }
}

Morphism Morphism::identity(std::shared_ptr<const MarkedGraph> g) {
    std::vector<int> vmap(g->vertex_count());
    for (int v = 0; v < g->vertex_count(); ++v) vmap[v] = v;
    std::vector<EdgePath> imgs;
    for (int e = 0; e < g->edge_count(); ++e) imgs.push_back(EdgePath::of(*g, {forward_half(e)}));
    auto tgt = g;
    return Morphism(std::move(g), std::move(tgt), std::move(vmap), std::move(imgs));
}

EdgePath Morphism::image(HalfEdge h) const {
    const EdgePath& fwd = edge_images_.at(edge_of(h));
    return is_reverse(h) ? fwd.reverse() : fwd;
}

HalfEdge Morphism::direction_image(HalfEdge h) const {
    const EdgePath& fwd = edge_images_.at(edge_of(h));
    return is_reverse(h) ? reversed(fwd.last_half(*target_)) : fwd.first_half(*target_);
}

EdgePath Morphism::apply(const EdgePath& p) const {
    std::vector<EdgePath::Block> out;
    auto append_checked = [&](const EdgePath::Block& b) {
        if (!out.empty()) {
            HalfEdge prev = out.back().word.back();
            HalfEdge next = b.word.front();
            if (target_->term_vertex(prev) != target_->init_vertex(next))
                throw std::invalid_argument("apply: image junction not incident");
            if (next == reversed(prev))
                throw BacktrackError("apply: cancellation at image junction " +
                                     target_->half_edge_label(prev));
        }
        if (b.exp == 1 && !out.empty() && out.back().exp == 1)
            out.back().word.insert(out.back().word.end(), b.word.begin(), b.word.end());
        else
            out.push_back(b);
    };
    auto image_of_word = [&](const std::vector<HalfEdge>& word) {
        // Image of an exponent-1 word as a block list.
        std::vector<EdgePath::Block> acc;
        for (HalfEdge h : word) {
            EdgePath img = image(h);
            for (const EdgePath::Block& b : img.blocks()) {
                if (!acc.empty()) {
                    HalfEdge prev = acc.back().word.back();
                    HalfEdge next = b.word.front();
                    if (next == reversed(prev))
                        throw BacktrackError("apply: cancellation inside substituted word at " +
                                             target_->half_edge_label(prev));
                }
                if (b.exp == 1 && !acc.empty() && acc.back().exp == 1)
                    acc.back().word.insert(acc.back().word.end(), b.word.begin(), b.word.end());
                else
                    acc.push_back(b);
            }
        }
        return acc;
    };
    for (const EdgePath::Block& block : p.blocks()) {
        std::vector<EdgePath::Block> img = image_of_word(block.word);
        if (block.exp == 1) {
            for (auto& b : img) append_checked(b);
        } else if (img.size() == 1) {
            EdgePath::Block b = img[0];
            b.exp *= block.exp;
            append_checked(b);
        } else {
            bool pure = std::all_of(img.begin(), img.end(),
                                    [](const EdgePath::Block& b) { return b.exp == 1; });
            if (pure) {
                EdgePath::Block merged;
                merged.exp = block.exp;
                for (const auto& b : img)
                    merged.word.insert(merged.word.end(), b.word.begin(), b.word.end());
                append_checked(merged);
            } else if (block.exp <= (1 << 16)) {
                // interior powers under a small outer exponent: unroll
                long reps = static_cast<long>(block.exp);
                for (long r = 0; r < reps; ++r)
                    for (const auto& b : img) append_checked(b);
            } else {
                throw std::logic_error(
                    "apply: powered block with huge exponent maps to a path with interior powers");
            }
        }
    }
    EdgePath result = EdgePath::of_blocks(*target_, std::move(out));
    return result;
}

bool Morphism::is_identity() const {
    if (source_.get() != target_.get()) return false;
    for (int v = 0; v < source_->vertex_count(); ++v)
        if (vertex_map_[v] != v) return false;
    for (int e = 0; e < source_->edge_count(); ++e) {
        const auto blocks = edge_images_[e].canonical_blocks();
        if (blocks.size() != 1 || blocks[0].exp != 1 || blocks[0].word != std::vector<HalfEdge>{forward_half(e)})
            return false;
    }
    return true;
}

Morphism compose(const Morphism& f, const Morphism& g) {
    if (&f.target() != &g.source() && f.target() != g.source())
        throw std::invalid_argument("compose: target of f is not source of g");
    std::vector<int> vmap(f.source().vertex_count());
    for (int v = 0; v < f.source().vertex_count(); ++v) vmap[v] = g.map_vertex(f.map_vertex(v));
    std::vector<EdgePath> imgs;
    imgs.reserve(f.source().edge_count());
    for (int e = 0; e < f.source().edge_count(); ++e) imgs.push_back(g.apply(f.forward_image(e)));
    return Morphism(f.source_ptr(), g.target_ptr(), std::move(vmap), std::move(imgs));
}

Morphism compose_tightened(const Morphism& f, const Morphism& g, std::size_t max_len) {
    if (&f.target() != &g.source() && f.target() != g.source())
        throw std::invalid_argument("compose: target of f is not source of g");
    std::vector<int> vmap(f.source().vertex_count());
    for (int v = 0; v < f.source().vertex_count(); ++v) vmap[v] = g.map_vertex(f.map_vertex(v));
    std::vector<EdgePath> imgs;
    for (int e = 0; e < f.source().edge_count(); ++e) {
        std::vector<HalfEdge> word;
        for (HalfEdge h : f.forward_image(e).expand(max_len)) {
            std::vector<HalfEdge> piece = g.image(h).expand(max_len);
            word.insert(word.end(), piece.begin(), piece.end());
            if (word.size() > max_len) throw std::length_error("compose_tightened: image too long");
        }
        word = tighten(word);
        if (word.empty())
            throw std::invalid_argument("compose_tightened: an edge image reduced to a point");
        imgs.push_back(EdgePath::of(g.target(), word));
    }
    return Morphism(f.source_ptr(), g.target_ptr(), std::move(vmap), std::move(imgs));
}

ExactMatrix transition_matrix(const Morphism& f) {
    std::vector<int> rows(f.target().edge_count()), cols(f.source().edge_count());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
    for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = static_cast<int>(j);
    return transition_matrix(f, rows, cols);
}

ExactMatrix transition_matrix(const Morphism& f, const std::vector<int>& row_edges,
                              const std::vector<int>& col_edges) {
    ExactMatrix m(row_edges.size(), col_edges.size());
    for (std::size_t j = 0; j < col_edges.size(); ++j) {
        const EdgePath& img = f.forward_image(col_edges[j]);
        for (std::size_t i = 0; i < row_edges.size(); ++i) m.at(i, j) = img.crossings(row_edges[i]);
    }
    return m;
}

ExactMatrix abelianized_matrix(const Morphism& f) {
    ExactMatrix m(f.target().edge_count(), f.source().edge_count());
    for (int e = 0; e < f.source().edge_count(); ++e)
        for (const EdgePath::Block& b : f.forward_image(e).blocks())
            for (HalfEdge h : b.word) {
                // signed counts can go negative; ExactMatrix holds any Int
                m.at(edge_of(h), e) += is_reverse(h) ? -b.exp : b.exp;
            }
    return m;
}

FoldResult fold_once(const std::shared_ptr<const MarkedGraph>& g, HalfEdge d1, HalfEdge d2) {
    const MarkedGraph& G = *g;
    if (d1 == d2) throw InvalidFold("fold_once: directions coincide");
    if (d1 == reversed(d2)) throw InvalidFold("fold_once: directions are inverse to each other");
    if (G.init_vertex(d1) != G.init_vertex(d2))
        throw InvalidFold("fold_once: directions have different initial vertices");
    int t1 = G.term_vertex(d1), t2 = G.term_vertex(d2);
    FoldType type = (t1 == t2) ? FoldType::II : FoldType::I;

    // Identify term(d2) with term(d1) and edge(d2) with edge(d1).
    std::vector<int> vquot(G.vertex_count());
    for (int v = 0; v < G.vertex_count(); ++v) vquot[v] = v;
    if (type == FoldType::I) vquot[t2] = t1;
    // compact vertex ids
    std::vector<int> vnew(G.vertex_count(), -1);
    int vcount = 0;
    for (int v = 0; v < G.vertex_count(); ++v)
        if (vquot[v] == v) vnew[v] = vcount++;
    for (int v = 0; v < G.vertex_count(); ++v)
        if (vnew[v] == -1) vnew[v] = vnew[vquot[v]];

    int removed = edge_of(d2), kept = edge_of(d1);
    std::vector<MarkedGraph::Edge> edges;
    std::vector<int> enew(G.edge_count(), -1);
    for (int e = 0; e < G.edge_count(); ++e) {
        if (e == removed) continue;
        enew[e] = static_cast<int>(edges.size());
        const auto& ed = G.edge(e);
        edges.push_back({vnew[ed.init], vnew[ed.term], ed.label});
    }
    auto quotient_graph = std::make_shared<MarkedGraph>(vcount, std::move(edges));

    std::vector<int> vmap(G.vertex_count());
    for (int v = 0; v < G.vertex_count(); ++v) vmap[v] = vnew[v];
    std::vector<EdgePath> imgs;
    for (int e = 0; e < G.edge_count(); ++e) {
        HalfEdge target_half;
        if (e == removed) {
            // d2 is glued onto d1: the forward half of `removed` maps to the
            // image of d1 oriented to agree with d2's orientation.
            HalfEdge image_of_d2 = forward_half(enew[kept]);
            if (is_reverse(d1)) image_of_d2 = reversed(image_of_d2);
            target_half = is_reverse(d2) ? reversed(image_of_d2) : image_of_d2;
        } else {
            target_half = forward_half(enew[e]);
        }
        imgs.push_back(EdgePath::of(*quotient_graph, {target_half}));
    }
    Morphism q(g, quotient_graph, std::move(vmap), std::move(imgs));
    return {quotient_graph, std::move(q), type};
}

namespace {

// Subdivide every edge whose image is longer than one half-edge, tagging the
// interior vertices so un-subdivision is deterministic.
std::pair<std::shared_ptr<const MarkedGraph>, Morphism> subdivide_for(const Morphism& f,
                                                                      std::vector<EdgePath>& letter_images) {
    const MarkedGraph& S = f.source();
    std::vector<MarkedGraph::Edge> edges;
    std::vector<std::vector<HalfEdge>> chains(S.edge_count());
    int vcount = S.vertex_count();
    std::vector<std::vector<HalfEdge>> images_expanded(S.edge_count());
    for (int e = 0; e < S.edge_count(); ++e) images_expanded[e] = f.forward_image(e).expand();
    for (int e = 0; e < S.edge_count(); ++e) {
        std::size_t len = images_expanded[e].size();
        int prev = S.edge(e).init;
        for (std::size_t k = 0; k < len; ++k) {
            int next = (k + 1 == len) ? S.edge(e).term : vcount++;
            std::string label = S.label(e);
            if (len > 1) label += ".s" + std::to_string(k);
            int id = static_cast<int>(edges.size());
            edges.push_back({prev, next, label});
            chains[e].push_back(forward_half(id));
            prev = next;
        }
    }
    auto sub = std::make_shared<MarkedGraph>(vcount, std::move(edges));
    std::vector<int> vmap(S.vertex_count());
    for (int v = 0; v < S.vertex_count(); ++v) vmap[v] = v;
    std::vector<EdgePath> imgs;
    for (int e = 0; e < S.edge_count(); ++e) imgs.push_back(EdgePath::of(*sub, chains[e]));
    Morphism subdivision(f.source_ptr(), sub, std::move(vmap), std::move(imgs));
    // single-letter images of the subdivided edges
    letter_images.clear();
    for (int e = 0; e < S.edge_count(); ++e)
        for (HalfEdge h : images_expanded[e]) letter_images.push_back(EdgePath::of(f.target(), {h}));
    return {sub, std::move(subdivision)};
}

}  // namespace

FoldDecomposition fold_decomposition(const Morphism& f) {
    if (f.source().rank() != f.target().rank())
        throw NotHomotopyEquivalence("fold_decomposition: ranks differ (" +
                                     std::to_string(f.source().rank()) + " vs " +
                                     std::to_string(f.target().rank()) + ")");
    FoldDecomposition out;
    std::vector<EdgePath> letter_images;
    auto [sub, subdivision] = subdivide_for(f, letter_images);
    out.subdivision = subdivision;

    // Residual morphism from the current folded graph to the target.
    auto current = sub;
    std::vector<int> vmap(sub->vertex_count());
    {
        // vertex images under f, extended over subdivision vertices
        const MarkedGraph& S = f.source();
        for (int v = 0; v < S.vertex_count(); ++v) vmap[v] = f.map_vertex(v);
        int vnext = S.vertex_count();
        for (int e = 0; e < S.edge_count(); ++e) {
            auto word = f.forward_image(e).expand();
            for (std::size_t k = 0; k + 1 < word.size(); ++k)
                vmap[vnext++] = f.target().term_vertex(word[k]);
        }
    }
    Morphism residual(current, f.target_ptr(), vmap, letter_images);

    while (true) {
        // find two distinct directions at a vertex with the same image letter
        const MarkedGraph& G = *current;
        HalfEdge d1 = -1, d2 = -1;
        for (int v = 0; v < G.vertex_count() && d1 == -1; ++v) {
            const auto& dirs = G.directions_at(v);
            for (std::size_t i = 0; i < dirs.size() && d1 == -1; ++i)
                for (std::size_t j = i + 1; j < dirs.size(); ++j) {
                    if (dirs[j] == reversed(dirs[i])) continue;
                    if (residual.direction_image(dirs[i]) == residual.direction_image(dirs[j])) {
                        d1 = dirs[i];
                        d2 = dirs[j];
                        break;
                    }
                }
        }
        if (d1 == -1) break;
        FoldResult fr = fold_once(current, d1, d2);
        // push the residual through the fold: images of the quotient are the
        // images of any preimage representative
        const MarkedGraph& Q = *fr.graph;
        std::vector<int> qvmap(Q.vertex_count(), -1);
        for (int v = 0; v < G.vertex_count(); ++v) qvmap[fr.quotient.map_vertex(v)] = residual.map_vertex(v);
        std::vector<EdgePath> qimgs(Q.edge_count(), EdgePath());
        std::vector<char> have(Q.edge_count(), 0);
        for (int e = 0; e < G.edge_count(); ++e) {
            EdgePath img = fr.quotient.forward_image(e);
            int qe = edge_of(img.first_half(Q));
            if (have[qe]) continue;
            have[qe] = 1;
            EdgePath r = residual.forward_image(e);
            qimgs[qe] = is_reverse(img.first_half(Q)) ? r.reverse() : r;
        }
        residual = Morphism(fr.graph, f.target_ptr(), std::move(qvmap), std::move(qimgs));
        out.folds.push_back(std::move(fr));
        current = out.folds.back().graph;
    }

    // residual must now be an isomorphism when f was a homotopy equivalence
    const MarkedGraph& G = *current;
    if (G.edge_count() != f.target().edge_count() || G.vertex_count() != f.target().vertex_count())
        throw NotHomotopyEquivalence("fold_decomposition: residual is not an isomorphism");
    out.terminal = residual;
    return out;
}

Morphism recompose(const FoldDecomposition& d) {
    Morphism acc = d.subdivision;
    for (const FoldResult& fr : d.folds) acc = compose(acc, fr.quotient);
    return compose(acc, d.terminal);
}

TrainTrack induced_train_track(const Morphism& f) {
    const MarkedGraph& G = f.source();
    std::vector<std::vector<HalfEdge>> groups;
    for (int v = 0; v < G.vertex_count(); ++v) {
        std::map<HalfEdge, std::vector<HalfEdge>> by_image;
        for (HalfEdge d : G.directions_at(v)) by_image[f.direction_image(d)].push_back(d);
        for (auto& [img, group] : by_image)
            if (group.size() > 1) groups.push_back(group);
    }
    return TrainTrack::with_gates(G, groups);
}

bool is_legal_path(const EdgePath& p, const MarkedGraph& g, const TrainTrack& tt) {
    if (!p.is_reduced(g)) return false;
    auto legal_junction = [&](HalfEdge h1, HalfEdge h2) {
        return tt.legal_turn(reversed(h1), h2);
    };
    const auto& blocks = p.blocks();
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i + 1 < b.word.size(); ++i)
            if (!legal_junction(b.word[i], b.word[i + 1])) return false;
        if (b.exp > 1 && !legal_junction(b.word.back(), b.word.front())) return false;
    }
    for (std::size_t i = 0; i + 1 < blocks.size(); ++i)
        if (!legal_junction(blocks[i].word.back(), blocks[i + 1].word.front())) return false;
    return true;
}

bool is_gate_map(const Morphism& f, const TrainTrack& source_tt, const TrainTrack& target_tt) {
    const MarkedGraph& G = f.source();
    for (int v = 0; v < G.vertex_count(); ++v) {
        const auto& dirs = G.directions_at(v);
        for (std::size_t i = 0; i < dirs.size(); ++i)
            for (std::size_t j = i + 1; j < dirs.size(); ++j) {
                HalfEdge a = f.direction_image(dirs[i]), b = f.direction_image(dirs[j]);
                if (source_tt.legal_turn(dirs[i], dirs[j])) {
                    if (a == b || !target_tt.legal_turn(a, b)) return false;
                } else {
                    if (a != b && target_tt.legal_turn(a, b)) return false;
                }
            }
    }
    return true;
}

}  // namespace outertrack
