#ifndef OUTERTRACK_MORPHISM_HPP
#define OUTERTRACK_MORPHISM_HPP

#include "outertrack/graph.hpp"
#include "outertrack/matrix.hpp"
#include "outertrack/path.hpp"

#include <memory>

namespace outertrack {

struct InvalidFold : std::runtime_error {
    explicit InvalidFold(const std::string& what) : std::runtime_error(what) {}
};

struct NotHomotopyEquivalence : std::runtime_error {
    explicit NotHomotopyEquivalence(const std::string& what) : std::runtime_error(what) {}
};

// Vertex map plus reduced edge-path images between two marked graphs. Images
// are stored for forward half-edges; the reversed image serves the reverse.
class Morphism {
public:
    Morphism() = default;
    Morphism(std::shared_ptr<const MarkedGraph> source, std::shared_ptr<const MarkedGraph> target,
             std::vector<int> vertex_map, std::vector<EdgePath> edge_images);

    static Morphism identity(std::shared_ptr<const MarkedGraph> g);

    const MarkedGraph& source() const { return *source_; }
    const MarkedGraph& target() const { return *target_; }
    std::shared_ptr<const MarkedGraph> source_ptr() const { return source_; }
    std::shared_ptr<const MarkedGraph> target_ptr() const { return target_; }

    int map_vertex(int v) const { return vertex_map_.at(v); }
    const std::vector<int>& vertex_map() const { return vertex_map_; }

    // Image of a directed half-edge, oriented along it.
    EdgePath image(HalfEdge h) const;
    const EdgePath& forward_image(int edge) const { return edge_images_.at(edge); }

    // First half-edge of the image of a direction (the derivative map Df).
    HalfEdge direction_image(HalfEdge h) const;

    // Substitute edge images into a path; throws BacktrackError when a
    // junction cancels (the pair is not composable as morphisms).
    EdgePath apply(const EdgePath& p) const;

    bool is_identity() const;

private:
    std::shared_ptr<const MarkedGraph> source_;
    std::shared_ptr<const MarkedGraph> target_;
    std::vector<int> vertex_map_;
    std::vector<EdgePath> edge_images_;  // image of forward half-edge per edge
};

// g after f (source of g = target of f); edge images stay reduced or a
// BacktrackError is raised.
Morphism compose(const Morphism& f, const Morphism& g);

// Composition with free reduction at substitution seams, for chains whose
// naive substitution cancels (the inverse construction). Images are expanded,
// so exponents must stay below the length guard.
Morphism compose_tightened(const Morphism& f, const Morphism& g, std::size_t max_len = 1u << 22);

// Entry (i, j) counts how often f(e_j) crosses e'_i in either direction.
ExactMatrix transition_matrix(const Morphism& f);
// Same with rows/columns listed in the given edge orders.
ExactMatrix transition_matrix(const Morphism& f, const std::vector<int>& row_edges,
                              const std::vector<int>& col_edges);

// Signed crossing counts (+1 forward, -1 backward); the abelianized action.
ExactMatrix abelianized_matrix(const Morphism& f);

enum class FoldType { I, II };

struct FoldResult {
    std::shared_ptr<const MarkedGraph> graph;
    Morphism quotient;
    FoldType type;
};

// Quotient identifying the two directions d1, d2 out of a common vertex.
FoldResult fold_once(const std::shared_ptr<const MarkedGraph>& g, HalfEdge d1, HalfEdge d2);

struct FoldDecomposition {
    Morphism subdivision;          // source -> subdivided source
    std::vector<FoldResult> folds; // successive single folds
    Morphism terminal;             // final graph -> target, an isomorphism
};

// Stallings decomposition of a homotopy equivalence into type I folds
// (after internal subdivision).
FoldDecomposition fold_decomposition(const Morphism& f);

// Recompose subdivision, folds and terminal map into one morphism.
Morphism recompose(const FoldDecomposition& d);

// Gates on the source: directions share a gate iff their Df-images coincide.
TrainTrack induced_train_track(const Morphism& f);

bool is_legal_path(const EdgePath& p, const MarkedGraph& g, const TrainTrack& tt);

// Gate compatibility of f against chosen structures on source and target:
// legal turns must map to distinct directions forming a legal turn, and
// illegal turns must either collapse under Df or land inside one target gate
// (the turn a later map folds).
bool is_gate_map(const Morphism& f, const TrainTrack& source_tt, const TrainTrack& target_tt);

}  // namespace outertrack

#endif
