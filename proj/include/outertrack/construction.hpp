#ifndef OUTERTRACK_CONSTRUCTION_HPP
#define OUTERTRACK_CONSTRUCTION_HPP

#include "outertrack/morphism.hpp"

#include <memory>

namespace outertrack {

struct RankTooSmall : std::runtime_error {
    explicit RankTooSmall(int n)
        : std::runtime_error("construction requires rank n >= 4, got " + std::to_string(n)) {}
};

// Parameter tuple for one construction map: alphas/betas are the looper
// exponents alpha_1..alpha_{n-3}, beta_1..beta_{n-3}, all >= 1.
struct ConstructionParams {
    int n = 0;
    std::vector<Int> alphas;
    std::vector<Int> betas;

    static ConstructionParams uniform(int n, const Int& alpha, const Int& beta);
    void validate() const;
};

enum class Direction { Folding, Unfolding };

// The rank-n graph Gamma with the rein loop c based at the initial vertex of
// the given direction. Vertices v_0..v_{n-3}; edges a_i: v_i -> v_{i+1 mod n-2},
// b_i a loop at v_i, c a loop at the rein vertex. The train track has the one
// non-singleton gate from the rein position.
class GammaGraph {
public:
    GammaGraph(int n, HalfEdge rein_at);  // rein_at is a half-edge of the bare graph

    int n() const { return n_; }
    std::shared_ptr<const MarkedGraph> graph() const { return graph_; }
    const TrainTrack& train_track() const { return tt_; }

    int a_edge(int i) const { return a_[mod(i)]; }
    int b_edge(int i) const { return b_[mod(i)]; }
    int c_edge() const { return c_; }
    int rein_vertex() const { return rein_vertex_; }
    HalfEdge rein_direction() const { return rein_dir_; }  // within this graph

    int mod(int i) const { return ((i % (n_ - 2)) + (n_ - 2)) % (n_ - 2); }

private:
    int n_;
    std::shared_ptr<const MarkedGraph> graph_;
    TrainTrack tt_;
    std::vector<int> a_, b_;
    int c_;
    int rein_vertex_;
    HalfEdge rein_dir_;
};

// Gamma_{a_0}: the base tagged graph of the construction.
GammaGraph build_gamma(int n);

struct ElementaryMaps {
    // Tagged graphs along one pass of the composition, in application order:
    // Gamma_{a_0}, Gamma_{b_1}, Gamma_{b_1}, Gamma_{a_1}, ..., Gamma_{a_{n-3}}, Gamma_{a_0}.
    std::vector<GammaGraph> stations;
    // maps[k] : stations[k] -> stations[k+1], in application order:
    // R_{a_0}, L_{b_1}, R_{b_1}, L_{a_1}, R_{a_1}, L_{b_2}, ..., L_{a_{n-3}}, rho.
    std::vector<Morphism> maps;
    std::vector<std::string> names;
};

ElementaryMaps elementary_maps(const ConstructionParams& params);

// F = rho ( L_{a_{n-3}} R_{b_{n-3}} ) ... ( L_{b_1} R_{a_0} ) : Gamma_{a_0} self-map.
Morphism big_F(const GammaGraph& gamma, const ConstructionParams& params);

// Edge orderings used for certificates: folding (b_1..b_{n-3}, a_1..a_{n-3},
// a_0, b_0, c); unfolding (a_{n-3}..a_1, b_{n-3}..b_1, a_0, b_0, c).
std::vector<int> folding_edge_order(const GammaGraph& gamma);
std::vector<int> unfolding_edge_order(const GammaGraph& gamma);
std::vector<std::string> edge_order_labels(const GammaGraph& gamma, Direction dir);

// The displayed closed-form transition matrix of F in the ordering belonging
// to the direction. Independent of big_F; the construction identity test
// compares the two.
ExactMatrix closed_form_M(const ConstructionParams& params, Direction dir);

// Inverse construction: F^{-1} with the section-6 train track tags. The gate
// rule of Gamma_{e1,e2}: gates {e1,e2} and {c,~c} when neither e1 nor e2 is
// c or ~c, else the single 3-element gate {e1,e2,c or ~c}.
struct InverseConstruction {
    GammaGraph base;                      // underlying Gamma_{a_0}
    Morphism f_inverse;                   // self-map of base.graph()
    TrainTrack source_structure;          // Gamma_{~b_0, a_0} gates
    std::vector<TrainTrack> station_tags; // per elementary station
    std::vector<Morphism> maps;           // elementary inverses in application order
    std::vector<std::string> names;
};

InverseConstruction inverse_construction(const ConstructionParams& params);

// Train track on gamma's graph for the pair rule above; e1, e2 directions at a
// common vertex.
TrainTrack pair_train_track(const GammaGraph& gamma, HalfEdge e1, HalfEdge e2);

}  // namespace outertrack

#endif
