#ifndef OUTERTRACK_MEASURE_HPP
#define OUTERTRACK_MEASURE_HPP

#include "outertrack/sequence.hpp"

namespace outertrack {

struct InsufficientDepth : std::runtime_error {
    explicit InsufficientDepth(const std::string& what) : std::runtime_error(what) {}
};

// Per-edge exact rationals; length vectors pull back along transposed
// transition matrices, current vectors push forward along the matrices.
struct MeasureVector {
    enum class Kind { Length, Current } kind;
    std::vector<Rat> values;
};

// Measures used to normalize the run's matrices into affine simplex maps:
// folding pushes the all-ones frequency current forward from index 0,
// unfolding pulls the all-ones simplicial length back from index 0 (time 0).
std::vector<MeasureVector> normalization_measures(const SequenceRun& run);

// diag(lhs) * base * diag(1/rhs) with exact column sums 1.
struct NormalizedTransition {
    std::size_t r, s;
    RatMatrix m;  // folding: D_r (M^{r,s})^T D_s^{-1}; unfolding: D_r M^{r,s} D_r'^{-1}
};

NormalizedTransition normalized_transition(const SequenceRun& run, std::size_t r, std::size_t s);
std::vector<NormalizedTransition> build_normalized_system(const SequenceRun& run);

// Tier 1 columns of the deep product divided by their diagonal entry;
// folding reads the transposed matrix, unfolding the matrix itself.
std::vector<std::vector<Rat>> normalized_tier1_columns(const SequenceRun& run, std::size_t r,
                                                       std::size_t s, std::size_t m);

struct ErgodicBound {
    std::size_t rank;
    // Sup-norm distance between tier-1 normalized columns at successive
    // horizons, deepest last; a projective convergence witness.
    std::vector<Rat> cauchy_defects;
    bool defects_monotone;  // nonincreasing over the last three checkpoints
};

ErgodicBound ergodic_lower_bound(const SequenceRun& run, std::size_t m, std::size_t horizon);

struct DecompositionReport {
    std::vector<std::size_t> h0;                     // vanishing edges (rows below tau)
    std::vector<std::vector<std::size_t>> blocks;    // H^1..H^k support clusters
    std::vector<std::size_t> unresolved;             // ambiguous support, reported not assigned
    Rat defect;                                      // max-norm of S*S - S
    Rat tau_squared;                                 // threshold; entry kept iff entry^2 > tau^2
    std::size_t depth_r, depth_s;
    std::vector<Rat> diagonal_products;              // per-edge S_ee, the ell*mu diagonal
};

// Finite-horizon stand-in for the limiting retraction: S is the normalized
// transition across (floor(depth/2), depth). Edges whose S-row stays below
// tau fall into H^0; the rest cluster by the support pattern of their
// S-columns. tau defaults to sqrt(defect): pass tau_squared < 0 for that.
DecompositionReport approximate_retraction(const SequenceRun& run, std::size_t depth,
                                           const Rat& defect_bound, Rat tau_squared = Rat(-1));

}  // namespace outertrack

#endif
