#ifndef OUTERTRACK_BOUND_HPP
#define OUTERTRACK_BOUND_HPP

#include "outertrack/morphism.hpp"
#include "outertrack/sequence.hpp"

#include <optional>

namespace outertrack {

struct OrderViolation : std::runtime_error {
    explicit OrderViolation(const std::string& what) : std::runtime_error(what) {}
};

// chi_-: sum of (rank - 1) over non-contractible connected components.
struct ComplexityValue {
    int total;
    struct Component {
        std::vector<int> edges;
        int rank;
    };
    std::vector<Component> non_contractible;
};

ComplexityValue chi_minus(const MarkedGraph& g);
ComplexityValue chi_minus(const MarkedGraph& g, const std::vector<int>& edge_subset);

// Smallest depth s with every entry of the cumulative matrix from index 0
// exceeding K; crossing counts are exactly the matrix entries. Empty when no
// depth within the run works.
std::optional<std::size_t> mixing_certificate(const SequenceRun& run, const Int& K);

// Trend-classified measure-growth order on edges. Classes are listed
// smallest first; unclassified pairs are flagged and block the audit.
struct EdgeOrder {
    std::vector<std::vector<std::size_t>> classes;  // A_1 < A_2 < ...
    std::vector<std::pair<std::size_t, std::size_t>> unclassified;
    std::vector<std::vector<Rat>> last_ratios;  // per pair diagnostics (deepest checkpoint)
    bool complete() const { return unclassified.empty(); }
};

// Folding compares pushed-forward frequencies mu_s = M^{0,s} 1 (e < e' when
// mu(e')/mu(e) -> 0); unfolding compares pulled-back lengths ell_s =
// (M^{0,s})^T 1 (e < e' when ell(e)/ell(e') -> 0). The limit is replaced by
// the trend over the last three checkpoints against the margin.
EdgeOrder estimate_edge_order(const SequenceRun& run, std::size_t horizon, const Rat& margin,
                              std::size_t stride = 1);

// Immersed loop through e avoiding the forbidden edges: first by scanning a
// cumulative image word for two same-oriented occurrences of e with a clean
// gap, else by legal-walk graph search; empty when none exists.
std::optional<EdgePath> witness_loop(const MarkedGraph& g, const std::optional<EdgePath>& image_word,
                                     int e, const std::vector<int>& forbidden);

struct AuditReport {
    std::vector<int> initial_h0;            // H^0 edges in I
    std::vector<int> initial_loops;         // single-edged loops in I (s of them)
    std::vector<std::vector<int>> initial_rank1;  // qualifying rank-1 components (m of them)
    struct Addition {
        std::size_t order_class;  // j of B_j^i
        std::size_t measure;      // i of B_j^i
        std::vector<int> edges;
        int chi_before;
        int chi_after;
        // immersed loop through the piece avoiding strictly later classes,
        // when one exists; corroborates the complexity raise
        std::optional<EdgePath> witness;
    };
    std::vector<Addition> additions;
    int s = 0;
    int m = 0;
    int k = 0;           // number of nonempty H^i, i >= 1
    int n_rank = 0;      // rank of the ambient graph
    int bound = 0;       // (s + m) + (n - 1)
    bool holds = false;  // k <= bound <= 2n-1, re-derived arithmetically
};

// Counting harness for the 2n-1 bound: build the initial collection I, attach the
// B_j^i = A_j cap H^i in lexicographic (j, i) order, and require each
// addition to raise chi_-. Throws OrderViolation when an addition fails.
AuditReport upper_bound_audit(const MarkedGraph& g,
                              const std::vector<std::vector<int>>& decomposition_h0_first,
                              const EdgeOrder& order);

}  // namespace outertrack

#endif
