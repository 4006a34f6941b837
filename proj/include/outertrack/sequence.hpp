#ifndef OUTERTRACK_SEQUENCE_HPP
#define OUTERTRACK_SEQUENCE_HPP

#include "outertrack/certificates.hpp"
#include "outertrack/construction.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace outertrack {

// A realized (un)folding sequence at matrix level. Step k stores the
// transition matrix of the k-th map in the edge ordering of the direction.
//
// Folding: indices are sequence times, cumulative(r, s) = M_{s-1} ... M_r,
// the transition matrix of G_r -> G_s, and certificates apply to the
// transpose. Unfolding: index k corresponds to sequence time -k (step 0 is
// the map into time 0), cumulative(r, s) = M_r ... M_{s-1}, the transition
// matrix of G_{-s} -> G_{-r}, certified untransposed.
class SequenceRun {
public:
    struct Step {
        std::optional<ConstructionParams> params;
        std::optional<Morphism> morphism;
        ExactMatrix matrix;
        bool inserted = false;
        std::string note;
    };

    SequenceRun(Direction dir, std::size_t m, std::vector<Step> steps,
                std::vector<std::string> edge_labels);
    // Adopt precomputed cumulative matrices (the game engine already has them).
    SequenceRun(Direction dir, std::size_t m, std::vector<Step> steps,
                std::vector<std::string> edge_labels,
                std::map<std::pair<std::size_t, std::size_t>, ExactMatrix> cumulative);

    Direction direction() const { return dir_; }
    std::size_t tier_width() const { return m_; }
    std::size_t size() const { return steps_.size(); }  // number of steps
    std::size_t dim() const { return dim_; }
    const std::vector<Step>& steps() const { return steps_; }
    const std::vector<std::string>& edge_labels() const { return labels_; }

    const ExactMatrix& cumulative(std::size_t r, std::size_t s) const;

    // Certificate of cumulative(r, s): folding certifies the transpose,
    // unfolding the matrix itself; cached.
    const FoldingCert& folding_cert(std::size_t r, std::size_t s) const;
    const UnfoldingCert& unfolding_cert(std::size_t r, std::size_t s) const;

    // Exact check of M^{r,t} against the two-leg product for all r < s < t.
    void verify_cocycle() const;

    // Insert an extra step (an insertion move) before position pos;
    // cumulative matrices and certificates are rebuilt.
    void insert_step(std::size_t pos, Step step);

private:
    void rebuild();

    Direction dir_;
    std::size_t m_;
    std::size_t dim_;
    std::vector<Step> steps_;
    std::vector<std::string> labels_;
    std::map<std::pair<std::size_t, std::size_t>, ExactMatrix> cumulative_;
    std::unique_ptr<std::mutex> cert_mutex_ = std::make_unique<std::mutex>();
    mutable std::map<std::pair<std::size_t, std::size_t>, FoldingCert> folding_certs_;
    mutable std::map<std::pair<std::size_t, std::size_t>, UnfoldingCert> unfolding_certs_;
};

// Build a run of the rein construction: one big-F step per schedule entry.
// Matrices come from closed_form_M; when with_morphisms is set each step also
// carries the composite morphism and the construction identity
// transition_matrix(big_F) == closed_form_M is enforced.
SequenceRun run_sequence(int n, const std::vector<ConstructionParams>& schedule, Direction dir,
                         bool with_morphisms = true);

// Synthetic run from explicit step matrices (testing and direct-sum oracles).
SequenceRun synthetic_run(Direction dir, std::size_t m, const std::vector<ExactMatrix>& step_matrices,
                          std::vector<std::string> labels = {});

// Blockwise direct sum of two runs of equal length.
SequenceRun direct_sum_run(const SequenceRun& a, const SequenceRun& b);

}  // namespace outertrack

#endif
