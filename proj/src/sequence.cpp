#include "outertrack/sequence.hpp"

namespace outertrack {

SequenceRun::SequenceRun(Direction dir, std::size_t m, std::vector<Step> steps,
                         std::vector<std::string> edge_labels)
    : dir_(dir), m_(m), steps_(std::move(steps)), labels_(std::move(edge_labels)) {
    if (steps_.empty()) throw std::invalid_argument("sequence run needs at least one step");
    dim_ = steps_[0].matrix.rows();
    for (const Step& st : steps_)
        if (st.matrix.rows() != dim_ || st.matrix.cols() != dim_)
            throw std::invalid_argument("step matrices must be square of equal size");
    if (m_ == 0 || m_ > dim_) throw std::invalid_argument("tier width out of range");
    if (labels_.empty())
        for (std::size_t i = 0; i < dim_; ++i) labels_.push_back("e_" + std::to_string(i));
    rebuild();
}

SequenceRun::SequenceRun(Direction dir, std::size_t m, std::vector<Step> steps,
                         std::vector<std::string> edge_labels,
                         std::map<std::pair<std::size_t, std::size_t>, ExactMatrix> cumulative)
    : dir_(dir), m_(m), steps_(std::move(steps)), labels_(std::move(edge_labels)) {
    if (steps_.empty()) throw std::invalid_argument("sequence run needs at least one step");
    dim_ = steps_[0].matrix.rows();
    if (m_ == 0 || m_ > dim_) throw std::invalid_argument("tier width out of range");
    if (labels_.empty())
        for (std::size_t i = 0; i < dim_; ++i) labels_.push_back("e_" + std::to_string(i));
    std::size_t h = steps_.size();
    for (std::size_t r = 0; r < h; ++r)
        for (std::size_t t = r + 1; t <= h; ++t)
            if (!cumulative.count({r, t}))
                throw std::invalid_argument("adopted cumulative matrices are incomplete");
    cumulative_ = std::move(cumulative);
    // spot checks tie the adopted products to the steps
    for (std::size_t r = 0; r < h; ++r)
        if (cumulative_.at({r, r + 1}) != steps_[r].matrix)
            throw std::logic_error("adopted cumulative(r, r+1) differs from the step matrix");
}

void SequenceRun::rebuild() {
    cumulative_.clear();
    folding_certs_.clear();
    unfolding_certs_.clear();
    std::size_t h = steps_.size();
    // cumulative(r, r+1) = step r; extend by one factor at a time.
    for (std::size_t r = 0; r < h; ++r) {
        cumulative_[{r, r + 1}] = steps_[r].matrix;
        for (std::size_t s = r + 2; s <= h; ++s) {
            const ExactMatrix& prev = cumulative_.at({r, s - 1});
            cumulative_[{r, s}] = dir_ == Direction::Folding ? steps_[s - 1].matrix * prev
                                                             : prev * steps_[s - 1].matrix;
        }
    }
}

const ExactMatrix& SequenceRun::cumulative(std::size_t r, std::size_t s) const {
    auto it = cumulative_.find({r, s});
    if (it == cumulative_.end()) throw std::out_of_range("cumulative(r, s) needs 0 <= r < s <= size");
    return it->second;
}

const FoldingCert& SequenceRun::folding_cert(std::size_t r, std::size_t s) const {
    auto key = std::make_pair(r, s);
    {
        std::lock_guard<std::mutex> lock(*cert_mutex_);
        auto it = folding_certs_.find(key);
        if (it != folding_certs_.end()) return it->second;
    }
    FoldingCert cert = certify_folding(cumulative(r, s).transpose(), m_);
    std::lock_guard<std::mutex> lock(*cert_mutex_);
    return folding_certs_.emplace(key, std::move(cert)).first->second;
}

const UnfoldingCert& SequenceRun::unfolding_cert(std::size_t r, std::size_t s) const {
    auto key = std::make_pair(r, s);
    {
        std::lock_guard<std::mutex> lock(*cert_mutex_);
        auto it = unfolding_certs_.find(key);
        if (it != unfolding_certs_.end()) return it->second;
    }
    UnfoldingCert cert = certify_unfolding(cumulative(r, s), m_);
    std::lock_guard<std::mutex> lock(*cert_mutex_);
    return unfolding_certs_.emplace(key, std::move(cert)).first->second;
}

void SequenceRun::verify_cocycle() const {
    std::size_t h = steps_.size();
    for (std::size_t r = 0; r < h; ++r)
        for (std::size_t s = r + 1; s < h; ++s)
            for (std::size_t t = s + 1; t <= h; ++t) {
                ExactMatrix prod = dir_ == Direction::Folding
                                       ? cumulative(s, t) * cumulative(r, s)
                                       : cumulative(r, s) * cumulative(s, t);
                if (prod != cumulative(r, t))
                    throw std::logic_error("cocycle violation at (" + std::to_string(r) + "," +
                                           std::to_string(s) + "," + std::to_string(t) + ")");
            }
}

void SequenceRun::insert_step(std::size_t pos, Step step) {
    if (pos > steps_.size()) throw std::out_of_range("insert position out of range");
    if (step.matrix.rows() != dim_ || step.matrix.cols() != dim_)
        throw std::invalid_argument("inserted step has wrong dimension");
    step.inserted = true;
    steps_.insert(steps_.begin() + static_cast<long>(pos), std::move(step));
    rebuild();
}

SequenceRun run_sequence(int n, const std::vector<ConstructionParams>& schedule, Direction dir,
                         bool with_morphisms) {
    if (schedule.empty()) throw std::invalid_argument("empty schedule");
    // built below, then the compatibility identities are checked exactly
    GammaGraph gamma = build_gamma(n);
    auto order = dir == Direction::Folding ? folding_edge_order(gamma) : unfolding_edge_order(gamma);
    std::vector<SequenceRun::Step> steps;
    for (const ConstructionParams& params : schedule) {
        if (params.n != n) throw std::invalid_argument("schedule entry has wrong rank");
        SequenceRun::Step st;
        st.params = params;
        st.matrix = closed_form_M(params, dir);
        if (with_morphisms) {
            Morphism f = big_F(gamma, params);
            ExactMatrix computed = transition_matrix(f, order, order);
            if (computed != st.matrix)
                throw std::logic_error("construction mismatch: transition_matrix(big_F) differs "
                                       "from the closed form");
            st.morphism = std::move(f);
        }
        steps.push_back(std::move(st));
    }
    SequenceRun run(dir, static_cast<std::size_t>(2 * n - 6), std::move(steps),
                    edge_order_labels(gamma, dir));
    run.verify_cocycle();
    return run;
}

SequenceRun synthetic_run(Direction dir, std::size_t m, const std::vector<ExactMatrix>& step_matrices,
                          std::vector<std::string> labels) {
    std::vector<SequenceRun::Step> steps;
    for (const ExactMatrix& mx : step_matrices) {
        SequenceRun::Step st;
        st.matrix = mx;
        st.note = "synthetic";
        steps.push_back(std::move(st));
    }
    return SequenceRun(dir, m, std::move(steps), std::move(labels));
}

SequenceRun direct_sum_run(const SequenceRun& a, const SequenceRun& b) {
    if (a.size() != b.size()) throw std::invalid_argument("direct sum needs equal lengths");
    if (a.direction() != b.direction()) throw std::invalid_argument("direct sum needs equal directions");
    std::size_t da = a.dim(), db = b.dim(), ma = a.tier_width(), mb = b.tier_width();
    // Interleave so the combined Tier 1 columns stay in front:
    // a-tier1, b-tier1, a-tier2, b-tier2.
    std::vector<std::size_t> perm;
    for (std::size_t i = 0; i < ma; ++i) perm.push_back(i);
    for (std::size_t i = 0; i < mb; ++i) perm.push_back(da + i);
    for (std::size_t i = ma; i < da; ++i) perm.push_back(i);
    for (std::size_t i = mb; i < db; ++i) perm.push_back(da + i);
    std::vector<ExactMatrix> mats;
    for (std::size_t k = 0; k < a.size(); ++k)
        mats.push_back(
            ExactMatrix::direct_sum(a.steps()[k].matrix, b.steps()[k].matrix).permuted(perm, perm));
    std::vector<std::string> all = a.edge_labels();
    for (const std::string& l : b.edge_labels()) all.push_back(l + "'");
    std::vector<std::string> labels;
    for (std::size_t i : perm) labels.push_back(all[i]);
    return synthetic_run(a.direction(), ma + mb, mats, std::move(labels));
}

}  // namespace outertrack
