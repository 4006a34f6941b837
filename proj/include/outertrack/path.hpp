#ifndef OUTERTRACK_PATH_HPP
#define OUTERTRACK_PATH_HPP

#include "outertrack/graph.hpp"
#include "outertrack/rational.hpp"

#include <vector>

namespace outertrack {

struct BacktrackError : std::runtime_error {
    explicit BacktrackError(const std::string& what) : std::runtime_error(what) {}
};

// Edge path in power-compressed form: a list of blocks (word, exponent) read
// left to right, each word a nonempty chain of half-edges and each exponent a
// positive (possibly huge) integer. Construction images like
// (~a_0 b_0 a_0 b_1)^alpha stay compact for arbitrarily large alpha; crossing
// counts, endpoints and reducedness are all computed on the compressed form.
class EdgePath {
public:
    struct Block {
        std::vector<HalfEdge> word;
        Int exp;
    };

    EdgePath() = default;
    // Uncompressed path (single block, exponent 1). Empty sequences are not
    // representable; paths are always nonempty.
    static EdgePath of(const MarkedGraph& g, std::vector<HalfEdge> halves);
    static EdgePath of_blocks(const MarkedGraph& g, std::vector<Block> blocks);
    // Parse a word like "b_1^2 c ~b_1 (~a_0 b_0 a_0 b_1)^3 a_1" over g's labels.
    static EdgePath parse(const MarkedGraph& g, const std::string& word);

    const std::vector<Block>& blocks() const { return blocks_; }
    bool empty() const { return blocks_.empty(); }

    int initial_vertex(const MarkedGraph& g) const;
    int terminal_vertex(const MarkedGraph& g) const;
    HalfEdge first_half(const MarkedGraph& g) const;
    HalfEdge last_half(const MarkedGraph& g) const;
    bool is_closed(const MarkedGraph& g) const;

    Int length() const;
    Int crossings(int edge) const;  // crossings in either direction

    bool is_reduced(const MarkedGraph& g) const;
    // Consecutive half-edges are incident and the path is reduced.
    void validate(const MarkedGraph& g) const;

    EdgePath reverse() const;
    // Concatenation; throws BacktrackError if the junction cancels.
    EdgePath concat(const MarkedGraph& g, const EdgePath& rhs) const;

    // Fully expanded half-edge sequence; throws if longer than max_len.
    std::vector<HalfEdge> expand(std::size_t max_len = 1u << 22) const;

    std::string to_string(const MarkedGraph& g) const;

    bool operator==(const EdgePath& o) const { return canonical_blocks() == o.canonical_blocks(); }
    bool operator!=(const EdgePath& o) const { return !(*this == o); }

    // Blocks with exponent 1 merged into their neighbours; the comparison form.
    std::vector<Block> canonical_blocks() const;

private:
    std::vector<Block> blocks_;
};

bool operator==(const EdgePath::Block& a, const EdgePath::Block& b);

// Free reduction of an expanded word; used only where cancellation is
// expected (core relabeling), never in morphism composition.
std::vector<HalfEdge> tighten(const std::vector<HalfEdge>& word);

// Cyclic reduction of a loop word.
std::vector<HalfEdge> cyclic_tighten(const std::vector<HalfEdge>& word);

}  // namespace outertrack

#endif
