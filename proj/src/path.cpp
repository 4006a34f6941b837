#include "outertrack/path.hpp"

#include <sstream>

namespace outertrack {

bool operator==(const EdgePath::Block& a, const EdgePath::Block& b) {
    return a.exp == b.exp && a.word == b.word;
}

EdgePath EdgePath::of(const MarkedGraph& g, std::vector<HalfEdge> halves) {
    if (halves.empty()) throw std::invalid_argument("empty edge path");
    EdgePath p;
    p.blocks_.push_back({std::move(halves), Int(1)});
    p.validate(g);
    return p;
}

EdgePath EdgePath::of_blocks(const MarkedGraph& g, std::vector<Block> blocks) {
    if (blocks.empty()) throw std::invalid_argument("empty edge path");
    EdgePath p;
    p.blocks_ = std::move(blocks);
    p.validate(g);
    return p;
}

int EdgePath::initial_vertex(const MarkedGraph& g) const {
    return g.init_vertex(blocks_.front().word.front());
}

int EdgePath::terminal_vertex(const MarkedGraph& g) const {
    return g.term_vertex(blocks_.back().word.back());
}

HalfEdge EdgePath::first_half(const MarkedGraph&) const { return blocks_.front().word.front(); }
HalfEdge EdgePath::last_half(const MarkedGraph&) const { return blocks_.back().word.back(); }

bool EdgePath::is_closed(const MarkedGraph& g) const {
    return initial_vertex(g) == terminal_vertex(g);
}

Int EdgePath::length() const {
    Int total = 0;
    for (const Block& b : blocks_) total += Int(b.word.size()) * b.exp;
    return total;
}

Int EdgePath::crossings(int edge) const {
    Int total = 0;
    for (const Block& b : blocks_) {
        long in_word = 0;
        for (HalfEdge h : b.word)
            if (edge_of(h) == edge) ++in_word;
        if (in_word) total += Int(in_word) * b.exp;
    }
    return total;
}

namespace {

// Turn between consecutive half-edges h1, h2: incident and not a backtrack.
void check_junction(const MarkedGraph& g, HalfEdge h1, HalfEdge h2, const char* what) {
    if (g.term_vertex(h1) != g.init_vertex(h2))
        throw std::invalid_argument(std::string(what) + ": half-edges not incident");
    if (h2 == reversed(h1)) throw BacktrackError(std::string(what) + ": backtracking at " +
                                                 g.half_edge_label(h1) + " | " + g.half_edge_label(h2));
}

}  // namespace

void EdgePath::validate(const MarkedGraph& g) const {
    if (blocks_.empty()) throw std::invalid_argument("empty edge path");
    for (const Block& b : blocks_) {
        if (b.word.empty()) throw std::invalid_argument("empty block word");
        if (b.exp < 1) throw std::invalid_argument("block exponent must be positive");
        for (HalfEdge h : b.word)
            if (h < 0 || h >= g.half_edge_count()) throw std::invalid_argument("half-edge out of range");
        for (std::size_t i = 0; i + 1 < b.word.size(); ++i)
            check_junction(g, b.word[i], b.word[i + 1], "path");
        if (b.exp > 1) check_junction(g, b.word.back(), b.word.front(), "power block");
    }
    for (std::size_t i = 0; i + 1 < blocks_.size(); ++i)
        check_junction(g, blocks_[i].word.back(), blocks_[i + 1].word.front(), "path");
}

bool EdgePath::is_reduced(const MarkedGraph& g) const {
    try {
        validate(g);
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

EdgePath EdgePath::reverse() const {
    EdgePath out;
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
        Block b;
        b.exp = it->exp;
        for (auto wi = it->word.rbegin(); wi != it->word.rend(); ++wi)
            b.word.push_back(reversed(*wi));
        out.blocks_.push_back(std::move(b));
    }
    return out;
}

EdgePath EdgePath::concat(const MarkedGraph& g, const EdgePath& rhs) const {
    check_junction(g, blocks_.back().word.back(), rhs.blocks_.front().word.front(), "concat");
    EdgePath out = *this;
    out.blocks_.insert(out.blocks_.end(), rhs.blocks_.begin(), rhs.blocks_.end());
    return out;
}

std::vector<HalfEdge> EdgePath::expand(std::size_t max_len) const {
    if (length() > Int(static_cast<unsigned long long>(max_len)))
        throw std::length_error("edge path too long to expand");
    std::vector<HalfEdge> out;
    out.reserve(static_cast<std::size_t>(length()));
    for (const Block& b : blocks_) {
        long reps = static_cast<long>(b.exp);
        for (long r = 0; r < reps; ++r) out.insert(out.end(), b.word.begin(), b.word.end());
    }
    return out;
}

std::vector<EdgePath::Block> EdgePath::canonical_blocks() const {
    std::vector<Block> out;
    for (const Block& b : blocks_) {
        if (b.exp == 1 && !out.empty() && out.back().exp == 1) {
            out.back().word.insert(out.back().word.end(), b.word.begin(), b.word.end());
        } else {
            out.push_back(b);
        }
    }
    return out;
}

std::string EdgePath::to_string(const MarkedGraph& g) const {
    std::ostringstream os;
    bool first = true;
    for (const Block& b : canonical_blocks()) {
        if (!first) os << ' ';
        first = false;
        if (b.exp == 1) {
            for (std::size_t i = 0; i < b.word.size(); ++i) {
                if (i) os << ' ';
                os << g.half_edge_label(b.word[i]);
            }
        } else if (b.word.size() == 1) {
            os << g.half_edge_label(b.word[0]) << '^' << b.exp.str();
        } else {
            os << '(';
            for (std::size_t i = 0; i < b.word.size(); ++i) {
                if (i) os << ' ';
                os << g.half_edge_label(b.word[i]);
            }
            os << ")^" << b.exp.str();
        }
    }
    return os.str();
}

EdgePath EdgePath::parse(const MarkedGraph& g, const std::string& word) {
    std::vector<Block> blocks;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < word.size() && std::isspace(static_cast<unsigned char>(word[i]))) ++i;
    };
    auto read_exp = [&]() -> Int {
        if (i < word.size() && word[i] == '^') {
            ++i;
            std::size_t start = i;
            while (i < word.size() && (std::isdigit(static_cast<unsigned char>(word[i])))) ++i;
            if (start == i) throw std::invalid_argument("missing exponent in word: " + word);
            return Int(word.substr(start, i - start));
        }
        return Int(1);
    };
    while (true) {
        skip_ws();
        if (i >= word.size()) break;
        if (word[i] == '(') {
            ++i;
            std::size_t depth = 1, start = i;
            while (i < word.size() && depth > 0) {
                if (word[i] == '(') ++depth;
                if (word[i] == ')') --depth;
                ++i;
            }
            if (depth != 0) throw std::invalid_argument("unbalanced parentheses in word: " + word);
            std::string inner = word.substr(start, i - 1 - start);
            EdgePath sub = parse(g, inner);
            Int e = read_exp();
            for (const Block& b : sub.blocks_) {
                if (b.exp != 1 && e != 1)
                    throw std::invalid_argument("nested powers are not supported: " + word);
                blocks.push_back(b);
            }
            if (e != 1) {
                if (sub.blocks_.size() != 1) {
                    // merge the freshly pushed exponent-1 blocks into one
                    Block merged;
                    merged.exp = e;
                    for (std::size_t k = blocks.size() - sub.blocks_.size(); k < blocks.size(); ++k)
                        merged.word.insert(merged.word.end(), blocks[k].word.begin(),
                                           blocks[k].word.end());
                    blocks.resize(blocks.size() - sub.blocks_.size());
                    blocks.push_back(std::move(merged));
                } else {
                    blocks.back().exp *= e;
                }
            }
        } else {
            std::size_t start = i;
            while (i < word.size() && !std::isspace(static_cast<unsigned char>(word[i])) &&
                   word[i] != '^' && word[i] != '(' && word[i] != ')')
                ++i;
            std::string tok = word.substr(start, i - start);
            HalfEdge h = g.half_edge_by_label(tok);
            Int e = read_exp();
            blocks.push_back({{h}, e});
        }
    }
    return of_blocks(g, std::move(blocks));
}

std::vector<HalfEdge> tighten(const std::vector<HalfEdge>& word) {
    std::vector<HalfEdge> out;
    for (HalfEdge h : word) {
        if (!out.empty() && out.back() == reversed(h))
            out.pop_back();
        else
            out.push_back(h);
    }
    return out;
}

std::vector<HalfEdge> cyclic_tighten(const std::vector<HalfEdge>& word) {
    std::vector<HalfEdge> w = tighten(word);
    while (w.size() >= 2 && w.front() == reversed(w.back())) {
        w.erase(w.begin());
        w.pop_back();
    }
    return w;
}

}  // namespace outertrack
