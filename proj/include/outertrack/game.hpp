#ifndef OUTERTRACK_GAME_HPP
#define OUTERTRACK_GAME_HPP

#include "outertrack/sequence.hpp"

namespace outertrack {

struct CertificateViolation : std::runtime_error {
    explicit CertificateViolation(const std::string& what) : std::runtime_error(what) {}
};

// Alice chooses tolerances, Bob answers with construction parameters whose
// step matrix certifies strictly below them. P_s tracks the running maximum
// of K over all certified partial products with both endpoints < s.
struct GameState {
    int n = 0;
    std::size_t m = 0;
    Direction direction = Direction::Folding;
    Frac p = Frac(2);  // unfolding only, fixed before the game starts

    struct HistoryEntry {
        Frac eps;
        Frac delta;  // unfolding only
        ConstructionParams params;
    };
    std::vector<HistoryEntry> history;
    Frac P = Frac(1);  // max K over certified partial products so far; 1 before step 1

    std::size_t step() const { return history.size(); }
};

// eps_0 = 1/2; for s > 0, eps_s = 2^{-(s+2)} / (n P_s), which satisfies
// n P_s eps_s < 2^{-(s+1)} strictly.
Frac alice_move_folding(const GameState& state);

// delta_0 = 1, eps_0 = 2^{-2}/n; for s > 0, delta_s = 2^{-(s+1)} / (n P_s p)
// and eps_s = 2^{-(s+2)} / (n P_s).
struct AliceUnfoldingMove {
    Frac eps;
    Frac delta;
};
AliceUnfoldingMove alice_move_unfolding(const GameState& state);

// Smallest-satisfying-integer parameter search; the result always re-verifies
// via the exact certificate before it is returned.
ConstructionParams bob_move_folding(int n, std::size_t m, const Frac& eps);
ConstructionParams bob_move_unfolding(int n, std::size_t m, const Frac& eps, const Frac& delta,
                                      const Frac& p);

struct GameReport {
    struct PairRecord {
        std::size_t r, s;       // cumulative(r, s), s > r
        Frac eps;               // tight value (folding: of the transpose)
        Frac delta;             // unfolding only (tight diagonal ratio)
        Frac p;                 // unfolding only (tight below-diagonal ratio)
        Frac eps_envelope;
        Frac delta_envelope;    // unfolding: the per-endpoint bound 2^{-(s-1)}
        Frac p_envelope;        // unfolding: truncated product bound
        bool has_unfolding = false;
        bool pass;
    };
    std::vector<PairRecord> pairs;
    // per r, the maximum certified tight value over all s > r
    std::vector<Frac> max_eps_per_r;
    std::vector<Frac> alice_eps;
    std::vector<Frac> alice_delta;
    bool all_pass = true;
};

struct GameResult {
    SequenceRun run;
    GameReport report;
    GameState state;
};

// Alternate Alice and Bob for the given number of steps, build the run,
// certify every cumulative product and check it against its envelope.
// Throws CertificateViolation if any envelope fails.
GameResult run_game(int n, std::size_t m, Direction dir, std::size_t steps,
                    bool with_morphisms = false, const Frac& p = Frac(2), int jobs = 0);

// Upper bound for p * prod_{k=r}^infty (1 + n p / 2^k) as an exact rational:
// truncation at k = r+63 plus the geometric tail estimate.
Frac p_bar_bound(std::size_t r, int n, const Frac& p);

}  // namespace outertrack

#endif
