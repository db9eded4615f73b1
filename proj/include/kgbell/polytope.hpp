#pragma once

#include <string>
#include <vector>

#include "kgbell/bell.hpp"

// Facet (tightness) testing.  A correlation inequality with marginals lives
// in the D-dimensional space of (correlations, Alice marginals, Bob
// marginals), D = mA*mB + mA + mB.  It is tight iff the deterministic
// strategies saturating it affinely span a hyperplane, which we test as:
// exact integer rank of the saturating strategy vectors with an appended
// constant coordinate equals D.  (Every saturating vector lies on the
// hyperplane <(M, marA, marB, -L), v> = 0, so the rank never exceeds D.)

namespace kgbell {

struct DeterministicStrategy {
    std::vector<int> a; // entries exactly +-1, length mA
    std::vector<int> b; // length mB
};

struct TightnessReport {
    long long local_bound = 0;
    long long saturating_count = 0;
    long long ambient_dimension = 0; // D
    long long rank = 0;
    bool tight = false;
    std::string label;
};

// (a_i b_j row-major; a_i; b_j; 1) — length D + 1
std::vector<long long> strategy_vector(const DeterministicStrategy& s);

// Complete list of strategies attaining the local bound exactly, in
// lexicographic order (+1 before -1, Alice assignment outer, free Bob signs
// inner).  Zero column sums leave b_j free; each free pattern is expanded,
// capped at 2^12 expansions per Alice assignment (an error if exceeded —
// never silently truncated).  Guarded at mA <= 20.
std::vector<DeterministicStrategy> saturating_strategies(const BellInequality& ineq);

TightnessReport tightness(const BellInequality& ineq);

// one "a1,...,a_mA,b1,...,b_mB" row per strategy
std::string export_strategies_csv(const std::vector<DeterministicStrategy>& strategies);

// Fixing the last plain setting of each party to +1 and every composite
// setting that involves it to -1 turns the marginal inequality of size n
// into the one of size n-1 plus a constant.
struct InclusionEvidence {
    int n = 0;
    BellInequality residual;   // after substitution and reindexing
    BellInequality target;     // freshly built size n-1 marginal instance
    long long constant_offset = 0;
    bool coefficients_match = false; // residual == target up to label
    long long source_bound = 0;      // local bound of the size-n instance
    long long target_bound = 0;      // local bound of the size n-1 instance
    bool bounds_consistent = false;  // source = target + offset
};

// throws std::logic_error if the residual fails to match the target
InclusionEvidence reduce_inclusion(int n);

} // namespace kgbell
