#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

// Correlation Bell inequalities with small integer coefficients and optional
// single-party marginal terms,
//
//   sum_ij M_ij <a_i b_j> + sum_i mA_i <a_i> + sum_j mB_j <b_j>  <=  L,
//
// together with exact classical (local deterministic) bounds computed by
// three independent methods.  Indices are 0-based internally; text exports
// use 1-based indices.

namespace kgbell {

struct CoeffEntry {
    int row = 0;   // Alice setting index
    int col = 0;   // Bob setting index
    int value = 0; // nonzero integer coefficient
};

bool operator==(const CoeffEntry& x, const CoeffEntry& y);

struct BellInequality {
    int mA = 0;
    int mB = 0;
    // sorted row-major, unique (row, col), values nonzero
    std::vector<CoeffEntry> coeffs;
    // always full length (mA resp. mB); all-zero means "no marginal terms"
    std::vector<int> marginal_A;
    std::vector<int> marginal_B;
    std::string label;
    // human-readable description of what each composite setting means
    std::string index_map;
    // set when built by build_inequality; 0 otherwise
    int family_nA = 0;
    int family_nB = 0;
    bool family_marginals = false;

    bool has_marginals() const;
    bool is_symmetric() const; // mA == mB and M == M^T entrywise
    std::vector<std::vector<int>> dense() const;
    long long nnz() const { return static_cast<long long>(coeffs.size()); }
    // throws std::invalid_argument on out-of-range indices, duplicates,
    // wrong marginal lengths or zero stored coefficients
    void validate() const;
};

// structural equality: shapes, coefficients, marginals and label
bool operator==(const BellInequality& x, const BellInequality& y);
// same thing but ignoring label (used when comparing a derived inequality
// against a freshly built one)
bool same_coefficients(const BellInequality& x, const BellInequality& y);

// pair bookkeeping for the composite settings
int pair_count(int n);                    // n(n-1)/2
int pair_index(int n, int i, int j);      // lexicographic position of (i,j), i<j, 0-based

// Family construction.  Alice has nA plain settings plus one composite
// setting per pair of Bob's plain settings; Bob has nB plain settings plus
// one per pair of Alice's.  The plain nA x nB block is all ones; the
// composite row for Bob-pair (i,j) carries +1 against b_i and -1 against
// b_j, and symmetrically for Bob's composite columns.  with_marginals
// (square case only) adds +1 marginals on Alice's plain settings and -1 on
// Bob's.
BellInequality build_inequality(int nA, int nB, bool with_marginals = false);

// the 2x2 reference instance [[1,1],[1,-1]], no marginals
BellInequality chsh();

// value of a deterministic +-1 strategy, exact integer arithmetic
long long evaluate_deterministic(const BellInequality& ineq,
                                 const std::vector<int>& a,
                                 const std::vector<int>& b);

enum class BoundMethod { closed_form, kl_enumeration, brute_force };

struct LocalBoundReport {
    long long bound = 0;
    BoundMethod method = BoundMethod::brute_force;
    // +-1 assignments attaining the bound; every listed pair evaluates
    // exactly to bound
    std::vector<std::pair<std::vector<int>, std::vector<int>>> maximizers;
    bool maximizers_truncated = false;
};

// closed form for the marginal-free family instance:
// (nA^2 + nB^2)/2, minus 1/2 rounded away when nA - nB is odd
long long local_bound_closed(int nA, int nB);

// Exact reduction: an optimal strategy is constant on each plain block up to
// k (resp. l) sign flips, and composite settings follow analytically.  Scans
// the full (k, l) grid and synthesizes one canonical maximizer per optimal
// cell.
LocalBoundReport local_bound_kl(int nA, int nB, bool with_marginals = false);

// Exhaustive scan over Alice's +-1 assignments with Bob's reply chosen
// analytically per column (sign of the column sum, ties expanded both ways).
// Guarded at mA <= 24.
LocalBoundReport local_bound_bruteforce(const BellInequality& ineq,
                                        std::size_t max_maximizers = 4096);

enum class ExportFormat { coordinate_text, structured_text };

// coordinate_text: header "mA mB nnz" then one "row col value" line per
// nonzero (1-based, matrix only); structured_text: JSON carrying label,
// shapes, coefficients, marginals and family metadata, lossless round trip
std::string export_matrix(const BellInequality& ineq, ExportFormat format);
BellInequality import_matrix(const std::string& text); // format autodetected

} // namespace kgbell
