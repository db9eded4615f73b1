#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kgbell/bell.hpp"

// Quantum side of the toolkit: the vector-valued objective
//   I^d = sum_ij M_ij (a_i . b_j)   over unit vectors in R^d,
// its alternating ("see-saw") maximization, and the derived Grothendieck
// lower bounds and Werner visibility thresholds.  Marginal terms never enter
// here — on the states of interest the local marginals vanish.

namespace kgbell {

struct VectorAssignment {
    int d = 0;
    std::vector<Eigen::VectorXd> alice;
    std::vector<Eigen::VectorXd> bob;

    // largest | |v|^2 - 1 | over both families (long double accumulation)
    double max_norm_error() const;
    void validate(int mA, int mB, double norm_tol = 1e-12) const;
};

enum class InitScheme {
    paper_angles,   // every vector gets angles (1, 2, ..., d-1): degenerate, kept for demonstration
    indexed_angles, // vector t (1-based over [alice; bob]) gets angles (t*k mod 2pi): default
    seeded_random   // unit-normalized Gaussian rows from a fixed, portable stream
};

enum class DegeneratePolicy {
    hold,     // a row with near-zero image keeps its previous unit vector
    abort_run // treat it as a failed run (bad seed)
};

struct SeesawConfig {
    int d = 3;
    int max_iters = 1000;
    double value_tolerance = 1e-12; // relative change per sweep
    InitScheme init = InitScheme::indexed_angles;
    std::uint64_t seed = 0;
    int restarts = 1; // restart r >= 1 draws seeded_random with seed + r
    DegeneratePolicy on_degenerate = DegeneratePolicy::hold;
};

struct SeesawReport {
    double value = 0;                   // = evaluate(ineq, assignment)
    VectorAssignment assignment;
    int iterations_used = 0;            // sweeps executed by the winning run
    double min_denominator = 0;         // smallest row norm seen in its final sweep
    double ratio = 0;                   // value / reference local bound (NaN if unknown)
    bool converged = false;             // tolerance triggered before max_iters
    int degenerate_rows = 0;            // held/failed rows in the final sweep
    int best_restart = 0;
    std::vector<double> history;        // objective after each sweep (winning run)
    SeesawConfig config_used;
};

// sum_ij M_ij (a_i . b_j); throws on shape mismatch
double evaluate(const BellInequality& ineq, const VectorAssignment& asg);

// |sum_i a_i|^2 + 2 sum_{i<j} |a_i - a_j|  — the symmetric objective after
// eliminating the composite settings analytically
double reduced_symmetric_value(const std::vector<Eigen::VectorXd>& a);

// Reinstate the composite settings: each pair vector is the normalized
// difference it tracks (first canonical basis vector when the difference
// vanishes).  Output matches the layout of build_inequality(n, n).
VectorAssignment expand_reduced(const std::vector<Eigen::VectorXd>& a,
                                const std::vector<Eigen::VectorXd>& b);

// Single-family iteration a_i <- normalize((M a)_i) for symmetric M;
// objective is monotone nondecreasing across sweeps.
SeesawReport seesaw_symmetric(const BellInequality& ineq, const SeesawConfig& config);
// same, polishing a caller-supplied start (restarts ignored)
SeesawReport seesaw_symmetric(const BellInequality& ineq, const SeesawConfig& config,
                              const VectorAssignment& start);

// General rectangular variant: update all of Bob against Alice, then Alice
// against Bob, once per sweep.
SeesawReport seesaw_alternating(const BellInequality& ineq, const SeesawConfig& config);
SeesawReport seesaw_alternating(const BellInequality& ineq, const SeesawConfig& config,
                                const VectorAssignment& start);

// classical reference value used for ratios: exact enumeration for family
// instances, brute force for small generic ones, nothing otherwise
std::optional<long long> reference_local_bound(const BellInequality& ineq);

// value / local_bound; local_bound must be positive
double grothendieck_lower_bound(double value, double local_bound);

// local_bound / quantum_value, the visibility above which the inequality is
// violated; requires quantum_value > local_bound > 0
double critical_visibility(double local_bound, double quantum_value);

// same vectors with zeros appended up to d_new (handy for dimension sweeps)
VectorAssignment embed_in_dimension(const VectorAssignment& asg, int d_new);

} // namespace kgbell
