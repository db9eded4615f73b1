#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "kgbell/bell.hpp"
#include "kgbell/seesaw.hpp"

// Verified upper bounds on the vector maximum.  For the symmetric embedding
//   Mt = [[0, M/2], [M^T/2, 0]],
// any nonnegative lambda with Diag(lambda) - Mt PSD proves
//   sum_ij M_ij (a_i . b_j) <= sum_i lambda_i
// over unit vectors (trace argument against the unit-diagonal Gram matrix).
// We build lambda from a see-saw fixed point, where the row norms of Mt v
// are exactly the iteration's normalization denominators, and repair any
// PSD violation with a uniform diagonal shift.

namespace kgbell {

struct DualCertificate {
    Eigen::VectorXd lambda;            // length mA + mB, entrywise >= 0
    double raw_min_eigenvalue = 0;     // smallest eigenvalue of Diag(lambda) - Mt
    double shift = 0;                  // uniform diagonal repair, >= 0
    double bound = 0;                  // sum(lambda) + (mA + mB) * shift
    double residual_min_eigenvalue = 0;// smallest eigenvalue after the shift (recheck)
    double value_at_point = 0;         // evaluate() at the supplied assignment
    double gap = 0;                    // bound - value_at_point
    bool verified = false;             // residual_min_eigenvalue >= -1e-9
    std::string label;
};

Eigen::MatrixXd symmetric_embedding(const BellInequality& ineq);
Eigen::SparseMatrix<double> symmetric_embedding_sparse(const BellInequality& ineq);

// Sound regardless of fixed-point quality: a poor point just inflates the
// shift (and hence the bound), never invalidates it.
DualCertificate certificate_from_fixed_point(const BellInequality& ineq,
                                             const VectorAssignment& asg);

// Smallest eigenvalue.  Dense solver up to 1024 rows; above that a seeded
// Lanczos iteration with full reorthogonalization on sigma*I - A (sigma a
// Gershgorin upper bound), accurate to ~1e-6 relative for sizes <= 20000.
double min_eigenvalue_symmetric(const Eigen::MatrixXd& a);
double min_eigenvalue_symmetric(const Eigen::SparseMatrix<double>& a, std::uint64_t seed = 0);

} // namespace kgbell
