#include "kgbell/seesaw.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Sparse>

namespace kgbell {

namespace {

constexpr double kDegenerate = 1e-13;

long double norm2_ld(const Eigen::VectorXd& v) {
    long double s = 0;
    for (int k = 0; k < v.size(); ++k) s += static_cast<long double>(v[k]) * v[k];
    return s;
}

// normalize with extended-precision norm so the post-iteration drift check
// | |v|^2 - 1 | < 1e-15 holds with margin
void renormalize(Eigen::VectorXd& v) {
    long double n2 = norm2_ld(v);
    if (n2 <= 0) throw std::runtime_error("renormalize: zero vector");
    v /= static_cast<double>(sqrtl(n2));
    n2 = norm2_ld(v);
    v /= static_cast<double>(sqrtl(n2));
}

Eigen::SparseMatrix<double> to_sparse(const BellInequality& q) {
    std::vector<Eigen::Triplet<double>> ts;
    ts.reserve(q.coeffs.size());
    for (const auto& e : q.coeffs) ts.emplace_back(e.row, e.col, static_cast<double>(e.value));
    Eigen::SparseMatrix<double> m(q.mA, q.mB);
    m.setFromTriplets(ts.begin(), ts.end());
    return m;
}

// portable Gaussian from raw mt19937_64 output (library distributions are
// implementation-defined, which would break seed reproducibility)
double gauss(std::mt19937_64& rng) {
    double u = static_cast<double>((rng() >> 11) + 1) * 0x1p-53; // (0, 1]
    double v = static_cast<double>(rng() >> 11) * 0x1p-53;       // [0, 1)
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

// angles -> point on S^(d-1) via spherical coordinates
Eigen::VectorXd from_angles(const std::vector<double>& phi, int d) {
    Eigen::VectorXd v(d);
    double s = 1.0;
    for (int k = 0; k + 1 < d; ++k) {
        v[k] = s * std::cos(phi[k]);
        s *= std::sin(phi[k]);
    }
    v[d - 1] = s;
    return v;
}

// rows are vectors; `offset` continues the 1-based vector index across parties
Eigen::MatrixXd init_rows(int m, int d, InitScheme scheme, int offset, std::mt19937_64* rng) {
    Eigen::MatrixXd out(m, d);
    if (scheme == InitScheme::seeded_random) {
        for (int i = 0; i < m; ++i) {
            Eigen::VectorXd v(d);
            do {
                for (int k = 0; k < d; ++k) v[k] = gauss(*rng);
            } while (v.norm() < 1e-12);
            renormalize(v);
            out.row(i) = v.transpose();
        }
        return out;
    }
    std::vector<double> phi(std::max(d - 1, 0));
    for (int i = 0; i < m; ++i) {
        const int t = i + 1 + offset;
        for (int k = 0; k + 1 < d; ++k) {
            double raw = scheme == InitScheme::paper_angles
                             ? static_cast<double>(k + 1)
                             : static_cast<double>(t) * (k + 1);
            phi[k] = std::fmod(raw, 2.0 * M_PI);
        }
        Eigen::VectorXd v = d == 1 ? Eigen::VectorXd::Ones(1) : from_angles(phi, d);
        renormalize(v);
        out.row(i) = v.transpose();
    }
    return out;
}

struct RunOutcome {
    bool failed = false;        // abort policy hit a degenerate row
    double value = 0;
    Eigen::MatrixXd a, b;
    int sweeps = 0;
    bool converged = false;
    double min_denominator = 0;
    int degenerate_rows = 0;
    std::vector<double> history;
};

// one half-sweep: rows of `target` become the normalized rows of `image`;
// near-zero rows follow the degenerate policy
bool update_rows(const Eigen::MatrixXd& image, Eigen::MatrixXd& target, DegeneratePolicy policy,
                 double& min_den, int& degenerate) {
    for (int i = 0; i < image.rows(); ++i) {
        const double nrm = image.row(i).norm();
        min_den = std::min(min_den, nrm);
        if (nrm < kDegenerate) {
            ++degenerate;
            if (policy == DegeneratePolicy::abort_run) return false;
            continue; // hold the previous unit vector; value-neutral
        }
        target.row(i) = image.row(i) / nrm;
    }
    return true;
}

RunOutcome run_once(const Eigen::SparseMatrix<double>& m, Eigen::MatrixXd a, Eigen::MatrixXd b,
                    const SeesawConfig& cfg, bool symmetric) {
    RunOutcome out;
    double prev = 0;
    bool have_prev = false;
    for (int t = 0; t < cfg.max_iters; ++t) {
        double min_den = std::numeric_limits<double>::infinity();
        int degenerate = 0;
        double value;
        if (symmetric) {
            // b holds the previous iterate of the single family
            b = a;
            Eigen::MatrixXd r = m * b;
            if (!update_rows(r, a, cfg.on_degenerate, min_den, degenerate)) {
                out.failed = true;
                return out;
            }
            value = (r.array() * a.array()).sum();
        } else {
            Eigen::MatrixXd c = m.transpose() * a;
            if (!update_rows(c, b, cfg.on_degenerate, min_den, degenerate)) {
                out.failed = true;
                return out;
            }
            Eigen::MatrixXd r = m * b;
            if (!update_rows(r, a, cfg.on_degenerate, min_den, degenerate)) {
                out.failed = true;
                return out;
            }
            value = (r.array() * a.array()).sum();
        }
        out.sweeps = t + 1;
        out.min_denominator = min_den;
        out.degenerate_rows = degenerate;
        out.history.push_back(value);
        if (have_prev && value < prev - 1e-10 * std::max(1.0, std::abs(prev)))
            throw std::logic_error("see-saw objective decreased between sweeps");
        if (have_prev && std::abs(value - prev) / std::max(1.0, std::abs(value)) <
                             cfg.value_tolerance) {
            out.converged = true;
            prev = value;
            break;
        }
        prev = value;
        have_prev = true;
    }
    out.value = prev;
    out.a = std::move(a);
    out.b = std::move(b);
    return out;
}

void check_config(const SeesawConfig& cfg) {
    if (cfg.d < 1) throw std::invalid_argument("seesaw: dimension must be >= 1");
    if (cfg.max_iters < 1) throw std::invalid_argument("seesaw: max_iters must be >= 1");
    if (!(cfg.value_tolerance > 0)) throw std::invalid_argument("seesaw: tolerance must be > 0");
    if (cfg.restarts < 1) throw std::invalid_argument("seesaw: restarts must be >= 1");
}

SeesawReport finish(const BellInequality& ineq, const SeesawConfig& cfg, RunOutcome best,
                    int best_restart) {
    SeesawReport rep;
    rep.assignment.d = cfg.d;
    rep.assignment.alice.reserve(best.a.rows());
    rep.assignment.bob.reserve(best.b.rows());
    for (int i = 0; i < best.a.rows(); ++i) {
        Eigen::VectorXd v = best.a.row(i).transpose();
        renormalize(v);
        rep.assignment.alice.push_back(std::move(v));
    }
    for (int j = 0; j < best.b.rows(); ++j) {
        Eigen::VectorXd v = best.b.row(j).transpose();
        renormalize(v);
        rep.assignment.bob.push_back(std::move(v));
    }
    rep.value = evaluate(ineq, rep.assignment);
    rep.iterations_used = best.sweeps;
    rep.min_denominator = best.min_denominator;
    rep.converged = best.converged;
    rep.degenerate_rows = best.degenerate_rows;
    rep.best_restart = best_restart;
    rep.history = std::move(best.history);
    rep.config_used = cfg;
    auto lb = reference_local_bound(ineq);
    rep.ratio = lb ? rep.value / static_cast<double>(*lb)
                   : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

SeesawReport drive(const BellInequality& ineq, const SeesawConfig& cfg, bool symmetric,
                   const VectorAssignment* start) {
    ineq.validate();
    check_config(cfg);
    if (symmetric && !ineq.is_symmetric())
        throw std::invalid_argument("seesaw_symmetric: coefficient matrix is not symmetric");
    const auto m = to_sparse(ineq);

    if (start) {
        start->validate(ineq.mA, ineq.mB);
        if (start->d != cfg.d)
            throw std::invalid_argument("seesaw: start dimension disagrees with config");
        Eigen::MatrixXd a(ineq.mA, cfg.d), b(ineq.mB, cfg.d);
        for (int i = 0; i < ineq.mA; ++i) a.row(i) = start->alice[i].transpose();
        for (int j = 0; j < ineq.mB; ++j) b.row(j) = start->bob[j].transpose();
        RunOutcome out = run_once(m, std::move(a), std::move(b), cfg, symmetric);
        if (out.failed)
            throw std::runtime_error("seesaw: degenerate row encountered (abort policy); "
                                     "reseed or switch to the hold policy");
        return finish(ineq, cfg, std::move(out), 0);
    }

    bool have_best = false;
    RunOutcome best;
    int best_restart = 0;
    for (int r = 0; r < cfg.restarts; ++r) {
        InitScheme scheme = r == 0 ? cfg.init : InitScheme::seeded_random;
        std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(r));
        Eigen::MatrixXd a = init_rows(ineq.mA, cfg.d, scheme, 0, &rng);
        Eigen::MatrixXd b = symmetric ? a : init_rows(ineq.mB, cfg.d, scheme, ineq.mA, &rng);
        RunOutcome out = run_once(m, std::move(a), std::move(b), cfg, symmetric);
        if (out.failed) continue;
        if (!have_best || out.value > best.value) {
            best = std::move(out);
            best_restart = r;
            have_best = true;
        }
    }
    if (!have_best)
        throw std::runtime_error("seesaw: every restart aborted on a degenerate row; "
                                 "reseed or switch to the hold policy");
    return finish(ineq, cfg, std::move(best), best_restart);
}

} // namespace

double VectorAssignment::max_norm_error() const {
    long double worst = 0;
    for (const auto* fam : {&alice, &bob})
        for (const auto& v : *fam) worst = std::max(worst, fabsl(norm2_ld(v) - 1.0L));
    return static_cast<double>(worst);
}

void VectorAssignment::validate(int mA, int mB, double norm_tol) const {
    if (static_cast<int>(alice.size()) != mA || static_cast<int>(bob.size()) != mB)
        throw std::invalid_argument("VectorAssignment: family size mismatch");
    for (const auto* fam : {&alice, &bob})
        for (const auto& v : *fam) {
            if (v.size() != d) throw std::invalid_argument("VectorAssignment: dimension mismatch");
            if (std::abs(v.squaredNorm() - 1.0) >= norm_tol)
                throw std::invalid_argument("VectorAssignment: vector is not unit-norm");
        }
}

double evaluate(const BellInequality& ineq, const VectorAssignment& asg) {
    if (static_cast<int>(asg.alice.size()) != ineq.mA ||
        static_cast<int>(asg.bob.size()) != ineq.mB)
        throw std::invalid_argument("evaluate: assignment does not match inequality shape");
    for (const auto* fam : {&asg.alice, &asg.bob})
        for (const auto& v : *fam)
            if (v.size() != asg.d)
                throw std::invalid_argument("evaluate: vector dimension mismatch");
    double s = 0;
    for (const auto& e : ineq.coeffs)
        s += e.value * asg.alice[e.row].dot(asg.bob[e.col]);
    return s;
}

double reduced_symmetric_value(const std::vector<Eigen::VectorXd>& a) {
    if (a.empty()) throw std::invalid_argument("reduced_symmetric_value: empty family");
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(a[0].size());
    for (const auto& v : a) sum += v;
    double val = sum.squaredNorm();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) val += 2.0 * (a[i] - a[j]).norm();
    return val;
}

VectorAssignment expand_reduced(const std::vector<Eigen::VectorXd>& a,
                                const std::vector<Eigen::VectorXd>& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("expand_reduced: need equal nonempty families");
    const int n = static_cast<int>(a.size());
    const int d = static_cast<int>(a[0].size());
    VectorAssignment asg;
    asg.d = d;
    auto pair_vector = [d](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        Eigen::VectorXd diff = u - v;
        const double nrm = diff.norm();
        if (nrm < 1e-14) return Eigen::VectorXd(Eigen::VectorXd::Unit(d, 0));
        diff /= nrm;
        return diff;
    };
    asg.alice.assign(a.begin(), a.end());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) asg.alice.push_back(pair_vector(b[i], b[j]));
    asg.bob.assign(b.begin(), b.end());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) asg.bob.push_back(pair_vector(a[i], a[j]));
    return asg;
}

SeesawReport seesaw_symmetric(const BellInequality& ineq, const SeesawConfig& config) {
    return drive(ineq, config, true, nullptr);
}

SeesawReport seesaw_symmetric(const BellInequality& ineq, const SeesawConfig& config,
                              const VectorAssignment& start) {
    return drive(ineq, config, true, &start);
}

SeesawReport seesaw_alternating(const BellInequality& ineq, const SeesawConfig& config) {
    return drive(ineq, config, false, nullptr);
}

SeesawReport seesaw_alternating(const BellInequality& ineq, const SeesawConfig& config,
                                const VectorAssignment& start) {
    return drive(ineq, config, false, &start);
}

std::optional<long long> reference_local_bound(const BellInequality& ineq) {
    if (ineq.family_nA > 0)
        return local_bound_kl(ineq.family_nA, ineq.family_nB, ineq.family_marginals).bound;
    if (ineq.mA <= 24) return local_bound_bruteforce(ineq, 1).bound;
    return std::nullopt;
}

double grothendieck_lower_bound(double value, double local_bound) {
    if (!(local_bound > 0))
        throw std::invalid_argument("grothendieck_lower_bound: local bound must be positive");
    return value / local_bound;
}

double critical_visibility(double local_bound, double quantum_value) {
    if (!(local_bound > 0) || !(quantum_value > local_bound))
        throw std::invalid_argument("critical_visibility: requires quantum_value > local_bound > 0");
    return local_bound / quantum_value;
}

VectorAssignment embed_in_dimension(const VectorAssignment& asg, int d_new) {
    if (d_new < asg.d) throw std::invalid_argument("embed_in_dimension: cannot shrink");
    VectorAssignment out;
    out.d = d_new;
    for (const auto* fam : {&asg.alice, &asg.bob}) {
        auto& dst = fam == &asg.alice ? out.alice : out.bob;
        for (const auto& v : *fam) {
            Eigen::VectorXd w = Eigen::VectorXd::Zero(d_new);
            w.head(v.size()) = v;
            dst.push_back(std::move(w));
        }
    }
    return out;
}

} // namespace kgbell
