#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "kgbell/bell.hpp"
#include "kgbell/certify.hpp"
#include "kgbell/constructions.hpp"
#include "kgbell/seesaw.hpp"

using namespace kgbell;

namespace {

VectorAssignment random_assignment(int mA, int mB, int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    auto draw = [&](int count) {
        std::vector<Eigen::VectorXd> out;
        for (int i = 0; i < count; ++i) {
            Eigen::VectorXd v(d);
            do {
                for (int k = 0; k < d; ++k) v[k] = g(rng);
            } while (v.norm() < 1e-8);
            v.normalize();
            out.push_back(std::move(v));
        }
        return out;
    };
    VectorAssignment asg;
    asg.d = d;
    asg.alice = draw(mA);
    asg.bob = draw(mB);
    return asg;
}

} // namespace

TEST_SUITE("certify") {

TEST_CASE("symmetric embedding layout") {
    auto q = chsh();
    auto mt = symmetric_embedding(q);
    REQUIRE(mt.rows() == 4);
    // [[0, M/2], [M^T/2, 0]]
    Eigen::MatrixXd expect(4, 4);
    expect << 0, 0, 0.5, 0.5,
              0, 0, 0.5, -0.5,
              0.5, 0.5, 0, 0,
              0.5, -0.5, 0, 0;
    CHECK((mt - expect).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK((mt - mt.transpose()).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    // sparse variant agrees entrywise
    Eigen::MatrixXd ms(symmetric_embedding_sparse(q));
    CHECK((mt - ms).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    // quadratic form against stacked vectors reproduces the objective
    auto asg = random_assignment(2, 2, 3, 5);
    Eigen::MatrixXd v(4, 3);
    v.row(0) = asg.alice[0];
    v.row(1) = asg.alice[1];
    v.row(2) = asg.bob[0];
    v.row(3) = asg.bob[1];
    CHECK((v.transpose() * mt * v).trace() == doctest::Approx(evaluate(q, asg)).epsilon(1e-12));
}

TEST_CASE("dense minimum eigenvalue") {
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(6, 6);
    CHECK(min_eigenvalue_symmetric(id) == doctest::Approx(1.0));
    Eigen::MatrixXd d3 = Eigen::Vector3d(3, -2, 5).asDiagonal();
    CHECK(min_eigenvalue_symmetric(d3) == doctest::Approx(-2.0));
    Eigen::MatrixXd ns(2, 2);
    ns << 0, 1, 2, 0;
    CHECK_THROWS_AS(min_eigenvalue_symmetric(ns), std::invalid_argument);
}

TEST_CASE("iterative minimum eigenvalue matches the dense solver") {
    // random sparse symmetric matrix just over the dense-path limit
    const int n = 1100;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<Eigen::Triplet<double>> ts;
    for (int i = 0; i < n; ++i) ts.emplace_back(i, i, 2.0 + u(rng));
    for (int e = 0; e < 4 * n; ++e) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        const double v = u(rng);
        ts.emplace_back(i, j, v);
        ts.emplace_back(j, i, v);
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(ts.begin(), ts.end()); // duplicates accumulate, symmetry preserved
    // independent reference: full dense eigendecomposition
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(a), Eigen::EigenvaluesOnly);
    REQUIRE(es.info() == Eigen::Success);
    const double direct = es.eigenvalues()(0);
    const double sparse_path = min_eigenvalue_symmetric(a);           // n > limit: Lanczos
    const double dense_path = min_eigenvalue_symmetric(Eigen::MatrixXd(a)); // same, dense storage
    // the iterative results are conservative: below the truth, but close
    CHECK(sparse_path <= direct + 1e-12);
    CHECK(sparse_path == doctest::Approx(direct).epsilon(5e-5));
    CHECK(dense_path == doctest::Approx(direct).epsilon(5e-5));
    // below the limit the dense solver is used as-is
    Eigen::MatrixXd small = Eigen::MatrixXd(a).topLeftCorner(300, 300);
    Eigen::MatrixXd small_sym = 0.5 * (small + small.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(small_sym, Eigen::EigenvaluesOnly);
    CHECK(min_eigenvalue_symmetric(small_sym) == doctest::Approx(es2.eigenvalues()(0)));
}

TEST_CASE("certificate at the CHSH maximum is exact") {
    VectorAssignment asg;
    asg.d = 2;
    const double s = 1.0 / std::sqrt(2.0);
    asg.alice = {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
    asg.bob = {Eigen::Vector2d(s, s), Eigen::Vector2d(s, -s)};
    auto cert = certificate_from_fixed_point(chsh(), asg);
    CHECK(cert.verified);
    CHECK(cert.bound == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(cert.gap == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cert.shift == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cert.lambda.minCoeff() >= 0);
    CHECK(cert.lambda.size() == 4);
    // every lambda_i = sqrt(2)/2 at the maximum
    for (int i = 0; i < 4; ++i) CHECK(cert.lambda[i] == doctest::Approx(s).epsilon(1e-12));

    // the crude spectral bound it refines: (mA+mB) * lambda_max(Mt) >= value
    auto mt = symmetric_embedding(chsh());
    const double lmax = -min_eigenvalue_symmetric(Eigen::MatrixXd(-mt));
    CHECK(4 * lmax >= cert.value_at_point - 1e-12);
    CHECK(4 * lmax == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("half-Gram fixed points certify their own value") {
    for (int n = 2; n <= 6; ++n) {
        auto q = build_inequality(n, n);
        auto vs = gram_half_vectors(n);
        auto asg = expand_reduced(vs, vs);
        auto cert = certificate_from_fixed_point(q, asg);
        const double exact = n * (3 * n - 1) / 2.0;
        CAPTURE(n);
        CHECK(cert.verified);
        CHECK(cert.value_at_point == doctest::Approx(exact).epsilon(1e-12));
        CHECK(cert.bound >= exact - 1e-9); // upper bounds never dip below the value
        CHECK(cert.bound <= exact + 1e-5); // and here they are essentially exact
        CHECK(cert.gap >= -1e-12);
        CHECK(cert.gap < 1e-5);
        // dual weights carry the embedding's factor 1/2: n/2 per plain
        // setting, 1/2 per composite; the two parties' sums give n(3n-1)/2
        for (int i = 0; i < n; ++i)
            CHECK(cert.lambda[i] == doctest::Approx(n / 2.0).epsilon(1e-9));
        for (int i = n; i < q.mA; ++i)
            CHECK(cert.lambda[i] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(cert.lambda.sum() == doctest::Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("see-saw plus certificate brackets the rectangular optimum") {
    auto q = build_inequality(5, 4);
    SeesawConfig cfg;
    cfg.d = 25; // full dimension: the see-saw reaches the true vector maximum
    cfg.restarts = 8;
    auto rep = seesaw_alternating(q, cfg);
    CHECK(rep.value == doctest::Approx(28.390139133).epsilon(1e-6));
    auto cert = certificate_from_fixed_point(q, rep.assignment);
    CHECK(cert.verified);
    CHECK(cert.bound >= rep.value - 1e-12);
    CHECK(cert.bound <= 28.4002);
    CHECK(cert.gap < 1e-3);
    CHECK(cert.gap >= -1e-12);
}

TEST_CASE("a restricted-dimension fixed point still gives a sound bound") {
    // at d = 4 the iteration converges to a genuinely lower stationary value;
    // the certificate from that point stays a valid upper bound on the
    // unrestricted maximum, just with a visible gap
    auto q = build_inequality(5, 4);
    SeesawConfig cfg;
    cfg.d = 4;
    cfg.restarts = 1; // deterministic indexed start
    auto rep = seesaw_alternating(q, cfg);
    CHECK(rep.value == doctest::Approx(28.300876490767).epsilon(1e-9));
    auto cert = certificate_from_fixed_point(q, rep.assignment);
    CHECK(cert.verified);
    CHECK(cert.bound >= 28.390139133 - 1e-9); // still above the true maximum
    CHECK(cert.gap > 0.5);                    // but far from certifying this point
}

TEST_CASE("random assignments never exceed a verified bound") {
    auto q = build_inequality(3, 3);
    SeesawConfig cfg;
    cfg.d = 3;
    cfg.restarts = 4;
    auto rep = seesaw_symmetric(q, cfg);
    auto cert = certificate_from_fixed_point(q, rep.assignment);
    REQUIRE(cert.verified);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + trial % 5;
        auto asg = random_assignment(q.mA, q.mB, d, 300 + trial);
        CHECK(evaluate(q, asg) <= cert.bound + 1e-8);
    }
}

TEST_CASE("diagonal shift moves the spectrum linearly") {
    auto q = build_inequality(3, 3);
    auto asg = random_assignment(q.mA, q.mB, 3, 17);
    auto cert = certificate_from_fixed_point(q, asg); // generic point: nonzero shift
    CHECK(cert.shift > 0);
    CHECK(cert.verified);
    CHECK(cert.bound == doctest::Approx(cert.lambda.sum() + (q.mA + q.mB) * cert.shift));
    // adding delta on top of the certified diagonal raises the minimum
    // eigenvalue by exactly delta
    Eigen::MatrixXd z = Eigen::MatrixXd((cert.lambda.array() + cert.shift + 0.25)
                                            .matrix()
                                            .asDiagonal()) -
                        symmetric_embedding(q);
    CHECK(min_eigenvalue_symmetric(z) ==
          doctest::Approx(cert.residual_min_eigenvalue + 0.25).epsilon(1e-9));
}

TEST_CASE("certificate rejects non-unit input") {
    auto q = chsh();
    auto asg = random_assignment(2, 2, 2, 1);
    asg.alice[0] *= 1.5;
    CHECK_THROWS_AS(certificate_from_fixed_point(q, asg), std::invalid_argument);
}

} // TEST_SUITE
