#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "kgbell/constructions.hpp"
#include "kgbell/seesaw.hpp"

using namespace kgbell;

TEST_SUITE("constructions") {

TEST_CASE("three-circle spec") {
    auto spec = three_circle_spec();
    REQUIRE(spec.size() == 3);
    CHECK(spec[0].radius == doctest::Approx(0.22));
    CHECK(spec[0].vertex_count == 4);
    CHECK(spec[0].base_angle == doctest::Approx(M_PI / 4));
    CHECK(spec[1].radius == doctest::Approx(0.52));
    CHECK(spec[1].vertex_count == 10);
    CHECK(spec[2].radius == doctest::Approx(0.77));
    CHECK(spec[2].vertex_count == 16);
    CHECK(spec[1].base_angle == doctest::Approx(M_PI / 2));
    CHECK(spec[2].base_angle == doctest::Approx(M_PI / 2));
}

TEST_CASE("three-circle points: unit norm, hemisphere, radii") {
    auto pts = three_circle_points();
    REQUIRE(pts.size() == 30);
    for (const auto& v : pts) {
        REQUIRE(v.size() == 3);
        CHECK(std::abs(v.squaredNorm() - 1.0) < 1e-14);
        CHECK(v[2] > 0); // positive lift
    }
    // planar radii by block
    for (int t = 0; t < 4; ++t) CHECK(std::hypot(pts[t][0], pts[t][1]) == doctest::Approx(0.22));
    for (int t = 4; t < 14; ++t) CHECK(std::hypot(pts[t][0], pts[t][1]) == doctest::Approx(0.52));
    for (int t = 14; t < 30; ++t) CHECK(std::hypot(pts[t][0], pts[t][1]) == doctest::Approx(0.77));
    // first vertex of each circle sits at its base angle
    CHECK(pts[0][0] == doctest::Approx(0.22 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(pts[0][1] == doctest::Approx(0.22 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(pts[4][0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pts[4][1] == doctest::Approx(0.52).epsilon(1e-12));
    CHECK(pts[14][0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pts[14][1] == doctest::Approx(0.77).epsilon(1e-12));
    // the inner square is rotated 45 degrees: vertex 1 lands on the -x axis...
    // base pi/4 + step pi/2 = 3pi/4
    CHECK(pts[1][0] == doctest::Approx(-0.22 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("three-circle configuration beats sqrt(2)") {
    auto pts = three_circle_points();
    const double value = reduced_symmetric_value(pts);
    CHECK(value == doctest::Approx(1273.6787660416117).epsilon(1e-12));
    const double ratio = value / 900.0;
    CHECK(ratio == doctest::Approx(1.4151986289351242).epsilon(1e-12));
    CHECK(ratio > std::sqrt(2.0));
}

TEST_CASE("gram-half vectors") {
    for (int n : {2, 3, 5, 8, 50, 200}) {
        auto vs = gram_half_vectors(n);
        REQUIRE(static_cast<int>(vs.size()) == n);
        for (int i = 0; i < n; ++i) {
            REQUIRE(vs[i].size() == n);
            CHECK(std::abs(vs[i].squaredNorm() - 1.0) < 1e-12);
        }
        // pairwise inner products all 1/2 (factorization reproduces G)
        double worst = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                worst = std::max(worst, std::abs(vs[i].dot(vs[j]) - 0.5));
        CHECK(worst < 1e-12);
        // |sum v_i|^2 = n + 2 C(n,2)/2 = n(n+1)/2
        Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
        for (const auto& v : vs) s += v;
        CHECK(s.squaredNorm() == doctest::Approx(n * (n + 1) / 2.0).epsilon(1e-10));
    }
    // n = 2: explicit lower-triangular factor (1,0), (1/2, sqrt(3)/2)
    auto v2 = gram_half_vectors(2);
    CHECK(v2[0][0] == doctest::Approx(1.0));
    CHECK(v2[0][1] == doctest::Approx(0.0));
    CHECK(v2[1][0] == doctest::Approx(0.5));
    CHECK(v2[1][1] == doctest::Approx(std::sqrt(3.0) / 2));
    CHECK_THROWS_AS(gram_half_vectors(0), std::invalid_argument);
}

TEST_CASE("gram-half family attains the closed-form ratio") {
    for (int n = 2; n <= 8; ++n) {
        auto vs = gram_half_vectors(n);
        const double value = reduced_symmetric_value(vs);
        // |sum|^2 = n(n+1)/2 and every |v_i - v_j| = 1, so
        // value = n(n+1)/2 + 2 C(n,2) * ... ; total n(3n-1)/2
        CHECK(value == doctest::Approx(n * (3 * n - 1) / 2.0).epsilon(1e-12));
        const double ratio = grothendieck_lower_bound(value, static_cast<double>(n) * n);
        CHECK(ratio == doctest::Approx(closed_form_symmetric_ratio(n)).epsilon(1e-12));
    }
    CHECK(closed_form_symmetric_ratio(2) == doctest::Approx(1.25));
    CHECK(closed_form_symmetric_ratio(100) == doctest::Approx(1.495));
}

TEST_CASE("uniform off-diagonal determinant") {
    CHECK(det_uniform_offdiag(2, 1.0, 0.5) == doctest::Approx(0.75));
    CHECK(det_uniform_offdiag(3, 1.0, 1.0) == doctest::Approx(0.0));
    CHECK(det_uniform_offdiag(1, 4.0, 9.0) == doctest::Approx(4.0));
    // against a direct determinant on random parameters
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int n = 2; n <= 8; ++n) {
        const double a = u(rng), b = u(rng);
        Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, b);
        m.diagonal().setConstant(a);
        CHECK(det_uniform_offdiag(n, a, b) ==
              doctest::Approx(m.determinant()).epsilon(1e-9));
    }
    // positive-definiteness window of the half-Gram matrix: det > 0 for all n
    for (int n = 2; n <= 30; ++n) CHECK(det_uniform_offdiag(n, 1.0, 0.5) > 0);
}

TEST_CASE("csv export") {
    auto csv = three_circle_csv();
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "index,x,y");
    int rows = 0;
    std::string row5;
    while (std::getline(is, line)) {
        ++rows;
        if (rows == 5) row5 = line;
    }
    CHECK(rows == 30);
    // row 5 is the first vertex of the middle circle: (0, 0.52)
    double x = 0, y = 0;
    int idx = 0;
    char comma;
    std::istringstream(row5) >> idx >> comma >> x >> comma >> y;
    CHECK(idx == 5);
    CHECK(std::abs(x) < 1e-12);
    CHECK(y == doctest::Approx(0.52).epsilon(1e-12));
}

TEST_CASE("svg export") {
    auto svg = three_circle_svg();
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    // 30 vertex dots + unit circle + three construction circles
    std::size_t count = 0, pos = 0;
    while ((pos = svg.find("<circle", pos)) != std::string::npos) {
        ++count;
        pos += 7;
    }
    CHECK(count == 34);
}

} // TEST_SUITE
