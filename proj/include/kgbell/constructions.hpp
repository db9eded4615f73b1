#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

// Hand-built unit-vector families used as references and warm starts for the
// iterative optimizer: the 30-point three-circle configuration on the upper
// hemisphere and the Gram factorization with all pairwise inner products 1/2.

namespace kgbell {

struct CircleSpec {
    double radius = 0;      // distance of the planar circle from the z-axis, in (0,1)
    int vertex_count = 0;   // regular polygon size
    double base_angle = 0;  // azimuth of the first vertex, radians
};

// (0.22, 4, pi/4), (0.52, 10, pi/2), (0.77, 16, pi/2)
std::vector<CircleSpec> three_circle_spec();

// 30 unit vectors: vertex t of a circle sits at azimuth base + t*2*pi/count,
// planar radius rho, lifted to the sphere with z = +sqrt(1 - rho^2)
std::vector<Eigen::VectorXd> three_circle_points();

// n unit vectors in R^n with a_i . a_j = 1/2 for every i != j, obtained by
// Cholesky-factorizing the Gram matrix with unit diagonal and 1/2 elsewhere
std::vector<Eigen::VectorXd> gram_half_vectors(int n);

// closed form for det of the n x n matrix with a on the diagonal and b off
// it: (a-b)^(n-1) * (a + (n-1) b)
double det_uniform_offdiag(int n, double a, double b);

// ceiling of the symmetric family's vector-to-classical ratio when the
// dimension matches the plain setting count: 3/2 - 1/(2n)
double closed_form_symmetric_ratio(int n);

// planar projections of the 30 points: "index,x,y" rows, 1-based index
std::string three_circle_csv();
// standalone figure: unit circle, the three construction circles, 30 dots
std::string three_circle_svg();

} // namespace kgbell
