#include "kgbell/constructions.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace kgbell {

std::vector<CircleSpec> three_circle_spec() {
    return {{0.22, 4, M_PI / 4}, {0.52, 10, M_PI / 2}, {0.77, 16, M_PI / 2}};
}

std::vector<Eigen::VectorXd> three_circle_points() {
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(30);
    for (const auto& c : three_circle_spec()) {
        const double step = 2.0 * M_PI / c.vertex_count;
        const double z = std::sqrt(1.0 - c.radius * c.radius);
        for (int t = 0; t < c.vertex_count; ++t) {
            const double phi = c.base_angle + t * step;
            Eigen::VectorXd v(3);
            v << c.radius * std::cos(phi), c.radius * std::sin(phi), z;
            pts.push_back(std::move(v));
        }
    }
    return pts;
}

std::vector<Eigen::VectorXd> gram_half_vectors(int n) {
    if (n < 1) throw std::invalid_argument("gram_half_vectors: n must be >= 1");
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(n, n, 0.5);
    g.diagonal().setOnes();
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("gram_half_vectors: factorization failed");
    Eigen::MatrixXd l = llt.matrixL();
    std::vector<Eigen::VectorXd> vs;
    vs.reserve(n);
    for (int i = 0; i < n; ++i) vs.push_back(l.row(i).transpose());
    return vs;
}

double det_uniform_offdiag(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("det_uniform_offdiag: n must be >= 1");
    return std::pow(a - b, n - 1) * (a + (n - 1) * b);
}

double closed_form_symmetric_ratio(int n) {
    if (n < 1) throw std::invalid_argument("closed_form_symmetric_ratio: n must be >= 1");
    return 1.5 - 0.5 / n;
}

std::string three_circle_csv() {
    std::ostringstream os;
    os << "index,x,y\n";
    char buf[80];
    int idx = 0;
    for (const auto& p : three_circle_points()) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", ++idx, p.x(), p.y());
        os << buf;
    }
    return os.str();
}

std::string three_circle_svg() {
    // 440x440 canvas, unit disc mapped to radius 200 around the center
    const double cx = 220, cy = 220, scale = 200;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"440\" height=\"440\" "
          "viewBox=\"0 0 440 440\">\n"
       << "<rect width=\"440\" height=\"440\" fill=\"white\"/>\n"
       << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << scale
       << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    for (const auto& c : three_circle_spec())
        os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << c.radius * scale
           << "\" fill=\"none\" stroke=\"gray\" stroke-width=\"0.8\" "
              "stroke-dasharray=\"4 3\"/>\n";
    char buf[160];
    for (const auto& p : three_circle_points()) {
        // y grows downward in SVG
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.4f\" cy=\"%.4f\" r=\"3.5\" fill=\"black\"/>\n",
                      cx + scale * p.x(), cy - scale * p.y());
        os << buf;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace kgbell
