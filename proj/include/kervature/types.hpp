#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kervature {

using Complex = std::complex<double>;
using Point = Eigen::VectorXcd;   // a point of C^m
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/** Open domain the kernel lives on.  All evaluations require strict interior points. */
struct Domain {
    enum class Kind { Disc, Polydisc, Ball };
    Kind kind = Kind::Disc;
    int dim = 1;

    static Domain disc() { return {Kind::Disc, 1}; }
    static Domain polydisc(int d);
    static Domain ball(int m);   // ball(1) collapses to disc

    bool contains(const Point& z) const;
    std::string str() const;
    bool operator==(const Domain&) const = default;
};

inline Domain Domain::polydisc(int d) {
    if (d < 1) throw std::invalid_argument("polydisc dimension must be >= 1");
    return d == 1 ? disc() : Domain{Kind::Polydisc, d};
}

inline Domain Domain::ball(int m) {
    if (m < 1) throw std::invalid_argument("ball dimension must be >= 1");
    return m == 1 ? disc() : Domain{Kind::Ball, m};
}

inline bool Domain::contains(const Point& z) const {
    if (z.size() != dim) return false;
    switch (kind) {
        case Kind::Disc:
            return std::abs(z[0]) < 1.0;
        case Kind::Polydisc:
            for (Index i = 0; i < z.size(); ++i)
                if (std::abs(z[i]) >= 1.0) return false;
            return true;
        case Kind::Ball:
            return z.squaredNorm() < 1.0;
    }
    return false;
}

inline std::string Domain::str() const {
    switch (kind) {
        case Kind::Disc: return "disc";
        case Kind::Polydisc: return "polydisc(" + std::to_string(dim) + ")";
        case Kind::Ball: return "ball(" + std::to_string(dim) + ")";
    }
    return "?";
}

/// Product of two domains, used by tensor kernels.  Only disc/polydisc factors
/// combine into a named domain; ball factors have no product counterpart here.
inline Domain domain_product(const Domain& a, const Domain& b) {
    if (a.kind == Domain::Kind::Ball || b.kind == Domain::Kind::Ball)
        throw std::invalid_argument("tensor of ball domains is not supported");
    return Domain::polydisc(a.dim + b.dim);
}

inline Point point1(Complex z) {
    Point p(1);
    p[0] = z;
    return p;
}

inline Point point2(Complex z1, Complex z2) {
    Point p(2);
    p[0] = z1;
    p[1] = z2;
    return p;
}

}  // namespace kervature
