#include "mcalc/numcheck/fd.hpp"

namespace mcalc::numcheck {

double fd_step_first(const Matrix& x) {
    return std::cbrt(std::numeric_limits<double>::epsilon()) * (1 + x.norm());
}

double fd_step_second(const Matrix& x) {
    return std::pow(std::numeric_limits<double>::epsilon(), 0.25) * (1 + x.norm());
}

namespace {

void require_decreasing(const std::vector<Matrix>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!(pts[i].norm() > 0)) throw Error("sequence points must be non-zero");
        if (i > 0 && !(pts[i].norm() < pts[i - 1].norm())) throw Error("sequence norms must strictly decrease");
    }
}

}  // namespace

CurveSequence CurveSequence::straight(const Matrix& z, int count) {
    CurveSequence s{Kind::Straight, "straight", {}};
    for (int n = 1; n <= count; ++n) s.points.push_back(std::pow(10.0, -n) * z);
    require_decreasing(s.points);
    return s;
}

CurveSequence CurveSequence::curved(const Matrix& z, const Matrix& w, int count) {
    CurveSequence s{Kind::Curved, "curved", {}};
    for (int n = 1; n <= count; ++n) {
        const double t = std::pow(10.0, -n);
        s.points.push_back(t * z + t * t * w);
    }
    require_decreasing(s.points);
    return s;
}

CurveSequence CurveSequence::custom(std::string label, std::vector<Matrix> points) {
    require_decreasing(points);
    return {Kind::Custom, std::move(label), std::move(points)};
}

std::vector<double> frechet_remainder(const std::function<Matrix(const Matrix&)>& fn,
                                      const std::function<Matrix(const Matrix&)>& candidate, const Matrix& x,
                                      const CurveSequence& seq) {
    const Matrix f0 = fn(x);
    if (!f0.allFinite()) throw NonFiniteValue("function is not finite at X");
    std::vector<double> ratios;
    ratios.reserve(seq.points.size());
    for (const Matrix& z : seq.points) {
        const Matrix fz = fn(x + z);
        const Matrix az = candidate(z);
        if (!fz.allFinite() || !az.allFinite()) throw NonFiniteValue("non-finite value along the sequence");
        ratios.push_back((fz - f0 - az).norm() / z.norm());
    }
    return ratios;
}

}  // namespace mcalc::numcheck
