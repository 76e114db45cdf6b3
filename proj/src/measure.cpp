#include "sqtb/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sqtb {

DiscreteMeasure::DiscreteMeasure(Matrix points, Vector masses)
    : points_(std::move(points)), masses_(std::move(masses)) {
    if (points_.rows() != masses_.size())
        throw std::invalid_argument("measure: point/mass count mismatch");
    if (points_.cols() < 1) throw std::invalid_argument("measure: dimension must be >= 1");
    if ((masses_.array() <= 0.0).any())
        throw std::invalid_argument("measure: all masses must be strictly positive");

    min_separation_ = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < points_.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < points_.rows(); ++j) {
            const double d = (points_.row(i) - points_.row(j)).cwiseAbs().maxCoeff();
            if (d == 0.0) throw std::invalid_argument("measure: atom points must be pairwise distinct");
            min_separation_ = std::min(min_separation_, d);
        }
    }
}

Array DiscreteMeasure::distances_to(const Vector& x) const {
    return (points_.rowwise() - x.transpose()).cwiseAbs().rowwise().maxCoeff().array();
}

std::pair<Vector, Vector> DiscreteMeasure::bounding_box() const {
    return {points_.colwise().minCoeff().transpose(), points_.colwise().maxCoeff().transpose()};
}

double ball_mass(const DiscreteMeasure& mu, const Vector& x, double r) {
    if (r <= 0.0) throw std::invalid_argument("ball_mass: radius must be positive");
    const Array d = mu.distances_to(x);
    return ((d < r).cast<double>() * mu.masses().array()).sum();
}

DominatingFunction DominatingFunction::power_law(double c, double m, double floor) {
    if (c <= 0.0) throw std::invalid_argument("power_law: c must be positive");
    if (m < 0.0) throw std::invalid_argument("power_law: exponent must be nonnegative");
    if (floor < 0.0) throw std::invalid_argument("power_law: floor must be nonnegative");
    if (c == 0.0 && floor == 0.0) throw std::invalid_argument("power_law: identically zero");
    DominatingFunction lam;
    lam.form_ = Form::PowerLaw;
    lam.c_ = c;
    lam.m_ = m;
    lam.floor_ = floor;
    // (c*(2r)^m + floor) / (c*r^m + floor) is a weighted mean of 2^m and 1,
    // so 2^m is always a doubling constant; keep it at least 2.
    lam.c_lambda_ = std::max(std::exp2(m), 2.0);
    return lam;
}

DominatingFunction DominatingFunction::symmetrized(DominatingFunction wrapped,
                                                   std::vector<Vector> candidates) {
    if (candidates.empty()) throw std::invalid_argument("symmetrized: empty candidate list");
    DominatingFunction lam;
    lam.form_ = Form::Symmetrized;
    lam.c_lambda_ = wrapped.c_lambda();
    lam.wrapped_ = std::make_shared<DominatingFunction>(std::move(wrapped));
    lam.candidates_ = std::move(candidates);
    return lam;
}

double DominatingFunction::operator()(const Vector& x, double r) const {
    if (r <= 0.0) throw std::invalid_argument("dominating function: radius must be positive");
    if (form_ == Form::PowerLaw) return c_ * std::pow(r, m_) + floor_;
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& z : candidates_)
        best = std::min(best, (*wrapped_)(z, r + linf_dist(x, z)));
    return best;
}

Array DominatingFunction::evaluate(const Vector& x, const Array& r) const {
    if (form_ == Form::PowerLaw) {
        if (m_ == 0.0) return Array::Constant(r.size(), c_ + floor_);
        if (m_ == 1.0) return c_ * r + floor_;
        if (m_ == 2.0) return c_ * r.square() + floor_;
        return c_ * r.pow(m_) + floor_;
    }
    Array best = Array::Constant(r.size(), std::numeric_limits<double>::infinity());
    for (const Vector& z : candidates_) {
        const double dxz = linf_dist(x, z);
        best = best.min(wrapped_->evaluate(z, r + dxz));
    }
    return best;
}

double doubling_exponent(const DominatingFunction& lam) {
    if (lam.c_lambda() < 1.0)
        throw std::invalid_argument("doubling_exponent: C_lambda must be >= 1");
    return std::log2(lam.c_lambda());
}

DominationReport verify_domination(const DiscreteMeasure& mu, const DominatingFunction& lam,
                                   const std::vector<Vector>& xs,
                                   const std::vector<double>& radii) {
    DominationReport report;
    for (const Vector& x : xs) {
        const Array d = mu.distances_to(x);
        for (double r : radii) {
            const double mass = ((d < r).cast<double>() * mu.masses().array()).sum();
            const double ratio = mass / lam(x, r);
            ++report.samples;
            report.max_ratio = std::max(report.max_ratio, ratio);
            if (ratio > 1.0) report.violations.push_back({x, r, ratio});
        }
    }
    std::stable_sort(report.violations.begin(), report.violations.end(),
                     [](const auto& a, const auto& b) { return a.ratio > b.ratio; });
    return report;
}

std::vector<double> dyadic_radii(int g_max, int s) {
    std::vector<double> radii;
    for (int e = -g_max; e <= s + 1; ++e) radii.push_back(std::exp2(e));
    return radii;
}

std::vector<Vector> domination_sample_points(const DiscreteMeasure& mu, int g_max,
                                             std::size_t max_grid_points) {
    std::vector<Vector> xs;
    for (Eigen::Index i = 0; i < mu.atom_count(); ++i) xs.push_back(mu.atom(i));

    const auto [lo, hi] = mu.bounding_box();
    const double h = std::exp2(-g_max);
    std::size_t per_axis_cap = max_grid_points;
    if (mu.dim() > 1)
        per_axis_cap = static_cast<std::size_t>(
            std::floor(std::pow(double(max_grid_points), 1.0 / mu.dim())));
    std::vector<std::vector<double>> axis_nodes(mu.dim());
    for (int c = 0; c < mu.dim(); ++c) {
        const double span = hi[c] - lo[c];
        std::size_t count = static_cast<std::size_t>(std::floor(span / h)) + 1;
        count = std::min(count, std::max<std::size_t>(per_axis_cap, 2));
        const double step = count > 1 ? span / double(count - 1) : 0.0;
        for (std::size_t i = 0; i < count; ++i) axis_nodes[c].push_back(lo[c] + step * double(i));
    }
    std::vector<std::size_t> cursor(mu.dim(), 0);
    while (true) {
        Vector x(mu.dim());
        for (int c = 0; c < mu.dim(); ++c) x[c] = axis_nodes[c][cursor[c]];
        xs.push_back(std::move(x));
        int c = 0;
        for (; c < mu.dim(); ++c) {
            if (++cursor[c] < axis_nodes[c].size()) break;
            cursor[c] = 0;
        }
        if (c == mu.dim()) break;
    }
    return xs;
}

DominatingFunction symmetrize(const DominatingFunction& lam, std::vector<Vector> candidates) {
    return DominatingFunction::symmetrized(lam, std::move(candidates));
}

MeasureWithLambda lebesgue_surrogate(int k, int n) {
    if (k < 0 || n < 1) throw std::invalid_argument("lebesgue_surrogate: need k >= 0, n >= 1");
    // total = 4^k atoms as an m^n grid
    const double m_real = std::pow(4.0, double(k) / double(n));
    const auto m = static_cast<std::int64_t>(std::llround(m_real));
    double total = 1.0;
    for (int c = 0; c < n; ++c) total *= double(m);
    if (std::llround(total) != std::llround(std::pow(4.0, k)))
        throw std::invalid_argument("lebesgue_surrogate: 4^k is not a perfect n-th power");

    const double h = 1.0 / double(m);
    const auto atom_count = static_cast<Eigen::Index>(std::llround(total));
    Matrix points(atom_count, n);
    std::vector<std::int64_t> cursor(n, 0);
    for (Eigen::Index row = 0; row < atom_count; ++row) {
        for (int c = 0; c < n; ++c) points(row, c) = (double(cursor[c]) + 0.5) * h;
        for (int c = 0; c < n; ++c) {
            if (++cursor[c] < m) break;
            cursor[c] = 0;
        }
    }
    Vector masses = Vector::Constant(atom_count, 1.0 / double(atom_count));
    double spacing_pow = 1.0;
    for (int c = 0; c < n; ++c) spacing_pow *= h;
    auto lam = DominatingFunction::power_law(std::exp2(n), double(n), 2.0 * spacing_pow);
    return {DiscreteMeasure(std::move(points), std::move(masses)), std::move(lam)};
}

MeasureWithLambda cantor_measure(int depth, double ratio) {
    if (depth < 1 || depth > 30) throw std::invalid_argument("cantor_measure: depth out of range");
    if (ratio <= 0.0 || ratio >= 0.5)
        throw std::invalid_argument("cantor_measure: ratio must lie in (0, 1/2)");
    std::vector<double> left_edges{0.0};
    double len = 1.0;
    for (int d = 0; d < depth; ++d) {
        std::vector<double> next;
        next.reserve(2 * left_edges.size());
        for (double a : left_edges) {
            next.push_back(a);
            next.push_back(a + len * (1.0 - ratio));
        }
        left_edges = std::move(next);
        len *= ratio;
    }
    const auto count = static_cast<Eigen::Index>(left_edges.size());
    Matrix points(count, 1);
    for (Eigen::Index i = 0; i < count; ++i) points(i, 0) = left_edges[i] + 0.5 * len;
    Vector masses = Vector::Constant(count, 1.0 / double(count));

    // mass(B(x,r)) ~ r^m with m = log 2 / log(1/ratio); calibrate the
    // leading constant on the coarse scales and let the floor cover the
    // single-atom scale.
    const double m = std::log(2.0) / std::log(1.0 / ratio);
    const double c = 2.0 * std::pow(2.0, m);
    const double floor = 2.0 / double(count);
    auto lam = DominatingFunction::power_law(c, m, floor);
    return {DiscreteMeasure(std::move(points), std::move(masses)), std::move(lam)};
}

MeasureWithLambda point_cloud(int count, int n, std::uint64_t seed) {
    if (count < 1 || n < 1) throw std::invalid_argument("point_cloud: need count >= 1, n >= 1");
    std::mt19937_64 rng(substream(seed, "point_cloud"));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Matrix points(count, n);
    for (Eigen::Index i = 0; i < count; ++i)
        for (int c = 0; c < n; ++c) points(i, c) = uni(rng);
    Vector masses = Vector::Constant(count, 1.0 / double(count));
    DiscreteMeasure mu(std::move(points), std::move(masses));

    // Fit the smallest prefactor c with lambda = c*(2r)^n + floor
    // dominating on atoms x dyadic radii.
    const double floor = 2.0 / double(count);
    double c_fit = 1.0;
    std::vector<Vector> xs;
    for (Eigen::Index i = 0; i < mu.atom_count(); ++i) xs.push_back(mu.atom(i));
    for (double r : dyadic_radii(20, 1)) {
        for (const Vector& x : xs) {
            const double mass = ball_mass(mu, x, r);
            const double base = std::pow(2.0 * r, n);
            if (mass > floor) c_fit = std::max(c_fit, (mass - floor) / base);
        }
    }
    auto lam = DominatingFunction::power_law(c_fit * std::exp2(n) * 1.0000001, double(n), floor);
    return {std::move(mu), std::move(lam)};
}

}  // namespace sqtb
