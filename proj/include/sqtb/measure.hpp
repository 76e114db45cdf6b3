#pragma once

#include "sqtb/types.hpp"

#include <memory>
#include <optional>
#include <stdexcept>

namespace sqtb {

/// Finite atomic Borel measure on R^n under the ell^infinity metric.
/// Atoms are rows of `points`; `masses` holds the strictly positive
/// weights. Immutable after construction.
class DiscreteMeasure {
  public:
    DiscreteMeasure(Matrix points, Vector masses);

    int dim() const { return static_cast<int>(points_.cols()); }
    Eigen::Index atom_count() const { return points_.rows(); }
    const Matrix& points() const { return points_; }
    const Vector& masses() const { return masses_; }
    double total_mass() const { return masses_.sum(); }
    Vector atom(Eigen::Index i) const { return points_.row(i).transpose(); }

    /// ell^infinity distances from x to every atom.
    Array distances_to(const Vector& x) const;

    /// Smallest pairwise ell^infinity distance between atoms (inf for <2 atoms).
    double min_separation() const { return min_separation_; }

    /// Componentwise bounding box of the atom set.
    std::pair<Vector, Vector> bounding_box() const;

  private:
    Matrix points_;
    Vector masses_;
    double min_separation_;
};

/// Open-ball mass mu(B(x,r)) with B the open ell^infinity ball.
double ball_mass(const DiscreteMeasure& mu, const Vector& x, double r);

/// Dominating function lambda(x,r): positive, non-decreasing in r, and
/// doubling with constant C_lambda. Two concrete forms: a power law
/// lambda(x,r) = c*r^m + floor, and a symmetrization of another
/// dominating function over a finite candidate set,
///   Lambda(x,r) = min_z lambda(z, r + |x-z|).
class DominatingFunction {
  public:
    static DominatingFunction power_law(double c, double m, double floor);
    static DominatingFunction symmetrized(DominatingFunction wrapped,
                                          std::vector<Vector> candidates);

    double operator()(const Vector& x, double r) const;
    /// Elementwise evaluation at radii `r` with the same base point.
    Array evaluate(const Vector& x, const Array& r) const;

    double c_lambda() const { return c_lambda_; }
    bool is_power_law() const { return form_ == Form::PowerLaw; }
    /// Power-law kernels do not depend on the base point at all.
    bool depends_on_x() const { return form_ != Form::PowerLaw; }

    double power_c() const { return c_; }
    double power_m() const { return m_; }
    double power_floor() const { return floor_; }
    const std::vector<Vector>& candidates() const { return candidates_; }

  private:
    enum class Form { PowerLaw, Symmetrized };
    Form form_ = Form::PowerLaw;
    double c_ = 1.0, m_ = 0.0, floor_ = 0.0;
    std::shared_ptr<const DominatingFunction> wrapped_;
    std::vector<Vector> candidates_;
    double c_lambda_ = 2.0;
};

/// d = log2(C_lambda). Throws for C_lambda < 1.
double doubling_exponent(const DominatingFunction& lam);

struct DominationWitness {
    Vector x;
    double r = 0.0;
    double ratio = 0.0;
};

struct DominationReport {
    double max_ratio = 0.0;
    std::vector<DominationWitness> violations;  // ratio > 1, worst first
    std::size_t samples = 0;
    bool verified() const { return max_ratio <= 1.0; }
};

/// Checks mu(B(x,r)) <= lambda(x,r) over the sample set xs x radii.
/// Violations are reported, not fatal.
DominationReport verify_domination(const DiscreteMeasure& mu, const DominatingFunction& lam,
                                   const std::vector<Vector>& xs, const std::vector<double>& radii);

/// Default radii sample: dyadic 2^-g_max .. 2^(s+1).
std::vector<double> dyadic_radii(int g_max, int s);

/// Default sample points: atom locations, optionally padded with a
/// uniform grid over the bounding box at resolution 2^-g_max (capped).
std::vector<Vector> domination_sample_points(const DiscreteMeasure& mu, int g_max,
                                             std::size_t max_grid_points = 4096);

/// Symmetrization over a finite candidate set. Candidates default
/// (in callers) to atom locations plus a bounding-box grid.
DominatingFunction symmetrize(const DominatingFunction& lam, std::vector<Vector> candidates);

// Built-in measures. Each returns the measure together with its natural
// dominating function.
struct MeasureWithLambda {
    DiscreteMeasure mu;
    DominatingFunction lam;
};

/// 4^k atoms equispaced in [0,1]^n (per-axis offset half a spacing),
/// equal masses, total mass 1; lambda(x,r) = (2r)^n + 2*spacing^n.
/// Requires 4^k to be a perfect n-th power.
MeasureWithLambda lebesgue_surrogate(int k, int n);

/// Depth-D two-block Cantor construction on [0,1] with contraction
/// `ratio`; 2^D atoms at block centers, mass 2^-D each; natural power
/// law with exponent m = log 2 / log(1/ratio).
MeasureWithLambda cantor_measure(int depth, double ratio);

/// N atoms uniform in [0,1]^n with equal masses; lambda fitted as the
/// smallest power law (2r)^n * c + floor that dominates on the default
/// sample set.
MeasureWithLambda point_cloud(int count, int n, std::uint64_t seed);

}  // namespace sqtb
