#pragma once

#include "sqtb/types.hpp"

#include <functional>
#include <optional>
#include <string>

namespace sqtb {

/// Parameters of a truncated random shifted dyadic grid.
///
/// Generations j run from -s (sidelength 2^s) down to g_max (sidelength
/// 2^-g_max); gamma = alpha/(2d + 2alpha) is the goodness exponent and r
/// the goodness scale gap.
struct GridParams {
    double alpha = 1.0;
    double d = 1.0;
    double gamma = 0.25;
    int r = 3;
    int s = 0;
    int g_max = 9;

    GridParams() = default;
    GridParams(double alpha, double d, int r, int s, int g_max);

    int coarsest_gen() const { return -s; }
    int finest_gen() const { return g_max; }
    int scale_count() const { return g_max + s; }  // shift scales i in [-s+1, g_max]
    double side(int gen) const { return std::exp2(-gen); }
};

/// Badness threshold ell(Q)^gamma * ell(Qt)^(1-gamma) for generations
/// (j, j_tilde), evaluated through one canonical formula so that every
/// classifier path agrees bit for bit.
double badness_threshold(const GridParams& p, int j, int j_tilde);

/// Truncated random shift: one bit vector in {0,1}^n per scale index i
/// with 2^-i in [2^-g_max, 2^s).
class ShiftSequence {
  public:
    ShiftSequence(const GridParams& p, int dim);  // all-zero bits

    /// Bits derived independently per (scale, component) from the seed, so
    /// enlarging the scale window keeps all shared bits identical.
    static ShiftSequence random(const GridParams& p, int dim, std::uint64_t seed);

    int dim() const { return dim_; }
    int scale_min() const { return scale_min_; }  // = -s + 1
    int scale_max() const { return scale_max_; }  // = g_max
    int bit(int scale, int comp) const;
    void set_bit(int scale, int comp, int value);

    /// Hex-packed bits per component, finest scale first.
    std::vector<std::string> to_hex() const;
    static ShiftSequence from_hex(const GridParams& p, const std::vector<std::string>& hex);

  private:
    int dim_;
    int scale_min_, scale_max_;
    Eigen::MatrixXi bits_;  // rows: scales, cols: components
};

/// Axis-aligned half-open box [lo, lo+side)^n.
struct Box {
    Vector lo;
    double side = 1.0;

    Vector center() const { return lo + Vector::Constant(lo.size(), side / 2.0); }
    Vector hi() const { return lo + Vector::Constant(lo.size(), side); }
    bool contains(const Vector& x) const {
        return (x.array() >= lo.array()).all() && (x.array() < lo.array() + side).all();
    }
};

/// Concentric box with sidelength kappa * side (the "kappa Q" of testing
/// conditions).
Box enlarged(const Box& b, double kappa);

/// ell^infinity distance between closed boxes (0 when they meet).
double box_dist(const Box& a, const Box& b);

/// Long distance D(Q,R) = ell(Q) + ell(R) + d(Q,R).
double long_dist(const Box& a, const Box& b);

/// ell^infinity distance from box `q` to the topological boundary of
/// `big` (0 when q meets the boundary).
double boundary_dist(const Box& q, const Box& big);

/// A cube of the shifted grid: generation, lattice index, and the
/// resolved box.
struct Cube {
    CubeKey key;
    Box box;

    int gen() const { return key.gen; }
    double side() const { return box.side; }
    Vector center() const { return box.center(); }
};

/// Region of the upper half-space over a box. The t-interval is treated
/// as half-open (t_lo, t_hi] so that Whitney regions of one grid tile
/// exactly.
struct Region {
    enum class Kind { whitney, carleson };
    Box box;
    double t_lo = 0.0;
    double t_hi = 1.0;
    Kind kind = Kind::whitney;

    bool contains(const Vector& x, double t) const {
        return box.contains(x) && t > t_lo && t <= t_hi;
    }
};

struct GoodnessEstimate {
    double p = 1.0;
    double stderr_ = 0.0;
    std::string method;  // "enumerate" | "monte_carlo" | "vacuous"
};

/// One realization of the truncated random shifted dyadic grid D(w).
class ShiftedGrid {
  public:
    ShiftedGrid(GridParams params, ShiftSequence shifts);

    const GridParams& params() const { return params_; }
    const ShiftSequence& shifts() const { return shifts_; }
    int dim() const { return shifts_.dim(); }

    /// Shift offset of generation j: sum of 2^-i w_i over scales finer
    /// than the cube (truncated at g_max).
    const Vector& offset(int gen) const;

    Cube cube_at(int gen, const IndexVec& idx) const;
    Cube cube_containing(int gen, const Vector& x) const;
    std::vector<Cube> children(const Cube& q) const;
    Cube ancestor(const Cube& q, int k) const;

    /// Bad iff some cube with ell(Qt) >= 2^r ell(Q) has boundary within
    /// ell(Q)^gamma ell(Qt)^(1-gamma); returns a witness when bad. Cubes
    /// whose candidate window exceeds the truncation are good by
    /// convention.
    bool is_bad(const Cube& q, std::optional<Cube>* witness = nullptr) const;
    bool is_good(const Cube& q) const { return !is_bad(q); }

    Region whitney(const Cube& q) const;
    Region carleson_box(const Box& b) const;
    Region carleson_box(const Cube& q) const { return carleson_box(q.box); }

  private:
    GridParams params_;
    ShiftSequence shifts_;
    std::vector<Vector> offsets_;  // index 0 <-> generation -s
};

namespace detail {
/// Classifier with a caller-supplied threshold tau(j, j_tilde); the
/// public is_bad uses badness_threshold. Exposed for degenerate-threshold
/// cross-checks.
bool is_bad_with_threshold(const ShiftedGrid& grid, const Cube& q,
                           const std::function<double(int, int)>& tau,
                           std::optional<Cube>* witness = nullptr);
}  // namespace detail

/// P(generation-j cube is good) for the truncated grid, independent of
/// the lattice index. `enumerate` is exact over all shift patterns
/// (requires dim*(j+s) <= 22); `monte_carlo` classifies real cubes under
/// N seeded draws.
GoodnessEstimate goodness_probability_enumerate(const GridParams& p, int dim, int gen);
GoodnessEstimate goodness_probability_monte_carlo(const GridParams& p, int dim, int gen,
                                                  std::size_t trials, std::uint64_t seed);

/// Smallest r with 2^(r(1-gamma)) >= 3 whose estimated goodness
/// probability at the finest tracked generation exceeds `p_floor`.
int choose_r(double alpha, double d, int dim, int s, int g_max, double p_floor = 0.1);

}  // namespace sqtb
