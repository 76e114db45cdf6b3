#include "sqtb/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace sqtb {

GridParams::GridParams(double alpha_, double d_, int r_, int s_, int g_max_)
    : alpha(alpha_), d(d_), r(r_), s(s_), g_max(g_max_) {
    if (alpha <= 0.0) throw std::invalid_argument("grid: alpha must be positive");
    if (d < 0.0) throw std::invalid_argument("grid: d must be nonnegative");
    gamma = alpha / (2.0 * d + 2.0 * alpha);
    if (!(gamma > 0.0 && gamma <= 0.5)) throw std::invalid_argument("grid: gamma out of (0, 1/2]");
    if (r < 1) throw std::invalid_argument("grid: r must be >= 1");
    if (std::exp2(double(r) * (1.0 - gamma)) < 3.0)
        throw std::invalid_argument("grid: 2^(r(1-gamma)) >= 3 required");
    if (g_max + s < 1) throw std::invalid_argument("grid: coarse scale must exceed fine scale");
}

double badness_threshold(const GridParams& p, int j, int j_tilde) {
    return std::exp2(-p.gamma * double(j) - (1.0 - p.gamma) * double(j_tilde));
}

// ---------------------------------------------------------------------
// ShiftSequence
// ---------------------------------------------------------------------

ShiftSequence::ShiftSequence(const GridParams& p, int dim)
    : dim_(dim), scale_min_(-p.s + 1), scale_max_(p.g_max) {
    if (dim < 1) throw std::invalid_argument("shift: dimension must be >= 1");
    bits_ = Eigen::MatrixXi::Zero(p.scale_count(), dim);
}

ShiftSequence ShiftSequence::random(const GridParams& p, int dim, std::uint64_t seed) {
    ShiftSequence seq(p, dim);
    for (int i = seq.scale_min_; i <= seq.scale_max_; ++i) {
        for (int c = 0; c < dim; ++c) {
            // keyed by absolute scale so window growth keeps shared bits
            const auto key = std::uint64_t(std::int64_t(i) + (1 << 20)) * 64u + std::uint64_t(c);
            seq.set_bit(i, c, int(substream(seed, key) & 1u));
        }
    }
    return seq;
}

int ShiftSequence::bit(int scale, int comp) const {
    if (scale < scale_min_ || scale > scale_max_) throw std::out_of_range("shift: scale out of range");
    return bits_(scale - scale_min_, comp);
}

void ShiftSequence::set_bit(int scale, int comp, int value) {
    if (scale < scale_min_ || scale > scale_max_) throw std::out_of_range("shift: scale out of range");
    bits_(scale - scale_min_, comp) = value ? 1 : 0;
}

std::vector<std::string> ShiftSequence::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::vector<std::string> out(dim_);
    const int nbits = scale_max_ - scale_min_ + 1;
    for (int c = 0; c < dim_; ++c) {
        std::string hex;
        for (int base = 0; base < nbits; base += 4) {
            int nibble = 0;
            for (int k = 0; k < 4; ++k) {
                const int pos = base + k;  // 0 <-> finest scale
                if (pos >= nbits) continue;
                nibble |= bit(scale_max_ - pos, c) << k;
            }
            hex.push_back(digits[nibble]);
        }
        out[c] = hex;
    }
    return out;
}

ShiftSequence ShiftSequence::from_hex(const GridParams& p, const std::vector<std::string>& hex) {
    ShiftSequence seq(p, static_cast<int>(hex.size()));
    const int nbits = seq.scale_max_ - seq.scale_min_ + 1;
    for (int c = 0; c < seq.dim_; ++c) {
        for (int pos = 0; pos < nbits; ++pos) {
            const std::size_t digit = pos / 4;
            if (digit >= hex[c].size()) throw std::invalid_argument("shift: hex string too short");
            const char ch = hex[c][digit];
            int nibble;
            if (ch >= '0' && ch <= '9') nibble = ch - '0';
            else if (ch >= 'a' && ch <= 'f') nibble = 10 + ch - 'a';
            else if (ch >= 'A' && ch <= 'F') nibble = 10 + ch - 'A';
            else throw std::invalid_argument("shift: invalid hex digit");
            seq.set_bit(seq.scale_max_ - pos, c, (nibble >> (pos % 4)) & 1);
        }
    }
    return seq;
}

// ---------------------------------------------------------------------
// Box geometry
// ---------------------------------------------------------------------

Box enlarged(const Box& b, double kappa) {
    if (kappa <= 0.0) throw std::invalid_argument("enlarged: kappa must be positive");
    Box out;
    out.side = kappa * b.side;
    out.lo = b.center() - Vector::Constant(b.lo.size(), out.side / 2.0);
    return out;
}

double box_dist(const Box& a, const Box& b) {
    double dist = 0.0;
    for (Eigen::Index c = 0; c < a.lo.size(); ++c) {
        const double gap =
            std::max({0.0, a.lo[c] - (b.lo[c] + b.side), b.lo[c] - (a.lo[c] + a.side)});
        dist = std::max(dist, gap);
    }
    return dist;
}

double long_dist(const Box& a, const Box& b) { return a.side + b.side + box_dist(a, b); }

namespace {

double interval_point_dist(double lo, double hi, double p) {
    return std::max({0.0, lo - p, p - hi});
}

double interval_gap(double alo, double ahi, double blo, double bhi) {
    return std::max({0.0, alo - bhi, blo - ahi});
}

}  // namespace

double boundary_dist(const Box& q, const Box& big) {
    const Eigen::Index n = q.lo.size();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < n; ++c) {
        for (double face : {big.lo[c], big.lo[c] + big.side}) {
            double d = interval_point_dist(q.lo[c], q.lo[c] + q.side, face);
            for (Eigen::Index c2 = 0; c2 < n; ++c2) {
                if (c2 == c) continue;
                d = std::max(d, interval_gap(q.lo[c2], q.lo[c2] + q.side, big.lo[c2],
                                             big.lo[c2] + big.side));
            }
            best = std::min(best, d);
        }
    }
    return best;
}

// ---------------------------------------------------------------------
// ShiftedGrid
// ---------------------------------------------------------------------

ShiftedGrid::ShiftedGrid(GridParams params, ShiftSequence shifts)
    : params_(params), shifts_(std::move(shifts)) {
    const int n = shifts_.dim();
    offsets_.assign(params_.scale_count() + 1, Vector::Zero(n));
    // offsets_[gen + s]; finest generation has the empty-sum offset
    for (int gen = params_.g_max - 1; gen >= -params_.s; --gen) {
        Vector o = offsets_[gen + 1 + params_.s];
        const double scale = std::exp2(-(gen + 1));
        for (int c = 0; c < n; ++c) o[c] += scale * shifts_.bit(gen + 1, c);
        offsets_[gen + params_.s] = std::move(o);
    }
}

const Vector& ShiftedGrid::offset(int gen) const {
    if (gen < -params_.s || gen > params_.g_max)
        throw std::out_of_range("grid: generation outside truncation");
    return offsets_[gen + params_.s];
}

Cube ShiftedGrid::cube_at(int gen, const IndexVec& idx) const {
    const Vector& off = offset(gen);
    if (static_cast<int>(idx.size()) != dim()) throw std::invalid_argument("cube: index dimension");
    Cube q;
    q.key = {gen, idx};
    q.box.side = params_.side(gen);
    q.box.lo = Vector(dim());
    for (int c = 0; c < dim(); ++c) q.box.lo[c] = q.box.side * double(idx[c]) + off[c];
    return q;
}

Cube ShiftedGrid::cube_containing(int gen, const Vector& x) const {
    const Vector& off = offset(gen);
    const double inv = std::exp2(gen);
    IndexVec idx(dim());
    for (int c = 0; c < dim(); ++c)
        idx[c] = static_cast<std::int64_t>(std::floor((x[c] - off[c]) * inv));
    return cube_at(gen, idx);
}

std::vector<Cube> ShiftedGrid::children(const Cube& q) const {
    const int child_gen = q.gen() + 1;
    if (child_gen > params_.g_max) throw std::out_of_range("children: below finest generation");
    std::vector<Cube> out;
    out.reserve(std::size_t(1) << dim());
    IndexVec base(dim());
    for (int c = 0; c < dim(); ++c) base[c] = 2 * q.key.idx[c] + shifts_.bit(child_gen, c);
    IndexVec e(dim(), 0);
    while (true) {
        IndexVec idx(dim());
        for (int c = 0; c < dim(); ++c) idx[c] = base[c] + e[c];
        out.push_back(cube_at(child_gen, idx));
        int c = 0;
        for (; c < dim(); ++c) {
            if (++e[c] <= 1) break;
            e[c] = 0;
        }
        if (c == dim()) break;
    }
    return out;
}

Cube ShiftedGrid::ancestor(const Cube& q, int k) const {
    if (k < 0) throw std::invalid_argument("ancestor: k must be >= 0");
    if (q.gen() - k < -params_.s) throw std::out_of_range("ancestor: above coarsest generation");
    IndexVec idx = q.key.idx;
    for (int gen = q.gen(); gen > q.gen() - k; --gen) {
        for (int c = 0; c < dim(); ++c) {
            // children of (gen-1, p) have indices 2p + w_gen + {0,1}
            idx[c] = (idx[c] - shifts_.bit(gen, c)) >> 1;
        }
    }
    return cube_at(q.gen() - k, idx);
}

namespace {

struct LatticeHit {
    double dist = 0.0;
    double plane = 0.0;  // offending hyperplane coordinate
};

// Distance from the closed interval [a, b] to the lattice {L*m + off}.
LatticeHit lattice_dist(double a, double b, double L, double off) {
    const double u = (a - off) / L;
    const double v = (b - off) / L;
    const double cu = std::ceil(u), fv = std::floor(v);
    if (cu <= fv) return {0.0, L * cu + off};
    const double below = (u - std::floor(u)) * L;
    const double above = (std::ceil(v) - v) * L;
    if (below <= above) return {below, L * std::floor(u) + off};
    return {above, L * std::ceil(v) + off};
}

}  // namespace

namespace detail {

bool is_bad_with_threshold(const ShiftedGrid& grid, const Cube& q,
                           const std::function<double(int, int)>& tau,
                           std::optional<Cube>* witness) {
    const GridParams& p = grid.params();
    const int j = q.gen();
    for (int jt = -p.s; jt <= j - p.r; ++jt) {
        const double threshold = tau(j, jt);
        const double L = p.side(jt);
        const Vector& off = grid.offset(jt);
        for (int c = 0; c < grid.dim(); ++c) {
            const LatticeHit hit =
                lattice_dist(q.box.lo[c], q.box.lo[c] + q.box.side, L, off[c]);
            if (hit.dist <= threshold) {
                if (witness) {
                    // cube at generation jt whose lower face lies on the
                    // offending hyperplane, aligned with q elsewhere
                    IndexVec idx(grid.dim());
                    const Vector center = q.center();
                    for (int c2 = 0; c2 < grid.dim(); ++c2)
                        idx[c2] = static_cast<std::int64_t>(
                            std::floor((center[c2] - off[c2]) / L));
                    idx[c] = static_cast<std::int64_t>(std::llround((hit.plane - off[c]) / L));
                    *witness = grid.cube_at(jt, idx);
                }
                return true;
            }
        }
    }
    return false;
}

}  // namespace detail

bool ShiftedGrid::is_bad(const Cube& q, std::optional<Cube>* witness) const {
    const GridParams& p = params_;
    return detail::is_bad_with_threshold(
        *this, q, [&p](int j, int jt) { return badness_threshold(p, j, jt); }, witness);
}

Region ShiftedGrid::whitney(const Cube& q) const {
    return Region{q.box, q.side() / 2.0, q.side(), Region::Kind::whitney};
}

Region ShiftedGrid::carleson_box(const Box& b) const {
    const double t_lo = std::exp2(-params_.g_max - 1);
    if (b.side <= t_lo) throw std::invalid_argument("carleson_box: box below truncation scale");
    return Region{b, t_lo, b.side, Region::Kind::carleson};
}

// ---------------------------------------------------------------------
// Goodness probability
// ---------------------------------------------------------------------

GoodnessEstimate goodness_probability_enumerate(const GridParams& p, int dim, int gen) {
    if (gen < -p.s || gen > p.g_max) throw std::out_of_range("goodness: generation out of range");
    if (gen - p.r < -p.s) return {1.0, 0.0, "vacuous"};
    const int nbits = gen + p.s;
    if (dim * nbits > 22)
        throw std::invalid_argument("goodness enumerate: bit window too large");
    const std::int64_t M = std::int64_t(1) << nbits;
    const double eta = p.side(gen);
    std::int64_t good = 0;
    for (std::int64_t m = 0; m < M; ++m) {
        const double x = double(m) * eta;
        bool ok = true;
        for (int jt = -p.s; jt <= gen - p.r && ok; ++jt) {
            const LatticeHit hit = lattice_dist(x, x + eta, p.side(jt), 0.0);
            if (hit.dist <= badness_threshold(p, gen, jt)) ok = false;
        }
        if (ok) ++good;
    }
    const double p1 = double(good) / double(M);
    return {std::pow(p1, dim), 0.0, "enumerate"};
}

GoodnessEstimate goodness_probability_monte_carlo(const GridParams& p, int dim, int gen,
                                                  std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("goodness monte carlo: N must be positive");
    if (gen - p.r < -p.s) return {1.0, 0.0, "vacuous"};
    std::size_t good = 0;
    const IndexVec origin(dim, 0);
    for (std::size_t t = 0; t < trials; ++t) {
        ShiftedGrid grid(p, ShiftSequence::random(p, dim, substream(seed, std::uint64_t(t))));
        if (grid.is_good(grid.cube_at(gen, origin))) ++good;
    }
    const double ph = double(good) / double(trials);
    return {ph, std::sqrt(ph * (1.0 - ph) / double(trials)), "monte_carlo"};
}

int choose_r(double alpha, double d, int dim, int s, int g_max, double p_floor) {
    const double gamma = alpha / (2.0 * d + 2.0 * alpha);
    for (int r = 1; r <= g_max + s + 1; ++r) {
        if (std::exp2(double(r) * (1.0 - gamma)) < 3.0) continue;
        const GridParams p(alpha, d, r, s, g_max);
        GoodnessEstimate est;
        if (dim * (g_max + s) <= 22)
            est = goodness_probability_enumerate(p, dim, g_max);
        else
            est = goodness_probability_monte_carlo(p, dim, g_max, 4000, 0xC0FFEEULL);
        if (est.p > p_floor) return r;
    }
    throw std::runtime_error("choose_r: no admissible r in the truncation window");
}

}  // namespace sqtb
