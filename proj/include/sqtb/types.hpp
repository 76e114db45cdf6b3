#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace sqtb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Array = Eigen::ArrayXd;
using IndexVec = std::vector<std::int64_t>;

/// Identity of a dyadic cube within one grid: generation j (sidelength
/// 2^-j) plus the integer lattice index per component. Ordered
/// lexicographically by (generation, index) so that map iteration is the
/// canonical deterministic cube order.
struct CubeKey {
    int gen = 0;
    IndexVec idx;

    friend bool operator==(const CubeKey&, const CubeKey&) = default;
    friend bool operator<(const CubeKey& a, const CubeKey& b) {
        if (a.gen != b.gen) return a.gen < b.gen;
        return a.idx < b.idx;
    }
};

std::string to_string(const CubeKey& key);

/// ell^infinity distance between two points.
inline double linf_dist(const Vector& a, const Vector& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

/// SplitMix64 step; the workhorse for deriving independent substreams
/// from a single run seed. Every random draw in the project flows from
/// hashes of (seed, label, counter) through this.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives a substream seed from a base seed and a textual label.
std::uint64_t substream(std::uint64_t seed, const std::string& label);

/// Derives a substream seed from a base seed and a counter.
std::uint64_t substream(std::uint64_t seed, std::uint64_t counter);

/// Thrown when an internal invariant fails (maps to CLI exit code 3).
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

#define SQTB_INTERNAL_CHECK(cond, msg) \
    do { \
        if (!(cond)) throw ::sqtb::internal_error(std::string("internal check failed: ") + (msg)); \
    } while (0)

}  // namespace sqtb
