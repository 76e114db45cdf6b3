#include "sqtb/types.hpp"

#include <sstream>

namespace sqtb {

std::string to_string(const CubeKey& key) {
    std::ostringstream os;
    os << "Q(gen=" << key.gen << ", idx=[";
    for (std::size_t i = 0; i < key.idx.size(); ++i) {
        if (i) os << ",";
        os << key.idx[i];
    }
    os << "])";
    return os.str();
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t substream(std::uint64_t seed, const std::string& label) {
    std::uint64_t h = splitmix64(seed);
    for (unsigned char c : label) h = splitmix64(h ^ c);
    return h;
}

std::uint64_t substream(std::uint64_t seed, std::uint64_t counter) {
    return splitmix64(splitmix64(seed) ^ (0x51'7c'c1'b7'27'22'0a'95ULL + counter));
}

}  // namespace sqtb
