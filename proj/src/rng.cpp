#include "senc/rng.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace senc {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

Rng Rng::split() {
    return Rng(mix64(next_u64()));
}

std::uint64_t Rng::next_u64() {
    return gen_();
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t Rng::next_below(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::next_below: n must be > 0");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
}

double Rng::next_open(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("Rng::next_open: empty interval");
    double u;
    do {
        u = next_double();
    } while (u == 0.0);
    double p = lo + u * (hi - lo);
    if (!(p < hi)) p = std::nextafter(hi, lo);
    return p;
}

double Rng::next_gaussian() {
    // u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

void Rng::save_state(std::ostream& out) const {
    out << gen_;
}

void Rng::load_state(std::istream& in) {
    in >> gen_;
}

} // namespace senc
