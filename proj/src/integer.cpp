#include "bwlat/integer.hpp"

#include <limits>
#include <stdexcept>

namespace bwlat {

Integer pow2(unsigned exponent) {
    Integer one = 1;
    return one << exponent;
}

std::optional<unsigned> two_adic_valuation(const Integer& x) {
    if (x == 0) return std::nullopt;
    return static_cast<unsigned>(lsb(abs(x)));
}

std::optional<unsigned> exact_log2(const Integer& x) {
    if (x == 0) return std::nullopt;
    Integer a = abs(x);
    unsigned low = static_cast<unsigned>(lsb(a));
    if (low != static_cast<unsigned>(msb(a))) return std::nullopt;
    return low;
}

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;  // truncates toward zero
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

Integer round_div(const Integer& a, const Integer& b) {
    return floor_div(2 * a + b, 2 * b);
}

std::int64_t to_int64(const Integer& x) {
    if (x > std::numeric_limits<std::int64_t>::max() ||
        x < std::numeric_limits<std::int64_t>::min()) {
        throw std::overflow_error("integer does not fit in 64 bits: " + x.str());
    }
    return x.convert_to<std::int64_t>();
}

IntVector to_int_vector(const SmallVector& v) {
    IntVector out(v.size());
    for (Index i = 0; i < v.size(); ++i) out(i) = v(i);
    return out;
}

SmallVector to_small_vector(const IntVector& v) {
    SmallVector out(v.size());
    for (Index i = 0; i < v.size(); ++i) out(i) = to_int64(v(i));
    return out;
}

std::string dyadic_factorization(const Integer& x) {
    auto v = two_adic_valuation(x);
    if (!v || *v == 0) return x.str();
    Integer odd = x / pow2(*v);
    std::string out = x.str() + " = 2^" + std::to_string(*v);
    if (odd != 1) out += "·" + odd.str();
    return out;
}

}  // namespace bwlat
