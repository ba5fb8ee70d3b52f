#include <cmath>
#include <cstdlib>
#include <string>

#include "sdirac/types.hpp"

namespace sdirac {

HalfInteger HalfInteger::from_twice(int twice) {
    if (twice % 2 == 0) throw DomainError("k must be a half-odd integer, got " + std::to_string(twice) + "/2");
    return HalfInteger(twice);
}

HalfInteger HalfInteger::from_double(double v) {
    const double t = 2.0 * v;
    const double r = std::round(t);
    if (!std::isfinite(v) || std::abs(t - r) > 1e-9 || std::abs(r) > 1e6) throw DomainError("k must be a half-odd integer");
    return from_twice(static_cast<int>(r));
}

HalfInteger HalfInteger::parse(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw DomainError("");
            return from_double(v);
        }
        std::size_t u1 = 0, u2 = 0;
        const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        const int p = std::stoi(num, &u1);
        const int q = std::stoi(den, &u2);
        if (u1 != num.size() || u2 != den.size() || q != 2) throw DomainError("");
        return from_twice(p);
    } catch (const std::logic_error&) {
        throw DomainError("malformed half-integer '" + s + "'");
    }
}

std::string HalfInteger::str() const { return std::to_string(twice_) + "/2"; }

}  // namespace sdirac
