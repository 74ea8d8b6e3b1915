#include "omega/arithmetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "omega/errors.hpp"

namespace omega {

namespace {

constexpr std::uint64_t kMaxFloor = std::uint64_t{1} << 62;

void checked_add(Int128& acc, Int128 term) {
    if (__builtin_add_overflow(acc, term, &acc)) {
        throw OverflowError("128-bit accumulator");
    }
}

Int128 checked_mul(Int128 a, Int128 b) {
    Int128 out;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw OverflowError("128-bit product");
    }
    return out;
}

// Prefix sum of chi_4 over 1..m.
Int128 chi4_prefix(std::uint64_t m) {
    return static_cast<Int128>((m + 3) / 4) - static_cast<Int128>((m + 1) / 4);
}

unsigned rho_prime_power(std::uint64_t p, unsigned m) {
    if (p == 2) return 1;
    if (p % 4 == 3) return (m % 2 == 0) ? 1 : 0;
    return m + 1;
}

}  // namespace

std::string to_string(Int128 value) {
    if (value == 0) return "0";
    const bool negative = value < 0;
    // Work with the unsigned magnitude so the minimum value is handled.
    unsigned __int128 magnitude = negative ? -static_cast<unsigned __int128>(value)
                                           : static_cast<unsigned __int128>(value);
    std::string digits;
    while (magnitude != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(magnitude % 10)));
        magnitude /= 10;
    }
    if (negative) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

long double to_long_double(Int128 value) {
    const bool negative = value < 0;
    unsigned __int128 magnitude = negative ? -static_cast<unsigned __int128>(value)
                                           : static_cast<unsigned __int128>(value);
    const auto high = static_cast<std::uint64_t>(magnitude >> 64);
    const auto low = static_cast<std::uint64_t>(magnitude);
    long double out = std::ldexp(static_cast<long double>(high), 64) + static_cast<long double>(low);
    return negative ? -out : out;
}

RealArg from_double(double x) {
    if (!(x >= 0) || !std::isfinite(x)) throw DomainError("expected a finite non-negative value");
    const double fl = std::floor(x);
    if (fl >= static_cast<double>(kMaxFloor)) throw OverflowError("argument exceeds 2^62");
    return {static_cast<std::uint64_t>(fl), static_cast<long double>(x)};
}

RealArg parse_decimal(std::string_view text) {
    std::string mantissa;
    long long point = -1;
    std::size_t i = 0;
    if (i < text.size() && text[i] == '+') ++i;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mantissa.push_back(c);
        } else if (c == '.' && point < 0) {
            point = static_cast<long long>(mantissa.size());
        } else {
            break;
        }
    }
    if (mantissa.empty()) throw DomainError("not a non-negative decimal: '" + std::string(text) + "'");
    if (point < 0) point = static_cast<long long>(mantissa.size());
    long long exponent = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool neg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
        const std::size_t start = i;
        for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
            exponent = exponent * 10 + (text[i] - '0');
            if (exponent > 1000) throw DomainError("exponent out of range");
        }
        if (i == start) throw DomainError("malformed exponent in '" + std::string(text) + "'");
        if (neg) exponent = -exponent;
    }
    if (i != text.size()) throw DomainError("not a non-negative decimal: '" + std::string(text) + "'");

    const long long int_digits = point + exponent;
    unsigned __int128 fl = 0;
    for (long long k = 0; k < int_digits; ++k) {
        const int digit = k < static_cast<long long>(mantissa.size()) ? mantissa[static_cast<std::size_t>(k)] - '0' : 0;
        fl = fl * 10 + static_cast<unsigned>(digit);
        if (fl >= kMaxFloor) throw OverflowError("argument exceeds 2^62");
    }
    RealArg out;
    out.floor = static_cast<std::uint64_t>(fl);
    out.value = std::strtold(std::string(text).c_str(), nullptr);
    return out;
}

std::uint64_t isqrt(std::uint64_t n) {
    auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (static_cast<unsigned __int128>(s) * s > n) --s;
    while (static_cast<unsigned __int128>(s + 1) * (s + 1) <= n) ++s;
    return s;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint32_t> primes;
    if (n < 2) return primes;
    if (n > std::numeric_limits<std::uint32_t>::max()) throw SizeError("prime sieve beyond 2^32");
    std::vector<bool> composite(n + 1, false);
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (composite[p]) continue;
        for (std::uint64_t j = p * p; j <= n; j += p) composite[j] = true;
    }
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (!composite[p]) primes.push_back(static_cast<std::uint32_t>(p));
    }
    return primes;
}

std::string_view name(SequenceKind kind) {
    return kind == SequenceKind::divisor ? "divisor" : "circle";
}

SequenceKind parse_kind(std::string_view text) {
    if (text == "divisor") return SequenceKind::divisor;
    if (text == "circle") return SequenceKind::circle;
    throw DomainError("unknown kind '" + std::string(text) + "' (expected divisor|circle)");
}

ArithmeticTable build_table(std::uint64_t limit, std::size_t max_bytes) {
    if (limit == 0) throw SizeError("table limit must be at least 1");
    if (limit > std::numeric_limits<std::uint32_t>::max() ||
        limit + 1 > max_bytes / kTableBuildBytesPerEntry) {
        throw SizeError("table limit " + std::to_string(limit) + " exceeds memory budget of " +
                        std::to_string(max_bytes) + " bytes");
    }
    const std::size_t size = static_cast<std::size_t>(limit) + 1;

    // Smallest prime factor; zero marks a prime.
    std::vector<std::uint32_t> spf(size, 0);
    for (std::uint64_t p = 2; p * p <= limit; ++p) {
        if (spf[p] != 0) continue;
        for (std::uint64_t j = p * p; j <= limit; j += p) {
            if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(p);
        }
    }

    ArithmeticTable table;
    table.limit = limit;
    table.d_values.assign(size, 0);
    table.r_values.assign(size, 0);
    std::vector<std::uint32_t> rho(size, 0);
    table.d_values[1] = 1;
    rho[1] = 1;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        const std::uint64_t p = spf[n] == 0 ? n : spf[n];
        std::uint64_t rest = n;
        unsigned m = 0;
        while (rest % p == 0) {
            rest /= p;
            ++m;
        }
        table.d_values[n] = table.d_values[rest] * (m + 1);
        rho[n] = rho[rest] * rho_prime_power(p, m);
    }
    spf = {};
    for (std::size_t n = 1; n < size; ++n) table.r_values[n] = 4 * rho[n];
    rho = {};

    table.d_prefix.assign(size, 0);
    table.r_prefix.assign(size, 0);
    for (std::size_t n = 1; n < size; ++n) {
        table.d_prefix[n] = table.d_prefix[n - 1] + table.d_values[n];
        table.r_prefix[n] = table.r_prefix[n - 1] + table.r_values[n];
    }
    return table;
}

Int128 divisor_summatory(std::uint64_t floor_x) {
    if (floor_x == 0) throw DomainError("divisor_summatory needs x >= 1");
    const std::uint64_t s = isqrt(floor_x);
    Int128 sum = 0;
    for (std::uint64_t a = 1; a <= s; ++a) checked_add(sum, floor_x / a);
    return checked_mul(sum, 2) - checked_mul(s, s);
}

Int128 circle_summatory(std::uint64_t floor_x) {
    if (floor_x == 0) throw DomainError("circle_summatory needs x >= 1");
    Int128 sum = 0;
    std::uint64_t k = 1;
    while (k <= floor_x) {
        const std::uint64_t q = floor_x / k;
        const std::uint64_t k_hi = floor_x / q;
        const Int128 weight = chi4_prefix(k_hi) - chi4_prefix(k - 1);
        if (weight != 0) checked_add(sum, checked_mul(q, weight));
        k = k_hi + 1;
    }
    return checked_mul(sum, 4);
}

Int128 summatory(SequenceKind kind, std::uint64_t floor_x) {
    return kind == SequenceKind::divisor ? divisor_summatory(floor_x) : circle_summatory(floor_x);
}

MultiplicativeWeightSpec MultiplicativeWeightSpec::divisor() {
    MultiplicativeWeightSpec spec;
    spec.kind = Kind::divisor;
    spec.kappa = std::pow(2.0, -4.0 / 3.0);
    spec.prime_power = [](std::uint64_t, unsigned m) { return std::pow(static_cast<double>(m + 1), -4.0 / 3.0); };
    return spec;
}

MultiplicativeWeightSpec MultiplicativeWeightSpec::circle() {
    MultiplicativeWeightSpec spec;
    spec.kind = Kind::circle;
    spec.kappa = std::pow(2.0, -4.0 / 3.0);
    spec.scale = std::pow(4.0, -4.0 / 3.0);
    spec.prime_power = [](std::uint64_t p, unsigned m) {
        const unsigned rho = rho_prime_power(p, m);
        return rho == 0 ? 0.0 : std::pow(static_cast<double>(rho), -4.0 / 3.0);
    };
    return spec;
}

std::vector<double> multiplicative_sieve(const MultiplicativeWeightSpec& spec, std::uint64_t limit) {
    if (!spec.prime_power) throw DomainError("weight spec has no prime-power rule");
    const std::size_t size = static_cast<std::size_t>(limit) + 1;
    std::vector<std::uint32_t> spf(size, 0);
    for (std::uint64_t p = 2; p * p <= limit; ++p) {
        if (spf[p] != 0) continue;
        for (std::uint64_t j = p * p; j <= limit; j += p) {
            if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(p);
        }
    }
    // Multiplicative part first, scale applied at the end.
    std::vector<double> g(size, 0.0);
    if (limit >= 1) g[1] = 1.0;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        const std::uint64_t p = spf[n] == 0 ? n : spf[n];
        std::uint64_t rest = n;
        unsigned m = 0;
        while (rest % p == 0) {
            rest /= p;
            ++m;
        }
        g[n] = g[rest] * spec.prime_power(p, m);
    }
    for (std::size_t n = 1; n < size; ++n) g[n] *= spec.scale;
    return g;
}

std::uint64_t count_weighted(const MultiplicativeWeightSpec& spec, double x, const ArithmeticTable& table) {
    if (!(x > 0)) throw DomainError("count_weighted needs x > 0");
    const std::uint64_t limit = table.limit;
    std::uint64_t count = 0;
    if (spec.kind == MultiplicativeWeightSpec::Kind::custom) {
        if (!spec.tail_lower_bound) {
            throw RangeError("custom weight has no tail bound; cannot certify completeness");
        }
        if (!(spec.tail_lower_bound(limit) > x)) {
            throw RangeError("table limit " + std::to_string(limit) + " too small for x = " + std::to_string(x));
        }
        const std::vector<double> g = multiplicative_sieve(spec, limit);
        for (std::uint64_t n = 1; n <= limit; ++n) {
            if (g[n] > 0 && static_cast<double>(n) * g[n] <= x) ++count;
        }
        return count;
    }

    const SequenceKind kind =
        spec.kind == MultiplicativeWeightSpec::Kind::divisor ? SequenceKind::divisor : SequenceKind::circle;
    // n h(n)^(-4/3) = (n^(3/4) / h(n))^(4/3).
    const double tail = std::pow(1.0 / tail_ratio_bound(kind, limit), 4.0 / 3.0);
    if (!(tail > x)) {
        throw RangeError("table limit " + std::to_string(limit) + " cannot certify the count at x = " +
                         std::to_string(x));
    }
    for (std::uint64_t n = 1; n <= limit; ++n) {
        const std::uint32_t h = table.value(kind, n);
        if (h == 0) continue;
        if (static_cast<double>(n) * std::pow(static_cast<double>(h), -4.0 / 3.0) <= x) ++count;
    }
    return count;
}

double divisor_power_constant(double eps, bool split_only) {
    if (!(eps > 0) || eps >= 1) throw DomainError("eps must lie in (0, 1)");
    const double prime_cap = std::exp2(1.0 / eps);
    if (prime_cap > 1e8) throw SizeError("eps too small for the divisor bound");
    double constant = 1.0;
    for (const std::uint32_t p : primes_up_to(static_cast<std::uint64_t>(prime_cap))) {
        if (split_only && p % 4 != 1) continue;
        // (k+1) p^(-k eps) is log-concave in k; stop at the first decrease.
        const double step = std::pow(static_cast<double>(p), -eps);
        double best = 1.0;
        double power = 1.0;
        for (unsigned k = 1;; ++k) {
            power *= step;
            const double value = (k + 1) * power;
            if (value <= best) break;
            best = value;
        }
        constant *= best;
    }
    return constant;
}

double tail_ratio_bound(SequenceKind kind, std::uint64_t limit) {
    const double next = static_cast<double>(limit) + 1.0;
    const double h_scale = kind == SequenceKind::divisor ? 1.0 : 4.0;
    double best = std::numeric_limits<double>::infinity();

    if (limit >= 63) {
        const double exponent = 1.066 / std::log(std::log(next)) - 0.75;
        // r(n) <= 4 d(n)
        best = h_scale * std::pow(next, exponent);
    }
    for (double eps = 0.08; eps < 0.75; eps += 0.005) {
        const double c = divisor_power_constant(eps, kind == SequenceKind::circle);
        best = std::min(best, h_scale * c * std::pow(next, eps - 0.75));
    }
    // Absorb rounding in the floating-point evaluation.
    return best * (1.0 + 1e-12);
}

}  // namespace omega
