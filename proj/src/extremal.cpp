#include "omega/extremal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "omega/errors.hpp"

namespace omega {

namespace {

double key_of(std::uint64_t n, std::uint32_t h) { return std::pow(static_cast<double>(n), 0.75) / h; }

struct Candidate {
    std::uint64_t n;
    std::uint32_t h;
    double key;
};

bool better(const Candidate& a, const Candidate& b) { return precedes(a.n, a.h, b.n, b.h); }

// Top M candidates ordered best first, over 1 <= n <= table.limit.
std::vector<Candidate> scan_top(SequenceKind kind, std::uint64_t M, const ArithmeticTable& table) {
    if (M == 0) throw DomainError("M must be positive");
    std::vector<Candidate> heap;
    heap.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(M, table.limit)) + 1);
    double worst_key = INFINITY;
    for (std::uint64_t n = 1; n <= table.limit; ++n) {
        const std::uint32_t h = table.value(kind, n);
        if (h == 0) continue;
        const double key = key_of(n, h);
        if (heap.size() == M) {
            if (key > worst_key * (1 + 1e-12)) continue;
            const Candidate c{n, h, key};
            if (!better(c, heap.front())) continue;
            std::pop_heap(heap.begin(), heap.end(), better);
            heap.back() = c;
            std::push_heap(heap.begin(), heap.end(), better);
        } else {
            heap.push_back({n, h, key});
            std::push_heap(heap.begin(), heap.end(), better);
        }
        if (heap.size() == M) worst_key = heap.front().key;
    }
    if (heap.size() < M) {
        throw RangeError("only " + std::to_string(heap.size()) + " eligible terms up to " +
                         std::to_string(table.limit));
    }
    std::sort_heap(heap.begin(), heap.end(), better);
    return heap;
}

// Smallest 1024 * 2^k (capped at limit) whose tail bound sits below value.
std::uint64_t certify(SequenceKind kind, double value, std::uint64_t limit) {
    if (!(tail_ratio_bound(kind, limit) < value)) {
        throw RangeError("top-M set not certified complete at sieve limit " + std::to_string(limit) +
                         " (M-th value " + std::to_string(value) + ", tail bound " +
                         std::to_string(tail_ratio_bound(kind, limit)) + ")");
    }
    std::uint64_t L = 1024;
    while (L < limit && !(tail_ratio_bound(kind, L) < value)) L *= 2;
    return std::min(L, limit);
}

ExtremalTerm to_term(const Candidate& c) {
    return {c.n, c.h * std::pow(static_cast<double>(c.n), -0.75), c.key};
}

}  // namespace

double order_exponent(SequenceKind kind) { return 0.75 * counting_exponent(kind); }

double counting_exponent(SequenceKind kind) {
    return kind == SequenceKind::divisor ? std::cbrt(16.0) - 1 : std::cbrt(2.0) - 1;
}

bool precedes(std::uint64_t n1, std::uint32_t h1, std::uint64_t n2, std::uint32_t h2) {
    const double k1 = key_of(n1, h1);
    const double k2 = key_of(n2, h2);
    if (std::fabs(k1 - k2) > 1e-12 * std::max(k1, k2)) return k1 < k2;
    // n1^3 h2^4 against n2^3 h1^4
    using U = unsigned __int128;
    auto power = [](U base, int e, U& out) {
        out = 1;
        for (int i = 0; i < e; ++i) {
            if (__builtin_mul_overflow(out, base, &out)) return false;
        }
        return true;
    };
    U a3, b3, ha4, hb4, lhs, rhs;
    if (power(n1, 3, a3) && power(n2, 3, b3) && power(h2, 4, hb4) && power(h1, 4, ha4) &&
        !__builtin_mul_overflow(a3, hb4, &lhs) && !__builtin_mul_overflow(b3, ha4, &rhs)) {
        if (lhs != rhs) return lhs < rhs;
    } else {
        const long double l = 3 * std::log(static_cast<long double>(n1)) + 4 * std::log(static_cast<long double>(h2));
        const long double r = 3 * std::log(static_cast<long double>(n2)) + 4 * std::log(static_cast<long double>(h1));
        if (l != r) return l < r;
    }
    return n1 < n2;
}

std::vector<ExtremalTerm> largest_terms(SequenceKind kind, std::uint64_t M, const ArithmeticTable& table) {
    const std::vector<Candidate> top = scan_top(kind, M, table);
    certify(kind, to_term(top.back()).value, table.limit);
    std::vector<ExtremalTerm> out;
    out.reserve(top.size());
    for (const Candidate& c : top) out.push_back(to_term(c));
    return out;
}

double extremal_sum(SequenceKind kind, std::uint64_t M, const ArithmeticTable& table) {
    const std::uint64_t ms[] = {M};
    return extremal_table(kind, ms, table).entries.front().sum;
}

ExtremalSumTable extremal_table(SequenceKind kind, std::span<const std::uint64_t> ms, const ArithmeticTable& table) {
    if (ms.empty()) throw DomainError("no M values requested");
    const std::uint64_t max_m = *std::max_element(ms.begin(), ms.end());
    const std::vector<Candidate> top = scan_top(kind, max_m, table);
    ExtremalSumTable out;
    out.kind = kind;
    out.scan_limit = certify(kind, to_term(top.back()).value, table.limit);

    // Neumaier-compensated running sum in descending order.
    std::vector<double> prefix(top.size());
    double sum = 0, carry = 0;
    for (std::size_t i = 0; i < top.size(); ++i) {
        const double v = to_term(top[i]).value;
        const double next = sum + v;
        carry += std::fabs(sum) >= std::fabs(v) ? (sum - next) + v : (v - next) + sum;
        sum = next;
        prefix[i] = sum + carry;
    }
    for (const std::uint64_t m : ms) {
        if (m == 0) throw DomainError("M must be positive");
        const Candidate& c = top[m - 1];
        out.entries.push_back({m, prefix[m - 1], c.n, c.key});
    }
    return out;
}

std::uint64_t count_below(SequenceKind kind, double y, const ArithmeticTable& table) {
    if (!(y > 0)) throw DomainError("y must be positive");
    const double bound = tail_ratio_bound(kind, table.limit);
    if (!(1 / bound > y)) {
        throw RangeError("N(" + std::to_string(y) + ") not certified at sieve limit " + std::to_string(table.limit) +
                         " (tail keys exceed " + std::to_string(1 / bound) + ")");
    }
    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= table.limit; ++n) {
        const std::uint32_t h = table.value(kind, n);
        if (h != 0 && key_of(n, h) <= y) ++count;
    }
    return count;
}

FactorCounter::FactorCounter(SequenceKind kind, double y_max) : kind_(kind), y_max_(y_max) {
    if (!(y_max >= 1)) throw DomainError("y_max must be at least 1");
    // Largest h(n)/n^(3/4) at any search node: 2^(1/4) after the powers of 2, or 4.
    const double s_max = kind == SequenceKind::divisor ? std::pow(2.0, 0.25) : 4.0;
    const double leaf = std::pow(2 * s_max * y_max, 4.0 / 3.0);
    if (leaf > 4e9) throw RangeError("prime sieve for y = " + std::to_string(y_max) + " exceeds 4e9");
    limit_ = static_cast<std::uint64_t>(leaf) + 2;

    std::vector<std::uint8_t> composite(limit_ + 1, 0);
    for (std::uint64_t p = 3; p * p <= limit_; p += 2) {
        if (composite[p]) continue;
        for (std::uint64_t q = p * p; q <= limit_; q += 2 * p) composite[q] = 1;
    }
    const std::size_t words = limit_ / 4 / 64 + 2;
    bits1_.assign(words, 0);
    bits3_.assign(words, 0);
    for (std::uint64_t n = 3; n <= limit_; n += 2) {
        if (composite[n]) continue;
        auto& bits = n % 4 == 1 ? bits1_ : bits3_;
        bits[(n / 4) / 64] |= std::uint64_t{1} << ((n / 4) % 64);
    }
    prefix1_.assign(words + 1, 0);
    prefix3_.assign(words + 1, 0);
    for (std::size_t w = 0; w < words; ++w) {
        prefix1_[w + 1] = prefix1_[w] + static_cast<std::uint32_t>(std::popcount(bits1_[w]));
        prefix3_[w + 1] = prefix3_[w] + static_cast<std::uint32_t>(std::popcount(bits3_[w]));
    }
    const auto small_limit = static_cast<std::uint64_t>(std::pow(4 * s_max * y_max, 2.0 / 3.0)) + 2;
    small_primes_.push_back(2);
    // One prime past small_limit stops every search loop.
    for (std::uint64_t n = 3; n <= limit_ && small_primes_.back() <= small_limit; n += 2) {
        if (!composite[n]) small_primes_.push_back(static_cast<std::uint32_t>(n));
    }
}

namespace {

std::uint64_t count_bits(const std::vector<std::uint64_t>& bits, const std::vector<std::uint32_t>& prefix,
                         std::uint64_t index) {
    // bits with position <= index
    const std::uint64_t w = index / 64;
    const unsigned b = static_cast<unsigned>(index % 64);
    const std::uint64_t mask = b == 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << (b + 1)) - 1;
    return prefix[w] + static_cast<std::uint64_t>(std::popcount(bits[w] & mask));
}

}  // namespace

std::uint64_t FactorCounter::split_primes_upto(std::uint64_t x) const {
    if (x < 5) return 0;
    return count_bits(bits1_, prefix1_, (x - 1) / 4);
}

std::uint64_t FactorCounter::primes_upto(std::uint64_t x) const {
    if (x < 2) return 0;
    std::uint64_t c = 1 + split_primes_upto(x);
    if (x >= 3) c += count_bits(bits3_, prefix3_, (x - 3) / 4);
    return c;
}

std::uint64_t FactorCounter::leaf_primes(std::uint64_t lo, std::uint64_t hi) const {
    if (hi < lo) return 0;
    if (hi > limit_) throw RangeError("leaf prime bound exceeds the prime sieve");
    if (kind_ == SequenceKind::divisor) return primes_upto(hi) - primes_upto(lo - 1);
    return split_primes_upto(hi) - split_primes_upto(lo - 1);
}

std::uint64_t FactorCounter::search(std::size_t start, double s, double inv_y) const {
    std::uint64_t total = 0;
    const double y = 1 / inv_y;
    for (std::size_t i = start;; ++i) {
        if (i == small_primes_.size()) throw RangeError("factor search ran past the small-prime list");
        const double p = small_primes_[i];
        const double root = std::pow(p, 0.75);
        // No prime >= p multiplies s by more than 2 / p^(3/4).
        if (s * 2 / root < inv_y) break;
        if (p * std::sqrt(p) > 4 * s * y) {
            // Only n = m q with a single prime q >= p remains.
            const auto hi = static_cast<std::uint64_t>(std::pow(2 * s * y, 4.0 / 3.0));
            total += leaf_primes(small_primes_[i], hi);
            break;
        }
        const auto pi = small_primes_[i];
        double pk = 1;
        for (unsigned k = 1;; ++k) {
            pk *= root;
            double mult;
            if (kind_ == SequenceKind::divisor) {
                mult = k + 1;
            } else if (pi == 2) {
                mult = 1;
            } else if (pi % 4 == 1) {
                mult = k + 1;
            } else {
                if (k % 2 == 1) continue;
                mult = 1;
            }
            const double next = s * mult / pk;
            if (next < inv_y) break;
            total += 1 + search(i + 1, next, inv_y);
        }
    }
    return total;
}

std::uint64_t FactorCounter::count(double y) const {
    if (!(y > 0) || y > y_max_ * (1 + 1e-12)) throw DomainError("y outside (0, y_max]");
    const double inv_y = 1 / y;
    if (kind_ == SequenceKind::circle) {
        return (4 >= inv_y ? 1 : 0) + (4 >= inv_y ? search(0, 4.0, inv_y) : 0);
    }
    // Powers of 2 first; every odd prime lowers d(n)/n^(3/4).
    std::uint64_t total = 0;
    for (unsigned a = 0;; ++a) {
        const double s = (a + 1) / std::pow(2.0, 0.75 * a);
        if (s >= inv_y) total += 1 + search(1, s, inv_y);
        else if (a >= 2) break;
    }
    return total;
}

ExponentFit fit_log_power(std::span<const double> ys, std::span<const double> counts) {
    if (ys.size() != counts.size() || ys.size() < 2) throw DomainError("fit needs matching samples");
    const auto n = static_cast<double>(ys.size());
    std::vector<double> u, v;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (!(ys[i] > std::exp(1.0)) || !(counts[i] > 0)) throw DomainError("fit needs y > e and positive counts");
        u.push_back(std::log(std::log(ys[i])));
        v.push_back(std::log(counts[i]) - 4.0 / 3.0 * std::log(ys[i]));
    }
    const double mu = std::accumulate(u.begin(), u.end(), 0.0) / n;
    const double mv = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double suu = 0, suv = 0, svv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        suu += (u[i] - mu) * (u[i] - mu);
        suv += (u[i] - mu) * (v[i] - mv);
        svv += (v[i] - mv) * (v[i] - mv);
    }
    if (!(suu > 0)) throw DomainError("degenerate fit grid");
    ExponentFit fit;
    fit.slope = suv / suu;
    fit.intercept = mv - fit.slope * mu;
    fit.r_squared = svv > 0 ? suv * suv / (suu * svv) : 1.0;
    fit.ys.assign(ys.begin(), ys.end());
    fit.counts.assign(counts.begin(), counts.end());
    return fit;
}

ExponentFit exponent_fit(SequenceKind kind, std::span<const double> y_grid) {
    if (y_grid.size() < 8) throw DomainError("fit grid needs at least 8 points");
    for (std::size_t i = 1; i < y_grid.size(); ++i) {
        if (!(y_grid[i] > y_grid[i - 1])) throw DomainError("fit grid must be increasing");
    }
    if (!(y_grid.front() > std::exp(1.0))) throw DomainError("fit grid must start above e");
    if (!(y_grid.back() >= 100 * y_grid.front())) throw DomainError("fit grid must span two decades");
    const FactorCounter counter(kind, y_grid.back());
    std::vector<double> counts;
    for (const double y : y_grid) counts.push_back(static_cast<double>(counter.count(y)));
    return fit_log_power(y_grid, counts);
}

std::vector<double> log_grid(double ymin, double ymax, std::size_t points) {
    if (points < 2 || !(ymin > 0) || !(ymax > ymin)) throw DomainError("log grid needs 0 < ymin < ymax, points >= 2");
    std::vector<double> out;
    const double step = std::log(ymax / ymin) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) out.push_back(ymin * std::exp(step * static_cast<double>(i)));
    out.back() = ymax;
    return out;
}

double predicted_order(SequenceKind kind, double M) {
    if (!(M >= 3)) throw DomainError("predicted order needs M >= 3");
    return std::pow(M, 0.25) * std::pow(std::log(M), order_exponent(kind));
}

}  // namespace omega
