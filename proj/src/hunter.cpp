#include "omega/hunter.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <thread>

#include "omega/errors.hpp"
#include "omega/extremal.hpp"
#include "omega/trig_sum.hpp"

namespace omega {

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Scored {
    double x;
    double value;
};

// Indices of the k largest values, best first, ties to the smaller index.
std::vector<std::size_t> top_indices(const std::vector<double>& values, std::size_t k) {
    std::vector<std::size_t> idx(values.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    k = std::min(k, idx.size());
    auto cmp = [&](std::size_t a, std::size_t b) { return values[a] != values[b] ? values[a] > values[b] : a < b; };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), cmp);
    idx.resize(k);
    return idx;
}

struct SeriesView {
    std::vector<double> weights;
    std::vector<double> freqs;
    double phase;
};

SeriesView view_of(const VoronoiSeries& series) {
    SeriesView v;
    v.weights.assign(series.weights().begin(), series.weights().end());
    for (const long double f : series.frequencies()) v.freqs.push_back(static_cast<double>(f));
    v.phase = series.phase();
    return v;
}

// Objective on x0 + j h, j < count, split over threads in fixed chunks.
std::vector<double> grid_values(const SeriesView& s, double x0, double h, std::size_t count, unsigned threads) {
    std::vector<double> out(count);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count / 4096 + 1)));
    const std::size_t chunk = (count + threads - 1) / threads;
    auto work = [&](std::size_t begin, std::size_t end) {
        twisted_sum_grid(s.weights, s.freqs, s.phase, x0 + static_cast<double>(begin) * h, h,
                         std::span(out.data() + begin, end - begin));
    };
    if (threads == 1) {
        work(0, count);
        return out;
    }
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin < end) pool.emplace_back(work, begin, end);
    }
    return out;
}

struct Search {
    std::vector<double> candidates;
    std::uint64_t evaluations = 0;
    double best = -INFINITY;
};

Search grid_search(const HuntConfig& cfg, const SeriesView& view) {
    Search out;
    const std::uint64_t grid_count = std::max<std::uint64_t>(2, cfg.budget * 4 / 5);
    const std::uint64_t refine_budget = cfg.budget - std::min(cfg.budget, grid_count);
    std::mt19937_64 rng(cfg.seed);
    const double h = (cfg.x_max - cfg.x_min) / static_cast<double>(grid_count);
    const double x0 = cfg.x_min + unit_uniform(rng) * h;
    const std::vector<double> values = grid_values(view, x0, h, grid_count, cfg.threads);
    out.evaluations += grid_count;

    std::size_t top = std::max<std::size_t>(1, grid_count / 100);
    std::uint64_t per = refine_budget / top;
    if (per < 3) {
        top = std::max<std::size_t>(1, refine_budget / 3);
        per = refine_budget / top;
    }
    for (const std::size_t i : top_indices(values, top)) {
        const double x = x0 + static_cast<double>(i) * h;
        out.best = std::max(out.best, values[i]);
        out.candidates.push_back(x);
        if (per >= 2) {
            auto f = [&](double t) { return twisted_sum(view.weights, view.freqs, view.phase, t); };
            const auto [xr, vr] =
                golden_maximize(f, std::max(cfg.x_min, x - h), std::min(cfg.x_max, x + h), per);
            out.evaluations += per;
            out.best = std::max(out.best, vr);
            out.candidates.push_back(xr);
        }
    }
    return out;
}

Search resonator_search(const HuntConfig& cfg, std::uint64_t budget, const SeriesView& view,
                        const ArithmeticTable& table) {
    Search out;
    // Resonator over the M heaviest frequencies, M = floor(log(x_max^2) / 4).
    const auto m = static_cast<std::size_t>(std::max(1.0, std::floor(std::log(cfg.x_max * cfg.x_max) / 4)));
    const std::vector<ExtremalTerm> heavy = largest_terms(cfg.kind, std::min<std::uint64_t>(m, cfg.terms), table);
    std::vector<double> lambdas;
    for (const ExtremalTerm& t : heavy) {
        if (t.n <= cfg.terms) lambdas.push_back(view.freqs[t.n - 1]);
    }
    if (lambdas.empty()) lambdas.push_back(view.freqs[0]);
    constexpr double r = 1.0 / 3.0;
    // Twisted so that peaks sit where cos(2 pi lambda x + phase) = 1.
    auto prescore = [&](double x) {
        std::complex<double> prod = 1.0;
        for (const double l : lambdas) {
            const long double t = static_cast<long double>(l) * x;
            const double turns = static_cast<double>(t - std::floor(t));
            prod /= 1.0 - r * std::polar(1.0, 2 * std::numbers::pi * turns + view.phase);
        }
        return std::norm(prod);
    };

    const std::uint64_t pre_count = 4 * std::max<std::uint64_t>(budget, 64);
    const double hp = (cfg.x_max - cfg.x_min) / static_cast<double>(pre_count - 1);
    std::vector<double> pre(pre_count);
    for (std::uint64_t i = 0; i < pre_count; ++i) pre[i] = prescore(cfg.x_min + static_cast<double>(i) * hp);
    std::vector<double> peaks;
    std::vector<double> peak_scores;
    for (std::uint64_t i = 0; i < pre_count; ++i) {
        const bool left = i == 0 || pre[i] >= pre[i - 1];
        const bool right = i + 1 == pre_count || pre[i] > pre[i + 1];
        if (left && right) {
            peaks.push_back(cfg.x_min + static_cast<double>(i) * hp);
            peak_scores.push_back(pre[i]);
        }
    }
    constexpr std::uint64_t local = 16;
    constexpr std::uint64_t golden = 16;
    const std::size_t keep = std::max<std::size_t>(1, budget / (local + golden));
    for (const std::size_t k : top_indices(peak_scores, keep)) {
        const double a = std::max(cfg.x_min, peaks[k] - hp);
        const double b = std::min(cfg.x_max, peaks[k] + hp);
        const double hl = (b - a) / static_cast<double>(local - 1);
        const std::vector<double> values = grid_values(view, a, hl, local, 1);
        out.evaluations += local;
        const std::size_t j = top_indices(values, 1).front();
        const double xj = a + static_cast<double>(j) * hl;
        out.best = std::max(out.best, values[j]);
        out.candidates.push_back(xj);
        auto f = [&](double t) { return twisted_sum(view.weights, view.freqs, view.phase, t); };
        const auto [xr, vr] = golden_maximize(f, std::max(a, xj - hl), std::min(b, xj + hl), golden);
        out.evaluations += golden;
        out.best = std::max(out.best, vr);
        out.candidates.push_back(xr);
    }
    return out;
}

// Points next to x^2 where the error term is locally extreme: at an
// integer (jump included) for the divisor, just below one for the circle.
std::vector<double> snap(SequenceKind kind, double x) {
    const double y0 = x * x;
    const double lo = std::floor(y0);
    if (kind == SequenceKind::divisor) return {lo, lo + 1};
    return {std::nextafter(lo, 0.0), std::nextafter(lo + 1, 0.0)};
}

}  // namespace

std::string_view name(Strategy s) {
    switch (s) {
    case Strategy::grid: return "grid";
    case Strategy::resonator: return "resonator-guided";
    case Strategy::hybrid: return "hybrid";
    }
    return "grid";
}

Strategy parse_strategy(std::string_view text) {
    if (text == "grid") return Strategy::grid;
    if (text == "resonator-guided" || text == "resonator") return Strategy::resonator;
    if (text == "hybrid") return Strategy::hybrid;
    throw DomainError("unknown strategy '" + std::string(text) + "'");
}

void HuntConfig::validate() const {
    if (!(x_min >= 10)) throw DomainError("x_min must be at least 10");
    if (!(x_max > x_min) || !std::isfinite(x_max)) throw DomainError("x_max must exceed x_min");
    if (x_max * x_max >= 0x1.0p53) throw DomainError("x_max^2 must stay below 2^53");
    if (budget < 1000) throw DomainError("budget must be at least 1000");
    if (terms == 0) throw DomainError("terms must be positive");
    if (threads == 0) throw DomainError("threads must be positive");
}

Json HuntConfig::to_json() const {
    Json j;
    j["kind"] = std::string(name(kind));
    j["x_min"] = x_min;
    j["x_max"] = x_max;
    j["budget"] = budget;
    j["terms"] = terms;
    j["strategy"] = std::string(name(strategy));
    j["seed"] = seed;
    j["max_records"] = max_records;
    return j;
}

std::string HuntConfig::hash() const { return digest(dump_json(to_json())); }

Json WitnessRecord::to_json() const {
    Json j;
    j["id"] = id;
    j["kind"] = std::string(name(kind));
    j["x"] = x;
    j["y"] = y;
    j["exact_value"] = exact_value;
    j["normalized"] = normalized;
    j["sign_ok"] = sign_ok;
    j["budget"] = budget;
    j["seed"] = seed;
    j["strategy"] = strategy;
    j["terms"] = terms;
    j["timestamp"] = timestamp;
    j["config_hash"] = config_hash;
    j["version"] = version;
    return j;
}

WitnessRecord WitnessRecord::from_json(const Json& j) {
    WitnessRecord r;
    r.id = j.at("id").get<std::string>();
    r.kind = parse_kind(j.at("kind").get<std::string>());
    r.x = j.at("x").get<double>();
    r.y = j.at("y").get<double>();
    r.exact_value = j.at("exact_value").get<double>();
    r.normalized = j.at("normalized").get<double>();
    r.sign_ok = j.at("sign_ok").get<bool>();
    r.budget = j.at("budget").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.strategy = j.at("strategy").get<std::string>();
    r.terms = j.at("terms").get<std::uint64_t>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.version = j.at("version").get<std::string>();
    return r;
}

std::string WitnessRecord::content_id() const {
    Json j = to_json();
    j.erase("id");
    j.erase("timestamp");
    return digest(dump_json(j));
}

double WitnessRecord::score() const { return kind == SequenceKind::divisor ? normalized : -normalized; }

double normalization(SequenceKind kind, double y) {
    if (!(y >= 16)) throw DomainError("normalization needs y >= 16");
    return std::pow(y * std::log(y), 0.25) * std::pow(std::log(std::log(y)), order_exponent(kind));
}

double objective(const VoronoiSeries& series, double x) { return series.cosine_sum(x); }

double objective(SequenceKind kind, double x, std::uint64_t terms, const ArithmeticTable& table) {
    return VoronoiSeries(kind, terms, table).cosine_sum(x);
}

WitnessRecord make_record(SequenceKind kind, double y, const HuntConfig& config) {
    WitnessRecord rec;
    rec.kind = kind;
    rec.y = y;
    rec.x = std::sqrt(y);
    rec.exact_value = static_cast<double>(error_term_exact(kind, from_double(y)));
    rec.normalized = rec.exact_value / normalization(kind, y);
    rec.sign_ok = kind == SequenceKind::divisor ? rec.exact_value > 0 : rec.exact_value < 0;
    rec.budget = config.budget;
    rec.seed = config.seed;
    rec.strategy = std::string(name(config.strategy));
    rec.terms = config.terms;
    rec.timestamp = config.timestamp;
    rec.config_hash = config.hash();
    rec.id = rec.content_id();
    return rec;
}

std::optional<std::string> check_record(const WitnessRecord& rec) {
    if (rec.version != kRecordVersion) return "unsupported version " + rec.version;
    if (!(rec.y >= 16) || !std::isfinite(rec.y)) return std::string("y must be at least 16");
    const double exact = static_cast<double>(error_term_exact(rec.kind, from_double(rec.y)));
    if (std::fabs(exact - rec.exact_value) > 1e-9 * std::max(1.0, std::fabs(exact))) {
        return "exact value " + format_double(exact) + " does not match recorded " + format_double(rec.exact_value);
    }
    const double norm = exact / normalization(rec.kind, rec.y);
    if (std::fabs(norm - rec.normalized) > 1e-9 * std::max(1.0, std::fabs(norm))) {
        return "normalized value inconsistent with exact value";
    }
    const bool sign = rec.kind == SequenceKind::divisor ? exact > 0 : exact < 0;
    if (sign != rec.sign_ok) return std::string("sign flag disagrees with the exact value");
    if (std::fabs(rec.x - std::sqrt(rec.y)) > 1e-12 * rec.x) return std::string("x is not sqrt(y)");
    if (rec.id != rec.content_id()) return "id " + rec.id + " does not match content hash " + rec.content_id();
    return std::nullopt;
}

HuntResult hunt(const HuntConfig& config, const ArithmeticTable& table) {
    config.validate();
    const VoronoiSeries series(config.kind, config.terms, table);
    const SeriesView view = view_of(series);

    std::vector<Search> parts;
    if (config.strategy != Strategy::resonator) parts.push_back(grid_search(config, view));
    if (config.strategy == Strategy::resonator) {
        parts.push_back(resonator_search(config, config.budget, view, table));
    } else if (config.strategy == Strategy::hybrid) {
        parts.push_back(resonator_search(config, config.budget / 2, view, table));
    }

    HuntResult out;
    out.best_objective = -INFINITY;
    std::set<double> ys;
    for (const Search& s : parts) {
        out.evaluations += s.evaluations;
        out.best_objective = std::max(out.best_objective, s.best);
        for (const double x : s.candidates) {
            for (const double y : snap(config.kind, x)) {
                if (y >= config.x_min * config.x_min && y <= config.x_max * config.x_max) ys.insert(y);
            }
        }
    }
    out.candidates = ys.size();
    std::vector<WitnessRecord> records;
    for (const double y : ys) {
        WitnessRecord rec = make_record(config.kind, y, config);
        if (rec.sign_ok) records.push_back(std::move(rec));
    }
    std::sort(records.begin(), records.end(), [](const WitnessRecord& a, const WitnessRecord& b) {
        return a.score() != b.score() ? a.score() > b.score() : a.y < b.y;
    });
    if (records.size() > config.max_records) records.resize(config.max_records);
    if (records.empty()) {
        out.diagnostic = "no " + std::string(config.kind == SequenceKind::divisor ? "positive" : "negative") +
                         " exact value among " + std::to_string(out.candidates) + " candidates";
    }
    out.records = std::move(records);
    return out;
}

std::string RecordStore::append(WitnessRecord record) {
    if (record.id.empty()) record.id = record.content_id();
    if (const auto reason = check_record(record)) throw ValidationError(*reason);
    for (const WitnessRecord& existing : read().records) {
        if (existing.id == record.id) return record.id;
    }
    const std::string line = dump_json(record.to_json()) + '\n';
    const int fd = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd < 0) throw IoError("cannot open " + path_.string() + ": " + std::strerror(errno));
    const ssize_t written = ::write(fd, line.data(), line.size());
    const int saved = errno;
    ::close(fd);
    if (written != static_cast<ssize_t>(line.size())) {
        throw IoError("short write to " + path_.string() + ": " + std::strerror(saved));
    }
    return record.id;
}

StoreContents RecordStore::read() const {
    StoreContents out;
    std::ifstream in(path_);
    if (!in) {
        if (std::filesystem::exists(path_)) throw IoError("cannot read " + path_.string());
        return out;
    }
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        try {
            WitnessRecord rec = WitnessRecord::from_json(Json::parse(line));
            if (rec.id != rec.content_id()) {
                out.warnings.push_back("line " + std::to_string(number) + ": id does not match content");
                continue;
            }
            out.records.push_back(std::move(rec));
        } catch (const std::exception& e) {
            out.warnings.push_back("line " + std::to_string(number) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace omega
