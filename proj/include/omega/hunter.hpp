// hunter.hpp
//
// Search for x where Delta(x^2) is large and positive or P(x^2) is large
// and negative. The objective is the phase-twisted Voronoi cosine sum
//   divisor: Re(e^(-i pi/4) sum_{n<=N} d(n) n^(-3/4) e(2 sqrt(n) x))
//   circle:  Re(e^(+i pi/4) sum_{n<=N} r(n) n^(-3/4) e(sqrt(n) x))
// and every candidate is re-evaluated exactly before it becomes a record.
// Records are normalized by (y log y)^(1/4) (log log y)^e with y = x^2.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "omega/arithmetic.hpp"
#include "omega/emit.hpp"
#include "omega/error_terms.hpp"

namespace omega {

inline constexpr const char* kRecordVersion = "1.0.0";

enum class Strategy { grid, resonator, hybrid };

std::string_view name(Strategy s);
Strategy parse_strategy(std::string_view text);

struct HuntConfig {
    SequenceKind kind = SequenceKind::divisor;
    double x_min = 100;
    double x_max = 1000;
    std::uint64_t budget = 100'000;
    std::uint64_t terms = 10'000;
    Strategy strategy = Strategy::grid;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::size_t max_records = 10;
    std::string timestamp;  // copied into records; empty keeps stores byte-reproducible

    void validate() const;
    Json to_json() const;   // the fields that determine the result
    std::string hash() const;
};

struct WitnessRecord {
    std::string id;
    SequenceKind kind = SequenceKind::divisor;
    double x = 0;
    double y = 0;  // evaluation point; x = sqrt(y)
    double exact_value = 0;
    double normalized = 0;
    bool sign_ok = false;
    std::uint64_t budget = 0;
    std::uint64_t seed = 0;
    std::string strategy;
    std::uint64_t terms = 0;
    std::string timestamp;
    std::string config_hash;
    std::string version = kRecordVersion;

    Json to_json() const;
    static WitnessRecord from_json(const Json& j);
    // Content hash over every field except id and timestamp.
    std::string content_id() const;
    // Larger is better for both kinds: normalized for divisor, -normalized for circle.
    double score() const;
};

// (y log y)^(1/4) (log log y)^order_exponent(kind); y >= 16.
double normalization(SequenceKind kind, double y);

double objective(const VoronoiSeries& series, double x);
double objective(SequenceKind kind, double x, std::uint64_t terms, const ArithmeticTable& table);

// Exact record at y, with metadata from config.
WitnessRecord make_record(SequenceKind kind, double y, const HuntConfig& config);

// Empty optional when the record revalidates; otherwise the reason.
std::optional<std::string> check_record(const WitnessRecord& record);

struct HuntResult {
    std::vector<WitnessRecord> records;  // sign-correct, best first
    std::uint64_t evaluations = 0;       // objective evaluations spent
    std::size_t candidates = 0;          // exactly re-evaluated points
    double best_objective = 0;
    std::string diagnostic;
};

HuntResult hunt(const HuntConfig& config, const ArithmeticTable& table);

struct StoreContents {
    std::vector<WitnessRecord> records;
    std::vector<std::string> warnings;  // "line N: reason"
};

// Append-only JSON-lines store with one writer.
class RecordStore {
public:
    explicit RecordStore(std::filesystem::path path) : path_(std::move(path)) {}

    // Validates, then appends unless a record with the same id exists.
    // Returns the id. Throws ValidationError or an I/O Error.
    std::string append(WitnessRecord record);
    StoreContents read() const;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace omega
