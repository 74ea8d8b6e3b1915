// omega: command-line front end.
//
//   omega [--config cfg.json] [--threads T] [--manifest m.json] <command> ...
//
// Exit codes: 0 success, 1 runtime error, 2 usage error. Every run writes
// one manifest (to --manifest, else as one JSON line on stderr).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "omega/arithmetic.hpp"
#include "omega/emit.hpp"
#include "omega/error_terms.hpp"
#include "omega/errors.hpp"
#include "omega/extremal.hpp"
#include "omega/hunter.hpp"
#include "omega/io.hpp"
#include "omega/kernel.hpp"
#include "omega/resonance.hpp"
#include "omega/resonator.hpp"

using namespace omega;

namespace {

constexpr const char* kVersion = "1.0.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Run {
    unsigned threads = 1;
    std::string manifest_path;
    std::map<std::string, std::string> inputs;
    std::map<std::string, std::string> outputs;
    std::string stdout_bytes;
};

Run run;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    run.inputs[path] = digest(text);
    return text;
}

// Primary output: the file at path, or stdout when path is empty.
void deliver(const std::string& bytes, const std::string& path) {
    if (path.empty()) {
        std::fwrite(bytes.data(), 1, bytes.size(), stdout);
        std::fflush(stdout);
        run.stdout_bytes += bytes;
        run.outputs["stdout"] = digest(run.stdout_bytes);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path);
    run.outputs[path] = digest(bytes);
}

void print_number(double v) { deliver(format_double(v) + "\n", ""); }

ArithmeticTable table_for(std::uint64_t limit) {
    if (limit == 0) throw UsageError("sieve limit must be positive");
    return build_table(limit);
}

// Grow the sieve by factors of 8 until f stops throwing RangeError.
template <class F>
auto with_growing_table(std::optional<std::uint64_t> limit, F&& f) {
    if (limit) return f(table_for(*limit));
    std::uint64_t L = 1 << 16;
    const std::uint64_t cap = kDefaultTableBudget / kTableBuildBytesPerEntry - 1;
    for (;;) {
        try {
            return f(build_table(L));
        } catch (const RangeError&) {
            if (L >= cap) throw;
            L = std::min(cap, L * 8);
        }
    }
}

std::string iso_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// ---- global --config: JSON defaults injected as flags the user did not give

bool given(const std::vector<std::string>& args, const std::string& flag) {
    for (const std::string& a : args) {
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
}

std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
}

void inject(CLI::App* sub, const Json& values, std::vector<std::string>& args) {
    for (auto it = values.begin(); it != values.end(); ++it) {
        if (it.value().is_object()) continue;
        const std::string flag = "--" + it.key();
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr || given(args, flag)) continue;
        if (it.value().is_boolean()) {
            if (it.value().get<bool>()) args.push_back(flag);
        } else if (it.value().is_array()) {
            for (const Json& e : it.value()) {
                args.push_back(flag);
                args.push_back(scalar(e));
            }
        } else {
            args.push_back(flag);
            args.push_back(scalar(it.value()));
        }
    }
}

// Config keys: flat option names, or objects keyed by the command path
// ("hunt", "extremal sum"). Only --config before the command is global.
void apply_config(CLI::App& app, std::vector<std::string>& args) {
    std::size_t i = 0;
    std::string path;
    for (; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else if (args[i] == "--threads" || args[i] == "--manifest") {
            ++i;
        } else if (args[i].rfind("--", 0) != 0) {
            break;
        }
    }
    if (path.empty() || i == args.size()) return;
    Json cfg;
    try {
        cfg = Json::parse(slurp(path));
    } catch (const Json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");

    CLI::App* sub = app.get_subcommand_no_throw(args[i]);
    if (sub == nullptr) return;
    std::string cmd = args[i];
    for (std::size_t j = i + 1; j < args.size(); ++j) {
        CLI::App* nested = sub->get_subcommand_no_throw(args[j]);
        if (nested == nullptr) break;
        sub = nested;
        cmd += " " + args[j];
        break;
    }
    if (cfg.contains(cmd) && cfg.at(cmd).is_object()) inject(sub, cfg.at(cmd), args);
    inject(sub, cfg, args);
}

// ---- commands

struct KindOpt {
    std::string text = "divisor";
    SequenceKind get() const { return parse_kind(text); }
};

CLI::Option* add_kind(CLI::App* c, KindOpt& k, bool required = true) {
    auto* o = c->add_option("--kind", k.text, "divisor or circle")->check(CLI::IsMember({"divisor", "circle"}));
    if (required) o->required();
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const auto started = std::chrono::system_clock::now();
    const std::string start_time = iso_now();
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string command_line = "omega";
    for (const std::string& a : args) command_line += " " + a;

    CLI::App app{"Divisor and circle problem experiments"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON file of default flag values");
    app.add_option("--threads", run.threads, "worker threads")->check(CLI::Range(1u, 256u));
    app.add_option("--manifest", run.manifest_path, "write the run manifest here");

    std::function<void()> action;

    // sieve
    std::uint64_t sieve_limit = 0;
    std::string sieve_out;
    auto* sieve = app.add_subcommand("sieve", "tabulate d(n) and r(n) as CSV (n,d,r)");
    sieve->add_option("--limit", sieve_limit)->required()->check(CLI::PositiveNumber);
    sieve->add_option("--out", sieve_out);
    sieve->callback([&] {
        action = [&] {
            const ArithmeticTable t = table_for(sieve_limit);
            std::string csv = "n,d,r\r\n";
            for (std::uint64_t n = 1; n <= t.limit; ++n) {
                csv += std::to_string(n) + ',' + std::to_string(t.d(n)) + ',' + std::to_string(t.r(n)) + "\r\n";
            }
            deliver(csv, sieve_out);
        };
    });

    // count
    KindOpt count_kind;
    std::string count_x;
    bool count_weighted_flag = false;
    std::optional<std::uint64_t> count_limit;
    auto* count = app.add_subcommand("count", "sum of d(n) or r(n) over n <= x (exact)");
    add_kind(count, count_kind);
    count->add_option("--x", count_x, "integer or exact decimal")->required();
    count->add_flag("--weighted", count_weighted_flag, "count n with n h(n)^(-4/3) <= x instead");
    count->add_option("--limit", count_limit, "sieve limit for --weighted")->check(CLI::PositiveNumber);
    count->callback([&] {
        action = [&] {
            RealArg x;
            try {
                x = parse_decimal(count_x);
            } catch (const DomainError& e) {
                throw UsageError(e.what());
            }
            if (!count_weighted_flag) {
                if (x.floor < 1) throw UsageError("--x must be at least 1");
                deliver(to_string(summatory(count_kind.get(), x.floor)) + "\n", "");
                return;
            }
            const auto spec = count_kind.get() == SequenceKind::divisor ? MultiplicativeWeightSpec::divisor()
                                                                         : MultiplicativeWeightSpec::circle();
            const std::uint64_t c = with_growing_table(count_limit, [&](const ArithmeticTable& t) {
                return count_weighted(spec, static_cast<double>(x.value), t);
            });
            deliver(std::to_string(c) + "\n", "");
        };
    });

    // delta / circle
    struct ErrorCmd {
        std::string x;
        bool exact = false;
        bool voronoi = false;
        std::uint64_t terms = 0;
    };
    ErrorCmd delta_cmd, circle_cmd;
    auto add_error_cmd = [&](const char* cmd_name, const char* help, ErrorCmd& e, SequenceKind kind) {
        auto* c = app.add_subcommand(cmd_name, help);
        c->add_option("--x", e.x, "exact mode: the argument y; series mode: x with y = x^2")->required();
        auto* ex = c->add_flag("--exact", e.exact, "exact error term at y = x (default)");
        auto* vo = c->add_flag("--voronoi", e.voronoi, "truncated series approximating the error term at x^2");
        ex->excludes(vo);
        c->add_option("--terms", e.terms, "series terms N")->check(CLI::PositiveNumber);
        c->callback([&, kind] {
            action = [&, kind] {
                if (!e.voronoi) {
                    RealArg y;
                    try {
                        y = parse_decimal(e.x);
                    } catch (const DomainError& err) {
                        throw UsageError(err.what());
                    }
                    if (y.floor < 1) throw UsageError("--x must be at least 1");
                    print_number(static_cast<double>(error_term_exact(kind, y)));
                    return;
                }
                if (e.terms == 0) throw UsageError("--voronoi needs --terms");
                double x = 0;
                try {
                    x = std::stod(e.x);
                } catch (const std::exception&) {
                    throw UsageError("--x is not a number");
                }
                if (!(x > 1)) throw UsageError("--x must exceed 1 for the series");
                const ArithmeticTable t = table_for(e.terms);
                print_number(kind == SequenceKind::divisor ? voronoi_delta(x, e.terms, t) : voronoi_p(x, e.terms, t));
            };
        });
    };
    add_error_cmd("delta", "divisor error term Delta", delta_cmd, SequenceKind::divisor);
    add_error_cmd("circle", "circle error term P", circle_cmd, SequenceKind::circle);

    // scan
    KindOpt scan_kind;
    std::uint64_t scan_terms = 0;
    std::string scan_samples, scan_out;
    auto* scan = app.add_subcommand("scan", "residuals of the truncated series at sample points");
    add_kind(scan, scan_kind);
    scan->add_option("--terms", scan_terms)->required()->check(CLI::PositiveNumber);
    scan->add_option("--samples", scan_samples, "CSV with an x column")->required()->check(CLI::ExistingFile);
    scan->add_option("--out", scan_out);
    scan->callback([&] {
        action = [&] {
            const auto rows = parse_csv(slurp(scan_samples));
            std::vector<double> xs;
            std::size_t col = 0;
            std::size_t first = 0;
            if (!rows.empty() && !rows[0].empty()) {
                char* end = nullptr;
                std::strtod(rows[0][0].c_str(), &end);
                if (end == rows[0][0].c_str()) {
                    first = 1;
                    const auto it = std::find(rows[0].begin(), rows[0].end(), "x");
                    if (it == rows[0].end()) throw UsageError("samples file has no x column");
                    col = static_cast<std::size_t>(it - rows[0].begin());
                }
            }
            for (std::size_t i = first; i < rows.size(); ++i) {
                if (rows[i].size() <= col || rows[i][col].empty()) continue;
                try {
                    xs.push_back(std::stod(rows[i][col]));
                } catch (const std::exception&) {
                    throw UsageError("samples line " + std::to_string(i + 1) + ": not a number");
                }
            }
            const ArithmeticTable t = table_for(scan_terms);
            deliver(emit_json(to_json(residual_scan(scan_kind.get(), xs, scan_terms, t, run.threads))), scan_out);
        };
    });

    // kernel check
    double k_beta = 0, k_delta = 0, k_grid_min = -1000, k_grid_max = 1000;
    std::optional<double> k_alpha;
    std::size_t k_points = 10000;
    std::string k_out;
    auto* kernel = app.add_subcommand("kernel", "Gamma kernel tools");
    kernel->require_subcommand(1);
    auto* kcheck = kernel->add_subcommand("check", "sector condition on a grid");
    kcheck->add_option("--beta", k_beta)->required();
    kcheck->add_option("--delta", k_delta)->required();
    kcheck->add_option("--alpha", k_alpha, "override the alpha chosen from beta and delta");
    kcheck->add_option("--grid-min", k_grid_min);
    kcheck->add_option("--grid-max", k_grid_max);
    kcheck->add_option("--points", k_points)->check(CLI::Range(std::size_t{2}, std::size_t{100'000'000}));
    kcheck->add_option("--out", k_out);
    kcheck->callback([&] {
        action = [&] {
            if (!(k_grid_max > k_grid_min)) throw UsageError("--grid-max must exceed --grid-min");
            SectorialKernel kern;
            try {
                kern = SectorialKernel::from_angle(k_beta, k_delta);
            } catch (const DomainError& e) {
                if (!k_alpha) throw UsageError(e.what());
                kern = {0, k_beta, k_delta};
            }
            if (k_alpha) {
                if (!(*k_alpha > 0 && *k_alpha < 1)) throw UsageError("--alpha must lie in (0, 1)");
                kern.alpha = *k_alpha;
            }
            std::vector<double> grid;
            for (std::size_t i = 0; i < k_points; ++i) {
                grid.push_back(k_grid_min + (k_grid_max - k_grid_min) * static_cast<double>(i) /
                                                static_cast<double>(k_points - 1));
            }
            grid.push_back(0.0);
            deliver(emit_json(to_json(kern, sector_check(kern, grid))), k_out);
        };
    });

    // resonator expand
    std::string rz_freqs, rz_out;
    double rz_r = 0;
    unsigned rz_degree = 0;
    std::optional<double> rz_merge;
    auto* resonator = app.add_subcommand("resonator", "resonator expansion tools");
    resonator->require_subcommand(1);
    auto* rexpand = resonator->add_subcommand("expand", "coefficients a_r(v) up to total degree B");
    rexpand->add_option("--freqs", rz_freqs, "one frequency per line: p/q, integer or decimal")
        ->required()
        ->check(CLI::ExistingFile);
    rexpand->add_option("--r", rz_r)->required()->check(CLI::Range(0.0, 1.0));
    rexpand->add_option("--degree", rz_degree)->required()->check(CLI::Range(1u, 10'000u));
    rexpand->add_option("--merge-tol", rz_merge)->check(CLI::NonNegativeNumber);
    rexpand->add_option("--out", rz_out);
    rexpand->callback([&] {
        action = [&] {
            if (!(rz_r > 0 && rz_r < 1)) throw UsageError("--r must lie in (0, 1)");
            std::istringstream in(slurp(rz_freqs));
            std::vector<std::pair<std::int64_t, std::int64_t>> rationals;
            std::vector<double> reals;
            bool exact = true;
            std::string line;
            while (std::getline(in, line)) {
                const auto hash = line.find('#');
                if (hash != std::string::npos) line.resize(hash);
                line.erase(0, line.find_first_not_of(" \t\r"));
                line.erase(line.find_last_not_of(" \t\r") + 1);
                if (line.empty()) continue;
                try {
                    const auto slash = line.find('/');
                    if (slash != std::string::npos) {
                        const std::int64_t p = std::stoll(line.substr(0, slash));
                        const std::int64_t q = std::stoll(line.substr(slash + 1));
                        if (q <= 0) throw UsageError("denominator must be positive: " + line);
                        rationals.emplace_back(p, q);
                        reals.push_back(static_cast<double>(p) / static_cast<double>(q));
                    } else if (line.find_first_not_of("0123456789+-") == std::string::npos) {
                        rationals.emplace_back(std::stoll(line), 1);
                        reals.push_back(std::stod(line));
                    } else {
                        exact = false;
                        reals.push_back(std::stod(line));
                    }
                } catch (const std::invalid_argument&) {
                    throw UsageError("bad frequency: " + line);
                }
            }
            FrequencySet fs;
            try {
                if (exact) {
                    std::int64_t den = 1;
                    for (const auto& [p, q] : rationals) den = std::lcm(den, q);
                    std::vector<std::int64_t> nums;
                    for (const auto& [p, q] : rationals) nums.push_back(p * (den / q));
                    fs = FrequencySet::rational(nums, den, rz_r);
                } else {
                    fs = FrequencySet::real(reals, rz_r);
                }
            } catch (const DomainError& e) {
                throw UsageError(e.what());
            }
            const ResonatorExpansion ex = expand(fs, rz_degree, rz_merge);
            CsvTable table;
            table.header = {"v", "coefficient", "a_r2", "representations", "min_degree", "max_degree"};
            for (const ExpansionEntry& e : ex.entries) {
                table.rows.push_back({format_double(e.v), format_double(e.coefficient), format_double(e.squared_weight),
                                      std::to_string(e.representations), std::to_string(e.min_degree),
                                      std::to_string(e.max_degree)});
            }
            deliver(emit_csv(table), rz_out);
            if (!rz_out.empty()) {
                Json summary;
                summary["entries"] = ex.entries.size();
                summary["exact_keys"] = ex.exact_keys;
                summary["total"] = ex.total();
                summary["dropped_mass"] = ex.dropped_mass;
                summary["closed_form"] = std::pow(1 - rz_r, -static_cast<double>(fs.size()));
                deliver(emit_json(summary), "");
            }
        };
    });

    // resonance verify / theorem
    std::string rv_config, rv_out;
    std::optional<std::uint64_t> rv_seed;
    std::size_t rv_random = 0;
    std::optional<double> th_y, th_x;
    auto* resonance = app.add_subcommand("resonance", "resonance inequality certification");
    resonance->require_subcommand(1);
    auto* rverify = resonance->add_subcommand("verify", "certify I2 >= delta r sum f(m) I1");
    rverify->add_option("--config", rv_config, "instance JSON")->check(CLI::ExistingFile);
    rverify->add_option("--seed", rv_seed);
    rverify->add_option("--random", rv_random, "verify this many random instances instead");
    rverify->add_option("--out", rv_out);
    rverify->callback([&] {
        action = [&] {
            if (rv_random == 0) {
                if (rv_config.empty()) throw UsageError("verify needs --config or --random");
                ResonanceInstance inst;
                try {
                    inst = instance_from_json(Json::parse(slurp(rv_config)));
                } catch (const Json::exception& e) {
                    throw UsageError(rv_config + ": " + e.what());
                } catch (const DomainError& e) {
                    throw UsageError(rv_config + ": " + e.what());
                }
                deliver(emit_json(to_json(verify_proposition(inst))), rv_out);
                return;
            }
            std::mt19937_64 rng(rv_seed.value_or(1));
            Json reports = Json::array();
            for (std::size_t i = 0; i < rv_random; ++i) {
                const ResonanceInstance inst = random_instance(rng, i % 2 == 0);
                Json entry;
                entry["instance"] = instance_to_json(inst);
                entry["report"] = to_json(verify_proposition(inst));
                reports.push_back(entry);
            }
            deliver(emit_json(reports), rv_out);
        };
    });
    auto* rtheorem = resonance->add_subcommand("theorem", "grid maximum of Re(e^(i beta) F) on [Y, X]");
    rtheorem->add_option("--config", rv_config, "instance JSON")->required()->check(CLI::ExistingFile);
    rtheorem->add_option("--Y", th_y)->required();
    rtheorem->add_option("--X", th_x)->required();
    rtheorem->add_option("--out", rv_out);
    rtheorem->callback([&] {
        action = [&] {
            if (!(*th_y > 3 && *th_y < *th_x)) throw UsageError("need 3 < Y < X");
            ResonanceInstance inst;
            try {
                inst = instance_from_json(Json::parse(slurp(rv_config)));
            } catch (const Json::exception& e) {
                throw UsageError(rv_config + ": " + e.what());
            } catch (const DomainError& e) {
                throw UsageError(rv_config + ": " + e.what());
            }
            deliver(emit_json(to_json(theorem_lower_bound(inst, *th_y, *th_x))), rv_out);
        };
    });

    // extremal
    KindOpt ex_kind;
    std::vector<std::uint64_t> ex_m;
    double ex_y = 0, ex_ymin = 100, ex_ymax = 1e5;
    std::size_t ex_points = 16;
    std::optional<std::uint64_t> ex_limit;
    std::string ex_out;
    auto* extremal = app.add_subcommand("extremal", "order statistics of h(n) n^(-3/4)");
    extremal->require_subcommand(1);
    auto* esum = extremal->add_subcommand("sum", "sums of the M largest terms");
    add_kind(esum, ex_kind);
    esum->add_option("--m", ex_m, "one or more M")->required()->check(CLI::PositiveNumber);
    esum->add_option("--limit", ex_limit, "sieve limit (default: grow until certified)")->check(CLI::PositiveNumber);
    esum->add_option("--out", ex_out);
    esum->callback([&] {
        action = [&] {
            const ExtremalSumTable t =
                with_growing_table(ex_limit, [&](const ArithmeticTable& tab) { return extremal_table(ex_kind.get(), ex_m, tab); });
            deliver(emit_json(to_json(t)), ex_out);
        };
    });
    auto* ecount = extremal->add_subcommand("count", "N(y) = #{n : n^(3/4)/h(n) <= y}");
    add_kind(ecount, ex_kind);
    ecount->add_option("--y", ex_y)->required()->check(CLI::PositiveNumber);
    ecount->add_option("--limit", ex_limit, "use a sieve table of this size instead of the factor search")
        ->check(CLI::PositiveNumber);
    ecount->callback([&] {
        action = [&] {
            std::uint64_t c = 0;
            if (ex_limit) c = count_below(ex_kind.get(), ex_y, table_for(*ex_limit));
            else c = FactorCounter(ex_kind.get(), ex_y).count(ex_y);
            deliver(std::to_string(c) + "\n", "");
        };
    });
    auto* efit = extremal->add_subcommand("fit", "slope of log(N(y)/y^(4/3)) against log log y");
    add_kind(efit, ex_kind);
    efit->add_option("--ymin", ex_ymin)->check(CLI::PositiveNumber);
    efit->add_option("--ymax", ex_ymax)->check(CLI::PositiveNumber);
    efit->add_option("--points", ex_points)->check(CLI::Range(std::size_t{8}, std::size_t{10'000}));
    efit->add_option("--out", ex_out);
    efit->callback([&] {
        action = [&] {
            if (!(ex_ymax >= 100 * ex_ymin) || !(ex_ymin > std::exp(1.0))) {
                throw UsageError("fit needs e < ymin and ymax >= 100 ymin");
            }
            Json j = to_json(exponent_fit(ex_kind.get(), log_grid(ex_ymin, ex_ymax, ex_points)));
            j["target_slope"] = counting_exponent(ex_kind.get());
            deliver(emit_json(j), ex_out);
        };
    });

    // hunt
    KindOpt hunt_kind;
    HuntConfig hc;
    std::string hunt_strategy = "grid", hunt_store, hunt_out;
    auto* huntc = app.add_subcommand("hunt", "search for large error-term witnesses");
    add_kind(huntc, hunt_kind);
    huntc->add_option("--xmin", hc.x_min)->required();
    huntc->add_option("--xmax", hc.x_max)->required();
    huntc->add_option("--budget", hc.budget)->required();
    huntc->add_option("--terms", hc.terms)->required()->check(CLI::PositiveNumber);
    huntc->add_option("--strategy", hunt_strategy)->check(CLI::IsMember({"grid", "resonator-guided", "resonator", "hybrid"}));
    huntc->add_option("--seed", hc.seed);
    huntc->add_option("--records", hc.max_records, "keep at most this many records")->check(CLI::PositiveNumber);
    huntc->add_option("--timestamp", hc.timestamp, "stamp written into each record");
    huntc->add_option("--store", hunt_store, "JSON-lines record store to append to");
    huntc->add_option("--out", hunt_out);
    huntc->callback([&] {
        action = [&] {
            hc.kind = hunt_kind.get();
            hc.strategy = parse_strategy(hunt_strategy);
            hc.threads = run.threads;
            try {
                hc.validate();
            } catch (const DomainError& e) {
                throw UsageError(e.what());
            }
            const HuntResult res = hunt(hc, table_for(hc.terms));
            Json ids = Json::array();
            if (!hunt_store.empty()) {
                RecordStore store(hunt_store);
                for (const WitnessRecord& r : res.records) ids.push_back(store.append(r));
                run.outputs[hunt_store] = digest(slurp(hunt_store));
                run.inputs.erase(hunt_store);
            }
            Json j;
            j["config"] = hc.to_json();
            j["config_hash"] = hc.hash();
            j["evaluations"] = res.evaluations;
            j["candidates"] = res.candidates;
            j["best_objective"] = res.best_objective;
            j["diagnostic"] = res.diagnostic;
            Json recs = Json::array();
            for (const WitnessRecord& r : res.records) recs.push_back(r.to_json());
            j["records"] = recs;
            if (!hunt_store.empty()) j["stored_ids"] = ids;
            deliver(emit_json(j), hunt_out);
        };
    });

    int code = 0;
    std::string error;
    try {
        apply_config(app, args);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        action();
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        error = e.what();
        code = 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        error = e.what();
        code = 2;
    } catch (const omega::Error& e) {
        std::cerr << e.what() << "\n";
        error = e.what();
        code = 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        error = e.what();
        code = 1;
    }

    Json manifest;
    manifest["command"] = command_line;
    Json options;
    for (const CLI::App* sub = &app;;) {
        for (const CLI::Option* opt : sub->get_options()) {
            if (opt->count() == 0 || opt->get_name() == "--help" || opt->get_name() == "--manifest") continue;
            options[sub->get_name().empty() ? opt->get_name() : sub->get_name() + " " + opt->get_name()] =
                opt->results();
        }
        const auto subs = sub->get_subcommands();
        if (subs.empty()) break;
        sub = subs.front();
    }
    manifest["config_hash"] = digest(dump_json(options));
    manifest["options"] = options;
    manifest["version"] = kVersion;
    manifest["compiler"] = __VERSION__;
    manifest["threads"] = run.threads;
    manifest["start"] = start_time;
    manifest["end"] = iso_now();
    manifest["elapsed_seconds"] =
        std::chrono::duration<double>(std::chrono::system_clock::now() - started).count();
    manifest["inputs"] = run.inputs;
    manifest["outputs"] = run.outputs;
    manifest["exit_code"] = code;
    if (!error.empty()) manifest["error"] = error;
    if (!run.manifest_path.empty()) {
        std::ofstream out(run.manifest_path, std::ios::trunc);
        out << emit_json(manifest);
        if (!out) {
            std::cerr << "cannot write manifest " << run.manifest_path << "\n";
            return code == 0 ? 1 : code;
        }
    } else {
        std::cerr << dump_json(manifest) << "\n";
    }
    return code;
}
