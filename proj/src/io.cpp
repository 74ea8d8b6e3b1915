#include "omega/io.hpp"

#include <algorithm>
#include <numeric>

#include "omega/errors.hpp"

namespace omega {

namespace {

double number(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) throw DomainError(std::string("instance needs numeric '") + key + "'");
    return j.at(key).get<double>();
}

}  // namespace

ResonanceInstance instance_from_json(const Json& doc) {
    if (!doc.is_object()) throw DomainError("instance must be a JSON object");
    ResonanceInstance inst;
    const Json& target = doc.at("target");
    if (target.contains("sequence")) {
        const SequenceKind kind = parse_kind(target.at("sequence").get<std::string>());
        const auto terms = target.at("terms").get<std::uint64_t>();
        inst.target = TargetSum::from_sequence(kind, terms, build_table(terms));
    } else {
        if (target.contains("denominator")) inst.target.denominator = target.at("denominator").get<std::int64_t>();
        for (const Json& t : target.at("terms")) {
            TargetTerm term;
            term.n = t.value("n", static_cast<std::uint64_t>(inst.target.support.size() + 1));
            term.f = number(t, "f");
            if (inst.target.exact()) {
                term.numerator = t.at("numerator").get<std::int64_t>();
                term.lambda = static_cast<double>(term.numerator) / static_cast<double>(inst.target.denominator);
            } else {
                term.lambda = number(t, "lambda");
            }
            inst.target.support.push_back(term);
        }
        inst.target.tag = target.value("tag", std::string("custom"));
    }
    inst.target.validate();

    const Json& res = doc.at("resonant");
    if (res.is_array()) {
        for (const Json& i : res) inst.resonant.push_back(i.get<std::size_t>());
    } else {
        const auto k = res.at("largest").get<std::size_t>();
        std::vector<std::size_t> idx(inst.target.support.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return inst.target.support[a].f > inst.target.support[b].f;
        });
        idx.resize(std::min(k, idx.size()));
        std::sort(idx.begin(), idx.end());
        inst.resonant = idx;
    }

    const double beta = number(doc, "beta");
    const double delta = number(doc, "delta");
    if (doc.contains("alpha")) {
        inst.kernel = {number(doc, "alpha"), beta, delta};
    } else {
        inst.kernel = SectorialKernel::from_angle(beta, delta);
    }
    if (doc.contains("r")) inst.r = number(doc, "r");
    if (doc.contains("T")) inst.T = number(doc, "T");
    inst.validate();
    return inst;
}

Json instance_to_json(const ResonanceInstance& inst) {
    Json target;
    if (inst.target.exact()) target["denominator"] = inst.target.denominator;
    target["tag"] = inst.target.tag;
    Json terms = Json::array();
    for (const TargetTerm& t : inst.target.support) {
        Json term;
        term["n"] = t.n;
        term["f"] = t.f;
        if (inst.target.exact()) term["numerator"] = t.numerator;
        else term["lambda"] = t.lambda;
        terms.push_back(term);
    }
    target["terms"] = terms;
    Json doc;
    doc["target"] = target;
    doc["resonant"] = inst.resonant;
    doc["alpha"] = inst.kernel.alpha;
    doc["beta"] = inst.kernel.beta;
    doc["delta"] = inst.kernel.delta;
    doc["r"] = inst.r;
    doc["T"] = inst.T;
    return doc;
}

Json to_json(const SectorialKernel& kernel, const SectorReport& report) {
    Json j;
    j["alpha"] = kernel.alpha;
    j["beta"] = kernel.beta;
    j["delta"] = kernel.delta;
    j["min_margin"] = report.min_margin;
    j["min_real"] = report.min_real;
    j["worst_xi"] = report.worst_xi;
    j["pass"] = report.pass;
    return j;
}

Json to_json(const ResonanceReport& r) {
    Json j;
    j["I1"] = r.I1;
    j["I2"] = r.I2;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["J1_bound"] = r.J1_bound;
    j["quadrature_error_estimate"] = r.quadrature_error_estimate;
    j["I1_error"] = r.I1_error;
    j["I2_error"] = r.I2_error;
    j["sector_margin"] = r.sector_margin;
    j["certified"] = r.certified;
    return j;
}

ResonanceReport resonance_report_from_json(const Json& j) {
    ResonanceReport r;
    r.I1 = j.at("I1").get<double>();
    r.I2 = j.at("I2").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.margin = j.at("margin").get<double>();
    r.J1_bound = j.at("J1_bound").get<double>();
    r.quadrature_error_estimate = j.at("quadrature_error_estimate").get<double>();
    r.I1_error = j.at("I1_error").get<double>();
    r.I2_error = j.at("I2_error").get<double>();
    r.sector_margin = j.at("sector_margin").get<double>();
    r.certified = j.at("certified").get<bool>();
    return r;
}

Json to_json(const TheoremCheck& c) {
    Json j;
    j["T"] = c.T;
    j["bound"] = c.bound;
    j["error_term"] = c.error_term;
    j["error_constant"] = 1.0;
    j["measured_error"] = c.measured_error;
    j["grid_max"] = c.grid_max;
    j["argmax"] = c.argmax;
    j["grid_points"] = c.grid_points;
    j["pass"] = c.pass;
    return j;
}

Json to_json(const ResidualScan& scan) {
    Json samples = Json::array();
    for (const ErrorTermSample& s : scan.samples) {
        Json j;
        j["kind"] = std::string(name(s.kind));
        j["x"] = s.x;
        j["exact_value"] = s.exact_value;
        j["series_value"] = s.series_value;
        j["residual"] = s.residual;
        j["terms_used"] = s.terms_used;
        samples.push_back(j);
    }
    Json j;
    j["samples"] = samples;
    j["max_abs_residual"] = scan.max_abs_residual;
    j["max_scaled_residual"] = scan.max_scaled_residual;
    j["epsilon"] = kResidualEpsilon;
    return j;
}

Json to_json(const ExtremalSumTable& table) {
    Json entries = Json::array();
    for (const ExtremalEntry& e : table.entries) {
        Json j;
        j["M"] = e.M;
        j["sum"] = e.sum;
        j["n_M"] = e.n_M;
        j["y_M"] = e.y_M;
        if (e.M >= 3) j["ratio"] = e.sum / predicted_order(table.kind, static_cast<double>(e.M));
        entries.push_back(j);
    }
    Json j;
    j["kind"] = std::string(name(table.kind));
    j["entries"] = entries;
    j["scan_limit"] = table.scan_limit;
    return j;
}

Json to_json(const ExponentFit& fit) {
    Json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r_squared"] = fit.r_squared;
    j["y"] = fit.ys;
    j["count"] = fit.counts;
    return j;
}

}  // namespace omega
