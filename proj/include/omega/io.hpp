// io.hpp
//
// JSON forms of reports and resonance instances.
//
// Instance document:
//   {"target": {"sequence": "divisor", "terms": 50}
//           or {"denominator": q, "terms": [{"n": 1, "f": 1.0, "numerator": p}, ...]}
//           or {"terms": [{"n": 1, "f": 1.0, "lambda": 1.5}, ...]},
//    "resonant": [0, 2, 5] or {"largest": 5},
//    "beta": -0.785398, "delta": 0.1, "alpha": 0.45 (optional),
//    "r": 0.333333, "T": 10}

#pragma once

#include "omega/emit.hpp"
#include "omega/error_terms.hpp"
#include "omega/extremal.hpp"
#include "omega/kernel.hpp"
#include "omega/resonance.hpp"

namespace omega {

ResonanceInstance instance_from_json(const Json& doc);
Json instance_to_json(const ResonanceInstance& inst);

Json to_json(const SectorialKernel& kernel, const SectorReport& report);
Json to_json(const ResonanceReport& report);
ResonanceReport resonance_report_from_json(const Json& j);
Json to_json(const TheoremCheck& check);
Json to_json(const ResidualScan& scan);
Json to_json(const ExtremalSumTable& table);
Json to_json(const ExponentFit& fit);

}  // namespace omega
