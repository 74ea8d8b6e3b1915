// emit.hpp
//
// Stable serialization: JSON objects keep insertion order, floats print
// with 17 significant digits, CSV quotes fields RFC 4180 style. FNV-1a 64
// digests identify configs, records and files.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace omega {

using Json = nlohmann::ordered_json;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);
std::string digest(std::string_view bytes);  // hex64(fnv1a(bytes))

std::string format_double(double value);  // %.17g

// Compact single-line JSON with 17-digit floats; non-finite floats are a
// programming error.
std::string dump_json(const Json& value);
// dump_json plus a trailing newline.
std::string emit_json(const Json& value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string csv_field(std::string_view field);
std::string emit_csv(const CsvTable& table);
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace omega
