#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hct/convexity.hpp"
#include "hct/hh.hpp"

namespace hct {

inline constexpr const char* kToolVersion = "0.1.0";

/// Minimal JSON value with insertion-ordered object keys and fixed float
/// formatting (%.17g), so serialized reports are byte-identical across runs.
struct JsonValue {
    enum class Type { Null, Bool, Int, Number, String, Array, Object };
    Type type = Type::Null;
    bool boolean = false;
    long long integer = 0;
    double number = 0.0;
    std::string string;
    std::vector<JsonValue> array;
    std::vector<std::pair<std::string, JsonValue>> object;

    static JsonValue null();
    static JsonValue of(bool v);
    static JsonValue of(long long v);
    static JsonValue of(int v);
    static JsonValue of(double v);
    static JsonValue of(std::string v);
    static JsonValue arr();
    static JsonValue obj();

    JsonValue& push(JsonValue v);
    JsonValue& set(std::string key, JsonValue v);

    void dump(std::string& out) const;
    std::string dump() const;
};

enum class OutputFormat { Text, Json, Csv };

std::string format_double(double v);   // %.17g
std::string format_readable(double v); // %.12g, for text output

JsonValue witness_to_json(const Witness& w);
JsonValue verdict_to_json(const ConvexityVerdict& v);
JsonValue chain_to_json(const ChainReport& r);
JsonValue identity_to_json(const IdentityReport& r);
JsonValue bound_to_json(const BoundReport& r);

/// Assembles {"command", "inputs", "result", "warnings", "version"} and
/// renders it in the requested format. CSV emits a header row and one row
/// per chain member, or field/value rows for the other result kinds; text
/// is a readable summary. `csv_rows` supplies the CSV body; `text` the
/// human-readable body.
std::string render_report(OutputFormat format, const std::string& command, const JsonValue& inputs,
                          const JsonValue& result, const std::vector<std::string>& warnings,
                          const std::vector<std::vector<std::string>>& csv_rows,
                          const std::string& text);

std::string csv_escape(const std::string& field);

const char* chain_kind_name(ChainKind k);
const char* slice_kind_name(SliceKind k);
const char* convexity_mode_name(ConvexityMode m);

}  // namespace hct
