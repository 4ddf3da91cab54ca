#include "hct/report.hpp"

#include <cmath>
#include <cstdio>

namespace hct {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_readable(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

JsonValue JsonValue::null() { return JsonValue{}; }
JsonValue JsonValue::of(bool v) {
    JsonValue j;
    j.type = Type::Bool;
    j.boolean = v;
    return j;
}
JsonValue JsonValue::of(long long v) {
    JsonValue j;
    j.type = Type::Int;
    j.integer = v;
    return j;
}
JsonValue JsonValue::of(int v) { return of(static_cast<long long>(v)); }
JsonValue JsonValue::of(double v) {
    JsonValue j;
    j.type = Type::Number;
    j.number = v;
    return j;
}
JsonValue JsonValue::of(std::string v) {
    JsonValue j;
    j.type = Type::String;
    j.string = std::move(v);
    return j;
}
JsonValue JsonValue::arr() {
    JsonValue j;
    j.type = Type::Array;
    return j;
}
JsonValue JsonValue::obj() {
    JsonValue j;
    j.type = Type::Object;
    return j;
}

JsonValue& JsonValue::push(JsonValue v) {
    array.push_back(std::move(v));
    return *this;
}

JsonValue& JsonValue::set(std::string key, JsonValue v) {
    object.emplace_back(std::move(key), std::move(v));
    return *this;
}

namespace {

void dump_string(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

}  // namespace

void JsonValue::dump(std::string& out) const {
    switch (type) {
        case Type::Null: out += "null"; break;
        case Type::Bool: out += boolean ? "true" : "false"; break;
        case Type::Int: out += std::to_string(integer); break;
        case Type::Number:
            if (std::isfinite(number)) {
                out += format_double(number);
            } else {
                out += "null";
            }
            break;
        case Type::String: dump_string(out, string); break;
        case Type::Array: {
            out += '[';
            bool first = true;
            for (const JsonValue& v : array) {
                if (!first) out += ',';
                first = false;
                v.dump(out);
            }
            out += ']';
            break;
        }
        case Type::Object: {
            out += '{';
            bool first = true;
            for (const auto& [k, v] : object) {
                if (!first) out += ',';
                first = false;
                dump_string(out, k);
                out += ':';
                v.dump(out);
            }
            out += '}';
            break;
        }
    }
}

std::string JsonValue::dump() const {
    std::string out;
    dump(out);
    return out;
}

const char* chain_kind_name(ChainKind k) {
    switch (k) {
        case ChainKind::Harmonic1D: return "harmonic-1d";
        case ChainKind::Harmonic2D: return "harmonic-2d";
        case ChainKind::Classical2D: return "classical-2d";
    }
    return "?";
}

const char* slice_kind_name(SliceKind k) {
    switch (k) {
        case SliceKind::Joint: return "joint";
        case SliceKind::Row: return "row";
        case SliceKind::Column: return "column";
        case SliceKind::OneD: return "one-d";
    }
    return "?";
}

const char* convexity_mode_name(ConvexityMode m) {
    switch (m) {
        case ConvexityMode::HarmonicJoint: return "harmonic-joint";
        case ConvexityMode::HarmonicCoordinate: return "harmonic-coordinate";
        case ConvexityMode::ClassicalJoint: return "classical-joint";
        case ConvexityMode::ClassicalCoordinate: return "classical-coordinate";
        case ConvexityMode::Harmonic1D: return "harmonic-1d";
    }
    return "?";
}

JsonValue witness_to_json(const Witness& w) {
    JsonValue j = JsonValue::obj();
    j.set("slice", JsonValue::of(std::string(slice_kind_name(w.slice))));
    JsonValue points = JsonValue::arr();
    if (w.slice == SliceKind::OneD) {
        points.push(JsonValue::of(w.x1));
        points.push(JsonValue::of(w.x2));
    } else {
        JsonValue p1 = JsonValue::arr();
        p1.push(JsonValue::of(w.x1));
        p1.push(JsonValue::of(w.y1));
        JsonValue p2 = JsonValue::arr();
        p2.push(JsonValue::of(w.x2));
        p2.push(JsonValue::of(w.y2));
        points.push(std::move(p1));
        points.push(std::move(p2));
    }
    j.set("points", std::move(points));
    j.set("t", JsonValue::of(w.t));
    j.set("lhs", JsonValue::of(w.lhs));
    j.set("rhs", JsonValue::of(w.rhs));
    j.set("violation", JsonValue::of(w.violation));
    return j;
}

JsonValue verdict_to_json(const ConvexityVerdict& v) {
    JsonValue j = JsonValue::obj();
    j.set("mode", JsonValue::of(std::string(convexity_mode_name(v.mode))));
    j.set("certified_on_grid", JsonValue::of(v.certified_on_grid));
    j.set("grid_n", JsonValue::of(v.grid_n));
    j.set("witness", v.witness ? witness_to_json(*v.witness) : JsonValue::null());
    return j;
}

JsonValue chain_to_json(const ChainReport& r) {
    JsonValue j = JsonValue::obj();
    j.set("kind", JsonValue::of(std::string(chain_kind_name(r.kind))));
    JsonValue names = JsonValue::arr();
    for (const std::string& n : r.names) names.push(JsonValue::of(n));
    JsonValue values = JsonValue::arr();
    for (double v : r.values) values.push(JsonValue::of(v));
    JsonValue errs = JsonValue::arr();
    for (double v : r.quad_errors) errs.push(JsonValue::of(v));
    JsonValue margins = JsonValue::arr();
    for (double v : r.margins) margins.push(JsonValue::of(v));
    j.set("names", std::move(names));
    j.set("values", std::move(values));
    j.set("quad_errors", std::move(errs));
    j.set("margins", std::move(margins));
    j.set("ordering_ok", JsonValue::of(r.ordering_ok));
    j.set("quad_converged", JsonValue::of(r.quad_converged));
    return j;
}

JsonValue identity_to_json(const IdentityReport& r) {
    JsonValue j = JsonValue::obj();
    j.set("lhs", JsonValue::of(r.lhs));
    j.set("rhs", JsonValue::of(r.rhs));
    j.set("residual", JsonValue::of(r.residual));
    j.set("residual_ok", JsonValue::of(r.residual_ok));
    j.set("lhs_err_estimate", JsonValue::of(r.lhs_err));
    j.set("rhs_err_estimate", JsonValue::of(r.rhs_err));
    j.set("quad_converged", JsonValue::of(r.quad_converged));
    return j;
}

namespace {

JsonValue moments_to_json(const HolderMoments& m) {
    JsonValue a = JsonValue::arr();
    a.push(JsonValue::of(m.m1));
    a.push(JsonValue::of(m.m2));
    a.push(JsonValue::of(m.m3));
    a.push(JsonValue::of(m.m4));
    return a;
}

}  // namespace

JsonValue bound_to_json(const BoundReport& r) {
    JsonValue j = JsonValue::obj();
    j.set("lhs_abs", JsonValue::of(r.lhs_abs));
    j.set("rhs_direct", JsonValue::of(r.rhs_direct));
    j.set("rhs_c_coeff", JsonValue::of(r.rhs_c_coeff));
    j.set("holds_direct", JsonValue::of(r.holds_direct));
    j.set("c_coeff_consistent", JsonValue::of(r.c_coeff_consistent));
    j.set("moments_direct", moments_to_json(r.moments_direct));
    j.set("moments_c_implied", moments_to_json(r.moments_c_implied));
    j.set("lhs_err_estimate", JsonValue::of(r.lhs_err));
    j.set("rhs_err_estimate", JsonValue::of(r.rhs_err));
    j.set("quad_converged", JsonValue::of(r.quad_converged));
    return j;
}

std::string csv_escape(const std::string& field) {
    bool needs_quote = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quote) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string render_report(OutputFormat format, const std::string& command, const JsonValue& inputs,
                          const JsonValue& result, const std::vector<std::string>& warnings,
                          const std::vector<std::vector<std::string>>& csv_rows,
                          const std::string& text) {
    switch (format) {
        case OutputFormat::Json: {
            JsonValue report = JsonValue::obj();
            report.set("command", JsonValue::of(command));
            report.set("inputs", inputs);
            report.set("result", result);
            JsonValue warn = JsonValue::arr();
            for (const std::string& w : warnings) warn.push(JsonValue::of(w));
            report.set("warnings", std::move(warn));
            report.set("version", JsonValue::of(std::string(kToolVersion)));
            return report.dump() + "\n";
        }
        case OutputFormat::Csv: {
            std::string out;
            for (const auto& row : csv_rows) {
                bool first = true;
                for (const std::string& field : row) {
                    if (!first) out += ',';
                    first = false;
                    out += csv_escape(field);
                }
                out += '\n';
            }
            return out;
        }
        case OutputFormat::Text: {
            std::string out = text;
            for (const std::string& w : warnings) {
                out += "warning: ";
                out += w;
                out += '\n';
            }
            return out;
        }
    }
    return {};
}

}  // namespace hct
