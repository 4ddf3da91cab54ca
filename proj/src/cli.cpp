#include "hct/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "hct/report.hpp"

namespace hct {

namespace {

const char* kGrammarHelp =
    "expression grammar:\n"
    "  expr   := term ((\"+\"|\"-\") term)*\n"
    "  term   := factor ((\"*\"|\"/\") factor)*\n"
    "  factor := \"-\" factor | base (\"^\" factor)?\n"
    "  base   := NUMBER | \"x\" | \"y\" | \"(\" expr \")\" | FUNC \"(\" expr \")\"\n"
    "  FUNC   := exp | ln | sqrt | abs | sin | cos\n"
    "  NUMBER := digits [\".\" digits] [(\"e\"|\"E\") [\"+\"|\"-\"] digits]\n"
    "no implicit multiplication; \"^\" binds tighter than unary minus.\n";

Rect parse_rect(const std::string& text, bool allow_pair) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument("");
            vals.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("--rect expects comma-separated numbers, got '" + item + "'");
        }
    }
    if (vals.size() == 2 && allow_pair) {
        if (!(vals[0] > 0.0)) throw std::invalid_argument("a must be positive");
        if (!(vals[0] < vals[1])) throw std::invalid_argument("a must be < b");
        // c,d placeholders: one-dimensional commands never read them.
        return Rect(vals[0], vals[1], 1.0, 2.0);
    }
    if (vals.size() != 4) throw std::invalid_argument("--rect expects a,b,c,d");
    return Rect(vals[0], vals[1], vals[2], vals[3]);
}

JsonValue rect_to_json(const Rect& r) {
    JsonValue a = JsonValue::arr();
    a.push(JsonValue::of(r.a));
    a.push(JsonValue::of(r.b));
    a.push(JsonValue::of(r.c));
    a.push(JsonValue::of(r.d));
    return a;
}

std::string rect_text(const Rect& r) {
    return "[" + format_readable(r.a) + "," + format_readable(r.b) + "]x[" + format_readable(r.c) +
           "," + format_readable(r.d) + "]";
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

struct CommandOutput {
    JsonValue inputs = JsonValue::obj();
    JsonValue result = JsonValue::obj();
    std::vector<std::string> warnings;
    std::vector<std::vector<std::string>> csv_rows;
    std::string text;
    int exit_code = 0;
};

void add_field_row(std::vector<std::vector<std::string>>& rows, const std::string& field,
                   const std::string& value) {
    rows.push_back({field, value});
}

CommandOutput run_check(const Expr& f, const std::string& expr_text, const Rect& r, ConvexityMode mode,
                        int grid, double tol) {
    CommandOutput out;
    out.inputs.set("expr", JsonValue::of(expr_text));
    out.inputs.set("rect", rect_to_json(r));
    out.inputs.set("mode", JsonValue::of(std::string(convexity_mode_name(mode))));
    out.inputs.set("grid", JsonValue::of(grid));
    out.inputs.set("tol", JsonValue::of(tol));

    ConvexityVerdict verdict = check_convexity(f, r, mode, grid, tol);
    out.result = verdict_to_json(verdict);
    out.exit_code = verdict.witness ? 1 : 0;

    out.csv_rows.push_back({"field", "value"});
    add_field_row(out.csv_rows, "mode", convexity_mode_name(mode));
    add_field_row(out.csv_rows, "certified_on_grid", bool_text(verdict.certified_on_grid));
    add_field_row(out.csv_rows, "grid_n", std::to_string(verdict.grid_n));
    std::ostringstream text;
    text << "check " << convexity_mode_name(mode) << " on " << rect_text(r) << ", grid " << grid
         << ", tol " << format_readable(tol) << "\n";
    if (verdict.witness) {
        const Witness& w = *verdict.witness;
        add_field_row(out.csv_rows, "slice", slice_kind_name(w.slice));
        add_field_row(out.csv_rows, "x1", format_double(w.x1));
        add_field_row(out.csv_rows, "y1", format_double(w.y1));
        add_field_row(out.csv_rows, "x2", format_double(w.x2));
        add_field_row(out.csv_rows, "y2", format_double(w.y2));
        add_field_row(out.csv_rows, "t", format_double(w.t));
        add_field_row(out.csv_rows, "lhs", format_double(w.lhs));
        add_field_row(out.csv_rows, "rhs", format_double(w.rhs));
        add_field_row(out.csv_rows, "violation", format_double(w.violation));
        text << "REFUTED on grid: violation " << format_readable(w.violation) << "\n";
        if (w.slice == SliceKind::OneD) {
            text << "  pair (" << format_readable(w.x1) << ", " << format_readable(w.x2) << "), t = "
                 << format_readable(w.t) << "\n";
        } else {
            text << "  pair ((" << format_readable(w.x1) << ", " << format_readable(w.y1) << "), ("
                 << format_readable(w.x2) << ", " << format_readable(w.y2) << ")), t = "
                 << format_readable(w.t) << " [" << slice_kind_name(w.slice) << "]\n";
        }
        text << "  lhs = " << format_readable(w.lhs) << ", rhs = " << format_readable(w.rhs) << "\n";
    } else {
        text << "certified on grid (no violation above tol)\n";
    }
    out.text = text.str();
    return out;
}

CommandOutput run_chain(const Expr& f, const std::string& expr_text, const Rect& r, bool classical,
                        bool one_d, double tol_value) {
    CommandOutput out;
    Tolerance tol;
    tol.abs_tol = tol_value;
    tol.rel_tol = tol_value;

    ChainReport report;
    std::string variant;
    if (one_d) {
        variant = "harmonic-1d";
        report = chain_harmonic_1d(f, r.a, r.b, tol);
    } else if (classical) {
        variant = "classical-2d";
        report = chain_classical_2d(f, r, tol);
    } else {
        variant = "harmonic-2d";
        report = chain_harmonic_2d(f, r, tol);
    }

    out.inputs.set("expr", JsonValue::of(expr_text));
    out.inputs.set("rect", rect_to_json(r));
    out.inputs.set("variant", JsonValue::of(variant));
    out.inputs.set("tol", JsonValue::of(tol_value));

    out.result = chain_to_json(report);
    out.exit_code = report.ordering_ok ? 0 : 1;
    if (!report.quad_converged)
        out.warnings.push_back("quadrature did not converge; error estimates may be unreliable");

    out.csv_rows.push_back({"member", "name", "value", "quad_error", "margin_to_next"});
    for (std::size_t i = 0; i < report.values.size(); ++i) {
        out.csv_rows.push_back({std::to_string(i + 1), report.names[i], format_double(report.values[i]),
                                format_double(report.quad_errors[i]),
                                i < report.margins.size() ? format_double(report.margins[i]) : ""});
    }

    std::ostringstream text;
    text << "chain " << variant << " on ";
    if (one_d) {
        text << "[" << format_readable(r.a) << "," << format_readable(r.b) << "]";
    } else {
        text << rect_text(r);
    }
    text << "\n";
    for (std::size_t i = 0; i < report.values.size(); ++i) {
        text << "  " << report.names[i] << " = " << format_readable(report.values[i]) << "\n";
    }
    text << "ordering_ok: " << bool_text(report.ordering_ok) << "\n";
    out.text = text.str();
    return out;
}

CommandOutput run_identity(const Expr& f, const std::string& expr_text, const Rect& r, double tol_value,
                           PartialMode partials) {
    CommandOutput out;
    Tolerance tol;
    tol.abs_tol = tol_value;
    tol.rel_tol = tol_value;
    IdentityReport report = evaluate_identity(f, r, tol, partials);

    out.inputs.set("expr", JsonValue::of(expr_text));
    out.inputs.set("rect", rect_to_json(r));
    out.inputs.set("tol", JsonValue::of(tol_value));
    out.inputs.set("partials", JsonValue::of(std::string(
        partials == PartialMode::Symbolic ? "symbolic" : "finite-difference")));

    out.result = identity_to_json(report);
    out.exit_code = report.residual_ok ? 0 : 1;
    if (!report.quad_converged)
        out.warnings.push_back("quadrature did not converge; error estimates may be unreliable");

    out.csv_rows.push_back({"field", "value"});
    add_field_row(out.csv_rows, "lhs", format_double(report.lhs));
    add_field_row(out.csv_rows, "rhs", format_double(report.rhs));
    add_field_row(out.csv_rows, "residual", format_double(report.residual));
    add_field_row(out.csv_rows, "residual_ok", bool_text(report.residual_ok));
    add_field_row(out.csv_rows, "lhs_err_estimate", format_double(report.lhs_err));
    add_field_row(out.csv_rows, "rhs_err_estimate", format_double(report.rhs_err));

    std::ostringstream text;
    text << "identity on " << rect_text(r) << "\n"
         << "  lhs = " << format_readable(report.lhs) << ", rhs = " << format_readable(report.rhs)
         << ", residual = " << format_readable(report.residual) << "\n"
         << "residual_ok: " << bool_text(report.residual_ok) << "\n";
    out.text = text.str();
    return out;
}

CommandOutput run_bound(const Expr& f, const std::string& expr_text, const Rect& r, double q,
                        double tol_value, PartialMode partials, int preflight_grid) {
    CommandOutput out;
    BoundParams bp(q);
    Tolerance tol;
    tol.abs_tol = tol_value;
    tol.rel_tol = tol_value;
    BoundReport report = evaluate_bound(f, r, bp, tol, partials);

    out.inputs.set("expr", JsonValue::of(expr_text));
    out.inputs.set("rect", rect_to_json(r));
    out.inputs.set("q", JsonValue::of(q));
    out.inputs.set("tol", JsonValue::of(tol_value));
    out.inputs.set("partials", JsonValue::of(std::string(
        partials == PartialMode::Symbolic ? "symbolic" : "finite-difference")));
    out.inputs.set("preflight_grid", JsonValue::of(preflight_grid));

    out.result = bound_to_json(report);
    out.exit_code = report.holds_direct ? 0 : 1;
    if (!report.c_coeff_consistent) {
        out.warnings.push_back(
            "C-coefficient form disagrees with direct moments (rhs_c_coeff = " +
            format_readable(report.rhs_c_coeff) + ", rhs_direct = " + format_readable(report.rhs_direct) +
            "); the direct-moment form is normative");
    }
    if (!report.quad_converged)
        out.warnings.push_back("quadrature did not converge; error estimates may be unreliable");

    if (preflight_grid > 0) {
        // Hypothesis check: |mixed partial|^q harmonically convex on the
        // co-ordinates.
        Expr magnitude = make_unary(UnaryOp::Abs, mixed_partial(f));
        Expr powered = make_binary(BinaryOp::Pow, magnitude, make_constant(q));
        ConvexityVerdict pre =
            check_convexity(powered, r, ConvexityMode::HarmonicCoordinate, preflight_grid, 1e-9);
        if (!pre.certified_on_grid) {
            out.warnings.push_back(
                "pre-flight: |mixed partial|^q is not harmonically convex on the co-ordinates on the " +
                std::to_string(preflight_grid) + "-grid; the bound hypothesis fails");
        }
    }

    out.csv_rows.push_back({"field", "value"});
    add_field_row(out.csv_rows, "lhs_abs", format_double(report.lhs_abs));
    add_field_row(out.csv_rows, "rhs_direct", format_double(report.rhs_direct));
    add_field_row(out.csv_rows, "rhs_c_coeff", format_double(report.rhs_c_coeff));
    add_field_row(out.csv_rows, "holds_direct", bool_text(report.holds_direct));
    add_field_row(out.csv_rows, "c_coeff_consistent", bool_text(report.c_coeff_consistent));
    add_field_row(out.csv_rows, "m1_direct", format_double(report.moments_direct.m1));
    add_field_row(out.csv_rows, "m2_direct", format_double(report.moments_direct.m2));
    add_field_row(out.csv_rows, "m3_direct", format_double(report.moments_direct.m3));
    add_field_row(out.csv_rows, "m4_direct", format_double(report.moments_direct.m4));
    add_field_row(out.csv_rows, "m1_c_implied", format_double(report.moments_c_implied.m1));
    add_field_row(out.csv_rows, "m2_c_implied", format_double(report.moments_c_implied.m2));
    add_field_row(out.csv_rows, "m3_c_implied", format_double(report.moments_c_implied.m3));
    add_field_row(out.csv_rows, "m4_c_implied", format_double(report.moments_c_implied.m4));

    std::ostringstream text;
    text << "bound on " << rect_text(r) << ", q = " << format_readable(q) << "\n"
         << "  lhs_abs = " << format_readable(report.lhs_abs)
         << ", rhs_direct = " << format_readable(report.rhs_direct)
         << ", rhs_c_coeff = " << format_readable(report.rhs_c_coeff) << "\n"
         << "holds_direct: " << bool_text(report.holds_direct) << "\n"
         << "c_coeff_consistent: " << bool_text(report.c_coeff_consistent) << "\n";
    out.text = text.str();
    return out;
}

CommandOutput run_scalar(const std::string& name, const JsonValue& inputs, double value,
                         const std::string& text) {
    CommandOutput out;
    out.inputs = inputs;
    out.result = JsonValue::obj();
    out.result.set("value", JsonValue::of(value));
    out.csv_rows.push_back({"field", "value"});
    add_field_row(out.csv_rows, name, format_double(value));
    out.text = text;
    return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"numerical checks for harmonic convexity and Hermite-Hadamard-type inequalities"};
    app.name("hct");
    app.require_subcommand(1);

    const std::map<std::string, ConvexityMode> mode_map{
        {"harmonic-joint", ConvexityMode::HarmonicJoint},
        {"harmonic-coordinate", ConvexityMode::HarmonicCoordinate},
        {"classical-joint", ConvexityMode::ClassicalJoint},
        {"classical-coordinate", ConvexityMode::ClassicalCoordinate},
        {"harmonic-1d", ConvexityMode::Harmonic1D}};
    const std::map<std::string, OutputFormat> format_map{
        {"text", OutputFormat::Text}, {"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}};

    // Shared option storage; each subcommand binds the ones it uses.
    std::string expr_text;
    std::string rect_text_arg;
    ConvexityMode mode = ConvexityMode::HarmonicJoint;
    OutputFormat format = OutputFormat::Text;
    int grid = 64;
    double tol = 1e-10;
    double q = 2.0;
    bool use_fd = false;
    bool classical = false;
    bool one_d = false;
    int preflight_grid = 0;
    int seed = 0;  // reserved; the tool is fully deterministic
    double arg_alpha = 0.0, arg_b = 0.0, arg_c = 0.0, arg_z = 0.0;
    double arg_x = 0.0, arg_y = 0.0;

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "output format")
            ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case))
            ->default_str("text");
        sub->add_option("--seed", seed, "reserved (deterministic tool)");
    };

    CLI::App* check = app.add_subcommand("check", "certify or refute a convexity predicate on a grid");
    check->add_option("--expr", expr_text, "expression in x and y")->required();
    check->add_option("--rect", rect_text_arg, "rectangle a,b,c,d")->required();
    check->add_option("--mode", mode, "convexity predicate")
        ->transform(CLI::CheckedTransformer(mode_map, CLI::ignore_case))
        ->default_str("harmonic-joint");
    check->add_option("--grid", grid, "lattice points per axis")->default_val(64);
    check->add_option("--tol", tol, "violation tolerance")->default_val(1e-10);
    add_format(check);

    CLI::App* chain = app.add_subcommand("chain", "evaluate a Hermite-Hadamard chain");
    chain->add_option("--expr", expr_text, "expression in x and y")->required();
    chain->add_option("--rect", rect_text_arg, "rectangle a,b,c,d (a,b with --one-d)")->required();
    chain->add_flag("--classical", classical, "use the classical unweighted chain");
    chain->add_flag("--one-d", one_d, "use the one-dimensional harmonic chain on [a,b]");
    chain->add_option("--tol", tol, "quadrature tolerance")->default_val(1e-10);
    add_format(chain);

    CLI::App* identity = app.add_subcommand("identity", "check the integration-by-parts identity");
    identity->add_option("--expr", expr_text, "expression in x and y")->required();
    identity->add_option("--rect", rect_text_arg, "rectangle a,b,c,d")->required();
    identity->add_option("--tol", tol, "quadrature tolerance")->default_val(1e-10);
    identity->add_flag("--fd", use_fd, "use finite-difference mixed partials");
    add_format(identity);

    CLI::App* bound = app.add_subcommand("bound", "evaluate the Hoelder-type upper bound");
    bound->add_option("--expr", expr_text, "expression in x and y")->required();
    bound->add_option("--rect", rect_text_arg, "rectangle a,b,c,d")->required();
    bound->add_option("--q", q, "Hoelder exponent q > 1")->required();
    bound->add_option("--tol", tol, "quadrature tolerance")->default_val(1e-10);
    bound->add_flag("--fd", use_fd, "use finite-difference mixed partials");
    bound->add_option("--preflight", preflight_grid,
                      "grid for the |mixed partial|^q co-ordinate convexity pre-flight (0 = off)")
        ->default_val(0);
    add_format(bound);

    CLI::App* hyp = app.add_subcommand("hyp2f1", "Gauss hypergeometric function 2F1(alpha,b;c;z)");
    hyp->add_option("--alpha", arg_alpha, "first parameter")->required();
    hyp->add_option("--b", arg_b, "second parameter (0 < b < c)")->required();
    hyp->add_option("--c", arg_c, "third parameter")->required();
    hyp->add_option("--z", arg_z, "argument in [0,1)")->required();
    add_format(hyp);

    CLI::App* beta_cmd = app.add_subcommand("beta", "Euler Beta function");
    beta_cmd->add_option("--x", arg_x, "first argument (> 0)")->required();
    beta_cmd->add_option("--y", arg_y, "second argument (> 0)")->required();
    add_format(beta_cmd);

    std::vector<char*> argv;
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.push_back("hct");
    for (const std::string& a : args) storage.push_back(a);
    for (std::string& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n\n" << app.help() << "\n" << kGrammarHelp;
        return 2;
    }

    try {
        CommandOutput result;
        std::string command;
        if (app.got_subcommand(check)) {
            command = "check";
            Rect r = parse_rect(rect_text_arg, false);
            Expr f = parse(expr_text);
            result = run_check(f, expr_text, r, mode, grid, tol);
        } else if (app.got_subcommand(chain)) {
            command = "chain";
            if (classical && one_d) throw std::invalid_argument("--classical and --one-d are exclusive");
            Rect r = parse_rect(rect_text_arg, one_d);
            Expr f = parse(expr_text);
            result = run_chain(f, expr_text, r, classical, one_d, tol);
        } else if (app.got_subcommand(identity)) {
            command = "identity";
            Rect r = parse_rect(rect_text_arg, false);
            Expr f = parse(expr_text);
            result = run_identity(f, expr_text, r, tol,
                                  use_fd ? PartialMode::FiniteDifference : PartialMode::Symbolic);
        } else if (app.got_subcommand(bound)) {
            command = "bound";
            Rect r = parse_rect(rect_text_arg, false);
            Expr f = parse(expr_text);
            result = run_bound(f, expr_text, r, q, tol,
                               use_fd ? PartialMode::FiniteDifference : PartialMode::Symbolic,
                               preflight_grid);
        } else if (app.got_subcommand(hyp)) {
            command = "hyp2f1";
            double value = gauss_2f1(arg_alpha, arg_b, arg_c, arg_z);
            JsonValue inputs = JsonValue::obj();
            inputs.set("alpha", JsonValue::of(arg_alpha));
            inputs.set("b", JsonValue::of(arg_b));
            inputs.set("c", JsonValue::of(arg_c));
            inputs.set("z", JsonValue::of(arg_z));
            result = run_scalar("hyp2f1", inputs, value,
                                "hyp2f1 = " + format_readable(value) + "\n");
        } else if (app.got_subcommand(beta_cmd)) {
            command = "beta";
            double value = beta(arg_x, arg_y);
            JsonValue inputs = JsonValue::obj();
            inputs.set("x", JsonValue::of(arg_x));
            inputs.set("y", JsonValue::of(arg_y));
            result = run_scalar("beta", inputs, value, "beta = " + format_readable(value) + "\n");
        }

        out << render_report(format, command, result.inputs, result.result, result.warnings,
                             result.csv_rows, result.text);
        return result.exit_code;
    } catch (const ParseError& e) {
        err << "expression error: " << e.what() << "\n\n" << kGrammarHelp;
        return 2;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const NotConvergedError& e) {
        err << "did not converge: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace hct
