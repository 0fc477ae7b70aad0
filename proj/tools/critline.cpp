// Command-line front end: evaluators, critical-line zero lists, and the
// per-module audit grids, with deterministic CSV/JSON reports.
//
// Exit codes: 0 success, 1 usage or parse error, 2 evaluation error,
// 3 I/O error, 4 gated audit residual above the configured tolerance.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <critline/audit.hpp>
#include <critline/zerolist.hpp>

namespace {

using critline::cplx;

cplx parse_complex(const std::string& token) {
    const char* p = token.c_str();
    char* end = nullptr;
    double a = std::strtod(p, &end);
    if (end == p)
        throw critline::precondition_error("cannot parse number: '" + token + "'");
    if (*end == '\0') return {a, 0.0};
    if (*end == 'i' && end[1] == '\0') return {0.0, a};
    if (*end != '+' && *end != '-')
        throw critline::precondition_error("cannot parse number: '" + token + "'");
    const char* q = end;
    double b = std::strtod(q, &end);
    if (end == q || *end != 'i' || end[1] != '\0')
        throw critline::precondition_error("cannot parse number: '" + token + "'");
    return {a, b};
}

double parse_real(const std::string& token) {
    cplx z = parse_complex(token);
    if (z.imag() != 0.0)
        throw critline::precondition_error("expected a real number: '" + token + "'");
    return z.real();
}

void apply_tolerance_overrides(critline::ToleranceSet& tols,
                               const std::vector<std::string>& overrides) {
    for (const std::string& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw critline::precondition_error("tolerance override must be name=value: '" + ov +
                                               "'");
        tols.set(ov.substr(0, eq), parse_real(ov.substr(eq + 1)));
    }
}

struct CommonOpts {
    std::vector<std::string> tol_overrides;
    std::string out_path;
    std::string format = "csv";
    int threads = 0;
    std::string zeros_file;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--tol", opts.tol_overrides, "named tolerance override, name=value")
        ->take_all();
    cmd->add_option("--out", opts.out_path, "report file path");
    cmd->add_option("--format", opts.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", opts.threads, "worker threads, 0 = auto");
    cmd->add_option("--zeros-file", opts.zeros_file, "critical-line ordinate file")
        ->envname("CRITLINE_ZEROS");
}

void print_eval_result(const std::string& function, const std::string& input,
                       const critline::EvalResult& r, const CommonOpts& opts) {
    std::printf("function: %s\n", function.c_str());
    std::printf("input: %s\n", input.c_str());
    std::printf("value: %s\n", critline::detail::fmt_complex(r.value).c_str());
    std::printf("abs_err: %s\n", critline::detail::fmt_double(r.abs_err).c_str());
    if (!opts.out_path.empty()) {
        critline::ReportTable table;
        table.columns = {"function", "input", "value_re", "value_im", "abs_err"};
        table.add_row({function, input, r.value.real(), r.value.imag(), r.abs_err});
        critline::write_report(opts.out_path, table,
                               critline::parse_report_format(opts.format));
    }
}

critline::ZeroList obtain_zero_list(const CommonOpts& opts, std::size_t need, double tol) {
    if (!opts.zeros_file.empty()) {
        critline::ZeroList list = critline::read_zero_list(opts.zeros_file);
        if (list.ordinates.size() < need)
            throw critline::insufficient_zeros_error(
                "zeros file holds " + std::to_string(list.ordinates.size()) +
                " ordinates, need " + std::to_string(need));
        return list;
    }
    return critline::build_zero_list(need, tol);
}

int run_audit(const std::string& target, const CommonOpts& opts,
              const critline::ToleranceSet& tols, int principal_q, bool search_zeros) {
    critline::AuditReport rep;
    if (target == "functional-zeta") {
        rep = critline::audit_functional_zeta(tols, opts.threads);
    } else if (target == "hadamard") {
        critline::ZeroList zl = obtain_zero_list(opts, 200, tols.get("zero_refine"));
        rep = critline::audit_hadamard(zl, tols);
    } else if (target == "phase") {
        rep = critline::audit_phase(tols, opts.threads);
    } else if (target == "dirichlet") {
        rep = critline::audit_dirichlet(tols, opts.threads);
    } else if (target == "principal-identity") {
        rep = critline::audit_principal_identity(tols, principal_q);
    } else if (target == "epstein") {
        rep = search_zeros ? critline::audit_epstein_zero_search(tols)
                           : critline::audit_epstein(tols, opts.threads);
    } else {
        throw critline::precondition_error("unknown audit target: " + target);
    }

    if (!opts.out_path.empty())
        critline::write_report(opts.out_path, rep.table,
                               critline::parse_report_format(opts.format));
    for (const std::string& note : rep.notes) std::printf("%s\n", note.c_str());
    return rep.pass ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical evaluators and audit grids for zeta, Dirichlet L, and "
                 "positive-definite lattice-form zeta functions"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a function at one point");
    std::string eval_fn, eval_point;
    int eval_q = 4, eval_label = 1;
    std::vector<long long> eval_form = {1, 0, 1};
    long long eval_radius = 0;
    eval_cmd->add_option("function", eval_fn, "zeta | phi | F | L | epstein")
        ->required()
        ->check(CLI::IsMember({"zeta", "phi", "F", "L", "epstein"}));
    eval_cmd->add_option("point", eval_point, "evaluation point, a+bi (F takes real t)")
        ->required();
    eval_cmd->add_option("--q", eval_q, "character modulus for L");
    eval_cmd->add_option("--label", eval_label, "character label for L (1 = principal)");
    eval_cmd->add_option("--form", eval_form, "quadratic form coefficients a b c")
        ->expected(3);
    eval_cmd->add_option("--radius", eval_radius,
                         "lattice truncation radius (0 = analytic continuation)");
    add_common(eval_cmd, opts);

    auto* zeros_cmd = app.add_subcommand("zeros", "write the first critical-line ordinates");
    long long zeros_count = 0;
    zeros_cmd->add_option("count", zeros_count, "how many ordinates")
        ->required()
        ->check(CLI::Range(1ll, 1000000ll));
    add_common(zeros_cmd, opts);

    auto* audit_cmd = app.add_subcommand("audit", "run a module's invariant grid");
    std::string audit_target;
    int principal_q = 0;
    bool search_zeros = false;
    std::string phase_variant = "as-printed";
    audit_cmd
        ->add_option("target", audit_target,
                     "functional-zeta | hadamard | phase | dirichlet | principal-identity | "
                     "epstein")
        ->required()
        ->check(CLI::IsMember({"functional-zeta", "hadamard", "phase", "dirichlet",
                               "principal-identity", "epstein"}));
    audit_cmd->add_option("--q", principal_q, "restrict principal-identity to one modulus");
    audit_cmd->add_flag("--search-zeros", search_zeros,
                        "epstein target: run the rectangle zero search instead of the grid");
    audit_cmd->add_option("--variant", phase_variant, "highlighted phase variant")
        ->check(CLI::IsMember({"as-printed", "t-squared"}));
    add_common(audit_cmd, opts);

    auto* chars_cmd = app.add_subcommand("characters", "dump a character table as JSON");
    int chars_q = 0;
    chars_cmd->add_option("--q", chars_q, "modulus")->required()->check(CLI::PositiveNumber);
    add_common(chars_cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    critline::ToleranceSet tols;
    try {
        apply_tolerance_overrides(tols, opts.tol_overrides);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (eval_cmd->parsed()) {
            cplx s;
            double t = 0.0;
            try {
                if (eval_fn == "F")
                    t = parse_real(eval_point);
                else
                    s = parse_complex(eval_point);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "error: %s\n", e.what());
                return 1;
            }
            critline::EvalResult r;
            if (eval_fn == "zeta") {
                r = critline::zeta(s);
            } else if (eval_fn == "phi") {
                r = critline::completed_zeta(s);
            } else if (eval_fn == "F") {
                r = critline::critical_line_f(t);
            } else if (eval_fn == "L") {
                const auto& table = critline::enumerate_characters(eval_q);
                if (eval_label < 1 || static_cast<std::size_t>(eval_label) > table.size())
                    throw critline::precondition_error("character label out of range");
                r = critline::l_function(s, table[static_cast<std::size_t>(eval_label - 1)]);
            } else {
                critline::QuadraticForm form(eval_form[0], eval_form[1], eval_form[2]);
                r = eval_radius > 0 ? critline::epstein_direct(s, form, eval_radius)
                                    : critline::epstein_continued(s, form);
            }
            print_eval_result(eval_fn, eval_point, r, opts);
            return 0;
        }

        if (zeros_cmd->parsed()) {
            critline::ZeroList list;
            try {
                list = critline::build_zero_list(static_cast<std::size_t>(zeros_count),
                                                 tols.get("zero_refine"));
            } catch (const critline::precondition_error& e) {
                std::fprintf(stderr, "error: %s\n", e.what());
                return 1;
            }
            std::string path = !opts.out_path.empty()
                                   ? opts.out_path
                                   : (!opts.zeros_file.empty() ? opts.zeros_file : "zeros.txt");
            critline::write_zero_list(path, list);
            std::printf("wrote %zu ordinates to %s\n", list.ordinates.size(), path.c_str());
            return 0;
        }

        if (audit_cmd->parsed()) {
            if (audit_target == "phase")
                std::printf("variant flag: %s (the ledger always carries both variants)\n",
                            phase_variant.c_str());
            return run_audit(audit_target, opts, tols, principal_q, search_zeros);
        }

        if (chars_cmd->parsed()) {
            std::vector<critline::DirichletCharacter> table;
            try {
                table = critline::enumerate_characters(chars_q);
            } catch (const critline::precondition_error& e) {
                std::fprintf(stderr, "error: %s\n", e.what());
                return 1;
            }
            nlohmann::ordered_json dump = nlohmann::ordered_json::array();
            for (const auto& chi : table) {
                nlohmann::ordered_json rec;
                rec["q"] = chi.q;
                rec["j"] = chi.label;
                rec["a"] = chi.parity;
                rec["primitive"] = chi.primitive;
                nlohmann::ordered_json vals = nlohmann::ordered_json::array();
                for (const cplx& v : chi.values)
                    vals.push_back({v.real(), v.imag()});
                rec["values"] = vals;
                dump.push_back(rec);
            }
            std::string text = dump.dump() + "\n";
            if (!opts.out_path.empty())
                critline::detail::write_file_atomic(opts.out_path, text);
            else
                std::fputs(text.c_str(), stdout);
            return 0;
        }
    } catch (const critline::io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
