#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "io.hpp"
#include "o2gasket/asymptotics.hpp"
#include "o2gasket/errors.hpp"
#include "o2gasket/oracle.hpp"
#include "o2gasket/series.hpp"
#include "o2gasket/walks.hpp"
#include "o2gasket/weights.hpp"

namespace o2cli {

namespace {

using namespace o2gasket;

struct CommonOpts {
    double tol = 1e-10;
    long long max_terms = 10'000'000;
    std::string mode = "digamma";
    std::uint64_t seed = 1;
    int workers = 0;
    std::string out_path;
    std::string format = "json";
    bool enable_tutte = false;
    std::string g_spec;
    std::string g_file;
};

TruncationConfig make_cfg(const CommonOpts& o) {
    TruncationConfig cfg;
    cfg.target_abs_tol = o.tol;
    cfg.max_terms = o.max_terms;
    cfg.mode = o.mode == "direct" ? SumMode::direct_truncated : SumMode::closed_form_digamma;
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_g = true) {
    cmd->add_option("--tol", o.tol, "series target absolute tolerance");
    cmd->add_option("--max-terms", o.max_terms, "direct-summation term cap");
    cmd->add_option("--mode", o.mode, "series mode: digamma | direct")
        ->check(CLI::IsMember({"digamma", "direct"}));
    cmd->add_option("--seed", o.seed, "master RNG seed");
    cmd->add_option("--workers", o.workers, "worker threads (0 = hardware)");
    cmd->add_option("--out", o.out_path, "write the payload to this path");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--enable-tutte", o.enable_tutte, "enable the loop-equation oracle");
    if (with_g) {
        cmd->add_option("--g", o.g_spec,
                        "comma-separated g_1,g_2,... or a builtin name "
                        "(budd-symmetric, fully-packed)");
        cmd->add_option("--g-file", o.g_file, "file with one g entry per line");
    }
}

std::optional<Builtin> builtin_by_name(const std::string& name) {
    if (name == "budd-symmetric" || name == "budd_symmetric") return Builtin::budd_symmetric;
    if (name == "fully-packed" || name == "fully_packed") return Builtin::fully_packed;
    return std::nullopt;
}

struct FamilyInput {
    std::optional<Builtin> builtin;
    std::optional<GSequence> g;

    GSequence sequence() const {
        if (g) return *g;
        return builtin_example(*builtin).g;
    }
};

FamilyInput resolve_g(const CommonOpts& o) {
    FamilyInput in;
    if (!o.g_file.empty()) {
        std::ifstream f(o.g_file);
        if (!f) throw Error("cannot open --g-file " + o.g_file);
        std::vector<double> entries;
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            entries.push_back(std::stod(line));
        }
        in.g = GSequence(entries);
        return in;
    }
    if (o.g_spec.empty()) throw Error("missing --g (sequence or builtin name)");
    if (auto b = builtin_by_name(o.g_spec)) {
        in.builtin = *b;
        return in;
    }
    std::vector<double> entries;
    std::stringstream ss(o.g_spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        entries.push_back(std::stod(item));
    }
    in.g = GSequence(entries);
    return in;
}

struct BuiltFamily {
    WeightFamily family;
    std::string source;
};

BuiltFamily build_family(const FamilyInput& in, const TruncationConfig& cfg) {
    if (in.builtin) {
        auto ex = builtin_example(*in.builtin, cfg);
        return {std::move(ex.family), *in.builtin == Builtin::budd_symmetric
                                          ? "builtin_symmetric"
                                          : "builtin_fully_packed"};
    }
    return {synthesize(*in.g, cfg), "synthesized"};
}

// Payload sink: --out path or the command stream.
struct Sink {
    explicit Sink(const CommonOpts& o, std::ostream& fallback) {
        if (!o.out_path.empty()) {
            file.open(o.out_path);
            if (!file) throw Error("cannot open --out " + o.out_path);
            os = &file;
        } else {
            os = &fallback;
        }
    }
    std::ofstream file;
    std::ostream* os;
};

void emit_validation(JsonWriter& w, const ValidationReport& rep) {
    w.begin_object();
    w.key("verdict");
    w.value(std::string(rep.pass ? "pass" : "fail"));
    w.key("failing");
    w.begin_array();
    for (const auto& f : rep.failing) w.value(f);
    w.end_array();
    w.key("mass_partial");
    w.value(rep.mass_partial);
    w.key("mass_tail");
    w.value(rep.mass_tail);
    w.key("mass_residual");
    w.value(rep.mass_residual);
    w.key("harmonicity_residuals");
    w.begin_array();
    for (double r : rep.harmonicity_residuals) w.value(r);
    w.end_array();
    w.key("p0_residual");
    w.value(rep.p0_residual);
    w.key("harmonicity_cutoff");
    w.value(rep.harmonicity_cutoff);
    w.key("harmonicity_tail_bound");
    w.value(rep.harmonicity_tail_bound);
    double gasket_min = 0.0;
    for (double r : rep.gasket_residuals) gasket_min = std::min(gasket_min, r);
    w.key("gasket_min");
    w.value(gasket_min);
    w.key("nonneg_violations");
    w.begin_array();
    for (const auto& [k, v] : rep.nonneg_violations) {
        w.begin_array();
        w.value(k);
        w.value(v);
        w.end_array();
    }
    w.end_array();
    w.key("degenerate");
    w.value(rep.degenerate);
    w.end_object();
}

void emit_family(std::ostream& os, const BuiltFamily& bf, const ValidationReport& rep,
                 long long K = 64) {
    JsonWriter w(os);
    w.begin_object();
    w.key("source");
    w.value(bf.source);
    w.key("g");
    w.begin_array();
    for (double v : bf.family.g().entries()) w.value(v);
    w.end_array();
    w.key("c_q");
    w.value(bf.family.c_q());
    w.key("h");
    w.value(bf.family.h());
    w.key("nu");
    w.begin_object();
    const auto window = bf.family.nu().window(-K, K);
    for (long long k = -K; k <= K; ++k) {
        w.key(std::to_string(k));
        w.value(window[static_cast<size_t>(k + K)]);
    }
    w.end_object();
    w.key("q_log");
    w.begin_array();
    for (long long k = 1; k <= K; ++k) {
        const LogValue lv = bf.family.log_q(k);
        if (lv.sign == 0)
            w.null();
        else
            w.value(lv.log_abs);
    }
    w.end_array();
    w.key("q_tilde_log");
    w.begin_array();
    for (long long k = 1; k <= K; ++k) {
        const LogValue lv = bf.family.log_q_tilde(k);
        if (lv.sign == 0)
            w.null();
        else
            w.value(lv.log_abs);
    }
    w.end_array();
    if (bf.source == "synthesized") {
        const auto& info = bf.family.synthesis_info();
        w.key("synthesis");
        w.begin_object();
        w.key("scan_window");
        w.value(info.scan_window);
        w.key("min_nu");
        w.value(info.min_nu);
        w.key("min_nu_at");
        w.value(info.min_nu_at);
        w.key("tail_sign_verified");
        w.value(info.tail_sign_verified);
        w.end_object();
    }
    w.key("validation");
    emit_validation(w, rep);
    w.end_object();
    os << "\n";
}

int cmd_synth(const CommonOpts& o, std::ostream& out) {
    const auto cfg = make_cfg(o);
    const auto bf = build_family(resolve_g(o), cfg);
    ValidationTolerances light{1e-6, 1e-6, 1e-8, 1e-8};
    // direct-mode windows cost O(terms) per value; keep the embedded
    // check shallow there and lean on `o2 validate` for depth
    const bool direct = cfg.mode == SumMode::direct_truncated;
    const auto rep = direct ? validate_nu(bf.family.nu(), 8, 64, light, 4096)
                            : validate_nu(bf.family.nu(), 16, 128, light);
    Sink sink(o, out);
    emit_family(*sink.os, bf, rep);
    return rep.pass ? 0 : 1;
}

int cmd_validate(const CommonOpts& o, int depth, long long window, double check_tol,
                 std::ostream& out) {
    const auto cfg = make_cfg(o);
    const auto bf = build_family(resolve_g(o), cfg);
    ValidationTolerances tol;
    tol.mass = check_tol;
    tol.harmonicity = check_tol;
    const auto rep = validate_nu(bf.family.nu(), depth, window, tol);
    Sink sink(o, out);
    JsonWriter w(*sink.os);
    emit_validation(w, rep);
    *sink.os << "\n";
    return rep.pass ? 0 : 1;
}

void emit_table(std::ostream& os, const WeightFamily& wf, long long l_lo, long long l_hi,
                const std::string& format) {
    if (format == "csv") {
        os << "l,W,log_W,L_q\n";
        for (long long l = l_lo; l <= l_hi; ++l) {
            const LogValue w = partition_function(wf, l);
            const double lq = double(l) * double(l) * wf.nu().value(-l - 1).value;
            os << l << ',' << fmt_csv(w.value()) << ',' << fmt_csv(w.log_abs) << ','
               << fmt_csv(lq) << "\n";
        }
        return;
    }
    JsonWriter w(os);
    w.begin_array();
    for (long long l = l_lo; l <= l_hi; ++l) {
        const LogValue pv = partition_function(wf, l);
        w.begin_object();
        w.key("l");
        w.value(l);
        w.key("W");
        w.value(pv.value());
        w.key("log_W");
        w.value(pv.log_abs);
        w.key("L_q");
        w.value(double(l) * double(l) * wf.nu().value(-l - 1).value);
        w.end_object();
    }
    w.end_array();
    os << "\n";
}

bool parse_range(const std::string& spec, long long& lo, long long& hi) {
    const auto pos = spec.find("..");
    if (pos == std::string::npos) return false;
    lo = std::stoll(spec.substr(0, pos));
    hi = std::stoll(spec.substr(pos + 2));
    return lo >= 0 && hi >= lo;
}

int cmd_table(const CommonOpts& o, const std::string& range, std::ostream& out) {
    long long lo = 0, hi = 10;
    if (!range.empty() && !parse_range(range, lo, hi)) throw Error("bad --range, want A..B");
    const auto bf = build_family(resolve_g(o), make_cfg(o));
    Sink sink(o, out);
    emit_table(*sink.os, bf.family, lo, hi, o.format);
    return 0;
}

int cmd_example(const CommonOpts& o, const std::string& name, const std::string& table,
                std::ostream& out) {
    const auto which = builtin_by_name(name);
    if (!which) throw Error("unknown example '" + name + "'");
    const auto cfg = make_cfg(o);
    auto ex = builtin_example(*which, cfg);
    Sink sink(o, out);
    if (!table.empty()) {
        long long lo = 0, hi = 10;
        if (!parse_range(table, lo, hi)) throw Error("bad --table, want A..B");
        const std::string format = o.format == "json" ? "csv" : o.format;
        emit_table(*sink.os, ex.family, lo, hi, format);
        return 0;
    }
    BuiltFamily bf{std::move(ex.family), *which == Builtin::budd_symmetric
                                             ? "builtin_symmetric"
                                             : "builtin_fully_packed"};
    ValidationTolerances light{1e-6, 1e-6, 1e-8, 1e-8};
    const auto rep = validate_nu(bf.family.nu(), 16, 128, light);
    emit_family(*sink.os, bf, rep);
    return rep.pass ? 0 : 1;
}

int cmd_asympt(const CommonOpts& o, double lambda, const std::string& grid_spec,
               std::ostream& out) {
    const auto in = resolve_g(o);
    const GSequence g = in.sequence();
    const auto cfg = make_cfg(o);

    std::vector<double> grid;
    {
        std::stringstream ss(grid_spec);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) grid.push_back(std::stod(item));
    }
    if (grid.empty()) grid = {1e2, 1e3, 1e4, 1e5};

    const auto rep = classify_regime(g, cfg);
    const auto ratios = slow_variation_ratios(g, lambda, grid, cfg);

    Sink sink(o, out);
    if (o.format == "csv") {
        *sink.os << "x,L,L_tilde,ratio\n";
        for (size_t i = 0; i < grid.size(); ++i) {
            const double x = grid[i];
            *sink.os << fmt_csv(x) << ',' << fmt_csv(L_eval(g, x, cfg).value) << ','
                     << fmt_csv(L_tilde_eval(g, x, cfg).value) << ',' << fmt_csv(ratios[i])
                     << "\n";
        }
        return 0;
    }
    JsonWriter w(*sink.os);
    w.begin_object();
    w.key("first_moment");
    w.value(rep.first_moment);
    w.key("regime");
    switch (rep.regime) {
        case Regime::drift_deficit: w.value(std::string("drift_deficit")); break;
        case Regime::boundary_summable: w.value(std::string("boundary_summable")); break;
        case Regime::boundary_divergent: w.value(std::string("boundary_divergent")); break;
    }
    w.key("limit_constant");
    if (rep.limit_constant)
        w.value(*rep.limit_constant);
    else
        w.null();
    w.key("lambda");
    w.value(lambda);
    w.key("x_grid");
    w.begin_array();
    for (double x : grid) w.value(x);
    w.end_array();
    w.key("L");
    w.begin_array();
    for (double x : grid) w.value(L_eval(g, x, cfg).value);
    w.end_array();
    w.key("L_tilde");
    w.begin_array();
    for (double x : grid) w.value(L_tilde_eval(g, x, cfg).value);
    w.end_array();
    w.key("ratios");
    w.begin_array();
    for (double r : ratios) w.value(r);
    w.end_array();
    w.end_object();
    *sink.os << "\n";
    return 0;
}

int cmd_walk(const CommonOpts& o, long long n_walks, long long horizon, long long support_cut,
             std::ostream& out) {
    const auto in = resolve_g(o);
    NuDistribution nu = in.builtin
                            ? builtin_example(*in.builtin, make_cfg(o)).nu
                            : NuDistribution::synthesized(*in.g, make_cfg(o));
    WalkConfig cfg;
    cfg.master_seed = o.seed;
    cfg.n_walks = n_walks;
    cfg.horizon = horizon;
    cfg.support_cut = support_cut;
    cfg.workers = o.workers;
    const AliasSampler sampler = build_sampler(nu, cfg);
    const auto stats = simulate_ladders(sampler, cfg);

    long long max_asc = 0;
    for (const auto& [v, c] : stats.asc_height) max_asc = std::max(max_asc, v);
    const long long series_len = std::min<long long>(max_asc + 1, 4096);
    const auto asc_p = asc_ladder_series(in.sequence(), std::max<long long>(series_len, 1));

    const double n = double(stats.n_walks);
    auto zscore = [&](double count, double p) -> std::string {
        if (p <= 0.0 || p >= 1.0) return "";
        const double sd = std::sqrt(p * (1.0 - p) * n);
        return fmt_csv((count - n * p) / sd);
    };

    Sink sink(o, out);
    std::ostream& os = *sink.os;
    os << "ladder_type,value,count,expected_probability,z_score\n";
    for (const auto& [v, c] : stats.desc_height) {
        const double p = to_double(sqrt_ladder_coeff(v));
        os << "strict_descending_height," << v << ',' << c << ',' << fmt_csv(p) << ','
           << zscore(double(c), p) << "\n";
    }
    for (const auto& [v, c] : stats.asc_height) {
        std::string pe, ze;
        if (v < series_len) {
            const double p = asc_p[static_cast<size_t>(v)];
            pe = fmt_csv(p);
            ze = zscore(double(c), p);
        }
        os << "weak_ascending_height," << v << ',' << c << ',' << pe << ',' << ze << "\n";
    }
    for (const auto& [v, c] : stats.desc_epoch)
        os << "strict_descending_epoch," << v << ',' << c << ",,\n";
    for (const auto& [v, c] : stats.asc_epoch)
        os << "weak_ascending_epoch," << v << ',' << c << ",,\n";
    os << "strict_descending_censored,," << stats.censored_desc << ",,\n";
    os << "weak_ascending_censored,," << stats.censored_asc << ",,\n";
    return 0;
}

int cmd_oracle(const CommonOpts& o, long long kmax, long long terms, std::ostream& out,
               std::ostream& err) {
    const auto in = resolve_g(o);
    const GSequence g = in.sequence();
    const auto cfg = make_cfg(o);

    oracle::DirectNuEvaluator direct(g, terms);
    double max_diff = 0.0;
    long long argmax = 0;
    for (long long k = -kmax; k <= kmax; ++k) {
        const double closed = nu_value(g, k, cfg).value;
        const double d = std::abs(closed - direct.value(k).value);
        if (d > max_diff) {
            max_diff = d;
            argmax = k;
        }
    }
    const bool pass = max_diff <= 1e-9;

    Sink sink(o, out);
    JsonWriter w(*sink.os);
    w.begin_object();
    w.key("kmax");
    w.value(kmax);
    w.key("terms");
    w.value(terms);
    w.key("max_abs_diff");
    w.value(max_diff);
    w.key("argmax_k");
    w.value(argmax);
    w.key("pass");
    w.value(pass);
    w.key("tutte");
    w.begin_object();
    w.key("enabled");
    w.value(o.enable_tutte);
    if (o.enable_tutte) {
        try {
            oracle::TutteOracle tutte;
            const auto bf = build_family(in, cfg);
            w.key("calibration_residual");
            w.value(tutte.calibration_residual());
            w.key("residuals");
            w.begin_object();
            for (long long l = 1; l <= 3; ++l) {
                w.key(std::to_string(l));
                w.value(tutte.residual(bf.family, l, 2000));
            }
            w.end_object();
        } catch (const CalibrationError& e) {
            w.key("disabled_reason");
            w.value(std::string(e.what()));
            err << "tutte oracle disabled: " << e.what() << "\n";
        }
    }
    w.end_object();
    w.end_object();
    *sink.os << "\n";
    return pass ? 0 : 1;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"critical O(2) loop-decorated map weight sequences"};
    app.name("o2");
    app.require_subcommand(1);

    CommonOpts o;

    auto* synth = app.add_subcommand("synth", "synthesize a weight family from g");
    add_common(synth, o);

    auto* validate = app.add_subcommand("validate", "validate a step law in depth");
    add_common(validate, o);
    int v_depth = 50;
    long long v_window = 200;
    double v_check_tol = 1e-8;
    validate->add_option("--depth", v_depth, "harmonicity depth P");
    validate->add_option("--window", v_window, "scan window K");
    validate->add_option("--check-tol", v_check_tol, "mass/harmonicity verdict tolerance");

    auto* table = app.add_subcommand("table", "partition-function table");
    add_common(table, o);
    std::string t_range = "0..10";
    table->add_option("--range", t_range, "l range, A..B");

    auto* asympt = app.add_subcommand("asympt", "regime classification and L diagnostics");
    add_common(asympt, o);
    double a_lambda = 2.0;
    std::string a_grid;
    asympt->add_option("--lambda", a_lambda, "slow-variation ratio scale");
    asympt->add_option("--x-grid", a_grid, "comma-separated x values");

    auto* walk = app.add_subcommand("walk", "Monte Carlo ladder statistics");
    add_common(walk, o);
    long long w_n = 1'000'000, w_h = 100'000, w_cut = 32768;
    walk->add_option("--n-walks", w_n, "number of walks");
    walk->add_option("--horizon", w_h, "censoring horizon");
    walk->add_option("--support-cut", w_cut, "sampling support cut K");

    auto* orc = app.add_subcommand("oracle", "closed form vs direct summation");
    add_common(orc, o);
    long long o_kmax = 30, o_terms = 100'000;
    orc->add_option("--kmax", o_kmax, "check |k| <= kmax");
    orc->add_option("--terms", o_terms, "direct summation terms");

    auto* example = app.add_subcommand("example", "builtin example families");
    add_common(example, o, /*with_g=*/false);
    std::string e_name, e_table;
    example->add_option("name", e_name, "budd-symmetric | fully-packed")->required();
    example->add_option("--table", e_table, "emit a table over l = A..B instead of JSON");

    std::vector<std::string> argv(args.rbegin(), args.rend());  // CLI11 pops from the back
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(o, out);
        if (validate->parsed()) return cmd_validate(o, v_depth, v_window, v_check_tol, out);
        if (table->parsed()) return cmd_table(o, t_range, out);
        if (asympt->parsed()) return cmd_asympt(o, a_lambda, a_grid, out);
        if (walk->parsed()) return cmd_walk(o, w_n, w_h, w_cut, out);
        if (orc->parsed()) return cmd_oracle(o, o_kmax, o_terms, out, err);
        if (example->parsed()) return cmd_example(o, e_name, e_table, out);
    } catch (const MomentExcessError& e) {
        err << "error: moment excess: " << e.what() << "\n";
        return 1;
    } catch (const DegenerateNuError& e) {
        err << "error: degenerate distribution: " << e.what() << "\n";
        return 1;
    } catch (const NegativityError& e) {
        err << "error: negativity at k = " << e.witness_k << ": " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "usage error: no subcommand\n";
    return 2;
}

}  // namespace o2cli
