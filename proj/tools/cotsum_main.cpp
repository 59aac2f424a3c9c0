#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cotsum/config.hpp"
#include "cotsum/cotangent.hpp"
#include "cotsum/distribution.hpp"
#include "cotsum/errors.hpp"
#include "cotsum/estermann.hpp"
#include "cotsum/moments.hpp"
#include "cotsum/rng.hpp"
#include "cotsum/verify.hpp"

namespace {

using namespace cotsum;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_int(int64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%" PRId64, v);
    return buf;
}

// One tabular result: `# key=value` metadata, a header line, rows. The JSON
// rendering mirrors the same fields.
struct Doc {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_meta(const std::string& k, const std::string& v) { meta.emplace_back(k, v); }
    void add_row(std::vector<std::string> r) { rows.push_back(std::move(r)); }
};

std::string render_csv(const Doc& d) {
    std::string out;
    for (const auto& [k, v] : d.meta)
        out += "# " + k + "=" + v + "\n";
    for (size_t i = 0; i < d.columns.size(); ++i)
        out += (i ? "," : "") + d.columns[i];
    out += "\n";
    for (const auto& row : d.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + row[i];
        out += "\n";
    }
    return out;
}

nlohmann::json cell_to_json(const std::string& s) {
    if (s.empty())
        return s;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size())
        return v;
    return s;
}

std::string render_json(const Doc& d) {
    nlohmann::json j;
    for (const auto& [k, v] : d.meta)
        j["meta"][k] = cell_to_json(v);
    j["columns"] = d.columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : d.rows) {
        nlohmann::json o;
        for (size_t i = 0; i < row.size() && i < d.columns.size(); ++i)
            o[d.columns[i]] = cell_to_json(row[i]);
        j["rows"].push_back(o);
    }
    return j.dump(2) + "\n";
}

std::string render(const Doc& d, const RunConfig& cfg) {
    return cfg.format == OutputFormat::json ? render_json(d) : render_csv(d);
}

void emit(const Doc& d, const RunConfig& cfg, const std::string& out_path,
          bool echo_stdout = true) {
    const std::string text = render(d, cfg);
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f)
            throw domain_error("cannot open output file: " + out_path);
        f << text;
    }
    if (echo_stdout)
        std::cout << text;
}

Doc make_doc(const RunConfig& cfg, const std::string& command) {
    Doc d;
    d.add_meta("version", kVersion);
    d.add_meta("command", command);
    d.add_meta("precision", cfg.precision == Precision::extended ? "extended" : "double");
    d.add_meta("seed", std::to_string(cfg.seed));
    d.add_meta("threads", std::to_string(cfg.threads));
    d.add_meta("sieve_cap", fmt_int(cfg.sieve_cap));
    d.add_meta("format", cfg.format == OutputFormat::json ? "json" : "csv");
    return d;
}

bool parse_i64(const std::string& s, int64_t& v) {
    if (s.empty())
        return false;
    errno = 0;
    char* end = nullptr;
    const long long r = std::strtoll(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size())
        return false;
    v = r;
    return true;
}

// "a/q" in one token or two integer tokens; never auto-reduced.
ReducedFraction parse_fraction(const std::vector<std::string>& xs) {
    int64_t a = 0, q = 1;
    if (xs.size() == 2) {
        if (!parse_i64(xs[0], a) || !parse_i64(xs[1], q))
            throw domain_error("malformed fraction");
    } else {
        const std::string& s = xs.at(0);
        const size_t slash = s.find('/');
        if (slash != std::string::npos) {
            if (!parse_i64(s.substr(0, slash), a) || !parse_i64(s.substr(slash + 1), q))
                throw domain_error("malformed fraction");
        } else if (!parse_i64(s, a)) {
            throw domain_error("malformed fraction");
        }
    }
    if (q < 1)
        throw domain_error("denominator must be positive");
    return ReducedFraction::require_reduced(bigint(a), bigint(q));
}

struct XSpec {
    bool rational = false;
    ReducedFraction frac;
    double real = 0;
};

XSpec parse_xspec(const std::vector<std::string>& xs) {
    XSpec spec;
    if (xs.size() == 2 || xs.at(0).find('/') != std::string::npos) {
        spec.rational = true;
        spec.frac = parse_fraction(xs);
        return spec;
    }
    int64_t n = 0;
    if (parse_i64(xs[0], n)) {
        spec.rational = true;
        spec.frac = ReducedFraction(bigint(n), bigint(1));
        return spec;
    }
    char* end = nullptr;
    const double v = std::strtod(xs[0].c_str(), &end);
    if (end != xs[0].c_str() + xs[0].size() || !std::isfinite(v))
        throw domain_error("malformed argument: " + xs[0]);
    spec.real = v;
    return spec;
}

std::string frac_str(const ReducedFraction& x) {
    return x.num().get_str() + "/" + x.den().get_str();
}

// ---- commands ---------------------------------------------------------------

int cmd_c0(const RunConfig& cfg, const std::vector<std::string>& xs,
           const std::string& method, bool alternate, const std::string& out) {
    const ReducedFraction x = parse_fraction(xs);
    Doc d = make_doc(cfg, "c0");
    d.add_meta("x", frac_str(x));
    d.columns = {"method", "value", "err_estimate"};

    std::optional<double> direct, tele;
    if (method == "direct" || method == "both") {
        const CotangentValue v = c0_direct(x, cfg.precision);
        direct = v.value;
        d.add_row({"direct", fmt_double(v.value), fmt_double(v.err_estimate)});
    }
    if (method == "cf" || method == "both") {
        const CotangentValue v = c0_cf_telescoped(x, alternate);
        tele = v.value;
        d.add_row({alternate ? "cf_telescoped_alt" : "cf_telescoped", fmt_double(v.value),
                   fmt_double(v.err_estimate)});
    }
    if (direct && tele)
        d.add_row({"difference", fmt_double(std::fabs(*direct - *tele)), "0"});
    emit(d, cfg, out);
    return 0;
}

int cmd_psi(const RunConfig& cfg, const std::vector<std::string>& xs, const std::string& out) {
    const ReducedFraction x = parse_fraction(xs);
    const PsiValue p = psi_via_reciprocity(x);
    const double xd = x.to_double();
    const double leading = -(std::log(2 * std::numbers::pi * xd) - euler_gamma) /
                           (std::numbers::pi * xd);
    Doc d = make_doc(cfg, "psi");
    d.add_meta("x", frac_str(x));
    d.columns = {"x", "psi", "asymptotic_leading", "remainder"};
    d.add_row({fmt_double(xd), fmt_double(p.value), fmt_double(leading),
               fmt_double(p.value - leading)});
    emit(d, cfg, out);
    return 0;
}

int cmd_estermann(const RunConfig& cfg, const std::vector<std::string>& xs, int64_t trunc,
                  int depth, bool bridge, bool fractional, const std::string& out) {
    const XSpec x = parse_xspec(xs);
    Doc d = make_doc(cfg, "estermann");
    d.add_meta("x", x.rational ? frac_str(x.frac) : fmt_double(x.real));
    d.columns = {"method", "value", "err_estimate", "truncation"};

    const bool any_explicit = trunc > 0 || depth > 0 || bridge || fractional;
    if (!x.rational && bridge)
        throw domain_error("closed form requires a rational argument");

    auto add = [&](const EstermannValue& v, const char* name) {
        d.add_row({name, fmt_double(v.value), fmt_double(v.err_estimate),
                   fmt_int(v.truncation)});
    };

    if (!any_explicit) {
        if (x.rational)
            add(d1_rational(x.frac), "rational_bridge");
        else
            add(d1_cf(x.real, 20), "cf_formula");
    } else {
        if (bridge)
            add(d1_rational(x.frac), "rational_bridge");
        if (depth > 0) {
            if (x.rational)
                add(d1_cf(x.frac), "cf_formula");
            else
                add(d1_cf(x.real, depth), "cf_formula");
        }
        if (trunc > 0) {
            const DivisorTable table(trunc, cfg.sieve_cap);
            if (x.rational)
                add(d1_truncated(x.frac, trunc, table), "truncated_series");
            else
                add(d1_truncated(x.real, trunc, table), "truncated_series");
        }
        if (fractional) {
            const double xd = x.rational ? x.frac.to_double() : x.real;
            add(d1_fractional_series(xd, trunc > 0 ? trunc : 100'000),
                "fractional_part_series");
        }
    }
    emit(d, cfg, out);
    return 0;
}

int cmd_moments(const RunConfig& cfg, int64_t q, int k, const std::string& evaluator,
                const std::string& out) {
    const MomentEvaluator ev =
        evaluator == "cf" ? MomentEvaluator::cf_telescoped : MomentEvaluator::direct;
    const MomentReport r = empirical_moment(q, k, ev, cfg.threads);
    Doc d = make_doc(cfg, "moments");
    d.add_meta("evaluator", evaluator);
    d.add_meta("hk_truncation", "20000");
    d.columns = {"q", "k", "phi_q", "empirical", "predicted", "rel_dev"};
    d.add_row({fmt_int(r.q), std::to_string(r.k), fmt_int(r.phi_q), fmt_double(r.empirical),
               fmt_double(r.predicted), fmt_double(r.rel_dev)});
    emit(d, cfg, out);
    return 0;
}

int cmd_hk(const RunConfig& cfg, int k, int64_t trunc, const std::string& method,
           int growth_kmax, const std::string& out) {
    Doc d = make_doc(cfg, "hk");
    if (growth_kmax > 0) {
        const DivisorTable table(trunc, cfg.sieve_cap);
        d.add_meta("truncation", fmt_int(trunc));
        d.columns = {"k", "value", "root_abs", "root_abs_factorial"};
        for (const HkGrowthEntry& e : hk_growth_probe(growth_kmax, trunc, table))
            d.add_row({std::to_string(e.k), fmt_double(e.value), fmt_double(e.root_abs),
                       fmt_double(e.root_abs_factorial)});
        emit(d, cfg, out);
        return 0;
    }

    HkEstimate h;
    if (method == "brute") {
        h = hk_brute(k, trunc);
    } else if (method == "zeta") {
        if (k != 2)
            throw domain_error("closed form only covers k = 2");
        h = h2_zeta_closed_form();
    } else {
        const DivisorTable table(trunc, cfg.sieve_cap);
        h = hk_dft(k, trunc, table);
    }
    d.columns = {"k", "truncation", "method", "value", "tail_estimate", "im_residue"};
    d.add_row({std::to_string(h.k), fmt_int(h.truncation),
               h.method == HkMethod::brute_force        ? "brute_force"
               : h.method == HkMethod::zeta_closed_form ? "zeta_closed_form"
                                                        : "dft_constant_term",
               fmt_double(h.value), fmt_double(h.tail_estimate), fmt_double(h.im_residue)});
    emit(d, cfg, out);
    return 0;
}

std::string companion_path(const std::string& out, const std::string& tag) {
    const size_t dot = out.find_last_of('.');
    if (dot == std::string::npos)
        return out + tag;
    return out.substr(0, dot) + tag + out.substr(dot);
}

int cmd_distribution(const RunConfig& cfg, int64_t samples, int64_t trunc, int bins,
                     std::vector<double> range, const std::string& out) {
    if (range.size() != 2)
        range = {-2.0, 2.0};
    const DivisorTable table(trunc, cfg.sieve_cap);
    const EmpiricalDistribution dist =
        sample_distribution(samples, trunc, cfg.seed, table, cfg.threads);
    const Histogram h = histogram(dist, bins, range[0], range[1]);

    Doc hd = make_doc(cfg, "distribution");
    hd.add_meta("samples", fmt_int(samples));
    hd.add_meta("truncation", fmt_int(trunc));
    hd.add_meta("bins", std::to_string(bins));
    hd.add_meta("range_lo", fmt_double(range[0]));
    hd.add_meta("range_hi", fmt_double(range[1]));
    hd.add_meta("underflow", fmt_int(h.underflow));
    hd.add_meta("overflow", fmt_int(h.overflow));
    hd.columns = {"bin_center", "count", "density"};
    const double width = (h.hi - h.lo) / bins;
    for (size_t b = 0; b < h.counts.size(); ++b)
        hd.add_row({fmt_double(h.centers[b]), fmt_int(h.counts[b]),
                    fmt_double(static_cast<double>(h.counts[b]) /
                               (static_cast<double>(samples) * width))});
    emit(hd, cfg, out, /*echo_stdout=*/out.empty());

    if (!out.empty()) {
        const std::string cdf_path = companion_path(out, "_cdf");
        Doc cd = make_doc(cfg, "distribution");
        cd.add_meta("samples", fmt_int(samples));
        cd.add_meta("truncation", fmt_int(trunc));
        cd.add_meta("content", "empirical_cdf");
        cd.columns = {"x", "cdf"};
        for (size_t i = 0; i < dist.samples.size(); ++i)
            cd.add_row({fmt_double(dist.samples[i]),
                        fmt_double(static_cast<double>(i + 1) /
                                   static_cast<double>(dist.samples.size()))});
        emit(cd, cfg, cdf_path, /*echo_stdout=*/false);

        Doc sum = make_doc(cfg, "distribution");
        sum.columns = {"samples", "truncation", "cdf_at_0", "out", "cdf_out"};
        sum.add_row({fmt_int(samples), fmt_int(trunc), fmt_double(cdf_query(dist, 0.0)),
                     out, cdf_path});
        emit(sum, cfg, "");
    }
    return 0;
}

int cmd_target(const RunConfig& cfg, double z, double eps, int64_t budget,
               const std::string& out) {
    const int64_t table_size = std::min<int64_t>(10'000'000, cfg.sieve_cap);
    const DivisorTable table(table_size, cfg.sieve_cap);
    const DensityWitness w = find_density_witness(z, eps, budget, &table);

    Doc d = make_doc(cfg, "target");
    d.add_meta("z", fmt_double(z));
    d.add_meta("eps", fmt_double(eps));
    d.add_meta("budget", fmt_int(budget));
    d.columns = {"success", "x",       "value", "reverified", "combined_err",
                 "evaluations", "quotients", "note"};
    std::string quots;
    for (size_t i = 0; i < w.quotients.size(); ++i)
        quots += (i ? " " : "") + fmt_int(w.quotients[i]);
    d.add_row({w.success ? "1" : "0", frac_str(w.x), fmt_double(w.value),
               fmt_double(w.reverified), fmt_double(w.combined_err),
               fmt_int(w.evaluations), quots, w.note});
    emit(d, cfg, out);
    return w.success ? 0 : 3;
}

int cmd_verify(const RunConfig& cfg, const std::string& level) {
    const std::vector<VerifyResult> results =
        run_verify(level == "full" ? VerifyLevel::full : VerifyLevel::fast, cfg.seed);
    bool all = true;
    for (const VerifyResult& r : results) {
        all = all && r.passed;
        std::cout << (r.passed ? "[ok]   " : "[FAIL] ") << r.name;
        if (!r.detail.empty())
            std::cout << ": " << r.detail;
        std::cout << "\n";
    }
    std::cout << (all ? "verify passed" : "verify FAILED") << " (" << results.size()
              << " checks, level " << level << ")\n";
    return all ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cotangent sums, their reciprocity function, and the divisor"
                 " sine series: cross-checked evaluators and distribution scans"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string precision = "double", format = "csv";
    app.add_option("--precision", precision, "double | extended")
        ->check(CLI::IsMember({"double", "extended"}));
    app.add_option("--sieve-cap", cfg.sieve_cap, "largest divisor-sieve size allowed");
    app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1, 1024));
    app.add_option("--seed", cfg.seed, "seed for every pseudo-random draw");
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    int exit_code = 0;

    // c0
    std::vector<std::string> c0_x;
    std::string c0_method = "direct", c0_out;
    bool c0_alt = false;
    CLI::App* sc_c0 = app.add_subcommand("c0", "cotangent sum at a reduced fraction");
    sc_c0->add_option("x", c0_x, "fraction: a/q or two integers")
        ->expected(1, 2)
        ->required();
    sc_c0->add_option("--method", c0_method, "direct | cf | both")
        ->check(CLI::IsMember({"direct", "cf", "both"}));
    sc_c0->add_flag("--alternate", c0_alt, "use the alternate expansion in the cf evaluator");
    sc_c0->add_option("--out", c0_out, "also write the table to this file");

    // psi
    std::vector<std::string> psi_x;
    std::string psi_out;
    CLI::App* sc_psi = app.add_subcommand("psi", "reciprocity function at a positive rational");
    sc_psi->add_option("x", psi_x, "fraction: a/q or two integers")
        ->expected(1, 2)
        ->required();
    sc_psi->add_option("--out", psi_out, "also write the table to this file");

    // estermann
    std::vector<std::string> est_x;
    int64_t est_trunc = 0;
    int est_depth = 0;
    bool est_bridge = false, est_frac = false;
    std::string est_out;
    CLI::App* sc_est = app.add_subcommand("estermann", "divisor sine series D(1, x)");
    sc_est->add_option("x", est_x, "fraction a/q, integer, or decimal")
        ->expected(1, 2)
        ->required();
    sc_est->add_option("--trunc", est_trunc, "evaluate the sharp truncation at this cutoff");
    sc_est->add_option("--depth", est_depth, "continued-fraction formula with this many quotients");
    sc_est->add_flag("--bridge", est_bridge, "closed form through the cotangent sum (rationals)");
    sc_est->add_flag("--fractional", est_frac, "diagnostic fractional-part series");
    sc_est->add_option("--out", est_out, "also write the table to this file");

    // moments
    int64_t mom_q = 0;
    int mom_k = 2;
    std::string mom_eval = "direct", mom_out;
    CLI::App* sc_mom = app.add_subcommand("moments", "empirical k-th moment over a fixed modulus");
    sc_mom->add_option("--q", mom_q, "modulus")->required();
    sc_mom->add_option("--k", mom_k, "moment order")->required();
    sc_mom->add_option("--evaluator", mom_eval, "direct | cf")
        ->check(CLI::IsMember({"direct", "cf"}));
    sc_mom->add_option("--out", mom_out, "write the row to this file");

    // hk
    int hk_k = 2, hk_growth = 0;
    int64_t hk_trunc = 20'000;
    std::string hk_method = "dft", hk_out;
    CLI::App* sc_hk = app.add_subcommand("hk", "limiting moment constants");
    sc_hk->add_option("--k", hk_k, "moment order");
    sc_hk->add_option("--trunc", hk_trunc, "series cutoff");
    sc_hk->add_option("--method", hk_method, "dft | brute | zeta")
        ->check(CLI::IsMember({"dft", "brute", "zeta"}));
    sc_hk->add_option("--growth", hk_growth, "report every even order up to this k");
    sc_hk->add_option("--out", hk_out, "write the table to this file");

    // distribution
    int64_t dist_samples = 100'000, dist_trunc = 100'000;
    int dist_bins = 100;
    std::vector<double> dist_range;
    std::string dist_out;
    CLI::App* sc_dist = app.add_subcommand("distribution",
                                           "sample the limiting value distribution");
    sc_dist->add_option("--samples", dist_samples, "number of sample points");
    sc_dist->add_option("--trunc", dist_trunc, "series cutoff per sample");
    sc_dist->add_option("--bins", dist_bins, "histogram bins");
    sc_dist->add_option("--range", dist_range, "histogram range: lo hi")->expected(2);
    sc_dist->add_option("--out", dist_out,
                        "histogram file; the empirical cdf lands next to it");

    // target
    double tgt_z = 0, tgt_eps = 0.05;
    int64_t tgt_budget = kDefaultWitnessBudget;
    std::string tgt_out;
    CLI::App* sc_tgt = app.add_subcommand("target",
                                          "construct x whose value lands in (z, z+eps]");
    sc_tgt->add_option("--z", tgt_z, "window left edge")->required();
    sc_tgt->add_option("--eps", tgt_eps, "window width");
    sc_tgt->add_option("--budget", tgt_budget, "evaluation budget");
    sc_tgt->add_option("--out", tgt_out, "write the witness row to this file");

    // verify
    std::string ver_level = "fast";
    CLI::App* sc_ver = app.add_subcommand("verify", "re-run the cross-evaluator checks");
    sc_ver->add_option("--level", ver_level, "fast | full")
        ->check(CLI::IsMember({"fast", "full"}));

    // option values are bound before callbacks fire, so resolve enums here
    const auto final_cfg = [&]() {
        RunConfig c = cfg;
        c.precision = precision == "extended" ? Precision::extended : Precision::dbl;
        c.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
        return c;
    };

    sc_c0->callback([&] { exit_code = cmd_c0(final_cfg(), c0_x, c0_method, c0_alt, c0_out); });
    sc_psi->callback([&] { exit_code = cmd_psi(final_cfg(), psi_x, psi_out); });
    sc_est->callback([&] {
        exit_code = cmd_estermann(final_cfg(), est_x, est_trunc, est_depth, est_bridge,
                                  est_frac, est_out);
    });
    sc_mom->callback(
        [&] { exit_code = cmd_moments(final_cfg(), mom_q, mom_k, mom_eval, mom_out); });
    sc_hk->callback(
        [&] { exit_code = cmd_hk(final_cfg(), hk_k, hk_trunc, hk_method, hk_growth, hk_out); });
    sc_dist->callback([&] {
        exit_code = cmd_distribution(final_cfg(), dist_samples, dist_trunc, dist_bins,
                                     dist_range, dist_out);
    });
    sc_tgt->callback(
        [&] { exit_code = cmd_target(final_cfg(), tgt_z, tgt_eps, tgt_budget, tgt_out); });
    sc_ver->callback([&] { exit_code = cmd_verify(final_cfg(), ver_level); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
