// kelleyscope: exact intersection numbers, strictly positive measures and
// minimal epsilon-covers for families in finite set algebras.
//
// Subcommands: inum, mn, cover, kelley-verify, gen, sweep. Reports are JSON
// on stdout; all values cross the boundary as exact rationals "p/q". See
// README.md for the file formats and the determinism contract.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kelleyscope/generators.hpp"
#include "kelleyscope/io.hpp"
#include "kelleyscope/kelley.hpp"

namespace ks = kelleyscope;

namespace {

constexpr std::uint64_t kDefaultComputeBudget = 1ull << 20;

struct GlobalOpts {
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::uint64_t budget = kDefaultComputeBudget;
    std::string out;
    std::string format = "json";
    bool no_timings = false;
};

class PhaseTimer {
public:
    explicit PhaseTimer(bool enabled) : enabled_(enabled), last_(clock::now()), start_(last_) {}

    void mark(const char* phase) {
        auto now = clock::now();
        if (enabled_) {
            timings_[phase] = ms(last_, now);
            last_ = now;
        }
    }
    ks::Json finish() {
        if (enabled_) timings_["total"] = ms(start_, clock::now());
        return timings_;
    }

private:
    using clock = std::chrono::steady_clock;
    static std::int64_t ms(clock::time_point a, clock::time_point b) {
        return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
    }
    bool enabled_;
    clock::time_point last_, start_;
    ks::Json timings_ = ks::Json::object();
};

void emit_report(const GlobalOpts& g, const ks::Json& report) {
    std::string text = ks::dump_json(report);
    std::cout << text;
    if (!g.out.empty()) ks::write_file(g.out, text);
}

ks::Family load_family(const std::string& path) {
    return ks::family_from_json(ks::parse_json_text(ks::read_file(path), "family file " + path));
}

std::vector<ks::Rational> parse_grid(const std::string& text) {
    std::vector<ks::Rational> grid;
    std::string::size_type pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        auto q = ks::try_parse_rational(tok);
        if (!q) throw ks::structural_error("--grid: expected comma-separated rationals, got '" + tok + "'");
        grid.push_back(*q);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return grid;
}

// Inline instance-spec flags shared by gen and sweep.
struct SpecFlags {
    std::string spec_file;
    std::string kind;
    std::size_t n = 0, m = 0, k = 0, N = 0, c = 0, r = 0;
    std::string p, delta, d, theta;
    std::string ideal;
    std::string trunc_mode = "structured";
    std::size_t family_budget = ks::kDefaultFamilyBudget;

    void attach(CLI::App* cmd, bool require_size) {
        cmd->add_option("--spec", spec_file, "instance spec file (JSON)");
        cmd->add_option("--kind", kind,
                        "atoms|ksubsets|intervals|random|measure_threshold|ideal_truncation");
        cmd->add_option("--n", n, require_size ? "ground size" : "ground size (set per N in sweeps)");
        cmd->add_option("--m", m, "number of sampled elements");
        cmd->add_option("--k", k, "subset size (ksubsets)");
        cmd->add_option("--p", p, "inclusion probability p/q (random)");
        cmd->add_option("--delta", delta, "measure threshold p/q (measure_threshold)");
        cmd->add_option("--ideal", ideal, "density|summable|grid (ideal_truncation)");
        cmd->add_option("--d", d, "density p/q");
        cmd->add_option("--theta", theta, "summable threshold p/q");
        cmd->add_option("--c", c, "grid: required column count");
        cmd->add_option("--r", r, "grid: required cells per column");
        cmd->add_option("--N", N, "truncation length (ideal_truncation)");
        cmd->add_option("--trunc-mode", trunc_mode, "structured|sampled (ideal_truncation)");
        cmd->add_option("--family-budget", family_budget,
                        "family-size budget for structured enumeration (default 40)");
    }

    ks::InstanceSpec build(const GlobalOpts& g) const {
        if (!spec_file.empty())
            return ks::spec_from_json(
                ks::parse_json_text(ks::read_file(spec_file), "instance spec " + spec_file));
        ks::InstanceSpec spec;
        spec.seed = g.seed;
        spec.n = n;
        spec.m = m;
        spec.k = k;
        spec.budget = family_budget;
        if (!p.empty()) spec.p = ks::parse_rational(p);
        if (!delta.empty()) spec.delta = ks::parse_rational(delta);
        if (kind == "atoms") spec.kind = ks::InstanceKind::atoms;
        else if (kind == "ksubsets") spec.kind = ks::InstanceKind::ksubsets;
        else if (kind == "intervals") spec.kind = ks::InstanceKind::intervals;
        else if (kind == "random") spec.kind = ks::InstanceKind::random;
        else if (kind == "measure_threshold") spec.kind = ks::InstanceKind::measure_threshold;
        else if (kind == "ideal_truncation") spec.kind = ks::InstanceKind::ideal_truncation;
        else throw ks::structural_error("--kind: unknown instance kind '" + kind + "'");
        if (spec.kind == ks::InstanceKind::ideal_truncation) {
            if (ideal == "density") {
                spec.ideal.name = ks::IdealName::density;
                if (d.empty()) throw ks::structural_error("--d is required for the density ideal");
                spec.ideal.density = ks::parse_rational(d);
            } else if (ideal == "summable") {
                spec.ideal.name = ks::IdealName::summable;
                if (theta.empty())
                    throw ks::structural_error("--theta is required for the summable ideal");
                spec.ideal.theta = ks::parse_rational(theta);
            } else if (ideal == "grid") {
                spec.ideal.name = ks::IdealName::grid;
                spec.ideal.grid_cols = c;
                spec.ideal.grid_rows = r;
            } else {
                throw ks::structural_error("--ideal: want density, summable or grid, got '" +
                                           ideal + "'");
            }
            spec.ideal.N = N;
            if (trunc_mode == "structured") spec.mode = ks::TruncationMode::structured;
            else if (trunc_mode == "sampled") spec.mode = ks::TruncationMode::sampled;
            else throw ks::structural_error("--trunc-mode: want structured or sampled");
        }
        return spec;
    }
};

int cmd_inum(const GlobalOpts& g, const std::string& instance_path,
             std::optional<std::uint64_t> brute_bound, bool oracle_check) {
    PhaseTimer timer(!g.no_timings);
    ks::Family fam = load_family(instance_path);
    timer.mark("parse");
    ks::IntersectionCertificate cert = ks::intersection_number_exact(fam);
    ks::Json result = ks::certificate_to_json(cert);
    if (brute_bound || oracle_check) {
        ks::Integer L = brute_bound ? ks::Integer(*brute_bound) : cert.witness_sequence.length();
        ks::BruteForceResult brute =
            ks::intersection_number_bruteforce(fam, L, ks::Integer(g.budget));
        ks::Json jb;
        jb["L"] = L.str();
        jb["value"] = ks::to_string(brute.value);
        jb["witness_sequence"] = ks::sequence_to_json(brute.witness);
        jb["enumerated"] = brute.enumerated.str();
        result["brute"] = std::move(jb);
        if (oracle_check) {
            bool dominates = brute.value >= cert.value;
            bool reached = L >= cert.witness_sequence.length();
            bool equal = brute.value == cert.value;
            ks::Json jo;
            jo["dominates"] = dominates;
            jo["equal"] = equal;
            jo["bound_reaches_witness"] = reached;
            jo["consistent"] = dominates && (!reached || equal);
            result["oracle_check"] = std::move(jo);
        }
    }
    timer.mark("compute");
    emit_report(g, ks::make_report("inum", ks::family_to_json(fam), std::move(result),
                                   timer.finish(), ks::Json::array()));
    return 0;
}

int cmd_mn(const GlobalOpts& g, const std::string& instance_path, const std::string& epsilon,
           const std::string& mode) {
    PhaseTimer timer(!g.no_timings);
    ks::Family fam = load_family(instance_path);
    ks::Rational eps = ks::parse_rational(epsilon);
    if (eps <= 0 || eps >= 1)
        throw ks::value_error("--epsilon must lie in the open interval (0,1), got " +
                              ks::to_string(eps));
    if (mode != "exact" && mode != "greedy")
        throw ks::structural_error("--mode: want exact or greedy, got '" + mode + "'");
    timer.mark("parse");
    ks::MNOptions opts;
    opts.budget = g.budget;
    ks::MNReport rep = ks::mn_min_cover(fam, eps, mode == "exact" ? ks::MNMode::exact : ks::MNMode::greedy, opts);
    timer.mark("compute");
    emit_report(g, ks::make_report("mn", ks::family_to_json(fam), ks::mn_report_to_json(rep),
                                   timer.finish(), ks::Json::array()));
    return 0;
}

int cmd_cover(const GlobalOpts& g, const std::string& instance_path,
              const std::string& measure_path, const std::string& grid_text) {
    PhaseTimer timer(!g.no_timings);
    ks::Family fam = load_family(instance_path);
    ks::Measure mu =
        ks::measure_from_json(ks::parse_json_text(ks::read_file(measure_path), "measure file"));
    std::vector<ks::Rational> grid = parse_grid(grid_text);
    timer.mark("parse");
    ks::CoverCertificate cover = ks::cover_from_measure(mu, fam, grid);
    timer.mark("compute");
    ks::Json jcover = ks::cover_to_json(cover);
    if (!g.out.empty()) ks::write_file(g.out, ks::dump_json(jcover));
    ks::Json report = ks::make_report("cover", ks::family_to_json(fam), std::move(jcover),
                                      timer.finish(), ks::Json::array());
    std::cout << ks::dump_json(report);
    return 0;
}

int cmd_kelley_verify(const GlobalOpts& g, const std::string& instance_path,
                      const std::string& cover_path) {
    PhaseTimer timer(!g.no_timings);
    ks::Family fam = load_family(instance_path);
    ks::CoverCertificate cover =
        ks::cover_from_json(ks::parse_json_text(ks::read_file(cover_path), "cover file"), fam);
    timer.mark("parse");

    // Per-class verdicts first, so a failing cover still yields a report.
    ks::Json classes = ks::Json::array();
    bool all_ok = true;
    std::string first_failure;
    for (std::size_t j = 0; j < cover.classes.size(); ++j) {
        ks::Json verdict;
        verdict["index"] = j;
        std::string message;
        bool ok = true;
        if (cover.thresholds[j] <= 0) {
            ok = false;
            message = "threshold is not positive";
        } else {
            for (std::size_t idx : cover.classes[j]) {
                if (cover.witnesses[j](cover.family[idx]) < cover.thresholds[j]) {
                    ok = false;
                    message = "witness drops below threshold on element " + std::to_string(idx);
                    break;
                }
            }
        }
        verdict["ok"] = ok;
        if (!ok) verdict["message"] = message;
        classes.push_back(std::move(verdict));
        if (!ok && all_ok) {
            all_ok = false;
            first_failure = "class " + std::to_string(j) + ": " + message;
        }
    }

    ks::Json result;
    result["classes"] = std::move(classes);
    if (all_ok) {
        ks::SynthesizedMeasure syn = ks::synthesize_measure_from_cover(cover);
        result["measure"] = ks::measure_to_json(syn.measure)["weights"];
        result["normalization"] = ks::to_string(syn.normalization);
        ks::Json bounds = ks::Json::array();
        for (const auto& b : syn.class_bounds) bounds.push_back(ks::to_string(b));
        result["class_bounds"] = std::move(bounds);
        result["strictly_positive_family"] = ks::is_strictly_positive(syn.measure, fam);
        result["strictly_positive_full_algebra"] = ks::is_strictly_positive_on_algebra(syn.measure);
    } else {
        result["measure"] = nullptr;
    }
    timer.mark("compute");
    emit_report(g, ks::make_report("kelley-verify", ks::family_to_json(fam), std::move(result),
                                   timer.finish(), ks::Json::array()));
    if (!all_ok) {
        std::cerr << "kelleyscope: cover verification failed: " << first_failure << "\n";
        return 4;
    }
    return 0;
}

int cmd_gen(const GlobalOpts& g, const SpecFlags& flags) {
    PhaseTimer timer(!g.no_timings);
    ks::InstanceSpec spec = flags.build(g);
    timer.mark("parse");
    ks::Family fam = ks::generate(spec);
    timer.mark("compute");
    std::string family_text = ks::dump_json(ks::family_to_json(fam));
    if (g.out.empty()) {
        std::cout << family_text;
        return 0;
    }
    ks::write_file(g.out, family_text);
    ks::Json result;
    result["family"] = ks::family_to_json(fam);
    std::cout << ks::dump_json(ks::make_report("gen", ks::spec_to_json(spec), std::move(result),
                                               timer.finish(), ks::Json::array()));
    return 0;
}

int cmd_sweep(const GlobalOpts& g, const SpecFlags& flags, std::size_t from, std::size_t to,
              const std::string& analysis, const std::string& epsilon, const std::string& mode) {
    PhaseTimer timer(!g.no_timings);
    ks::SweepRequest req;
    req.base = flags.build(g);
    req.from = from;
    req.to = to;
    req.jobs = g.jobs;
    req.record_timings = !g.no_timings;
    req.mn_options.budget = g.budget;
    if (analysis == "inum") {
        req.analysis = ks::SweepAnalysis::inum;
    } else if (analysis == "mn") {
        req.analysis = ks::SweepAnalysis::mn;
        if (epsilon.empty()) throw ks::structural_error("sweep --analysis mn requires --epsilon");
        req.epsilon = ks::parse_rational(epsilon);
        if (req.epsilon <= 0 || req.epsilon >= 1)
            throw ks::value_error("--epsilon must lie in the open interval (0,1), got " +
                                  ks::to_string(req.epsilon));
        if (mode == "exact") req.mn_mode = ks::MNMode::exact;
        else if (mode == "greedy") req.mn_mode = ks::MNMode::greedy;
        else throw ks::structural_error("--mode: want exact or greedy, got '" + mode + "'");
    } else {
        throw ks::structural_error("--analysis: want inum or mn, got '" + analysis + "'");
    }
    timer.mark("parse");
    std::vector<ks::SweepEntry> entries = ks::sweep(req);
    timer.mark("compute");

    bool all_failed = true;
    ks::Json budget_events = ks::Json::array();
    for (const auto& e : entries) {
        if (e.ok) all_failed = false;
        else {
            ks::Json ev;
            ev["N"] = e.N;
            ev["kind"] = e.error;
            ev["message"] = e.message;
            budget_events.push_back(std::move(ev));
        }
    }

    ks::Json instance = ks::spec_to_json(req.base);
    ks::Json jsweep;
    jsweep["from"] = from;
    jsweep["to"] = to;
    jsweep["analysis"] = analysis;
    if (analysis == "mn") {
        jsweep["epsilon"] = ks::to_string(req.epsilon);
        jsweep["mode"] = mode;
    }
    instance["sweep"] = std::move(jsweep);
    ks::Json result;
    result["series"] = ks::sweep_to_json(entries);
    ks::Json report = ks::make_report("sweep", std::move(instance), std::move(result),
                                      timer.finish(), std::move(budget_events));
    std::string csv = ks::sweep_to_csv(entries);
    std::string report_text = ks::dump_json(report);
    if (!g.out.empty()) {
        ks::write_file(g.out + ".json", report_text);
        ks::write_file(g.out + ".csv", csv);
    }
    if (g.format == "csv") std::cout << csv;
    else std::cout << report_text;
    return all_failed ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact intersection numbers and Kelley-style covers over finite set algebras"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    if (const char* env = std::getenv("KELLEYSCOPE_BUDGET")) {
        try {
            g.budget = std::stoull(env);
        } catch (...) {
            std::cerr << "kelleyscope: KELLEYSCOPE_BUDGET is not an unsigned integer: " << env
                      << "\n";
            return 2;
        }
    }
    app.add_option("--seed", g.seed, "seed for generators (default 0)");
    app.add_option("--jobs", g.jobs, "worker threads for sweeps (default 1)");
    app.add_option("--budget", g.budget,
                   "computational budget: brute-force multisets / exact-search operations "
                   "(default 1048576; env KELLEYSCOPE_BUDGET overrides the default)");
    app.add_option("--out", g.out, "output path (command-specific; see README)");
    app.add_option("--format", g.format, "stdout format: json|csv (csv applies to sweep)")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--no-timings", g.no_timings,
                 "suppress wall-clock timings for byte-identical reports");

    std::string instance_path, epsilon, mode = "exact", measure_path, grid_text, cover_path;
    std::uint64_t brute_bound = 0;
    bool oracle_check = false;
    std::size_t from = 0, to = 0;
    std::string analysis = "inum";
    SpecFlags gen_flags, sweep_flags;

    CLI::App* inum = app.add_subcommand("inum", "exact intersection number with certificates");
    inum->add_option("instance", instance_path, "family file")->required();
    CLI::Option* brute_opt = inum->add_option("--brute", brute_bound,
                                              "also run the bounded brute-force enumeration up to total size L");
    inum->add_flag("--oracle-check", oracle_check,
                   "cross-check the exact value against the brute-force oracle");

    CLI::App* mn = app.add_subcommand("mn", "minimal cover by classes with intersection number > 1-epsilon");
    mn->add_option("instance", instance_path, "family file")->required();
    mn->add_option("--epsilon", epsilon, "epsilon in (0,1) as p/q")->required();
    mn->add_option("--mode", mode, "exact|greedy (default exact)");

    CLI::App* cover = app.add_subcommand("cover", "threshold cover of a family from a measure");
    cover->add_option("instance", instance_path, "family file")->required();
    cover->add_option("--measure", measure_path, "measure file")->required();
    cover->add_option("--grid", grid_text, "strictly descending thresholds, e.g. \"2/3,1/3\"")
        ->required();

    CLI::App* verify = app.add_subcommand("kelley-verify",
                                          "verify a cover and synthesize its measure");
    verify->add_option("instance", instance_path, "family file")->required();
    verify->add_option("--cover", cover_path, "cover file")->required();

    CLI::App* gen = app.add_subcommand("gen", "materialize an instance spec into a family file");
    gen_flags.attach(gen, true);

    CLI::App* sweepc = app.add_subcommand("sweep", "run an analysis along a truncation range");
    sweep_flags.attach(sweepc, false);
    sweepc->add_option("--from", from, "first N")->required();
    sweepc->add_option("--to", to, "last N")->required();
    sweepc->add_option("--analysis", analysis, "inum|mn (default inum)");
    sweepc->add_option("--epsilon", epsilon, "epsilon in (0,1) as p/q (mn analysis)");
    sweepc->add_option("--mode", mode, "exact|greedy for mn analysis (default exact)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*inum)
            return cmd_inum(g, instance_path,
                            brute_opt->count() ? std::optional<std::uint64_t>(brute_bound)
                                               : std::nullopt,
                            oracle_check);
        if (*mn) return cmd_mn(g, instance_path, epsilon, mode);
        if (*cover) return cmd_cover(g, instance_path, measure_path, grid_text);
        if (*verify) return cmd_kelley_verify(g, instance_path, cover_path);
        if (*gen) return cmd_gen(g, gen_flags);
        if (*sweepc) return cmd_sweep(g, sweep_flags, from, to, analysis, epsilon, mode);
    } catch (const ks::budget_error& e) {
        std::cerr << "kelleyscope: budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const ks::certificate_error& e) {
        std::cerr << "kelleyscope: certificate error: " << e.what() << "\n";
        return 4;
    } catch (const ks::error& e) {
        std::cerr << "kelleyscope: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "kelleyscope: internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
