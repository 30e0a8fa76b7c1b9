#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kelleyscope/algebra.hpp"
#include "kelleyscope/errors.hpp"
#include "kelleyscope/generators.hpp"
#include "kelleyscope/intersection.hpp"
#include "kelleyscope/kelley.hpp"
#include "kelleyscope/measure.hpp"
#include "kelleyscope/rational.hpp"

namespace kelleyscope {

// Canonical file formats and the report schema. Everything is
// nlohmann::ordered_json with two-space indentation, keys in fixed
// insertion order and rationals as "p/q" strings, so serialize(parse(x))
// is byte-identical and reports are byte-stable across runs and --jobs
// settings (timings, the one nondeterministic field, can be suppressed).

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse_json_text(const std::string& text, const std::string& what) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw structural_error(what + ": not valid JSON");
    return j;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw structural_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw structural_error("cannot write file: " + path);
    out << content;
}

namespace detail {

inline const Json& field(const Json& j, const char* name, const std::string& what) {
    if (!j.is_object()) throw structural_error(what + ": expected an object");
    auto it = j.find(name);
    if (it == j.end()) throw structural_error(what + ": missing field '" + name + "'");
    return *it;
}

inline std::uint64_t uint_field(const Json& j, const char* name, const std::string& what) {
    const Json& v = field(j, name, what);
    if (!v.is_number_unsigned())
        throw structural_error(what + ": field '" + name + "' must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

inline Rational rational_field(const Json& j, const char* name, const std::string& what) {
    const Json& v = field(j, name, what);
    if (!v.is_string())
        throw structural_error(what + ": field '" + name + "' must be a rational string \"p/q\"");
    auto q = try_parse_rational(v.get<std::string>());
    if (!q)
        throw structural_error(what + ": field '" + name + "' is not a rational \"p/q\": " +
                               v.get<std::string>());
    return *q;
}

} // namespace detail

// ---- family files: { "ground": n, "labels": [...]?, "elements": [[...]] }

inline Json family_to_json(const Family& f) {
    Json j;
    j["ground"] = f.ground.size;
    if (f.ground.labels) j["labels"] = *f.ground.labels;
    Json elems = Json::array();
    for (const auto& e : f.elements) elems.push_back(e.atoms.atoms());
    j["elements"] = std::move(elems);
    return j;
}

inline Family family_from_json(const Json& j) {
    const std::string what = "family file";
    std::uint64_t ground = detail::uint_field(j, "ground", what);
    if (ground < 1) throw structural_error(what + ": field 'ground' must be >= 1");
    std::optional<std::vector<std::string>> labels;
    if (j.contains("labels")) {
        const Json& ls = j["labels"];
        if (!ls.is_array()) throw structural_error(what + ": field 'labels' must be an array");
        labels.emplace();
        for (const auto& l : ls) {
            if (!l.is_string()) throw structural_error(what + ": field 'labels' must hold strings");
            labels->push_back(l.get<std::string>());
        }
    }
    const Json& elems = detail::field(j, "elements", what);
    if (!elems.is_array()) throw structural_error(what + ": field 'elements' must be an array");
    std::vector<Element> elements;
    for (const auto& je : elems) {
        if (!je.is_array())
            throw structural_error(what + ": field 'elements' must hold arrays of atom indices");
        AtomSet a(ground);
        for (const auto& idx : je) {
            if (!idx.is_number_unsigned() || idx.get<std::uint64_t>() >= ground)
                throw structural_error(what + ": element atom index out of range [0," +
                                       std::to_string(ground) + ")");
            a.add(idx.get<std::size_t>());
        }
        if (a.empty())
            throw structural_error(what + ": field 'elements' contains an empty element (violates B+)");
        elements.emplace_back(std::move(a));
    }
    try {
        return Family(GroundSet(ground, std::move(labels)), std::move(elements));
    } catch (const error& e) {
        throw structural_error(what + ": " + e.what());
    }
}

// ---- measure files: { "ground": n, "weights": ["p/q", ...] }

inline Json measure_to_json(const Measure& mu) {
    Json j;
    j["ground"] = mu.universe();
    Json w = Json::array();
    for (const auto& x : mu.weights) w.push_back(to_string(x));
    j["weights"] = std::move(w);
    return j;
}

inline Measure measure_from_json(const Json& j) {
    const std::string what = "measure file";
    std::uint64_t ground = detail::uint_field(j, "ground", what);
    const Json& ws = detail::field(j, "weights", what);
    if (!ws.is_array() || ws.size() != ground)
        throw structural_error(what + ": field 'weights' must be an array of length 'ground'");
    std::vector<Rational> weights;
    for (const auto& w : ws) {
        if (!w.is_string())
            throw structural_error(what + ": field 'weights' must hold rational strings");
        auto q = try_parse_rational(w.get<std::string>());
        if (!q) throw structural_error(what + ": weight is not a rational \"p/q\"");
        weights.push_back(*q);
    }
    try {
        return Measure(std::move(weights));
    } catch (const error& e) {
        throw structural_error(what + ": " + e.what());
    }
}

// ---- cover files: { "ground", "classes", "thresholds", "witnesses", "covers_all" }

inline Json cover_to_json(const CoverCertificate& cover) {
    Json j;
    j["ground"] = cover.family.ground.size;
    j["classes"] = cover.classes;
    Json th = Json::array();
    for (const auto& t : cover.thresholds) th.push_back(to_string(t));
    j["thresholds"] = std::move(th);
    Json ws = Json::array();
    for (const auto& w : cover.witnesses) {
        Json one = Json::array();
        for (const auto& x : w.weights) one.push_back(to_string(x));
        ws.push_back(std::move(one));
    }
    j["witnesses"] = std::move(ws);
    j["covers_all"] = cover.covers_all;
    return j;
}

// Structural shape checks only; class indices and witness quality are the
// verifier's business (out-of-range indices are structural, witness
// failures are certificate errors).
inline CoverCertificate cover_from_json(const Json& j, const Family& family) {
    const std::string what = "cover file";
    std::uint64_t ground = detail::uint_field(j, "ground", what);
    if (ground != family.ground.size)
        throw structural_error(what + ": field 'ground' does not match the instance ground " +
                               std::to_string(family.ground.size));
    const Json& classes = detail::field(j, "classes", what);
    const Json& thresholds = detail::field(j, "thresholds", what);
    const Json& witnesses = detail::field(j, "witnesses", what);
    if (!classes.is_array() || !thresholds.is_array() || !witnesses.is_array() ||
        classes.size() != thresholds.size() || classes.size() != witnesses.size())
        throw structural_error(what + ": 'classes', 'thresholds' and 'witnesses' must be arrays of one size");
    const Json& covers_all = detail::field(j, "covers_all", what);
    if (!covers_all.is_boolean()) throw structural_error(what + ": 'covers_all' must be a boolean");

    CoverCertificate cover{family, {}, {}, {}, covers_all.get<bool>()};
    for (const auto& jc : classes) {
        if (!jc.is_array()) throw structural_error(what + ": each class must be an index array");
        std::vector<std::size_t> cls;
        for (const auto& idx : jc) {
            if (!idx.is_number_unsigned())
                throw structural_error(what + ": class indices must be nonnegative integers");
            if (idx.get<std::uint64_t>() >= family.size())
                throw structural_error(what + ": class references element index " +
                                       std::to_string(idx.get<std::uint64_t>()) +
                                       " outside the instance (size " +
                                       std::to_string(family.size()) + ")");
            cls.push_back(idx.get<std::size_t>());
        }
        cover.classes.push_back(std::move(cls));
    }
    for (const auto& jt : thresholds) {
        if (!jt.is_string()) throw structural_error(what + ": thresholds must be rational strings");
        auto q = try_parse_rational(jt.get<std::string>());
        if (!q) throw structural_error(what + ": threshold is not a rational \"p/q\"");
        cover.thresholds.push_back(*q);
    }
    for (const auto& jw : witnesses) {
        if (!jw.is_array() || jw.size() != ground)
            throw structural_error(what + ": each witness must be a weight array of length 'ground'");
        std::vector<Rational> weights;
        for (const auto& w : jw) {
            if (!w.is_string())
                throw structural_error(what + ": witness weights must be rational strings");
            auto q = try_parse_rational(w.get<std::string>());
            if (!q) throw structural_error(what + ": witness weight is not a rational \"p/q\"");
            weights.push_back(*q);
        }
        try {
            cover.witnesses.emplace_back(std::move(weights));
        } catch (const error& e) {
            throw structural_error(what + ": witness is not a probability measure: " + e.what());
        }
    }
    return cover;
}

// ---- instance spec files: { "kind", "params", "seed" }

inline Json spec_to_json(const InstanceSpec& spec) {
    Json params;
    switch (spec.kind) {
        case InstanceKind::atoms: params["n"] = spec.n; break;
        case InstanceKind::ksubsets: params["n"] = spec.n; params["k"] = spec.k; break;
        case InstanceKind::intervals: params["n"] = spec.n; break;
        case InstanceKind::random:
            params["n"] = spec.n;
            params["m"] = spec.m;
            params["p"] = to_string(spec.p);
            break;
        case InstanceKind::measure_threshold:
            params["n"] = spec.n;
            params["delta"] = to_string(spec.delta);
            params["m"] = spec.m;
            break;
        case InstanceKind::ideal_truncation:
            switch (spec.ideal.name) {
                case IdealName::density:
                    params["ideal"] = "density";
                    params["d"] = to_string(spec.ideal.density);
                    break;
                case IdealName::summable:
                    params["ideal"] = "summable";
                    params["theta"] = to_string(spec.ideal.theta);
                    break;
                case IdealName::grid:
                    params["ideal"] = "grid";
                    params["c"] = spec.ideal.grid_cols;
                    params["r"] = spec.ideal.grid_rows;
                    break;
            }
            params["N"] = spec.ideal.N;
            params["mode"] = spec.mode == TruncationMode::structured ? "structured" : "sampled";
            params["budget"] = spec.budget;
            break;
    }
    Json j;
    j["kind"] = [&] {
        switch (spec.kind) {
            case InstanceKind::atoms: return "atoms";
            case InstanceKind::ksubsets: return "ksubsets";
            case InstanceKind::intervals: return "intervals";
            case InstanceKind::random: return "random";
            case InstanceKind::measure_threshold: return "measure_threshold";
            case InstanceKind::ideal_truncation: return "ideal_truncation";
        }
        return "atoms";
    }();
    j["params"] = std::move(params);
    j["seed"] = spec.seed;
    return j;
}

inline InstanceSpec spec_from_json(const Json& j) {
    const std::string what = "instance spec";
    const Json& jk = detail::field(j, "kind", what);
    if (!jk.is_string()) throw structural_error(what + ": field 'kind' must be a string");
    const std::string kind = jk.get<std::string>();
    const Json& params = detail::field(j, "params", what);
    InstanceSpec spec;
    spec.seed = j.contains("seed") ? detail::uint_field(j, "seed", what) : 0;
    auto opt_uint = [&](const char* name, std::size_t dflt) -> std::size_t {
        if (!params.contains(name)) return dflt;
        return static_cast<std::size_t>(detail::uint_field(params, name, what + " params"));
    };
    if (kind == "atoms") {
        spec.kind = InstanceKind::atoms;
        spec.n = opt_uint("n", 0);
    } else if (kind == "ksubsets") {
        spec.kind = InstanceKind::ksubsets;
        spec.n = opt_uint("n", 0);
        spec.k = static_cast<std::size_t>(detail::uint_field(params, "k", what + " params"));
    } else if (kind == "intervals") {
        spec.kind = InstanceKind::intervals;
        spec.n = opt_uint("n", 0);
    } else if (kind == "random") {
        spec.kind = InstanceKind::random;
        spec.n = opt_uint("n", 0);
        spec.m = static_cast<std::size_t>(detail::uint_field(params, "m", what + " params"));
        spec.p = detail::rational_field(params, "p", what + " params");
    } else if (kind == "measure_threshold") {
        spec.kind = InstanceKind::measure_threshold;
        spec.n = opt_uint("n", 0);
        spec.m = static_cast<std::size_t>(detail::uint_field(params, "m", what + " params"));
        spec.delta = detail::rational_field(params, "delta", what + " params");
    } else if (kind == "ideal_truncation") {
        spec.kind = InstanceKind::ideal_truncation;
        const Json& ji = detail::field(params, "ideal", what + " params");
        if (!ji.is_string())
            throw structural_error(what + ": params field 'ideal' must be a string");
        const std::string ideal = ji.get<std::string>();
        if (ideal == "density") {
            spec.ideal.name = IdealName::density;
            spec.ideal.density = detail::rational_field(params, "d", what + " params");
        } else if (ideal == "summable") {
            spec.ideal.name = IdealName::summable;
            spec.ideal.theta = detail::rational_field(params, "theta", what + " params");
        } else if (ideal == "grid") {
            spec.ideal.name = IdealName::grid;
            spec.ideal.grid_cols = opt_uint("c", 0);
            spec.ideal.grid_rows = opt_uint("r", 0);
        } else {
            throw structural_error(what + ": unknown ideal '" + ideal +
                                   "' (want density, summable or grid)");
        }
        spec.ideal.N = opt_uint("N", 1);
        spec.budget = opt_uint("budget", kDefaultFamilyBudget);
        if (params.contains("mode")) {
            const Json& jm = params["mode"];
            if (!jm.is_string() || (jm != "structured" && jm != "sampled"))
                throw structural_error(what + ": params field 'mode' must be structured|sampled");
            spec.mode = jm == "structured" ? TruncationMode::structured : TruncationMode::sampled;
        }
    } else {
        throw structural_error(what + ": unknown kind '" + kind + "'");
    }
    return spec;
}

// ---- result payloads

inline Json sequence_to_json(const WeightedSequence& s) {
    Json mults = Json::array();
    for (const auto& [idx, m] : s.multiplicities) mults.push_back(Json::array({idx, m.str()}));
    Json j;
    j["multiplicities"] = std::move(mults);
    j["length"] = s.length().str();
    return j;
}

inline Json certificate_to_json(const IntersectionCertificate& cert) {
    Json j;
    j["value"] = to_string(cert.value);
    Json mw = Json::array();
    for (const auto& w : cert.witness_measure.weights) mw.push_back(to_string(w));
    j["witness_measure"] = std::move(mw);
    j["witness_sequence"] = sequence_to_json(cert.witness_sequence);
    j["lp_verified"] = cert.lp_verified;
    return j;
}

inline Json mn_report_to_json(const MNReport& rep) {
    Json j;
    j["epsilon"] = to_string(rep.epsilon);
    j["k"] = rep.k;
    j["mode"] = rep.mode == MNMode::exact ? "exact" : "greedy";
    j["optimal"] = rep.optimal;
    Json cover = cover_to_json(rep.certificate);
    j["classes"] = cover["classes"];
    j["thresholds"] = cover["thresholds"];
    j["witnesses"] = cover["witnesses"];
    j["covers_all"] = cover["covers_all"];
    return j;
}

// ---- reports

inline Json make_report(const std::string& command, Json instance, Json result, Json timings,
                        Json budget_events) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["instance"] = std::move(instance);
    j["result"] = std::move(result);
    j["timings"] = std::move(timings);
    j["budget_events"] = std::move(budget_events);
    return j;
}

inline Json parse_report(const std::string& text) {
    Json j = parse_json_text(text, "report");
    const Json& version = detail::field(j, "schema_version", "report");
    if (!version.is_string() || version.get<std::string>() != kSchemaVersion)
        throw structural_error("report: unknown schema_version (want \"" +
                               std::string(kSchemaVersion) + "\")");
    for (const char* f : {"command", "instance", "result", "timings", "budget_events"})
        detail::field(j, f, "report");
    return j;
}

// ---- sweep CSV
// Fixed column set; value_* filled for inum rows, k for mn rows, and
// value_approx is the one decimal convenience column (marked approximate by
// name). Failed rows carry their error class in 'status'.

inline std::string sweep_to_csv(const std::vector<SweepEntry>& entries) {
    std::ostringstream out;
    out << "N,value_num,value_den,value_approx,k,mode,ms,status\n";
    for (const auto& e : entries) {
        out << e.N << ",";
        if (e.ok && e.inum)
            out << num(e.inum->value) << "," << den(e.inum->value) << ","
                << to_decimal_string(e.inum->value) << ",";
        else
            out << ",,,";
        if (e.ok && e.mn) out << e.mn->k;
        out << ",";
        if (e.inum)
            out << "lp";
        else if (e.mn)
            out << (e.mn->mode == MNMode::exact ? "exact" : "greedy");
        out << "," << e.ms << ",";
        out << (e.ok ? "ok" : "error:" + e.error) << "\n";
    }
    return out.str();
}

inline Json sweep_to_json(const std::vector<SweepEntry>& entries) {
    Json arr = Json::array();
    for (const auto& e : entries) {
        Json row;
        row["N"] = e.N;
        row["status"] = e.ok ? "ok" : "error:" + e.error;
        if (e.ok && e.inum) row["certificate"] = certificate_to_json(*e.inum);
        if (e.ok && e.mn) row["mn"] = mn_report_to_json(*e.mn);
        if (!e.ok) row["message"] = e.message;
        row["ms"] = e.ms;
        arr.push_back(std::move(row));
    }
    return arr;
}

} // namespace kelleyscope
