#include "walkerlab/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "walkerlab/checks.hpp"
#include "walkerlab/errors.hpp"

namespace walkerlab {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ScenarioError(path + ": " + msg);
}

void only_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : obj.items()) {
        if (!ok.count(k)) {
            std::string list;
            for (const auto& a : ok) list += (list.empty() ? "" : ", ") + a;
            fail(path, "unknown key '" + k + "' (allowed: " + list + ")");
        }
    }
}

Expression expr_field(const Json& v, const std::string& path) {
    if (v.is_number_integer()) return Expression::rational(v.get<std::int64_t>());
    if (v.is_number()) return Expression::decimal(v.get<double>());
    if (!v.is_string()) fail(path, "expected an expression string or a number");
    try {
        return parse(v.get<std::string>());
    } catch (const ParseError& e) {
        fail(path, e.what());
    }
}

double number_field(const Json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

Point4 point_field(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 4) fail(path, "expected an array of 4 numbers");
    Point4 p{};
    for (int i = 0; i < 4; ++i) p[i] = number_field(v[i], path + "[" + std::to_string(i) + "]");
    return p;
}

std::array<std::array<Expression, 2>, 2> matrix_field(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) fail(path, "expected a 2x2 array");
    std::array<std::array<Expression, 2>, 2> m;
    for (int i = 0; i < 2; ++i) {
        const std::string row = path + "[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != 2) fail(row, "expected 2 entries");
        for (int j = 0; j < 2; ++j) m[i][j] = expr_field(v[i][j], row + "[" + std::to_string(j) + "]");
    }
    return m;
}

CheckSpec check_field(const Json& v, const std::string& path) {
    CheckSpec c;
    if (v.is_string()) {
        c.name = v.get<std::string>();
    } else {
        only_keys(v, path, {"name", "params", "tol", "expect", "note"});
        if (!v.contains("name") || !v["name"].is_string()) fail(path, "check needs a string 'name'");
        c.name = v["name"].get<std::string>();
        if (v.contains("params")) c.params = v["params"];
        if (v.contains("tol")) c.tol = number_field(v["tol"], path + ".tol");
        if (v.contains("expect")) {
            const std::string e = v["expect"].is_string() ? v["expect"].get<std::string>() : "";
            if (e != "pass" && e != "fail") fail(path + ".expect", "expected \"pass\" or \"fail\"");
            c.expect_pass = e == "pass";
        }
        if (v.contains("note")) {
            if (!v["note"].is_string()) fail(path + ".note", "expected a string");
            c.note = v["note"].get<std::string>();
        }
    }
    if (!is_registered_check(c.name)) {
        std::string msg = "unknown check '" + c.name + "'";
        const auto sug = suggest_checks(c.name);
        if (!sug.empty()) {
            msg += "; did you mean:";
            for (const auto& s : sug) msg += " " + s;
        }
        msg += "; registered checks:";
        for (const auto& s : registered_checks()) msg += " " + s;
        fail(path, msg);
    }
    if (!c.params.is_object()) fail(path + ".params", "expected an object");
    const auto allowed = check_parameters(c.name);
    for (const auto& [k, val] : c.params.items())
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            fail(path + ".params", "unknown parameter '" + k + "' for check '" + c.name + "'");
    return c;
}

SamplerConfig sampling_field(const Json& v, const std::string& path) {
    only_keys(v, path, {"seed", "count", "box", "exclusions"});
    SamplerConfig cfg;
    if (v.contains("seed")) {
        if (!v["seed"].is_number_unsigned()) fail(path + ".seed", "expected a non-negative integer");
        cfg.seed = v["seed"].get<std::uint64_t>();
    }
    if (v.contains("count")) {
        if (!v["count"].is_number_integer() || v["count"].get<int>() < 1)
            fail(path + ".count", "expected a positive integer");
        cfg.count = v["count"].get<int>();
    }
    if (v.contains("box")) {
        const Json& b = v["box"];
        if (!b.is_array() || b.size() != 4) fail(path + ".box", "expected 4 [lo, hi] pairs");
        for (int i = 0; i < 4; ++i) {
            const std::string p = path + ".box[" + std::to_string(i) + "]";
            if (!b[i].is_array() || b[i].size() != 2) fail(p, "expected [lo, hi]");
            cfg.box[i] = {number_field(b[i][0], p), number_field(b[i][1], p)};
            if (!(cfg.box[i][0] <= cfg.box[i][1])) fail(p, "lo must not exceed hi");
        }
    }
    if (v.contains("exclusions")) {
        const Json& ex = v["exclusions"];
        if (!ex.is_array()) fail(path + ".exclusions", "expected an array");
        for (std::size_t n = 0; n < ex.size(); ++n) {
            const std::string p = path + ".exclusions[" + std::to_string(n) + "]";
            only_keys(ex[n], p, {"expr", "min_abs"});
            if (!ex[n].contains("expr")) fail(p, "exclusion needs 'expr'");
            Exclusion e;
            e.expr = expr_field(ex[n]["expr"], p + ".expr");
            e.text = ex[n]["expr"].is_string() ? ex[n]["expr"].get<std::string>() : ex[n]["expr"].dump();
            if (ex[n].contains("min_abs")) e.min_abs = number_field(ex[n]["min_abs"], p + ".min_abs");
            cfg.exclusions.push_back(std::move(e));
        }
    }
    return cfg;
}

std::string location(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col) + " (byte " +
           std::to_string(byte) + ")";
}

} // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ScenarioError(source + ": malformed JSON at " + location(text, e.byte) + ": " + e.what());
    }
    Scenario s;
    s.source = source;
    s.raw = doc;
    only_keys(doc, "$", {"$schema", "id", "description", "surface", "T", "phi", "h", "checks", "sampling",
                         "points", "geodesic", "output"});
    if (doc.contains("id")) {
        if (!doc["id"].is_string()) fail("$.id", "expected a string");
        s.id = doc["id"].get<std::string>();
    }
    if (doc.contains("description")) {
        if (!doc["description"].is_string()) fail("$.description", "expected a string");
        s.description = doc["description"].get<std::string>();
    }
    if (doc.contains("surface")) {
        only_keys(doc["surface"], "$.surface", {"gamma"});
        if (doc["surface"].contains("gamma")) {
            const Json& g = doc["surface"]["gamma"];
            only_keys(g, "$.surface.gamma", {"111", "112", "121", "122", "221", "222"});
            for (const auto& [k, v] : g.items()) {
                Expression e = expr_field(v, "$.surface.gamma." + k);
                try {
                    require_base_field(e, "Gamma");
                } catch (const ScenarioError& ex) {
                    fail("$.surface.gamma." + k, ex.what());
                }
                s.surface.set_gamma(k, e);
            }
        }
    }
    if (doc.contains("T")) {
        s.t.t = matrix_field(doc["T"], "$.T");
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                try {
                    require_base_field(s.t.t[i][j], "T");
                } catch (const ScenarioError& ex) {
                    fail("$.T", ex.what());
                }
            }
    }
    if (doc.contains("phi")) {
        const Json& p = doc["phi"];
        if (p.is_object()) {
            only_keys(p, "$.phi", {"mode", "free"});
            PhiBuilderSpec b;
            const std::string mode = p.contains("mode") && p["mode"].is_string() ? p["mode"].get<std::string>() : "";
            if (mode == "soliton")
                b.mode = FamilyMode::Soliton;
            else if (mode == "einstein")
                b.mode = FamilyMode::Einstein;
            else
                fail("$.phi.mode", "expected \"soliton\" or \"einstein\"");
            b.p11 = Expression(0);
            b.p12 = Expression(0);
            if (p.contains("free")) {
                only_keys(p["free"], "$.phi.free", {"11", "12"});
                if (p["free"].contains("11")) b.p11 = expr_field(p["free"]["11"], "$.phi.free.11");
                if (p["free"].contains("12")) b.p12 = expr_field(p["free"]["12"], "$.phi.free.12");
            }
            s.builder = b;
        } else {
            const auto m = matrix_field(p, "$.phi");
            if (!m[0][1].structurally_equal(m[1][0])) fail("$.phi", "matrix must be symmetric (phi[0][1] == phi[1][0])");
            s.phi = {m[0][0], m[0][1], m[1][1]};
            for (const auto* e : {&s.phi.p11, &s.phi.p12, &s.phi.p22}) {
                try {
                    require_base_field(*e, "Phi");
                } catch (const ScenarioError& ex) {
                    fail("$.phi", ex.what());
                }
            }
        }
    }
    if (doc.contains("h")) {
        s.h = expr_field(doc["h"], "$.h");
        try {
            require_base_field(*s.h, "h");
        } catch (const ScenarioError& ex) {
            fail("$.h", ex.what());
        }
    }
    if (doc.contains("checks")) {
        if (!doc["checks"].is_array()) fail("$.checks", "expected an array");
        for (std::size_t n = 0; n < doc["checks"].size(); ++n)
            s.checks.push_back(check_field(doc["checks"][n], "$.checks[" + std::to_string(n) + "]"));
    }
    if (doc.contains("sampling")) s.sampling = sampling_field(doc["sampling"], "$.sampling");
    if (doc.contains("points")) {
        if (!doc["points"].is_array()) fail("$.points", "expected an array");
        for (std::size_t n = 0; n < doc["points"].size(); ++n)
            s.points.push_back(point_field(doc["points"][n], "$.points[" + std::to_string(n) + "]"));
    }
    if (doc.contains("geodesic")) {
        const Json& g = doc["geodesic"];
        only_keys(g, "$.geodesic", {"x0", "v0", "t_end", "tol"});
        GeodesicSetup gs;
        if (g.contains("x0")) gs.x0 = point_field(g["x0"], "$.geodesic.x0");
        if (g.contains("v0")) gs.v0 = point_field(g["v0"], "$.geodesic.v0");
        if (g.contains("t_end")) gs.t_end = number_field(g["t_end"], "$.geodesic.t_end");
        if (g.contains("tol")) {
            gs.tol = number_field(g["tol"], "$.geodesic.tol");
            if (!(gs.tol > 0.0)) fail("$.geodesic.tol", "must be positive");
        }
        s.geodesic = gs;
    }
    if (doc.contains("output")) {
        const Json& o = doc["output"];
        only_keys(o, "$.output", {"path", "formats"});
        if (o.contains("path")) {
            if (!o["path"].is_string()) fail("$.output.path", "expected a string");
            s.output_path = o["path"].get<std::string>();
        }
        if (o.contains("formats")) {
            if (!o["formats"].is_array()) fail("$.output.formats", "expected an array");
            for (const auto& f : o["formats"]) {
                const std::string v = f.is_string() ? f.get<std::string>() : "";
                if (v != "json" && v != "csv") fail("$.output.formats", "expected \"json\" or \"csv\"");
                s.output_formats.push_back(v);
            }
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

ResolvedModel resolve(const Scenario& s, const Sampler& sampler) {
    ResolvedModel m;
    if (s.builder) {
        const Expression h = s.h.value_or(Expression(0));
        const BachFlatFamily fam =
            build_bachflat_family(s.surface, s.t, h, s.builder->p11, s.builder->p12, s.builder->mode, sampler);
        m.phi = fam.phi;
        m.metric = fam.metric;
        m.f = fam.data.f;
        m.built = true;
    } else {
        m.phi = s.phi;
        m.metric = build_metric(s.surface, &s.phi, &s.t);
        m.f = s.h.value_or(Expression(0));
    }
    return m;
}

Json completed_scenario(const Scenario& s, const ResolvedModel& m) {
    Json out = s.raw;
    out["phi"] = Json::array({Json::array({m.phi.p11.str(), m.phi.p12.str()}),
                              Json::array({m.phi.p12.str(), m.phi.p22.str()})});
    return out;
}

} // namespace walkerlab
