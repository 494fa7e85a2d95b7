#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "pizza/bolyai.hpp"
#include "pizza/dihedral.hpp"
#include "pizza/errors.hpp"
#include "pizza/svg.hpp"
#include "pizza/two_structure.hpp"

using namespace pizza;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kViolation = 1, kUsage = 2, kResource = 3 };

struct Report {
    json config = json::object();
    json results = json::object();
    json verdicts = json::array();
    std::vector<std::string> lines;  // text summary

    void verdict(const std::string& name, bool ok, const std::string& detail = "") {
        json v{{"name", name}, {"ok", ok}};
        if (!detail.empty()) v["detail"] = detail;
        verdicts.push_back(v);
        lines.push_back(std::string(ok ? "PASS " : "FAIL ") + name + (detail.empty() ? "" : ": " + detail));
    }
    bool ok() const {
        for (const auto& v : verdicts)
            if (!v["ok"].get<bool>()) return false;
        return true;
    }
};

struct Options {
    bool json_out = false;
    std::string report_path;
};

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string t; std::getline(ss, t, ',');) out.push_back(t);
    return out;
}

int lcm_all(int n, int m) { return std::lcm(n, m); }

int csv_requirement(const std::string& csv) {
    int n = 1;
    for (const auto& t : split_csv(csv)) n = lcm_all(n, field_requirement(t));
    return n;
}

FVector parse_csv(const Field& f, const std::string& csv) {
    FVector v;
    for (const auto& t : split_csv(csv)) v.push_back(parse_number(f, t));
    if (v.empty()) throw ParseError("empty coordinate list");
    return v;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << text;
}

// smallest N whose field holds every string token in the document
int json_requirement(const json& j) {
    if (j.is_string()) return field_requirement(j.get<std::string>());
    int n = 1;
    if (j.is_structured())
        for (const auto& e : j) n = lcm_all(n, json_requirement(e));
    return n;
}

std::string decimal(const AlgebraicNumber& x) { return x.to_decimal(12); }

// ---------------------------------------------------------------------------

void run_group(Report& r, const std::string& type, bool stats) {
    Arrangement arr(type);
    const auto& w = arr.group();
    r.results["type"] = arr.system().label;
    r.results["dim"] = arr.dim();
    r.results["field_N"] = arr.field()->N;
    r.results["order"] = w.order();
    r.results["reflections"] = w.positive().positive.size();
    r.results["has_minus_id"] = w.has_minus_id();
    json ch = json::array();
    for (const auto& c : arr.chambers()) ch.push_back({{"element", c.element}, {"sign", c.sign}, {"separating", c.separating}});
    r.results["chambers"] = ch;
    if (stats) {
        r.lines.push_back("order " + std::to_string(w.order()));
        r.lines.push_back("reflections " + std::to_string(w.positive().positive.size()));
        r.lines.push_back(std::string("has_minus_id ") + (w.has_minus_id() ? "true" : "false"));
    }
    int plus = 0;
    for (const auto& c : arr.chambers()) plus += c.sign > 0;
    r.lines.push_back("chambers " + std::to_string(arr.chambers().size()) + " (" + std::to_string(plus) + " positive)");
    auto v = validate_system(arr.system());
    r.verdict("root system invariants", v.ok, v.ok ? "" : v.failures.front());
    r.verdict("chambers = group order", arr.chambers().size() == w.order());
}

void run_twostruct(Report& r, const std::string& type, bool epsilon) {
    Arrangement arr(type);
    const auto& w = arr.group();
    const auto& ts = arr.two_structures();
    json list = json::array();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto& phi = ts[i];
        list.push_back(phi.to_json(w));
        std::string line = "phi_" + std::to_string(i) + " type " + phi.type_signature();
        if (epsilon) line += " eps " + std::string(phi.epsilon > 0 ? "+1" : "-1");
        line += " w #" + std::to_string(phi.transporter) + " det " + std::to_string(w.element(phi.transporter).det);
        line += " roots";
        for (auto k : phi.positive_indices()) {
            line += " (";
            const auto& e = arr.system().roots[k];
            for (std::size_t c = 0; c < e.size(); ++c) line += (c ? "," : "") + e[c].to_string();
            line += ")";
        }
        r.lines.push_back(line);
    }
    r.results["type"] = arr.system().label;
    r.results["count"] = ts.size();
    r.results["structures"] = list;
    r.lines.insert(r.lines.begin(), std::to_string(ts.size()) + " two-structures");

    if (w.positive().positive.size() <= 24) {
        auto bf = brute_force_two_structures(w);
        r.results["brute_force_count"] = bf.size();
        r.verdict("orbit count = brute force", bf.size() == ts.size(),
                  std::to_string(ts.size()) + " vs " + std::to_string(bf.size()));
    }
    // one generic point pins the signs
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> d(-997, 997);
    for (int tries = 0; tries < 20; ++tries) {
        FVector x;
        for (std::size_t i = 0; i < arr.dim(); ++i) x.push_back(AlgebraicNumber(arr.field(), Rational(d(rng), 1009)));
        try {
            auto c = expansion_check_pointwise(arr, ts, x);
            r.verdict("pointwise expansion at a generic point", c.ok(), std::to_string(c.lhs) + " vs " + std::to_string(c.rhs));
            return;
        } catch (const DomainError&) {
        }
    }
    r.verdict("pointwise expansion at a generic point", false, "no generic point found");
}

void run_verify(Report& r, const std::string& type, const std::string& a_text, const std::string& shape,
                const std::string& method_text, const std::string& valuation, bool heavy) {
    Arrangement arr(type, lcm_all(csv_requirement(a_text), body_field_requirement(shape)));
    FVector a = parse_csv(arr.field(), a_text);
    Body k = parse_body(shape, arr);
    Method m = parse_method(method_text);
    m.heavy = heavy;
    Valuation v = parse_valuation(valuation);
    PizzaResult res = pizza_sum(arr, k, a, v, m);
    r.results = res.to_json(true);
    r.results["body"] = k.to_json();

    bool a1n = true;
    for (const auto& f : arr.system().factors) a1n = a1n && f.label() == "A1";
    AlgebraicNumber expected(arr.field());
    if (a1n && v == Valuation::Volume) expected = a1n_closed_form(arr, a).value;
    r.results["expected"] = expected.to_string();
    if (res.exact) {
        r.lines.push_back("value " + res.value.to_string() + " (" + decimal(res.value) + ")");
        r.verdict(a1n ? "equals the closed form" : "vanishes exactly", res.value == expected);
    } else {
        std::ostringstream s;
        s.precision(6);
        s << "estimate " << res.estimate << " se " << res.se << " (n = " << res.mc.samples << ", discarded " << res.mc.discarded << ")";
        r.lines.push_back(s.str());
        double dev = std::abs(res.estimate - expected.to_double());
        std::ostringstream d;
        d.precision(3);
        d << dev / std::max(res.se, 1e-300) << " se from " << expected.to_double();
        r.verdict("within 4 standard errors", dev <= 4 * res.se, d.str());
    }
}

void run_dissect(Report& r, int m, const std::string& a_text, const std::string& kind, const std::string& out,
                 const std::string& svg) {
    Field f = dihedral_field(m, a_text);
    DihedralFrame fr(m, f);
    FVector a = parse_csv(f, a_text);
    if (a.size() != 2) throw DomainError("a must have two coordinates");
    if (fr.sector_of(a) < 0) throw DomainError("a lies on a line of I2(2m); certificates need a generic a");
    DissectionCertificate c;
    if (kind == "outer") c = outer_cancellation_certificate(fr, a, 0);
    else if (kind == "outer-odd") c = outer_cancellation_certificate(fr, a, 1);
    else if (kind == "frederickson") c = frederickson_certificate(fr, a);
    else throw ParseError("unknown certificate kind " + kind);
    if (!out.empty()) write_file(out, c.to_json().dump(1) + "\n");
    if (!svg.empty()) write_file(svg, svg_dissection(c));
    Verdict v = verify_certificate(c);
    r.results["kind"] = c.kind;
    r.results["pieces"] = c.pieces.size();
    r.results["pairings"] = c.pairings.size();
    r.results["a_canonical"] = to_json(c.a);
    r.results["verdict"] = v.to_json();
    r.lines.push_back(c.kind + ": " + std::to_string(c.pieces.size()) + " pieces, " + std::to_string(c.pairings.size()) + " pairings");
    r.verdict("certificate verifies", v.ok, v.ok ? "" : v.failures.front());
    if (kind == "frederickson")
        for (const auto& chk : frederickson_geometry_checks(fr, a)) r.verdict(chk.name, chk.ok, chk.detail);
}

void run_cert_verify(Report& r, const std::string& path) {
    json j = read_json(path);
    if (j.contains("m")) {
        DissectionCertificate c = DissectionCertificate::from_json(j);
        Verdict v = verify_certificate(c);
        r.results["kind"] = c.kind;
        r.results["verdict"] = v.to_json();
        r.lines.push_back(c.kind + " certificate, m = " + std::to_string(c.m) + ", " + std::to_string(v.pairings_checked) +
                          " pairings, " + std::to_string(v.partitions_checked) + " partitions checked");
        for (const auto& s : v.failures) r.lines.push_back("  " + s);
        r.verdict("certificate verifies", v.ok);
    } else {
        BgCertificate c = BgCertificate::from_json(j);
        BgVerdict v = verify_bg(c);
        r.results["kind"] = c.kind;
        r.results["verdict"] = v.to_json();
        r.lines.push_back(c.kind + " certificate, " + std::to_string(c.pieces.size()) + " pieces");
        for (const auto& s : v.failures) r.lines.push_back("  " + s);
        r.verdict("certificate verifies", v.ok);
    }
}

void run_shares(Report& r, int m, int share, const std::string& a_text, const std::string& shape, const std::string& method_text) {
    int need = lcm_all(lcm_all(csv_requirement(a_text), body_field_requirement(shape)), dihedral_field(m)->N);
    Arrangement arr("I2(" + std::to_string(2 * m) + ")", need);
    FVector a = parse_csv(arr.field(), a_text);
    Body k = parse_body(shape, arr);
    ShareReport s = hirschhorn_shares(m, share, k, a, parse_method(method_text));
    r.results = s.to_json();
    if (s.exact) {
        for (std::size_t i = 0; i < s.exact_shares.size(); ++i)
            r.lines.push_back("share " + std::to_string(i) + " = " + decimal(s.exact_shares[i]));
    } else {
        for (std::size_t i = 0; i < s.estimates.size(); ++i) {
            std::ostringstream o;
            o.precision(8);
            o << "share " << i << " ~ " << s.estimates[i];
            r.lines.push_back(o.str());
        }
    }
    r.verdict("shares equal", s.equal);
    r.verdict("R0 shares equal", std::adjacent_find(s.r0_shares.begin(), s.r0_shares.end(), std::not_equal_to<>()) == s.r0_shares.end());
    r.verdict("share certificate verifies", s.certificate_verdict.ok && s.share_pairing_ok);
}

void finish_bg(Report& r, const BgCertificate& c, const std::string& out, const std::string& svg) {
    if (!out.empty()) write_file(out, c.to_json().dump(1) + "\n");
    if (!svg.empty()) write_file(svg, svg_bg(c));
    BgVerdict v = verify_bg(c);
    r.results["certificate"] = c.to_json();
    r.results["verdict"] = v.to_json();
    r.lines.push_back(std::to_string(c.pieces.size()) + " pieces, " + std::to_string(c.moved()) + " moved, " +
                      (c.translation_only ? "translations only" : "rotations used") + ", area " + v.source_area.to_string());
    for (const auto& s : v.failures) r.lines.push_back("  " + s);
    r.verdict("certificate verifies", v.ok);
}

void run_bg_rect(Report& r, const std::string& from, const std::string& to_width, const std::string& out, const std::string& svg) {
    auto x = from.find('x');
    if (x == std::string::npos) throw ParseError("--from expects WxH");
    std::string ws = from.substr(0, x), hs = from.substr(x + 1);
    Field f = make_field(lcm_all(lcm_all(field_requirement(ws), field_requirement(hs)), field_requirement(to_width)));
    finish_bg(r, rectangle_retile(parse_number(f, ws), parse_number(f, hs), parse_number(f, to_width)), out, svg);
}

void run_bg_polygon(Report& r, const std::string& path, const std::string& width, const std::string& out, const std::string& svg) {
    json j = read_json(path);
    Field f = make_field(lcm_all(json_requirement(j), field_requirement(width)));
    finish_bg(r, polygon_to_rectangle(parse_polygon(j, f), parse_number(f, width)), out, svg);
}

// {"dim": n, "items": [...], "other": [...], "expect_equal": bool}
void run_bg_kz(Report& r, const std::string& path) {
    json j = read_json(path);
    Field f = make_field(json_requirement(j));
    auto items = parse_kz_items(j, f);
    std::size_t n = j.contains("dim") ? j.at("dim").get<std::size_t>() : (items.empty() ? 0 : items.front().second.dim());
    if (n == 0) throw ParseError("give \"dim\" or at least one item");
    auto report = [&](const std::string& name, const std::vector<SignedParallelotope>& its) {
        KZVector k = kz_vector(its, f, n);
        AlgebraicNumber nf = normal_form_total(its, f, n);
        r.results[name] = {{"kz", k.to_json()}, {"normal_form_total", nf.to_string()}};
        std::string line = name + ": chi " + std::to_string(k.chi);
        for (std::size_t i = 0; i < k.v.size(); ++i) line += ", V" + std::to_string(i + 1) + " " + k.v[i].to_string();
        r.lines.push_back(line);
        r.verdict(name + ": top volume vanishes iff the normal forms cancel", k.v[n - 1].is_zero() == nf.is_zero());
        return k;
    };
    KZVector left = report("items", items);
    if (j.contains("other")) {
        KZVector right = report("other", parse_kz_items({{"items", j.at("other")}}, f));
        bool eq = kz_equal(left, right);
        r.results["equal"] = eq;
        r.lines.push_back(std::string("classes ") + (eq ? "equal" : "differ"));
        if (j.contains("expect_equal")) r.verdict("equality as expected", eq == j.at("expect_equal").get<bool>());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pizza: exact pizza sums, 2-structures, dissection certificates"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_flag("--json", opt.json_out, "print the JSON report instead of the summary");
    app.add_option("--report", opt.report_path, "also write the JSON report to this file");

    std::string type, a_text, shape = "ball:r=1", method = "exact", valuation = "volume", out, svg, kind = "outer", path;
    std::string from, to_width, width = "1";
    bool stats = false, eps = false, heavy = false;
    int m = 4, share = 0;

    auto* group = app.add_subcommand("group", "Coxeter group of a type");
    group->add_option("--type", type)->required();
    group->add_flag("--stats", stats);

    auto* two = app.add_subcommand("twostruct", "2-structures with signs");
    two->add_option("--type", type)->required();
    two->add_flag("--epsilon", eps);

    auto* verify = app.add_subcommand("verify", "pizza sum of K + a");
    verify->add_option("--type", type)->required();
    verify->add_option("--a", a_text)->required();
    verify->add_option("--shape", shape);
    verify->add_option("--method", method);
    verify->add_option("--valuation", valuation)->check(CLI::IsMember({"volume", "chi"}));
    verify->add_flag("--heavy", heavy);

    auto* dissect = app.add_subcommand("dissect", "dissection certificates");
    auto* dihedral = dissect->add_subcommand("dihedral", "I2(2m) certificate");
    dissect->require_subcommand(1);
    dihedral->add_option("--m", m)->required()->check(CLI::Range(2, 64));
    dihedral->add_option("--a", a_text)->required();
    dihedral->add_option("--kind", kind)->check(CLI::IsMember({"outer", "outer-odd", "frederickson"}));
    dihedral->add_option("--out", out);
    dihedral->add_option("--svg", svg);

    auto* cert = app.add_subcommand("cert", "certificate files");
    auto* cert_verify = cert->add_subcommand("verify", "check a certificate");
    cert->require_subcommand(1);
    cert_verify->add_option("file", path)->required();

    auto* shares = app.add_subcommand("shares", "shares of I2(2m), m even");
    shares->add_option("--m", m)->required();
    shares->add_option("--r", share)->required();
    shares->add_option("--a", a_text)->required();
    shares->add_option("--shape", shape);
    shares->add_option("--method", method);

    auto* bg = app.add_subcommand("bg", "scissors congruence and parallelotope classes");
    bg->require_subcommand(1);
    auto* rect = bg->add_subcommand("rect", "rectangle to rectangle");
    rect->add_option("--from", from)->required();
    rect->add_option("--to-width", to_width)->required();
    rect->add_option("--out", out);
    rect->add_option("--svg", svg)->expected(0, 1)->default_str("bg.svg");
    auto* poly = bg->add_subcommand("polygon", "convex polygon to a rectangle");
    poly->add_option("--vertices", path)->required();
    poly->add_option("--width", width);
    poly->add_option("--out", out);
    poly->add_option("--svg", svg)->expected(0, 1)->default_str("bg.svg");
    auto* kz = bg->add_subcommand("kz", "invariant vector of signed parallelotopes");
    kz->add_option("--items", path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kPass : kUsage;
    }
    // "--svg" with no value falls back to the default name
    auto svg_path = [&](CLI::App* sub) {
        auto* o = sub->get_option("--svg");
        return o->count() > 0 && svg.empty() ? std::string("bg.svg") : svg;
    };

    Report r;
    std::string sub;
    for (int i = 1; i < argc; ++i) {
        std::string s = argv[i];
        if (s == "--json") continue;
        if (s == "--report") {
            ++i;
            continue;
        }
        r.config["argv"].push_back(s);
    }
    int code = kPass;
    auto t0 = std::chrono::steady_clock::now();
    try {
        if (group->parsed()) run_group(r, type, stats);
        else if (two->parsed()) run_twostruct(r, type, eps);
        else if (verify->parsed()) run_verify(r, type, a_text, shape, method, valuation, heavy);
        else if (dihedral->parsed()) run_dissect(r, m, a_text, kind, out, svg);
        else if (cert_verify->parsed()) run_cert_verify(r, path);
        else if (shares->parsed()) run_shares(r, m, share, a_text, shape, method);
        else if (rect->parsed()) run_bg_rect(r, from, to_width, out, svg_path(rect));
        else if (poly->parsed()) run_bg_polygon(r, path, width, out, svg_path(poly));
        else if (kz->parsed()) run_bg_kz(r, path);
        code = r.ok() ? kPass : kViolation;
    } catch (const ResourceError& e) {
        r.results["error"] = {{"kind", "resource"}, {"message", e.what()}};
        code = kResource;
    } catch (const ParseError& e) {
        r.results["error"] = {{"kind", "usage"}, {"message", e.what()}};
        code = kUsage;
    } catch (const DomainError& e) {
        r.results["error"] = {{"kind", "usage"}, {"message", e.what()}};
        code = kUsage;
    } catch (const UnsupportedError& e) {
        r.results["error"] = {{"kind", "usage"}, {"message", e.what()}};
        code = kUsage;
    } catch (const Error& e) {
        r.results["error"] = {{"kind", "violation"}, {"message", e.what()}};
        code = kViolation;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json report{{"schema", 1}, {"config_echo", r.config}, {"results", r.results}, {"verdicts", r.verdicts},
                {"exit_code", code}, {"timings", {{"total_s", secs}}}};
    if (!opt.report_path.empty()) {
        try {
            write_file(opt.report_path, report.dump(2) + "\n");
        } catch (const Error& e) {
            std::cerr << e.what() << "\n";
            return kUsage;
        }
    }
    if (opt.json_out) {
        std::cout << report.dump(2) << "\n";
    } else {
        for (const auto& l : r.lines) std::cout << l << "\n";
        if (r.results.contains("error")) std::cerr << "error: " << r.results["error"]["message"].get<std::string>() << "\n";
    }
    return code;
}
