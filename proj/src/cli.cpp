#include "rdp/cli.hpp"

#include <cstdlib>
#include <functional>
#include <optional>

#include <CLI11.hpp>

#include "rdp/error.hpp"
#include "rdp/io.hpp"

namespace rdp::cli {

std::size_t default_fuel() {
    if (const char* env = std::getenv("RDP_FUEL")) {
        char* end = nullptr;
        auto v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefaultFuel;
}

namespace {

struct Options {
    std::string trs_path;
    std::string program_path;
    std::string witness_path;
    std::string term;
    std::string from;
    std::string to;
    std::string mode = "innermost";
    std::size_t fuel = 0;
    std::size_t length = 1;
    bool dedup = false;
    bool innermost = false;
    bool rename_apart = false;
    bool as_json = false;
    std::string input;
    std::string expect;
    std::string encode;
    std::vector<std::string> pairs;
    std::vector<std::string> samples;
    std::optional<std::uint64_t> grid;
};

struct Report {
    json body;
    int code = kExitSuccess;
};

Report verdict(json body, bool success, std::size_t fuel) {
    body["fuel"] = fuel;
    return Report{std::move(body), success ? kExitSuccess : kExitNotFound};
}

RelationMode mode_of(const std::string& text) {
    auto m = parse_relation_mode(text);
    if (!m) throw ParseError(0, "unknown mode '" + text + "' (full, nonroot, innermost, nonroot-innermost)");
    return *m;
}

json certificate_to_json(const LoopCertificate& cert) {
    return {{"start", cert.start().to_string()},
            {"embedding", position_to_json(cert.embedding)},
            {"cycle", cert.is_cycle()},
            {"trace", trace_to_json(cert.trace)}};
}

json dp_to_json(const DepPairAlt& dp) { return {{"rule", dp.rule_index}, {"position", position_to_json(dp.position)}}; }

// ---------------------------------------------------------------------------

Report cmd_dps(const Options& o) {
    Trs trs = parse_trs(read_file(o.trs_path));
    json alt = json::array(), standard = json::array();
    for (const auto& dp : dep_pairs_alt(trs)) {
        auto s = to_standard(trs, dp);
        alt.push_back({{"rule", dp.rule_index}, {"position", position_to_json(dp.position)},
                       {"pair", s.to_string()}});
    }
    for (const auto& dp : standard_dep_pairs(trs, o.dedup)) {
        standard.push_back({{"lhs", dp.lhs.to_string()}, {"rhs", dp.rhs_sub.to_string()}});
    }
    json body = {{"status", "success"}, {"dedup", o.dedup}, {"alt", alt}, {"standard", standard},
                 {"count", standard.size()}};
    return Report{std::move(body), kExitSuccess};
}

Report cmd_normalize(const Options& o) {
    Trs trs = parse_trs(read_file(o.trs_path));
    Term t = parse_query_term(o.term, trs);
    auto mode = mode_of(o.mode);
    auto r = normalize(trs, t, mode, o.fuel);
    json body = {{"status", r.complete ? "success" : "unknown"},
                 {"mode", to_string(mode)},
                 {"normal_form", r.complete ? json(r.normal_form().to_string()) : json(nullptr)},
                 {"steps", r.trace.length()}};
    if (r.complete) {
        body["trace"] = trace_to_json(r.trace);
    } else {
        body["detail"] = "no normal form within fuel; this is not a nontermination claim";
    }
    return verdict(std::move(body), r.complete, o.fuel);
}

Report cmd_reach(const Options& o) {
    Trs trs = parse_trs(read_file(o.trs_path));
    Term s = parse_query_term(o.from, trs);
    Term t = parse_query_term(o.to, trs);
    auto mode = mode_of(o.mode);
    auto r = derives(trs, s, t, mode, o.fuel);
    json body = {{"status", r.found() ? "verified" : "not-found"},
                 {"mode", to_string(mode)},
                 {"explored", r.explored},
                 {"closure_complete", r.closure_complete}};
    if (r.found()) {
        body["trace"] = trace_to_json(*r.trace);
    } else {
        body["detail"] = r.closure_complete ? "target is outside the finite set of descendants"
                                            : "target not reached within fuel";
    }
    return verdict(std::move(body), r.found(), o.fuel);
}

Report cmd_loop(const Options& o) {
    Trs trs = parse_trs(read_file(o.trs_path));
    Term t = parse_query_term(o.term, trs);
    auto r = detect_innermost_loop(trs, t, o.fuel);
    json body = {{"status", r.certificate ? "verified" : "not-found"},
                 {"explored", r.explored},
                 {"closure_complete", r.closure_complete}};
    if (r.certificate) {
        body["certificate"] = certificate_to_json(*r.certificate);
    } else {
        body["detail"] = "no innermost loop certificate within fuel; this is not a termination claim";
    }
    return verdict(std::move(body), r.certificate.has_value(), o.fuel);
}

Report cmd_mint(const Options& o) {
    Trs trs = parse_trs(read_file(o.trs_path));
    Term t = parse_query_term(o.term, trs);
    auto r = find_mint_subterm(trs, t, o.fuel);
    json body = {{"status", r ? "verified" : "not-found"}};
    if (r) {
        body["position"] = position_to_json(r->position);
        body["subterm"] = subterm_at(t, r->position).to_string();
        body["certificate"] = certificate_to_json(r->certificate);
    } else {
        body["detail"] = "no subterm with a loop certificate within fuel";
    }
    return verdict(std::move(body), r.has_value(), o.fuel);
}

json chain_verdict_to_json(const ChainVerdict& v) {
    json traces = json::array();
    for (const auto& t : v.traces) traces.push_back(trace_to_json(t));
    json body = {{"status", to_string(v.status)}, {"traces", traces}, {"explored", v.explored}};
    if (v.failed_link) body["failed_link"] = *v.failed_link;
    if (v.failure) {
        body["detail"] = v.failure->to_string();
    } else if (!v.verified()) {
        body["detail"] = "link " + std::to_string(v.failed_link.value_or(0)) + " not derivable within fuel";
    } else {
        body["detail"] = std::to_string(v.traces.size()) + " links verified";
    }
    return body;
}

Report cmd_chain_verify(const Options& o) {
    Trs trs = parse_trs(read_file(o.trs_path));
    auto w = parse_chain_witness(read_file(o.witness_path), trs);
    auto v = o.rename_apart ? verify_pair_chain(trs, rename_witness_apart(trs, w), o.innermost, o.fuel)
                            : verify_chain_prefix(trs, w, o.innermost, o.fuel);
    json body = chain_verdict_to_json(v);
    body["innermost"] = o.innermost;
    body["length"] = w.size();
    return verdict(std::move(body), v.verified(), o.fuel);
}

Report cmd_chain_derive(const Options& o) {
    Trs trs = parse_trs(read_file(o.trs_path));
    auto w = parse_chain_witness(read_file(o.witness_path), trs);
    auto r = derivation_from_chain(trs, w, o.fuel);
    if (!r) return verdict({{"status", "failure"}, {"detail", r.failure().to_string()}}, false, o.fuel);
    json terms = json::array(), positions = json::array(), links = json::array();
    for (const auto& t : r->terms) terms.push_back(t.to_string());
    for (const auto& p : r->positions) positions.push_back(position_to_json(p));
    for (const auto& l : r->links) links.push_back(trace_to_json(l));
    return verdict({{"status", "verified"}, {"terms", terms}, {"positions", positions}, {"links", links}}, true,
                   o.fuel);
}

Report cmd_loop_chain(const Options& o) {
    Trs trs = parse_trs(read_file(o.trs_path));
    Term t = parse_query_term(o.term, trs);
    auto search = detect_innermost_loop(trs, t, o.fuel);
    if (!search.certificate) {
        return verdict({{"status", "not-found"},
                        {"explored", search.explored},
                        {"detail", "no innermost loop certificate within fuel; this is not a termination claim"}},
                       false, o.fuel);
    }
    auto w = chain_from_loop(trs, *search.certificate, o.length, o.fuel);
    json body = {{"certificate", certificate_to_json(*search.certificate)}};
    if (!w) {
        body["status"] = "failure";
        body["detail"] = w.failure().to_string();
        return verdict(std::move(body), false, o.fuel);
    }
    body["status"] = "verified";
    body["witness"] = witness_to_json(w.value());
    return verdict(std::move(body), true, o.fuel);
}

pvs0::Value checked_value(const pvs0::Program& p, const std::string& text) {
    auto v = pvs0::parse_value(text);
    if (v.size() != p.width) {
        throw WidthMismatch("value " + pvs0::to_string(v) + " does not have width " + std::to_string(p.width));
    }
    return v;
}

Report cmd_pvs0_eval(const Options& o) {
    auto p = parse_pvs0_program(read_file(o.program_path));
    auto v = checked_value(p, o.input);
    if (o.expect.empty()) {
        auto r = pvs0::chi_eval(p, p.body, v, o.fuel);
        json body = {{"status", r ? "success" : "unknown"}, {"input", pvs0::to_string(v)},
                     {"result", r ? json(pvs0::to_string(*r)) : json("⋄")}};
        if (!r) body["detail"] = "evaluation did not finish within fuel";
        return verdict(std::move(body), r.has_value(), o.fuel);
    }
    auto expected = checked_value(p, o.expect);
    auto r = pvs0::epsilon_check(p, p.body, v, expected, o.fuel);
    json body = {{"status", to_string(r.verdict)}, {"input", pvs0::to_string(v)},
                 {"expected", pvs0::to_string(expected)}};
    if (r.observed) body["observed"] = pvs0::to_string(*r.observed);
    if (r.fuel) body["least_fuel"] = *r.fuel;
    return verdict(std::move(body), r.verdict == pvs0::Verdict::Holds, o.fuel);
}

Report cmd_pvs0_terminates(const Options& o) {
    auto p = parse_pvs0_program(read_file(o.program_path));
    auto v = checked_value(p, o.input);
    auto n = pvs0::terminates_on(p, v, o.fuel);
    json body = {{"status", n ? "success" : "unknown"}, {"input", pvs0::to_string(v)}};
    if (n) {
        body["least_fuel"] = *n;
        body["result"] = pvs0::to_string(*pvs0::chi_eval(p, p.body, v, *n));
    } else {
        body["detail"] = "no fuel up to the limit yields a value; this is not a nontermination claim";
    }
    return verdict(std::move(body), n.has_value(), o.fuel);
}

Report cmd_pvs0_contexts(const Options& o) {
    auto p = parse_pvs0_program(read_file(o.program_path));
    json contexts = json::array();
    for (const auto& cc : pvs0::calling_contexts(p)) {
        json cond = json::array();
        for (const auto& [g, pol] : cc.condition) cond.push_back({{"guard", g.to_string()}, {"polarity", pol}});
        contexts.push_back({{"path", position_to_json(cc.path)}, {"condition", cond}, {"actual", cc.actual.to_string()}});
    }
    return Report{{{"status", "success"}, {"count", contexts.size()}, {"contexts", contexts}}, kExitSuccess};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto at = s.find(sep, start);
        out.push_back(s.substr(start, at == std::string::npos ? std::string::npos : at - start));
        if (at == std::string::npos) return out;
        start = at + 1;
    }
}

Report cmd_cc_dp_check(const Options& o) {
    auto p = parse_pvs0_program(read_file(o.program_path));
    Trs trs = parse_trs(read_file(o.trs_path));
    auto enc = split(o.encode, ',');
    if (enc.size() != 3) throw ParseError(0, "--encode expects root,succ,zero");
    auto encode = pvs0::peano_encoder(enc[0], enc[1], enc[2], p.width);

    std::vector<pvs0::CcDpPair> pairs;
    for (const auto& text : o.pairs) {
        auto parts = split(text, ':');
        if (parts.size() != 3) throw ParseError(0, "--pair expects context:rule:position, got '" + text + "'");
        try {
            pairs.push_back({std::stoul(parts[0]), DepPairAlt{std::stoul(parts[1]), Position::parse(parts[2])}});
        } catch (const std::logic_error&) {
            throw ParseError(0, "bad --pair '" + text + "'");
        }
    }
    std::vector<pvs0::Value> samples;
    for (const auto& s : o.samples) samples.push_back(pvs0::parse_value(s));
    if (o.grid) {
        pvs0::Value v(p.width, 0);
        while (true) {
            samples.push_back(v);
            std::size_t i = p.width;
            while (i > 0 && v[i - 1] == *o.grid) v[--i] = 0;
            if (i == 0) break;
            ++v[i - 1];
        }
    }

    auto report = pvs0::check_cc_dp_correspondence(p, trs, encode, pairs, samples, o.fuel);
    json out_pairs = json::array();
    for (const auto& pr : report.pairs) {
        json failures = json::array();
        for (const auto& s : pr.samples) {
            if (s.ok()) continue;
            json f = {{"sample", pvs0::to_string(s.sample)}, {"condition", s.condition}, {"matches", s.matches}};
            if (s.actual_agrees) f["actual_agrees"] = *s.actual_agrees;
            failures.push_back(f);
        }
        out_pairs.push_back({{"context", pr.pair.context},
                             {"dp", dp_to_json(pr.pair.dp)},
                             {"passed", pr.passed()},
                             {"samples", pr.samples.size()},
                             {"failures", failures}});
    }
    json body = {{"status", report.passed() ? "pass" : "fail"}, {"samples", samples.size()}, {"pairs", out_pairs}};
    return verdict(std::move(body), report.passed(), o.fuel);
}

// ---------------------------------------------------------------------------
// Text output mirrors the JSON report.

void render_text(const json& j, std::ostream& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    auto is_flat = [](const json& v) {
        if (!v.is_array()) return !v.is_object();
        for (const auto& x : v) {
            if (x.is_structured()) return false;
        }
        return true;
    };
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_array() && is_flat(v)) {
                out << pad << k << ":";
                for (const auto& x : v) out << ' ' << scalar(x);
                out << '\n';
            } else if (v.is_structured()) {
                out << pad << k << ":\n";
                render_text(v, out, indent + 1);
            } else {
                out << pad << k << ": " << scalar(v) << '\n';
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_structured()) {
                out << pad << "-\n";
                render_text(v, out, indent + 1);
            } else {
                out << pad << "- " << scalar(v) << '\n';
            }
        }
    } else {
        out << pad << scalar(j) << '\n';
    }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dependency pair toolkit for term rewriting systems and PVS0 programs", "rdp"};
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    std::optional<std::size_t> fuel;
    app.add_flag("--json", o.as_json, "Print the report as JSON");
    app.add_option("--fuel", fuel, "Search bound (default: RDP_FUEL or 10000)")->check(CLI::PositiveNumber);

    std::function<Report(const Options&)> handler;
    auto command = [&](const char* name, const char* help, Report (*fn)(const Options&)) {
        auto* sub = app.add_subcommand(name, help);
        sub->callback([&handler, fn] { handler = fn; });
        return sub;
    };
    auto trs_arg = [&](CLI::App* sub) { sub->add_option("trs", o.trs_path, "TRS file")->required(); };
    auto prog_arg = [&](CLI::App* sub) { sub->add_option("program", o.program_path, "PVS0 program file")->required(); };

    auto* dps = command("dps", "List dependency pairs", cmd_dps);
    trs_arg(dps);
    dps->add_flag("--dedup", o.dedup, "Drop standard pairs equal up to renaming");

    auto* norm = command("normalize", "Leftmost-lowest normalization", cmd_normalize);
    trs_arg(norm);
    norm->add_option("--term", o.term)->required();
    norm->add_option("--mode", o.mode, "full, nonroot, innermost, nonroot-innermost")->capture_default_str();

    auto* reach = command("reach", "Search for a derivation", cmd_reach);
    trs_arg(reach);
    reach->add_option("--from", o.from)->required();
    reach->add_option("--to", o.to)->required();
    reach->add_option("--mode", o.mode)->capture_default_str();

    auto* loop = command("loop", "Find an innermost loop certificate", cmd_loop);
    trs_arg(loop);
    loop->add_option("--term", o.term)->required();

    auto* mint = command("mint", "Find a minimal looping subterm", cmd_mint);
    trs_arg(mint);
    mint->add_option("--term", o.term)->required();

    auto* verify = command("chain-verify", "Check a finite dependency chain", cmd_chain_verify);
    trs_arg(verify);
    verify->add_option("witness", o.witness_path, "Chain witness JSON")->required();
    verify->add_flag("--innermost", o.innermost);
    verify->add_flag("--rename-apart", o.rename_apart, "Give every entry fresh rule variables first");

    auto* derive = command("chain-derive", "Build the innermost derivation of a chain", cmd_chain_derive);
    trs_arg(derive);
    derive->add_option("witness", o.witness_path, "Chain witness JSON")->required();

    auto* lc = command("loop-chain", "Build an innermost chain from a loop", cmd_loop_chain);
    trs_arg(lc);
    lc->add_option("--term", o.term)->required();
    lc->add_option("--length", o.length)->check(CLI::PositiveNumber)->capture_default_str();

    auto* eval = command("pvs0-eval", "Evaluate a PVS0 program", cmd_pvs0_eval);
    prog_arg(eval);
    eval->add_option("--input", o.input, "Input tuple, e.g. 2,3")->required();
    eval->add_option("--expect", o.expect, "Check the result against this tuple");

    auto* term = command("pvs0-terminates", "Least fuel for which evaluation finishes", cmd_pvs0_terminates);
    prog_arg(term);
    term->add_option("--input", o.input)->required();

    auto* ctx = command("pvs0-contexts", "List calling contexts", cmd_pvs0_contexts);
    prog_arg(ctx);

    auto* cc = command("cc-dp-check", "Compare calling contexts with dependency pairs on samples", cmd_cc_dp_check);
    prog_arg(cc);
    trs_arg(cc);
    cc->add_option("--encode", o.encode, "root,succ,zero")->required();
    cc->add_option("--pair", o.pairs, "context:rule:position (0-based indices)");
    cc->add_option("--sample", o.samples, "Sample tuple, repeatable");
    cc->add_option("--grid", o.grid, "Add every tuple with components up to N");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitSuccess : kExitInputError;
    }
    o.fuel = fuel.value_or(default_fuel());

    Report report;
    try {
        report = handler(o);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    if (o.as_json) {
        out << report.body.dump(2) << '\n';
    } else {
        render_text(report.body, out, 0);
    }
    return report.code;
}

}  // namespace rdp::cli
