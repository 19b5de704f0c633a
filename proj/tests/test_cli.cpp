#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "rdp/cli.hpp"
#include "support/fixtures.hpp"

using namespace rdp;
using rdp::testing::fixture;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run_command(args, out, err);
    return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args, int expected_code) {
    args.insert(args.begin(), "--json");
    auto r = run(args);
    CHECK(r.code == expected_code);
    INFO(r.err);
    return json::parse(r.out);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("dps") {
    auto j = run_json({"dps", fixture("ackermann.trs")}, 0);
    CHECK(j["standard"].size() == 3);
    CHECK(j["alt"].size() == 3);
    auto h = run_json({"dps", fixture("hg.trs"), "--dedup"}, 0);
    CHECK(h["alt"].size() == 5);
    CHECK(h["standard"].size() == 3);
    auto text = run({"dps", fixture("ackermann.trs")});
    CHECK(text.code == 0);
    CHECK(text.out.find("a(s(x),s(y))") != std::string::npos);
}

TEST_CASE("normalize and reach") {
    auto n = run_json({"normalize", fixture("ackermann.trs"), "--term", "a(s(s(0)),s(s(s(0))))"}, 0);
    CHECK(n["normal_form"] == "s(s(s(s(s(s(s(s(s(0)))))))))");
    auto r = run_json({"reach", fixture("ackermann.trs"), "--from", "a(s(0),0)", "--to", "0"}, 1);
    CHECK(r["status"] == "not-found");
    CHECK(r.contains("fuel"));
    auto ok = run_json({"reach", fixture("ackermann.trs"), "--from", "a(s(0),0)", "--to", "s(s(0))"}, 0);
    CHECK(ok["status"] == "verified");
    auto g = run_json({"--fuel", "50", "normalize", fixture("grow.trs"), "--term", "g(0)"}, 1);
    CHECK(g["fuel"] == 50);
}

TEST_CASE("loops and chains") {
    auto l = run_json({"loop", fixture("loop.trs"), "--term", "f(c)"}, 0);
    CHECK(l.contains("certificate"));
    auto none = run_json({"loop", fixture("ackermann.trs"), "--term", "a(s(0),0)"}, 1);
    CHECK(none.contains("fuel"));
    auto m = run_json({"mint", fixture("loop.trs"), "--term", "h(f(c))"}, 0);
    CHECK(m["position"] == "1");
    auto v = run_json({"chain-verify", fixture("ackermann.trs"), fixture("ackermann_witness.json"), "--innermost"}, 0);
    CHECK(v["status"] == "verified");
    auto d = run_json({"chain-derive", fixture("ackermann.trs"), fixture("ackermann_witness.json")}, 0);
    CHECK(d["terms"].size() == 2);
    auto c = run_json({"loop-chain", fixture("loop.trs"), "--term", "f(c)", "--length", "5"}, 0);
    CHECK(c["witness"]["entries"].size() == 5);
}

TEST_CASE("pvs0 commands") {
    auto prog = fixture("ackermann.pvs0.json");
    auto e = run_json({"pvs0-eval", prog, "--input", "2,3"}, 0);
    CHECK(e["result"] == "(9,0)");
    run_json({"pvs0-eval", prog, "--input", "2,3", "--expect", "8,0"}, 1);
    run_json({"--fuel", "3", "pvs0-eval", prog, "--input", "2,3"}, 1);
    auto t = run_json({"pvs0-terminates", prog, "--input", "2,3"}, 0);
    CHECK(t["least_fuel"] == 10);
    auto ctx = run_json({"pvs0-contexts", prog}, 0);
    CHECK(ctx["contexts"].size() == 3);
    auto cc = run_json({"cc-dp-check", prog, fixture("ackermann.trs"), "--encode", "a,s,0", "--pair", "0:1:ε",
                        "--pair", "2:2:2", "--grid", "3"},
                       0);
    CHECK(cc["status"] == "pass");
    run_json({"cc-dp-check", prog, fixture("ackermann.trs"), "--encode", "a,s,0", "--pair", "0:2:ε", "--sample",
              "1,0"},
             1);
}

TEST_CASE("input errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"dps"}).code == 2);
    CHECK(run({"dps", fixture("missing.trs")}).code == 2);
    CHECK(run({"normalize", fixture("ackermann.trs"), "--term", "a(0"}).code == 2);
    CHECK(run({"normalize", fixture("ackermann.trs"), "--term", "a(0,0)", "--mode", "lazy"}).code == 2);
    CHECK(run({"chain-verify", fixture("ackermann.trs"), fixture("ackermann.pvs0.json")}).code == 2);
    CHECK(run({"pvs0-eval", fixture("ackermann.pvs0.json"), "--input", "1,2,3"}).code == 2);
    CHECK(run({"--fuel", "0", "dps", fixture("ackermann.trs")}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("fuel from the environment") {
    ::setenv("RDP_FUEL", "40", 1);
    CHECK(cli::default_fuel() == 40);
    auto g = run_json({"loop", fixture("grow.trs"), "--term", "g(0)"}, 1);
    CHECK(g["fuel"] == 40);
    ::setenv("RDP_FUEL", "nonsense", 1);
    CHECK(cli::default_fuel() == kDefaultFuel);
    ::unsetenv("RDP_FUEL");
    CHECK(cli::default_fuel() == kDefaultFuel);
}

}  // TEST_SUITE
