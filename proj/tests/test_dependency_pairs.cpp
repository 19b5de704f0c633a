#include <doctest.h>

#include <algorithm>

#include "rdp/error.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace rdp;
using rdp::testing::load_trs;

namespace {

struct Systems {
    Trs ack = load_trs("ackermann.trs");
    Trs hg = load_trs("hg.trs");
    Trs loop = load_trs("loop.trs");
    Trs e3 = load_trs("e3.trs");
    Trs grow = load_trs("grow.trs");

    Term a(const std::string& s) const { return testing::term(ack, s); }
    Term l(const std::string& s) const { return testing::term(loop, s); }
    Term p(const std::string& s) const { return testing::term(e3, s); }

    ChainEntry entry(const Trs& trs, std::size_t rule, const std::string& pos,
                     std::initializer_list<std::pair<const char*, const char*>> sigma) const {
        Substitution s;
        for (auto [x, u] : sigma) s.bind(Variable{x}, testing::term(trs, u));
        return ChainEntry{DepPairAlt{rule, Position::parse(pos)}, s};
    }

    ChainWitness ack_witness() const {
        return ChainWitness{{entry(ack, 2, "2", {{"x", "0"}, {"y", "s(0)"}}), entry(ack, 2, "2", {{"x", "0"}, {"y", "0"}})}};
    }

    ChainWitness loop_witness(std::size_t n) const {
        return ChainWitness{std::vector<ChainEntry>(n, entry(loop, 0, "ε", {{"x", "c"}}))};
    }
};

std::vector<std::string> alt_strings(const std::vector<DepPairAlt>& dps) {
    std::vector<std::string> out;
    for (const auto& d : dps) out.push_back(d.to_string());
    return out;
}

}  // namespace

TEST_SUITE("dependency_pairs") {

TEST_CASE_FIXTURE(Systems, "alternative dependency pairs") {
    CHECK(alt_strings(dep_pairs_alt(ack)) == std::vector<std::string>{"(1, ε)", "(2, ε)", "(2, 2)"});
    CHECK(alt_strings(dep_pairs_alt(hg)) ==
          std::vector<std::string>{"(0, ε)", "(0, 1)", "(0, 2)", "(0, 2.1)", "(1, ε)"});
    auto single = Trs::from_rules({{a("a(0,y)"), a("s(y)")}});
    CHECK(dep_pairs_alt(single).empty());
}

TEST_CASE_FIXTURE(Systems, "standard form") {
    CHECK(to_standard(ack, {2, Position{2}}) == DepPair{a("a(s(x),s(y))"), a("a(s(x),y)")});
    CHECK(to_standard(ack, {1, Position::root()}) == DepPair{a("a(s(x),0)"), a("a(x,s(0))")});
    auto h = testing::term(hg, "h(x,y)");
    CHECK(to_standard(hg, {1, Position::root()}) == DepPair{h, testing::term(hg, "g(x,y)")});
    CHECK_THROWS_AS(to_standard(ack, {0, Position::root()}), InvalidDepPair);
    CHECK_THROWS_AS(to_standard(ack, {7, Position::root()}), InvalidDepPair);
    CHECK_THROWS_AS(to_standard(ack, {2, Position{3}}), InvalidDepPair);
}

TEST_CASE_FIXTURE(Systems, "deduplication modulo renaming") {
    auto all = standard_dep_pairs(ack, true);
    REQUIRE(all.size() == 3);
    CHECK(all[0].rhs_sub == a("a(x,s(0))"));

    auto raw = standard_dep_pairs(hg, false);
    REQUIRE(raw.size() == 5);
    DepPair hgxy{testing::term(hg, "h(x,y)"), testing::term(hg, "g(x,y)")};
    CHECK(std::count(raw.begin(), raw.end(), hgxy) == 3);
    CHECK(standard_dep_pairs(hg, true).size() == 3);

    auto canon = canonical_variant(DepPair{a("a(s(y),x)"), a("a(x,y)")});
    CHECK(canon.lhs.to_string() == "a(s(v1),v2)");
    CHECK(canon.rhs_sub.to_string() == "a(v2,v1)");
    auto clash = canonical_variant(DepPair{parse_term("f(v2,v1)", {{"v1"}, {"v2"}}), parse_term("f(v1,v2)", {{"v1"}, {"v2"}})});
    CHECK(clash.lhs.to_string() == "f(v1,v2)");
    CHECK(clash.rhs_sub.to_string() == "f(v2,v1)");
}

TEST_CASE("extraction agrees with the brute-force filter") {
    gen::Rng rng(41);
    for (int round = 0; round < 300; ++round) {
        auto sig = gen::signature(rng);
        Trs trs = gen::trs(rng, sig);
        auto dps = dep_pairs_alt(trs);
        CHECK(dps == oracle::dep_pairs(trs));
        auto standard = standard_dep_pairs(trs, false);
        REQUIRE(standard.size() == dps.size());
        for (std::size_t i = 0; i < dps.size(); ++i) {
            CHECK(standard[i] == to_standard(trs, dps[i]));
            CHECK(standard[i].rhs_sub.is_app());
            CHECK(trs.is_defined(standard[i].rhs_sub.symbol().name));
        }
        auto dedup = standard_dep_pairs(trs, true);
        CHECK(dedup.size() <= standard.size());
    }
}

TEST_CASE_FIXTURE(Systems, "chain links") {
    auto link = check_chained(ack, entry(ack, 2, "2", {{"x", "0"}, {"y", "s(0)"}}),
                              entry(ack, 2, "2", {{"x", "0"}, {"y", "0"}}), true, 10000);
    REQUIRE(link.verified());
    CHECK(link.trace->length() == 0);
    CHECK(link.trace->start == a("a(s(0),s(0))"));

    auto nested = check_chained(ack, entry(ack, 2, "ε", {{"x", "s(0)"}, {"y", "0"}}),
                               entry(ack, 2, "ε", {{"x", "0"}, {"y", "a(s(0),0)"}}), false, 10000);
    REQUIRE(nested.verified());
    CHECK(replays(ack, *nested.trace));
    CHECK(nested.trace->final_term() == a("a(s(0),s(a(s(0),0)))"));

    auto none = check_chained(ack, entry(ack, 1, "ε", {{"x", "0"}}), entry(ack, 1, "ε", {{"x", "0"}}), true, 1000);
    CHECK(none.status == Status::NotFound);
    CHECK(none.closure_complete);
}

TEST_CASE_FIXTURE(Systems, "chain link preconditions") {
    auto reducible = check_chained(ack, entry(ack, 2, "2", {{"x", "0"}, {"y", "0"}}),
                                   entry(ack, 2, "2", {{"x", "a(0,0)"}, {"y", "0"}}), true, 100);
    CHECK(reducible.status == Status::Failure);
    REQUIRE(reducible.failure);
    CHECK(reducible.failure->kind == FailureKind::PreconditionFailed);
    CHECK(reducible.failure->message.find("nr-normal") != std::string::npos);
    // Without the innermost side condition the same link is only a reachability question.
    auto plain = check_chained(ack, entry(ack, 2, "2", {{"x", "0"}, {"y", "0"}}),
                               entry(ack, 2, "2", {{"x", "a(0,0)"}, {"y", "0"}}), false, 100);
    CHECK(plain.status != Status::Failure);

    auto foreign = check_chained(ack, entry(ack, 1, "ε", {{"z", "0"}}), entry(ack, 1, "ε", {{"x", "0"}}), true, 100);
    CHECK(foreign.status == Status::Failure);
    auto invalid = check_chained(ack, entry(ack, 0, "ε", {}), entry(ack, 1, "ε", {}), true, 100);
    REQUIRE(invalid.failure);
    CHECK(invalid.failure->kind == FailureKind::InvalidDepPair);
}

TEST_CASE_FIXTURE(Systems, "chain prefixes") {
    CHECK(verify_chain_prefix(ack, ChainWitness{}, true).verified());
    CHECK(verify_chain_prefix(ack, ChainWitness{{entry(ack, 1, "ε", {{"x", "0"}})}}, true).verified());

    ChainWitness five;
    for (int i = 0; i < 5; ++i) five.entries.push_back(ack_witness().entries[i % 2 == 0 ? 0 : 1]);
    // (r3,2) with y=s(0) then y=0 links; y=0 back to y=s(0) does not.
    auto v = verify_chain_prefix(ack, five, true, 10000);
    CHECK_FALSE(v.verified());
    CHECK(v.failed_link == 1);

    ChainWitness same;
    for (int i = 0; i < 5; ++i) same.entries.push_back(ack_witness().entries[0]);
    CHECK_FALSE(verify_chain_prefix(ack, same, true, 10000).verified());

    ChainWitness bad{{entry(ack, 2, "2", {{"x", "0"}, {"y", "0"}}), entry(ack, 2, "2", {{"x", "a(0,0)"}, {"y", "0"}})}};
    auto fail = verify_chain_prefix(ack, bad, true, 100);
    CHECK(fail.status == Status::Failure);
    CHECK(fail.failed_link == 0);

    auto loops = verify_chain_prefix(loop, loop_witness(5), true, 100);
    CHECK(loops.verified());
    CHECK(loops.traces.size() == 4);
}

TEST_CASE_FIXTURE(Systems, "renaming witness entries apart") {
    auto pairs = rename_witness_apart(ack, ack_witness());
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].pair.lhs.to_string() == "a(s(x#1),s(y#1))");
    CHECK(pairs[1].pair.lhs.to_string() == "a(s(x#2),s(y#2))");
    CHECK(apply(pairs[0].sigma, pairs[0].pair.lhs) == a("a(s(0),s(s(0)))"));
    CHECK(verify_pair_chain(ack, pairs, true, 1000).verified());
}

TEST_CASE_FIXTURE(Systems, "accumulated contexts") {
    auto w = ack_witness();
    auto [c0, p0] = term_pos_dps_alt(ack, w, 0);
    CHECK(c0 == a("a(0,a(s(0),s(0)))"));
    CHECK(p0 == Position{2});
    auto [c1, p1] = term_pos_dps_alt(ack, w, 1);
    CHECK(c1 == a("a(0,a(0,a(s(0),0)))"));
    CHECK(p1 == Position{2, 2});
    CHECK_THROWS_AS(term_pos_dps_alt(ack, w, 2), IndexOutOfRange);

    auto [lc, lp] = term_pos_dps_alt(loop, loop_witness(2), 1);
    CHECK(lc == l("f(c)"));
    CHECK(lp.is_root());
}

TEST_CASE_FIXTURE(Systems, "innermost derivations from chains") {
    auto d = derivation_from_chain(ack, ack_witness(), 10000);
    REQUIRE(d);
    REQUIRE(d->terms.size() == 2);
    CHECK(d->terms[0] == a("a(0,a(s(0),s(0)))"));
    CHECK(d->terms[1] == a("a(0,a(0,a(s(0),0)))"));
    REQUIRE(d->links.size() == 1);
    REQUIRE(d->links[0].length() == 1);
    CHECK(d->links[0].steps[0].position == Position{2});
    CHECK(d->links[0].mode == RelationMode::Innermost);
    CHECK(replays(ack, d->links[0]));

    auto dl = derivation_from_chain(loop, loop_witness(3), 100);
    REQUIRE(dl);
    CHECK(dl->terms == std::vector<Term>(3, l("f(c)")));
    for (const auto& link : dl->links) CHECK(link.length() == 1);

    ChainWitness broken{{entry(ack, 2, "2", {{"x", "0"}, {"y", "0"}}), entry(ack, 2, "2", {{"x", "0"}, {"y", "s(0)"}})}};
    auto f = derivation_from_chain(ack, broken, 100);
    REQUIRE_FALSE(f);
    CHECK(f.failure().kind == FailureKind::PreconditionFailed);
}

TEST_CASE_FIXTURE(Systems, "loop detection") {
    auto c = detect_innermost_loop(loop, l("f(c)"), 100);
    REQUIRE(c.certificate);
    CHECK(c.certificate->is_cycle());
    CHECK(c.certificate->trace.length() == 1);
    CHECK(is_valid_certificate(loop, *c.certificate));

    auto none = detect_innermost_loop(ack, a("a(s(0),s(0))"), 10000);
    CHECK_FALSE(none.certificate);
    CHECK(none.closure_complete);

    auto grows = detect_innermost_loop(grow, parse_term("g(0)", {}), 100);
    CHECK_FALSE(grows.certificate);
    CHECK_FALSE(grows.closure_complete);
    CHECK(grows.explored == 100);

    auto embed = detect_innermost_loop(e3, p("p(c)"), 100);
    REQUIRE(embed.certificate);
    CHECK_FALSE(embed.certificate->is_cycle());
    CHECK(embed.certificate->embedding == Position{1});
    CHECK(is_valid_certificate(e3, *embed.certificate));
}

TEST_CASE_FIXTURE(Systems, "longer cycles are found") {
    auto trs = Trs::from_rules({{parse_term("f(0)", {}), parse_term("f(s(0))", {})},
                                {parse_term("f(s(0))", {}), parse_term("f(s(s(0)))", {})},
                                {parse_term("f(s(s(0)))", {}), parse_term("f(0)", {})}});
    auto c = detect_innermost_loop(trs, parse_term("f(0)", {}), 100);
    REQUIRE(c.certificate);
    CHECK(c.certificate->is_cycle());
    CHECK(c.certificate->trace.length() == 3);
    CHECK(is_valid_certificate(trs, *c.certificate));
}

TEST_CASE_FIXTURE(Systems, "certificates that do not replay are rejected") {
    auto c = detect_innermost_loop(loop, l("f(c)"), 100);
    REQUIRE(c.certificate);
    auto bad = *c.certificate;
    bad.trace.mode = RelationMode::Full;
    CHECK_FALSE(is_valid_certificate(loop, bad));
    bad = *c.certificate;
    bad.embedding = Position{1};
    CHECK_FALSE(is_valid_certificate(loop, bad));
    bad = *c.certificate;
    bad.trace.steps.clear();
    CHECK_FALSE(is_valid_certificate(loop, bad));
}

TEST_CASE_FIXTURE(Systems, "minimal looping subterms") {
    auto h = find_mint_subterm(loop, l("h(f(c))"), 100);
    REQUIRE(h);
    CHECK(h->position == Position{1});
    auto f = find_mint_subterm(loop, l("f(c)"), 100);
    REQUIRE(f);
    CHECK(f->position.is_root());
    CHECK_FALSE(find_mint_subterm(ack, a("a(0,0)"), 1000));
    auto nested = find_mint_subterm(loop, l("f(f(c))"), 100);
    REQUIRE(nested);
    CHECK(nested->position == Position{1});
}

TEST_CASE_FIXTURE(Systems, "dependency pair and substitution from a nr-normal term") {
    auto f = dp_and_sub_from_nrnf(loop, l("f(c)"), 100);
    REQUIRE(f);
    CHECK(f->dp == DepPairAlt{0, Position::root()});
    CHECK(f->sigma.to_string() == "{x↦c}");
    CHECK(f->next_mint == l("f(c)"));

    auto q = dp_and_sub_from_nrnf(e3, p("p(c)"), 100);
    REQUIRE(q);
    CHECK(q->dp == DepPairAlt{0, Position{1}});
    CHECK(q->sigma.to_string() == "{x↦c}");
    CHECK(q->next_mint == p("p(c)"));

    auto dead = dp_and_sub_from_nrnf(ack, a("a(0,0)"), 1000);
    REQUIRE_FALSE(dead);
    CHECK(dead.failure().kind == FailureKind::NoMintWithinFuel);

    auto nf = dp_and_sub_from_nrnf(ack, a("s(0)"), 1000);
    REQUIRE_FALSE(nf);
    CHECK(nf.failure().kind == FailureKind::NoRootRule);

    auto pre = dp_and_sub_from_nrnf(ack, a("a(a(0,0),0)"), 1000);
    REQUIRE_FALSE(pre);
    CHECK(pre.failure().kind == FailureKind::PreconditionFailed);
}

TEST_CASE_FIXTURE(Systems, "next dependency pair") {
    auto f = next_dp_and_sub(loop, entry(loop, 0, "ε", {{"x", "c"}}), 100);
    REQUIRE(f);
    CHECK(f.value() == entry(loop, 0, "ε", {{"x", "c"}}));

    auto q = next_dp_and_sub(e3, entry(e3, 0, "1", {{"x", "c"}}), 100);
    REQUIRE(q);
    CHECK(q.value() == entry(e3, 0, "1", {{"x", "c"}}));

    auto dead = next_dp_and_sub(ack, entry(ack, 1, "ε", {{"x", "0"}}), 1000);
    REQUIRE_FALSE(dead);
    CHECK(dead.failure().kind == FailureKind::NoLoopCertificate);
}

TEST_CASE_FIXTURE(Systems, "chains from loops") {
    auto cert = detect_innermost_loop(loop, l("f(c)"), 100).certificate;
    REQUIRE(cert);
    auto w = chain_from_loop(loop, *cert, 5, 100);
    REQUIRE(w);
    CHECK(w.value() == loop_witness(5));
    CHECK(verify_chain_prefix(loop, w.value(), true, 100).verified());

    auto one = chain_from_loop(loop, *cert, 1, 100);
    REQUIRE(one);
    CHECK(one->size() == 1);
    CHECK_FALSE(chain_from_loop(loop, *cert, 0, 100));

    auto e4 = Trs::from_rules({{parse_term("p(x)", {{"x"}}), parse_term("p(x)", {{"x"}})}});
    auto c4 = detect_innermost_loop(e4, parse_term("p(c)", {}), 100).certificate;
    REQUIRE(c4);
    auto w4 = chain_from_loop(e4, *c4, 3, 100);
    REQUIRE(w4);
    CHECK(w4->size() == 3);

    auto c3 = detect_innermost_loop(e3, p("p(c)"), 100).certificate;
    REQUIRE(c3);
    auto w3 = chain_from_loop(e3, *c3, 4, 100);
    REQUIRE(w3);
    CHECK(w3->size() == 4);
    CHECK(verify_chain_prefix(e3, w3.value(), true, 100).verified());
}

TEST_CASE_FIXTURE(Systems, "invalid certificates are refused") {
    auto cert = detect_innermost_loop(loop, l("f(c)"), 100).certificate;
    REQUIRE(cert);
    auto bad = *cert;
    bad.trace.start = l("f(d)");
    auto w = chain_from_loop(loop, bad, 2, 100);
    REQUIRE_FALSE(w);
    CHECK(w.failure().kind == FailureKind::PreconditionFailed);
}

TEST_CASE("constructions on random looping systems") {
    gen::Rng rng(2024);
    int witnesses = 0;
    for (int round = 0; round < 400 && witnesses < 30; ++round) {
        auto inst = gen::looping_trs(rng);
        auto search = detect_innermost_loop(inst.trs, inst.start, 200);
        if (!search.certificate) continue;
        CHECK(is_valid_certificate(inst.trs, *search.certificate));
        auto w = chain_from_loop(inst.trs, *search.certificate, gen::pick(rng, 2, 5), 200);
        if (!w) continue;
        ++witnesses;
        CHECK(verify_chain_prefix(inst.trs, w.value(), true, 200).verified());
        for (const auto& e : w->entries) CHECK(is_normal_substitution(e.sigma, inst.trs));
        auto d = derivation_from_chain(inst.trs, w.value(), 200);
        REQUIRE(d);
        for (std::size_t i = 0; i < d->terms.size(); ++i) CHECK(is_position_of(d->terms[i], d->positions[i]));
        for (const auto& link : d->links) {
            CHECK(link.length() >= 1);
            CHECK(replays(inst.trs, link));
        }
    }
    CHECK(witnesses >= 20);
}

}  // TEST_SUITE
