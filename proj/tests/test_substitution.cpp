#include <doctest.h>

#include "rdp/error.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace rdp;

namespace {

const std::set<Variable> kXY{{"x"}, {"y"}};

Term t(const std::string& s) { return parse_term(s, kXY); }

Substitution sub(std::initializer_list<std::pair<const char*, const char*>> items) {
    Substitution sigma;
    for (auto [x, u] : items) sigma.bind(Variable{x}, t(u));
    return sigma;
}

}  // namespace

TEST_SUITE("substitution") {

TEST_CASE("apply") {
    CHECK(apply(Substitution{}, t("a(x,y)")) == t("a(x,y)"));
    CHECK(apply(sub({{"y", "s(0)"}}), t("a(0,y)")) == t("a(0,s(0))"));
    CHECK(apply(sub({{"x", "0"}, {"y", "a(s(0),0)"}}), t("a(x,a(s(x),y))")) == t("a(0,a(s(0),a(s(0),0)))"));
}

TEST_CASE("identity bindings are not stored") {
    Substitution sigma;
    sigma.bind(Variable{"x"}, Term::var("x"));
    CHECK(sigma.empty());
    sigma.bind(Variable{"x"}, t("0"));
    CHECK(sigma.to_string() == "{x↦0}");
}

TEST_CASE("match") {
    CHECK(match(t("a(0,y)"), t("a(0,s(0))")) == sub({{"y", "s(0)"}}));
    CHECK_FALSE(match(t("a(s(x),0)"), t("a(0,0)")));
    CHECK_FALSE(match(t("g(x,x)"), t("g(0,s(0))")));
    CHECK(match(t("g(x,x)"), t("g(s(0),s(0))")) == sub({{"x", "s(0)"}}));
    CHECK(match(t("f(x)"), t("f(x)")) == Substitution{});
    CHECK_FALSE(match(t("f(0)"), t("f(x)")));
}

TEST_CASE("rename_apart") {
    auto [v, r] = rename_apart(t("a(s(x),0)"), {{"x"}});
    CHECK(v.to_string() == "a(s(x#1),0)");
    CHECK(r.to_string() == "{x↦x#1}");
    auto [g, rg] = rename_apart(t("0"), {{"x"}, {"y"}});
    CHECK(g == t("0"));
    CHECK(rg.empty());
    auto [same, rs] = rename_apart(t("a(x,y)"), {});
    CHECK(same == t("a(x,y)"));
    CHECK(rs.empty());
    CHECK(fresh_variable(Variable{"x"}, {{"x#1"}, {"x#2"}}) == Variable{"x#3"});
    CHECK(fresh_variable(Variable{"x#1"}, {{"x#1"}}) == Variable{"x#2"});
}

TEST_CASE("normal substitutions") {
    auto ack = testing::load_trs("ackermann.trs");
    CHECK(is_normal_substitution(sub({{"y", "s(0)"}}), ack));
    CHECK_FALSE(is_normal_substitution(sub({{"x", "a(0,0)"}}), ack));
    CHECK(is_normal_substitution(Substitution{}, ack));
}

TEST_CASE("matcher agrees with the position-wise oracle") {
    gen::Rng rng(23);
    int agreements = 0;
    for (int round = 0; round < 2000; ++round) {
        auto sig = gen::signature(rng);
        auto vars = gen::rule_variables();
        Term pattern = gen::term(rng, sig, vars, gen::pick(rng, 0, 3));
        Term subject = gen::ground_term(rng, sig, gen::pick(rng, 0, 4));
        if (round % 2 == 0) {
            Substitution sigma;
            for (const auto& x : vars_of(pattern)) sigma.bind(x, gen::ground_term(rng, sig, 2));
            subject = apply(sigma, pattern);
        }
        auto got = match(pattern, subject);
        auto want = oracle::match(pattern, subject);
        REQUIRE(got.has_value() == want.has_value());
        if (got) {
            CHECK(*got == *want);
            CHECK(apply(*got, pattern) == subject);
            ++agreements;
        }
    }
    CHECK(agreements > 500);
}

TEST_CASE("substitution laws on random terms") {
    gen::Rng rng(29);
    for (int round = 0; round < 500; ++round) {
        auto sig = gen::signature(rng);
        auto vars = gen::rule_variables();
        Term u = gen::term(rng, sig, vars, gen::pick(rng, 0, 4));
        Substitution sigma;
        for (const auto& x : vars) {
            if (gen::coin(rng)) sigma.bind(x, gen::term(rng, sig, vars, 2));
        }
        for (const auto& p : positions_of(u)) {
            CHECK(subterm_at(apply(sigma, u), p) == apply(sigma, subterm_at(u, p)));
        }
        // Round trip on the variables of u.
        auto m = match(u, apply(sigma, u));
        REQUIRE(m);
        CHECK(*m == sigma.restricted_to(vars_of(u)));

        std::set<Variable> forbidden;
        for (const auto& x : vars) {
            if (gen::coin(rng)) forbidden.insert(x);
        }
        auto [variant, renaming] = rename_apart(u, forbidden);
        CHECK(apply(renaming, u) == variant);
        for (const auto& x : vars_of(variant)) CHECK(forbidden.count(x) == 0);
    }
}

}  // TEST_SUITE
