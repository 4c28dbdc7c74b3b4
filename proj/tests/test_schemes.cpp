#include "doctest.h"
#include "oracles.hpp"

#include "hopgdof/schemes.hpp"

using namespace hopgdof;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

std::vector<Rational> source_rates(const MultiHopScheme& s, int user) {
    std::vector<Rational> out;
    for (const MsgId& id : s.source_messages(user)) out.push_back(s.rate.at(id));
    return out;
}

Rational sum(const std::vector<Rational>& v) {
    Rational t;
    for (const auto& x : v) t += x;
    return t;
}

}  // namespace

TEST_SUITE("schemes") {

TEST_CASE("two-hop scheme at alpha 1/2") {
    MultiHopScheme s = synth_2hop(R(1, 2));
    CHECK(source_rates(s, 1) == std::vector<Rational>{R(1, 3), R(1, 6), R(0), R(1, 6)});
    CHECK(source_rates(s, 2) == std::vector<Rational>{R(1, 3), R(1, 6), R(0), R(1, 6)});
    CHECK(verify_scheme(s).value == R(4, 3));
}

TEST_CASE("two-hop totals") {
    CHECK(verify_scheme(synth_2hop(R(3, 5))).value == R(7, 5));
    MultiHopScheme df = synth_2hop(R(4, 5));
    CHECK(verify_scheme(df).value == R(6, 5));
    CHECK(verify_scheme(synth_2hop(R(0))).value == R(2));
    CHECK(verify_scheme(synth_2hop(R(1))).value == R(1));
}

TEST_CASE("regime-1 split matches the oracle list") {
    for (int L = 2; L <= 10; ++L)
        for (int k = 0; k <= 50; k += 5) {
            Rational a = R(k, 100);
            auto lib = regime1_split(a, L);
            auto ref = oracle::regime1_list(a.raw(), L);
            REQUIRE(lib.size() == ref.size());
            for (size_t i = 0; i < ref.size(); ++i) CHECK(lib[i] == Rational(ref[i]));
            CHECK(2 * sum(lib) == sum_gdof_fp(a, L).value);
        }
    CHECK(regime1_split(R(1, 2), 3) ==
          std::vector<Rational>{R(2, 7), R(1, 7), R(1, 14), R(0), R(1, 7), R(1, 14)});
}

TEST_CASE("L-hop explicit scheme carries the split") {
    for (int L : {2, 3, 4}) {
        Rational a = R(2, 5);
        MultiHopScheme s = synth_Lhop(a, L);
        CHECK(s.method == "explicit");
        CHECK(source_rates(s, 1) == regime1_split(a, L));
        CHECK(verify_scheme(s).value == sum_gdof_fp(a, L).value);
    }
    CHECK(verify_scheme(synth_Lhop(R(1, 2), 3)).value == R(10, 7));
}

TEST_CASE("L = 2 specialization") {
    MultiHopScheme a = synth_Lhop(R(1, 4), 2);
    MultiHopScheme b = synth_2hop(R(1, 4));
    CHECK(source_rates(a, 1) == source_rates(b, 1));
    CHECK(verify_scheme(a).value == verify_scheme(b).value);
}

TEST_CASE("decode-and-forward regime") {
    MultiHopScheme s = synth_Lhop(R(9, 10), 4);
    CHECK(s.method == "df");
    CHECK(verify_scheme(s).value == R(11, 10));
}

TEST_CASE("very strong schemes") {
    CHECK(verify_scheme(synth_very_strong(R(4), 3)).value == R(6));
    CHECK(verify_scheme(synth_very_strong(R(6), 5)).value == R(10));
    CHECK_THROWS_AS(synth_very_strong(R(3), 3), DomainError);
}

TEST_CASE("onion templates") {
    Rational a = R(11, 20);
    SchemeTemplate t2 = onion_template(2, 2, false);
    auto v2 = solve_template(t2, a);
    CHECK(t2.per_user.eval(v2) == R(7, 10));
    CHECK(v2[t2.var("d_T1")] == R(3, 10));
    CHECK(v2[t2.var("d_T2")] == R(3, 20));
    CHECK(v2[t2.var("d_B1")] == R(1, 4));
    // 11/20 lies above the L = 3 breakpoint 8/15, so the optimum is (2 - alpha)/2
    SchemeTemplate t3 = onion_template(3, 3, false);
    CHECK(t3.per_user.eval(solve_template(t3, a)) == R(29, 40));
    CHECK(2 * t3.per_user.eval(solve_template(t3, a)) == Rational(oracle::weak(a.raw(), 3)));
    Rational b = R(13, 25);
    CHECK(2 * t3.per_user.eval(solve_template(t3, b)) == Rational(oracle::weak(b.raw(), 3)));
    for (int L : {2, 3, 4}) {
        SchemeTemplate with = onion_template(L, L, true);
        SchemeTemplate without = onion_template(L, L, false);
        CHECK(with.per_user.eval(solve_template(with, R(1, 2))) ==
              without.per_user.eval(solve_template(without, R(1, 2))));
    }
}

TEST_CASE("end to end") {
    CHECK(end_to_end(R(1, 3), 2));
    CHECK(end_to_end(R(13, 25), 5));
    CHECK(end_to_end(R(4), 3));
    CHECK(end_to_end(R(3), 4));
    CHECK_THROWS_AS(end_to_end(R(3, 2), 3), OpenProblem);
}

TEST_CASE("synth matches the formula on a coarse grid") {
    for (int L = 2; L <= 5; ++L)
        for (int k = 0; k <= 20; ++k) {
            Rational a = R(k, 20);
            CAPTURE(L);
            CAPTURE(a);
            CHECK(verify_scheme(synth(a, L)).value == sum_gdof_fp(a, L).value);
        }
    for (int L : {2, 4})
        for (int k = 21; k <= 80; k += 7) {
            Rational a = R(k, 20);
            CHECK(verify_scheme(synth(a, L)).value == sum_gdof_fp(a, L).value);
        }
}

TEST_CASE("tampering is caught") {
    for (auto [a, L] : std::vector<std::pair<Rational, int>>{{R(1, 2), 2}, {R(3, 5), 3}, {R(4), 3}, {R(9, 10), 4}}) {
        MultiHopScheme s = synth(a, L);
        for (const MsgId& id : s.source_messages(1)) {
            if (s.rate.at(id) == R(0)) continue;
            MultiHopScheme t = tamper(s, id, R(1, 100));
            VerifyReport rep = verify_report(t);
            CHECK_FALSE(rep.ok);
            REQUIRE(rep.failure.has_value());
            CHECK(rep.failure->deficit > R(0));
            CHECK_THROWS_AS(verify_scheme(t), VerificationError);
        }
    }
}

TEST_CASE("json round trip") {
    for (auto [a, L] : std::vector<std::pair<Rational, int>>{{R(1, 2), 2}, {R(3, 5), 3}, {R(4), 3}, {R(2), 2}}) {
        MultiHopScheme s = synth(a, L);
        VerifyReport rep = verify_report(s);
        std::string text = scheme_to_json(s, &rep);
        MultiHopScheme back = scheme_from_json(text);
        CHECK(back.alpha == s.alpha);
        CHECK(back.L == s.L);
        CHECK(back.rate == s.rate);
        CHECK(verify_scheme(back).value == verify_scheme(s).value);
        CHECK(scheme_to_json(back) == scheme_to_json(s));
    }
    CHECK_THROWS(scheme_from_json("{\"alpha\": \"1/2\"}"));
}

TEST_CASE("per-user totals are symmetric") {
    for (int k = 0; k <= 10; ++k) {
        VerifyReport rep = verify_report(synth(R(k, 10), 3));
        CHECK(rep.ok);
        CHECK(rep.per_user[0] == rep.per_user[1]);
        CHECK(rep.per_user[0] + rep.per_user[1] == rep.total);
    }
}

}  // TEST_SUITE
