#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <routeopt/swap.hpp>

#include "support/amm_oracles.hpp"
#include "support/amm_suite.hpp"
#include "support/fixtures.hpp"

using namespace routeopt;
using fixtures::make_balancer;
using fixtures::make_curve;
using fixtures::make_dodo;
using fixtures::make_kyber;
using fixtures::make_v2;
using fixtures::make_v3;

TEST_CASE("UniV2 exact-in matches the closed form and the integration oracle", "[amm]") {
    const Pool p = make_v2(100, 100, 0.003);
    const auto r = swap_exact_in(p, 0, 1, 10.0);

    // out = 100·9.97/109.97
    CHECK(r.amount_out == Catch::Approx(100.0 * 9.97 / 109.97).epsilon(1e-12));
    CHECK(r.amount_out == Catch::Approx(9.06611).epsilon(1e-5));
    CHECK(r.fully_filled);

    const auto& q = std::get<UniV2Params>(r.new_pool.params);
    CHECK(q.reserve0 == Catch::Approx(109.97).epsilon(1e-12));  // fee stays out of reserves
    CHECK(q.reserve1 == Catch::Approx(100.0 - r.amount_out).epsilon(1e-12));

    // Independent: 1e-6-step numeric integration of the marginal price.
    CHECK(r.amount_out ==
          Catch::Approx(oracles::v2_out_integrated(100, 100, 0.003, 10.0)).epsilon(1e-9));
}

TEST_CASE("zero input is the identity for every kind", "[amm]") {
    Rng rng(7);
    for (PoolKind kind : {PoolKind::UniV2, PoolKind::UniV3, PoolKind::BalancerWeighted,
                          PoolKind::CurveStable, PoolKind::DodoPMM, PoolKind::KyberDMM}) {
        const Pool p = fixtures::random_pool(kind, rng);
        const auto r = swap_exact_in(p, p.tokens[0], p.tokens[1], 0.0);
        CHECK(r.amount_out == 0.0);
        CHECK(r.amount_in_used == 0.0);
        CHECK(r.fully_filled);
        CHECK(r.marginal_price_after == spot_price(p, p.tokens[0], p.tokens[1]));
        CHECK(depth(r.new_pool, p.tokens[0]) == depth(p, p.tokens[0]));
        CHECK(depth(r.new_pool, p.tokens[1]) == depth(p, p.tokens[1]));
    }
}

TEST_CASE("UniV3 single band follows the sqrt-price closed form", "[amm]") {
    const Pool p = make_v3(1.0, {{1000.0, 0.5, 2.0}}, 0.0);
    const auto r = swap_exact_in(p, 0, 1, 10.0);

    const double s1 = std::get<UniV3Params>(r.new_pool.params).sqrt_price;
    CHECK(s1 == Catch::Approx(1.0 / 1.01).epsilon(1e-12));
    CHECK(r.amount_out == Catch::Approx(1000.0 * (1.0 - 1.0 / 1.01)).epsilon(1e-12));
    CHECK(r.amount_out == Catch::Approx(9.90099).epsilon(1e-5));

    // Invariant: Δx = L(1/s1 − 1/s0).
    CHECK(10.0 == Catch::Approx(1000.0 * (1.0 / s1 - 1.0)).epsilon(1e-9));
}

TEST_CASE("UniV3 crosses bands and clamps at the range edge", "[amm]") {
    const std::vector<TickBand> bands{{500.0, 0.8, 0.9}, {1000.0, 0.9, 1.1}};
    const Pool p = make_v3(1.0, bands, 0.0);

    SECTION("band crossing") {
        // Draining the upper band (s 1.0 → 0.9) takes L·(1/0.9 − 1) ≈ 111.1.
        const double into_lower = 40.0;
        const double dx = 1000.0 * (1.0 / 0.9 - 1.0) + into_lower;
        const auto r = swap_exact_in(p, 0, 1, dx);
        REQUIRE(r.fully_filled);

        const double s1 = 1.0 / (1.0 / 0.9 + into_lower / 500.0);
        CHECK(std::get<UniV3Params>(r.new_pool.params).sqrt_price == Catch::Approx(s1).epsilon(1e-12));
        CHECK(r.amount_out == Catch::Approx(1000.0 * (1.0 - 0.9) + 500.0 * (0.9 - s1)).epsilon(1e-12));
    }

    SECTION("range exhaustion reports a partial fill") {
        const auto r = swap_exact_in(p, 0, 1, 1e9);
        CHECK_FALSE(r.fully_filled);
        CHECK(std::get<UniV3Params>(r.new_pool.params).sqrt_price == Catch::Approx(0.8).epsilon(1e-12));
        // Output never exceeds Σ L·(s_hi − s_lo) to the bottom of the range.
        const double cap = 1000.0 * (1.0 - 0.9) + 500.0 * (0.9 - 0.8);
        CHECK(r.amount_out == Catch::Approx(cap).epsilon(1e-12));
        CHECK(r.amount_in_used == Catch::Approx(1000.0 * (1.0 / 0.9 - 1.0) + 500.0 * (1.0 / 0.8 - 1.0 / 0.9))
                                      .epsilon(1e-12));
    }

    SECTION("token1 input walks the price upward") {
        const auto r = swap_exact_in(p, 1, 0, 50.0);
        const double s1 = 1.0 + 50.0 / 1000.0;
        REQUIRE(r.fully_filled);
        CHECK(std::get<UniV3Params>(r.new_pool.params).sqrt_price == Catch::Approx(s1).epsilon(1e-12));
        CHECK(r.amount_out == Catch::Approx(1000.0 * (1.0 - 1.0 / s1)).epsilon(1e-12));
    }
}

TEST_CASE("spot price examples", "[amm]") {
    CHECK(spot_price(make_v2(100, 200, 0.0), 0) == Catch::Approx(2.0).epsilon(1e-15));
    CHECK(spot_price(make_v2(100, 100, 0.003), 0) == Catch::Approx(0.997).epsilon(1e-15));
    const Pool bal = make_balancer({100, 25}, {0.8, 0.2}, 0.0);
    CHECK(spot_price(bal, 0, 1) == Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("slippage estimates", "[amm]") {
    CHECK(slippage_estimate(make_v2(1000, 1000, 0.0), 0, 1, 1.0) ==
          Catch::Approx(1.0 / 1001.0).epsilon(1e-12));
    CHECK(slippage_estimate(make_v2(1000, 1000, 0.0), 0, 1, 1.0) == Catch::Approx(0.001).margin(1e-4));
    CHECK(slippage_estimate(make_v2(100, 100, 0.0), 0, 1, 100.0) == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(slippage_estimate(make_v2(100, 100, 0.003), 0, 1, 0.0) == 0.0);
}

TEST_CASE("constant-product conservation with zero fee", "[amm]") {
    const Pool p = make_v2(12345.0, 678.9, 0.0);
    const auto r = swap_exact_in(p, 0, 1, 321.0);
    const auto& q = std::get<UniV2Params>(r.new_pool.params);
    CHECK(q.reserve0 * q.reserve1 == Catch::Approx(12345.0 * 678.9).epsilon(1e-12));
}

TEST_CASE("Curve flattens toward the peg as amplification grows", "[amm]") {
    const Pool p = make_curve(5000.0, {1e6, 1e6}, 0.0);
    CHECK(spot_price(p, 0, 1) == Catch::Approx(1.0).margin(1e-3));
    const auto r = swap_exact_in(p, 0, 1, 1000.0);
    CHECK(r.amount_out / 1000.0 == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("Curve swap preserves the StableSwap invariant", "[amm]") {
    const Pool p = make_curve(100.0, {5e4, 7e4, 6e4}, 0.0, {0, 1, 2});
    const auto& q0 = std::get<CurveParams>(p.params);
    const double d_before = detail::curve_D(q0.balances, q0.amplification);

    const auto r = swap_exact_in(p, 0, 2, 2000.0);
    const auto& q1 = std::get<CurveParams>(r.new_pool.params);
    const double d_after = detail::curve_D(q1.balances, q1.amplification);

    CHECK(d_after == Catch::Approx(d_before).epsilon(1e-9));
    CHECK(q1.balances[1] == q0.balances[1]);  // untouched leg
    CHECK(r.amount_out == Catch::Approx(oracles::curve_out_bisect(q0.balances, 100.0, 0, 2, 2000.0))
                              .epsilon(1e-9));
}

TEST_CASE("Dodo output equals the integrated linear price curve", "[amm]") {
    const Pool p = make_dodo(1.5, 0.4, 900.0, 1600.0, 1000.0, 0.002);
    SECTION("selling base") {
        const auto r = swap_exact_in(p, 0, 1, 50.0);
        REQUIRE(r.fully_filled);
        const auto& q = std::get<DodoParams>(p.params);
        const double d = (1.0 - p.fee) * 50.0;
        CHECK(r.amount_out == Catch::Approx(oracles::dodo_integral(q, 900.0, 900.0 + d)).epsilon(1e-9));
    }
    SECTION("selling quote recovers its own cost integral") {
        const auto r = swap_exact_in(p, 1, 0, 75.0);
        REQUIRE(r.fully_filled);
        const auto& q = std::get<DodoParams>(p.params);
        CHECK(oracles::dodo_integral(q, 900.0 - r.amount_out, 900.0) ==
              Catch::Approx((1.0 - p.fee) * 75.0).epsilon(1e-9));
    }
    SECTION("price responds to inventory displacement") {
        // Below target the quoted base price sits above the oracle price.
        CHECK(spot_price(p, 0, 1) > (1.0 - p.fee) * 1.5);
        const auto r = swap_exact_in(p, 0, 1, 300.0);
        CHECK(r.marginal_price_after < spot_price(p, 0, 1));
    }
}

TEST_CASE("Kyber virtual reserves amplify depth and cap at real reserves", "[amm]") {
    const Pool p = make_kyber(1000.0, 1000.0, 2.0, 0.0);
    SECTION("closed form on virtual reserves") {
        const auto r = swap_exact_in(p, 0, 1, 100.0);
        CHECK(r.amount_out == Catch::Approx(2000.0 * 100.0 / 2100.0).epsilon(1e-12));
        // Deeper than the same-size UniV2 pool.
        CHECK(r.amount_out > swap_exact_in(make_v2(1000, 1000, 0.0), 0, 1, 100.0).amount_out);
    }
    SECTION("output capped at the real reserve") {
        const auto r = swap_exact_in(p, 0, 1, 1e7);
        CHECK_FALSE(r.fully_filled);
        CHECK(r.amount_out <= 1000.0);
        CHECK(r.amount_out == Catch::Approx(1000.0).epsilon(1e-9));
        CHECK(r.amount_in_used < 1e7);
        CHECK_NOTHROW(validate_pool(r.new_pool));
    }
}

TEST_CASE("split-then-sequential equals single-shot (state consistency)", "[amm]") {
    Rng rng(41);
    for (PoolKind kind : {PoolKind::UniV2, PoolKind::UniV3, PoolKind::BalancerWeighted,
                          PoolKind::CurveStable, PoolKind::DodoPMM, PoolKind::KyberDMM}) {
        for (int rep = 0; rep < 20; ++rep) {
            const Pool p = fixtures::random_pool(kind, rng);
            const int tin = p.tokens[0], tout = p.tokens[1];
            const double total = 0.2 * depth(p, tin);
            const double cut = total * rng.uniform(0.1, 0.9);

            const auto whole = swap_exact_in(p, tin, tout, total);
            const auto first = swap_exact_in(p, tin, tout, cut);
            const auto second = swap_exact_in(first.new_pool, tin, tout, total - cut);

            REQUIRE(whole.fully_filled);
            const double seq = first.amount_out + second.amount_out;
            CHECK(seq == Catch::Approx(whole.amount_out).epsilon(1e-9));
        }
    }
}

TEST_CASE("output is increasing and concave in input", "[amm]") {
    Rng rng(99);
    for (PoolKind kind :
         {PoolKind::UniV2, PoolKind::UniV3, PoolKind::BalancerWeighted, PoolKind::KyberDMM}) {
        const Pool p = fixtures::random_pool(kind, rng);
        const int tin = p.tokens[0], tout = p.tokens[1];
        const double hi = 0.4 * depth(p, tin);
        constexpr int n = 50;
        std::vector<double> out(n + 1);
        for (int i = 0; i <= n; ++i)
            out[static_cast<std::size_t>(i)] = swap_exact_in(p, tin, tout, hi * i / n).amount_out;
        for (int i = 1; i <= n; ++i) {
            CHECK(out[static_cast<std::size_t>(i)] > out[static_cast<std::size_t>(i - 1)]);
            if (i >= 2) {
                const double second_diff = out[static_cast<std::size_t>(i)] -
                                           2 * out[static_cast<std::size_t>(i - 1)] +
                                           out[static_cast<std::size_t>(i - 2)];
                CHECK(second_diff <= 1e-9 * out.back());
            }
        }
    }
}

TEST_CASE("spot price matches the finite-difference quotient for all kinds", "[amm]") {
    Rng rng(123);
    for (PoolKind kind : {PoolKind::UniV2, PoolKind::UniV3, PoolKind::BalancerWeighted,
                          PoolKind::CurveStable, PoolKind::DodoPMM, PoolKind::KyberDMM}) {
        for (int rep = 0; rep < 10; ++rep) {
            const Pool p = fixtures::random_pool(kind, rng);
            const int tin = p.tokens[0], tout = p.tokens[1];
            const double eps = 1e-7 * depth(p, tin);
            const double quotient = swap_exact_in(p, tin, tout, eps).amount_out / eps;
            CHECK(spot_price(p, tin, tout) == Catch::Approx(quotient).epsilon(1e-4));
        }
    }
}

TEST_CASE("invalid inputs are rejected", "[amm]") {
    const Pool p = make_v2(100, 100, 0.003);
    CHECK_THROWS_AS(swap_exact_in(p, 0, 1, std::nan("")), Error);
    CHECK_THROWS_AS(swap_exact_in(p, 0, 1, std::numeric_limits<double>::infinity()), Error);
    CHECK_THROWS_AS(swap_exact_in(p, 0, 1, -1.0), Error);
    CHECK_THROWS_AS(swap_exact_in(p, 0, 7, 1.0), Error);
    CHECK_THROWS_AS(swap_exact_in(p, 0, 0, 1.0), Error);

    Pool bad = make_v2(0.0, 100, 0.0);
    CHECK_THROWS_AS(validate_pool(bad), Error);
    Pool badw = make_balancer({100, 100}, {0.6, 0.5}, 0.0);
    CHECK_THROWS_AS(validate_pool(badw), Error);
    Pool badfee = make_v2(100, 100, 1.0);
    CHECK_THROWS_AS(validate_pool(badfee), Error);
}

TEST_CASE("randomized oracle suite across all venue kinds", "[amm][suite]") {
    const auto res = amm_suite::run_amm_oracle_suite(250, 2026);
    INFO(res.first_failure);
    CHECK(res.failures == 0);
    CHECK(res.max_rel_err < 1e-9);
    CHECK(res.max_rel_err_curve < 1e-6);
    CHECK(res.max_conservation < 1e-12);
}
