#include <catch2/catch_amalgamated.hpp>

#include "dopf/effpoly.hpp"

using namespace dopf;
using Catch::Approx;

TEST_CASE("fitted surfaces track the exact pack to half a percentage point") {
    const BatteryPack pack;
    const EffPoly poly = fit_eff_polynomials(pack);

    // evaluate away from the fit grid
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
        for (int k = 0; k <= 40; ++k) {
            const double s = 0.2 + 0.8 * (i + 0.37) / 41.0;
            const double p = 100e3 * (k + 0.61) / 41.0;
            worst = std::max(worst, std::abs(poly_eval(poly.charge, s, p) - pack_efficiency(pack, s, -p)));
            worst = std::max(worst,
                             std::abs(poly_eval(poly.discharge, s, p) - 1.0 / pack_efficiency(pack, s, p)));
        }
    }
    CHECK(worst <= 5e-3);
}

TEST_CASE("fit and published surfaces agree at the 5 kW reference point") {
    const BatteryPack pack;
    const EffPoly fit = fit_eff_polynomials(pack);
    const EffPoly ref = reference_eff_poly();

    const double soc = 0.70;
    const double p = 5e3;
    for (const EffPoly* e : {&fit, &ref}) {
        CHECK(eval_eff(*e, soc, p, EffDirection::charge) == Approx(0.9981).margin(2e-3));
        CHECK(1.0 / eval_eff(*e, soc, p, EffDirection::discharge) == Approx(0.9980).margin(2e-3));
    }
}

TEST_CASE("surface evaluation clamps into the fitted box") {
    const EffPoly ref = reference_eff_poly();
    CHECK(eval_eff(ref, -0.5, 5e3, EffDirection::charge) ==
          eval_eff(ref, ref.soc_min, 5e3, EffDirection::charge));
    CHECK(eval_eff(ref, 0.7, 2.0 * ref.p_max, EffDirection::discharge) ==
          eval_eff(ref, 0.7, ref.p_max, EffDirection::discharge));
}

TEST_CASE("outputs stay physical over the whole box") {
    const BatteryPack pack;
    const EffPoly fit = fit_eff_polynomials(pack);
    for (int i = 0; i <= 10; ++i) {
        for (int k = 0; k <= 10; ++k) {
            const double s = 0.2 + 0.8 * i / 10.0;
            const double p = 100e3 * k / 10.0;
            const double ch = eval_eff(fit, s, p, EffDirection::charge);
            const double dis = eval_eff(fit, s, p, EffDirection::discharge);
            CHECK(ch > 0.0);
            CHECK(ch <= 1.0);
            CHECK(dis >= 1.0);
        }
    }
}

TEST_CASE("degenerate sample grids are rejected") {
    const BatteryPack pack;
    CHECK_THROWS_AS(fit_eff_polynomials(pack, {0.5, 0.6}, {0.0, 1e3, 2e3}), validation_error);
    CHECK_THROWS_AS(fit_eff_polynomials(pack, {0.4, 0.5, 0.6}, {-1e3, 0.0, 1e3}), validation_error);
}
