#include "doctest.h"

#include <random>

#include "squeezer/constants.hpp"
#include "squeezer/error.hpp"
#include "squeezer/params.hpp"
#include "squeezer/stability.hpp"
#include "support.hpp"

using namespace squeezer;
using doctest::Approx;

TEST_CASE("transmission_to_rate reproduces the quoted readout rates") {
    CHECK(to_hz(transmission_to_rate(0.0152, 366.5)) == Approx(498.5).epsilon(1e-3));
    CHECK(transmission_to_rate(0.0152, 366.5) == Approx(3.132e3).epsilon(1e-3));
    CHECK(transmission_to_rate(0.0, 4000.0) == 0.0);
    CHECK(to_hz(transmission_to_rate(0.046, 56.0)) == Approx(10.038e3).epsilon(1e-2));
}

TEST_CASE("transmission_to_rate rejects bad inputs") {
    CHECK_THROWS_AS(transmission_to_rate(1.0, 10.0), InvalidParameter);
    CHECK_THROWS_AS(transmission_to_rate(-0.1, 10.0), InvalidParameter);
    CHECK_THROWS_AS(transmission_to_rate(0.1, 0.0), InvalidParameter);
    CHECK_THROWS_WITH(transmission_to_rate(1.5, 10.0), doctest::Contains("invalid transmission"));
    CHECK_THROWS_WITH(transmission_to_rate(0.1, -1.0), doctest::Contains("invalid length"));
}

TEST_CASE("transmission_to_rate is monotone and has the small-T limit") {
    double prev = 0.0;
    for (double T = 1e-6; T < 0.99; T *= 1.7) {
        const double g = transmission_to_rate(T, 100.0);
        CHECK(g > prev);
        prev = g;
    }
    for (double L = 1.0; L < 1e5; L *= 3.0) CHECK(transmission_to_rate(0.01, L) > transmission_to_rate(0.01, L * 3.0));
    for (double T : {1e-6, 1e-5, 1e-4, 1e-3}) {
        const double taylor = kSpeedOfLight * T / (4.0 * 366.5);
        CHECK(std::abs(transmission_to_rate(T, 366.5) / taylor - 1.0) < 1e-3);
    }
}

TEST_CASE("sloshing frequency") {
    CHECK(to_hz(sloshing_frequency(0.0643, 4000.0, 366.5)) == Approx(4996.3).epsilon(1e-4));
    CHECK(sloshing_frequency(0.0, 4000.0, 366.5) == 0.0);
    CHECK(to_hz(sloshing_frequency(0.002, 4000.0, 56.0)) == Approx(2.256e3).epsilon(1e-2));
    CHECK_THROWS_AS(sloshing_frequency(0.01, 0.0, 10.0), InvalidParameter);
    CHECK_THROWS_AS(sloshing_frequency(0.01, 10.0, -1.0), InvalidParameter);
}

TEST_CASE("optomechanical coupling against the extended-precision oracle") {
    const PhysicalConfig c;
    const double alpha = optomechanical_coupling(c.circulating_power, c.carrier_angular_frequency(), c.arm_length);
    CHECK(std::abs(alpha / oracle::alpha_extended(3e6, 2e-6, 4000.0) - 1.0) < 1e-14);
    CHECK(optomechanical_coupling(0.0, c.carrier_angular_frequency(), 4000.0) == 0.0);
    const double quad = optomechanical_coupling(4 * 3e6, c.carrier_angular_frequency(), 4000.0);
    CHECK(quad / alpha == Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(optomechanical_coupling(1.0, 0.0, 4000.0), InvalidParameter);
    CHECK_THROWS_AS(optomechanical_coupling(-1.0, 1e15, 4000.0), InvalidParameter);
}

TEST_CASE("derived rates of the baseline") {
    const DerivedRates r = derive_rates(fixtures::baseline());
    CHECK(to_hz(r.gamma_b_readout) == Approx(500.0).epsilon(0.01));
    CHECK(r.gamma_c_readout == 0.0);
    CHECK(to_hz(r.sloshing) == Approx(5000.0).epsilon(0.01));
    CHECK(r.reduced_mass == 50.0);
    CHECK(r.chi == 0.0);
    CHECK(r.gamma_b_tot == r.gamma_b_readout + r.gamma_b_loss);
    CHECK(r.gamma_c_tot == r.gamma_c_readout + r.gamma_c_loss);
    CHECK(r.arm_length == 4000.0);
}

TEST_CASE("derived rates of the lossless config") {
    const DerivedRates r = derive_rates(fixtures::lossless());
    CHECK(r.chi == 0.0);
    CHECK(r.gamma_a == 0.0);
    CHECK(r.gamma_b_loss == 0.0);
    CHECK(r.gamma_c_loss == 0.0);
}

TEST_CASE("a ratio drive resolves against the bisection threshold") {
    const DerivedRates r = derive_rates(fixtures::baseline(0.95));
    const double thr = threshold_numeric(derive_rates_unpumped(fixtures::baseline()));
    CHECK(std::abs(r.chi / (0.95 * thr) - 1.0) < 1e-6);

    PhysicalConfig abs_cfg = fixtures::baseline();
    abs_cfg.drive = SqueezerDrive::absolute(1234.5);
    CHECK(derive_rates(abs_cfg).chi == 1234.5);
}

TEST_CASE("derive_rates is deterministic") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 10; ++k) {
        const PhysicalConfig c = fixtures::random_config(rng, false);
        CHECK(derive_rates(c) == derive_rates(c));
    }
}

TEST_CASE("validation rejects out-of-range values") {
    PhysicalConfig c;
    c.detection_loss = 1.5;
    CHECK_THROWS_AS(validate(c), ValidationError);
    CHECK_THROWS_WITH(validate(c), doctest::Contains("detection_loss"));
    c = PhysicalConfig{};
    c.injected_squeezing_db = -1.0;
    CHECK_THROWS_AS(validate(c), ValidationError);
    c = PhysicalConfig{};
    c.mirror_mass = 0.0;
    CHECK_THROWS_AS(validate(c), ValidationError);
    c = PhysicalConfig{};
    c.drive = SqueezerDrive::ratio(-0.1);
    CHECK_THROWS_AS(validate(c), ValidationError);
    c = PhysicalConfig{};
    c.srm_transmission_idler = 1.0;
    CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("config parsing") {
    CHECK(parse_config("") == PhysicalConfig{});
    CHECK(parse_config("# only a comment\n\n") == PhysicalConfig{});
    CHECK_THROWS_AS(parse_config("detection_loss = 1.5"), ValidationError);
    CHECK_THROWS_AS(parse_config("bogus_key = 1"), SchemaError);
    CHECK_THROWS_WITH(parse_config("bogus_key = 1"), doctest::Contains("bogus_key"));
    CHECK_THROWS_AS(parse_config("arm_length = 1\narm_length = 2"), SchemaError);
    CHECK_THROWS_AS(parse_config("arm_length = four"), SchemaError);
    CHECK_THROWS_AS(parse_config("chi_ratio = 0.5\nchi_abs = 100"), SchemaError);
    CHECK_THROWS_AS(parse_config("no equals sign"), SchemaError);

    const PhysicalConfig c = parse_config("srm_transmission_idler = 110e-6  # kHz target\nchi_ratio = 0.986\n");
    PhysicalConfig expected;
    expected.srm_transmission_idler = 110e-6;
    expected.drive = SqueezerDrive::ratio(0.986);
    CHECK(c == expected);

    CHECK(parse_config("squeeze_idler_port = true").squeeze_idler_port == true);
    CHECK(!parse_config("squeeze_idler_port = auto").squeeze_idler_port.has_value());
    CHECK(parse_config("squeeze_signal_port = false").squeeze_signal_port == false);
    CHECK(parse_config("chi_abs = 100").drive == SqueezerDrive::absolute(100.0));
}

TEST_CASE("serialize and parse round trip") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 50; ++k) {
        PhysicalConfig c = fixtures::random_config(rng, k % 2 == 0);
        if (k % 3 == 0) c.squeeze_idler_port = (k % 2 == 0);
        if (k % 5 == 0) c.drive = SqueezerDrive::absolute(123.456 * k);
        c.idler_separation = 1e9 * k;
        CHECK(parse_config(serialize_config(c)) == c);
    }
}

TEST_CASE("overrides") {
    PhysicalConfig c;
    apply_override(c, "chi_ratio=0.5");
    CHECK(c.drive == SqueezerDrive::ratio(0.5));
    apply_override(c, " detection_loss = 0.2 ");
    CHECK(c.detection_loss == 0.2);
    apply_override(c, "chi_abs=10");
    CHECK(c.drive == SqueezerDrive::absolute(10.0));
    CHECK_THROWS_AS(apply_override(c, "detection_loss=2"), ValidationError);
    CHECK_THROWS_AS(apply_override(c, "nokey"), SchemaError);
    CHECK_THROWS_AS(apply_override(c, "unknown=1"), SchemaError);
}
