#include <doctest.h>

#include <cmath>

#include "qsense/control.hpp"

using namespace qsense;

TEST_CASE("envelope peaks at the center") {
    const PulseSpec p{0.06, 80.0, 400.0};
    CHECK(envelope(p, 400.0) == doctest::Approx(0.06).epsilon(1e-14));
}

TEST_CASE("envelope FWHM: half maximum at t_c +- T_w sqrt(2 ln 2)") {
    const PulseSpec p{1.0, 10.0, 0.0};
    const double t_half = 10.0 * std::sqrt(2.0 * std::log(2.0));
    CHECK(envelope(p, t_half) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(envelope(p, -t_half) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("envelope tail at 6 widths is below 1.6e-8 of the peak") {
    const PulseSpec p{1.0, 10.0, 0.0};
    CHECK(envelope(p, 60.0) < 1.6e-8);
}

TEST_CASE("drive_value with zero peaks is zero everywhere in the window") {
    DriveSpec d;
    d.stokes = {0.0, 10.0, 100.0};
    d.pump = {0.0, 10.0, 200.0};
    d.omega_20 = 1.6;
    d.omega_12 = 0.6;
    d.t_start = 0.0;
    d.t_final = 300.0;
    for (double t : {0.0, 50.0, 150.0, 300.0}) CHECK(drive_value(d, t) == 0.0);
}

TEST_CASE("drive_value throws OutOfWindow outside [t_start, t_final]") {
    DriveSpec d;
    d.stokes = {0.1, 10.0, 100.0};
    d.pump = {0.1, 10.0, 200.0};
    d.omega_20 = 1.6;
    d.omega_12 = 0.6;
    d.t_start = 0.0;
    d.t_final = 300.0;
    CHECK_THROWS_AS(drive_value(d, -0.1), OutOfWindow);
    CHECK_THROWS_AS(drive_value(d, 300.1), OutOfWindow);
}

TEST_CASE("drive_value is near the pump peak when its carrier is at a crest") {
    DriveSpec d;
    d.stokes = {0.1, 5.0, -1000.0};  // negligible at t = 0
    d.pump = {0.2, 50.0, 0.0};
    d.omega_20 = 2.0 * M_PI;  // crest at every integer t
    d.omega_12 = 0.6;
    d.t_start = -100.0;
    d.t_final = 100.0;
    d.pump.center = 0.0;
    CHECK(drive_value(d, 0.0) == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("drive_value is bounded by the sum of the peaks") {
    const EigenFrame f = build_eigenframe({1.0, 1.0});
    const DriveSpec d = make_protocol(DrivingCondition::CondII, ProtocolTiming{}, f);
    const double bound = d.stokes.peak + d.pump.peak;
    for (int i = 0; i <= 2000; ++i) {
        const double t = d.t_start + (d.t_final - d.t_start) * i / 2000.0;
        CHECK(std::abs(drive_value(d, t)) <= bound + 1e-12);
    }
}

TEST_CASE("condition ratios are 1, 2, 1/2") {
    CHECK(condition_ratio(DrivingCondition::CondI) == 1.0);
    CHECK(condition_ratio(DrivingCondition::CondII) == 2.0);
    CHECK(condition_ratio(DrivingCondition::CondIII) == 0.5);
}

TEST_CASE("make_protocol builds the three conditions on a valid frame") {
    const EigenFrame f = build_eigenframe({1.0, 1.0});
    const ProtocolTiming timing;
    const DriveSpec d1 = make_protocol(DrivingCondition::CondI, timing, f);
    CHECK(d1.pump.peak == doctest::Approx(d1.stokes.peak));
    const DriveSpec d2 = make_protocol(DrivingCondition::CondII, timing, f);
    CHECK(d2.pump.peak == doctest::Approx(2.0 * d2.stokes.peak));
    const DriveSpec d3 = make_protocol(DrivingCondition::CondIII, timing, f);
    CHECK(d3.pump.peak == doctest::Approx(0.5 * d3.stokes.peak));
    for (const DriveSpec& d : {d1, d2, d3}) {
        // Counterintuitive ordering: Stokes precedes pump.
        CHECK(d.stokes.center < d.pump.center);
        // Carriers resonant with the frame's Bohr frequencies.
        CHECK(std::abs(d.omega_20 - f.omega_20) < 1e-12);
        CHECK(std::abs(d.omega_12 - f.omega_12) < 1e-12);
        CHECK(d.t_start < d.stokes.center);
        CHECK(d.pump.center < d.t_final);
    }
}

TEST_CASE("default protocol satisfies the adiabaticity rule of thumb") {
    // The STIRAP criterion is on the effective Rabi area. The eigenbasis
    // drive matrix elements exceed 1, so the integrated peak Rabi frequency
    // sqrt(2 pi) * (Omega0 * |X12| / sqrt(2)) * T_w must be >= 10.
    const EigenFrame f = build_eigenframe({1.0, 1.0});
    const Matrix x_eig = f.basis.adjoint() * sigma_x_total() * f.basis;
    const double x12 = std::abs(x_eig(1, 2));
    const ProtocolTiming timing;
    const double area =
        std::sqrt(2.0 * M_PI) * timing.omega0 * x12 / std::sqrt(2.0) * timing.pulse_width;
    CHECK(area >= 10.0);
}

TEST_CASE("timing validation rejects nonsense") {
    ProtocolTiming t;
    t.omega0 = 0.0;
    CHECK_THROWS(t.validate());
    ProtocolTiming t2;
    t2.pulse_width = -1.0;
    CHECK_THROWS(t2.validate());
    ProtocolTiming t3;
    t3.edge = 1.0;
    CHECK_THROWS(t3.validate());
}
