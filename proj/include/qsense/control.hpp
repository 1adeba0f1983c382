#pragma once

#include "qsense/model.hpp"

namespace qsense {

/// Gaussian pulse envelope peak * exp(-(t - center)^2 / (2 width^2)).
struct PulseSpec {
    double peak = 0.0;    // Rabi energy at the center
    double width = 1.0;   // Gaussian width T_w
    double center = 0.0;

    void validate() const;
};

double envelope(const PulseSpec& p, double t);

/// Two-tone symmetric drive W(t) = Wp(t) cos(w20 t) + Ws(t) cos(w12 t)
/// coupled through sigma_1^x + sigma_2^x. The Stokes pulse (1-2 tone)
/// precedes the pump pulse (0-2 tone).
struct DriveSpec {
    PulseSpec stokes;      // couples 1-2, carrier omega_12
    PulseSpec pump;        // couples 0-2, carrier omega_20
    double omega_20 = 0.0;
    double omega_12 = 0.0;
    double t_start = 0.0;
    double t_final = 0.0;

    void validate() const;
};

/// Lab-frame field amplitude at time t. Throws OutOfWindow outside
/// [t_start, t_final].
double drive_value(const DriveSpec& d, double t);

enum class DrivingCondition : int {
    CondI = 0,    // pump peak = stokes peak
    CondII = 1,   // pump peak = 2 x stokes peak
    CondIII = 2,  // pump peak = stokes peak / 2
};

inline constexpr int kNumConditions = 3;

/// Pump/Stokes peak ratio of a driving condition: 1, 2, 1/2.
double condition_ratio(DrivingCondition c);

/// Timing and amplitude knobs of the transfer protocol. None of these
/// values is physically canonical; they are tuned so the noise-free
/// transfer is adiabatic (see config defaults).
struct ProtocolTiming {
    double omega0 = 0.06;       // Stokes peak Rabi energy
    double pulse_width = 80.0;  // T_w
    double delay = 120.0;       // pump center - stokes center
    double edge = 5.0;          // window margin in units of T_w

    void validate() const;
};

/// Builds the DriveSpec of a driving condition: Stokes center at
/// edge * T_w, pump center delayed by `delay`, carriers resonant with the
/// frame's Bohr frequencies.
DriveSpec make_protocol(DrivingCondition cond, const ProtocolTiming& timing,
                        const EigenFrame& frame);

}  // namespace qsense
