#include "qsense/control.hpp"

#include <cmath>

namespace qsense {

void PulseSpec::validate() const {
    if (!(peak >= 0.0)) throw ConfigError("PulseSpec: peak must be >= 0");
    if (!(width > 0.0)) throw ConfigError("PulseSpec: width must be > 0");
}

double envelope(const PulseSpec& p, double t) {
    const double u = (t - p.center) / p.width;
    return p.peak * std::exp(-0.5 * u * u);
}

void DriveSpec::validate() const {
    stokes.validate();
    pump.validate();
    if (!(stokes.center < pump.center))
        throw ConfigError("DriveSpec: Stokes pulse must precede the pump pulse");
    if (!(t_start < t_final)) throw ConfigError("DriveSpec: empty time window");
}

double drive_value(const DriveSpec& d, double t) {
    if (t < d.t_start || t > d.t_final)
        throw OutOfWindow("drive_value: t outside [t_start, t_final]");
    return envelope(d.pump, t) * std::cos(d.omega_20 * t) +
           envelope(d.stokes, t) * std::cos(d.omega_12 * t);
}

double condition_ratio(DrivingCondition c) {
    switch (c) {
        case DrivingCondition::CondI: return 1.0;
        case DrivingCondition::CondII: return 2.0;
        case DrivingCondition::CondIII: return 0.5;
    }
    throw ConfigError("condition_ratio: unknown condition");
}

void ProtocolTiming::validate() const {
    if (!(omega0 > 0.0)) throw ConfigError("ProtocolTiming: omega0 must be > 0");
    if (!(pulse_width > 0.0)) throw ConfigError("ProtocolTiming: pulse_width must be > 0");
    if (!(delay > 0.0)) throw ConfigError("ProtocolTiming: delay must be > 0");
    if (!(edge >= 3.0)) throw ConfigError("ProtocolTiming: edge must be >= 3 pulse widths");
}

DriveSpec make_protocol(DrivingCondition cond, const ProtocolTiming& timing,
                        const EigenFrame& frame) {
    timing.validate();
    DriveSpec d;
    d.stokes.peak = timing.omega0;
    d.stokes.width = timing.pulse_width;
    d.stokes.center = timing.edge * timing.pulse_width;
    d.pump.peak = condition_ratio(cond) * timing.omega0;
    d.pump.width = timing.pulse_width;
    d.pump.center = d.stokes.center + timing.delay;
    d.omega_20 = frame.omega_20;
    d.omega_12 = frame.omega_12;
    d.t_start = 0.0;
    d.t_final = d.pump.center + timing.edge * timing.pulse_width;
    d.validate();
    return d;
}

}  // namespace qsense
