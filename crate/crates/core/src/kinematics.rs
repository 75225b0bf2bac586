//! The 48-dimensional kinematic feature vector.
//!
//! Eight signals are derived from a recording — radial trajectory, its speed
//! and acceleration, pressure with two derivatives, pen height and its
//! derivative — and each is summarized by the six functionals, in that
//! order. Derivatives are scaled first differences, and a derived signal's
//! functionals use its own (shorter) length.

use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::ingest::Recording;
use crate::series::{Functionals, Series};

const SIGNALS: [&str; 8] = [
    "r",
    "speed",
    "accel",
    "pressure",
    "dpressure",
    "ddpressure",
    "z",
    "dz",
];

/// `sqrt(x² + y²)` per sample. Origin-dependent by construction: the radius
/// is measured from the tablet origin, not the drawing center.
pub fn radial_trajectory(rec: &Recording) -> Series {
    let values = rec
        .samples()
        .iter()
        .map(|s| s.x.hypot(s.y))
        .collect();
    Series::new(values, rec.sample_rate)
}

fn channel(rec: &Recording, f: impl Fn(&crate::ingest::TabletSample) -> f64) -> Series {
    Series::new(rec.samples().iter().map(f).collect(), rec.sample_rate)
}

/// Names of the 48 features in output order (signal-major,
/// functional-minor), prefixed with `kin_`.
pub fn kinematic_feature_names() -> Vec<String> {
    let mut names = Vec::with_capacity(48);
    for sig in SIGNALS {
        for func in Functionals::NAMES {
            names.push(format!("kin_{sig}_{func}"));
        }
    }
    names
}

/// Computes the 48 kinematic features of one recording.
pub fn kinematic_features(rec: &Recording) -> Result<FeatureVector> {
    if rec.len() < 4 {
        return Err(Error::input(
            "kinematic features need at least 4 samples for second derivatives",
        ));
    }
    let r = radial_trajectory(rec);
    let speed = r.derivative()?;
    let accel = speed.derivative()?;
    let pressure = channel(rec, |s| s.pressure);
    let dpressure = pressure.derivative()?;
    let ddpressure = dpressure.derivative()?;
    let z = channel(rec, |s| s.z);
    let dz = z.derivative()?;

    let signals = [&r, &speed, &accel, &pressure, &dpressure, &ddpressure, &z, &dz];
    let mut values = Vec::with_capacity(48);
    for s in signals {
        values.extend_from_slice(&s.functionals()?.as_array());
    }
    FeatureVector::new(kinematic_feature_names(), values)
}
