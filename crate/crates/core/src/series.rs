//! Uniformly sampled scalar series and the summary functionals applied to
//! every kinematic signal.

use crate::error::{Error, Result};

/// A real-valued series sampled at a fixed rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub values: Vec<f64>,
    /// Sampling rate in Hz.
    pub rate: f64,
}

/// The six summary statistics computed per signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Functionals {
    pub mean: f64,
    pub std: f64,
    pub max: f64,
    pub min: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

impl Functionals {
    pub fn as_array(&self) -> [f64; 6] {
        [
            self.mean,
            self.std,
            self.max,
            self.min,
            self.skewness,
            self.kurtosis,
        ]
    }

    pub const NAMES: [&'static str; 6] = ["mean", "std", "max", "min", "skew", "kurt"];
}

impl Series {
    pub fn new(values: Vec<f64>, rate: f64) -> Self {
        Series { values, rate }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Sample standard deviation (n−1 denominator). Zero for length-1 input.
    pub fn std(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let mu = self.mean();
        let ss: f64 = self.values.iter().map(|v| (v - mu) * (v - mu)).sum();
        (ss / (n - 1) as f64).sqrt()
    }

    /// First difference scaled by the sampling rate. Output is one shorter
    /// than the input.
    pub fn derivative(&self) -> Result<Series> {
        if self.len() < 2 {
            return Err(Error::numeric("derivative needs at least 2 samples"));
        }
        let d = self
            .values
            .windows(2)
            .map(|w| (w[1] - w[0]) * self.rate)
            .collect();
        Ok(Series::new(d, self.rate))
    }

    /// Mean, sample std, max, min, skewness and excess kurtosis.
    ///
    /// Skewness is the adjusted Fisher–Pearson coefficient; kurtosis is the
    /// excess form (0 for a normal distribution). A constant series returns
    /// 0 for both by convention instead of dividing by a zero moment.
    pub fn functionals(&self) -> Result<Functionals> {
        let n = self.values.len();
        if n < 2 {
            return Err(Error::numeric("functionals need at least 2 samples"));
        }
        let nf = n as f64;
        let mu = self.mean();
        let mut max = f64::NEG_INFINITY;
        let mut min = f64::INFINITY;
        let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
        for &v in &self.values {
            max = max.max(v);
            min = min.min(v);
            let d = v - mu;
            let d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
        }
        m2 /= nf;
        m3 /= nf;
        m4 /= nf;
        let std = (m2 * nf / (nf - 1.0)).sqrt();
        let (skewness, kurtosis) = if m2 <= 0.0 {
            (0.0, 0.0)
        } else {
            let g1 = m3 / m2.powf(1.5);
            let adj = if n > 2 {
                (nf * (nf - 1.0)).sqrt() / (nf - 2.0)
            } else {
                1.0
            };
            (g1 * adj, m4 / (m2 * m2) - 3.0)
        };
        Ok(Functionals {
            mean: mu,
            std,
            max,
            min,
            skewness,
            kurtosis,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn derivative_of_constant_is_zero() {
        let s = Series::new(vec![3.0; 10], 180.0);
        let d = s.derivative().unwrap();
        assert_eq!(d.len(), 9);
        assert!(d.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn derivative_of_unit_ramp_is_one() {
        let rate = 180.0;
        let s = Series::new((0..50).map(|i| i as f64 / rate).collect(), rate);
        let d = s.derivative().unwrap();
        for v in &d.values {
            assert!((v - 1.0).abs() < 1e-9, "got {v}");
        }
    }

    #[test]
    fn derivative_of_sine_peaks_near_analytic_value() {
        // 1 Hz sine sampled at 180 Hz: max |d/dt| = 2*pi within 5%.
        let rate = 180.0;
        let n = 720;
        let s = Series::new(
            (0..n)
                .map(|i| (2.0 * std::f64::consts::PI * i as f64 / rate).sin())
                .collect(),
            rate,
        );
        let d = s.derivative().unwrap();
        let max = d.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let expect = 2.0 * std::f64::consts::PI;
        assert!((max - expect).abs() / expect < 0.05, "max {max}");
    }

    #[test]
    fn derivative_rejects_short_series() {
        assert!(Series::new(vec![1.0], 180.0).derivative().is_err());
    }

    #[test]
    fn functionals_of_symmetric_sequence() {
        let f = Series::new(vec![1.0, 2.0, 3.0, 4.0], 1.0).functionals().unwrap();
        assert_eq!(f.mean, 2.5);
        assert_eq!(f.max, 4.0);
        assert_eq!(f.min, 1.0);
        assert!(f.skewness.abs() < 1e-12);
    }

    #[test]
    fn functionals_of_constant_use_conventions() {
        let f = Series::new(vec![7.0, 7.0, 7.0], 1.0).functionals().unwrap();
        assert_eq!(f.std, 0.0);
        assert_eq!(f.skewness, 0.0);
        assert_eq!(f.kurtosis, 0.0);
    }

    #[test]
    fn functionals_match_normal_moments() {
        // Seeded standard-normal sample: skewness near 0, excess kurtosis near 0.
        let mut rng = crate::rng::rng_for(11, "functionals");
        let values: Vec<f64> = (0..10_000)
            .map(|_| {
                let u1: f64 = rng.gen_range(1e-12..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        let f = Series::new(values, 1.0).functionals().unwrap();
        assert!(f.skewness.abs() < 0.1, "skewness {}", f.skewness);
        assert!(f.kurtosis.abs() < 0.2, "kurtosis {}", f.kurtosis);
        assert!((f.std - 1.0).abs() < 0.05);
    }

    #[test]
    fn sign_flip_negates_skewness_and_keeps_std_kurtosis() {
        let mut rng = crate::rng::rng_for(3, "signflip");
        let values: Vec<f64> = (0..500).map(|_| rng.gen_range(0.0..1.0f64).powi(3)).collect();
        let flipped: Vec<f64> = values.iter().map(|v| -v).collect();
        let a = Series::new(values, 1.0).functionals().unwrap();
        let b = Series::new(flipped, 1.0).functionals().unwrap();
        assert!((a.std - b.std).abs() < 1e-12);
        assert!((a.kurtosis - b.kurtosis).abs() < 1e-9);
        assert!((a.skewness + b.skewness).abs() < 1e-9);
        assert!(a.max >= a.mean && a.mean >= a.min);
    }
}
