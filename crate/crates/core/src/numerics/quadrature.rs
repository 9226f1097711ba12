//! Adaptive Gauss-Kronrod quadrature over finite intervals and over the
//! half line / real line for integrands with exponentially decaying tails.

use crate::error::{Error, Result};

/// Tolerances for [`integrate_line`] and friends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Integrand magnitude, relative to the observed peak, below which the
    /// tail is dropped.
    pub truncation_threshold: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            truncation_threshold: 1e-16,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.rel_tol)
            || !positive(self.abs_tol)
            || !positive(self.truncation_threshold)
        {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must be finite and strictly positive".into(),
            ));
        }
        if self.rel_tol < f64::EPSILON {
            return Err(Error::InvalidParameter(format!(
                "rel_tol {} is below machine epsilon",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// Result of a finite-interval integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub evaluations: usize,
}

const MAX_SUBINTERVALS: usize = 4000;

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = f_center * WGK[10];
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();
    let mut values = [(0.0, 0.0); 10];
    for (k, &x) in XGK.iter().take(10).enumerate() {
        let dx = half * x;
        let lo = f(center - dx);
        let hi = f(center + dx);
        values[k] = (lo, hi);
        kronrod += WGK[k] * (lo + hi);
        abs_sum += WGK[k] * (lo.abs() + hi.abs());
        // Gauss nodes sit at the odd Kronrod indices.
        if k % 2 == 1 {
            gauss += WG[k / 2] * (lo + hi);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (f_center - mean).abs();
    for (k, &(lo, hi)) in values.iter().enumerate() {
        asc += WGK[k] * ((lo - mean).abs() + (hi - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, error }
}

/// Adaptive integration of `f` over `[a, b]`, starting from the given
/// breakpoints (which must lie inside the interval, sorted).
fn integrate_panels<F: Fn(f64) -> f64>(
    f: &F,
    breakpoints: &[f64],
    settings: &QuadratureSettings,
) -> Result<QuadEstimate> {
    let mut panels: Vec<Panel> = breakpoints
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gauss_kronrod_21(f, w[0], w[1]))
        .collect();
    let mut evaluations = 21 * panels.len();

    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::QuadratureFailed {
                estimate: value,
                error_bound: error,
            });
        }
        let target = settings.abs_tol.max(settings.rel_tol * value.abs());
        if error <= target {
            return Ok(QuadEstimate {
                value,
                error_bound: error,
                evaluations,
            });
        }
        if panels.len() >= MAX_SUBINTERVALS {
            return Err(Error::QuadratureFailed {
                estimate: value,
                error_bound: error,
            });
        }

        // Bisect the worst panel that can still be split.
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| {
                let mid = 0.5 * (p.a + p.b);
                (p.b - p.a) > 100.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE)
            })
            .fold(None::<(usize, f64)>, |best, (i, p)| match best {
                Some((_, e)) if e >= p.error => best,
                _ => Some((i, p.error)),
            });
        let Some((idx, _)) = worst else {
            return Err(Error::QuadratureFailed {
                estimate: value,
                error_bound: error,
            });
        };
        let p = panels[idx];
        let mid = 0.5 * (p.a + p.b);
        panels[idx] = gauss_kronrod_21(f, p.a, mid);
        panels.push(gauss_kronrod_21(f, mid, p.b));
        evaluations += 42;
    }
}

/// Adaptive Gauss-Kronrod integration over a finite interval.
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<QuadEstimate> {
    settings.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(
            "interval endpoints must be finite".into(),
        ));
    }
    if a == b {
        return Ok(QuadEstimate {
            value: 0.0,
            error_bound: 0.0,
            evaluations: 0,
        });
    }
    if b < a {
        let est = integrate_panels(&f, &[b, a], settings)?;
        return Ok(QuadEstimate {
            value: -est.value,
            ..est
        });
    }
    integrate_panels(&f, &[a, b], settings)
}

const SCAN_START_EXP: i32 = -8;
const SCAN_END_EXP: i32 = 60;

/// Geometric scan points `2^k`, `k = -8..=60`, used both to locate the
/// truncation point and as initial breakpoints.
fn scan_points() -> impl Iterator<Item = f64> {
    (SCAN_START_EXP..=SCAN_END_EXP).map(|k| 2f64.powi(k))
}

/// Point beyond which `|f|` on the positive half line stays below
/// `truncation_threshold` times the largest magnitude seen so far.
///
/// The scan visits `0` and the points `2^k`; it assumes sech-class decay.
pub fn truncation_point<F: Fn(f64) -> f64>(f: F, settings: &QuadratureSettings) -> Result<f64> {
    settings.validate()?;
    let mut peak = f(0.0).abs();
    let mut first_small: Option<f64> = None;
    for z in scan_points() {
        let v = f(z).abs();
        if !v.is_finite() {
            return Err(Error::QuadratureFailed {
                estimate: f64::NAN,
                error_bound: f64::INFINITY,
            });
        }
        peak = peak.max(v);
        if v <= settings.truncation_threshold * peak {
            // Two consecutive small samples end the scan.
            if let Some(end) = first_small {
                return Ok(end);
            }
            first_small = Some(z);
        } else {
            first_small = None;
        }
    }
    Err(Error::QuadratureFailed {
        estimate: f64::NAN,
        error_bound: f64::INFINITY,
    })
}

/// ∫ f over (0, ∞), truncating where the integrand has decayed.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, settings: &QuadratureSettings) -> Result<f64> {
    let end = truncation_point(&f, settings)?;
    let mut breakpoints = vec![0.0];
    breakpoints.extend(scan_points().take_while(|&z| z < end));
    breakpoints.push(end);
    settings.validate()?;
    integrate_panels(&f, &breakpoints, settings).map(|e| e.value)
}

/// ∫ f over (−∞, ∞) as the sum of two half-line integrals.
pub fn integrate_line<F: Fn(f64) -> f64>(f: F, settings: &QuadratureSettings) -> Result<f64> {
    let right = integrate_half_line(&f, settings)?;
    let left = integrate_half_line(|z| f(-z), settings)?;
    Ok(left + right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sech(z: f64) -> f64 {
        1.0 / z.cosh()
    }

    #[test]
    fn sech_squared_half_line() {
        let v = integrate_half_line(|z| sech(z).powi(2), &QuadratureSettings::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn gudermannian_half_line() {
        let v = integrate_half_line(|z| 1.0 / (2.0 * z).cosh(), &QuadratureSettings::default())
            .unwrap();
        assert!((v - PI / 4.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn gaussian_line() {
        let v = integrate_line(|z| (-z * z).exp(), &QuadratureSettings::default()).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-13, "{v}");
    }

    #[test]
    fn narrow_sech_is_resolved() {
        // Width 1/500 lies well inside the first scan panel.
        let k = 500.0;
        let v = integrate_line(|z| sech(k * z).powi(2), &QuadratureSettings::default()).unwrap();
        assert!((v - 2.0 / k).abs() < 1e-14, "{v}");
    }

    #[test]
    fn doubling_the_window_changes_nothing() {
        let s = QuadratureSettings::default();
        let f = |z: f64| sech(z).powi(2) * (0.3 * z).cos();
        let b = truncation_point(f, &s).unwrap();
        let one = integrate_interval(f, 0.0, b, &s).unwrap().value;
        let two = integrate_interval(f, 0.0, 2.0 * b, &s).unwrap().value;
        assert!((one - two).abs() <= s.rel_tol * one.abs());
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let s = QuadratureSettings::default();
        let a = integrate_interval(|x| x * x, 0.0, 3.0, &s).unwrap().value;
        let b = integrate_interval(|x| x * x, 3.0, 0.0, &s).unwrap().value;
        assert!((a - 9.0).abs() < 1e-12);
        assert_eq!(a, -b);
    }

    #[test]
    fn non_integrable_reports_failure() {
        let s = QuadratureSettings::default();
        let err = integrate_interval(|x: f64| 1.0 / x, 0.0, 1.0, &s);
        assert!(
            matches!(err, Err(Error::QuadratureFailed { .. })),
            "{err:?}"
        );
    }

    #[test]
    fn non_decaying_integrand_fails() {
        let err = integrate_half_line(|_| 1.0, &QuadratureSettings::default());
        assert!(matches!(err, Err(Error::QuadratureFailed { .. })));
    }

    #[test]
    fn invalid_settings_rejected() {
        let s = QuadratureSettings {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(s.validate().is_err());
        let s = QuadratureSettings {
            rel_tol: 1e-20,
            ..Default::default()
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn bit_identical_on_repeat() {
        let s = QuadratureSettings::default();
        let f = |z: f64| 1.0 / (z.cosh().powi(2) + (0.37 * z).sinh().powi(2));
        let a = integrate_half_line(f, &s).unwrap();
        let b = integrate_half_line(f, &s).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
