//! Exact simulation of the two-mode system in the `(N+1)`-dimensional
//! Dicke sector `|j, m⟩`, `j = N/2`, `m = (N₁ − N₂)/2`.
//!
//! Basis index `k` holds `m = k − j`. Unitaries are built from Hermitian
//! generators by eigendecomposition, `exp(itH) = V diag(e^{itλ}) V†`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{theta_noon_with_alpha, DickeVector};

/// Largest supported particle number.
pub const N_MAX: u32 = 2048;

/// Default central-difference step for [`MziOracle::numeric_sensitivity`].
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Below this `|∂⟨P⟩|` the operating point carries no information.
pub const DERIVATIVE_FLOOR: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_dimension(n: u32) -> Result<usize> {
    if n == 0 || n > N_MAX {
        return Err(Error::DimensionOutOfRange {
            n: n as usize,
            max: N_MAX as usize,
        });
    }
    Ok(n as usize + 1)
}

/// `m` values of the basis, `−j, −j+1, …, j`.
fn m_values(n: u32) -> Vec<f64> {
    let j = n as f64 / 2.0;
    (0..=n).map(|k| k as f64 - j).collect()
}

/// Diagonal of the parity operator, `(−1)^{j−m} = (−1)^{N−k}`.
pub fn parity_signs(n: u32) -> Result<Vec<f64>> {
    check_dimension(n)?;
    Ok((0..=n)
        .map(|k| if (n - k).is_multiple_of(2) { 1.0 } else { -1.0 })
        .collect())
}

/// `S₀ = j·1`, `S₁ = diag(m)`, `S₂ = (S₊ + S₋)/2`, `S₃ = (S₊ − S₋)/(2i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperatorSet {
    pub dimension: usize,
    pub s0: DMatrix<Complex64>,
    pub s1: DMatrix<Complex64>,
    pub s2: DMatrix<Complex64>,
    pub s3: DMatrix<Complex64>,
}

fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b - b * a
}

impl SpinOperatorSet {
    pub fn j(&self) -> f64 {
        (self.dimension - 1) as f64 / 2.0
    }

    /// Largest Frobenius norm of `[Sᵢ, Sⱼ] − iεᵢⱼₖSₖ` over the cyclic triples.
    pub fn commutator_residual(&self) -> f64 {
        let (s1, s2, s3) = (&self.s1, &self.s2, &self.s3);
        [
            commutator(s1, s2) - s3 * I,
            commutator(s2, s3) - s1 * I,
            commutator(s3, s1) - s2 * I,
        ]
        .iter()
        .map(|r| r.norm())
        .fold(0.0, f64::max)
    }

    /// Largest Frobenius norm of `Sᵢ − Sᵢ†`.
    pub fn hermiticity_residual(&self) -> f64 {
        [&self.s0, &self.s1, &self.s2, &self.s3]
            .iter()
            .map(|s| (*s - s.adjoint()).norm())
            .fold(0.0, f64::max)
    }
}

pub fn build_spin_operators(n: u32) -> Result<SpinOperatorSet> {
    let dim = check_dimension(n)?;
    let j = n as f64 / 2.0;
    let m = m_values(n);
    let mut raise = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..dim - 1 {
        let mk = m[k];
        raise[(k + 1, k)] = Complex64::new((j * (j + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let s0 = DMatrix::<Complex64>::identity(dim, dim) * Complex64::new(j, 0.0);
    let s1 = DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        m.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    let s2 = (&raise + &lower) * Complex64::new(0.5, 0.0);
    let s3 = (&raise - &lower) * Complex64::new(0.0, -0.5);
    Ok(SpinOperatorSet {
        dimension: dim,
        s0,
        s1,
        s2,
        s3,
    })
}

/// `exp(i t H)` for Hermitian `H`.
pub fn hermitian_exp(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|&l| Complex64::from_polar(1.0, t * l)),
    );
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&phases) * v.adjoint()
}

/// `P = exp[iπ(S₀ − S₁)] = diag((−1)^{j−m})`.
pub fn parity_operator(n: u32) -> Result<DMatrix<Complex64>> {
    let signs = parity_signs(n)?;
    Ok(DMatrix::from_diagonal(&DVector::from_iterator(
        signs.len(),
        signs.iter().map(|&s| Complex64::new(s, 0.0)),
    )))
}

/// Phase shift `exp(−iφS₁)`.
pub fn phase_shift(n: u32, phi: f64) -> Result<DMatrix<Complex64>> {
    let dim = check_dimension(n)?;
    Ok(DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        m_values(n)
            .into_iter()
            .map(|m| Complex64::from_polar(1.0, -phi * m)),
    )))
}

/// Beam splitter `exp(i(π/2)S₂)`.
pub fn beam_splitter(n: u32) -> Result<DMatrix<Complex64>> {
    Ok(hermitian_exp(&build_spin_operators(n)?.s2, FRAC_PI_2))
}

/// `U = exp(i(π/2)S₂) exp(−iφS₁)`.
pub fn mzi_unitary(n: u32, phi: f64) -> Result<DMatrix<Complex64>> {
    Ok(beam_splitter(n)? * phase_shift(n, phi)?)
}

/// Largest elementwise deviation of `exp(iπS₃)|j,m⟩` from
/// `e^{iπN₁}|j,−m⟩`, `N₁ = j + m`, over all basis states.
pub fn swap_identity_check(n: u32) -> Result<f64> {
    let ops = build_spin_operators(n)?;
    let swap = hermitian_exp(&ops.s3, PI);
    let dim = ops.dimension;
    let mut worst = 0.0f64;
    for k in 0..dim {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for row in 0..dim {
            let expected = if row == dim - 1 - k {
                Complex64::new(sign, 0.0)
            } else {
                ZERO
            };
            worst = worst.max((swap[(row, k)] - expected).norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementResult {
    pub mean: f64,
    pub variance: f64,
}

/// MZI with parity readout at fixed `N`; the beam splitter is built once.
#[derive(Debug, Clone)]
pub struct MziOracle {
    n: u32,
    beam_splitter: DMatrix<Complex64>,
    parity: Vec<f64>,
    m: Vec<f64>,
}

/// Quantity estimated by [`MziOracle::numeric_sensitivity`].
#[derive(Debug, Clone, Copy)]
pub enum SensitivityTarget<'a> {
    /// Phase `φ` with a fixed input state.
    Phase { state: &'a DickeVector, phi: f64 },
    /// Nonlinear parameter `Θ`; the N00N input is re-prepared with
    /// `θ_N(Θ) = N arccos(−ΘN²/(2(1−α)))` at each evaluation.
    Theta { theta: f64, alpha: f64, phi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityReport {
    pub mean: f64,
    pub variance: f64,
    pub derivative: f64,
    pub sigma: f64,
    /// The point sits on a fringe extremum and `σ` is the curvature limit
    /// `1/√|∂²⟨P⟩|`.
    pub curvature_limit: bool,
}

impl MziOracle {
    pub fn new(n: u32) -> Result<Self> {
        Ok(Self {
            n,
            beam_splitter: beam_splitter(n)?,
            parity: parity_signs(n)?,
            m: m_values(n),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn check_state(&self, state: &DickeVector) -> Result<()> {
        if state.n() != self.n {
            return Err(Error::InvalidParameter(format!(
                "state has N = {}, oracle has N = {}",
                state.n(),
                self.n
            )));
        }
        Ok(())
    }

    /// Output amplitudes `U|ψ⟩`.
    pub fn propagate(&self, state: &DickeVector, phi: f64) -> Result<DVector<Complex64>> {
        self.check_state(state)?;
        let shifted = DVector::from_iterator(
            state.dim(),
            state
                .amplitudes()
                .iter()
                .zip(&self.m)
                .map(|(a, &m)| a * Complex64::from_polar(1.0, -phi * m)),
        );
        Ok(&self.beam_splitter * shifted)
    }

    /// `⟨U†PU⟩` and its variance.
    pub fn measure_parity(&self, state: &DickeVector, phi: f64) -> Result<MeasurementResult> {
        let out = self.propagate(state, phi)?;
        let (mut even, mut odd) = (0.0, 0.0);
        for (a, &s) in out.iter().zip(&self.parity) {
            if s > 0.0 {
                even += a.norm_sqr();
            } else {
                odd += a.norm_sqr();
            }
        }
        // P² = 1, so the variance (e+o)² − (e−o)² reduces to 4eo without cancellation.
        Ok(MeasurementResult {
            mean: even - odd,
            variance: (4.0 * even * odd).max(0.0),
        })
    }

    fn theta_state(&self, theta: f64, alpha: f64) -> Result<DickeVector> {
        let n = self.n;
        let theta_max = 2.0 * (1.0 - alpha) / (n as f64 * n as f64);
        let theta_n = theta_noon_with_alpha(theta * (n as f64).powi(2), n, alpha)
            .map_err(|_| Error::BeyondCriticalTheta { theta, theta_max })?;
        let mut amps = vec![ZERO; n as usize + 1];
        amps[0] = ONE * std::f64::consts::FRAC_1_SQRT_2;
        amps[n as usize] = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, -theta_n);
        DickeVector::new(n, amps)
    }

    fn measure_target(&self, target: &SensitivityTarget, offset: f64) -> Result<MeasurementResult> {
        match *target {
            SensitivityTarget::Phase { state, phi } => self.measure_parity(state, phi + offset),
            SensitivityTarget::Theta { theta, alpha, phi } => {
                self.measure_parity(&self.theta_state(theta + offset, alpha)?, phi)
            }
        }
    }

    /// Error-propagation sensitivity `σ = √Var(P)/|∂⟨P⟩|` from central
    /// differences.
    ///
    /// Steps are `fd_step` in `φ` and `fd_step·2(1−α)/N²` in `Θ`. When the
    /// point lies within one step of a fringe extremum with vanishing
    /// variance, `σ` is taken as the limit `1/√|∂²⟨P⟩|`, using a Richardson
    /// second difference at step `√fd_step` (same scaling).
    pub fn numeric_sensitivity(
        &self,
        target: &SensitivityTarget,
        fd_step: f64,
    ) -> Result<SensitivityReport> {
        if !(fd_step.is_finite() && fd_step > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "fd_step must be positive, got {fd_step}"
            )));
        }
        let scale = match *target {
            SensitivityTarget::Phase { state, .. } => {
                self.check_state(state)?;
                1.0
            }
            SensitivityTarget::Theta { alpha, .. } => {
                if !(alpha < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "alpha must be below 1, got {alpha}"
                    )));
                }
                2.0 * (1.0 - alpha) / (self.n as f64).powi(2)
            }
        };
        let h = fd_step * scale;
        let centre = self.measure_target(target, 0.0)?;
        let plus = self.measure_target(target, h)?.mean;
        let minus = self.measure_target(target, -h)?.mean;
        let derivative = (plus - minus) / (2.0 * h);
        let second = plus + minus - 2.0 * centre.mean;
        let non_informative = Error::NonInformativeOperatingPoint {
            mean: centre.mean,
            variance: centre.variance,
        };

        if (plus - minus).abs() <= second.abs() && centre.variance <= second.abs() {
            let hc = fd_step.sqrt() * scale;
            let d2 = |step: f64| -> Result<f64> {
                let p = self.measure_target(target, step)?.mean;
                let m = self.measure_target(target, -step)?.mean;
                Ok((p + m - 2.0 * centre.mean) / (step * step))
            };
            let curvature = (4.0 * d2(hc)? - d2(2.0 * hc)?) / 3.0;
            if curvature.abs() < DERIVATIVE_FLOOR {
                return Err(non_informative);
            }
            return Ok(SensitivityReport {
                mean: centre.mean,
                variance: centre.variance,
                derivative,
                sigma: 1.0 / curvature.abs().sqrt(),
                curvature_limit: true,
            });
        }
        if derivative.abs() < DERIVATIVE_FLOOR {
            return Err(non_informative);
        }
        Ok(SensitivityReport {
            mean: centre.mean,
            variance: centre.variance,
            derivative,
            sigma: centre.variance.sqrt() / derivative.abs(),
            curvature_limit: false,
        })
    }
}

/// One-shot [`MziOracle::measure_parity`].
pub fn measure_parity(state: &DickeVector, phi: f64) -> Result<MeasurementResult> {
    MziOracle::new(state.n())?.measure_parity(state, phi)
}

/// The parity expectation in the rearranged form
/// `⟨e^{iπS₀} e^{iφS₁} e^{iπS₃} e^{−iφS₁}⟩`.
#[derive(Debug, Clone)]
pub struct RearrangedParity {
    n: u32,
    swap: DMatrix<Complex64>,
    m: Vec<f64>,
}

impl RearrangedParity {
    pub fn new(n: u32) -> Result<Self> {
        let ops = build_spin_operators(n)?;
        Ok(Self {
            n,
            swap: hermitian_exp(&ops.s3, PI),
            m: m_values(n),
        })
    }

    pub fn expectation(&self, state: &DickeVector, phi: f64) -> Result<Complex64> {
        if state.n() != self.n {
            return Err(Error::InvalidParameter(format!(
                "state has N = {}, expected {}",
                state.n(),
                self.n
            )));
        }
        let psi = DVector::from_column_slice(state.amplitudes());
        let shifted = DVector::from_iterator(
            psi.len(),
            psi.iter()
                .zip(&self.m)
                .map(|(a, &m)| a * Complex64::from_polar(1.0, -phi * m)),
        );
        let mut v = &self.swap * shifted;
        v.iter_mut()
            .zip(&self.m)
            .for_each(|(a, &m)| *a *= Complex64::from_polar(1.0, phi * m));
        let global = Complex64::from_polar(1.0, PI * self.n as f64 / 2.0);
        Ok(global * psi.dotc(&v))
    }
}
