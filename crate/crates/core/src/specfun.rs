//! Associated Laguerre polynomials and displaced-Fock matrix elements.
//!
//! Every transformed-frame matrix element reduces to
//! `⟨n+m| e^{ν(a†-a)} |n⟩ = ν^m e^{-ν²/2} √(n!/(n+m)!) L_n^m(ν²)` with
//! `ν = -2λ`. The factor in front of `L` can be written two ways (see
//! [`FFactorConvention`]); only the square-root form reproduces the
//! displacement operator, and [`calibrate_convention`] checks that
//! numerically instead of taking it on faith.

use crate::linalg::Matrix;
use crate::math::{exp, ln, ln_factorial_ratio};
use crate::Error;

/// Three-term recurrence in `n` for `L_n^m(z)`.
pub fn laguerre_assoc(n: usize, m: usize, z: f64) -> Result<f64, Error> {
    if !z.is_finite() {
        return Err(Error::Domain("laguerre argument must be finite"));
    }
    Ok(laguerre_unchecked(n, m, z))
}

pub(crate) fn laguerre_unchecked(n: usize, m: usize, z: f64) -> f64 {
    let alpha = m as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - z;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - z) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// How the prefactor of `L_x^m(4λ²)` in `f_m(λ, x)` is normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FFactorConvention {
    /// `(-2λ)^m e^{-2λ²} (x+m)!/x! L_x^m(4λ²)`, read as the coefficient of
    /// `(a†)^m` in the normal-ordered expansion.
    Factorial,
    /// `(-2λ)^m e^{-2λ²} √(x!/(x+m)!) L_x^m(4λ²)`, the matrix element
    /// `⟨x+m| e^{-2λ(a†-a)} |x⟩` itself.
    SqrtNormalized,
}

impl FFactorConvention {
    /// The variant selected by [`calibrate_convention`]; frozen here and
    /// re-checked by the test suite.
    pub const CALIBRATED: FFactorConvention = FFactorConvention::SqrtNormalized;
}

/// `f_m(λ, n)` in the requested convention.
pub fn f_factor(lambda: f64, n: usize, m: usize, conv: FFactorConvention) -> f64 {
    let x = 4.0 * lambda * lambda;
    let lag = laguerre_unchecked(n, m, x);
    let gauss = -2.0 * lambda * lambda;
    if m == 0 {
        return exp(gauss) * lag;
    }
    if lambda == 0.0 {
        return 0.0;
    }
    let nu = -2.0 * lambda;
    let sign = if nu < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
    let log_ratio = ln_factorial_ratio(n + m, n);
    let log_pref = match conv {
        FFactorConvention::SqrtNormalized => -0.5 * log_ratio,
        FFactorConvention::Factorial => log_ratio,
    };
    sign * exp(m as f64 * ln(nu.abs()) + gauss + log_pref) * lag
}

/// `⟨n+m| e^{-2λ(a†-a)} |n⟩` as it follows from `f_m` under `conv`: the
/// square-root form is the element itself, the factorial form is an
/// operator coefficient so the element picks up `√((n+m)!/n!)`.
pub fn displaced_element(lambda: f64, n: usize, m: usize, conv: FFactorConvention) -> f64 {
    let f = f_factor(lambda, n, m, conv);
    match conv {
        FFactorConvention::SqrtNormalized => f,
        FFactorConvention::Factorial => {
            if m == 0 {
                f
            } else {
                f * exp(0.5 * ln_factorial_ratio(n + m, n))
            }
        }
    }
}

/// `⟨n| e^{α(a†-a)} |k⟩` for real `α`.
pub fn displaced_overlap(n: usize, k: usize, alpha: f64) -> f64 {
    if n < k {
        let parity = if (k - n) % 2 == 0 { 1.0 } else { -1.0 };
        return parity * displaced_overlap(k, n, alpha);
    }
    let d = n - k;
    let a2 = alpha * alpha;
    let lag = laguerre_unchecked(k, d, a2);
    if d == 0 {
        return exp(-0.5 * a2) * lag;
    }
    if alpha == 0.0 {
        return 0.0;
    }
    let sign = if alpha < 0.0 && d % 2 == 1 { -1.0 } else { 1.0 };
    let log_pref = d as f64 * ln(alpha.abs()) - 0.5 * ln_factorial_ratio(n, k) - 0.5 * a2;
    sign * exp(log_pref) * lag
}

/// The `(nmax+1) × (nmax+1)` block of `e^{α(a†-a)}` in the Fock basis.
pub fn displacement_matrix(alpha: f64, nmax: usize) -> Result<Matrix, Error> {
    if nmax < 1 {
        return Err(Error::Domain("displacement_matrix needs nmax >= 1"));
    }
    if !alpha.is_finite() {
        return Err(Error::Domain("displacement must be finite"));
    }
    Ok(Matrix::from_fn(nmax + 1, nmax + 1, |n, k| displaced_overlap(n, k, alpha)))
}

/// Displacement values used to calibrate the f-factor convention.
pub const CALIBRATION_LAMBDAS: [f64; 3] = [-0.3, -1.0, -2.5];

/// Picks the f-factor convention whose elements reproduce
/// [`displaced_overlap`] to `1e-9` for `n, m ≤ 15` at
/// [`CALIBRATION_LAMBDAS`]. Errors if neither or both do.
pub fn calibrate_convention() -> Result<FFactorConvention, Error> {
    let deviation = |conv| {
        let mut worst: f64 = 0.0;
        for &lambda in &CALIBRATION_LAMBDAS {
            for n in 0..=15 {
                for m in 0..=15 {
                    let reference = displaced_overlap(n + m, n, -2.0 * lambda);
                    let candidate = displaced_element(lambda, n, m, conv);
                    worst = worst.max((reference - candidate).abs());
                }
            }
        }
        worst
    };
    let sqrt_dev = deviation(FFactorConvention::SqrtNormalized);
    let factorial_dev = deviation(FFactorConvention::Factorial);
    match (sqrt_dev <= 1e-9, factorial_dev <= 1e-9) {
        (true, false) => Ok(FFactorConvention::SqrtNormalized),
        (false, true) => Ok(FFactorConvention::Factorial),
        _ => Err(Error::Convention { max_deviation: sqrt_dev.min(factorial_dev) }),
    }
}

/// Coherent-state amplitude `α^n e^{-α²/2} / √(n!)`.
pub fn coherent_amplitude(alpha: f64, n: usize) -> f64 {
    displaced_overlap(n, 0, alpha)
}
