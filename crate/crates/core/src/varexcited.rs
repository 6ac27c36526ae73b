//! Excited-state variational method.
//!
//! The trial for label `(±, N)` is the GRWA block eigenvector
//! `R |+x, N-1⟩ + S |-x, N⟩` at a free displacement `λ`. Its `K` sums the
//! first-order admixture of the other GRWA states through the couplings the
//! GRWA drops, and `λ` is chosen where `K` is smallest.

use alloc::vec::Vec;

use crate::approx::{aa_energy, grwa_block, tilde_element, tilde_matrix_numeric, GrwaBlockResult};
use crate::exact::{overlap_match, ExactSolution, OverlapMatch};
use crate::math::sqrt;
use crate::model::{ModelParams, Sign};
use crate::optimize::linspace;
use crate::specfun::FFactorConvention;
use crate::states::{basis_index, mean_photon, safe_nmax, untransform};
use crate::varground::{
    lambda_effective, projection_p, refined_minima, scan_bracket, shell_window, tail_threshold, Regime,
    DEGENERACY_RTOL, MIN_SHELLS, SCAN_POINTS,
};
use crate::Error;

const CONV: FFactorConvention = FFactorConvention::CALIBRATED;
/// Squared couplings lost to the degeneracy guard beyond this mark the sum
/// as unreliable.
pub const DROPPED_WEIGHT_LIMIT: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExcitedTrial {
    pub n: usize,
    pub sign: Sign,
    pub lambda: f64,
    pub r: f64,
    pub s: f64,
}

impl ExcitedTrial {
    /// `(label, amplitude)` pairs on the x-spin basis of the transformed frame.
    pub fn components(&self) -> [(Sign, usize, f64); 2] {
        [(Sign::Plus, self.n - 1, self.r), (Sign::Minus, self.n, self.s)]
    }
}

pub fn excited_trial(params: &ModelParams, lambda: f64, n: usize, sign: Sign) -> Result<ExcitedTrial, Error> {
    if n < 1 {
        return Err(Error::Domain("excited labels start at N = 1"));
    }
    let block = grwa_block(params, lambda, n)?;
    let (r, s) = block.amplitudes(sign);
    Ok(ExcitedTrial { n, sign, lambda, r, s })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExcitedK {
    pub k: f64,
    pub shells: usize,
    pub converged: bool,
    pub dropped: usize,
    /// Sum of squared numerators of the dropped terms.
    pub dropped_weight: f64,
    pub valid: bool,
}

// A GRWA basis state: block 0 is |-x, 0⟩ alone.
#[derive(Clone, Copy)]
struct BasisState {
    energy: f64,
    r: f64,
    s: f64,
}

fn block_states(params: &ModelParams, lambda: f64, m: usize) -> Result<Vec<BasisState>, Error> {
    if m == 0 {
        let energy = aa_energy(params, lambda, Sign::Minus, 0);
        return Ok(alloc::vec![BasisState { energy, r: 0.0, s: 1.0 }]);
    }
    let b: GrwaBlockResult = grwa_block(params, lambda, m)?;
    Ok(alloc::vec![
        BasisState { energy: b.e_minus, r: b.r_minus, s: b.s_minus },
        BasisState { energy: b.e_plus, r: b.r_plus, s: b.s_plus },
    ])
}

// ⟨Ψ_M| H̃ |Ψ_N⟩ between different blocks.
fn cross_element(params: &ModelParams, lambda: f64, m: usize, bra: BasisState, trial: &ExcitedTrial) -> f64 {
    let el = |a: (Sign, usize), b: (Sign, usize)| tilde_element(params, lambda, a, b, CONV);
    let n = trial.n;
    let ket = [((Sign::Plus, n - 1), trial.r), ((Sign::Minus, n), trial.s)];
    let mut bras = [((Sign::Minus, m), bra.s), ((Sign::Plus, 0), 0.0)];
    if m > 0 {
        bras[1] = ((Sign::Plus, m - 1), bra.r);
    }
    let mut total = 0.0;
    for (b, cb) in bras {
        if cb == 0.0 {
            continue;
        }
        for (k, ck) in ket {
            total += cb * ck * el(b, k);
        }
    }
    total
}

/// `K = Σ' c²_{±,M}` over the GRWA basis at the trial's `λ`, with
/// `c = ⟨Ψ_M| ΔH̃ |Ψ_N⟩ / (E_M - E_N)` and `ΔH̃ = H̃ - H̃_GRWA`.
/// Only blocks of the trial's parity couple. The tail rule is that of
/// [`crate::varground::k_of_lambda`].
pub fn excited_k(params: &ModelParams, trial: &ExcitedTrial, m_max: usize) -> Result<ExcitedK, Error> {
    if m_max < MIN_SHELLS {
        return Err(Error::Domain("K needs m_max >= 4"));
    }
    let lambda = trial.lambda;
    let own = block_states(params, lambda, trial.n)?;
    let e_trial = match trial.sign {
        Sign::Minus => own[0].energy,
        Sign::Plus => own[1].energy,
    };
    let guard = DEGENERACY_RTOL * params.big_omega;
    let (start, cap) = shell_window(lambda, trial.n, m_max);
    let mut k = 0.0;
    let mut dropped = 0;
    let mut dropped_weight = 0.0;
    let mut quiet = 0;
    let mut m = trial.n % 2;
    while m <= cap {
        if m != trial.n {
            let mut shell = 0.0;
            for state in block_states(params, lambda, m)? {
                let num = cross_element(params, lambda, m, state, trial);
                let den = state.energy - e_trial;
                if den.abs() < guard {
                    dropped += 1;
                    dropped_weight += num * num;
                    continue;
                }
                let c = num / den;
                shell += c * c;
            }
            k += shell;
            if m > trial.n {
                quiet = if shell < tail_threshold(k) { quiet + 1 } else { 0 };
                if m >= start && quiet >= 2 {
                    return Ok(ExcitedK {
                        k,
                        shells: m,
                        converged: true,
                        dropped,
                        dropped_weight,
                        valid: dropped_weight <= DROPPED_WEIGHT_LIMIT,
                    });
                }
            }
        }
        m += 2;
    }
    Ok(ExcitedK { k, shells: cap, converged: false, dropped, dropped_weight, valid: false })
}

/// `⟨Ψ̃|H̃|Ψ̃⟩` from the numerically conjugated `H̃` on the trial's support.
pub fn excited_energy(params: &ModelParams, trial: &ExcitedTrial) -> Result<f64, Error> {
    let h = tilde_matrix_numeric(params, trial.lambda, trial.n.max(2))?;
    let a = basis_index(Sign::Plus, trial.n - 1);
    let b = basis_index(Sign::Minus, trial.n);
    Ok(trial.r * trial.r * h[(a, a)] + trial.s * trial.s * h[(b, b)] + 2.0 * trial.r * trial.s * h[(a, b)])
}

/// The trial mapped back to the lab frame on the z-spin product basis.
pub fn trial_product_vector(trial: &ExcitedTrial, nmax: usize) -> Result<Vec<f64>, Error> {
    untransform(trial.lambda, &trial.components(), nmax)
}

/// `⟨a†a⟩` of the trial, computed in the lab frame.
pub fn excited_mean_photon(trial: &ExcitedTrial) -> Result<f64, Error> {
    let v = trial_product_vector(trial, safe_nmax(trial.lambda, trial.n))?;
    Ok(mean_photon(&v))
}

/// Transformed-frame form `R²(N-1) + S²N + λ² + 2RSλ√N` of
/// [`excited_mean_photon`].
pub fn excited_mean_photon_closed(trial: &ExcitedTrial) -> f64 {
    let (r, s, l, n) = (trial.r, trial.s, trial.lambda, trial.n as f64);
    r * r * (n - 1.0) + s * s * n + l * l + 2.0 * r * s * l * sqrt(n)
}

/// Large-coupling coefficient `F` with `K ≈ F (ωλ + g)²` near `λ = -g/ω`.
///
/// There the dropped couplings reduce to `(ωλ + g)` times
/// `√(N-1)` between `|+x, N-1⟩` and `|-x, N-2⟩` (block `N-2`) and
/// `√(N+1)` between `|-x, N⟩` and `|+x, N+1⟩` (block `N+2`), so
///
/// ```text
/// F = R²(N-1) Σ_± S²_{N-2,±}/(E_{N-2,±} - E)² + S²(N+1) Σ_± R²_{N+2,±}/(E_{N+2,±} - E)²
/// ```
pub fn f_limit(params: &ModelParams, n: usize, sign: Sign, lambda: f64) -> Result<f64, Error> {
    let trial = excited_trial(params, lambda, n, sign)?;
    let own = block_states(params, lambda, n)?;
    let e = match sign {
        Sign::Minus => own[0].energy,
        Sign::Plus => own[1].energy,
    };
    let guard = DEGENERACY_RTOL * params.big_omega;
    let mut f = 0.0;
    if n >= 2 {
        for st in block_states(params, lambda, n - 2)? {
            let den = st.energy - e;
            if den.abs() < guard {
                return Err(Error::DegenerateDenominator);
            }
            f += trial.r * trial.r * (n - 1) as f64 * st.s * st.s / (den * den);
        }
    }
    for st in block_states(params, lambda, n + 2)? {
        let den = st.energy - e;
        if den.abs() < guard {
            return Err(Error::DegenerateDenominator);
        }
        f += trial.s * trial.s * (n + 1) as f64 * st.r * st.r / (den * den);
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExcitedResult {
    pub label: (Sign, usize),
    pub lambda_opt: f64,
    pub k_at_opt: f64,
    pub p_at_opt: f64,
    pub energy: f64,
    pub mean_photon: f64,
    pub r: f64,
    pub s: f64,
    pub regime: Regime,
    pub valid: bool,
    /// Exact eigenstate of largest overlap, when a solution was supplied.
    pub matched: Option<OverlapMatch>,
}

/// Minimizes [`excited_k`] over the ground-state scan bracket with the same
/// grid-then-refine protocol: one minimum is used as is, two are combined
/// with [`lambda_effective`], more mark the result invalid.
pub fn excited_solve(
    params: &ModelParams,
    n: usize,
    sign: Sign,
    exact: Option<&ExactSolution>,
) -> Result<ExcitedResult, Error> {
    if n < 1 {
        return Err(Error::Domain("excited labels start at N = 1"));
    }
    let k_at = |lambda: f64| -> Result<ExcitedK, Error> {
        let trial = excited_trial(params, lambda, n, sign)?;
        excited_k(params, &trial, MIN_SHELLS)
    };
    let (lambda_opt, regime, mut valid) = if params.g == 0.0 {
        (0.0, Regime::OneMinimum, true)
    } else {
        let (lo, hi) = scan_bracket(params);
        let grid = linspace(lo, hi, SCAN_POINTS);
        let mut values = Vec::with_capacity(grid.len());
        let mut clean = true;
        for &l in &grid {
            let kv = k_at(l)?;
            clean &= kv.converged;
            values.push(kv.k);
        }
        let minima = refined_minima(&grid, &values, |l| k_at(l).map(|kv| kv.k).unwrap_or(f64::INFINITY));
        let regime = if clean { Regime::from_count(minima.len()) } else { Regime::MultiMinimum };
        let lambda = match regime {
            Regime::OneMinimum => minima[0].0,
            Regime::TwoMinimum => lambda_effective(minima[0].0, minima[0].1, minima[1].0, minima[1].1)?,
            Regime::MultiMinimum => {
                minima.iter().copied().fold((0.0, f64::INFINITY), |b, m| if m.1 < b.1 { m } else { b }).0
            }
        };
        (lambda, regime, regime != Regime::MultiMinimum)
    };
    let trial = excited_trial(params, lambda_opt, n, sign)?;
    let kv = excited_k(params, &trial, MIN_SHELLS)?;
    valid &= kv.valid;
    let matched = match exact {
        Some(sol) => {
            let v = trial_product_vector(&trial, sol.nmax_used.max(safe_nmax(lambda_opt, n)))?;
            Some(overlap_match(sol, &v)?)
        }
        None => None,
    };
    Ok(ExcitedResult {
        label: (sign, n),
        lambda_opt,
        k_at_opt: kv.k,
        p_at_opt: projection_p(kv.k)?,
        energy: excited_energy(params, &trial)?,
        mean_photon: excited_mean_photon(&trial)?,
        r: trial.r,
        s: trial.s,
        regime,
        valid,
        matched,
    })
}
