//! Closed-form baselines (RWA, AA, GRWA, GVM) and the transformed-frame
//! Hamiltonian `H̃ = U H U†`, `U = e^{λσz(a - a†)}`.
//!
//! Expanding the transform gives
//!
//! ```text
//! H̃ = ω a†a + (ωλ + g) σz (a + a†) + ωλ² + 2gλ
//!     + (Ω/2) { σx cosh[2λ(a - a†)] + iσy sinh[2λ(a - a†)] }
//! ```
//!
//! and every matrix element on `|±x, n⟩` reduces to a displaced-Fock overlap.
//! [`tilde_element`] evaluates those in closed form; [`tilde_matrix_numeric`]
//! conjugates the Fock-space matrix of `H` with displacement matrices instead.
//! The numeric route is the reference, the closed form is what the
//! variational engines evaluate in their inner loops.

use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::math::{atan2, cos, exp, hypot, sin, sqrt};
use crate::model::{ModelParams, Sign};
use crate::optimize::bisect;
use crate::specfun::{displaced_element, displacement_matrix, f_factor, FFactorConvention};
use crate::states::{basis_index, basis_label, dimension, safe_nmax};
use crate::{exact, Error};

// --- RWA -------------------------------------------------------------------

/// Jaynes-Cummings ladder `(N - 1/2)ω ± √((ω-Ω)²/4 + N g²)`.
pub fn rwa_spectrum(params: &ModelParams, n: usize, sign: Sign) -> Result<f64, Error> {
    if n < 1 {
        return Err(Error::Domain("RWA ladder index starts at N = 1"));
    }
    let detuning = params.omega - params.big_omega;
    let root = sqrt(0.25 * detuning * detuning + n as f64 * params.g * params.g);
    Ok((n as f64 - 0.5) * params.omega + sign.value() * root)
}

pub fn rwa_ground_energy(params: &ModelParams) -> f64 {
    -0.5 * params.big_omega
}

/// The model with the counter-rotating terms removed, on the x-spin basis:
/// only `|+x, N-1⟩ ↔ |-x, N⟩` couplings survive.
pub fn build_rwa_hamiltonian(params: &ModelParams, nmax: usize) -> Result<Matrix, Error> {
    if nmax < 2 {
        return Err(Error::Domain("Fock truncation needs nmax >= 2"));
    }
    let dim = dimension(nmax);
    let mut h = Matrix::zeros(dim, dim);
    for i in 0..dim {
        let (s, n) = basis_label(i);
        h[(i, i)] = params.omega * n as f64 + 0.5 * params.big_omega * s.value();
    }
    for n in 1..=nmax {
        let i = basis_index(Sign::Plus, n - 1);
        let j = basis_index(Sign::Minus, n);
        let c = params.g * sqrt(n as f64);
        h[(i, j)] = c;
        h[(j, i)] = c;
    }
    Ok(h)
}

// --- transformed frame -----------------------------------------------------

/// `⟨n1| e^{ν(a†-a)} |n2⟩` with `ν = -2λ`, assembled from f-factors.
fn displaced(lambda: f64, n1: usize, n2: usize, conv: FFactorConvention) -> f64 {
    if n1 >= n2 {
        displaced_element(lambda, n2, n1 - n2, conv)
    } else {
        let sign = if (n2 - n1) % 2 == 0 { 1.0 } else { -1.0 };
        sign * displaced_element(lambda, n1, n2 - n1, conv)
    }
}

/// `⟨s1_x, n1| H̃(λ) |s2_x, n2⟩` in closed form.
pub fn tilde_element(
    params: &ModelParams,
    lambda: f64,
    bra: (Sign, usize),
    ket: (Sign, usize),
    conv: FFactorConvention,
) -> f64 {
    let (s1, n1) = bra;
    let (s2, n2) = ket;
    let half = 0.5 * params.big_omega;
    let shift = params.omega * lambda + params.g;
    let mut h = 0.0;
    if s1 == s2 {
        if n1 == n2 {
            h += params.omega * (n1 as f64 + lambda * lambda) + 2.0 * params.g * lambda;
        }
        if (n1 + n2) % 2 == 0 {
            h += half * s2.value() * displaced(lambda, n1, n2, conv);
        }
    } else {
        if n1 + 1 == n2 {
            h += shift * sqrt(n2 as f64);
        } else if n1 == n2 + 1 {
            h += shift * sqrt(n1 as f64);
        }
        if (n1 + n2) % 2 == 1 {
            h += half * s2.value() * displaced(lambda, n1, n2, conv);
        }
    }
    h
}

/// `H̃(λ)` on `|±x, n ≤ nmax⟩` from [`tilde_element`].
pub fn tilde_matrix_analytic(params: &ModelParams, lambda: f64, nmax: usize, conv: FFactorConvention) -> Matrix {
    let dim = dimension(nmax);
    let mut m = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..=i {
            let v = tilde_element(params, lambda, basis_label(i), basis_label(j), conv);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// `H̃(λ)` on `|±x, n ≤ nmax⟩` by conjugating the Fock matrix of `H` with
/// `U = e^{λσz(a - a†)}`. The product is formed on an internal truncation
/// large enough that the returned block carries no truncation error.
pub fn tilde_matrix_numeric(params: &ModelParams, lambda: f64, nmax: usize) -> Result<Matrix, Error> {
    if nmax < 2 {
        return Err(Error::Domain("Fock truncation needs nmax >= 2"));
    }
    let big = safe_nmax(lambda, nmax);
    let h = exact::build_hamiltonian(params, big)?;
    // on spin ±z, U is the displacement e^{∓λ(a† - a)}
    let d_plus = displacement_matrix(-lambda, big)?;
    let d_minus = displacement_matrix(lambda, big)?;
    let dim = dimension(nmax);
    let big_dim = dimension(big);
    // rows of U restricted to the kept block
    let u = Matrix::from_fn(dim, big_dim, |i, j| {
        let (si, ni) = basis_label(i);
        let (sj, nj) = basis_label(j);
        if si != sj {
            0.0
        } else if si == Sign::Plus {
            d_plus[(ni, nj)]
        } else {
            d_minus[(ni, nj)]
        }
    });
    let z = u.matmul(&h).matmul(&u.transpose());
    Ok(z_frame_to_x(&z))
}

// T Z Tᵀ with T the (symmetric, orthogonal) z -> x spin change.
fn z_frame_to_x(z: &Matrix) -> Matrix {
    let dim = z.rows();
    let r = 1.0 / sqrt(2.0);
    let t = Matrix::from_fn(dim, dim, |i, j| {
        if i / 2 != j / 2 {
            return 0.0;
        }
        let (si, _) = basis_label(i);
        let (sj, _) = basis_label(j);
        // |+x⟩ = (|+z⟩ + |-z⟩)/√2, |-x⟩ = (|+z⟩ - |-z⟩)/√2
        match (si, sj) {
            (Sign::Minus, Sign::Minus) => -r,
            _ => r,
        }
    });
    t.matmul(z).matmul(&t.transpose())
}

/// `H̃(λ)` on `|±x, n ≤ nmax⟩`, built numerically and checked entrywise
/// against the closed form on the inner `nmax/2` block. A disagreement above
/// `1e-8` is reported as [`Error::Convention`].
pub fn tilde_hamiltonian_matrix(params: &ModelParams, lambda: f64, nmax: usize) -> Result<Matrix, Error> {
    let numeric = tilde_matrix_numeric(params, lambda, nmax)?;
    let analytic = tilde_matrix_analytic(params, lambda, nmax, FFactorConvention::CALIBRATED);
    let inner = dimension(nmax / 2);
    let dev = numeric.submatrix(inner, inner).max_abs_diff(&analytic.submatrix(inner, inner));
    if dev > 1e-8 {
        return Err(Error::Convention { max_deviation: dev });
    }
    Ok(numeric)
}

// --- AA / GRWA -------------------------------------------------------------

/// `Nω + ωλ² + 2gλ ± (Ω/2) f_0(λ, N)`; at `λ = -g/ω` this is the adiabatic
/// approximation.
pub fn aa_energy(params: &ModelParams, lambda: f64, sign: Sign, n: usize) -> f64 {
    params.omega * (n as f64 + lambda * lambda)
        + 2.0 * params.g * lambda
        + sign.value() * 0.5 * params.big_omega * f_factor(lambda, n, 0, FFactorConvention::CALIBRATED)
}

/// Eigen-decomposition of the 2×2 block on `{|+x, N-1⟩, |-x, N⟩}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrwaBlockResult {
    pub n: usize,
    pub e_plus: f64,
    pub e_minus: f64,
    pub r_plus: f64,
    pub s_plus: f64,
    pub r_minus: f64,
    pub s_minus: f64,
    /// `⟨+x, N-1| H̃ |-x, N⟩`.
    pub off_diagonal: f64,
}

impl GrwaBlockResult {
    pub fn energy(&self, sign: Sign) -> f64 {
        match sign {
            Sign::Plus => self.e_plus,
            Sign::Minus => self.e_minus,
        }
    }

    /// `(R, S)` of the requested branch.
    pub fn amplitudes(&self, sign: Sign) -> (f64, f64) {
        match sign {
            Sign::Plus => (self.r_plus, self.s_plus),
            Sign::Minus => (self.r_minus, self.s_minus),
        }
    }
}

/// `⟨+x, N-1| H̃ |-x, N⟩ = (ωλ + g)√N + (Ω/2) f_1(λ, N-1)`.
pub fn grwa_off_diagonal(params: &ModelParams, lambda: f64, n: usize) -> f64 {
    tilde_element(
        params,
        lambda,
        (Sign::Plus, n - 1),
        (Sign::Minus, n),
        FFactorConvention::CALIBRATED,
    )
}

/// The GRWA block `N` at displacement `λ`. The diagonal is
/// `{E_AA^{+,N-1}, E_AA^{-,N}}`; the off-diagonal keeps the residual
/// `(ωλ + g)√N`, which vanishes at `λ = -g/ω`.
pub fn grwa_block(params: &ModelParams, lambda: f64, n: usize) -> Result<GrwaBlockResult, Error> {
    if n < 1 {
        return Err(Error::Domain("GRWA blocks start at N = 1"));
    }
    let a = aa_energy(params, lambda, Sign::Plus, n - 1);
    let b = aa_energy(params, lambda, Sign::Minus, n);
    let h = grwa_off_diagonal(params, lambda, n);
    let mean = 0.5 * (a + b);
    let half_gap = 0.5 * (a - b);
    let radius = hypot(half_gap, h);
    let theta = 0.5 * atan2(h, half_gap);
    let (c, s) = (cos(theta), sin(theta));
    Ok(GrwaBlockResult {
        n,
        e_plus: mean + radius,
        e_minus: mean - radius,
        r_plus: c,
        s_plus: s,
        r_minus: -s,
        s_minus: c,
        off_diagonal: h,
    })
}

/// `H̃` (numeric) truncated to the GRWA pattern: the diagonal plus the
/// `|+x, N-1⟩ ↔ |-x, N⟩` entries. In the interleaved layout those are the
/// adjacent pairs `(2N-1, 2N)`, so the result is block diagonal with the
/// isolated ground entry `E_AA^{-,0}` first.
pub fn grwa_matrix(params: &ModelParams, lambda: f64, nmax: usize) -> Result<Matrix, Error> {
    let full = tilde_hamiltonian_matrix(params, lambda, nmax)?;
    let dim = full.rows();
    let mut out = Matrix::zeros(dim, dim);
    for i in 0..dim {
        out[(i, i)] = full[(i, i)];
    }
    for n in 1..=nmax {
        let i = basis_index(Sign::Plus, n - 1);
        let j = basis_index(Sign::Minus, n);
        out[(i, j)] = full[(i, j)];
        out[(j, i)] = full[(j, i)];
    }
    Ok(out)
}

// --- GVM -------------------------------------------------------------------

/// Closed-form displacement `-(g/ω) / (1 + (Ω/ω) e^{-2g²/(ω+Ω)²})`.
pub fn gvm_lambda(params: &ModelParams) -> f64 {
    let (w, big, g) = (params.omega, params.big_omega, params.g);
    let damp = exp(-2.0 * g * g / ((w + big) * (w + big)));
    -(g / w) / (1.0 + (big / w) * damp)
}

/// `λ²ω + 2gλ - (Ω/2) e^{-2λ²}`.
pub fn gvm_ground_energy(params: &ModelParams, lambda: f64) -> f64 {
    lambda * lambda * params.omega + 2.0 * params.g * lambda
        - 0.5 * params.big_omega * exp(-2.0 * lambda * lambda)
}

/// Half the derivative of [`gvm_ground_energy`]: `ωλ + g + Ωλ e^{-2λ²}`.
pub fn gvm_stationarity(params: &ModelParams, lambda: f64) -> f64 {
    params.omega * lambda + params.g + params.big_omega * lambda * exp(-2.0 * lambda * lambda)
}

/// Stationary point of [`gvm_ground_energy`] on `[-g/ω, 0]` by bisection.
pub fn gvm_lambda_exact(params: &ModelParams) -> Result<f64, Error> {
    if params.g == 0.0 {
        return Ok(0.0);
    }
    bisect(|l| gvm_stationarity(params, l), params.lambda_aa(), 0.0, 1e-15)
}

/// GRWA energies of blocks `1..=n_max` as `(N, sign, energy)`, plus the
/// isolated ground level.
pub fn grwa_spectrum(params: &ModelParams, lambda: f64, n_max: usize) -> Result<Vec<(usize, Option<Sign>, f64)>, Error> {
    let mut out = Vec::with_capacity(2 * n_max + 1);
    out.push((0, None, aa_energy(params, lambda, Sign::Minus, 0)));
    for n in 1..=n_max {
        let b = grwa_block(params, lambda, n)?;
        out.push((n, Some(Sign::Minus), b.e_minus));
        out.push((n, Some(Sign::Plus), b.e_plus));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SymmetricEigen;

    fn p(omega: f64, g: f64) -> ModelParams {
        ModelParams::unit(omega, g).unwrap()
    }

    #[test]
    fn rwa_examples() {
        let params = p(1.0, 0.3);
        assert_eq!(rwa_ground_energy(&params), -0.5);
        assert!((rwa_spectrum(&params, 1, Sign::Plus).unwrap() - 0.8).abs() < 1e-15);
        assert!((rwa_spectrum(&params, 1, Sign::Minus).unwrap() - 0.2).abs() < 1e-15);
        assert!(rwa_spectrum(&params, 0, Sign::Plus).is_err());
        // g = 0 collapses onto the bare levels (N-1)ω + Ω/2 and Nω - Ω/2
        let free = p(0.6, 0.0);
        for n in 1..5 {
            let hi = rwa_spectrum(&free, n, Sign::Plus).unwrap();
            let lo = rwa_spectrum(&free, n, Sign::Minus).unwrap();
            let a = (n - 1) as f64 * 0.6 + 0.5;
            let b = n as f64 * 0.6 - 0.5;
            assert!((hi - a.max(b)).abs() < 1e-14 && (lo - a.min(b)).abs() < 1e-14);
        }
    }

    #[test]
    fn aa_examples() {
        let params = p(0.8, 0.5);
        let l = params.lambda_aa();
        let want = -0.25 / 0.8 - 0.5 * exp(-2.0 * 0.25 / 0.64);
        assert!((aa_energy(&params, l, Sign::Minus, 0) - want).abs() < 1e-15);
        let free = p(0.8, 0.0);
        for n in 0..5 {
            assert!((aa_energy(&free, 0.0, Sign::Plus, n) - (0.8 * n as f64 + 0.5)).abs() < 1e-15);
        }
        for lam in [-1.1, -0.3] {
            let split = aa_energy(&params, lam, Sign::Plus, 3) - aa_energy(&params, lam, Sign::Minus, 3);
            let mirrored = aa_energy(&params, -lam, Sign::Plus, 3) - aa_energy(&params, -lam, Sign::Minus, 3);
            assert!((split - mirrored).abs() < 1e-14);
            assert!((split - f_factor(lam, 3, 0, FFactorConvention::CALIBRATED)).abs() < 1e-14);
        }
    }

    #[test]
    fn tilde_matrix_routes_agree() {
        for (omega, g, lambda) in [(1.0, 0.7, -0.3), (0.5, 1.2, -1.0), (2.0, 1.5, -2.5)] {
            let params = p(omega, g);
            let numeric = tilde_matrix_numeric(&params, lambda, 30).unwrap();
            let analytic = tilde_matrix_analytic(&params, lambda, 30, FFactorConvention::CALIBRATED);
            assert!(numeric.max_abs_diff(&analytic) < 1e-9, "λ={lambda}");
            assert!(numeric.asymmetry() < 1e-12);
        }
    }

    #[test]
    fn factorial_convention_fails_the_numeric_check() {
        let params = p(1.0, 1.0);
        let numeric = tilde_matrix_numeric(&params, -1.0, 16).unwrap();
        let factorial = tilde_matrix_analytic(&params, -1.0, 16, FFactorConvention::Factorial);
        assert!(numeric.max_abs_diff(&factorial) > 1e-3);
    }

    #[test]
    fn tilde_at_zero_lambda_is_bare_hamiltonian() {
        let params = p(0.9, 0.4);
        let t = tilde_hamiltonian_matrix(&params, 0.0, 10).unwrap();
        for i in 0..t.rows() {
            let (s, n) = basis_label(i);
            assert!((t[(i, i)] - (0.9 * n as f64 + 0.5 * s.value())).abs() < 1e-12);
        }
        let i = basis_index(Sign::Plus, 2);
        let j = basis_index(Sign::Minus, 3);
        assert!((t[(i, j)] - 0.4 * sqrt(3.0)).abs() < 1e-12);
    }

    #[test]
    fn tilde_diagonal_is_aa_energy() {
        let params = p(1.3, 0.9);
        let l = params.lambda_aa();
        let t = tilde_hamiltonian_matrix(&params, l, 12).unwrap();
        for n in 0..6 {
            for s in [Sign::Plus, Sign::Minus] {
                let i = basis_index(s, n);
                assert!((t[(i, i)] - aa_energy(&params, l, s, n)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tilde_spectrum_matches_fock_spectrum() {
        let params = p(1.0, 0.8);
        let nmax = 60;
        let t = tilde_matrix_analytic(&params, -0.5, nmax, FFactorConvention::CALIBRATED);
        let a = SymmetricEigen::new(&t).unwrap();
        let b = SymmetricEigen::new(&exact::build_hamiltonian(&params, nmax).unwrap()).unwrap();
        for k in 0..20 {
            assert!((a.values[k] - b.values[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn grwa_block_examples() {
        let free = p(0.7, 0.0);
        let b = grwa_block(&free, 0.0, 2).unwrap();
        assert_eq!(b.off_diagonal, 0.0);
        let pairs = [(b.r_plus, b.s_plus), (b.r_minus, b.s_minus)];
        assert!(pairs.iter().all(|&(r, s)| (r.abs() == 1.0 && s == 0.0) || (r == 0.0 && s.abs() == 1.0)));

        let params = p(1.0, 0.6);
        for lambda in [-0.6, -0.2, 0.0] {
            for n in 1..5 {
                let b = grwa_block(&params, lambda, n).unwrap();
                let trace = aa_energy(&params, lambda, Sign::Plus, n - 1) + aa_energy(&params, lambda, Sign::Minus, n);
                assert!((b.e_plus + b.e_minus - trace).abs() < 1e-12);
                assert!((b.r_plus * b.r_plus + b.s_plus * b.s_plus - 1.0).abs() < 1e-12);
                assert!((b.r_minus * b.r_minus + b.s_minus * b.s_minus - 1.0).abs() < 1e-12);
                assert!((b.r_plus * b.r_minus + b.s_plus * b.s_minus).abs() < 1e-12);
                assert!(b.e_plus >= b.e_minus);
            }
        }
        assert!(grwa_block(&params, -0.3, 0).is_err());
    }

    #[test]
    fn grwa_residual_vanishes_at_aa_displacement() {
        let params = p(0.5, 1.0);
        let l = params.lambda_aa();
        for n in 1..6 {
            let want = 0.5 * f_factor(l, n - 1, 1, FFactorConvention::CALIBRATED);
            assert!((grwa_off_diagonal(&params, l, n) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn grwa_block_matches_numeric_subblock() {
        let params = p(0.5, 0.9);
        for lambda in [-1.8, -0.6] {
            let t = tilde_hamiltonian_matrix(&params, lambda, 20).unwrap();
            for n in 1..8 {
                let i = basis_index(Sign::Plus, n - 1);
                let j = basis_index(Sign::Minus, n);
                let sub = Matrix::from_fn(2, 2, |a, b| t[([i, j][a], [i, j][b])]);
                let eig = SymmetricEigen::new(&sub).unwrap();
                let blk = grwa_block(&params, lambda, n).unwrap();
                assert!((eig.values[0] - blk.e_minus).abs() < 1e-9);
                assert!((eig.values[1] - blk.e_plus).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn grwa_matrix_examples() {
        let params = p(1.0, 0.5);
        let l = params.lambda_aa();
        let m = grwa_matrix(&params, l, 12).unwrap();
        assert!((m[(0, 0)] - aa_energy(&params, l, Sign::Minus, 0)).abs() < 1e-12);
        for j in 1..m.cols() {
            assert_eq!(m[(0, j)], 0.0);
        }
        let free = grwa_matrix(&p(1.0, 0.0), 0.0, 6).unwrap();
        for i in 0..free.rows() {
            for j in 0..free.cols() {
                if i != j {
                    assert!(free[(i, j)].abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn gvm_examples() {
        assert_eq!(gvm_lambda(&p(1.0, 0.0)), 0.0);
        let l = gvm_lambda(&p(1.0, 1.0));
        assert!((l + 1.0 / (1.0 + exp(-0.5))).abs() < 1e-15);
        assert!((l + 0.62246).abs() < 1e-5);
        let strong = p(1.0, 50.0);
        assert!((gvm_lambda(&strong) / strong.lambda_aa() - 1.0).abs() < 1e-12);

        let params = p(1.0, 1.0);
        assert!((gvm_ground_energy(&params, 0.0) + 0.5).abs() < 1e-15);
        let l_aa = params.lambda_aa();
        assert!((gvm_ground_energy(&params, l_aa) - aa_energy(&params, l_aa, Sign::Minus, 0)).abs() < 1e-15);
        // direct substitution at λ = -0.62246
        let lam: f64 = -0.62246;
        let want = lam * lam + 2.0 * lam - 0.5 * exp(-2.0 * lam * lam);
        assert!((gvm_ground_energy(&params, lam) - want).abs() < 1e-15);
    }

    #[test]
    fn gvm_exact_root() {
        assert_eq!(gvm_lambda_exact(&p(1.0, 0.0)).unwrap(), 0.0);
        for (omega, g) in [(1.0, 1.0), (2.0, 0.5), (0.5, 0.3), (1.0, 0.05)] {
            let params = p(omega, g);
            let l = gvm_lambda_exact(&params).unwrap();
            assert!(gvm_stationarity(&params, l).abs() < 1e-10);
            assert!(gvm_ground_energy(&params, l) <= gvm_ground_energy(&params, gvm_lambda(&params)) + 1e-15);
        }
    }

    #[test]
    fn gvm_forms_agree_at_weak_coupling() {
        let params = p(1.0, 1e-4);
        let weak = -1e-4 / 2.0;
        let a = gvm_lambda(&params);
        let b = gvm_lambda_exact(&params).unwrap();
        assert!((a / weak - 1.0).abs() < 1e-3);
        assert!((b / weak - 1.0).abs() < 1e-3);
    }
}
