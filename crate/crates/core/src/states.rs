//! Product-basis bookkeeping and trial-state construction.
//!
//! Both spin axes use the same interleaved layout: `|s, n⟩` sits at index
//! `2n + 1` for `s = +` and `2n` for `s = -`, so a state truncated at `nmax`
//! has `2(nmax + 1)` components.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{dot, Matrix};
use crate::math::sqrt;
use crate::model::Sign;
use crate::specfun::displacement_matrix;
use crate::Error;

#[inline]
pub fn basis_index(sign: Sign, n: usize) -> usize {
    2 * n + matches!(sign, Sign::Plus) as usize
}

#[inline]
pub fn basis_label(index: usize) -> (Sign, usize) {
    let sign = if index % 2 == 1 { Sign::Plus } else { Sign::Minus };
    (sign, index / 2)
}

pub fn dimension(nmax: usize) -> usize {
    2 * (nmax + 1)
}

/// Re-expresses x-axis amplitudes in the z-axis basis using
/// `|±x⟩ = (|+z⟩ ± |-z⟩)/√2`. The map is its own inverse.
pub fn x_to_z(x_amps: &[f64]) -> Vec<f64> {
    swap_axis(x_amps)
}

pub fn z_to_x(z_amps: &[f64]) -> Vec<f64> {
    swap_axis(z_amps)
}

fn swap_axis(v: &[f64]) -> Vec<f64> {
    assert!(v.len() % 2 == 0, "spin-Fock vectors have even length");
    let r = 1.0 / sqrt(2.0);
    let mut out = vec![0.0; v.len()];
    for n in 0..v.len() / 2 {
        let minus = v[2 * n];
        let plus = v[2 * n + 1];
        out[2 * n + 1] = r * (plus + minus);
        out[2 * n] = r * (plus - minus);
    }
    out
}

/// `U† |ψ̃⟩` with `U = e^{λσz(a - a†)}`, returned in the z-axis product basis
/// truncated at `nmax`. `components` lists x-axis amplitudes `(s, n, c)`.
///
/// On spin `±z` the inverse transform is the displacement `e^{±λ(a† - a)}`,
/// so `|s_x, n⟩ ↦ (D(λ)|n⟩|+z⟩ + s D(-λ)|n⟩|-z⟩)/√2`.
pub fn untransform(lambda: f64, components: &[(Sign, usize, f64)], nmax: usize) -> Result<Vec<f64>, Error> {
    if components.iter().any(|&(_, n, _)| n > nmax) {
        return Err(Error::Domain("component beyond truncation"));
    }
    let d_plus = displacement_matrix(lambda, nmax.max(1))?;
    let d_minus = displacement_matrix(-lambda, nmax.max(1))?;
    let r = 1.0 / sqrt(2.0);
    let mut out = vec![0.0; dimension(nmax)];
    for &(s, n, c) in components {
        for m in 0..=nmax {
            out[basis_index(Sign::Plus, m)] += r * c * d_plus[(m, n)];
            out[basis_index(Sign::Minus, m)] += r * c * s.value() * d_minus[(m, n)];
        }
    }
    Ok(out)
}

/// Truncation that keeps a state displaced by `λ` from Fock level `n`
/// accurate to well below `1e-12`.
pub fn safe_nmax(lambda: f64, n: usize) -> usize {
    let spread = sqrt(n as f64) + 1.5 * lambda.abs() + 7.0;
    (spread * spread) as usize + 10
}

/// `⟨a†a⟩ / ⟨ψ|ψ⟩` for a vector in the interleaved layout (either axis).
pub fn mean_photon(v: &[f64]) -> f64 {
    let norm2 = dot(v, v);
    let weighted: f64 = v.iter().enumerate().map(|(i, x)| (i / 2) as f64 * x * x).sum();
    weighted / norm2
}

/// `⟨ψ|A|ψ⟩ / ⟨ψ|ψ⟩`.
pub fn expectation(a: &Matrix, v: &[f64]) -> f64 {
    dot(v, &a.mul_vec(v)) / dot(v, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm;

    #[test]
    fn layout_roundtrip() {
        for i in 0..40 {
            let (s, n) = basis_label(i);
            assert_eq!(basis_index(s, n), i);
        }
    }

    #[test]
    fn axis_change_is_involution() {
        let v: Vec<f64> = (0..10).map(|i| libm::sin(i as f64 * 0.37)).collect();
        let back = z_to_x(&x_to_z(&v));
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn untransformed_ground_trial_is_cat_state() {
        // U†|-x, 0⟩ = (|+z, λ⟩ - |-z, -λ⟩)/√2
        let lambda = -0.7;
        let nmax = safe_nmax(lambda, 0);
        let v = untransform(lambda, &[(Sign::Minus, 0, 1.0)], nmax).unwrap();
        assert!((norm(&v) - 1.0).abs() < 1e-13);
        let r = 1.0 / sqrt(2.0);
        for n in 0..10 {
            let coh = crate::specfun::coherent_amplitude(lambda, n);
            let coh_neg = crate::specfun::coherent_amplitude(-lambda, n);
            assert!((v[basis_index(Sign::Plus, n)] - r * coh).abs() < 1e-14);
            assert!((v[basis_index(Sign::Minus, n)] + r * coh_neg).abs() < 1e-14);
        }
        assert!((mean_photon(&v) - lambda * lambda).abs() < 1e-12);
    }
}
