//! Ground-state variational method.
//!
//! The trial state is `U†|-x, 0⟩ = (|+z, λ⟩ - |-z, -λ⟩)/√2`. First-order
//! perturbation theory in `ΔH̃ = H̃ - H̃_AA` around it gives coefficients
//! `c_{±,N}`; their squared sum `K(λ)` measures how far the trial is from
//! the true ground state, and `λ` is chosen where `K` is smallest.

use alloc::vec::Vec;

use crate::approx::{aa_energy, gvm_ground_energy, tilde_element};
use crate::math::{ceil, sqrt};
use crate::model::{ModelParams, Sign};
use crate::optimize::{golden_section, grid_local_minima, linspace};
use crate::specfun::FFactorConvention;
use crate::Error;

/// Smallest shell count accepted by [`coefficients_c`] and [`k_of_lambda`].
pub const MIN_SHELLS: usize = 4;
/// Shell budget beyond the Poisson window of the displaced states.
pub const SHELL_BUDGET: usize = 64;
pub const TAIL_RTOL: f64 = 1e-12;
pub const TAIL_ATOL: f64 = 1e-16;
/// Denominators below `DEGENERACY_RTOL · Ω` are dropped.
pub const DEGENERACY_RTOL: f64 = 1e-10;
pub const SCAN_POINTS: usize = 2001;
pub const REFINE_TOL: f64 = 1e-10;

const CONV: FFactorConvention = FFactorConvention::CALIBRATED;

/// Shell range for a perturbative sum around a state in shell `offset`.
///
/// The couplings out of a state displaced by `ν = 2|λ|` follow a Poisson
/// profile of mean `ν²`, so the tail test only starts past that mode and the
/// cap leaves eight standard deviations plus [`SHELL_BUDGET`] on top.
pub(crate) fn shell_window(lambda: f64, offset: usize, m_max: usize) -> (usize, usize) {
    let nu = 2.0 * lambda.abs();
    let mode = ceil(nu * nu) as usize;
    let start = m_max.max(MIN_SHELLS).max(offset + mode);
    let cap = SHELL_BUDGET + offset + ceil(nu * nu + 8.0 * nu) as usize;
    (start, cap.max(start))
}

pub(crate) fn tail_threshold(total: f64) -> f64 {
    (TAIL_RTOL * total).max(TAIL_ATOL)
}

/// A perturbative sum with its bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KValue {
    pub k: f64,
    /// Highest shell included.
    pub shells: usize,
    pub converged: bool,
    /// Terms dropped by the degeneracy guard.
    pub dropped: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coefficient {
    pub sign: Sign,
    pub n: usize,
    pub value: f64,
}

/// Label of the parity-allowed partner of `|-x, 0⟩` in shell `n`.
fn allowed_sign(n: usize) -> Sign {
    if n % 2 == 1 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

// Some(c) for a kept term, None when the degeneracy guard drops it.
fn ground_term(params: &ModelParams, lambda: f64, sign: Sign, n: usize) -> Option<f64> {
    if sign != allowed_sign(n) {
        return Some(0.0);
    }
    let numerator = tilde_element(params, lambda, (sign, n), (Sign::Minus, 0), CONV);
    let denominator = aa_energy(params, lambda, sign, n) - gvm_ground_energy(params, lambda);
    if denominator.abs() < DEGENERACY_RTOL * params.big_omega {
        return None;
    }
    Some(numerator / denominator)
}

/// `c_{±,N}` for `1 ≤ N ≤ m_max` and `(+, 0)`, in shell order with `-`
/// before `+`. Parity-forbidden entries are zero; dropped ones are omitted.
pub fn coefficients_c(params: &ModelParams, lambda: f64, m_max: usize) -> Result<Vec<Coefficient>, Error> {
    if m_max < MIN_SHELLS {
        return Err(Error::Domain("coefficients need m_max >= 4"));
    }
    let mut out = Vec::with_capacity(2 * m_max + 1);
    for n in 0..=m_max {
        for sign in [Sign::Minus, Sign::Plus] {
            if n == 0 && sign == Sign::Minus {
                continue;
            }
            if let Some(value) = ground_term(params, lambda, sign, n) {
                out.push(Coefficient { sign, n, value });
            }
        }
    }
    Ok(out)
}

/// `c²_{+,1}`, the leading term of `K`.
pub fn leading_c2(params: &ModelParams, lambda: f64) -> f64 {
    let c = ground_term(params, lambda, Sign::Plus, 1).unwrap_or(0.0);
    c * c
}

/// `K(λ) = Σ' c²_{±,N}`, summed until two consecutive shells fall below
/// `max(1e-12·K, 1e-16)`. `m_max` is the minimum number of shells.
pub fn k_of_lambda(params: &ModelParams, lambda: f64, m_max: usize) -> Result<KValue, Error> {
    if m_max < MIN_SHELLS {
        return Err(Error::Domain("K needs m_max >= 4"));
    }
    let (start, cap) = shell_window(lambda, 0, m_max);
    let mut k = 0.0;
    let mut dropped = 0;
    let mut quiet = 0;
    for n in 1..=cap {
        let term = match ground_term(params, lambda, allowed_sign(n), n) {
            Some(c) => c * c,
            None => {
                dropped += 1;
                0.0
            }
        };
        k += term;
        quiet = if term < tail_threshold(k) { quiet + 1 } else { 0 };
        if n >= start && quiet >= 2 {
            return Ok(KValue { k, shells: n, converged: true, dropped });
        }
    }
    Ok(KValue { k, shells: cap, converged: false, dropped })
}

/// `P = (1 + K)^{-1/2}`.
pub fn projection_p(k: f64) -> Result<f64, Error> {
    if !(k >= 0.0) {
        return Err(Error::Domain("K must be non-negative"));
    }
    Ok(1.0 / sqrt(1.0 + k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    OneMinimum,
    TwoMinimum,
    MultiMinimum,
}

impl Regime {
    pub fn from_count(count: usize) -> Self {
        match count {
            0 | 1 => Regime::OneMinimum,
            2 => Regime::TwoMinimum,
            _ => Regime::MultiMinimum,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::OneMinimum => "one_minimum",
            Regime::TwoMinimum => "two_minimum",
            Regime::MultiMinimum => "multi_minimum",
        }
    }
}

impl core::fmt::Display for Regime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LandscapeResult {
    pub lambda_grid: Vec<f64>,
    pub k_values: Vec<f64>,
    /// `c²` of `(+,1), (-,2), (+,3), (-,4)` at each grid point.
    pub components: Vec<[f64; 4]>,
    /// Refined `(λ, K)` pairs, sorted by `λ`.
    pub minima: Vec<(f64, f64)>,
    pub classification: Regime,
    /// False when some grid point's tail failed to converge.
    pub converged: bool,
    pub dropped: usize,
}

impl LandscapeResult {
    /// The minimum with the smallest `K`.
    pub fn global_minimum(&self) -> (f64, f64) {
        self.minima
            .iter()
            .copied()
            .fold((0.0, f64::INFINITY), |best, m| if m.1 < best.1 { m } else { best })
    }
}

/// Grid minima of `values` refined by golden section on their neighbouring
/// cells. Without an interior minimum the grid argmin is returned as is.
pub(crate) fn refined_minima(grid: &[f64], values: &[f64], mut f: impl FnMut(f64) -> f64) -> Vec<(f64, f64)> {
    let prefer = grid.len() - 1;
    let idx = grid_local_minima(values, prefer);
    if idx.is_empty() {
        let mut best = prefer;
        for i in (0..grid.len()).rev() {
            if values[i] < values[best] {
                best = i;
            }
        }
        return alloc::vec![(grid[best], values[best])];
    }
    let mut out: Vec<(f64, f64)> = idx
        .into_iter()
        .map(|i| golden_section(&mut f, grid[i - 1], grid[i + 1], REFINE_TOL))
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Evaluates `K` on a uniform grid and classifies its minima.
pub fn scan_landscape(params: &ModelParams, lambda_lo: f64, lambda_hi: f64, points: usize) -> Result<LandscapeResult, Error> {
    if !(lambda_lo < lambda_hi && lambda_hi <= 0.0) {
        return Err(Error::Domain("scan bracket must satisfy lo < hi <= 0"));
    }
    if points < 101 {
        return Err(Error::Domain("scan needs at least 101 points"));
    }
    let grid = linspace(lambda_lo, lambda_hi, points);
    let mut k_values = Vec::with_capacity(points);
    let mut components = Vec::with_capacity(points);
    let mut converged = true;
    let mut dropped = 0;
    for &lambda in &grid {
        let kv = k_of_lambda(params, lambda, MIN_SHELLS)?;
        converged &= kv.converged;
        dropped += kv.dropped;
        k_values.push(kv.k);
        let mut comp = [0.0; 4];
        for (slot, n) in comp.iter_mut().zip(1..) {
            let c = ground_term(params, lambda, allowed_sign(n), n).unwrap_or(0.0);
            *slot = c * c;
        }
        components.push(comp);
    }
    let minima = refined_minima(&grid, &k_values, |l| {
        k_of_lambda(params, l, MIN_SHELLS).map(|kv| kv.k).unwrap_or(f64::INFINITY)
    });
    let classification = if converged {
        Regime::from_count(minima.len())
    } else {
        Regime::MultiMinimum
    };
    Ok(LandscapeResult {
        lambda_grid: grid,
        k_values,
        components,
        minima,
        classification,
        converged,
        dropped,
    })
}

/// `(k_b λ_a + k_a λ_b) / (k_a + k_b)`: each minimum weighted by the other's
/// `K`, so the deeper one dominates.
pub fn lambda_effective(lambda_a: f64, k_a: f64, lambda_b: f64, k_b: f64) -> Result<f64, Error> {
    if !(k_a >= 0.0 && k_b >= 0.0) {
        return Err(Error::Domain("K weights must be non-negative"));
    }
    if k_a == 0.0 && k_b == 0.0 {
        return Err(Error::DegenerateInput("both K weights vanish"));
    }
    Ok((k_b * lambda_a + k_a * lambda_b) / (k_a + k_b))
}

/// `(weak, strong)` displacement asymptotes `(-g/(ω+Ω), -g/ω)`.
pub fn lambda_limits(params: &ModelParams) -> (f64, f64) {
    (-params.g / (params.omega + params.big_omega), -params.g / params.omega)
}

/// `λ²ω + 2gλ - (Ω/2) e^{-2λ²}`.
pub fn ground_energy(params: &ModelParams, lambda: f64) -> f64 {
    gvm_ground_energy(params, lambda)
}

/// `⟨a†a⟩ = λ²`.
pub fn ground_mean_photon(lambda: f64) -> f64 {
    lambda * lambda
}

/// The search interval `[min(1.25·λ_s, λ_s - 0.5), 0]`, `λ_s = -g/ω`.
pub fn scan_bracket(params: &ModelParams) -> (f64, f64) {
    let strong = -params.g.abs() / params.omega;
    ((1.25 * strong).min(strong - 0.5), 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroundResult {
    pub lambda_opt: f64,
    pub k_at_opt: f64,
    pub p_at_opt: f64,
    pub energy: f64,
    pub mean_photon: f64,
    pub regime: Regime,
    pub valid: bool,
}

/// Full ground-state solve: scan, classify, pick `λ`, evaluate.
///
/// With a single `K` minimum, `λ` minimizes `c²_{+,1}` at the zero nearest
/// that minimum; with two, it is [`lambda_effective`] of the pair; with more
/// the global minimum is reported and the result marked invalid.
pub fn ground_solve(params: &ModelParams) -> Result<GroundResult, Error> {
    if params.g == 0.0 {
        return Ok(GroundResult {
            lambda_opt: 0.0,
            k_at_opt: 0.0,
            p_at_opt: 1.0,
            energy: -0.5 * params.big_omega,
            mean_photon: 0.0,
            regime: Regime::OneMinimum,
            valid: true,
        });
    }
    let (lo, hi) = scan_bracket(params);
    let land = scan_landscape(params, lo, hi, SCAN_POINTS)?;
    let lambda_opt = match land.classification {
        Regime::OneMinimum => {
            let target = land.minima[0].0;
            let c2: Vec<f64> = land.components.iter().map(|c| c[0]).collect();
            let candidates = refined_minima(&land.lambda_grid, &c2, |l| leading_c2(params, l));
            candidates
                .iter()
                .min_by(|a, b| (a.0 - target).abs().total_cmp(&(b.0 - target).abs()))
                .map(|m| m.0)
                .unwrap_or(target)
        }
        Regime::TwoMinimum => {
            let (a, b) = (land.minima[0], land.minima[1]);
            lambda_effective(a.0, a.1, b.0, b.1)?
        }
        Regime::MultiMinimum => land.global_minimum().0,
    };
    let kv = k_of_lambda(params, lambda_opt, MIN_SHELLS)?;
    Ok(GroundResult {
        lambda_opt,
        k_at_opt: kv.k,
        p_at_opt: projection_p(kv.k)?,
        energy: ground_energy(params, lambda_opt),
        mean_photon: ground_mean_photon(lambda_opt),
        regime: land.classification,
        valid: land.classification != Regime::MultiMinimum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::gvm_stationarity;
    use crate::exact::{build_hamiltonian, solve_exact};
    use crate::model::parity_of;
    use crate::states::{expectation, mean_photon, safe_nmax, untransform};
    use crate::SpinFockLabel;

    fn p(omega: f64, g: f64) -> ModelParams {
        ModelParams::unit(omega, g).unwrap()
    }

    #[test]
    fn coefficients_vanish_without_coupling() {
        let c = coefficients_c(&p(1.0, 0.0), 0.0, 8).unwrap();
        assert!(c.iter().all(|t| t.value == 0.0));
        assert_eq!(k_of_lambda(&p(1.0, 0.0), 0.0, 4).unwrap().k, 0.0);
        assert!(coefficients_c(&p(1.0, 0.3), -0.1, 3).is_err());
    }

    #[test]
    fn parity_selection_rule() {
        let params = p(0.7, 0.9);
        let ground_parity = parity_of(SpinFockLabel::x(Sign::Minus, 0)).unwrap();
        for t in coefficients_c(&params, -0.8, 12).unwrap() {
            let allowed = parity_of(SpinFockLabel::x(t.sign, t.n)).unwrap() == ground_parity;
            if !allowed {
                assert_eq!(t.value, 0.0, "{:?}", t);
            } else {
                assert!(t.value != 0.0, "{:?}", t);
            }
        }
    }

    #[test]
    fn leading_coefficient_is_gvm_stationarity() {
        let params = p(1.3, 0.8);
        for lambda in [-0.9, -0.4, -0.1] {
            let c = ground_term(&params, lambda, Sign::Plus, 1).unwrap();
            let den = aa_energy(&params, lambda, Sign::Plus, 1) - ground_energy(&params, lambda);
            assert!((c * den - gvm_stationarity(&params, lambda)).abs() < 1e-14);
        }
    }

    #[test]
    fn coefficients_match_numeric_matrix() {
        let params = p(0.5, 0.6);
        let lambda = -0.9;
        let nmax = 24;
        let t = crate::approx::tilde_hamiltonian_matrix(&params, lambda, nmax).unwrap();
        let g0 = crate::states::basis_index(Sign::Minus, 0);
        let e0 = t[(g0, g0)];
        for c in coefficients_c(&params, lambda, 10).unwrap() {
            let i = crate::states::basis_index(c.sign, c.n);
            let want = t[(i, g0)] / (t[(i, i)] - e0);
            assert!((c.value - want).abs() < 1e-10, "{:?}", c);
        }
    }

    #[test]
    fn k_dominates_leading_term_and_converges() {
        let params = p(0.5, 0.6);
        for lambda in linspace(-1.7, 0.0, 35) {
            let kv = k_of_lambda(&params, lambda, 4).unwrap();
            assert!(kv.converged);
            assert!(kv.k >= leading_c2(&params, lambda));
        }
        // a larger starting shell count changes nothing beyond the tail tolerance
        let a = k_of_lambda(&params, -1.2, 4).unwrap().k;
        let b = k_of_lambda(&params, -1.2, 60).unwrap().k;
        assert!((a - b).abs() <= 1e-11 * a);
    }

    #[test]
    fn large_displacement_tail_is_summed_past_its_mode() {
        // at λ = -4 the couplings peak around shell 64
        let params = p(0.5, 2.0);
        let kv = k_of_lambda(&params, -4.0, 4).unwrap();
        assert!(kv.converged);
        assert!(kv.shells > 64);
        let head: f64 = (1..=64)
            .map(|n| {
                let c = ground_term(&params, -4.0, allowed_sign(n), n).unwrap();
                c * c
            })
            .sum();
        assert!(kv.k > 1.5 * head);
    }

    #[test]
    fn projection_examples() {
        assert_eq!(projection_p(0.0).unwrap(), 1.0);
        assert_eq!(projection_p(3.0).unwrap(), 0.5);
        assert!((projection_p(1e-4).unwrap() - 0.99995).abs() < 1e-8);
        assert!(projection_p(-1e-3).is_err());
        assert!(projection_p(f64::NAN).is_err());
    }

    #[test]
    fn lambda_effective_examples() {
        assert_eq!(lambda_effective(-1.0, 0.3, -0.5, 0.3).unwrap(), -0.75);
        assert_eq!(lambda_effective(-1.0, 0.0, -0.5, 0.7).unwrap(), -1.0);
        assert_eq!(lambda_effective(-0.4, 0.2, -0.4, 0.9).unwrap(), -0.4);
        assert!(matches!(lambda_effective(-1.0, 0.0, -0.5, 0.0), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn limits_examples() {
        let (weak, strong) = lambda_limits(&p(0.5, 1.0));
        assert!((weak + 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(strong, -2.0);
        let (weak, strong) = lambda_limits(&p(1.0, 0.8));
        assert!((weak - strong / 2.0).abs() < 1e-15);
    }

    #[test]
    fn energy_and_photon_match_product_basis() {
        for (omega, g, lambda) in [(1.0, 0.5, -0.35), (0.5, 1.2, -1.9), (2.0, 1.5, -0.6)] {
            let params = p(omega, g);
            let nmax = safe_nmax(lambda, 0);
            let v = untransform(lambda, &[(Sign::Minus, 0, 1.0)], nmax).unwrap();
            let h = build_hamiltonian(&params, nmax).unwrap();
            assert!((expectation(&h, &v) - ground_energy(&params, lambda)).abs() < 1e-10);
            assert!((mean_photon(&v) - ground_mean_photon(lambda)).abs() < 1e-10);
        }
        assert_eq!(ground_mean_photon(-0.5), 0.25);
    }

    #[test]
    fn energy_bounds_exact_ground() {
        let params = p(0.5, 0.6);
        let exact = solve_exact(&params, 1e-12).unwrap().ground_energy();
        for lambda in linspace(-2.0, 0.0, 41) {
            assert!(ground_energy(&params, lambda) >= exact - 1e-12);
        }
    }

    #[test]
    fn scan_rejects_bad_input() {
        let params = p(1.0, 1.0);
        assert!(scan_landscape(&params, -1.0, 0.5, 201).is_err());
        assert!(scan_landscape(&params, 0.0, -1.0, 201).is_err());
        assert!(scan_landscape(&params, -1.0, 0.0, 100).is_err());
    }

    #[test]
    fn landscape_components_and_minima() {
        let params = p(2.0, 1.5);
        let (lo, hi) = scan_bracket(&params);
        let land = scan_landscape(&params, lo, hi, 401).unwrap();
        assert_eq!(land.classification, Regime::OneMinimum);
        let peak = land.components.iter().map(|c| c[0]).fold(0.0, f64::max);
        for (k, c) in land.k_values.iter().zip(&land.components) {
            assert!(*k >= c[0]);
            assert!(c[1].max(c[2]).max(c[3]) < 0.02 * peak);
        }
        let (lam, k) = land.minima[0];
        assert!(lam > lo && lam < 0.0 && k >= 0.0);
        assert_eq!(land.global_minimum(), land.minima[0]);
    }

    #[test]
    fn substitution_of_leading_term() {
        for (omega, g) in [(2.0, 1.5), (1.0, 1.0)] {
            let params = p(omega, g);
            let (lo, hi) = scan_bracket(&params);
            let land = scan_landscape(&params, lo, hi, SCAN_POINTS).unwrap();
            assert_eq!(land.classification, Regime::OneMinimum);
            let r = ground_solve(&params).unwrap();
            let k_min = land.minima[0].0;
            assert!((r.lambda_opt - k_min).abs() < 0.05);
            assert!(gvm_stationarity(&params, r.lambda_opt).abs() < 1e-10);
            assert!(r.energy <= ground_energy(&params, k_min));
        }
    }

    #[test]
    fn ground_solve_trivial() {
        let r = ground_solve(&p(1.0, 0.0)).unwrap();
        assert_eq!((r.lambda_opt, r.energy, r.mean_photon, r.p_at_opt), (0.0, -0.5, 0.0, 1.0));
        assert!(r.valid);
    }

    #[test]
    fn ground_solve_invariants() {
        for (omega, g) in [(1.0, 0.4), (0.5, 0.6), (2.0, 1.9)] {
            let r = ground_solve(&p(omega, g)).unwrap();
            assert_eq!(r.mean_photon, r.lambda_opt * r.lambda_opt);
            assert!((r.p_at_opt - 1.0 / sqrt(1.0 + r.k_at_opt)).abs() < 1e-15);
            assert!(r.p_at_opt > 0.0 && r.p_at_opt <= 1.0);
            assert_eq!(r.valid, r.regime != Regime::MultiMinimum);
        }
    }

    #[test]
    fn weak_coupling_ratio_tracks_monotone_path() {
        let mut prev = f64::INFINITY;
        for g in linspace(0.2, 2.0, 10) {
            let params = p(1.0, g);
            let r = ground_solve(&params).unwrap();
            let ratio = r.lambda_opt / g;
            let (weak, strong) = lambda_limits(&params);
            assert!(ratio <= weak / g + 1e-9 && ratio >= strong / g - 1e-9);
            assert!(ratio <= prev + 1e-9);
            prev = ratio;
        }
    }
}
