//! Truncated Fock-basis diagonalization of the full Rabi Hamiltonian.
//!
//! In the x-spin basis, `g σz (a + a†)` flips the spin while changing the
//! photon number by one, so each parity sector of `Π = -σx (-1)^{a†a}` is a
//! single chain `|s_0, 0⟩, |s_1, 1⟩, …` with `s_n = -p (-1)^n`. The sector
//! Hamiltonian is tridiagonal in that ordering.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{dot, Matrix, SymmetricEigen};
use crate::math::sqrt;
use crate::model::{ModelParams, Parity, Sign, SpinFockLabel};
use crate::states::{basis_index, dimension, x_to_z, z_to_x};
use crate::Error;

pub const INITIAL_NMAX: usize = 64;
pub const MAX_NMAX: usize = 4096;
/// Number of merged low-lying levels that must be stable before stopping.
pub const CONVERGENCE_LEVELS: usize = 8;
/// Overlap magnitude below which [`overlap_match`] flags its answer.
pub const OVERLAP_FLOOR: f64 = 1e-6;

/// `H` on `{|±z⟩ ⊗ |n⟩ : n ≤ nmax}` in the interleaved layout of
/// [`crate::states`].
pub fn build_hamiltonian(params: &ModelParams, nmax: usize) -> Result<Matrix, Error> {
    check_nmax(nmax)?;
    let dim = dimension(nmax);
    let mut h = Matrix::zeros(dim, dim);
    let half = 0.5 * params.big_omega;
    for n in 0..=nmax {
        let p = basis_index(Sign::Plus, n);
        let m = basis_index(Sign::Minus, n);
        h[(p, p)] = params.omega * n as f64;
        h[(m, m)] = params.omega * n as f64;
        h[(p, m)] = half;
        h[(m, p)] = half;
        if n < nmax {
            let c = params.g * sqrt((n + 1) as f64);
            for s in [Sign::Plus, Sign::Minus] {
                let i = basis_index(s, n);
                let j = basis_index(s, n + 1);
                h[(i, j)] = s.value() * c;
                h[(j, i)] = s.value() * c;
            }
        }
    }
    Ok(h)
}

/// Spin sign of the `n`-th basis state of a parity sector.
pub fn sector_sign(parity: Parity, n: usize) -> Sign {
    let photon = if n % 2 == 0 { 1 } else { -1 };
    if -parity.value() * photon == 1 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

pub fn sector_label(parity: Parity, n: usize) -> SpinFockLabel {
    SpinFockLabel::x(sector_sign(parity, n), n)
}

/// Diagonal and sub-diagonal of `H` restricted to one parity sector.
pub fn parity_block_tridiagonal(
    params: &ModelParams,
    nmax: usize,
    parity: Parity,
) -> Result<(Vec<f64>, Vec<f64>), Error> {
    check_nmax(nmax)?;
    let diag = (0..=nmax)
        .map(|n| params.omega * n as f64 + 0.5 * params.big_omega * sector_sign(parity, n).value())
        .collect();
    let off = (0..nmax).map(|n| params.g * sqrt((n + 1) as f64)).collect();
    Ok((diag, off))
}

/// `H` restricted to one parity sector, as a dense `(nmax+1)²` matrix.
pub fn build_parity_block(params: &ModelParams, nmax: usize, parity: Parity) -> Result<Matrix, Error> {
    let (diag, off) = parity_block_tridiagonal(params, nmax, parity)?;
    Ok(Matrix::from_fn(nmax + 1, nmax + 1, |i, j| {
        if i == j {
            diag[i]
        } else if i == j + 1 {
            off[j]
        } else if j == i + 1 {
            off[i]
        } else {
            0.0
        }
    }))
}

fn check_nmax(nmax: usize) -> Result<(), Error> {
    if nmax < 2 {
        Err(Error::Domain("Fock truncation needs nmax >= 2"))
    } else {
        Ok(())
    }
}

/// Eigenpairs of one parity sector; vectors are in the sector chain basis.
#[derive(Clone, Debug)]
pub struct Sector {
    pub parity: Parity,
    pub energies: Vec<f64>,
    pub vectors: Matrix,
}

impl Sector {
    fn solve(params: &ModelParams, nmax: usize, parity: Parity) -> Result<Self, Error> {
        let (diag, off) = parity_block_tridiagonal(params, nmax, parity)?;
        let eig = SymmetricEigen::tridiagonal(&diag, &off)?;
        Ok(Self { parity, energies: eig.values, vectors: eig.vectors })
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }
}

/// A state of an [`ExactSolution`]: parity sector and rank inside it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StateRef {
    pub parity: Parity,
    pub index: usize,
}

#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub params: ModelParams,
    pub even: Sector,
    pub odd: Sector,
    pub nmax_used: usize,
    pub converged: bool,
}

impl ExactSolution {
    /// Diagonalizes both sectors at a fixed truncation.
    pub fn at_truncation(params: &ModelParams, nmax: usize) -> Result<Self, Error> {
        Ok(Self {
            params: *params,
            even: Sector::solve(params, nmax, Parity::Even)?,
            odd: Sector::solve(params, nmax, Parity::Odd)?,
            nmax_used: nmax,
            converged: true,
        })
    }

    pub fn sector(&self, parity: Parity) -> &Sector {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    pub fn energies_even(&self) -> &[f64] {
        &self.even.energies
    }

    pub fn energies_odd(&self) -> &[f64] {
        &self.odd.energies
    }

    pub fn energy(&self, state: StateRef) -> Result<f64, Error> {
        let sector = self.sector(state.parity);
        sector
            .energies
            .get(state.index)
            .copied()
            .ok_or(Error::IndexOutOfRange { index: state.index, len: sector.len() })
    }

    /// All levels merged, ascending. Ties within `1e-12` relative go to the
    /// even sector first.
    pub fn levels(&self) -> Vec<(StateRef, f64)> {
        let mut out: Vec<(StateRef, f64)> = Vec::with_capacity(self.even.len() + self.odd.len());
        for sector in [&self.even, &self.odd] {
            for (index, &e) in sector.energies.iter().enumerate() {
                out.push((StateRef { parity: sector.parity, index }, e));
            }
        }
        out.sort_by(|a, b| {
            let scale = a.1.abs().max(b.1.abs()).max(1.0);
            if (a.1 - b.1).abs() <= 1e-12 * scale {
                let rank = |s: &StateRef| if s.parity == Parity::Even { 0 } else { 1 };
                rank(&a.0).cmp(&rank(&b.0)).then(a.0.index.cmp(&b.0.index))
            } else {
                a.1.total_cmp(&b.1)
            }
        });
        out
    }

    pub fn ground(&self) -> (StateRef, f64) {
        self.levels()[0]
    }

    pub fn ground_energy(&self) -> f64 {
        self.ground().1
    }

    /// Eigenvector in the sector chain basis (component `n` is `|s_n x, n⟩`).
    pub fn sector_vector(&self, state: StateRef) -> Result<Vec<f64>, Error> {
        let sector = self.sector(state.parity);
        if state.index >= sector.len() {
            return Err(Error::IndexOutOfRange { index: state.index, len: sector.len() });
        }
        Ok(sector.vectors.column(state.index))
    }

    /// Eigenvector in the z-spin product basis.
    pub fn product_vector(&self, state: StateRef) -> Result<Vec<f64>, Error> {
        let chain = self.sector_vector(state)?;
        let mut x = vec![0.0; dimension(self.nmax_used)];
        for (n, &c) in chain.iter().enumerate() {
            x[basis_index(sector_sign(state.parity, n), n)] = c;
        }
        Ok(x_to_z(&x))
    }
}

/// Diagonalizes both parity sectors, doubling the truncation from
/// [`INITIAL_NMAX`] until the lowest [`CONVERGENCE_LEVELS`] merged energies
/// move by less than `tol`. Past [`MAX_NMAX`] the best result is returned
/// with `converged = false`.
pub fn solve_exact(params: &ModelParams, tol: f64) -> Result<ExactSolution, Error> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive"));
    }
    let mut nmax = INITIAL_NMAX;
    let mut previous = lowest_levels(params, nmax)?;
    loop {
        let next_nmax = nmax * 2;
        if next_nmax > MAX_NMAX {
            let mut sol = ExactSolution::at_truncation(params, nmax)?;
            sol.converged = false;
            return Ok(sol);
        }
        let current = lowest_levels(params, next_nmax)?;
        let moved = previous
            .iter()
            .zip(&current)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        nmax = next_nmax;
        if moved < tol {
            return ExactSolution::at_truncation(params, nmax);
        }
        previous = current;
    }
}

fn lowest_levels(params: &ModelParams, nmax: usize) -> Result<Vec<f64>, Error> {
    let mut all = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let (diag, off) = parity_block_tridiagonal(params, nmax, parity)?;
        all.extend(SymmetricEigen::tridiagonal_values(&diag, &off)?);
    }
    all.sort_by(f64::total_cmp);
    all.truncate(CONVERGENCE_LEVELS);
    Ok(all)
}

/// `⟨a†a⟩` in an exact eigenstate.
pub fn mean_photon(solution: &ExactSolution, state: StateRef) -> Result<f64, Error> {
    let v = solution.sector_vector(state)?;
    Ok(v.iter().enumerate().map(|(n, c)| n as f64 * c * c).sum())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapMatch {
    pub state: StateRef,
    /// `|⟨exact|trial⟩|`.
    pub overlap: f64,
    /// Set when even the best overlap is below [`OVERLAP_FLOOR`].
    pub flagged: bool,
}

/// Exact eigenstate with the largest overlap with `trial`, searched within
/// the trial's parity sector. `trial` is a normalized z-spin product vector
/// of any truncation; components beyond the solution's truncation are
/// ignored.
pub fn overlap_match(solution: &ExactSolution, trial: &[f64]) -> Result<OverlapMatch, Error> {
    if trial.len() % 2 != 0 {
        return Err(Error::Domain("product vectors have even length"));
    }
    let norm2 = dot(trial, trial);
    if (norm2 - 1.0).abs() > 1e-8 {
        return Err(Error::Contract("trial state must be normalized"));
    }
    let x = z_to_x(trial);
    let n_avail = (x.len() / 2).min(solution.nmax_used + 1);
    let mut chains = [vec![0.0; n_avail], vec![0.0; n_avail]];
    let mut weights = [0.0; 2];
    for n in 0..x.len() / 2 {
        for s in [Sign::Plus, Sign::Minus] {
            let c = x[basis_index(s, n)];
            let parity = crate::model::x_parity(s, n);
            let slot = if parity == Parity::Even { 0 } else { 1 };
            weights[slot] += c * c;
            if n < n_avail {
                chains[slot][n] = c;
            }
        }
    }
    const PARITY_TOL: f64 = 1e-8;
    if weights[0] > PARITY_TOL && weights[1] > PARITY_TOL {
        return Err(Error::IndeterminateParity { even_weight: weights[0], odd_weight: weights[1] });
    }
    let (parity, chain) = if weights[0] >= weights[1] {
        (Parity::Even, &chains[0])
    } else {
        (Parity::Odd, &chains[1])
    };
    let sector = solution.sector(parity);
    let mut best = OverlapMatch { state: StateRef { parity, index: 0 }, overlap: 0.0, flagged: true };
    for index in 0..sector.len() {
        let ov: f64 = chain.iter().enumerate().map(|(n, c)| c * sector.vectors[(n, index)]).sum();
        if ov.abs() > best.overlap + 1e-14 {
            best.state.index = index;
            best.overlap = ov.abs();
        }
    }
    best.flagged = best.overlap < OVERLAP_FLOOR;
    Ok(best)
}
