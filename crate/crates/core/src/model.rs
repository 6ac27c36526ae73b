//! Parameter and basis-label types shared by every solver.
//!
//! The Hamiltonian is `H = ω a†a + (Ω/2) σx + g σz (a + a†)`, with the
//! level splitting on `σx`. Energies are in any common unit; the usual
//! choice is `Ω = 1`.

use core::fmt;

use crate::Error;

/// Relative tolerance used to decide resonance.
pub const RESONANCE_RTOL: f64 = 1e-12;

/// Field frequency, level splitting and coupling of one Rabi model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub big_omega: f64,
    pub g: f64,
}

impl ModelParams {
    pub fn new(omega: f64, big_omega: f64, g: f64) -> Result<Self, Error> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParams("omega must be finite and > 0"));
        }
        if !(big_omega.is_finite() && big_omega > 0.0) {
            return Err(Error::InvalidParams("big_omega must be finite and > 0"));
        }
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::InvalidParams("g must be finite and >= 0"));
        }
        Ok(Self { omega, big_omega, g })
    }

    /// Parameters in units of the level splitting (`Ω = 1`).
    pub fn unit(omega: f64, g: f64) -> Result<Self, Error> {
        Self::new(omega, 1.0, g)
    }

    /// Same `ω` and `Ω`, different coupling.
    pub fn with_g(self, g: f64) -> Result<Self, Error> {
        Self::new(self.omega, self.big_omega, g)
    }

    /// The fixed displacement of the adiabatic approximation, `-g/ω`.
    pub fn lambda_aa(&self) -> f64 {
        -self.g / self.omega
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpinAxis {
    X,
    Z,
}

/// `+` or `-` eigenvalue of a Pauli matrix, also used as a branch sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Parity eigenvalue of `Π = -σx (-1)^{a†a}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn value(self) -> i32 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn from_value(v: i32) -> Result<Self, Error> {
        match v {
            1 => Ok(Parity::Even),
            -1 => Ok(Parity::Odd),
            _ => Err(Error::Domain("parity must be +1 or -1")),
        }
    }
}

/// A product basis label `|±_axis, n⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinFockLabel {
    pub axis: SpinAxis,
    pub sign: Sign,
    pub n: usize,
}

impl SpinFockLabel {
    pub fn x(sign: Sign, n: usize) -> Self {
        Self { axis: SpinAxis::X, sign, n }
    }

    pub fn z(sign: Sign, n: usize) -> Self {
        Self { axis: SpinAxis::Z, sign, n }
    }
}

impl fmt::Display for SpinFockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axis = match self.axis {
            SpinAxis::X => 'x',
            SpinAxis::Z => 'z',
        };
        write!(f, "|{}{}, {}>", self.sign, axis, self.n)
    }
}

/// Parity `-s (-1)^n` of an x-axis label.
pub fn parity_of(label: SpinFockLabel) -> Result<Parity, Error> {
    if label.axis != SpinAxis::X {
        return Err(Error::Contract("parity_of requires an x-axis spin label"));
    }
    let photon = if label.n % 2 == 0 { 1 } else { -1 };
    Parity::from_value(-label.sign.as_i32() * photon)
}

/// Parity of `|s_x, n⟩` without the axis check.
pub(crate) fn x_parity(sign: Sign, n: usize) -> Parity {
    let photon = if n % 2 == 0 { 1 } else { -1 };
    if -sign.as_i32() * photon == 1 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetuningClass {
    Resonance,
    /// `ω < Ω`
    Positive,
    /// `ω > Ω`
    Negative,
}

pub fn detuning_class(params: &ModelParams) -> DetuningClass {
    let scale = params.omega.abs().max(params.big_omega.abs());
    if (params.omega - params.big_omega).abs() <= RESONANCE_RTOL * scale {
        DetuningClass::Resonance
    } else if params.omega < params.big_omega {
        DetuningClass::Positive
    } else {
        DetuningClass::Negative
    }
}
