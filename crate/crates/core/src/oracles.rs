//! Closed-form values for the CSUM₃ examples, used as ground truth
//! against the numeric measures.
//!
//! Everything here is plain arithmetic on closed-form expressions; nothing is
//! shared with [`crate::measures`] or [`crate::phasespace`] on the closed-form
//! side. [`oracle_vs_numeric`] builds the matching state and runs the numeric
//! pipeline for comparison.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::circuits::{beamsplitter, BeamsplitterSpec};
use crate::error::{Error, Result};
use crate::measures;
use crate::phasespace::PrimeDim;
use crate::states::{basis, named_state, noisy_mix, tensor, DensityState, PureVector};

/// The four correlation quantifiers compared on CSUM₃ outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Quantity {
    /// Quantum mutual information.
    I,
    L1,
    Sre2,
    Mana,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [Quantity::I, Quantity::L1, Quantity::Sre2, Quantity::Mana];

    /// Column label used in figure CSVs.
    pub fn label(self) -> &'static str {
        match self {
            Quantity::I => "I",
            Quantity::L1 => "m_l1",
            Quantity::Sre2 => "m_sre2",
            Quantity::Mana => "m_mana",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "mi" => Ok(Quantity::I),
            "l1" | "m_l1" => Ok(Quantity::L1),
            "sre2" | "m_sre2" => Ok(Quantity::Sre2),
            "mana" | "m_mana" => Ok(Quantity::Mana),
            _ => Err(Error::UnknownName {
                kind: "quantity",
                name: s.into(),
            }),
        }
    }
}

/// Input magic states of the comparison table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MagicState {
    S,
    N,
    T,
    H,
}

impl MagicState {
    pub const ALL: [MagicState; 4] = [MagicState::S, MagicState::N, MagicState::T, MagicState::H];

    /// Name accepted by [`named_state`].
    pub fn state_name(self) -> &'static str {
        match self {
            MagicState::S => "strange",
            MagicState::N => "norrell",
            MagicState::T => "t",
            MagicState::H => "h",
        }
    }

    pub fn pure(self) -> PureVector {
        named_state(self.state_name(), &[]).expect("fixed qutrit state")
    }
}

impl fmt::Display for MagicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MagicState::S => "S",
            MagicState::N => "N",
            MagicState::T => "T",
            MagicState::H => "H",
        };
        f.write_str(s)
    }
}

impl FromStr for MagicState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s" | "strange" => Ok(MagicState::S),
            "n" | "norrell" => Ok(MagicState::N),
            "t" => Ok(MagicState::T),
            "h" => Ok(MagicState::H),
            _ => Err(Error::UnknownName {
                kind: "magic state",
                name: s.into(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum OracleId {
    /// Real amplitudes `mu`, noise weight `p`.
    Ex1 {
        mu: [f64; 3],
        p: f64,
    },
    /// Maximally coherent qutrit with phases (0, θ₁, θ₂).
    Ex2 {
        theta1: f64,
        theta2: f64,
        p: f64,
    },
    Ex3 {
        lambda: f64,
        p: f64,
    },
    Ex4 {
        theta: f64,
        p: f64,
    },
    /// Pure `|Φ_λ⟩` input, one of the four quantifiers.
    Ex5 {
        quantity: Quantity,
        lambda: f64,
    },
    /// Pure `|ψ_θ⟩` input.
    Ex6 {
        quantity: Quantity,
        theta: f64,
    },
    Table1 {
        quantity: Quantity,
        state: MagicState,
        p: f64,
    },
    Ml1H {
        p: f64,
    },
    Msre2H {
        p: f64,
    },
    PCrit {
        state: MagicState,
    },
}

impl fmt::Display for OracleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleId::Ex1 { mu, p } => write!(f, "ex1(mu={mu:?}, p={p})"),
            OracleId::Ex2 { theta1, theta2, p } => {
                write!(f, "ex2(theta1={theta1}, theta2={theta2}, p={p})")
            }
            OracleId::Ex3 { lambda, p } => write!(f, "ex3(lambda={lambda}, p={p})"),
            OracleId::Ex4 { theta, p } => write!(f, "ex4(theta={theta}, p={p})"),
            OracleId::Ex5 { quantity, lambda } => write!(f, "ex5_set[{quantity}](lambda={lambda})"),
            OracleId::Ex6 { quantity, theta } => write!(f, "ex6_set[{quantity}](theta={theta})"),
            OracleId::Table1 { quantity, state, p } => {
                write!(f, "table1_cell[{quantity}, {state}](p={p})")
            }
            OracleId::Ml1H { p } => write!(f, "ml1_h(p={p})"),
            OracleId::Msre2H { p } => write!(f, "msre2_h(p={p})"),
            OracleId::PCrit { state } => write!(f, "p_crit({state})"),
        }
    }
}

const LAMBDA_MAX: f64 = FRAC_1_SQRT_2;
const RANGE_SLACK: f64 = 1e-12;

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::BadParams(format!("p = {p} not in [0, 1]")))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..=LAMBDA_MAX + RANGE_SLACK).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::BadParams(format!(
            "lambda = {lambda} not in [0, 1/sqrt(2)]"
        )))
    }
}

fn check_quarter_turn(theta: f64) -> Result<()> {
    if (0.0..=FRAC_PI_2 + RANGE_SLACK).contains(&theta) {
        Ok(())
    } else {
        Err(Error::BadParams(format!(
            "theta = {theta} not in [0, pi/2]"
        )))
    }
}

fn check_finite(x: f64, name: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::BadParams(format!("{name} = {x} is not finite")))
    }
}

fn check_unit_real(mu: &[f64; 3]) -> Result<()> {
    let norm: f64 = mu.iter().map(|m| m * m).sum();
    if mu.iter().all(|m| m.is_finite()) && (norm - 1.0).abs() < 1e-9 {
        Ok(())
    } else {
        Err(Error::BadParams(format!(
            "mu = {mu:?} is not a real unit vector"
        )))
    }
}

fn cis(x: f64) -> Complex64 {
    Complex64::new(x.cos(), x.sin())
}

/// `−Σ pᵢ ln pᵢ` with `0 ln 0 = 0`.
pub fn shannon(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&q| q > 0.0)
        .map(|&q| -q * q.ln())
        .sum()
}

fn sqrt_rest(lambda: f64) -> f64 {
    (1.0 - 2.0 * lambda * lambda).max(0.0).sqrt()
}

fn ex1(mu: [f64; 3], p: f64) -> f64 {
    let [m0, m1, m2] = mu;
    let q = 1.0 - p;
    let sum = (2.0 * q + 6.0 * p * (m0 * m0 - m1 * m2)).abs()
        + (2.0 * q + 6.0 * p * (m1 * m1 - m0 * m2)).abs()
        + (2.0 * q + 6.0 * p * (m2 * m2 - m0 * m1)).abs()
        + (q + 3.0 * p * (m1 * m1 + 2.0 * m0 * m2)).abs()
        + (q + 3.0 * p * (m0 * m0 + 2.0 * m1 * m2)).abs()
        + (q + 3.0 * p * (m2 * m2 + 2.0 * m0 * m1)).abs();
    (sum / 9.0).ln()
}

fn ex2(t1: f64, t2: f64, p: f64) -> f64 {
    let s3 = 3f64.sqrt();
    let triple = |t: f64| {
        (1.0 + 2.0 * p * t.cos()).abs()
            + (1.0 - p * t.cos() + s3 * p * t.sin()).abs()
            + (1.0 - p * t.cos() - s3 * p * t.sin()).abs()
    };
    ((triple(t1) + triple(t2) + triple(t1 - t2)) / 9.0).ln()
}

fn ex3(lambda: f64, p: f64) -> f64 {
    let r = sqrt_rest(lambda);
    let sum = 3.0
        + 6.0 * p * lambda * (lambda + 2.0 * r)
        + 2.0 * (1.0 + p * (2.0 - 9.0 * lambda * lambda)).abs()
        + 4.0 * (1.0 - p + 3.0 * p * lambda * (lambda - r)).abs();
    (sum / 9.0).ln()
}

fn ex4(theta: f64, p: f64) -> f64 {
    let s = (2.0 * theta).sin();
    ((7.0 + 2.0 * p + (-2.0 + 2.0 * p + 3.0 * p * s).abs() + 3.0 * p * s) / 9.0).ln()
}

/// Piecewise form of the `Ex4` oracle; equal to the absolute-value form.
pub fn ex4_piecewise(theta: f64, p: f64) -> f64 {
    let s = (2.0 * theta).sin();
    if p <= 2.0 / (2.0 + 3.0 * s) {
        0.0
    } else {
        ((5.0 + 4.0 * p + 6.0 * p * s) / 9.0).ln()
    }
}

fn ex5(quantity: Quantity, lambda: f64) -> f64 {
    let l2 = lambda * lambda;
    let r = sqrt_rest(lambda);
    let e3 = cis(PI / 3.0);
    let f1 = (1.0 - 3.0 * l2).abs();
    let f2 = lambda * (lambda + 2.0 * r);
    let f3 = (e3 - (1.0 + e3) * (1.0 + e3) * l2).norm();
    let f4 = lambda * (cis(2.0 * PI / 3.0) * lambda - (e3 - 1.0) * r).norm();
    let f5 = lambda * (lambda - r).abs();
    match quantity {
        Quantity::I => {
            let xlnx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
            -2.0 * (4.0 * l2 * if lambda > 0.0 { lambda.ln() } else { 0.0 } + xlnx(1.0 - 2.0 * l2))
        }
        Quantity::Sre2 => {
            let num = 1.0 + f1.powi(2) + 2.0 * f2.powi(2) + f3.powi(2) + 4.0 * f4.powi(2);
            let den = 1.0 + f1.powi(4) + 2.0 * f2.powi(4) + f3.powi(4) + 4.0 * f4.powi(4);
            (num / den).ln()
        }
        Quantity::L1 => {
            -2.0 * (1.0 + f1 + f3).ln() + (3.0 * (1.0 + f1 + 2.0 * f2 + f3 + 4.0 * f4)).ln()
        }
        Quantity::Mana => ((1.0 + 2.0 * f1 + 2.0 * f2 + 4.0 * f5) / 3.0).ln(),
    }
}

fn ex6(quantity: Quantity, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let f = (c2 - cis(PI / 3.0) * s2).norm();
    let g = (c2 + cis(2.0 * PI / 3.0) * s2).norm();
    let sin2 = (2.0 * theta).sin();
    match quantity {
        Quantity::I => {
            let term = |w: f64, x: f64| if w > 0.0 { w * x.ln() } else { 0.0 };
            -4.0 * (term(c2, c) + term(s2, s))
        }
        Quantity::Sre2 => {
            let num = 1.0 + f.powi(2) + g.powi(2) + 1.5 * sin2.powi(2);
            let den = 1.0 + f.powi(4) + g.powi(4) + 0.375 * sin2.powi(4);
            (num / den).ln()
        }
        Quantity::L1 => -2.0 * (1.0 + f + g).ln() + (3.0 * (1.0 + f + g + 3.0 * sin2.abs())).ln(),
        Quantity::Mana => (1.0 + 2.0 / 3.0 * sin2.abs()).ln(),
    }
}

fn ml1_h(p: f64) -> f64 {
    let s3 = 3f64.sqrt();
    let a = 1.0 + s3;
    let w = |k: f64| cis(k * PI / 9.0);
    let t1 = (3.0 - s3) * p / 2.0 * (a * (1.0 + w(-2.0)) + w(2.0)).norm();
    let t2 = (3.0 - s3) * p / 4.0
        * ((a * (1.0 + w(-8.0)) + w(8.0)).norm() + (a * (1.0 + w(4.0)) + w(-4.0)).norm());
    let t3 = (3.0 - s3) * p / 4.0
        * ((a * (w(2.0) + w(6.0)) + w(10.0)).norm() + (a * (w(2.0) + w(12.0)) + w(4.0)).norm());
    -2.0 * (1.0 + a * p / 2.0).ln() + (3.0 + 3.0 * a * p / 2.0 + t1 + t2 + t3).ln()
}

fn msre2_h(p: f64) -> f64 {
    let s3 = 3f64.sqrt();
    let a = 1.0 + s3;
    let w = |k: f64| cis(k * PI / 9.0);
    let big_a = ((w(1.0) - w(6.0)) * a - w(2.0)).norm();
    let big_b = ((w(5.0) - w(6.0)) * a + w(7.0)).norm();
    let (c1, c2, s1) = ((PI / 9.0).cos(), (2.0 * PI / 9.0).cos(), (PI / 18.0).sin());
    let k2 = 18.0 + s3 - 2.0 * s3 * c1 + (1.0 + 3.0 * s3) * c2 + (3.0 * s3 - 1.0) * s1;
    let k4 = 1299.0 + 744.0 * s3 - 2.0 * (146.0 + 85.0 * s3) * c1
        + (478.0 + 278.0 * s3) * c2
        + (382.0 + 224.0 * s3) * s1;
    let p2 = p * p;
    let p4 = p2 * p2;
    let m = s3 - 2.0;
    let num = 2.0
        * (3.0 + s3).powi(4)
        * (24.0 - m * big_a.powi(2) * p2 - m * big_b.powi(2) * p2 + 2.0 * k2 * p2);
    let den =
        3.0 * (576.0 * (7.0 + 4.0 * s3) + big_a.powi(4) * p4 + big_b.powi(4) * p4 + 2.0 * k4 * p4);
    num.ln() - den.ln()
}

fn table1(quantity: Quantity, state: MagicState, p: f64) -> f64 {
    let s3 = 3f64.sqrt();
    let global = shannon(&[(1.0 - p) / 3.0, (1.0 - p) / 3.0, (1.0 + 2.0 * p) / 3.0]);
    match (quantity, state) {
        (Quantity::I, MagicState::S) => {
            2.0 * shannon(&[(1.0 - p) / 3.0, (2.0 + p) / 6.0, (2.0 + p) / 6.0]) - global
        }
        (Quantity::I, MagicState::N) => {
            2.0 * shannon(&[(2.0 - p) / 6.0, (2.0 - p) / 6.0, (1.0 + p) / 3.0]) - global
        }
        (Quantity::I, MagicState::T) => 2.0 * 3f64.ln() - global,
        (Quantity::I, MagicState::H) => {
            let x = p * (1.0 + s3);
            2.0 * shannon(&[(2.0 + x) / 6.0, (4.0 - x) / 12.0, (4.0 - x) / 12.0]) - global
        }
        (Quantity::Mana, MagicState::S) => ((7.0 + 8.0 * p) / 9.0).ln().max(0.0),
        (Quantity::Mana, MagicState::N) => ((5.0 + 10.0 * p) / 9.0).ln().max(0.0),
        (Quantity::Mana, MagicState::T) => ((1.0 + 4.0 * p * (PI / 9.0).cos()) / 3.0).ln().max(0.0),
        (Quantity::Mana, MagicState::H) => ((1.0 + 2.0 * p * (1.0 + 3.0 * s3)) / 9.0).ln().max(0.0),
        (Quantity::L1, MagicState::S | MagicState::N) => {
            ((3.0 + 12.0 * p) / ((1.0 + p) * (1.0 + p))).ln()
        }
        (Quantity::L1, MagicState::T) => (3.0 + 6.0 * s3 * p).ln(),
        (Quantity::L1, MagicState::H) => ml1_h(p),
        (Quantity::Sre2, MagicState::S | MagicState::N) => {
            ((2.0 + 4.0 * p * p) / (2.0 + p.powi(4))).ln()
        }
        (Quantity::Sre2, MagicState::T) => ((3.0 + 6.0 * p * p) / (3.0 + 2.0 * p.powi(4))).ln(),
        (Quantity::Sre2, MagicState::H) => msre2_h(p),
    }
}

/// Noise threshold below which the output mutual mana vanishes.
pub fn p_crit(state: MagicState) -> f64 {
    match state {
        MagicState::S => 0.25,
        MagicState::N => 0.4,
        MagicState::T => 1.0 / (2.0 * (PI / 9.0).cos()),
        MagicState::H => 4.0 / (1.0 + 3.0 * 3f64.sqrt()),
    }
}

/// Evaluates the closed form for `id` (natural log).
pub fn closed_form(id: &OracleId) -> Result<f64> {
    match *id {
        OracleId::Ex1 { mu, p } => {
            check_p(p)?;
            check_unit_real(&mu)?;
            Ok(ex1(mu, p))
        }
        OracleId::Ex2 { theta1, theta2, p } => {
            check_p(p)?;
            check_finite(theta1, "theta1")?;
            check_finite(theta2, "theta2")?;
            Ok(ex2(theta1, theta2, p))
        }
        OracleId::Ex3 { lambda, p } => {
            check_p(p)?;
            check_lambda(lambda)?;
            Ok(ex3(lambda, p))
        }
        OracleId::Ex4 { theta, p } => {
            check_p(p)?;
            check_quarter_turn(theta)?;
            Ok(ex4(theta, p))
        }
        OracleId::Ex5 { quantity, lambda } => {
            check_lambda(lambda)?;
            Ok(ex5(quantity, lambda))
        }
        OracleId::Ex6 { quantity, theta } => {
            check_quarter_turn(theta)?;
            Ok(ex6(quantity, theta))
        }
        OracleId::Table1 { quantity, state, p } => {
            check_p(p)?;
            Ok(table1(quantity, state, p))
        }
        OracleId::Ml1H { p } => {
            check_p(p)?;
            Ok(ml1_h(p))
        }
        OracleId::Msre2H { p } => {
            check_p(p)?;
            Ok(msre2_h(p))
        }
        OracleId::PCrit { state } => Ok(p_crit(state)),
    }
}

/// `CSUM₃((p|ψ⟩⟨ψ| + (1−p)·1/3) ⊗ |0⟩⟨0|)CSUM₃†`.
pub fn csum_output(psi: &PureVector, p: f64) -> Result<DensityState> {
    let dim = PrimeDim::new(psi.dim() as u64)?;
    let input = noisy_mix(psi, p)?;
    let ancilla = DensityState::pure(&basis(dim.get(), 0))?;
    tensor(&input, &ancilla).evolve(&beamsplitter(&BeamsplitterSpec::csum(dim)))
}

/// Numeric value of a quantifier on a bipartite output state.
pub fn numeric_quantity(quantity: Quantity, rho_ab: &DensityState) -> Result<f64> {
    match quantity {
        Quantity::I => measures::mutual_information(rho_ab),
        Quantity::L1 => measures::mutual_l1(rho_ab),
        Quantity::Sre2 => measures::mutual_sre(rho_ab, 2.0),
        Quantity::Mana => measures::mutual_mana(rho_ab),
    }
}

/// Bisection for the smallest p at which the numeric output mutual mana
/// exceeds `threshold`. Assumes the mutual mana is nondecreasing in p.
pub fn numeric_threshold(state: MagicState, threshold: f64, p_tol: f64) -> Result<f64> {
    let psi = state.pure();
    let above =
        |p: f64| -> Result<bool> { Ok(measures::mutual_mana(&csum_output(&psi, p)?)? > threshold) };
    if !above(1.0)? {
        return Err(Error::BadParams(format!(
            "mutual mana of {state} never exceeds {threshold}"
        )));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > p_tol {
        let mid = 0.5 * (lo + hi);
        if above(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Threshold value and noise-weight resolution used when comparing `p_crit`.
const THRESHOLD_MANA: f64 = 1e-9;
const THRESHOLD_P_TOL: f64 = 1e-6;

/// Builds the numeric counterpart of `id`.
pub fn numeric(id: &OracleId) -> Result<f64> {
    let pure = |name: &str, params: &[f64]| named_state(name, params);
    match *id {
        OracleId::Ex1 { mu, p } => {
            check_unit_real(&mu)?;
            let psi = PureVector::normalized(mu.iter().map(|&m| Complex64::new(m, 0.0)).collect())?;
            measures::mutual_mana(&csum_output(&psi, p)?)
        }
        OracleId::Ex2 { theta1, theta2, p } => {
            let psi = pure("max_coherent", &[theta1, theta2])?;
            measures::mutual_mana(&csum_output(&psi, p)?)
        }
        OracleId::Ex3 { lambda, p } => {
            check_lambda(lambda)?;
            let psi = pure("phi_lambda", &[lambda.min(LAMBDA_MAX)])?;
            measures::mutual_mana(&csum_output(&psi, p)?)
        }
        OracleId::Ex4 { theta, p } => {
            let psi = pure("psi_theta", &[theta])?;
            measures::mutual_mana(&csum_output(&psi, p)?)
        }
        OracleId::Ex5 { quantity, lambda } => {
            check_lambda(lambda)?;
            let psi = pure("phi_lambda", &[lambda.min(LAMBDA_MAX)])?;
            numeric_quantity(quantity, &csum_output(&psi, 1.0)?)
        }
        OracleId::Ex6 { quantity, theta } => {
            let psi = pure("psi_theta", &[theta])?;
            numeric_quantity(quantity, &csum_output(&psi, 1.0)?)
        }
        OracleId::Table1 { quantity, state, p } => {
            numeric_quantity(quantity, &csum_output(&state.pure(), p)?)
        }
        OracleId::Ml1H { p } => {
            numeric_quantity(Quantity::L1, &csum_output(&MagicState::H.pure(), p)?)
        }
        OracleId::Msre2H { p } => {
            numeric_quantity(Quantity::Sre2, &csum_output(&MagicState::H.pure(), p)?)
        }
        OracleId::PCrit { state } => numeric_threshold(state, THRESHOLD_MANA, THRESHOLD_P_TOL),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub id: OracleId,
    pub closed: f64,
    pub numeric: f64,
    pub diff: f64,
    pub pass: bool,
}

/// Closed form against the numeric pipeline; `pass` iff `|diff| ≤ tol`.
pub fn oracle_vs_numeric(id: &OracleId, tol: f64) -> Result<Comparison> {
    let closed = closed_form(id)?;
    let numeric = numeric(id)?;
    let diff = (closed - numeric).abs();
    Ok(Comparison {
        id: *id,
        closed,
        numeric,
        diff,
        pass: diff <= tol,
    })
}

/// `n` evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
