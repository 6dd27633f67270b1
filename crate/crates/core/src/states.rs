//! Density states, pure vectors, the named qutrit state zoo, and stabilizer
//! enumeration.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, C64};
use crate::phasespace::PrimeDim;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const EIGEN_FLOOR: f64 = -1e-8;
pub const NORM_TOL: f64 = 1e-10;

/// Largest dimension for which stabilizer states are enumerated.
pub const MAX_ENUM_DIM: usize = 7;

/// One side of a bipartite system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }
}

/// A validated density operator over a list of odd-prime subsystems.
/// Subsystem 0 is the slowest-varying computational index.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    dims: Vec<PrimeDim>,
    matrix: ComplexMatrix,
}

impl DensityState {
    /// Validates Hermiticity, unit trace, and the eigenvalue floor.
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let dims = dims
            .into_iter()
            .map(|d| PrimeDim::new(d as u64))
            .collect::<Result<Vec<_>>>()?;
        let state = Self::from_parts(dims, matrix)?;
        let herm = state.matrix.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = state.matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_eig = state.matrix.eigvalsh()[0];
        if min_eig < EIGEN_FLOOR {
            return Err(Error::NegativeEigenvalue(min_eig));
        }
        Ok(state)
    }

    /// Shape checks only; for matrices that are density operators by
    /// construction (unitary images, mixtures, reductions).
    pub(crate) fn from_parts(dims: Vec<PrimeDim>, matrix: ComplexMatrix) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::DimensionMismatch("no subsystems".into()));
        }
        let total: usize = dims.iter().map(|d| d.get()).product();
        if total != matrix.dim() {
            return Err(Error::DimensionMismatch(format!(
                "subsystems multiply to {total} but matrix is {0}x{0}",
                matrix.dim()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        Ok(Self { dims, matrix })
    }

    pub fn maximally_mixed(dims: &[usize]) -> Result<Self> {
        let total: usize = dims.iter().product();
        Self::new(
            dims.to_vec(),
            ComplexMatrix::identity(total).scale_re(1.0 / total as f64),
        )
    }

    pub fn from_pure(psi: &PureVector, dims: &[usize]) -> Result<Self> {
        let pd = dims
            .iter()
            .map(|&d| PrimeDim::new(d as u64))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(pd, ComplexMatrix::outer(psi.amplitudes()))
    }

    /// Single-qudit `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &PureVector) -> Result<Self> {
        Self::from_pure(psi, &[psi.dim()])
    }

    pub fn dims(&self) -> Vec<usize> {
        self.dims.iter().map(|d| d.get()).collect()
    }

    pub fn prime_dims(&self) -> Result<Vec<PrimeDim>> {
        Ok(self.dims.clone())
    }

    pub fn subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// `U ρ U†` for a unitary on the full space.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.matrix.dim() {
            return Err(Error::DimensionMismatch(format!(
                "unitary is {0}x{0}, state is {1}x{1}",
                u.dim(),
                self.matrix.dim()
            )));
        }
        Ok(Self {
            dims: self.dims.clone(),
            matrix: self.matrix.conjugate_by(u),
        })
    }

    /// `λ·self + (1-λ)·other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(
                "mixing states of different shape".into(),
            ));
        }
        Ok(Self {
            dims: self.dims.clone(),
            matrix: &self.matrix.scale_re(lambda) + &other.matrix.scale_re(1.0 - lambda),
        })
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.matrix.dim())
            .map(|i| self.matrix.row(i).iter().map(|v| [v.re, v.im]).collect())
            .collect();
        serde_json::json!({ "dims": self.dims(), "kind": "mixed", "data": rows }).to_string()
    }
}

/// A unit vector in C^d (or a tensor product space).
#[derive(Clone, Debug, PartialEq)]
pub struct PureVector {
    amplitudes: Vec<C64>,
}

impl PureVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty vector".into()));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "vector norm {norm} differs from 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("zero or non-finite vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn kron(&self, other: &Self) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Self { amplitudes }
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn to_json(&self, dims: &[usize]) -> String {
        let data: Vec<[f64; 2]> = self.amplitudes.iter().map(|v| [v.re, v.im]).collect();
        serde_json::json!({ "dims": dims, "kind": "pure", "data": data }).to_string()
    }
}

/// Basis vector `|j⟩` in dimension `d`.
pub fn basis(d: usize, j: usize) -> PureVector {
    let mut amps = vec![c(0.0, 0.0); d];
    amps[j % d] = c(1.0, 0.0);
    PureVector { amplitudes: amps }
}

/// Names accepted by [`named_state`].
pub const STATE_NAMES: &[&str] = &[
    "strange",
    "norrell",
    "t",
    "h",
    "phi_lambda",
    "psi_theta",
    "max_coherent",
    "basis",
];

fn expect_params(name: &str, params: &[f64], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(Error::BadParamCount {
            name: name.into(),
            expected: n,
            got: params.len(),
        });
    }
    Ok(())
}

/// The qutrit magic states and parameterized families used throughout.
///
/// `max_coherent` takes the d−1 phases θ₁…θ_{d−1} (θ₀ = 0), so its
/// dimension is `params.len() + 1`. `basis` takes `[d, j]`.
pub fn named_state(name: &str, params: &[f64]) -> Result<PureVector> {
    let s3 = 3f64.sqrt();
    let amps = match name {
        "strange" => {
            expect_params(name, params, 0)?;
            vec![c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]
        }
        "norrell" => {
            expect_params(name, params, 0)?;
            let n = 6f64.sqrt();
            vec![c(-1.0 / n, 0.0), c(2.0 / n, 0.0), c(-1.0 / n, 0.0)]
        }
        "t" => {
            expect_params(name, params, 0)?;
            vec![
                C64::from_polar(1.0 / s3, 2.0 * PI / 9.0),
                c(1.0 / s3, 0.0),
                C64::from_polar(1.0 / s3, -2.0 * PI / 9.0),
            ]
        }
        "h" => {
            expect_params(name, params, 0)?;
            let n = (2.0 * (3.0 + s3)).sqrt();
            vec![
                c((1.0 + s3) / n, 0.0),
                c(1.0 / n, 0.0),
                C64::from_polar(1.0 / n, -2.0 * PI / 9.0),
            ]
        }
        "phi_lambda" => {
            expect_params(name, params, 1)?;
            let lam = params[0];
            if !(0.0..=FRAC_1_SQRT_2 + 1e-15).contains(&lam) {
                return Err(Error::ParamOutOfRange(format!(
                    "lambda = {lam} not in [0, 1/sqrt(2)]"
                )));
            }
            let rest = (1.0 - 2.0 * lam * lam).max(0.0).sqrt();
            vec![c(lam, 0.0), c(lam, 0.0), c(rest, 0.0)]
        }
        "psi_theta" => {
            expect_params(name, params, 1)?;
            let th = params[0];
            if !th.is_finite() {
                return Err(Error::ParamOutOfRange(format!("theta = {th}")));
            }
            vec![c(th.cos(), 0.0), c(th.sin(), 0.0), c(0.0, 0.0)]
        }
        "max_coherent" => {
            let d = params.len() + 1;
            PrimeDim::new(d as u64)?;
            if params.iter().any(|t| !t.is_finite()) {
                return Err(Error::ParamOutOfRange("non-finite phase".into()));
            }
            let amp = 1.0 / (d as f64).sqrt();
            std::iter::once(c(amp, 0.0))
                .chain(params.iter().map(|&t| C64::from_polar(amp, t)))
                .collect()
        }
        "basis" => {
            expect_params(name, params, 2)?;
            let (d, j) = (params[0], params[1]);
            if d.fract() != 0.0 || j.fract() != 0.0 || j < 0.0 || j >= d {
                return Err(Error::ParamOutOfRange(format!(
                    "basis index {j} in dimension {d}"
                )));
            }
            PrimeDim::new(d as u64)?;
            return Ok(basis(d as usize, j as usize));
        }
        other => return Err(Error::UnknownState(other.into())),
    };
    PureVector::new(amps)
}

/// `p|ψ⟩⟨ψ| + (1-p)·1/d`.
pub fn noisy_mix(psi: &PureVector, p: f64) -> Result<DensityState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParamOutOfRange(format!(
            "mixing weight p = {p} not in [0, 1]"
        )));
    }
    let d = psi.dim();
    let dim = PrimeDim::new(d as u64)?;
    let proj = ComplexMatrix::outer(psi.amplitudes()).scale_re(p);
    let noise = ComplexMatrix::identity(d).scale_re((1.0 - p) / d as f64);
    DensityState::from_parts(vec![dim], &proj + &noise)
}

/// Kronecker product; `a` indexes the slower computational digit.
pub fn tensor(a: &DensityState, b: &DensityState) -> DensityState {
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    DensityState {
        dims,
        matrix: a.matrix.kron(&b.matrix),
    }
}

/// Reduced state of a bipartite system on the kept side.
pub fn partial_trace(rho: &DensityState, keep: Side) -> Result<DensityState> {
    if rho.subsystems() != 2 {
        return Err(Error::NotBipartite(rho.subsystems()));
    }
    Ok(reduce(rho, &[keep.index()]))
}

/// Reduced state on the listed subsystems (kept in ascending order).
pub fn reduce(rho: &DensityState, keep: &[usize]) -> DensityState {
    let ds = rho.dims();
    let n = ds.len();
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    assert!(keep.iter().all(|&s| s < n), "subsystem index out of range");
    let traced: Vec<usize> = (0..n).filter(|s| !keep.contains(s)).collect();

    let kept_dims: Vec<usize> = keep.iter().map(|&s| ds[s]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&s| ds[s]).collect();
    let kept_total: usize = kept_dims.iter().product();
    let traced_total: usize = traced_dims.iter().product();

    // Full index from (kept multi-index, traced multi-index).
    let full_index = |kept_flat: usize, traced_flat: usize| -> usize {
        let mut digits = vec![0usize; n];
        let mut r = kept_flat;
        for (pos, &s) in keep.iter().enumerate().rev() {
            digits[s] = r % kept_dims[pos];
            r /= kept_dims[pos];
        }
        let mut r = traced_flat;
        for (pos, &s) in traced.iter().enumerate().rev() {
            digits[s] = r % traced_dims[pos];
            r /= traced_dims[pos];
        }
        digits.iter().zip(&ds).fold(0, |acc, (&x, &d)| acc * d + x)
    };

    let mut out = ComplexMatrix::zeros(kept_total);
    for i in 0..kept_total {
        for j in 0..kept_total {
            let mut acc = c(0.0, 0.0);
            for t in 0..traced_total {
                acc += rho.matrix[(full_index(i, t), full_index(j, t))];
            }
            out[(i, j)] = acc;
        }
    }
    DensityState {
        dims: keep.iter().map(|&s| rho.dims[s]).collect(),
        matrix: out,
    }
}

/// All d(d+1) pure stabilizer states of one qudit: the computational basis
/// plus the quadratic-phase states `d^{-1/2} Σ_j ω^{a j² + b j} |j⟩`, which
/// are the eigenbases of `X Z^{2a}`.
pub fn enumerate_stabilizer_pure(dim: PrimeDim) -> Result<Vec<PureVector>> {
    let d = dim.get();
    if d > MAX_ENUM_DIM {
        return Err(Error::DimensionTooLarge(d, MAX_ENUM_DIM));
    }
    let mut out: Vec<PureVector> = (0..d).map(|j| basis(d, j)).collect();
    let amp = 1.0 / (d as f64).sqrt();
    for a in 0..d as i64 {
        for b in 0..d as i64 {
            let amps = (0..d as i64)
                .map(|j| dim.omega_pow(a * j * j + b * j) * amp)
                .collect();
            out.push(PureVector { amplitudes: amps });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Debug, Deserialize)]
struct StateDoc {
    dims: Vec<u64>,
    kind: StateKind,
    data: Value,
}

/// A state read from the JSON interchange format.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedState {
    Pure {
        dims: Vec<usize>,
        vector: PureVector,
    },
    Mixed(DensityState),
}

impl ParsedState {
    pub fn into_density(self) -> Result<DensityState> {
        match self {
            ParsedState::Pure { dims, vector } => DensityState::from_pure(&vector, &dims),
            ParsedState::Mixed(rho) => Ok(rho),
        }
    }
}

fn parse_complex(v: &Value) -> Result<C64> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Format(format!("expected [re, im], got {v}")))?;
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| Error::Format("non-numeric real part".into()))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| Error::Format("non-numeric imaginary part".into()))?;
    Ok(c(re, im))
}

fn parse_vector(v: &Value) -> Result<Vec<C64>> {
    v.as_array()
        .ok_or_else(|| Error::Format("expected an array of [re, im] pairs".into()))?
        .iter()
        .map(parse_complex)
        .collect()
}

/// Parses `{"dims": [...], "kind": "pure"|"mixed", "data": ...}`.
pub fn parse_state_json(text: &str) -> Result<ParsedState> {
    let doc: StateDoc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let dims: Vec<usize> = doc.dims.iter().map(|&d| d as usize).collect();
    for &d in &doc.dims {
        PrimeDim::new(d)?;
    }
    let total: usize = dims.iter().product();
    match doc.kind {
        StateKind::Pure => {
            let amps = parse_vector(&doc.data)?;
            if amps.len() != total {
                return Err(Error::DimensionMismatch(format!(
                    "dims multiply to {total} but vector has {} entries",
                    amps.len()
                )));
            }
            Ok(ParsedState::Pure {
                dims,
                vector: PureVector::new(amps)?,
            })
        }
        StateKind::Mixed => {
            let rows = doc
                .data
                .as_array()
                .ok_or_else(|| Error::Format("mixed data must be an array of rows".into()))?;
            if rows.len() != total {
                return Err(Error::DimensionMismatch(format!(
                    "dims multiply to {total} but matrix has {} rows",
                    rows.len()
                )));
            }
            let mut entries = Vec::with_capacity(total * total);
            for row in rows {
                let r = parse_vector(row)?;
                if r.len() != total {
                    return Err(Error::DimensionMismatch("ragged density-matrix row".into()));
                }
                entries.extend(r);
            }
            let m = ComplexMatrix::from_row_major(entries).expect("square by construction");
            Ok(ParsedState::Mixed(DensityState::new(dims, m)?))
        }
    }
}
