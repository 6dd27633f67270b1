//! Heisenberg–Weyl operators, phase-space point operators, and the discrete
//! Wigner transform for odd prime dimensions.
//!
//! Phases are always built from an exact integer exponent: `ω^a = τ^{2a}`
//! and `τ^b = exp(iπ·((d+1)b mod 2d)/d)`, so a single `from_polar` call
//! produces every entry.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::states::DensityState;

/// Largest dimension any operator cache will be built for.
pub const MAX_DIM: usize = 97;

/// Imaginary parts below this are discarded silently.
pub const REALNESS_TOL: f64 = 1e-10;
/// Imaginary parts above this are a hard error.
pub const IMAGINARY_ERROR_TOL: f64 = 1e-8;

/// An odd prime local dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeDim(usize);

impl PrimeDim {
    pub fn new(d: u64) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) || !is_prime(d) {
            return Err(Error::NotOddPrime(d));
        }
        if d as usize > MAX_DIM {
            return Err(Error::DimensionTooLarge(d as usize, MAX_DIM));
        }
        Ok(Self(d as usize))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Residue of `a` mod d in `0..d`.
    #[inline]
    pub fn reduce(self, a: i64) -> usize {
        a.rem_euclid(self.0 as i64) as usize
    }

    pub fn point(self, k: i64, l: i64) -> PhasePoint {
        PhasePoint {
            k: self.reduce(k),
            l: self.reduce(l),
        }
    }

    /// All d² points, `k` major.
    pub fn points(self) -> impl Iterator<Item = PhasePoint> {
        let d = self.0;
        (0..d * d).map(move |i| PhasePoint { k: i / d, l: i % d })
    }

    /// `ω^a` with `ω = e^{2πi/d}`.
    pub fn omega_pow(self, a: i64) -> C64 {
        let d = self.0 as i64;
        let e = a.rem_euclid(d);
        C64::from_polar(1.0, 2.0 * PI * e as f64 / d as f64)
    }

    /// `τ^b` with `τ = -e^{iπ/d}`.
    pub fn tau_pow(self, b: i64) -> C64 {
        let d = self.0 as i64;
        // τ = e^{iπ(d+1)/d}
        let e = (b.rem_euclid(2 * d) * (d + 1)).rem_euclid(2 * d);
        C64::from_polar(1.0, PI * e as f64 / d as f64)
    }

    /// Multiplicative inverse mod d via Fermat: `a^{d-2}`.
    pub fn inv(self, a: i64) -> Option<usize> {
        let d = self.0 as u64;
        let a = self.reduce(a) as u64;
        if a == 0 {
            return None;
        }
        let (mut base, mut exp, mut acc) = (a, d - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % d;
            }
            base = base * base % d;
            exp >>= 1;
        }
        Some(acc as usize)
    }
}

impl std::fmt::Display for PrimeDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// A point `(k, l)` of the discrete phase space Z_d × Z_d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhasePoint {
    pub k: usize,
    pub l: usize,
}

impl PhasePoint {
    #[inline]
    pub fn index(self, dim: PrimeDim) -> usize {
        self.k * dim.get() + self.l
    }
}

/// Heisenberg–Weyl operator `D_{k,l} = τ^{kl} X^k Z^l`.
pub fn weyl(dim: PrimeDim, pt: PhasePoint) -> ComplexMatrix {
    let d = dim.get();
    assert!(pt.k < d && pt.l < d, "phase point out of range");
    let (k, l) = (pt.k as i64, pt.l as i64);
    let mut m = ComplexMatrix::zeros(d);
    for j in 0..d as i64 {
        // X^k Z^l |j> = ω^{lj} |j+k>, and ω = τ².
        m[(dim.reduce(j + k), j as usize)] = dim.tau_pow(k * l + 2 * l * j);
    }
    m
}

/// Phase-space point operator `A_{k,l} = D_{k,l} A_{0,0} D_{k,l}†`.
pub fn phase_point_operator(dim: PrimeDim, pt: PhasePoint) -> ComplexMatrix {
    assert!(
        pt.k < dim.get() && pt.l < dim.get(),
        "phase point out of range"
    );
    operators(dim).point_ops[pt.index(dim)].clone()
}

/// Cached operator set for one dimension.
#[derive(Debug)]
pub struct OperatorSet {
    pub dim: PrimeDim,
    /// `D_{k,l}` indexed by `k·d + l`.
    pub weyl_ops: Vec<ComplexMatrix>,
    /// `A_{k,l}` indexed by `k·d + l`.
    pub point_ops: Vec<ComplexMatrix>,
}

impl OperatorSet {
    fn build(dim: PrimeDim) -> Self {
        let d = dim.get();
        let weyl_ops: Vec<ComplexMatrix> = dim.points().map(|p| weyl(dim, p)).collect();
        // Parity operator: A_{0,0}|n> = |-n>.
        let parity = ComplexMatrix::from_fn(d, |m, n| {
            if (m + n) % d == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let point_ops = weyl_ops.iter().map(|w| parity.conjugate_by(w)).collect();
        Self {
            dim,
            weyl_ops,
            point_ops,
        }
    }
}

type Cache = RwLock<HashMap<usize, Arc<OperatorSet>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shared operator set for `dim`; built on first use. Concurrent first
/// callers may each build one, the first insert wins.
pub fn operators(dim: PrimeDim) -> Arc<OperatorSet> {
    if let Some(ops) = cache()
        .read()
        .expect("operator cache poisoned")
        .get(&dim.get())
    {
        return Arc::clone(ops);
    }
    let built = Arc::new(OperatorSet::build(dim));
    let mut guard = cache().write().expect("operator cache poisoned");
    Arc::clone(guard.entry(dim.get()).or_insert(built))
}

/// Which operator family to contract a state against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Family {
    Weyl,
    PointOps,
}

/// A density matrix regrouped so each subsystem owns one slot of size d_s²,
/// slot 0 slowest. Slots start as raw `(i, j)` index pairs and are replaced
/// by operator labels as they are contracted.
#[derive(Clone, Debug)]
pub(crate) struct SlotTensor {
    ds: Vec<usize>,
    data: Vec<C64>,
}

impl SlotTensor {
    pub(crate) fn from_matrix(rho: &ComplexMatrix, ds: &[usize]) -> Self {
        let n = ds.len();
        let total: usize = ds.iter().product();
        assert_eq!(
            total,
            rho.dim(),
            "subsystem dimensions do not match the matrix"
        );
        let mut data = vec![C64::new(0.0, 0.0); total * total];
        for row in 0..total {
            for col in 0..total {
                let (mut r, mut cc) = (row, col);
                let mut idx = 0usize;
                let mut stride = 1usize;
                for s in (0..n).rev() {
                    let (i, j) = (r % ds[s], cc % ds[s]);
                    r /= ds[s];
                    cc /= ds[s];
                    idx += (i * ds[s] + j) * stride;
                    stride *= ds[s] * ds[s];
                }
                data[idx] = rho[(row, col)];
            }
        }
        Self {
            ds: ds.to_vec(),
            data,
        }
    }

    /// Replaces raw slot `s` by labels `q`: `Y[..q..] = Σ_{i,j} X[..(i,j)..] M_q[j,i]`.
    /// `ops` must hold exactly d_s² operators.
    pub(crate) fn contract(&self, s: usize, ops: &[ComplexMatrix]) -> Self {
        let d = self.ds[s];
        let m = d * d;
        assert_eq!(ops.len(), m, "one operator per slot label");
        let inner: usize = self.ds[s + 1..].iter().map(|x| x * x).product();
        let outer: usize = self.ds[..s].iter().map(|x| x * x).product();
        let mut next = vec![C64::new(0.0, 0.0); self.data.len()];
        for o in 0..outer {
            for (q, op) in ops.iter().enumerate() {
                let dst = (o * m + q) * inner;
                for i in 0..d {
                    for j in 0..d {
                        let w = op[(j, i)];
                        if w == C64::new(0.0, 0.0) {
                            continue;
                        }
                        let src = (o * m + i * d + j) * inner;
                        let (head, tail) =
                            (&self.data[src..src + inner], &mut next[dst..dst + inner]);
                        for (t, x) in tail.iter_mut().zip(head) {
                            *t += x * w;
                        }
                    }
                }
            }
        }
        Self {
            ds: self.ds.clone(),
            data: next,
        }
    }

    pub(crate) fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub(crate) fn data(&self) -> &[C64] {
        &self.data
    }
}

/// `T[q_1, …, q_n] = tr(ρ · (M_{q_1} ⊗ … ⊗ M_{q_n}))` where each `M` runs
/// over the d_s² operators of `family` for subsystem `s`. Output is
/// row-major with subsystem 0 slowest.
pub(crate) fn local_expectations(
    rho: &ComplexMatrix,
    dims: &[PrimeDim],
    family: Family,
) -> Vec<C64> {
    let ds: Vec<usize> = dims.iter().map(|d| d.get()).collect();
    let mut tensor = SlotTensor::from_matrix(rho, &ds);
    for (s, dim) in dims.iter().enumerate() {
        let set = operators(*dim);
        let ops = match family {
            Family::Weyl => &set.weyl_ops,
            Family::PointOps => &set.point_ops,
        };
        tensor = tensor.contract(s, ops);
    }
    tensor.into_data()
}

/// Discrete Wigner function over one phase-space point per subsystem.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerTable {
    dims: Vec<PrimeDim>,
    values: Vec<f64>,
}

impl WignerTable {
    /// Wraps raw values ordered `(k_1, l_1, k_2, l_2, …)` row-major.
    pub fn from_values(dims: Vec<PrimeDim>, values: Vec<f64>) -> Result<Self> {
        let expected: usize = dims.iter().map(|d| d.get() * d.get()).product();
        if values.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "expected {expected} Wigner values, got {}",
                values.len()
            )));
        }
        Ok(Self { dims, values })
    }

    pub fn dims(&self) -> &[PrimeDim] {
        &self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn flat_index(&self, pts: &[PhasePoint]) -> usize {
        assert_eq!(pts.len(), self.dims.len(), "one phase point per subsystem");
        pts.iter()
            .zip(&self.dims)
            .fold(0, |acc, (p, d)| acc * d.get() * d.get() + p.index(*d))
    }

    pub fn get(&self, pts: &[PhasePoint]) -> f64 {
        self.values[self.flat_index(pts)]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Σ|W|, the quantity inside the mana logarithm.
    pub fn abs_sum(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    /// Total weight of negative entries.
    pub fn sum_negativity(&self) -> f64 {
        self.values.iter().filter(|v| **v < 0.0).map(|v| -v).sum()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Single-qudit table shifted by `(m, n)`: `W'(k,l) = W(k-m, l-n)`.
    pub fn displaced(&self, m: i64, n: i64) -> WignerTable {
        assert_eq!(self.dims.len(), 1, "displacement defined for single qudits");
        let dim = self.dims[0];
        let values = dim
            .points()
            .map(|p| {
                let src = dim.point(p.k as i64 - m, p.l as i64 - n);
                self.values[src.index(dim)]
            })
            .collect();
        WignerTable {
            dims: self.dims.clone(),
            values,
        }
    }
}

/// `W_ρ(p_1,…,p_n) = tr(ρ ⊗_s A_{p_s}) / Π d_s`.
pub fn wigner(rho: &DensityState) -> Result<WignerTable> {
    let dims = rho.prime_dims()?;
    let norm: f64 = dims.iter().map(|d| d.get() as f64).product();
    let raw = local_expectations(rho.matrix(), &dims, Family::PointOps);
    let worst_im = raw.iter().map(|v| v.im.abs()).fold(0.0, f64::max) / norm;
    if worst_im > IMAGINARY_ERROR_TOL {
        return Err(Error::ImaginaryResidue(worst_im));
    }
    let values = raw.iter().map(|v| v.re / norm).collect();
    Ok(WignerTable { dims, values })
}

/// `ρ = Σ W(p) ⊗_s A_{p_s}`.
pub fn reconstruct(table: &WignerTable) -> Result<DensityState> {
    let matrix = synthesize(table);
    DensityState::new(table.dims.iter().map(|d| d.get()).collect(), matrix)
}

/// Reconstruction without validation; used where tables come from
/// arbitrary coefficient arrays.
pub(crate) fn synthesize(table: &WignerTable) -> ComplexMatrix {
    let ds: Vec<usize> = table.dims.iter().map(|d| d.get()).collect();
    let total: usize = ds.iter().product();
    let sets: Vec<Arc<OperatorSet>> = table.dims.iter().map(|d| operators(*d)).collect();
    let mut out = ComplexMatrix::zeros(total);
    for (flat, &w) in table.values.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        // Decompose the flat index into per-subsystem phase points.
        let mut rem = flat;
        let mut idx = vec![0usize; ds.len()];
        for s in (0..ds.len()).rev() {
            idx[s] = rem % (ds[s] * ds[s]);
            rem /= ds[s] * ds[s];
        }
        let mut op = sets[0].point_ops[idx[0]].clone();
        for s in 1..ds.len() {
            op = op.kron(&sets[s].point_ops[idx[s]]);
        }
        out = &out + &op.scale_re(w);
    }
    out
}
