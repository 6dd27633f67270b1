//! Phase searches over maximally coherent states and the local-unitary
//! minimizer behind the nonlocal mana bound.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuits::{beamsplitter, BeamsplitterSpec};
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, C64};
use crate::measures::{mana, mutual_mana};
use crate::optimize::{golden_max, NelderMead};
use crate::phasespace::{operators, PrimeDim, SlotTensor};
use crate::random::haar_unitary;
use crate::states::{basis, named_state, reduce, DensityState, PureVector};

/// Largest dimension the exhaustive phase grid is run for.
pub const MAX_SEARCH_DIM: usize = 7;
pub const MIN_GRID: usize = 8;
/// Refined optima within this of the best are reported together.
pub const ARGMAX_VALUE_TOL: f64 = 1e-6;
/// Optima closer than this (max-coordinate circular distance) are merged.
pub const DEDUP_ANGLE: f64 = 1e-3;
/// Number of grid local maxima handed to refinement.
pub const REFINE_CANDIDATES: usize = 32;

/// Default grid points per angle.
pub fn default_grid(dim: PrimeDim) -> usize {
    match dim.get() {
        3 => 64,
        5 => 24,
        _ => 12,
    }
}

pub const DEFAULT_REFINE: usize = 200;

/// Phases θ₁…θ_{d−1} of `d^{-1/2} Σ_j e^{iθ_j}|j⟩`, with θ₀ = 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseVector {
    #[serde(serialize_with = "ser_dim")]
    dim: PrimeDim,
    thetas: Vec<f64>,
}

fn ser_dim<S: serde::Serializer>(d: &PrimeDim, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.get() as u64)
}

fn wrap(t: f64) -> f64 {
    let w = t.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl PhaseVector {
    /// Phases are wrapped into [0, 2π).
    pub fn new(dim: PrimeDim, thetas: Vec<f64>) -> Result<Self> {
        if thetas.len() + 1 != dim.get() {
            return Err(Error::DimensionMismatch(format!(
                "{} phases for dimension {dim}",
                thetas.len()
            )));
        }
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::ParamOutOfRange("non-finite phase".into()));
        }
        Ok(Self {
            dim,
            thetas: thetas.into_iter().map(wrap).collect(),
        })
    }

    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn state(&self) -> PureVector {
        named_state("max_coherent", &self.thetas).expect("validated phases")
    }

    /// Mana through the general density-matrix path.
    pub fn mana(&self) -> f64 {
        mana(&DensityState::pure(&self.state()).expect("pure state")).expect("odd prime dimension")
    }

    /// Largest per-coordinate circular distance.
    pub fn angular_distance(&self, other: &Self) -> f64 {
        self.thetas
            .iter()
            .zip(&other.thetas)
            .map(|(a, b)| {
                let d = (a - b).abs().rem_euclid(TAU);
                d.min(TAU - d)
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Optimum {
    pub theta: PhaseVector,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub best_value: f64,
    /// Best value seen on the raw grid, before refinement.
    pub grid_best: f64,
    pub argmax: Vec<Optimum>,
    pub evaluations: usize,
    pub grid: usize,
    pub refine_iters: usize,
}

/// Mana of a maximally coherent state using the one-nonzero-per-row
/// structure of the point operators.
struct CoherentMana {
    d: usize,
    /// For each operator, `(column, value)` of the nonzero in each row.
    rows: Vec<Vec<(usize, C64)>>,
}

impl CoherentMana {
    fn new(dim: PrimeDim) -> Self {
        let d = dim.get();
        let set = operators(dim);
        let rows = set
            .point_ops
            .iter()
            .map(|a| {
                (0..d)
                    .map(|m| {
                        let col = (0..d)
                            .find(|&n| a[(m, n)].norm() > 0.5)
                            .expect("monomial operator");
                        (col, a[(m, col)])
                    })
                    .collect()
            })
            .collect();
        Self { d, rows }
    }

    fn eval(&self, thetas: &[f64]) -> f64 {
        let amp: Vec<C64> = std::iter::once(c(1.0, 0.0))
            .chain(thetas.iter().map(|&t| C64::from_polar(1.0, t)))
            .collect();
        let mut total = 0.0;
        for op in &self.rows {
            let mut w = c(0.0, 0.0);
            for (m, &(n, v)) in op.iter().enumerate() {
                w += amp[m].conj() * v * amp[n];
            }
            total += w.re.abs();
        }
        // |ψ| entries are d^{-1/2} and W carries another 1/d.
        (total / (self.d * self.d) as f64).ln()
    }
}

fn grid_point(index: usize, grid: usize, n: usize) -> Vec<f64> {
    let mut rem = index;
    let mut out = vec![0.0; n];
    for slot in out.iter_mut().rev() {
        *slot = TAU * (rem % grid) as f64 / grid as f64;
        rem /= grid;
    }
    out
}

/// Grid cells that are at least as large as all 2n axis neighbours.
fn grid_local_maxima(values: &[f64], grid: usize, n: usize) -> Vec<usize> {
    (0..values.len())
        .into_par_iter()
        .filter(|&idx| {
            let v = values[idx];
            let mut stride = 1;
            for _ in 0..n {
                let digit = (idx / stride) % grid;
                let up = idx - digit * stride + ((digit + 1) % grid) * stride;
                let down = idx - digit * stride + ((digit + grid - 1) % grid) * stride;
                if values[up] > v || values[down] > v {
                    return false;
                }
                stride *= grid;
            }
            true
        })
        .collect()
}

/// Coordinate-wise golden-section ascent; each sweep brackets every
/// coordinate by ±h and halves h afterwards.
fn refine(f: &CoherentMana, start: Vec<f64>, h0: f64, iters: usize) -> (Vec<f64>, f64, usize) {
    let mut x = start;
    let mut best = f.eval(&x);
    let mut evals = 1;
    let mut h = h0;
    for _ in 0..iters {
        let before = best;
        for i in 0..x.len() {
            let mut probe = x.clone();
            let (t, v, e) = golden_max(
                |t| {
                    probe[i] = t;
                    f.eval(&probe)
                },
                x[i] - h,
                x[i] + h,
                200,
                1e-13,
            );
            evals += e;
            if v > best {
                best = v;
                x[i] = t;
            }
        }
        if before - best == 0.0 && h < 1e-10 {
            break;
        }
        h = (h * 0.5).max(1e-12);
    }
    (x, best, evals)
}

/// Exhaustive phase grid followed by local refinement of the strongest
/// grid maxima.
pub fn max_mana_coherent(dim: PrimeDim, grid: usize, refine_iters: usize) -> Result<SearchResult> {
    let d = dim.get();
    if d > MAX_SEARCH_DIM {
        return Err(Error::DimensionTooLarge(d, MAX_SEARCH_DIM));
    }
    if grid < MIN_GRID {
        return Err(Error::ParamOutOfRange(format!(
            "grid = {grid} is below {MIN_GRID}"
        )));
    }
    let n = d - 1;
    let cells = grid.pow(n as u32);
    let f = CoherentMana::new(dim);
    let values: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|idx| f.eval(&grid_point(idx, grid, n)))
        .collect();
    let grid_best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut peaks = grid_local_maxima(&values, grid, n);
    peaks.sort_by(|a, b| values[*b].total_cmp(&values[*a]).then(a.cmp(b)));
    peaks.truncate(REFINE_CANDIDATES);

    let h0 = TAU / grid as f64;
    let refined: Vec<(Vec<f64>, f64, usize)> = peaks
        .par_iter()
        .map(|&idx| refine(&f, grid_point(idx, grid, n), h0, refine_iters))
        .collect();
    let evaluations = cells + refined.iter().map(|r| r.2).sum::<usize>();
    let best_value = refined.iter().map(|r| r.1).fold(grid_best, f64::max);

    let mut kept: Vec<Optimum> = refined
        .into_iter()
        .filter(|r| r.1 >= best_value - ARGMAX_VALUE_TOL)
        .map(|(x, v, _)| Optimum {
            theta: PhaseVector::new(dim, x).expect("phase count matches"),
            value: v,
        })
        .collect();
    kept.sort_by(|a, b| {
        a.theta
            .thetas
            .iter()
            .zip(&b.theta.thetas)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut argmax: Vec<Optimum> = Vec::new();
    for opt in kept {
        if argmax
            .iter()
            .all(|o| o.theta.angular_distance(&opt.theta) >= DEDUP_ANGLE)
        {
            argmax.push(opt);
        }
    }
    Ok(SearchResult {
        best_value,
        grid_best,
        argmax,
        evaluations,
        grid,
        refine_iters,
    })
}

/// `(mutual mana of B_G(|ψ_θ⟩⊗|0⟩), mana of |ψ_θ⟩)`.
pub fn mutual_mana_coherent_equals_mana(
    dim: PrimeDim,
    theta: &PhaseVector,
    spec: &BeamsplitterSpec,
) -> Result<(f64, f64)> {
    if spec.dim() != dim || theta.dim() != dim {
        return Err(Error::DimensionMismatch(
            "phase vector and beamsplitter dimensions differ".into(),
        ));
    }
    if !spec.beta_delta_nonzero() {
        return Err(Error::BetaDeltaZero);
    }
    let d = dim.get();
    let psi = theta.state();
    let input = DensityState::from_pure(&psi.kron(&basis(d, 0)), &[d, d])?;
    let out = input.evolve(&beamsplitter(spec))?;
    Ok((mutual_mana(&out)?, mana(&DensityState::pure(&psi)?)?))
}

/// Mana values at or below this are treated as already minimal.
pub const ZERO_MANA: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
pub struct NonlocalConfig {
    pub restarts: usize,
    pub seed: u64,
    /// Block-coordinate sweeps over the subsystems per restart.
    pub max_sweeps: usize,
    pub simplex: NelderMead,
}

impl Default for NonlocalConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            seed: 42,
            max_sweeps: 10,
            simplex: NelderMead {
                step: 0.3,
                f_tol: 1e-9,
                max_evals: 600,
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct NonlocalResult {
    /// Smallest mana found, natural log.
    pub value: f64,
    /// Mana of the input state.
    pub initial: f64,
    pub evaluations: usize,
    pub best_restart: usize,
    /// Local unitaries attaining `value`, one per subsystem.
    pub unitaries: Vec<ComplexMatrix>,
    /// Final value of each restart that ran, in restart order.
    pub restart_values: Vec<f64>,
}

/// Orthonormal Hermitian basis of d×d matrices: diagonal units, then the
/// symmetric and antisymmetric off-diagonal pairs.
fn hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(d * d);
    for j in 0..d {
        out.push(ComplexMatrix::from_fn(d, |r, s| {
            if r == j && s == j {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        }));
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut sym = ComplexMatrix::zeros(d);
            sym[(j, k)] = c(FRAC_1_SQRT_2, 0.0);
            sym[(k, j)] = c(FRAC_1_SQRT_2, 0.0);
            out.push(sym);
            let mut anti = ComplexMatrix::zeros(d);
            anti[(j, k)] = c(0.0, -FRAC_1_SQRT_2);
            anti[(k, j)] = c(0.0, FRAC_1_SQRT_2);
            out.push(anti);
        }
    }
    out
}

struct LocalOrbit {
    tensor: SlotTensor,
    ds: Vec<usize>,
    /// Per subsystem and point operator, the `(column, value)` of the
    /// single nonzero in each row.
    monomials: Vec<Vec<Vec<(usize, C64)>>>,
    point_ops: Vec<Vec<ComplexMatrix>>,
    bases: Vec<Vec<ComplexMatrix>>,
    norm: f64,
}

/// One subsystem's view of the objective with every other slot fixed:
/// each row holds the Hermitian-basis coordinates of a partially
/// contracted operator, so each Wigner value is a real dot product.
/// Parallel rows are merged into one unit row carrying their summed norm,
/// which is exact because `Σ|λ y·a| = |λ| Σ|y·a|`.
struct Block {
    width: usize,
    rows: Vec<f64>,
    weights: Vec<f64>,
}

/// Relative tolerance under which two normalized rows are merged.
const MERGE_TOL: f64 = 1e-12;

impl Block {
    fn from_rows(width: usize, raw: &[f64]) -> Self {
        let mut rows: Vec<f64> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for row in raw.chunks_exact(width) {
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            // Sign-canonical unit vector: largest-magnitude entry positive.
            let lead = row
                .iter()
                .copied()
                .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            let scale = lead.signum() / norm;
            let unit: Vec<f64> = row.iter().map(|x| x * scale).collect();
            let hit = rows
                .chunks_exact(width)
                .position(|g| g.iter().zip(&unit).all(|(a, b)| (a - b).abs() <= MERGE_TOL));
            match hit {
                Some(i) => weights[i] += norm,
                None => {
                    rows.extend_from_slice(&unit);
                    weights.push(norm);
                }
            }
        }
        Self {
            width,
            rows,
            weights,
        }
    }
}

fn monomial_rows(a: &ComplexMatrix) -> Vec<(usize, C64)> {
    let d = a.dim();
    (0..d)
        .map(|m| {
            let col = (0..d)
                .find(|&n| a[(m, n)].norm() > 0.5)
                .expect("monomial operator");
            (col, a[(m, col)])
        })
        .collect()
}

impl LocalOrbit {
    fn new(rho: &DensityState, dims: &[PrimeDim]) -> Self {
        let ds: Vec<usize> = dims.iter().map(|d| d.get()).collect();
        let point_ops: Vec<Vec<ComplexMatrix>> = dims
            .iter()
            .map(|d| operators(*d).point_ops.clone())
            .collect();
        Self {
            tensor: SlotTensor::from_matrix(rho.matrix(), &ds),
            monomials: point_ops
                .iter()
                .map(|ops| ops.iter().map(monomial_rows).collect())
                .collect(),
            point_ops,
            bases: ds.iter().map(|&d| hermitian_basis(d)).collect(),
            norm: ds.iter().product::<usize>() as f64,
            ds,
        }
    }

    fn rotated(&self, s: usize, u: &ComplexMatrix) -> Vec<ComplexMatrix> {
        let ud = u.adjoint();
        self.point_ops[s].iter().map(|a| &(&ud * a) * u).collect()
    }

    fn unitary(&self, s: usize, x: &[f64], frame: &ComplexMatrix) -> ComplexMatrix {
        let d = self.ds[s];
        let mut h = ComplexMatrix::zeros(d);
        for (b, &xi) in self.bases[s].iter().zip(x) {
            if xi != 0.0 {
                h = &h + &b.scale_re(xi);
            }
        }
        &h.exp_i_hermitian() * frame
    }

    /// Tensor with every slot except `skip` contracted against rotated
    /// point operators.
    fn partial(&self, frames: &[ComplexMatrix], skip: Option<usize>) -> SlotTensor {
        let mut t = self.tensor.clone();
        for (s, u) in frames.iter().enumerate() {
            if Some(s) != skip {
                t = t.contract(s, &self.rotated(s, u));
            }
        }
        t
    }

    fn value(&self, frames: &[ComplexMatrix]) -> f64 {
        let t = self.partial(frames, None);
        (t.data().iter().map(|v| v.re.abs()).sum::<f64>() / self.norm).ln()
    }

    fn block(&self, frames: &[ComplexMatrix], s: usize) -> Block {
        let coords = self.partial(frames, Some(s)).contract(s, &self.bases[s]);
        let width = self.ds[s] * self.ds[s];
        let inner: usize = self.ds[s + 1..].iter().map(|x| x * x).product();
        let outer: usize = self.ds[..s].iter().map(|x| x * x).product();
        let data = coords.data();
        let mut raw = Vec::with_capacity(outer * inner * width);
        for o in 0..outer {
            for t in 0..inner {
                for k in 0..width {
                    raw.push(data[(o * width + k) * inner + t].re);
                }
            }
        }
        Block::from_rows(width, &raw)
    }

    /// `a[q·w + k] = tr(U† A_q U E_k)`.
    fn rotated_coords(&self, s: usize, u: &ComplexMatrix) -> Vec<f64> {
        let ud = u.adjoint();
        let width = self.ds[s] * self.ds[s];
        let rotated_basis: Vec<ComplexMatrix> =
            self.bases[s].iter().map(|e| &(u * e) * &ud).collect();
        let mut out = Vec::with_capacity(width * width);
        for op in &self.monomials[s] {
            for f in &rotated_basis {
                let tr: C64 = op
                    .iter()
                    .enumerate()
                    .map(|(m, &(col, v))| v * f[(col, m)])
                    .sum();
                out.push(tr.re);
            }
        }
        out
    }

    fn block_value(&self, block: &Block, coords: &[f64]) -> f64 {
        let w = block.width;
        let mut total = 0.0;
        for (row, weight) in block.rows.chunks_exact(w).zip(&block.weights) {
            let mut acc = 0.0;
            for a in coords.chunks_exact(w) {
                let dot: f64 = row.iter().zip(a).map(|(y, x)| y * x).sum();
                acc += dot.abs();
            }
            total += weight * acc;
        }
        (total / self.norm).ln()
    }

    /// Block-coordinate simplex descent from `frames`.
    fn descend(
        &self,
        mut frames: Vec<ComplexMatrix>,
        config: &NonlocalConfig,
    ) -> (Vec<ComplexMatrix>, f64, usize) {
        let mut best = self.value(&frames);
        let mut evals = 1;
        for _ in 0..config.max_sweeps {
            if best <= ZERO_MANA {
                break;
            }
            let before = best;
            for s in 0..frames.len() {
                let block = self.block(&frames, s);
                let frame = frames[s].clone();
                let objective = |x: &[f64]| {
                    let u = self.unitary(s, x, &frame);
                    self.block_value(&block, &self.rotated_coords(s, &u))
                };
                let m = config
                    .simplex
                    .minimize(objective, &vec![0.0; self.ds[s] * self.ds[s]]);
                evals += m.evaluations;
                if m.value < best {
                    best = m.value;
                    frames[s] = self.unitary(s, &m.x, &frame);
                }
            }
            if before - best < config.simplex.f_tol {
                break;
            }
        }
        (frames, best, evals)
    }
}

/// Minimizes mana over products of single-subsystem unitaries
/// `⊗_s U_s`. Restart 0 starts from the identity, restart 1 from the
/// eigenbases of the one-body marginals, later restarts from Haar-random
/// frames drawn from stream `r` of the seeded generator.
pub fn nonlocal_search(rho: &DensityState, config: &NonlocalConfig) -> Result<NonlocalResult> {
    if config.restarts == 0 {
        return Err(Error::ParamOutOfRange("restarts must be at least 1".into()));
    }
    let dims = rho.prime_dims()?;
    let ds: Vec<usize> = dims.iter().map(|d| d.get()).collect();
    let orbit = LocalOrbit::new(rho, &dims);

    let identity: Vec<ComplexMatrix> = ds.iter().map(|&d| ComplexMatrix::identity(d)).collect();
    let initial = orbit.value(&identity);
    let mut result = NonlocalResult {
        value: initial,
        initial,
        evaluations: 1,
        best_restart: 0,
        unitaries: identity.clone(),
        restart_values: Vec::new(),
    };
    if initial <= ZERO_MANA {
        return Ok(result);
    }

    let start = |r: usize| -> Vec<ComplexMatrix> {
        match r {
            0 => identity.clone(),
            1 => (0..ds.len())
                .map(|s| reduce(rho, &[s]).matrix().eigh().1.adjoint())
                .collect(),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(r as u64);
                ds.iter().map(|&d| haar_unitary(&mut rng, d)).collect()
            }
        }
    };
    let absorb = |result: &mut NonlocalResult,
                  r: usize,
                  (frames, v, e): (Vec<ComplexMatrix>, f64, usize)| {
        result.evaluations += e;
        result.restart_values.push(v);
        if v < result.value {
            result.value = v;
            result.best_restart = r;
            result.unitaries = frames;
        }
    };

    for r in 0..config.restarts.min(2) {
        absorb(&mut result, r, orbit.descend(start(r), config));
    }
    if config.restarts > 2 && result.value > ZERO_MANA {
        let runs: Vec<_> = (2..config.restarts)
            .into_par_iter()
            .map(|r| orbit.descend(start(r), config))
            .collect();
        for (i, run) in runs.into_iter().enumerate() {
            absorb(&mut result, i + 2, run);
        }
    }
    Ok(result)
}
