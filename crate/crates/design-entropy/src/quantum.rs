//! Finite-dimensional states, channels, and spectral entropy functionals.
//!
//! Everything here is dense `f64` linear algebra with in-repo eigensolvers:
//! a cyclic Jacobi iteration for full Hermitian spectra and a power
//! iteration for the dominant eigenvalue. Tolerances are module constants
//! so every validation threshold is visible in one place.

use crate::moments::ChoiPartitionSpec;
use crate::permgroup::Permutation;
use crate::{Complex64, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Max entrywise deviation from Hermitian symmetry accepted by validators.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Max deviation of a density-matrix trace from 1.
pub const TRACE_TOL: f64 = 1e-12;
/// Max deviation of a pure-state norm from 1.
pub const NORM_TOL: f64 = 1e-12;
/// Max entrywise deviation of `U* U` from the identity.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted as numerical noise around zero.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;
/// Eigenvalues at or below this are treated as 0 in `x log x` sums.
pub const VN_CUTOFF: f64 = 1e-14;
/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// (relative to `max(1, ||A||_F)`).
pub const JACOBI_OFF_TOL: f64 = 1e-11;
const JACOBI_MAX_SWEEPS: usize = 60;
/// Power iteration stops when `||A v - lambda v|| <= tol * max(|lambda|, 1)`.
pub const POWER_RESIDUAL_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 20_000;
const POWER_RESTARTS: u64 = 4;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("rows must be non-empty and equal length".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "vector length must match columns");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.get(i, j) * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn dagger(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols, "trace needs a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, factor: f64) {
        for z in &mut self.data {
            *z *= factor;
        }
    }

    pub fn add_assign_scaled(&mut self, other: &CMatrix, factor: Complex64) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shapes must agree");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += factor * b;
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        let mut out = self.clone();
        out.add_assign_scaled(other, Complex64::new(-1.0, 0.0));
        out
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Max entrywise deviation from `A = A*`.
    pub fn hermiticity_error(&self) -> f64 {
        assert_eq!(self.rows, self.cols, "hermiticity needs a square matrix");
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

/// Full spectrum of a Hermitian matrix via cyclic Jacobi rotations,
/// descending. The input is checked against [`HERMITICITY_TOL`]; the
/// returned eigenvalues carry an absolute error bounded by the final
/// off-diagonal norm, below [`JACOBI_OFF_TOL`] times `max(1, ||A||_F)`.
pub fn hermitian_eigenvalues(matrix: &CMatrix) -> Result<Vec<f64>> {
    if matrix.rows != matrix.cols {
        return Err(Error::DimensionMismatch("eigenvalues need a square matrix".into()));
    }
    let herm = matrix.hermiticity_error();
    if herm > HERMITICITY_TOL {
        return Err(Error::NotDensity(format!("matrix is not Hermitian (deviation {herm:.3e})")));
    }
    let n = matrix.rows;
    if n == 1 {
        return Ok(vec![matrix.get(0, 0).re]);
    }
    let mut a = matrix.clone();
    let scale = a.frobenius_norm().max(1.0);
    let off = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let mut residual = off(&a);
    let mut sweeps = 0;
    while residual > JACOBI_OFF_TOL * scale {
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { residual, iterations: sweeps });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r <= f64::MIN_POSITIVE {
                    continue;
                }
                // Phase that makes the pivot real, then the classical
                // symmetric rotation angle for that real pivot.
                let phase = apq / r;
                let tau = (a.get(q, q).re - a.get(p, p).re) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_pq = s * phase;
                // Right-multiply by the rotation: columns p and q.
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, c * aip - s_pq.conj() * aiq);
                    a.set(i, q, s_pq * aip + c * aiq);
                }
                // Left-multiply by its adjoint: rows p and q.
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, c * apj - s_pq * aqj);
                    a.set(q, j, s_pq.conj() * apj + c * aqj);
                }
            }
        }
        residual = off(&a);
        sweeps += 1;
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    eigs.sort_by(|x, y| y.partial_cmp(x).expect("eigenvalues are finite"));
    Ok(eigs)
}

/// Largest-magnitude eigenvalue of a Hermitian positive semidefinite
/// matrix by power iteration with deterministic seeded restarts. The
/// residual `||A v - lambda v||` is driven below [`POWER_RESIDUAL_TOL`].
pub fn dominant_eigenvalue(matrix: &CMatrix) -> Result<f64> {
    if matrix.rows != matrix.cols {
        return Err(Error::DimensionMismatch("eigenvalues need a square matrix".into()));
    }
    let n = matrix.rows;
    let mut last_residual = f64::INFINITY;
    for restart in 0..POWER_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(0x853c_49e6_748f_ea9b ^ restart);
        let mut v: Vec<Complex64> =
            (0..n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        normalize(&mut v);
        for iteration in 0..POWER_MAX_ITERS {
            let w = matrix.mul_vec(&v);
            let lambda: f64 = v.iter().zip(&w).map(|(vi, wi)| (vi.conj() * wi).re).sum();
            let residual: f64 = w
                .iter()
                .zip(&v)
                .map(|(wi, vi)| (wi - lambda * vi).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if residual <= POWER_RESIDUAL_TOL * lambda.abs().max(1.0) {
                return Ok(lambda);
            }
            last_residual = residual;
            let norm: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm <= f64::MIN_POSITIVE {
                break;
            }
            v = w;
            let inv = 1.0 / norm;
            for z in &mut v {
                *z *= inv;
            }
            let _ = iteration;
        }
    }
    Err(Error::NoConvergence { residual: last_residual, iterations: POWER_MAX_ITERS * POWER_RESTARTS as usize })
}

fn normalize(v: &mut [Complex64]) {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        let inv = 1.0 / norm;
        for z in v {
            *z *= inv;
        }
    }
}

/// Trace norm (sum of absolute eigenvalues) of a Hermitian matrix.
pub fn trace_norm_hermitian(matrix: &CMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(matrix)?.iter().map(|l| l.abs()).sum())
}

/// Normalized pure state with an explicit tensor factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Vec<Complex64>,
    dims: Vec<usize>,
}

impl PureState {
    /// Builds a state from amplitudes and factor dimensions; the product of
    /// `dims` must match the length and the norm must be 1 within
    /// [`NORM_TOL`].
    pub fn new(amps: Vec<Complex64>, dims: &[usize]) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || total != amps.len() {
            return Err(Error::DimensionMismatch(format!(
                "factor dimensions {dims:?} do not describe a vector of length {}",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amps, dims: dims.to_vec() })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len();
        Self::new(amps, &[n])
    }

    /// Same amplitudes under a different factorization.
    pub fn with_dims(&self, dims: &[usize]) -> Result<Self> {
        Self::new(self.amps.clone(), dims)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    fn strides(&self) -> Vec<usize> {
        let f = self.dims.len();
        let mut strides = vec![1usize; f];
        for m in (0..f.saturating_sub(1)).rev() {
            strides[m] = strides[m + 1] * self.dims[m + 1];
        }
        strides
    }

    /// Reduced density matrix on the listed factors (strictly increasing
    /// indices), tracing out the rest. The result is exactly Hermitian by
    /// construction.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let f = self.dims.len();
        if keep.is_empty() || keep.windows(2).any(|w| w[0] >= w[1]) || keep[keep.len() - 1] >= f {
            return Err(Error::InvalidArgument(format!(
                "kept factors {keep:?} must be strictly increasing indices below {f}"
            )));
        }
        let traced: Vec<usize> = (0..f).filter(|m| !keep.contains(m)).collect();
        let strides = self.strides();
        let kdim: usize = keep.iter().map(|&m| self.dims[m]).product();
        let tdim: usize = traced.iter().map(|&m| self.dims[m]).product();
        // table[t][k] = amplitude at the global index with kept digits k
        // and traced digits t.
        let mut table = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (g, amp) in self.amps.iter().enumerate() {
            let mut ki = 0;
            for &m in keep {
                ki = ki * self.dims[m] + (g / strides[m]) % self.dims[m];
            }
            let mut ti = 0;
            for &m in &traced {
                ti = ti * self.dims[m] + (g / strides[m]) % self.dims[m];
            }
            table[ti * kdim + ki] = *amp;
        }
        let mut rho = CMatrix::zeros(kdim, kdim);
        for t in 0..tdim {
            let block = &table[t * kdim..(t + 1) * kdim];
            for k1 in 0..kdim {
                if block[k1].norm_sqr() == 0.0 {
                    continue;
                }
                for k2 in k1..kdim {
                    let v = rho.get(k1, k2) + block[k1] * block[k2].conj();
                    rho.set(k1, k2, v);
                }
            }
        }
        for k1 in 0..kdim {
            for k2 in k1 + 1..kdim {
                let v = rho.get(k1, k2).conj();
                rho.set(k2, k1, v);
            }
        }
        DensityMatrix::new(rho)
    }

    /// Applies a unitary on the full space.
    pub fn apply(&self, u: &UnitaryMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "unitary of dimension {} applied to a state of dimension {}",
                u.dim(),
                self.dim()
            )));
        }
        Ok(Self { amps: u.matrix().mul_vec(&self.amps), dims: self.dims.clone() })
    }

    /// Applies a unitary on one tensor factor.
    pub fn apply_to_factor(&self, u: &UnitaryMatrix, factor: usize) -> Result<Self> {
        if factor >= self.dims.len() {
            return Err(Error::InvalidArgument(format!(
                "factor {factor} out of range for {} factors",
                self.dims.len()
            )));
        }
        let d = self.dims[factor];
        if u.dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "unitary of dimension {} applied to a factor of dimension {d}",
                u.dim()
            )));
        }
        let stride = self.strides()[factor];
        let mut amps = self.amps.clone();
        let mut scratch = vec![Complex64::new(0.0, 0.0); d];
        let outer = self.amps.len() / (d * stride);
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * d * stride + inner;
                for k in 0..d {
                    scratch[k] = amps[base + k * stride];
                }
                let rotated = u.matrix().mul_vec(&scratch);
                for k in 0..d {
                    amps[base + k * stride] = rotated[k];
                }
            }
        }
        Ok(Self { amps, dims: self.dims.clone() })
    }
}

/// Validated density matrix: square, Hermitian within [`HERMITICITY_TOL`],
/// unit trace within [`TRACE_TOL`]. Positivity is checked where it matters,
/// in [`DensityMatrix::spectrum`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::DimensionMismatch("density matrix must be square".into()));
        }
        let herm = mat.hermiticity_error();
        if herm > HERMITICITY_TOL {
            return Err(Error::NotDensity(format!("Hermiticity deviation {herm:.3e}")));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotDensity(format!("trace {tr} deviates from 1")));
        }
        Ok(Self { mat })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let n = psi.dim();
        let mut mat = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                mat.set(i, j, psi.amplitudes()[i] * psi.amplitudes()[j].conj());
            }
        }
        Self { mat }
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidArgument("empty spectrum".into()));
        }
        if let Some(p) = probs.iter().find(|p| **p < EIGENVALUE_FLOOR) {
            return Err(Error::NotDensity(format!("diagonal entry {p:.3e} below the floor")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotDensity(format!("diagonal sums to {total}, not 1")));
        }
        let mut mat = CMatrix::zeros(probs.len(), probs.len());
        for (i, p) in probs.iter().enumerate() {
            mat.set(i, i, Complex64::new(p.max(0.0), 0.0));
        }
        Ok(Self { mat })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        let mut mat = CMatrix::identity(d);
        mat.scale(1.0 / d as f64);
        Self { mat }
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { mat: self.mat.kron(&other.mat) }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Eigenvalues, descending, clipped to `[0, 1]`. Any eigenvalue below
    /// [`EIGENVALUE_FLOOR`] means the matrix is not a state.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let eigs = hermitian_eigenvalues(&self.mat)?;
        if let Some(l) = eigs.iter().find(|l| **l < EIGENVALUE_FLOOR) {
            return Err(Error::NotDensity(format!("eigenvalue {l:.3e} below the floor")));
        }
        Ok(eigs.into_iter().map(|l| l.clamp(0.0, 1.0)).collect())
    }
}

/// `tr rho^alpha` by repeated matrix multiplication; `alpha >= 1`.
pub fn trace_power(rho: &DensityMatrix, alpha: u32) -> Result<f64> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("trace power needs order at least 1".into()));
    }
    let mut acc = rho.mat.clone();
    for _ in 1..alpha {
        acc = acc.mul(&rho.mat);
    }
    let tr = acc.trace();
    debug_assert!(tr.im.abs() < 1e-9);
    Ok(tr.re)
}

/// Renyi entropy of integer order `alpha >= 2`, in bits.
pub fn renyi_entropy(rho: &DensityMatrix, alpha: u32) -> Result<f64> {
    renyi_from_trace_power(trace_power(rho, require_alpha(alpha)?)?, alpha)
}

/// Renyi entropy in bits from a precomputed `tr rho^alpha`.
pub fn renyi_from_trace_power(x: f64, alpha: u32) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::InvalidArgument(format!("trace power must be positive, got {x}")));
    }
    Ok(-x.log2() / (require_alpha(alpha)? as f64 - 1.0))
}

/// Tsallis entropy of integer order `alpha >= 2`:
/// `(1 - tr rho^alpha) / (alpha - 1)`.
pub fn tsallis_entropy(rho: &DensityMatrix, alpha: u32) -> Result<f64> {
    let x = trace_power(rho, require_alpha(alpha)?)?;
    Ok((1.0 - x) / (alpha as f64 - 1.0))
}

/// Unified entropy `((tr rho^alpha)^s - 1) / (s (1 - alpha))` for `s != 0`.
/// `s = 1` is the Tsallis entropy; the `s -> 0` limit is the Renyi entropy
/// in nats (use [`renyi_entropy`] for the bit-valued version).
pub fn unified_entropy(rho: &DensityMatrix, alpha: u32, s: f64) -> Result<f64> {
    if s == 0.0 || !s.is_finite() {
        return Err(Error::InvalidArgument(
            "unified entropy needs finite s != 0; the s -> 0 limit is the Renyi entropy".into(),
        ));
    }
    let x = trace_power(rho, require_alpha(alpha)?)?;
    Ok((x.powf(s) - 1.0) / (s * (1.0 - alpha as f64)))
}

/// Min-entropy `-log2(lambda_max)` in bits. Uses the power iteration and
/// falls back to the full Jacobi spectrum if it stalls.
pub fn min_entropy(rho: &DensityMatrix) -> Result<f64> {
    let lambda = match dominant_eigenvalue(&rho.mat) {
        Ok(l) => l,
        Err(Error::NoConvergence { .. }) => rho.spectrum()?[0],
        Err(e) => return Err(e),
    };
    if lambda <= 0.0 {
        return Err(Error::NotDensity(format!("dominant eigenvalue {lambda:.3e} not positive")));
    }
    Ok(-lambda.min(1.0).log2())
}

/// Von Neumann entropy `-sum lambda log2 lambda` in bits, with eigenvalues
/// at or below [`VN_CUTOFF`] contributing zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let mut s = 0.0;
    for l in rho.spectrum()? {
        if l > VN_CUTOFF {
            s -= l * l.log2();
        }
    }
    Ok(s.max(0.0))
}

fn require_alpha(alpha: u32) -> Result<u32> {
    if alpha < 2 {
        return Err(Error::InvalidArgument(format!(
            "entropy order must be an integer >= 2, got {alpha}"
        )));
    }
    Ok(alpha)
}

/// One entropy functional, selectable at runtime.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EntropySelector {
    Renyi { alpha: u32 },
    Tsallis { alpha: u32 },
    Unified { alpha: u32, s: f64 },
    Min,
    VonNeumann,
}

impl EntropySelector {
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        match *self {
            Self::Renyi { alpha } => renyi_entropy(rho, alpha),
            Self::Tsallis { alpha } => tsallis_entropy(rho, alpha),
            Self::Unified { alpha, s } => unified_entropy(rho, alpha, s),
            Self::Min => min_entropy(rho),
            Self::VonNeumann => von_neumann_entropy(rho),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Self::Renyi { alpha } => format!("renyi(alpha={alpha})"),
            Self::Tsallis { alpha } => format!("tsallis(alpha={alpha})"),
            Self::Unified { alpha, s } => format!("unified(alpha={alpha},s={s})"),
            Self::Min => "min".into(),
            Self::VonNeumann => "von_neumann".into(),
        }
    }
}

/// Validated unitary: square with `U* U = I` within [`UNITARITY_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    mat: CMatrix,
}

impl UnitaryMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::DimensionMismatch("unitary must be square".into()));
        }
        let n = mat.rows();
        let gram = mat.dagger().mul(&mat);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                worst = worst.max((gram.get(i, j) - expected).norm());
            }
        }
        if worst > UNITARITY_TOL {
            return Err(Error::NotUnitary(worst));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_matrix_unchecked(mat: CMatrix) -> Self {
        Self { mat }
    }

    pub fn identity(d: usize) -> Self {
        Self { mat: CMatrix::identity(d) }
    }

    /// Permutes the `alpha` tensor factors of `(C^d)^(x alpha)`: factor `k`
    /// of the input is routed to slot `sigma(k)`, so these operators
    /// compose the same way the permutations do.
    pub fn factor_permutation(d: usize, sigma: &Permutation) -> Self {
        let alpha = sigma.degree();
        let n = d.pow(alpha as u32);
        let mut mat = CMatrix::zeros(n, n);
        let mut digits = vec![0usize; alpha];
        for col in 0..n {
            let mut rest = col;
            for k in (0..alpha).rev() {
                digits[k] = rest % d;
                rest /= d;
            }
            let mut row = 0usize;
            let mut routed = vec![0usize; alpha];
            for k in 0..alpha {
                routed[sigma.apply(k)] = digits[k];
            }
            for &digit in &routed {
                row = row * d + digit;
            }
            mat.set(row, col, Complex64::new(1.0, 0.0));
        }
        Self { mat }
    }

    /// The swap of two `d`-dimensional factors.
    pub fn swap(d: usize) -> Self {
        Self::factor_permutation(d, &Permutation::from_images(vec![1, 0]).expect("transposition"))
    }

    pub fn kron(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        Self { mat: self.mat.kron(&other.mat) }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

/// The Choi state of a unitary on `C^d`: `d^-1/2 sum_ij U_ji |i>|j>`,
/// factored as input (most significant) times output.
pub fn choi_state(u: &UnitaryMatrix) -> Result<PureState> {
    let d = u.dim();
    let scale = 1.0 / (d as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            amps[i * d + j] = u.matrix().get(j, i) * scale;
        }
    }
    PureState::new(amps, &[d, d])
}

/// Scrambling diagnostic of a unitary: minus the tripartite information of
/// its Choi state, computed two ways.
#[derive(Clone, Debug, PartialEq)]
pub struct TripartiteReport {
    /// `-I3` from all seven von Neumann marginal entropies.
    pub direct: f64,
    /// `-I3 = S(AC) + S(AD) - log2(d_a d_b)` using the exact maximal
    /// mixedness of the Choi input and output marginals.
    pub via_marginals: f64,
    pub s_ac: f64,
    pub s_ad: f64,
}

/// Minus the tripartite information `-I3(A:C:D)` of the Choi state of `u`,
/// with input split `A x B` and output split `C x D`. Ranges from 0 for
/// non-scrambling unitaries (identity, swap) up to about `2 log2 d_a` for
/// fully scrambling ones.
pub fn negative_tripartite(u: &UnitaryMatrix, split: &ChoiPartitionSpec) -> Result<TripartiteReport> {
    let d = split.total() as usize;
    if u.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "unitary of dimension {} does not match the split total {d}",
            u.dim()
        )));
    }
    let psi = choi_state(u)?.with_dims(&[
        split.d_a as usize,
        split.d_b as usize,
        split.d_c as usize,
        split.d_d as usize,
    ])?;
    let s = |keep: &[usize]| -> Result<f64> { von_neumann_entropy(&psi.reduced(keep)?) };
    let s_ac = s(&[0, 2])?;
    let s_ad = s(&[0, 3])?;
    let direct =
        s_ac + s_ad + s(&[2, 3])? - s(&[0])? - s(&[2])? - s(&[3])? - s(&[0, 2, 3])?;
    let via_marginals = s_ac + s_ad - ((split.d_a * split.d_b) as f64).log2();
    Ok(TripartiteReport { direct, via_marginals, s_ac, s_ad })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)], &[2, 2]).unwrap()
    }

    fn cnot() -> UnitaryMatrix {
        let z = c(0.0, 0.0);
        let o = c(1.0, 0.0);
        UnitaryMatrix::new(
            CMatrix::from_rows(&[
                vec![o, z, z, z],
                vec![z, o, z, z],
                vec![z, z, z, o],
                vec![z, z, o, z],
            ])
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn kron_trace_is_multiplicative() {
        let a = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 1.0)], vec![c(2.0, -1.0), c(3.0, 0.0)]])
            .unwrap();
        let b = CMatrix::from_rows(&[vec![c(0.5, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.25, 0.0)]])
            .unwrap();
        let t = a.kron(&b).trace();
        let expected = a.trace() * b.trace();
        assert!((t - expected).norm() < 1e-14);
    }

    #[test]
    fn eigenvalues_two_by_two_closed_form() {
        let b = c(1.0, 2.0);
        let m = CMatrix::from_rows(&[vec![c(2.0, 0.0), b], vec![b.conj(), c(-1.0, 0.0)]]).unwrap();
        let eigs = hermitian_eigenvalues(&m).unwrap();
        let mid = 0.5;
        let disc = (1.5f64 * 1.5 + b.norm_sqr()).sqrt();
        assert!((eigs[0] - (mid + disc)).abs() < 1e-10);
        assert!((eigs[1] - (mid - disc)).abs() < 1e-10);
    }

    #[test]
    fn eigenvalues_match_power_traces() {
        let m = CMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(3.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, -0.5), c(1.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let eigs = hermitian_eigenvalues(&m).unwrap();
        let mut acc = m.clone();
        for k in 1..=3u32 {
            let sum: f64 = eigs.iter().map(|l| l.powi(k as i32)).sum();
            assert!((acc.trace().re - sum).abs() < 1e-9, "power {k}");
            acc = acc.mul(&m);
        }
        assert!(eigs.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eigenvalues_reject_non_hermitian() {
        let m = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]])
            .unwrap();
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotDensity(_))));
    }

    #[test]
    fn spectrum_of_diagonal_state() {
        let rho = DensityMatrix::from_diagonal(&[0.25, 0.75]).unwrap();
        assert_eq!(rho.spectrum().unwrap(), vec![0.75, 0.25]);
    }

    #[test]
    fn spectrum_rejects_negative_eigenvalue() {
        let mut mat = CMatrix::zeros(2, 2);
        mat.set(0, 0, c(1.1, 0.0));
        mat.set(1, 1, c(-0.1, 0.0));
        let rho = DensityMatrix::new(mat).unwrap();
        assert!(matches!(rho.spectrum(), Err(Error::NotDensity(_))));
    }

    #[test]
    fn density_validation_rejects_bad_inputs() {
        let mut skew = CMatrix::zeros(2, 2);
        skew.set(0, 0, c(0.5, 0.0));
        skew.set(1, 1, c(0.5, 0.0));
        skew.set(0, 1, c(0.3, 0.0));
        assert!(matches!(DensityMatrix::new(skew), Err(Error::NotDensity(_))));
        let half = CMatrix::identity(2);
        assert!(matches!(DensityMatrix::new(half), Err(Error::NotDensity(_))));
        assert!(DensityMatrix::from_diagonal(&[0.5, 0.6]).is_err());
        assert!(DensityMatrix::from_diagonal(&[1.2, -0.2]).is_err());
    }

    #[test]
    fn pure_state_validation() {
        assert!(matches!(
            PureState::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(PureState::new(vec![c(1.0, 0.0)], &[2]).is_err());
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let rho = bell().reduced(&[0]).unwrap();
        assert!((rho.matrix().get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((rho.matrix().get(1, 1).re - 0.5).abs() < 1e-15);
        assert!(rho.matrix().get(0, 1).norm() < 1e-15);
        assert!((renyi_entropy(&rho, 2).unwrap() - 1.0).abs() < 1e-12);
        assert!((tsallis_entropy(&rho, 2).unwrap() - 0.5).abs() < 1e-12);
        assert!((min_entropy(&rho).unwrap() - 1.0).abs() < 1e-9);
        assert!((von_neumann_entropy(&rho).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn product_state_marginal_is_pure() {
        let psi = PureState::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], &[2, 2])
            .unwrap();
        let rho = psi.reduced(&[1]).unwrap();
        assert!(renyi_entropy(&rho, 2).unwrap().abs() < 1e-12);
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-9);
        assert!(min_entropy(&rho).unwrap().abs() < 1e-9);
    }

    #[test]
    fn entropy_zoo_on_a_fixed_spectrum() {
        let rho = DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap();
        assert!((trace_power(&rho, 2).unwrap() - 0.625).abs() < 1e-15);
        assert!((trace_power(&rho, 3).unwrap() - 7.0 / 16.0).abs() < 1e-15);
        assert!((renyi_entropy(&rho, 2).unwrap() - (3.0 - 5f64.log2())).abs() < 1e-12);
        assert!((tsallis_entropy(&rho, 2).unwrap() - 0.375).abs() < 1e-15);
        assert!((unified_entropy(&rho, 2, 1.0).unwrap() - 0.375).abs() < 1e-15);
        assert!((unified_entropy(&rho, 2, 2.0).unwrap() - 39.0 / 128.0).abs() < 1e-15);
        assert!((min_entropy(&rho).unwrap() - (2.0 - 3f64.log2())).abs() < 1e-9);
        assert!((von_neumann_entropy(&rho).unwrap() - (2.0 - 0.75 * 3f64.log2())).abs() < 1e-9);
    }

    #[test]
    fn entropy_argument_validation() {
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(renyi_entropy(&rho, 1).is_err());
        assert!(unified_entropy(&rho, 2, 0.0).is_err());
        assert!(trace_power(&rho, 0).is_err());
    }

    #[test]
    fn renyi_order_monotonicity() {
        let rho = DensityMatrix::from_diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let s2 = renyi_entropy(&rho, 2).unwrap();
        let s3 = renyi_entropy(&rho, 3).unwrap();
        let smin = min_entropy(&rho).unwrap();
        let vn = von_neumann_entropy(&rho).unwrap();
        assert!(vn >= s2 && s2 >= s3 && s3 >= smin - 1e-9);
    }

    #[test]
    fn dominant_eigenvalue_agrees_with_spectrum() {
        let amps: Vec<Complex64> = vec![
            c(0.5, 0.1),
            c(0.2, -0.3),
            c(0.1, 0.0),
            c(0.3, 0.2),
            c(0.0, 0.4),
            c(0.1, -0.1),
            c(0.25, 0.0),
            c(0.2, 0.1),
            c(0.35, -0.2),
        ];
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let amps: Vec<Complex64> = amps.into_iter().map(|z| z / norm).collect();
        let rho = PureState::new(amps, &[3, 3]).unwrap().reduced(&[0]).unwrap();
        let top = dominant_eigenvalue(rho.matrix()).unwrap();
        let full = rho.spectrum().unwrap();
        assert!((top - full[0]).abs() < 1e-8);
        let mixed = DensityMatrix::maximally_mixed(4);
        assert!((dominant_eigenvalue(mixed.matrix()).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn unitary_validation() {
        let not_u = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]])
            .unwrap();
        assert!(matches!(UnitaryMatrix::new(not_u), Err(Error::NotUnitary(_))));
        assert!(UnitaryMatrix::new(CMatrix::identity(3)).is_ok());
    }

    #[test]
    fn choi_of_identity_is_maximally_entangled() {
        let psi = choi_state(&UnitaryMatrix::identity(2)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps = psi.amplitudes();
        assert!((amps[0] - c(h, 0.0)).norm() < 1e-15);
        assert!(amps[1].norm() < 1e-15 && amps[2].norm() < 1e-15);
        assert!((amps[3] - c(h, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn factor_permutation_trace_counts_cycles() {
        for (images, d) in [(vec![1usize, 2, 0], 2usize), (vec![1, 0, 2], 3), (vec![0, 1, 2], 2)] {
            let sigma = Permutation::from_images(images).unwrap();
            let p = UnitaryMatrix::factor_permutation(d, &sigma);
            let expected = (d as f64).powi(sigma.cycle_count() as i32);
            assert!((p.matrix().trace().re - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn factor_permutation_composes_like_permutations() {
        let s = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let t = Permutation::from_images(vec![1, 0, 2]).unwrap();
        let lhs = UnitaryMatrix::factor_permutation(2, &s)
            .matrix()
            .mul(UnitaryMatrix::factor_permutation(2, &t).matrix());
        let rhs = UnitaryMatrix::factor_permutation(2, &s.compose(&t));
        assert!((lhs.sub(rhs.matrix())).frobenius_norm() < 1e-12);
    }

    #[test]
    fn apply_to_factor_routes_correctly() {
        let x = UnitaryMatrix::new(
            CMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
                .unwrap(),
        )
        .unwrap();
        let zero = PureState::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], &[2, 2])
            .unwrap();
        let flipped_left = zero.apply_to_factor(&x, 0).unwrap();
        assert!((flipped_left.amplitudes()[2] - c(1.0, 0.0)).norm() < 1e-15);
        let flipped_right = zero.apply_to_factor(&x, 1).unwrap();
        assert!((flipped_right.amplitudes()[1] - c(1.0, 0.0)).norm() < 1e-15);
        let both = zero.apply(&x.kron(&x)).unwrap();
        assert!((both.amplitudes()[3] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tripartite_identity_and_swap_do_not_scramble() {
        let split = ChoiPartitionSpec::new(2, 2, 2, 2).unwrap();
        for u in [UnitaryMatrix::identity(4), UnitaryMatrix::swap(2)] {
            let report = negative_tripartite(&u, &split).unwrap();
            assert!(report.direct.abs() < 1e-8, "direct = {}", report.direct);
            assert!(report.via_marginals.abs() < 1e-8);
        }
    }

    #[test]
    fn tripartite_cnot_is_one_bit() {
        let split = ChoiPartitionSpec::new(2, 2, 2, 2).unwrap();
        let report = negative_tripartite(&cnot(), &split).unwrap();
        assert!((report.direct - 1.0).abs() < 1e-8);
        assert!((report.via_marginals - 1.0).abs() < 1e-8);
        assert!((report.s_ac - 1.0).abs() < 1e-8);
        assert!((report.s_ad - 2.0).abs() < 1e-8);
    }

    #[test]
    fn entropy_selector_dispatch() {
        let rho = DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap();
        let pairs = [
            (EntropySelector::Renyi { alpha: 2 }, 3.0 - 5f64.log2()),
            (EntropySelector::Tsallis { alpha: 2 }, 0.375),
            (EntropySelector::Unified { alpha: 2, s: 2.0 }, 39.0 / 128.0),
            (EntropySelector::Min, 2.0 - 3f64.log2()),
            (EntropySelector::VonNeumann, 2.0 - 0.75 * 3f64.log2()),
        ];
        for (selector, expected) in pairs {
            assert!((selector.evaluate(&rho).unwrap() - expected).abs() < 1e-9, "{}", selector.label());
        }
        assert_eq!(EntropySelector::Renyi { alpha: 3 }.label(), "renyi(alpha=3)");
    }
}
