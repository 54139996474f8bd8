//! Lowest nonzero eigenpairs of `K u = λ M u` by shift-invert block
//! subspace iteration with Rayleigh–Ritz and explicit deflation of the
//! constant mode.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::spectral::dense::symmetric_eigen;
use crate::spectral::{SkylineCholesky, SparseSymMatrix, SpectralError};
use crate::Real;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair<T> {
    pub lambda: T,
    /// Mass-normalized: `uᵀ M u = 1`.
    pub vector: Vec<T>,
    /// `‖K u − λ M u‖₂ / ‖M u‖₂`.
    pub residual: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions<T> {
    pub tol: T,
    /// Defaults to `10 √N`.
    pub max_iter: Option<usize>,
    /// Spectral shift `σ > 0` of `K + σ M`; defaults to `0.1 / V`.
    pub shift: Option<T>,
    /// Seed of the starting block.
    pub seed: u64,
    /// Subspace width; defaults to `max(count + 8, 2 count)`.
    pub block: Option<usize>,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-8), max_iter: None, shift: None, seed: 0x5eed, block: None }
    }
}

impl<T: Real> SolverOptions<T> {
    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Converged eigenpairs plus solver bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub pairs: Vec<EigenPair<T>>,
    pub iterations: usize,
    pub shift: T,
    pub block: usize,
    pub options: SolverOptions<T>,
}

/// JSON form of a computed spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport<T> {
    pub lambda: Vec<T>,
    pub residuals: Vec<T>,
    pub solver: SolverInfo<T>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverInfo<T> {
    pub tol: T,
    pub iters: usize,
    pub shift: T,
    pub block: usize,
    pub seed: u64,
}

impl<T: Real> Spectrum<T> {
    pub fn report(&self) -> SpectrumReport<T> {
        SpectrumReport {
            lambda: self.pairs.iter().map(|p| p.lambda).collect(),
            residuals: self.pairs.iter().map(|p| p.residual).collect(),
            solver: SolverInfo {
                tol: self.options.tol,
                iters: self.iterations,
                shift: self.shift,
                block: self.block,
                seed: self.options.seed,
            },
        }
    }
}

/// Smallest nonzero generalized eigenpair.
pub fn first_eigenpair<T: Real>(
    stiffness: &SparseSymMatrix<T>,
    mass: &SparseSymMatrix<T>,
    opts: &SolverOptions<T>,
) -> Result<EigenPair<T>, SpectralError> {
    let mut s = lowest_spectrum(stiffness, mass, 1, opts)?;
    Ok(s.pairs.remove(0))
}

/// The `count` smallest nonzero generalized eigenpairs, ascending and
/// pairwise `M`-orthogonal.
pub fn lowest_spectrum<T: Real>(
    stiffness: &SparseSymMatrix<T>,
    mass: &SparseSymMatrix<T>,
    count: usize,
    opts: &SolverOptions<T>,
) -> Result<Spectrum<T>, SpectralError> {
    let n = stiffness.dim();
    if mass.dim() != n {
        return Err(SpectralError::DimensionMismatch { stiffness: n, mass: mass.dim() });
    }
    if !mass.is_diagonal() {
        return Err(SpectralError::MassNotDiagonal);
    }
    let m = mass.diagonal();
    if let Some(i) = m.iter().position(|&v| !(v > T::zero())) {
        return Err(SpectralError::NonPositiveMass { row: i });
    }
    if count == 0 || count + 1 > n {
        return Err(SpectralError::InvalidCount { count, dim: n });
    }
    let volume: T = m.iter().copied().sum();
    let block = opts.block.unwrap_or((count + 8).max(2 * count)).max(count).min(n - 1);
    let max_iter = opts
        .max_iter
        .unwrap_or_else(|| (10.0 * (n as f64).sqrt()).ceil() as usize)
        .max(1);
    let shift = opts.shift.unwrap_or(T::lit(0.1) / volume);
    if !(shift > T::zero()) {
        return Err(SpectralError::InvalidShift(shift.to_f64_lossy()));
    }

    let mut trip = Vec::with_capacity(stiffness.nnz() + n);
    for i in 0..n {
        for (j, v) in stiffness.row(i) {
            trip.push((i, j, v));
        }
        trip.push((i, i, shift * m[i]));
    }
    let shifted = SparseSymMatrix::from_triplets(n, trip);
    let chol = SkylineCholesky::factor(&shifted)?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut q: Vec<Vec<T>> = (0..block)
        .map(|_| (0..n).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect())
        .collect();
    m_orthonormalize(&mut q, &m, volume);

    let mut best = T::infinity();
    for iter in 1..=max_iter {
        let mut z: Vec<Vec<T>> = q
            .iter()
            .map(|col| {
                let rhs: Vec<T> = col.iter().zip(&m).map(|(&a, &b)| a * b).collect();
                chol.solve(&rhs)
            })
            .collect();
        m_orthonormalize(&mut z, &m, volume);
        if z.len() < count {
            return Err(SpectralError::SubspaceCollapsed { kept: z.len(), needed: count });
        }
        let kz: Vec<Vec<T>> = z.iter().map(|c| stiffness.mul_vec(c)).collect();
        let p = z.len();
        let mut h = vec![vec![T::zero(); p]; p];
        for i in 0..p {
            for j in i..p {
                let v: T = z[i].iter().zip(&kz[j]).map(|(&a, &b)| a * b).sum();
                let w: T = z[j].iter().zip(&kz[i]).map(|(&a, &b)| a * b).sum();
                h[i][j] = (v + w) * T::half();
                h[j][i] = h[i][j];
            }
        }
        let (theta, s) = symmetric_eigen(&h);
        let rotate = |basis: &[Vec<T>]| -> Vec<Vec<T>> {
            (0..p)
                .map(|c| {
                    let mut out = vec![T::zero(); n];
                    for (r, col) in basis.iter().enumerate() {
                        let coef = s[r][c];
                        for (o, &x) in out.iter_mut().zip(col) {
                            *o += coef * x;
                        }
                    }
                    out
                })
                .collect()
        };
        q = rotate(&z);
        let kq = rotate(&kz);

        let residuals: Vec<T> = (0..count)
            .map(|j| {
                let mut num = T::zero();
                let mut den = T::zero();
                for i in 0..n {
                    let mu = m[i] * q[j][i];
                    let r = kq[j][i] - theta[j] * mu;
                    num += r * r;
                    den += mu * mu;
                }
                (num / den).sqrt()
            })
            .collect();
        let worst = residuals.iter().copied().fold(T::zero(), T::max);
        best = best.min(worst);
        if worst <= opts.tol {
            let floor = T::lit(1e-10) / volume;
            if theta[0] < floor {
                return Err(SpectralError::Disconnected { lambda: theta[0].to_f64_lossy() });
            }
            let pairs = (0..count)
                .map(|j| EigenPair { lambda: theta[j], vector: q[j].clone(), residual: residuals[j] })
                .collect();
            return Ok(Spectrum { pairs, iterations: iter, shift, block, options: *opts });
        }
    }
    Err(SpectralError::NonConvergence { iterations: max_iter, best_residual: best.to_f64_lossy() })
}

/// Removes the constant component and orthonormalizes the columns in the
/// `M` inner product (two passes of modified Gram–Schmidt).
fn m_orthonormalize<T: Real>(cols: &mut Vec<Vec<T>>, m: &[T], volume: T) {
    let dot = |a: &[T], b: &[T]| -> T { a.iter().zip(b).zip(m).map(|((&x, &y), &w)| x * y * w).sum() };
    let mut kept: Vec<Vec<T>> = Vec::with_capacity(cols.len());
    for mut v in cols.drain(..) {
        let norm0 = dot(&v, &v).sqrt();
        for _pass in 0..2 {
            let mean = v.iter().zip(m).map(|(&x, &w)| x * w).sum::<T>() / volume;
            for x in v.iter_mut() {
                *x -= mean;
            }
            for u in &kept {
                let c = dot(u, &v);
                for (x, &y) in v.iter_mut().zip(u) {
                    *x -= c * y;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        // a column that collapsed onto the span is dropped; the block only
        // shrinks on tiny meshes
        if norm > T::lit(1e-10) * norm0 && norm > T::zero() {
            for x in v.iter_mut() {
                *x /= norm;
            }
            kept.push(v);
        }
    }
    *cols = kept;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate, AreaScheme, ShapeSpec};
    use crate::spectral::{assemble_mass, assemble_stiffness};

    fn system(shape: ShapeSpec, s: u32) -> (SparseSymMatrix<f64>, SparseSymMatrix<f64>) {
        let mesh = generate::<f64>(&shape, s).unwrap();
        (assemble_stiffness(&mesh), assemble_mass(&mesh, AreaScheme::MixedVoronoi))
    }

    #[test]
    fn unit_sphere_first_eigenvalue() {
        let (k, m) = system(ShapeSpec::Sphere { radius: 1.0 }, 3);
        let p = first_eigenpair(&k, &m, &SolverOptions::default()).unwrap();
        assert!((p.lambda - 2.0).abs() < 0.04, "lambda = {}", p.lambda);
        assert!(p.residual <= 1e-8);
        let mv = m.mul_vec(&p.vector);
        let mean: f64 = mv.iter().sum();
        assert!(mean.abs() < 1e-8);
        let rq = k.bilinear(&p.vector, &p.vector) / m.bilinear(&p.vector, &p.vector);
        assert!((rq - p.lambda).abs() < 1e-8 * p.lambda);
    }

    #[test]
    fn pairs_are_m_orthogonal() {
        let (k, m) = system(ShapeSpec::Ellipsoid { a: 1.0, b: 0.9, c: 1.2 }, 2);
        let s = lowest_spectrum(&k, &m, 4, &SolverOptions::default()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let d = m.bilinear(&s.pairs[i].vector, &s.pairs[j].vector);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-6);
            }
        }
        for w in s.pairs.windows(2) {
            assert!(w[0].lambda <= w[1].lambda);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let (k, m) = system(ShapeSpec::PerturbedSphere { l: 2, m: 0, delta: 0.1 }, 2);
        let a = lowest_spectrum(&k, &m, 2, &SolverOptions::default()).unwrap();
        let b = lowest_spectrum(&k, &m, 2, &SolverOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_inputs() {
        let (k, m) = system(ShapeSpec::Sphere { radius: 1.0 }, 0);
        assert!(matches!(lowest_spectrum(&k, &m, 0, &SolverOptions::default()), Err(SpectralError::InvalidCount { .. })));
        assert!(matches!(lowest_spectrum(&k, &k, 1, &SolverOptions::default()), Err(SpectralError::MassNotDiagonal)));
        let opts = SolverOptions { max_iter: Some(1), tol: 1e-30, block: Some(2), ..Default::default() };
        let (k, m) = system(ShapeSpec::Sphere { radius: 1.0 }, 3);
        assert!(matches!(lowest_spectrum(&k, &m, 1, &opts), Err(SpectralError::NonConvergence { .. })));
    }

    #[test]
    fn tiny_mesh_uses_full_subspace() {
        let (k, m) = system(ShapeSpec::Sphere { radius: 1.0 }, 0);
        let s = lowest_spectrum(&k, &m, 11, &SolverOptions::default()).unwrap();
        assert_eq!(s.pairs.len(), 11);
        assert!(s.pairs[0].lambda > 0.5);
    }

    #[test]
    fn report_shape() {
        let (k, m) = system(ShapeSpec::Sphere { radius: 1.0 }, 1);
        let s = lowest_spectrum(&k, &m, 2, &SolverOptions::default()).unwrap();
        let json = serde_json::to_value(s.report()).unwrap();
        assert_eq!(json["lambda"].as_array().unwrap().len(), 2);
        assert_eq!(json["residuals"].as_array().unwrap().len(), 2);
        assert!(json["solver"]["tol"].is_number());
        assert!(json["solver"]["iters"].is_number());
    }
}
