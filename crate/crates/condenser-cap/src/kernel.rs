//! Kernel families, pairwise evaluation, matrix assembly, and the
//! positive-definiteness certificate.
//!
//! Two families are supported. The Riesz kernel in R^n smoothed by an
//! inverse-multiquadric floor,
//!
//! ```text
//! k(x, y) = (|x - y|^2 + eps^2)^((alpha - n) / 2),   0 < alpha < n, n >= 2,
//! ```
//!
//! which for alpha = 2, n >= 3 is the (smoothed) Newtonian kernel; and the
//! logarithmic kernel on the open unit disk in R^2,
//!
//! ```text
//! k(x, y) = -(1/2) * log(|x - y|^2 + eps^2),   |x| < 1, |y| < 1.
//! ```
//!
//! `eps = 0` recovers the classical kernels; it is permitted only for
//! off-diagonal evaluation and analytic oracles. Every optimization path
//! requires `eps > 0` so that the assembled matrix is finite and strictly
//! positive definite.

use serde::Serialize;

use crate::geom::{dist2, norm};
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// The certificate floor is `PD_PIVOT_FLOOR_FACTOR * max diagonal entry`:
/// a symmetric factorization pivot at or below it fails the certificate.
pub const PD_PIVOT_FLOOR_FACTOR: f64 = 1e-12;

// ===== Kernel specification =====

#[derive(Clone, Debug, PartialEq)]
pub enum KernelFamily {
    /// `|x - y|^(alpha - dim)` with `0 < alpha < dim`, `dim >= 2`.
    Riesz { alpha: f64, dim: usize },
    /// `-log |x - y|` restricted to the open unit disk in R^2.
    LogUnitDisk,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelSpec {
    pub family: KernelFamily,
    /// Smoothing floor `eps >= 0` added in quadrature to the distance.
    pub smoothing_epsilon: f64,
}

impl KernelSpec {
    pub fn riesz(alpha: f64, dim: usize, smoothing_epsilon: f64) -> Self {
        KernelSpec {
            family: KernelFamily::Riesz { alpha, dim },
            smoothing_epsilon,
        }
    }

    pub fn log_unit_disk(smoothing_epsilon: f64) -> Self {
        KernelSpec {
            family: KernelFamily::LogUnitDisk,
            smoothing_epsilon,
        }
    }

    /// Ambient dimension the kernel expects points to live in.
    pub fn dim(&self) -> usize {
        match self.family {
            KernelFamily::Riesz { dim, .. } => dim,
            KernelFamily::LogUnitDisk => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.smoothing_epsilon.is_finite() || self.smoothing_epsilon < 0.0 {
            return Err(Error::InvalidKernel(format!(
                "smoothing epsilon must be finite and >= 0, got {}",
                self.smoothing_epsilon
            )));
        }
        match self.family {
            KernelFamily::Riesz { alpha, dim } => {
                if dim < 2 {
                    return Err(Error::InvalidKernel(format!(
                        "Riesz kernel requires dim >= 2, got {dim}"
                    )));
                }
                if !alpha.is_finite() || alpha <= 0.0 || alpha >= dim as f64 {
                    return Err(Error::InvalidKernel(format!(
                        "Riesz kernel requires 0 < alpha < dim, got alpha = {alpha}, dim = {dim}"
                    )));
                }
            }
            KernelFamily::LogUnitDisk => {}
        }
        Ok(())
    }

    /// Checks a point against the kernel's domain (dimension; open unit
    /// disk for the logarithmic family).
    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if !x.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite("point coordinate".into()));
        }
        if matches!(self.family, KernelFamily::LogUnitDisk) {
            let r = norm(x);
            if r >= 1.0 {
                return Err(Error::OutsideUnitDisk { norm: r });
            }
        }
        Ok(())
    }

    /// Checked pairwise evaluation. Errors on malformed specs, dimension
    /// mismatches, domain violations, and coincident points at `eps = 0`
    /// (where both families diverge).
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.validate()?;
        self.check_point(x)?;
        self.check_point(y)?;
        let v = self.evaluator().eval_d2(dist2(x, y));
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::CoincidentPoints)
        }
    }

    pub(crate) fn evaluator(&self) -> KernelEval {
        let eps2 = self.smoothing_epsilon * self.smoothing_epsilon;
        let profile = match self.family {
            KernelFamily::Riesz { alpha, dim } => {
                let e = (alpha - dim as f64) / 2.0;
                if e == -0.5 {
                    Profile::RecipSqrt
                } else if e == -1.0 {
                    Profile::Recip
                } else {
                    Profile::Pow(e)
                }
            }
            KernelFamily::LogUnitDisk => Profile::NegHalfLog,
        };
        KernelEval { profile, eps2 }
    }
}

#[derive(Clone, Copy, Debug)]
enum Profile {
    RecipSqrt,
    Recip,
    Pow(f64),
    NegHalfLog,
}

/// Resolved evaluation plan: one branch on the family per call, no
/// revalidation. Diverging evaluations return `+inf` rather than erroring;
/// callers that must reject them check finiteness.
#[derive(Clone, Copy, Debug)]
pub(crate) struct KernelEval {
    profile: Profile,
    eps2: f64,
}

impl KernelEval {
    #[inline]
    pub(crate) fn eval_d2(&self, d2: f64) -> f64 {
        let t = d2 + self.eps2;
        match self.profile {
            Profile::RecipSqrt => 1.0 / t.sqrt(),
            Profile::Recip => 1.0 / t,
            Profile::Pow(e) => t.powf(e),
            Profile::NegHalfLog => -0.5 * t.ln(),
        }
    }
}

// ===== Kernel matrix =====

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PdCertificate {
    /// True iff a symmetric (Cholesky) factorization completed with every
    /// pivot strictly above the floor.
    pub positive_definite: bool,
    /// Smallest pivot encountered (the failing one if the factorization
    /// stopped early).
    pub smallest_pivot: f64,
    /// `PD_PIVOT_FLOOR_FACTOR * max(diagonal)`, clamped below at 0.
    pub pivot_floor: f64,
}

/// Dense symmetric kernel matrix over an ordered global point list.
///
/// Entries are mirrored exactly: `entry(k, l)` is computed once for
/// `k <= l` and copied to `(l, k)`, so symmetry holds bit-for-bit.
#[derive(Clone, Debug)]
pub struct KernelMatrix {
    n: usize,
    entries: Vec<f64>,
    pd_certificate: PdCertificate,
}

impl KernelMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, k: usize, l: usize) -> f64 {
        self.entries[k * self.n + l]
    }

    #[inline]
    pub fn row(&self, k: usize) -> &[f64] {
        &self.entries[k * self.n..(k + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn pd_certificate(&self) -> PdCertificate {
        self.pd_certificate
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.is_finite())
    }

    /// `y = K v`. Parallel over rows when the `parallel` feature is enabled;
    /// bit-identical to [`KernelMatrix::matvec_seq`] because every row's dot
    /// product runs in the same ascending index order on a single thread.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n, "matvec length mismatch");
        #[cfg(feature = "parallel")]
        {
            self.entries
                .par_chunks(self.n.max(1))
                .map(|row| row_dot(row, v))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.matvec_seq(v)
        }
    }

    /// Sequential reference implementation of `K v`.
    pub fn matvec_seq(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n, "matvec length mismatch");
        self.entries
            .chunks(self.n.max(1))
            .map(|row| row_dot(row, v))
            .collect()
    }

    /// Largest row sum of absolute entries (an upper bound on the spectral
    /// radius; feeds the solver's Lipschitz constant).
    pub fn max_abs_row_sum(&self) -> f64 {
        self.entries
            .chunks(self.n.max(1))
            .map(|row| row.iter().map(|e| e.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Dot product of a matrix row with a vector, ascending index order.
#[inline]
pub(crate) fn row_dot(row: &[f64], v: &[f64]) -> f64 {
    let mut s = 0.0;
    for (a, b) in row.iter().zip(v.iter()) {
        s += a * b;
    }
    s
}

/// Assembles the symmetric kernel matrix over `points` and attaches the
/// positive-definiteness certificate.
///
/// Preconditions: valid spec; every point in the kernel's domain; and
/// `eps > 0` or all points pairwise distinct. At `eps = 0` the diagonal is
/// `+inf` for the families implemented here (the certificate then fails and
/// optimization refuses the matrix), while coincident off-diagonal pairs are
/// rejected as an error.
pub fn assemble_matrix(spec: &KernelSpec, points: &[Vec<f64>]) -> Result<KernelMatrix> {
    assemble_impl(spec, points, cfg!(feature = "parallel"))
}

/// Sequential assembly; same result bit-for-bit as [`assemble_matrix`].
pub fn assemble_matrix_seq(spec: &KernelSpec, points: &[Vec<f64>]) -> Result<KernelMatrix> {
    assemble_impl(spec, points, false)
}

fn assemble_impl(spec: &KernelSpec, points: &[Vec<f64>], parallel: bool) -> Result<KernelMatrix> {
    spec.validate()?;
    for p in points {
        spec.check_point(p)?;
    }
    let n = points.len();
    let ev = spec.evaluator();
    let mut entries = vec![0.0f64; n * n];

    // Upper triangle (including the diagonal), row-major; rows are disjoint
    // output slices, so this loop parallelizes without reordering any sum.
    let fill_row = |k: usize, row: &mut [f64]| {
        for l in k..n {
            row[l] = ev.eval_d2(dist2(&points[k], &points[l]));
        }
    };
    if parallel {
        #[cfg(feature = "parallel")]
        entries
            .par_chunks_mut(n.max(1))
            .enumerate()
            .for_each(|(k, row)| fill_row(k, row));
        #[cfg(not(feature = "parallel"))]
        for (k, row) in entries.chunks_mut(n.max(1)).enumerate() {
            fill_row(k, row);
        }
    } else {
        for (k, row) in entries.chunks_mut(n.max(1)).enumerate() {
            fill_row(k, row);
        }
    }

    // Off-diagonal divergence means coincident points at eps = 0.
    if spec.smoothing_epsilon == 0.0 {
        for k in 0..n {
            for l in (k + 1)..n {
                if !entries[k * n + l].is_finite() {
                    return Err(Error::CoincidentPoints);
                }
            }
        }
    }

    // Mirror the lower triangle from the computed upper triangle.
    for k in 1..n {
        for l in 0..k {
            entries[k * n + l] = entries[l * n + k];
        }
    }

    let pd_certificate = pd_certify(&entries, n, parallel);
    Ok(KernelMatrix {
        n,
        entries,
        pd_certificate,
    })
}

/// Attempts a Cholesky factorization of a copy of the matrix, flooring
/// pivots at `PD_PIVOT_FLOOR_FACTOR * max(diagonal)`. Stops at the first
/// failing pivot.
fn pd_certify(entries: &[f64], n: usize, parallel: bool) -> PdCertificate {
    if n == 0 {
        return PdCertificate {
            positive_definite: true,
            smallest_pivot: f64::INFINITY,
            pivot_floor: 0.0,
        };
    }
    let max_diag = (0..n).map(|k| entries[k * n + k]).fold(f64::NAN, f64::max);
    let pivot_floor = if max_diag.is_finite() {
        PD_PIVOT_FLOOR_FACTOR * max_diag.max(0.0)
    } else {
        max_diag // inf or nan diagonal: certificate must fail
    };
    let mut a = entries.to_vec();
    let mut smallest = f64::INFINITY;
    for k in 0..n {
        let pivot = a[k * n + k];
        if !pivot.is_finite() || !(pivot > pivot_floor) {
            return PdCertificate {
                positive_definite: false,
                smallest_pivot: if pivot.is_nan() { pivot } else { smallest.min(pivot) },
                pivot_floor,
            };
        }
        smallest = smallest.min(pivot);
        let root = pivot.sqrt();
        for r in (k + 1)..n {
            a[r * n + k] /= root;
        }
        // Trailing symmetric rank-1 update on the lower triangle. Column k is
        // final at this point; snapshot it so row updates are independent.
        let colk: Vec<f64> = ((k + 1)..n).map(|r| a[r * n + k]).collect();
        let tail = &mut a[(k + 1) * n..n * n];
        let update_row = |r0: usize, row: &mut [f64]| {
            let lr = colk[r0];
            for c in (k + 1)..(k + 2 + r0) {
                row[c] -= lr * colk[c - k - 1];
            }
        };
        if parallel {
            #[cfg(feature = "parallel")]
            tail.par_chunks_mut(n)
                .enumerate()
                .for_each(|(r0, row)| update_row(r0, row));
            #[cfg(not(feature = "parallel"))]
            for (r0, row) in tail.chunks_mut(n).enumerate() {
                update_row(r0, row);
            }
        } else {
            for (r0, row) in tail.chunks_mut(n).enumerate() {
                update_row(r0, row);
            }
        }
    }
    PdCertificate {
        positive_definite: true,
        smallest_pivot: smallest,
        pivot_floor,
    }
}

// ===== Analytic oracle =====

/// Potential at `x` of the uniform unit mass on the origin-centered sphere
/// of radius `rho`, for the raw Newtonian kernel `|x - y|^(2 - dim)`:
/// `rho^(2 - dim)` inside the shell and `|x|^(2 - dim)` outside (Newton's
/// shell theorem). Requires `dim >= 3`.
pub fn shell_potential_oracle(dim: usize, shell_radius: f64, x: &[f64]) -> Result<f64> {
    if dim < 3 {
        return Err(Error::InvalidKernel(format!(
            "shell potential oracle requires dim >= 3, got {dim}"
        )));
    }
    if !(shell_radius.is_finite() && shell_radius > 0.0) {
        return Err(Error::NonFinite(format!(
            "shell radius must be positive and finite, got {shell_radius}"
        )));
    }
    if x.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: x.len(),
        });
    }
    let r = norm(x);
    let e = 2i32 - dim as i32;
    Ok(if r <= shell_radius {
        shell_radius.powi(e)
    } else {
        r.powi(e)
    })
}

// ===== Tests =====

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn newton3(eps: f64) -> KernelSpec {
        KernelSpec::riesz(2.0, 3, eps)
    }

    #[test]
    fn riesz_newtonian_off_diagonal_value() {
        let k = newton3(0.0);
        let v = k.eval(&[0.0, 0.0, 0.0], &[0.0, 0.0, 2.0]).unwrap();
        assert_eq!(v, 0.5, "Newtonian kernel at distance 2 is 1/2");
    }

    #[test]
    fn riesz_smoothed_coincident_value() {
        let k = newton3(1.0);
        let v = k.eval(&[0.3, 0.1, -0.2], &[0.3, 0.1, -0.2]).unwrap();
        assert_eq!(v, 1.0, "smoothing floors the diagonal at 1/eps");
    }

    #[test]
    fn log_kernel_value_on_disk() {
        let k = KernelSpec::log_unit_disk(0.0);
        let v = k.eval(&[0.0, 0.0], &[0.5, 0.0]).unwrap();
        assert!(
            (v - std::f64::consts::LN_2).abs() < 1e-15,
            "-log(1/2) = log 2, got {v}"
        );
    }

    #[test]
    fn riesz_alpha_one_dim_two_value() {
        let k = KernelSpec::riesz(1.0, 2, 0.0);
        let v = k.eval(&[0.0, 0.0], &[3.0, 4.0]).unwrap();
        assert_eq!(v, 0.2, "|x-y|^(1-2) at distance 5 is 1/5");
    }

    #[test]
    fn eval_rejects_coincident_points_without_smoothing() {
        let k = newton3(0.0);
        let err = k.eval(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap_err();
        assert!(matches!(err, Error::CoincidentPoints));
        let k = KernelSpec::log_unit_disk(0.0);
        let err = k.eval(&[0.1, 0.2], &[0.1, 0.2]).unwrap_err();
        assert!(matches!(err, Error::CoincidentPoints));
    }

    #[test]
    fn eval_rejects_domain_violations() {
        let k = KernelSpec::log_unit_disk(0.1);
        assert!(matches!(
            k.eval(&[1.0, 0.0], &[0.0, 0.0]).unwrap_err(),
            Error::OutsideUnitDisk { .. }
        ));
        let k = newton3(0.1);
        assert!(matches!(
            k.eval(&[0.0, 0.0], &[0.0, 0.0, 0.0]).unwrap_err(),
            Error::DimensionMismatch { .. }
        ));
    }

    #[test]
    fn spec_validation_rejects_bad_parameters() {
        assert!(KernelSpec::riesz(3.0, 3, 0.0).validate().is_err(), "alpha = dim");
        assert!(KernelSpec::riesz(0.0, 3, 0.0).validate().is_err(), "alpha = 0");
        assert!(KernelSpec::riesz(2.0, 2, 0.0).validate().is_err(), "Newtonian needs dim >= 3");
        assert!(KernelSpec::riesz(0.5, 1, 0.0).validate().is_err(), "dim < 2");
        assert!(KernelSpec::riesz(2.0, 3, -0.1).validate().is_err(), "negative eps");
        assert!(KernelSpec::riesz(1.5, 3, 0.0).validate().is_ok());
        assert!(KernelSpec::log_unit_disk(0.01).validate().is_ok());
    }

    #[test]
    fn assemble_two_point_example() {
        let k = newton3(1.0);
        let m = assemble_matrix(&k, &[vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(m.entry(0, 0), 1.0);
        assert_eq!(m.entry(1, 1), 1.0);
        let off = 0.5f64.sqrt();
        assert_eq!(m.entry(0, 1), off, "(1 + 1)^(-1/2)");
        assert_eq!(m.entry(0, 1).to_bits(), m.entry(1, 0).to_bits());
        assert!(m.pd_certificate().positive_definite);
    }

    #[test]
    fn assemble_single_point_is_one_by_one() {
        let k = newton3(1.0);
        let m = assemble_matrix(&k, &[vec![0.5, -0.5, 0.25]]).unwrap();
        assert_eq!(m.n(), 1);
        assert_eq!(m.entry(0, 0), 1.0);
        assert!(m.pd_certificate().positive_definite);
    }

    #[test]
    fn assemble_fibonacci_sphere_is_positive_definite() {
        let pts = crate::sampling::fibonacci_sphere(50, 1.0, &[0.0, 0.0, 0.0]);
        let m = assemble_matrix(&newton3(0.1), &pts).unwrap();
        let cert = m.pd_certificate();
        assert!(
            cert.positive_definite,
            "smoothed Riesz matrix must be strictly PD, smallest pivot {}",
            cert.smallest_pivot
        );
        assert!(cert.smallest_pivot > cert.pivot_floor);
    }

    #[test]
    fn assemble_duplicate_points_with_smoothing_fails_certificate() {
        let k = newton3(1.0);
        let m = assemble_matrix(&k, &[vec![0.0; 3], vec![0.0; 3]]).unwrap();
        let cert = m.pd_certificate();
        assert!(!cert.positive_definite, "rank-deficient matrix certified PD");
        assert!(cert.smallest_pivot <= cert.pivot_floor);
    }

    #[test]
    fn assemble_duplicate_points_without_smoothing_is_rejected() {
        let k = newton3(0.0);
        let err = assemble_matrix(&k, &[vec![0.0; 3], vec![0.0; 3]]).unwrap_err();
        assert!(matches!(err, Error::CoincidentPoints));
    }

    #[test]
    fn assemble_unsmoothed_distinct_points_keeps_finite_off_diagonal() {
        let k = newton3(0.0);
        let m = assemble_matrix(&k, &[vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 2.0]]).unwrap();
        assert_eq!(m.entry(0, 1), 0.5);
        assert!(m.entry(0, 0).is_infinite(), "unsmoothed diagonal diverges");
        assert!(
            !m.pd_certificate().positive_definite,
            "infinite diagonal must fail the certificate"
        );
    }

    #[test]
    fn matvec_parallel_matches_sequential_bitwise() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Vec<f64>> = (0..37)
            .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let m = assemble_matrix(&newton3(0.3), &pts).unwrap();
        let v: Vec<f64> = (0..37).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = m.matvec(&v);
        let b = m.matvec_seq(&v);
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn shell_oracle_matches_newtons_theorem() {
        // dim 3, shell radius 2: 1/2 anywhere inside, 1/|x| outside.
        assert_eq!(shell_potential_oracle(3, 2.0, &[0.0, 0.0, 1.0]).unwrap(), 0.5);
        assert_eq!(shell_potential_oracle(3, 2.0, &[0.0, 0.0, 0.0]).unwrap(), 0.5);
        assert_eq!(shell_potential_oracle(3, 2.0, &[0.0, 0.0, 4.0]).unwrap(), 0.25);
        // boundary belongs to the inside branch
        assert_eq!(shell_potential_oracle(3, 2.0, &[2.0, 0.0, 0.0]).unwrap(), 0.5);
        // dim 4: r^(-2) outside
        assert_eq!(
            shell_potential_oracle(4, 1.0, &[2.0, 0.0, 0.0, 0.0]).unwrap(),
            0.25
        );
        assert!(shell_potential_oracle(2, 1.0, &[0.0, 0.0]).is_err());
        assert!(shell_potential_oracle(3, 0.0, &[0.0, 0.0, 0.0]).is_err());
        assert!(shell_potential_oracle(3, 1.0, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn smoothing_is_monotone_decreasing_in_epsilon() {
        let x = [0.0, 0.0, 0.0];
        let y = [0.0, 0.0, 0.7];
        let mut prev = f64::INFINITY;
        for eps in [0.0, 0.1, 0.5, 1.0, 2.0] {
            let v = newton3(eps).eval(&x, &y).unwrap();
            assert!(v < prev, "Riesz kernel must decrease with smoothing");
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for eps in [0.0, 0.1, 0.5] {
            let v = KernelSpec::log_unit_disk(eps).eval(&[0.0, 0.0], &[0.5, 0.0]).unwrap();
            assert!(v < prev, "log kernel must decrease with smoothing");
            prev = v;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn assembled_matrices_are_bitwise_symmetric(
            coords in proptest::collection::vec(-10.0f64..10.0, 6..30),
            eps in 0.05f64..2.0,
        ) {
            let pts: Vec<Vec<f64>> = coords.chunks_exact(3).map(|c| c.to_vec()).collect();
            let m = assemble_matrix(&newton3(eps), &pts).unwrap();
            for k in 0..m.n() {
                for l in 0..m.n() {
                    prop_assert_eq!(m.entry(k, l).to_bits(), m.entry(l, k).to_bits());
                }
            }
        }

        #[test]
        fn pairwise_evaluation_is_symmetric(
            a in proptest::collection::vec(-5.0f64..5.0, 3),
            b in proptest::collection::vec(-5.0f64..5.0, 3),
            eps in 0.01f64..2.0,
        ) {
            let k = newton3(eps);
            let xy = k.eval(&a, &b).unwrap();
            let yx = k.eval(&b, &a).unwrap();
            prop_assert_eq!(xy.to_bits(), yx.to_bits());
        }

        #[test]
        fn small_point_clouds_certify_positive_definite(
            coords in proptest::collection::vec(-1.0f64..1.0, 3..24),
            eps in 0.5f64..2.0,
        ) {
            let pts: Vec<Vec<f64>> = coords.chunks_exact(3).map(|c| c.to_vec()).collect();
            let m = assemble_matrix(&newton3(eps), &pts).unwrap();
            // strictly PD family; with a generous eps the pivots stay well
            // above the floor even for clustered draws
            prop_assert!(m.pd_certificate().positive_definite);
        }
    }
}
