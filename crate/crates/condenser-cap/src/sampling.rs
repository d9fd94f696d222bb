//! Deterministic point generators for plate shapes.
//!
//! Two kinds of sphere coverage are provided. [`fibonacci_sphere`] is the
//! classical golden-angle lattice: the most even coverage for a fixed count,
//! but the point set depends on the count, so lattices of different sizes do
//! not nest. [`nested_sphere_prefix`] trades a little uniformity for the
//! prefix property: it returns the first `n` terms of one fixed
//! low-discrepancy sequence, so any smaller count is literally a prefix of
//! any larger one. Refinement studies need the second kind; standalone
//! discretizations use the first.
//!
//! Ball interiors come from a seeded low-discrepancy sequence
//! ([`ball_interior_iter`]): van der Corput radicals drive the latitude and
//! the radial distribution, the golden angle drives the longitude. The seed
//! offsets the start index of the sequence.

pub const GOLDEN_RATIO: f64 = 1.618033988749895;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Van der Corput radical inverse of `i` in the given base, in (0,1) for
/// `i >= 1`.
pub fn van_der_corput(mut i: u64, base: u64) -> f64 {
    let b = base as f64;
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= b;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

#[inline]
fn golden_frac(i: u64) -> f64 {
    (i as f64 * (GOLDEN_RATIO - 1.0)).fract()
}

fn translate(mut p: Vec<f64>, center: &[f64]) -> Vec<f64> {
    for (c, o) in p.iter_mut().zip(center.iter()) {
        *c += o;
    }
    p
}

// ===== Spheres (3D) and circles (2D) =====

/// Canonical golden-angle lattice of `n` points on the sphere of the given
/// radius and center. Deterministic; depends on `n`.
pub fn fibonacci_sphere(n: usize, radius: f64, center: &[f64]) -> Vec<Vec<f64>> {
    let nf = n as f64;
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / nf;
            let phi = TWO_PI * golden_frac(i as u64);
            let s = (1.0 - z * z).max(0.0).sqrt();
            translate(
                vec![radius * s * phi.cos(), radius * s * phi.sin(), radius * z],
                center,
            )
        })
        .collect()
}

/// First `n` points of a fixed low-discrepancy sphere sequence: latitude
/// from the base-2 van der Corput radical, longitude from the golden angle.
/// Prefix-stable: the result for `m < n` equals the first `m` entries.
pub fn nested_sphere_prefix(n: usize, radius: f64, center: &[f64]) -> Vec<Vec<f64>> {
    (1..=n as u64)
        .map(|i| {
            let z = 1.0 - 2.0 * van_der_corput(i, 2);
            let phi = TWO_PI * golden_frac(i);
            let s = (1.0 - z * z).max(0.0).sqrt();
            translate(
                vec![radius * s * phi.cos(), radius * s * phi.sin(), radius * z],
                center,
            )
        })
        .collect()
}

/// `n` equispaced points on the circle of the given radius and center.
pub fn circle_points(n: usize, radius: f64, center: &[f64]) -> Vec<Vec<f64>> {
    let nf = n as f64;
    (0..n)
        .map(|i| {
            let t = TWO_PI * i as f64 / nf;
            translate(vec![radius * t.cos(), radius * t.sin()], center)
        })
        .collect()
}

/// First `n` points of the golden-angle circle sequence (prefix-stable
/// counterpart of [`circle_points`]).
pub fn nested_circle_prefix(n: usize, radius: f64, center: &[f64]) -> Vec<Vec<f64>> {
    (1..=n as u64)
        .map(|i| {
            let t = TWO_PI * golden_frac(i);
            translate(vec![radius * t.cos(), radius * t.sin()], center)
        })
        .collect()
}

// ===== Ball interiors =====

/// Infinite seeded low-discrepancy sequence inside the ball of the given
/// radius and center (2D disk or 3D ball, by `center.len()`). The seed
/// shifts the start index, so equal seeds give bit-identical sequences.
pub fn ball_interior_iter(
    radius: f64,
    center: &[f64],
    seed: u64,
) -> impl Iterator<Item = Vec<f64>> + '_ {
    let dim = center.len();
    (1u64..).map(move |j| {
        let i = j.wrapping_add(seed);
        let phi = TWO_PI * golden_frac(i);
        match dim {
            2 => {
                let r = radius * van_der_corput(i, 3).sqrt();
                translate(vec![r * phi.cos(), r * phi.sin()], center)
            }
            _ => {
                let z = 1.0 - 2.0 * van_der_corput(i, 2);
                let s = (1.0 - z * z).max(0.0).sqrt();
                let r = radius * van_der_corput(i, 3).cbrt();
                translate(vec![r * s * phi.cos(), r * s * phi.sin(), r * z], center)
            }
        }
    })
}

// ===== Segments =====

/// `n` equispaced points on the segment from `a` to `b`, endpoints included
/// for `n >= 2`; the midpoint for `n = 1`.
pub fn segment_points(a: &[f64], b: &[f64], n: usize) -> Vec<Vec<f64>> {
    let lerp = |t: f64| -> Vec<f64> {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x + t * (y - x))
            .collect()
    };
    if n == 1 {
        return vec![lerp(0.5)];
    }
    (0..n).map(|i| lerp(i as f64 / (n - 1) as f64)).collect()
}

/// First `n` terms of the prefix-stable segment sequence: endpoints first,
/// then base-2 van der Corput fractions of the way from `a` to `b`.
pub fn nested_segment_prefix(a: &[f64], b: &[f64], n: usize) -> Vec<Vec<f64>> {
    let lerp = |t: f64| -> Vec<f64> {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x + t * (y - x))
            .collect()
    };
    (0..n as u64)
        .map(|i| match i {
            0 => lerp(0.0),
            1 => lerp(1.0),
            _ => lerp(van_der_corput(i - 1, 2)),
        })
        .collect()
}
