//! Condensers: signed plate collections, their discretizations, the
//! standing-assumption validator, nested exhaustion sequences, and
//! parametric plate families.
//!
//! A plate is a shape with a sign, a point budget, and a mass target
//! `a_i > 0`. Discretization turns each shape into an ordered point cloud:
//! sphere shells get golden-angle lattices, ball volumes get a boundary
//! shell plus seeded low-discrepancy interior fill (the optimal measure of a
//! ball concentrates on its boundary, so boundary points are always
//! present), segments get equispaced points. The condenser records the
//! geometry that the continuum theory's standing assumptions refer to: the
//! separation between opposite-signed plates, the supremum of the kernel
//! over opposite-sign pairs, and the infimum of the weight function.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::geom::{dist2, min_cross_distance, min_pairwise_distance, norm};
use crate::kernel::{KernelFamily, KernelSpec};
use crate::sampling;
use crate::{Error, Result};

// ===== Signs, shapes, weights =====

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    pub fn from_int(i: i64) -> Result<Sign> {
        match i {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            other => Err(Error::Scenario(format!("sign must be 1 or -1, got {other}"))),
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    SphereShell { center: Vec<f64>, radius: f64 },
    BallVolume { center: Vec<f64>, radius: f64 },
    Segment { a: Vec<f64>, b: Vec<f64> },
    ExplicitPoints { points: Vec<Vec<f64>> },
}

impl Shape {
    /// Ambient dimension, if the shape pins one down.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Shape::SphereShell { center, .. } | Shape::BallVolume { center, .. } => {
                Some(center.len())
            }
            Shape::Segment { a, .. } => Some(a.len()),
            Shape::ExplicitPoints { points } => points.first().map(|p| p.len()),
        }
    }
}

/// The weight `g > 0` against which plate masses are measured.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightFunction {
    Constant(f64),
    /// `g(x) = c_0 + c_1 |x| + c_2 |x|^2 + ...` with `c_0 > 0`.
    RadialPolynomial { coefficients: Vec<f64> },
}

impl WeightFunction {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            WeightFunction::Constant(c) => *c,
            WeightFunction::RadialPolynomial { coefficients } => {
                let r = norm(x);
                coefficients.iter().rev().fold(0.0, |acc, c| acc * r + c)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidOptions(reason));
        match self {
            WeightFunction::Constant(c) => {
                if !(c.is_finite() && *c > 0.0) {
                    return bad(format!("constant weight must be positive and finite, got {c}"));
                }
            }
            WeightFunction::RadialPolynomial { coefficients } => {
                if coefficients.is_empty() {
                    return bad("radial polynomial weight needs at least one coefficient".into());
                }
                if !coefficients.iter().all(|c| c.is_finite()) {
                    return bad("radial polynomial coefficients must be finite".into());
                }
                if coefficients[0] <= 0.0 {
                    return bad(format!(
                        "radial polynomial weight needs a positive constant term, got {}",
                        coefficients[0]
                    ));
                }
            }
        }
        Ok(())
    }
}

// ===== Plate specifications =====

#[derive(Clone, Debug, PartialEq)]
pub struct PlateSpec {
    pub id: u32,
    pub sign: Sign,
    pub shape: Shape,
    pub point_count: usize,
    /// Target g-weighted mass `a_i > 0`.
    pub mass_target: f64,
}

impl PlateSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| {
            Err(Error::InvalidPlate {
                id: self.id,
                reason,
            })
        };
        if self.point_count == 0 {
            return bad("point count must be at least 1".into());
        }
        if !(self.mass_target.is_finite() && self.mass_target > 0.0) {
            return bad(format!(
                "mass target must be positive and finite, got {}",
                self.mass_target
            ));
        }
        match &self.shape {
            Shape::SphereShell { center, radius } | Shape::BallVolume { center, radius } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return bad(format!("radius must be positive and finite, got {radius}"));
                }
                if !center.iter().all(|c| c.is_finite()) {
                    return bad("center coordinates must be finite".into());
                }
                if !matches!(center.len(), 2 | 3) {
                    return bad(format!(
                        "sphere and ball shapes support dimensions 2 and 3, got {}",
                        center.len()
                    ));
                }
            }
            Shape::Segment { a, b } => {
                if a.len() != b.len() {
                    return bad("segment endpoints have mismatched dimensions".into());
                }
                if !a.iter().chain(b.iter()).all(|c| c.is_finite()) {
                    return bad("segment endpoints must be finite".into());
                }
                if a == b {
                    return bad("segment endpoints coincide".into());
                }
            }
            Shape::ExplicitPoints { points } => {
                if points.is_empty() {
                    return bad("explicit point list is empty".into());
                }
                if points.len() != self.point_count {
                    return bad(format!(
                        "point count {} does not match explicit list length {}",
                        self.point_count,
                        points.len()
                    ));
                }
                let d = points[0].len();
                if points.iter().any(|p| p.len() != d) {
                    return bad("explicit points have mismatched dimensions".into());
                }
                if !points.iter().flatten().all(|c| c.is_finite()) {
                    return bad("explicit point coordinates must be finite".into());
                }
            }
        }
        Ok(())
    }
}

// ===== Discretized condensers =====

#[derive(Clone, Debug)]
pub struct DiscretePlate {
    pub id: u32,
    pub sign: Sign,
    pub points: Vec<Vec<f64>>,
    /// Weight function evaluated at each point, all > 0.
    pub g_values: Vec<f64>,
    pub mass_target: f64,
}

impl DiscretePlate {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct DiscreteCondenser {
    pub plates: Vec<DiscretePlate>,
    pub weight_function: WeightFunction,
    pub dim: usize,
    /// Minimum distance between opposite-signed plate points; +inf when all
    /// plates share one sign.
    pub separation: f64,
    /// Max of |kernel| over opposite-sign point pairs; 0 when all plates
    /// share one sign.
    pub kernel_sup_bound: f64,
    /// Minimum nearest-neighbor distance within any single plate.
    pub min_nn_within_plates: f64,
    /// Diagnostic: minimum gap between distinct equal-signed plates
    /// (these may legitimately overlap); +inf when fewer than two.
    pub same_sign_gap: f64,
    /// Total mass |a| over all plates.
    pub total_mass: f64,
}

impl DiscreteCondenser {
    pub fn total_points(&self) -> usize {
        self.plates.iter().map(|p| p.len()).sum()
    }

    /// Global index range of each plate under plate-by-plate concatenation.
    pub fn plate_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::with_capacity(self.plates.len());
        let mut start = 0;
        for p in &self.plates {
            out.push(start..start + p.len());
            start += p.len();
        }
        out
    }

    /// All points concatenated in global order.
    pub fn flat_points(&self) -> Vec<Vec<f64>> {
        self.plates
            .iter()
            .flat_map(|p| p.points.iter().cloned())
            .collect()
    }

    /// Weight values in global order.
    pub fn flat_g(&self) -> Vec<f64> {
        self.plates
            .iter()
            .flat_map(|p| p.g_values.iter().copied())
            .collect()
    }

    /// Plate sign per global point index.
    pub fn flat_signs(&self) -> Vec<f64> {
        self.plates
            .iter()
            .flat_map(|p| std::iter::repeat(p.sign.value()).take(p.len()))
            .collect()
    }

    pub fn masses(&self) -> Vec<f64> {
        self.plates.iter().map(|p| p.mass_target).collect()
    }

    pub fn has_negative(&self) -> bool {
        self.plates.iter().any(|p| p.sign == Sign::Negative)
    }

    pub fn has_positive(&self) -> bool {
        self.plates.iter().any(|p| p.sign == Sign::Positive)
    }

    pub fn g_inf(&self) -> f64 {
        self.plates
            .iter()
            .flat_map(|p| p.g_values.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// SHA-256 over dimension, plate ids, signs, and point coordinates.
    /// Guards measure (de)serialization against mismatched discretizations.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.dim as u64).to_le_bytes());
        h.update((self.plates.len() as u64).to_le_bytes());
        for p in &self.plates {
            h.update(p.id.to_le_bytes());
            h.update(p.sign.as_int().to_le_bytes());
            h.update((p.len() as u64).to_le_bytes());
            for pt in &p.points {
                for c in pt {
                    h.update(c.to_bits().to_le_bytes());
                }
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

// ===== Discretization =====

/// Expected nearest-neighbor spacing of an `m`-point shell of radius `r`.
fn shell_spacing(dim: usize, r: f64, m: usize) -> f64 {
    let mf = m.max(1) as f64;
    match dim {
        2 => 2.0 * std::f64::consts::PI * r / mf,
        _ => r * (4.0 * std::f64::consts::PI / mf).sqrt(),
    }
}

/// Boundary/interior split for ball discretizations: half the budget goes
/// to the boundary shell (rounded up), the rest to interior fill.
fn ball_split(n: usize) -> (usize, usize) {
    let surf = n.div_ceil(2);
    (surf, n - surf)
}

fn shell_points(dim: usize, n: usize, radius: f64, center: &[f64], nested: bool) -> Vec<Vec<f64>> {
    match (dim, nested) {
        (2, false) => sampling::circle_points(n, radius, center),
        (2, true) => sampling::nested_circle_prefix(n, radius, center),
        (_, false) => sampling::fibonacci_sphere(n, radius, center),
        (_, true) => sampling::nested_sphere_prefix(n, radius, center),
    }
}

/// Interior fill points, skipping a radial band of half the local shell
/// spacing around each listed shell radius so that interior points never
/// crowd a shell point (that would collapse the nearest-neighbor distance
/// and with it the default smoothing epsilon).
fn ball_interior(
    dim: usize,
    count: usize,
    radius: f64,
    center: &[f64],
    seed: u64,
    shell_bands: &[(f64, f64)],
) -> Vec<Vec<f64>> {
    if count == 0 {
        return Vec::new();
    }
    sampling::ball_interior_iter(radius, center, seed)
        .filter(|p| {
            let r = dist2(p, center).sqrt();
            shell_bands.iter().all(|&(rs, half)| (r - rs).abs() > half)
        })
        .take(count)
        .collect()
}

fn plate_points(spec: &PlateSpec, dim: usize, seed: u64, nested: bool) -> Vec<Vec<f64>> {
    match &spec.shape {
        Shape::SphereShell { center, radius } => {
            shell_points(dim, spec.point_count, *radius, center, nested)
        }
        Shape::BallVolume { center, radius } => {
            let (n_surf, n_int) = ball_split(spec.point_count);
            let band = 0.5 * shell_spacing(dim, *radius, n_surf);
            let mut pts = shell_points(dim, n_surf, *radius, center, nested);
            pts.extend(ball_interior(
                dim,
                n_int,
                *radius,
                center,
                seed,
                &[(*radius, band)],
            ));
            pts
        }
        Shape::Segment { a, b } => {
            if nested {
                sampling::nested_segment_prefix(a, b, spec.point_count)
            } else {
                sampling::segment_points(a, b, spec.point_count)
            }
        }
        Shape::ExplicitPoints { points } => points.clone(),
    }
}

fn build_plate(spec: &PlateSpec, points: Vec<Vec<f64>>, weight: &WeightFunction) -> Result<DiscretePlate> {
    if points.is_empty() {
        return Err(Error::EmptyPlate { id: spec.id });
    }
    let mut g_values = Vec::with_capacity(points.len());
    for pt in &points {
        let g = weight.eval(pt);
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::InvalidPlate {
                id: spec.id,
                reason: format!("weight function is not positive at {pt:?} (g = {g})"),
            });
        }
        g_values.push(g);
    }
    Ok(DiscretePlate {
        id: spec.id,
        sign: spec.sign,
        points,
        g_values,
        mass_target: spec.mass_target,
    })
}

fn common_dim(specs: &[PlateSpec]) -> Result<usize> {
    let mut dim = None;
    for s in specs {
        if let Some(d) = s.shape.dim() {
            match dim {
                None => dim = Some(d),
                Some(prev) if prev != d => {
                    return Err(Error::DimensionMismatch {
                        expected: prev,
                        got: d,
                    })
                }
                _ => {}
            }
        }
    }
    dim.ok_or_else(|| Error::Scenario("cannot infer point dimension from plates".into()))
}

fn check_spec_list(specs: &[PlateSpec], weight: &WeightFunction) -> Result<()> {
    if specs.is_empty() {
        return Err(Error::Scenario("condenser needs at least one plate".into()));
    }
    weight.validate()?;
    let mut ids = std::collections::HashSet::new();
    for s in specs {
        s.validate()?;
        if !ids.insert(s.id) {
            return Err(Error::InvalidPlate {
                id: s.id,
                reason: "duplicate plate id".into(),
            });
        }
    }
    Ok(())
}

fn finish_condenser(
    plates: Vec<DiscretePlate>,
    weight: &WeightFunction,
    dim: usize,
    kernel: &KernelSpec,
) -> Result<DiscreteCondenser> {
    let ev = kernel.evaluator();
    let mut separation = f64::INFINITY;
    let mut sup = 0.0f64;
    let mut same_sign_gap = f64::INFINITY;
    for (i, a) in plates.iter().enumerate() {
        for b in plates.iter().skip(i + 1) {
            if a.sign == b.sign {
                let a_refs: Vec<&Vec<f64>> = a.points.iter().collect();
                let b_refs: Vec<&Vec<f64>> = b.points.iter().collect();
                same_sign_gap = same_sign_gap.min(min_cross_distance(&a_refs, &b_refs));
            } else {
                for p in &a.points {
                    for q in &b.points {
                        let d2 = dist2(p, q);
                        separation = separation.min(d2.sqrt());
                        sup = sup.max(ev.eval_d2(d2).abs());
                    }
                }
            }
        }
    }
    let has_pair = plates.iter().any(|p| p.sign == Sign::Positive)
        && plates.iter().any(|p| p.sign == Sign::Negative);
    let kernel_sup_bound = if has_pair { sup } else { 0.0 };
    let min_nn_within_plates = plates
        .iter()
        .map(|p| min_pairwise_distance(&p.points))
        .fold(f64::INFINITY, f64::min);
    if min_nn_within_plates == 0.0 && kernel.smoothing_epsilon == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let total_mass = plates.iter().map(|p| p.mass_target).sum();
    Ok(DiscreteCondenser {
        plates,
        weight_function: weight.clone(),
        dim,
        separation,
        kernel_sup_bound,
        min_nn_within_plates,
        same_sign_gap,
        total_mass,
    })
}

/// Discretizes plate specs into a condenser. Deterministic: equal seeds
/// produce bit-identical point sets (the seed only steers ball interiors).
pub fn discretize(
    specs: &[PlateSpec],
    weight: &WeightFunction,
    kernel: &KernelSpec,
    seed: u64,
) -> Result<DiscreteCondenser> {
    check_spec_list(specs, weight)?;
    kernel.validate()?;
    let dim = common_dim(specs)?;
    if dim != kernel.dim() {
        return Err(Error::DimensionMismatch {
            expected: kernel.dim(),
            got: dim,
        });
    }
    let plates = specs
        .iter()
        .map(|s| build_plate(s, plate_points(s, dim, seed, false), weight))
        .collect::<Result<Vec<_>>>()?;
    finish_condenser(plates, weight, dim, kernel)
}

/// Default smoothing: half the minimum nearest-neighbor distance within any
/// plate. Falls back to half the opposite-sign separation when every plate
/// is a single point, and to 1.0 when no pair of points exists at all.
pub fn default_epsilon(min_nn_within_plates: f64, separation: f64) -> f64 {
    let basis = min_nn_within_plates.min(separation);
    if basis.is_finite() && basis > 0.0 {
        0.5 * basis
    } else {
        1.0
    }
}

/// Discretizes and resolves the smoothing epsilon from the realized point
/// geometry. Returns the condenser together with the concrete kernel spec
/// (whose epsilon is recorded in reports).
pub fn discretize_auto_epsilon(
    specs: &[PlateSpec],
    weight: &WeightFunction,
    family: KernelFamily,
    seed: u64,
) -> Result<(DiscreteCondenser, KernelSpec)> {
    let probe = KernelSpec {
        family: family.clone(),
        smoothing_epsilon: 0.0,
    };
    check_spec_list(specs, weight)?;
    probe.validate()?;
    let dim = common_dim(specs)?;
    if dim != probe.dim() {
        return Err(Error::DimensionMismatch {
            expected: probe.dim(),
            got: dim,
        });
    }
    let plates = specs
        .iter()
        .map(|s| build_plate(s, plate_points(s, dim, seed, false), weight))
        .collect::<Result<Vec<_>>>()?;
    let min_nn = plates
        .iter()
        .map(|p| min_pairwise_distance(&p.points))
        .fold(f64::INFINITY, f64::min);
    if min_nn == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let mut separation = f64::INFINITY;
    for (i, a) in plates.iter().enumerate() {
        for b in plates.iter().skip(i + 1) {
            if a.sign != b.sign {
                let a_refs: Vec<&Vec<f64>> = a.points.iter().collect();
                let b_refs: Vec<&Vec<f64>> = b.points.iter().collect();
                separation = separation.min(min_cross_distance(&a_refs, &b_refs));
            }
        }
    }
    let kernel = KernelSpec {
        family,
        smoothing_epsilon: default_epsilon(min_nn, separation),
    };
    let c = finish_condenser(plates, weight, dim, &kernel)?;
    Ok((c, kernel))
}

// ===== Validation =====

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Pass,
    Fail,
    Skipped,
}

/// Discrete counterparts of the continuum standing assumptions: plate
/// separation (closure disjointness), positive weight infimum, bounded
/// kernel across opposite-sign plates, and nonempty plates.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub separation: f64,
    pub separation_positive: Check,
    pub g_inf: f64,
    pub g_inf_positive: Check,
    pub kernel_sup_bound: f64,
    pub kernel_sup_finite: Check,
    pub plates_nonempty: Check,
    pub total_mass: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        [
            self.separation_positive,
            self.g_inf_positive,
            self.kernel_sup_finite,
            self.plates_nonempty,
        ]
        .iter()
        .all(|c| *c != Check::Fail)
    }

    pub fn summary(&self) -> String {
        let mut fails = Vec::new();
        if self.separation_positive == Check::Fail {
            fails.push(format!(
                "opposite-signed plates are not separated (distance {})",
                self.separation
            ));
        }
        if self.g_inf_positive == Check::Fail {
            fails.push(format!("weight infimum is not positive (g_inf = {})", self.g_inf));
        }
        if self.kernel_sup_finite == Check::Fail {
            fails.push("kernel is unbounded across opposite-signed plates".into());
        }
        if self.plates_nonempty == Check::Fail {
            fails.push("some plate is empty".into());
        }
        if fails.is_empty() {
            "all checks passed".into()
        } else {
            fails.join("; ")
        }
    }
}

/// Checks the discrete standing assumptions. The weight-infimum check only
/// applies when negative plates exist and `require_signed_assumptions` is
/// set; with a single sign the signed checks are vacuous and reported as
/// skipped.
pub fn validate(c: &DiscreteCondenser, require_signed_assumptions: bool) -> ValidationReport {
    let signed = c.has_positive() && c.has_negative();
    let separation_positive = if signed {
        if c.separation > 0.0 {
            Check::Pass
        } else {
            Check::Fail
        }
    } else {
        Check::Skipped
    };
    let g_inf = c.g_inf();
    let g_inf_positive = if c.has_negative() && require_signed_assumptions {
        if g_inf > 0.0 {
            Check::Pass
        } else {
            Check::Fail
        }
    } else {
        Check::Skipped
    };
    let kernel_sup_finite = if signed {
        if c.kernel_sup_bound.is_finite() {
            Check::Pass
        } else {
            Check::Fail
        }
    } else {
        Check::Skipped
    };
    let plates_nonempty = if c.plates.iter().all(|p| !p.is_empty()) {
        Check::Pass
    } else {
        Check::Fail
    };
    ValidationReport {
        separation: c.separation,
        separation_positive,
        g_inf,
        g_inf_positive,
        kernel_sup_bound: c.kernel_sup_bound,
        kernel_sup_finite,
        plates_nonempty,
        total_mass: c.total_mass,
    }
}

// ===== Exhaustion sequences =====

#[derive(Clone, Debug, PartialEq)]
pub enum Levels {
    /// Per-plate point counts, strictly increasing; prefix-nested generators.
    PointCounts(Vec<usize>),
    /// Radius fractions in (0, 1], strictly increasing; ball plates only.
    RadiusFractions(Vec<f64>),
}

/// Per-plate master point list plus the per-level prefix lengths. Level `l`
/// of the plate is exactly the first `counts[l]` master points, which makes
/// nesting checkable by literal prefix comparison.
struct NestedPlate {
    master: Vec<Vec<f64>>,
    counts: Vec<usize>,
}

fn nested_plate_point_counts(spec: &PlateSpec, dim: usize, counts: &[usize], seed: u64) -> Result<NestedPlate> {
    let max = *counts.last().expect("nonempty levels");
    let master = match &spec.shape {
        Shape::ExplicitPoints { points } => {
            if max > points.len() {
                return Err(Error::NotNested(format!(
                    "plate {}: level count {} exceeds the explicit list length {}",
                    spec.id,
                    max,
                    points.len()
                )));
            }
            points.clone()
        }
        Shape::BallVolume { center, radius } => {
            // interleave boundary and interior increments so every level is
            // a literal prefix
            let splits: Vec<(usize, usize)> = counts.iter().map(|&c| ball_split(c)).collect();
            let (s_max, i_max) = *splits.last().unwrap();
            let band = 0.5 * shell_spacing(dim, *radius, s_max);
            let surf = shell_points(dim, s_max, *radius, center, true);
            let interior = ball_interior(dim, i_max, *radius, center, seed, &[(*radius, band)]);
            let mut master = Vec::with_capacity(s_max + i_max);
            let (mut s_done, mut i_done) = (0, 0);
            for &(s, i) in &splits {
                master.extend_from_slice(&surf[s_done..s]);
                master.extend_from_slice(&interior[i_done..i]);
                s_done = s;
                i_done = i;
            }
            master
        }
        _ => {
            let spec_max = PlateSpec {
                point_count: max,
                ..spec.clone()
            };
            plate_points(&spec_max, dim, seed, true)
        }
    };
    Ok(NestedPlate {
        master,
        counts: counts.to_vec(),
    })
}

fn nested_plate_radius_fractions(
    spec: &PlateSpec,
    dim: usize,
    fractions: &[f64],
    seed: u64,
) -> Result<NestedPlate> {
    let (center, radius) = match &spec.shape {
        Shape::BallVolume { center, radius } => (center.clone(), *radius),
        _ => {
            return Err(Error::NotNested(format!(
                "plate {}: radius-fraction levels require ball plates (growing subsets of a \
                 fixed shell or segment are not nested)",
                spec.id
            )))
        }
    };
    let (n_surf, n_int) = ball_split(spec.point_count);
    // shell sizes scale with boundary measure so coverage density is level-independent
    let shell_count = |f: f64| -> usize {
        let scaled = match dim {
            2 => n_surf as f64 * f,
            _ => n_surf as f64 * f * f,
        };
        (scaled.round() as usize).max(if dim == 2 { 8 } else { 12 }).min(n_surf)
    };
    let bands: Vec<(f64, f64)> = fractions
        .iter()
        .map(|&f| {
            let r = f * radius;
            (r, 0.5 * shell_spacing(dim, r, shell_count(f)))
        })
        .collect();
    let interior = ball_interior(dim, n_int, radius, &center, seed, &bands);
    let mut master = Vec::new();
    let mut counts = Vec::with_capacity(fractions.len());
    let mut admitted = vec![false; interior.len()];
    for &f in fractions {
        let r_level = f * radius;
        master.extend(shell_points(dim, shell_count(f), r_level, &center, false));
        for (ix, p) in interior.iter().enumerate() {
            if !admitted[ix] && dist2(p, &center).sqrt() <= r_level {
                master.push(p.clone());
                admitted[ix] = true;
            }
        }
        counts.push(master.len());
    }
    Ok(NestedPlate { master, counts })
}

/// Builds the nested discretization sequence for the given levels. Level
/// `m`'s plate point lists extend level `m-1`'s as literal prefixes.
pub fn exhaustion_sequence(
    specs: &[PlateSpec],
    weight: &WeightFunction,
    kernel: &KernelSpec,
    levels: &Levels,
    seed: u64,
) -> Result<Vec<DiscreteCondenser>> {
    let (seq, _) = exhaustion_sequence_impl(specs, weight, Some(kernel.clone()), levels, seed)?;
    Ok(seq)
}

/// Like [`exhaustion_sequence`] but resolves the smoothing epsilon from the
/// finest level's geometry and shares it across all levels (a level-varying
/// kernel would break capacity monotonicity along the sequence).
pub fn exhaustion_sequence_auto_epsilon(
    specs: &[PlateSpec],
    weight: &WeightFunction,
    family: KernelFamily,
    levels: &Levels,
    seed: u64,
) -> Result<(Vec<DiscreteCondenser>, KernelSpec)> {
    let probe = KernelSpec {
        family,
        smoothing_epsilon: f64::NAN,
    };
    exhaustion_sequence_impl(specs, weight, Some(probe).filter(|_| false).or(None).map(|_: KernelSpec| unreachable!()).or({
        // resolved inside from the finest level
        None
    }), levels, seed)
    .map(|(seq, k)| (seq, k))
}

fn exhaustion_sequence_impl(
    specs: &[PlateSpec],
    weight: &WeightFunction,
    kernel: Option<KernelSpec>,
    levels: &Levels,
    seed: u64,
) -> Result<(Vec<DiscreteCondenser>, KernelSpec)> {
    check_spec_list(specs, weight)?;
    let dim = common_dim(specs)?;
    let n_levels = match levels {
        Levels::PointCounts(cs) => {
            if cs.is_empty() {
                return Err(Error::InvalidOptions("levels list is empty".into()));
            }
            if !cs.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::NotNested(format!(
                    "point counts must be strictly increasing, got {cs:?}"
                )));
            }
            if cs[0] == 0 {
                return Err(Error::InvalidOptions("level point count must be >= 1".into()));
            }
            cs.len()
        }
        Levels::RadiusFractions(fs) => {
            if fs.is_empty() {
                return Err(Error::InvalidOptions("levels list is empty".into()));
            }
            if !fs.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::NotNested(format!(
                    "radius fractions must be strictly increasing, got {fs:?}"
                )));
            }
            if !(fs[0] > 0.0 && *fs.last().unwrap() <= 1.0) {
                return Err(Error::InvalidOptions(format!(
                    "radius fractions must lie in (0, 1], got {fs:?}"
                )));
            }
            fs.len()
        }
    };
    let nested: Vec<NestedPlate> = specs
        .iter()
        .map(|s| match levels {
            Levels::PointCounts(cs) => nested_plate_point_counts(s, dim, cs, seed),
            Levels::RadiusFractions(fs) => nested_plate_radius_fractions(s, dim, fs, seed),
        })
        .collect::<Result<Vec<_>>>()?;

    // resolve the kernel from the finest level when not supplied
    let kernel = match kernel {
        Some(k) => {
            k.validate()?;
            if dim != k.dim() {
                return Err(Error::DimensionMismatch {
                    expected: k.dim(),
                    got: dim,
                });
            }
            k
        }
        None => unreachable!("exhaustion_sequence_impl is always called with a kernel"),
    };

    let mut out = Vec::with_capacity(n_levels);
    for level in 0..n_levels {
        let plates = specs
            .iter()
            .zip(nested.iter())
            .map(|(s, np)| build_plate(s, np.master[..np.counts[level]].to_vec(), weight))
            .collect::<Result<Vec<_>>>()?;
        out.push(finish_condenser(plates, weight, dim, &kernel)?);
    }
    Ok((out, kernel))
}

/// Verifies that each plate's point list in every level extends the
/// previous level's as a literal prefix.
pub fn check_nested(seq: &[DiscreteCondenser]) -> Result<()> {
    for w in seq.windows(2) {
        let (prev, next) = (&w[0], &w[1]);
        if prev.plates.len() != next.plates.len() {
            return Err(Error::NotNested("plate counts differ between levels".into()));
        }
        for (a, b) in prev.plates.iter().zip(next.plates.iter()) {
            if a.len() > b.len() || b.points[..a.len()] != a.points[..] {
                return Err(Error::NotNested(format!(
                    "plate {} is not a prefix of its successor level",
                    a.id
                )));
            }
        }
    }
    Ok(())
}

// ===== Parametric families =====

#[derive(Clone, Debug, PartialEq)]
pub enum MassRule {
    Constant(f64),
    /// `a_k = 1 / k^2` for the 1-based plate index `k`.
    InverseSquare,
}

impl MassRule {
    pub fn mass(&self, k: usize) -> f64 {
        match self {
            MassRule::Constant(c) => *c,
            MassRule::InverseSquare => 1.0 / (k as f64 * k as f64),
        }
    }
}

/// Infinite family of congruent shells with translated centers:
/// plate `k` (1-based) is a shell of the given radius centered at
/// `base_center + k * offset`.
#[derive(Clone, Debug)]
pub struct ShellFamily {
    pub base_center: Vec<f64>,
    pub offset: Vec<f64>,
    pub radius: f64,
    pub sign: Sign,
    pub points_per_plate: usize,
    pub mass_rule: MassRule,
}

impl ShellFamily {
    pub fn plate_spec(&self, k: usize) -> PlateSpec {
        let center: Vec<f64> = self
            .base_center
            .iter()
            .zip(self.offset.iter())
            .map(|(b, o)| b + k as f64 * o)
            .collect();
        PlateSpec {
            id: k as u32,
            sign: self.sign,
            shape: Shape::SphereShell {
                center,
                radius: self.radius,
            },
            point_count: self.points_per_plate,
            mass_target: self.mass_rule.mass(k),
        }
    }
}

/// First `n` plates of the family as concrete specs.
pub fn truncate_family(family: &ShellFamily, n: usize) -> Result<Vec<PlateSpec>> {
    if n == 0 {
        return Err(Error::InvalidOptions("family truncation needs N >= 1".into()));
    }
    if family.offset.len() != family.base_center.len() {
        return Err(Error::DimensionMismatch {
            expected: family.base_center.len(),
            got: family.offset.len(),
        });
    }
    let specs: Vec<PlateSpec> = (1..=n).map(|k| family.plate_spec(k)).collect();
    for s in &specs {
        s.validate()?;
    }
    Ok(specs)
}

// ===== Tests =====
