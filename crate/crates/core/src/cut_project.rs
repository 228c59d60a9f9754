//! Cut-and-project sets `Σ(Ω)` for quadratic bases and the search for
//! points of `Σ(Ω)` missing from the spectrum.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::attractor::{self, IfsSpec, MembershipStatus, PointClass, DEFAULT_STATE_BUDGET};
use crate::catalog::BaseSpec;
use crate::cyclotomic::{Alphabet, CyclotomicInt};
use crate::error::{Error, Result};
use crate::spectrum::{Patch, BALL_SLACK};

/// Slack on interval endpoints, applied toward inclusion.
pub const ENDPOINT_SLACK: f64 = 1e-12;

/// The pre-window `I × J` with `I = [−s, s]` (internal) and `J = [−t, t]` (physical).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OneDimWindow {
    pub s: f64,
    pub t: f64,
}

/// Acceptance window in the internal plane.
#[derive(Clone, Debug)]
pub enum WindowSpec {
    /// Convex polygon with counter-clockwise vertices in `Z[ω]`.
    Polygon { vertices: Vec<CyclotomicInt>, closed: bool },
    /// `K(σ(β), A)`; `closed = false` selects its interior.
    Attractor { ifs: Box<IfsSpec>, closed: bool },
}

impl WindowSpec {
    /// `K(σ(β), A)` for the canonical conjugation.
    pub fn attractor(base: &BaseSpec, alphabet: &Alphabet, closed: bool) -> Result<Self> {
        Ok(WindowSpec::Attractor { ifs: Box::new(IfsSpec::conjugate(base, alphabet, base.sigma())?), closed })
    }

    /// Polygon with vertices `ω^j / (1 − |σ(β)|)`, `j = 0..n−1`: the convex
    /// hull of the attractor when `σ(β)` is real.
    pub fn regular_polygon(base: &BaseSpec, closed: bool) -> Result<Self> {
        let g = base.conjugate(base.sigma());
        if !g.is_real() {
            return Err(Error::InvalidArgument("conjugate is not real".into()));
        }
        let abs = if g.real_sign() == Ordering::Less { -g } else { g };
        let one = CyclotomicInt::one(base.order);
        let c = (one - abs)
            .inverse()
            .ok_or_else(|| Error::InvalidArgument("1 − |σ(β)| is not a unit".into()))?;
        let n = base.order.get() as i64;
        let vertices = (0..n).map(|j| c * CyclotomicInt::root(base.order, j)).collect();
        Ok(WindowSpec::Polygon { vertices, closed })
    }

    /// The default window used for missing-point searches: the regular
    /// polygon when it coincides with the attractor, else `K` itself.
    pub fn default_for(base: &BaseSpec, alphabet: &Alphabet) -> Result<Self> {
        // with n = 10 and σ(β) < 0 the digits ω^j, −ω^j alternate along the
        // extreme expansions and K is the full decagon (β = τ)
        let g = base.conjugate(base.sigma());
        if alphabet.is_polygonal() && base.order.get() == 10 && g.is_real() && g.real_sign() == Ordering::Less {
            Self::regular_polygon(base, true)
        } else {
            Self::attractor(base, alphabet, true)
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            WindowSpec::Polygon { closed, .. } | WindowSpec::Attractor { closed, .. } => *closed,
        }
    }

    pub fn with_closed(&self, closed: bool) -> Self {
        match self {
            WindowSpec::Polygon { vertices, .. } => WindowSpec::Polygon { vertices: vertices.clone(), closed },
            WindowSpec::Attractor { ifs, .. } => WindowSpec::Attractor { ifs: ifs.clone(), closed },
        }
    }

    /// Position of `σ_k(x)` relative to the window; exact for polygons,
    /// heuristic (see [`attractor::classify`]) for fractal windows.
    pub fn classify(&self, x: &CyclotomicInt, k: u32) -> Result<PointClass> {
        match self {
            WindowSpec::Polygon { vertices, .. } => Ok(polygon_class(vertices, &x.galois_unchecked(k))),
            WindowSpec::Attractor { ifs, .. } => attractor::classify(ifs, x, DEFAULT_STATE_BUDGET),
        }
    }

    /// Whether `σ_k(x)` lies in the window.
    pub fn contains(&self, x: &CyclotomicInt, k: u32) -> Result<bool> {
        match self {
            WindowSpec::Polygon { vertices, closed } => {
                let c = polygon_class(vertices, &x.galois_unchecked(k));
                Ok(if *closed { c != PointClass::Outside } else { c == PointClass::Interior })
            }
            WindowSpec::Attractor { ifs, closed: true } => {
                Ok(attractor::membership(ifs, x, DEFAULT_STATE_BUDGET)?.status != MembershipStatus::Outside)
            }
            WindowSpec::Attractor { ifs, closed: false } => {
                Ok(attractor::classify(ifs, x, DEFAULT_STATE_BUDGET)? == PointClass::Interior)
            }
        }
    }
}

/// Exact position of `w` relative to a convex CCW polygon.
pub fn polygon_class(vertices: &[CyclotomicInt], w: &CyclotomicInt) -> PointClass {
    let n = vertices.len();
    let mut on_edge = false;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        // Im(conj(b − a)·(w − a)) is the cross product (b − a) × (w − a)
        match ((b - a).conj() * (*w - a)).imag_sign() {
            Ordering::Less => return PointClass::Outside,
            Ordering::Equal => on_edge = true,
            Ordering::Greater => {}
        }
    }
    if on_edge {
        PointClass::Boundary
    } else {
        PointClass::Interior
    }
}

/// A cut-and-project scheme for a quadratic base.
#[derive(Clone, Debug)]
pub struct CapSpec {
    pub base: BaseSpec,
    pub alphabet: Alphabet,
    pub window: WindowSpec,
    pub prewindow: OneDimWindow,
    /// `k` with `σ(ω) = ω^k`.
    pub sigma_omega_exponent: u32,
}

impl CapSpec {
    pub fn new(base: &BaseSpec, alphabet: &Alphabet, window: WindowSpec) -> Result<Self> {
        if !base.is_quadratic() {
            return Err(Error::InvalidArgument(format!("{} is not quadratic", base.case_id())));
        }
        let k = base.sigma();
        let n = base.order.get() as f64;
        let gamma = base.conjugate(k).embed().norm();
        let r = alphabet.max_modulus() / (1.0 - gamma);
        let theta_prime = 2.0 * PI * k as f64 / n;
        let theta = 2.0 * PI / n;
        let s = r / theta_prime.sin().abs();
        let t = alphabet.max_modulus() / ((base.value() - 1.0) * theta.sin());
        Ok(CapSpec {
            base: base.clone(),
            alphabet: alphabet.clone(),
            window,
            prewindow: OneDimWindow { s, t },
            sigma_omega_exponent: k,
        })
    }

    /// Scheme with [`WindowSpec::default_for`].
    pub fn standard(base: &BaseSpec, alphabet: &Alphabet) -> Result<Self> {
        Self::new(base, alphabet, WindowSpec::default_for(base, alphabet)?)
    }

    /// Radius of the seed ball `B_{1/(β−1)}(0)`.
    pub fn seed_radius(&self) -> f64 {
        self.alphabet.max_modulus() / (self.base.value() - 1.0)
    }
}

/// Integer pairs `(a, b)` with `a + bβ ∈ J` and `a + bβ′ ∈ I`.
pub fn one_dim_points(base: &BaseSpec, i: (f64, f64), j: (f64, f64)) -> Result<Vec<(i64, i64)>> {
    if !base.is_quadratic() {
        return Err(Error::InvalidArgument("one-dimensional sequences need a quadratic base".into()));
    }
    let beta = base.value();
    let beta_c = base.conjugate(base.sigma()).embed().re;
    let gap = beta - beta_c;
    assert!(gap.abs() > 1e-9, "β and its conjugate coincide");
    let (i_lo, i_hi) = (i.0 - ENDPOINT_SLACK, i.1 + ENDPOINT_SLACK);
    let (j_lo, j_hi) = (j.0 - ENDPOINT_SLACK, j.1 + ENDPOINT_SLACK);
    // b = (u − v)/(β − β′) with u ∈ J, v ∈ I
    let b_lo = ((j_lo - i_hi) / gap).min((j_hi - i_lo) / gap).floor() as i64;
    let b_hi = ((j_lo - i_hi) / gap).max((j_hi - i_lo) / gap).ceil() as i64;
    let mut out = Vec::new();
    for b in b_lo..=b_hi {
        let bf = b as f64;
        let lo = (j_lo - bf * beta).max(i_lo - bf * beta_c).ceil() as i64;
        let hi = (j_hi - bf * beta).min(i_hi - bf * beta_c).floor() as i64;
        for a in lo..=hi {
            let af = a as f64;
            let u = af + bf * beta;
            let v = af + bf * beta_c;
            if u >= j_lo && u <= j_hi && v >= i_lo && v <= i_hi {
                out.push((a, b));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `{x + ωy : x, y ∈ Σ(I) ∩ J}` intersected with the closed seed ball.
pub fn candidate_grid(spec: &CapSpec) -> Result<Vec<CyclotomicInt>> {
    candidate_grid_in_ball(spec, spec.seed_radius())
}

/// Candidate grid restricted to the closed ball of radius `r`: a superset of
/// `Σ(Ω) ∩ B_r(0)` for every window inside `B_R(0)`.
pub fn candidate_grid_in_ball(spec: &CapSpec, r: f64) -> Result<Vec<CyclotomicInt>> {
    let n = spec.base.order.get() as f64;
    let s = spec.prewindow.s;
    let t = r / (2.0 * PI / n).sin();
    let pairs = one_dim_points(&spec.base, (-s, s), (-t, t))?;
    let order = spec.base.order;
    let one = CyclotomicInt::one(order);
    let xs: Vec<CyclotomicInt> = pairs.iter().map(|&(a, b)| one.scale(a) + spec.base.beta.scale(b)).collect();
    let w = CyclotomicInt::root(order, 1);
    let mut out: Vec<CyclotomicInt> = xs
        .par_iter()
        .flat_map_iter(|&x| xs.iter().map(move |&y| x + w * y).filter(|z| z.embed().norm() <= r + BALL_SLACK))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `Σ(Ω) ∩ B_r(0)`.
pub fn model_set_in_ball(spec: &CapSpec, window: &WindowSpec, r: f64) -> Result<Vec<CyclotomicInt>> {
    let grid = candidate_grid_in_ball(spec, r)?;
    let k = spec.sigma_omega_exponent;
    let flags: Vec<Result<bool>> = grid.par_iter().map(|x| window.contains(x, k)).collect();
    let mut out = Vec::new();
    for (x, f) in grid.into_iter().zip(flags) {
        if f? {
            out.push(x);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingClassification {
    None,
    BoundaryOnly,
    Interior,
}

#[derive(Clone, Debug, Serialize)]
pub struct MissingPoint {
    pub point: CyclotomicInt,
    pub depth: u32,
    pub class: PointClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct MissingReport {
    pub case: String,
    pub seed_missing: Vec<CyclotomicInt>,
    /// `(depth, points)` for `depth = 1..=max_depth`.
    pub propagated_missing: Vec<(u32, Vec<CyclotomicInt>)>,
    pub points: Vec<MissingPoint>,
    pub classification: MissingClassification,
    pub notes: Vec<String>,
}

/// Points of `Σ(Ω)` absent from the spectrum: seeds in the ball
/// `B_{1/(β−1)}(0)`, then forward images `βx + a` up to `max_depth`.
pub fn missing_points(spec: &CapSpec, patch: &Patch, max_depth: u32) -> Result<MissingReport> {
    let beta = spec.base.value();
    // |βx + a| ≤ β|x| + max|a| iterated max_depth times from the seed ball
    let grow = beta.powi(max_depth as i32);
    let needed = grow * spec.seed_radius() + spec.alphabet.max_modulus() * (grow - 1.0) / (beta - 1.0);
    match patch.radius() {
        Some(r) if r + BALL_SLACK >= needed => {}
        _ => {
            return Err(Error::IncompletePatch(format!(
                "missing-point propagation to depth {max_depth} needs a complete ball patch of radius ≥ {needed:.6}"
            )))
        }
    }
    let k = spec.sigma_omega_exponent;
    let absent_member = |x: &CyclotomicInt| -> Result<bool> { Ok(!patch.contains(x) && spec.window.contains(x, k)?) };

    let grid = candidate_grid(spec)?;
    let flags: Vec<Result<bool>> = grid.par_iter().map(|x| absent_member(x)).collect();
    let mut seeds = Vec::new();
    for (x, f) in grid.into_iter().zip(flags) {
        if f? {
            seeds.push(x);
        }
    }

    let mut propagated = Vec::new();
    let mut frontier = seeds.clone();
    let mut seen: HashSet<CyclotomicInt> = seeds.iter().copied().collect();
    for depth in 1..=max_depth {
        let mut cands: Vec<CyclotomicInt> = frontier
            .iter()
            .flat_map(|&x| spec.alphabet.digits().iter().map(move |&a| spec.base.beta * x + a))
            .filter(|y| seen.insert(*y))
            .collect();
        cands.sort_unstable();
        let flags: Vec<Result<bool>> = cands.par_iter().map(|x| absent_member(x)).collect();
        let mut next = Vec::new();
        for (x, f) in cands.into_iter().zip(flags) {
            if f? {
                next.push(x);
            }
        }
        propagated.push((depth, next.clone()));
        frontier = next;
    }

    let mut all: Vec<(CyclotomicInt, u32)> = seeds.iter().map(|&x| (x, 0)).collect();
    for (d, pts) in &propagated {
        all.extend(pts.iter().map(|&x| (x, *d)));
    }
    let classes: Vec<Result<PointClass>> = all.par_iter().map(|(x, _)| spec.window.classify(x, k)).collect();
    let mut points = Vec::with_capacity(all.len());
    for ((point, depth), class) in all.into_iter().zip(classes) {
        points.push(MissingPoint { point, depth, class: class? });
    }
    let classification = if points.is_empty() {
        MissingClassification::None
    } else if points.iter().any(|p| p.class == PointClass::Interior) {
        MissingClassification::Interior
    } else {
        MissingClassification::BoundaryOnly
    };
    let mut notes = Vec::new();
    if !spec.base.is_unit {
        notes.push("base is not a unit: propagation completeness unavailable; seeds are exact".into());
    }
    if matches!(spec.window, WindowSpec::Attractor { .. }) {
        notes.push("interior/boundary labels for fractal windows are heuristic".into());
    }
    Ok(MissingReport {
        case: spec.base.case_id(),
        seed_missing: seeds,
        propagated_missing: propagated,
        points,
        classification,
        notes,
    })
}

/// Qualitative cut-and-project check for a cubic base.
#[derive(Clone, Debug, Serialize)]
pub struct CubicReport {
    pub case: String,
    pub checked: usize,
    /// Patch points whose conjugates fall outside `K₁ × K₂` (expected empty).
    pub outside: Vec<CyclotomicInt>,
    /// Lattice points of a coarse box with conjugates in `K₁ × K₂` that are
    /// absent from the spectrum: a lower bound on the missing points.
    pub missing_lower_bound: Vec<CyclotomicInt>,
    pub box_bound: i64,
}

/// Verifies `σ₁(x) ∈ K₁`, `σ₂(x) ∈ K₂` for every patch point and scans the
/// box `|c_i| ≤ box_bound` inside the seed ball for missing points.
pub fn cubic_check(base: &BaseSpec, alphabet: &Alphabet, patch: &Patch, box_bound: i64) -> Result<CubicReport> {
    if base.degree() != 3 {
        return Err(Error::InvalidArgument(format!("{} is not cubic", base.case_id())));
    }
    let ifs = IfsSpec::conjugate_product(base, alphabet, &base.conj_auts)?;
    let inside = |x: &CyclotomicInt| -> Result<bool> {
        Ok(attractor::membership(&ifs, x, DEFAULT_STATE_BUDGET)?.status != MembershipStatus::Outside)
    };
    let flags: Vec<Result<bool>> = patch.points.par_iter().map(inside).collect();
    let mut outside = Vec::new();
    for (x, f) in patch.points.iter().zip(flags) {
        if !f? {
            outside.push(*x);
        }
    }
    let r = alphabet.max_modulus() / (base.value() - 1.0);
    if patch.radius().map_or(true, |pr| pr + BALL_SLACK < r) {
        return Err(Error::IncompletePatch(format!("cubic check needs a complete ball of radius ≥ {r:.6}")));
    }
    let d = base.order.degree();
    let width = (2 * box_bound + 1) as usize;
    let total = width.pow(d as u32);
    let cands: Vec<CyclotomicInt> = (0..total)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut c = [0i64; 6];
            for slot in c.iter_mut().take(d) {
                *slot = (idx % width) as i64 - box_bound;
                idx /= width;
            }
            let z = CyclotomicInt::from_coeffs(base.order, &c[..d]).ok()?;
            (z.embed().norm() <= r + BALL_SLACK && !patch.contains(&z)).then_some(z)
        })
        .collect();
    let flags: Vec<Result<bool>> = cands.par_iter().map(inside).collect();
    let mut missing = Vec::new();
    for (x, f) in cands.into_iter().zip(flags) {
        if f? {
            missing.push(x);
        }
    }
    missing.sort_unstable();
    Ok(CubicReport { case: base.case_id(), checked: patch.len(), outside, missing_lower_bound: missing, box_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::generate_ball;

    fn case(name: &str, n: u32) -> (BaseSpec, Alphabet) {
        let b = BaseSpec::lookup(name, n).unwrap();
        let a = Alphabet::polygonal(b.order);
        (b, a)
    }

    #[test]
    fn unit_intervals_for_tau() {
        let (b, _) = case("tau", 5);
        let got = one_dim_points(&b, (-1.0, 1.0), (-1.0, 1.0)).unwrap();
        let beta = b.value();
        let beta_c = 1.0 - beta;
        let mut brute = Vec::new();
        for a in -3i64..=3 {
            for bb in -3i64..=3 {
                let u = a as f64 + bb as f64 * beta;
                let v = a as f64 + bb as f64 * beta_c;
                if u.abs() <= 1.0 && v.abs() <= 1.0 {
                    brute.push((a, bb));
                }
            }
        }
        assert_eq!(got, brute);
        assert_eq!(got, vec![(-1, 0), (0, 0), (1, 0)]);
    }

    #[test]
    fn table_three_intervals() {
        let rows = [
            ("tau", 5, 4.45406, 1.70130),
            ("tau", 10, 2.75276, 2.75276),
            ("tau2", 10, 1.70130, 1.05146),
            ("delta", 8, 2.41421, 1.0),
            ("mu", 12, 7.46410, 1.15470),
        ];
        for (name, n, s, t) in rows {
            let (b, a) = case(name, n);
            let spec = CapSpec::standard(&b, &a).unwrap();
            assert!((spec.prewindow.s - s).abs() < 1e-5, "{name} {n} s={}", spec.prewindow.s);
            assert!((spec.prewindow.t - t).abs() < 1e-5, "{name} {n} t={}", spec.prewindow.t);
        }
    }

    #[test]
    fn polygon_classes_are_exact() {
        let (b, _) = case("tau", 10);
        let WindowSpec::Polygon { vertices, .. } = WindowSpec::regular_polygon(&b, true).unwrap() else {
            panic!("expected polygon")
        };
        assert!((vertices[0].embed().re - 2.618033988749895).abs() < 1e-12);
        let o = b.order;
        assert_eq!(polygon_class(&vertices, &CyclotomicInt::zero(o)), PointClass::Interior);
        assert_eq!(polygon_class(&vertices, &vertices[3]), PointClass::Boundary);
        assert_eq!(polygon_class(&vertices, &(vertices[3] + vertices[4])), PointClass::Outside);
        assert_eq!(polygon_class(&vertices, &vertices[3].scale(2)), PointClass::Outside);
    }

    #[test]
    fn grid_covers_spectrum_ball() {
        let (b, a) = case("delta", 8);
        let spec = CapSpec::standard(&b, &a).unwrap();
        let grid = candidate_grid(&spec).unwrap();
        let zero = CyclotomicInt::zero(b.order);
        assert!(grid.contains(&zero));
        let patch = generate_ball(&b, &a, spec.seed_radius()).unwrap();
        for p in &patch.points {
            assert!(grid.binary_search(p).is_ok(), "{p}");
        }
    }

    #[test]
    fn rejects_small_patch() {
        let (b, a) = case("delta", 8);
        let spec = CapSpec::standard(&b, &a).unwrap();
        let patch = generate_ball(&b, &a, 1.0).unwrap();
        assert!(matches!(missing_points(&spec, &patch, 2), Err(Error::IncompletePatch(_))));
    }

    #[test]
    fn cubic_rejected_by_cap() {
        let (b, a) = case("lambda", 7);
        assert!(CapSpec::standard(&b, &a).is_err());
    }
}
