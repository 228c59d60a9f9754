//! IFS attractors `K(γ, A) = {Σ a_i γ^i}` for `γ = σ(β)` or `γ = 1/β`,
//! their finite approximations and exact membership tests.
//!
//! Membership follows the contraction orbit: `w ∈ K` iff `w = a + γw'` with
//! `w' ∈ K`. When `γ^{−1}` lies in `Z[ω]` the orbit stays in a finite set of
//! lattice points, so a depth-first search either closes a cycle (an
//! eventually periodic expansion, hence inside) or exhausts every branch
//! (outside).

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::BaseSpec;
use crate::cyclotomic::{Alphabet, CyclotomicInt};
use crate::error::{Error, Result};
use crate::spectrum::Patch;

/// Outward slack on the pruning radius.
pub const PRUNE_SLACK: f64 = 1e-9;
/// Default number of distinct states a single membership query may visit.
pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;
/// Default point cap for [`approximate`].
pub const DEFAULT_APPROX_CAP: usize = 5_000_000;
/// Target resolution of the floating-point fallback and of interior probes.
pub const PROBE_RESOLUTION: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum IfsKind {
    /// `K(σ_k(β), A)` for each listed `k`; with several exponents the
    /// attractor is the product window `K₁ × K₂` of a cubic base.
    Conjugate { auts: Vec<u32> },
    /// `K(1/β, A)`.
    Inverse,
}

/// An IFS attractor together with the exact data used to decide membership.
#[derive(Clone, Debug)]
pub struct IfsSpec {
    pub base: BaseSpec,
    pub alphabet: Alphabet,
    pub kind: IfsKind,
    /// `γ` for the first (or only) factor.
    pub contraction: Complex64,
    /// `γ` in `Z[ω]` when it is an algebraic integer.
    pub contraction_exact: Option<CyclotomicInt>,
    /// Multiplier of the orbit map `s ↦ (s − a)·E`, when `E ∈ Z[ω]`.
    pub expansion: Option<CyclotomicInt>,
    /// `(exponent, radius)` checks applied to each orbit state.
    checks: Vec<(u32, f64)>,
    pub bounding_radius: f64,
}

impl IfsSpec {
    /// `K(σ_k(β), A)`.
    pub fn conjugate(base: &BaseSpec, alphabet: &Alphabet, k: u32) -> Result<Self> {
        Self::conjugate_product(base, alphabet, &[k])
    }

    /// The product window `∏_k K(σ_k(β), A)` over the given exponents.
    pub fn conjugate_product(base: &BaseSpec, alphabet: &Alphabet, auts: &[u32]) -> Result<Self> {
        if alphabet.order() != base.order {
            return Err(Error::OrderMismatch { left: base.order.get(), right: alphabet.order().get() });
        }
        let n = base.order.get();
        if auts.is_empty() {
            return Err(Error::InvalidArgument("no conjugating exponent given".into()));
        }
        let mut checks = Vec::new();
        for &k in auts {
            let kk = k % n;
            if !base.conj_auts.contains(&kk) && !base.conj_auts.contains(&(n - kk)) {
                return Err(Error::InvalidArgument(format!(
                    "exponent {k} does not conjugate {} into the unit disc",
                    base.case_id()
                )));
            }
            let g = base.conjugate(kk).embed().norm();
            checks.push((kk, alphabet.max_modulus() / (1.0 - g)));
        }
        let gamma = base.conjugate(auts[0] % n);
        Ok(IfsSpec {
            base: base.clone(),
            alphabet: alphabet.clone(),
            kind: IfsKind::Conjugate { auts: checks.iter().map(|c| c.0).collect() },
            contraction: gamma.embed(),
            contraction_exact: Some(gamma),
            expansion: base.beta.inverse(),
            bounding_radius: checks[0].1,
            checks,
        })
    }

    /// `K(1/β, A)`.
    pub fn inverse(base: &BaseSpec, alphabet: &Alphabet) -> Result<Self> {
        if alphabet.order() != base.order {
            return Err(Error::OrderMismatch { left: base.order.get(), right: alphabet.order().get() });
        }
        let b = base.value();
        let radius = alphabet.max_modulus() * b / (b - 1.0);
        Ok(IfsSpec {
            base: base.clone(),
            alphabet: alphabet.clone(),
            kind: IfsKind::Inverse,
            contraction: Complex64::new(1.0 / b, 0.0),
            contraction_exact: base.beta.inverse(),
            expansion: Some(base.beta),
            checks: vec![(1, radius)],
            bounding_radius: radius,
        })
    }

    /// Whether membership is decided exactly.
    pub fn is_exact(&self) -> bool {
        self.expansion.is_some()
    }

    /// The exponent through which lattice points are viewed in the window.
    pub fn view_aut(&self) -> u32 {
        self.checks[0].0
    }

    /// The window coordinate of a lattice point (`σ_k(x)`, or `x` itself).
    pub fn view(&self, x: &CyclotomicInt) -> CyclotomicInt {
        match self.kind {
            IfsKind::Conjugate { .. } => x.galois_unchecked(self.view_aut()),
            IfsKind::Inverse => *x,
        }
    }

    /// `bounding_radius · |γ|^depth`.
    pub fn resolution(&self, depth: u32) -> f64 {
        self.bounding_radius * self.contraction.norm().powi(depth as i32)
    }

    fn within_checks(&self, s: &CyclotomicInt) -> bool {
        self.checks
            .iter()
            .all(|&(k, r)| embed_aut(s, k).norm() <= r + PRUNE_SLACK)
    }

    /// Window-coordinate image of digit `a` (`σ_k(a)` for conjugate windows).
    fn digit_image(&self, a: &CyclotomicInt) -> Complex64 {
        embed_aut(a, self.view_aut())
    }
}

#[inline]
fn embed_aut(z: &CyclotomicInt, k: u32) -> Complex64 {
    if k == 1 {
        z.embed()
    } else {
        z.galois_unchecked(k).embed()
    }
}

/// Depth-truncated sums `Σ_{i<depth} a_i γ^i`.
#[derive(Clone, Debug)]
pub struct AttractorApprox {
    pub depth: u32,
    /// Exact points (empty when `γ` is not an algebraic integer).
    pub points: Vec<CyclotomicInt>,
    pub embedded: Vec<Complex64>,
    pub resolution: f64,
}

/// All depth-truncated sums, via `P_{d+1} = ⋃_a (γP_d + a)`.
pub fn approximate(spec: &IfsSpec, depth: u32, cap: usize) -> Result<AttractorApprox> {
    let digits = spec.alphabet.digits();
    match spec.contraction_exact {
        Some(gamma) => {
            let mut pts = vec![CyclotomicInt::zero(spec.base.order)];
            for _ in 0..depth {
                let mut next: Vec<CyclotomicInt> = pts
                    .par_iter()
                    .flat_map_iter(|&p| {
                        let gp = gamma * p;
                        digits.iter().map(move |&a| gp + a)
                    })
                    .collect();
                next.par_sort_unstable();
                next.dedup();
                if next.len() > cap {
                    return Err(Error::Budget { budget: "attractor points", limit: cap });
                }
                pts = next;
            }
            let embedded = pts.iter().map(CyclotomicInt::embed).collect();
            Ok(AttractorApprox { depth, points: pts, embedded, resolution: spec.resolution(depth) })
        }
        None => {
            let g = spec.contraction;
            let imgs: Vec<Complex64> = digits.iter().map(|a| spec.digit_image(a)).collect();
            let mut pts = vec![Complex64::new(0.0, 0.0)];
            for _ in 0..depth {
                let mut next: Vec<Complex64> =
                    pts.par_iter().flat_map_iter(|&p| imgs.iter().map(move |&a| g * p + a)).collect();
                dedupe_floats(&mut next);
                if next.len() > cap {
                    return Err(Error::Budget { budget: "attractor points", limit: cap });
                }
                pts = next;
            }
            Ok(AttractorApprox { depth, points: Vec::new(), embedded: pts, resolution: spec.resolution(depth) })
        }
    }
}

/// Depth-truncated sums merged on a square grid of side `cell` after every
/// level; each point stays within `cell/(1 − |γ|)` of an exact sum.
pub fn approximate_on_grid(spec: &IfsSpec, depth: u32, cell: f64, cap: usize) -> Result<AttractorApprox> {
    if !(cell > 0.0 && cell.is_finite()) {
        return Err(Error::InvalidArgument(format!("grid cell {cell} must be positive")));
    }
    let g = spec.contraction;
    let imgs: Vec<Complex64> = spec.alphabet.digits().iter().map(|a| spec.digit_image(a)).collect();
    let key = |z: &Complex64| ((z.re / cell).round() as i64, (z.im / cell).round() as i64);
    let mut pts = vec![Complex64::new(0.0, 0.0)];
    for _ in 0..depth {
        let mut next: Vec<Complex64> = pts.par_iter().flat_map_iter(|&p| imgs.iter().map(move |&a| g * p + a)).collect();
        next.par_sort_unstable_by(|a, b| key(a).cmp(&key(b)).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im)));
        next.dedup_by(|a, b| key(a) == key(b));
        if next.len() > cap {
            return Err(Error::Budget { budget: "attractor points", limit: cap });
        }
        pts = next;
    }
    let resolution = spec.resolution(depth) + cell / (1.0 - g.norm());
    Ok(AttractorApprox { depth, points: Vec::new(), embedded: pts, resolution })
}

fn dedupe_floats(v: &mut Vec<Complex64>) {
    const Q: f64 = 1e12;
    let mut seen = HashSet::with_capacity(v.len());
    v.retain(|z| seen.insert(((z.re * Q).round() as i64, (z.im * Q).round() as i64)));
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Galois image of every patch point under `ω ↦ ω^k`, sorted.
pub fn conjugate_patch(patch: &Patch, k: u32) -> Result<Vec<CyclotomicInt>> {
    let n = patch.base.order.get();
    let kk = k % n;
    if !patch.base.conj_auts.contains(&kk) && !patch.base.conj_auts.contains(&(n - kk)) {
        return Err(Error::InvalidArgument(format!("exponent {k} is not a conjugating automorphism")));
    }
    let mut out: Vec<CyclotomicInt> = patch.points.iter().map(|p| p.galois_unchecked(kk)).collect();
    out.sort_unstable();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipStatus {
    Inside,
    Outside,
    BoundarySuspect,
}

/// Eventually periodic digit word, as indices into the alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub preperiod: Vec<usize>,
    pub period: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipResult {
    pub status: MembershipStatus,
    pub certificate: Option<Certificate>,
    /// Deepest level reached before every branch left the bounding ball.
    pub escape_depth: Option<usize>,
    pub states_visited: usize,
}

impl MembershipResult {
    /// Evaluates the certificate's expansion in the window coordinate.
    pub fn replay(&self, spec: &IfsSpec) -> Option<Complex64> {
        let cert = self.certificate.as_ref()?;
        let g = spec.contraction;
        let digits = spec.alphabet.digits();
        let img = |i: usize| spec.digit_image(&digits[i]);
        let mut value = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for &d in &cert.preperiod {
            value += img(d) * pw;
            pw *= g;
        }
        let mut per = Complex64::new(0.0, 0.0);
        let mut ppw = Complex64::new(1.0, 0.0);
        for &d in &cert.period {
            per += img(d) * ppw;
            ppw *= g;
        }
        Some(value + pw * per / (Complex64::new(1.0, 0.0) - ppw))
    }
}

/// Decides whether the window coordinate of `x` lies in `K` (closed).
///
/// Exact when `spec.is_exact()`; otherwise a floating-point search to
/// [`PROBE_RESOLUTION`] that reports `BoundarySuspect` for points it cannot
/// separate from `K`.
pub fn membership(spec: &IfsSpec, x: &CyclotomicInt, budget: usize) -> Result<MembershipResult> {
    match spec.expansion {
        Some(e) => membership_exact(spec, x, e, budget),
        None => membership_float(spec, spec.view(x).embed(), budget),
    }
}

struct Frame {
    state: CyclotomicInt,
    children: Vec<(usize, CyclotomicInt)>,
    next: usize,
}

fn membership_exact(spec: &IfsSpec, x: &CyclotomicInt, e: CyclotomicInt, budget: usize) -> Result<MembershipResult> {
    if !spec.within_checks(x) {
        return Ok(MembershipResult {
            status: MembershipStatus::Outside,
            certificate: None,
            escape_depth: Some(0),
            states_visited: 1,
        });
    }
    let digits = spec.alphabet.digits();
    let view = spec.view_aut();
    let children = |s: &CyclotomicInt| -> Vec<(usize, CyclotomicInt)> {
        let mut out: Vec<(f64, usize, CyclotomicInt)> = digits
            .iter()
            .enumerate()
            .map(|(i, a)| (i, (*s - *a) * e))
            .filter(|(_, t)| spec.within_checks(t))
            .map(|(i, t)| (embed_aut(&t, view).norm(), i, t))
            .collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        out.into_iter().map(|(_, i, t)| (i, t)).collect()
    };

    // value: Some(stack position) while on the current path, None when finished
    let mut marks: HashMap<CyclotomicInt, Option<usize>> = HashMap::new();
    let mut stack: Vec<Frame> = Vec::new();
    let mut path_digits: Vec<usize> = Vec::new();
    marks.insert(*x, Some(0));
    stack.push(Frame { state: *x, children: children(x), next: 0 });
    let mut max_depth = 0;

    while let Some(top) = stack.last_mut() {
        if top.next == top.children.len() {
            let done = stack.pop().unwrap();
            marks.insert(done.state, None);
            path_digits.pop();
            continue;
        }
        let (digit, child) = top.children[top.next];
        top.next += 1;
        match marks.entry(child) {
            Entry::Occupied(o) => {
                if let Some(pos) = *o.get() {
                    path_digits.push(digit);
                    let certificate = Certificate {
                        preperiod: path_digits[..pos].to_vec(),
                        period: path_digits[pos..].to_vec(),
                    };
                    return Ok(MembershipResult {
                        status: MembershipStatus::Inside,
                        certificate: Some(certificate),
                        escape_depth: None,
                        states_visited: marks.len(),
                    });
                }
            }
            Entry::Vacant(v) => {
                v.insert(Some(stack.len()));
                if marks.len() > budget {
                    return Err(Error::Budget { budget: "membership states", limit: budget });
                }
                path_digits.push(digit);
                max_depth = max_depth.max(stack.len());
                let ch = children(&child);
                stack.push(Frame { state: child, children: ch, next: 0 });
            }
        }
    }
    Ok(MembershipResult {
        status: MembershipStatus::Outside,
        certificate: None,
        escape_depth: Some(max_depth),
        states_visited: marks.len(),
    })
}

/// Depth at which `bounding_radius·|γ|^d` drops below [`PROBE_RESOLUTION`].
fn float_depth(spec: &IfsSpec) -> usize {
    let g = spec.contraction.norm();
    ((PROBE_RESOLUTION / spec.bounding_radius).ln() / g.ln()).ceil().max(1.0) as usize
}

fn membership_float(spec: &IfsSpec, w: Complex64, budget: usize) -> Result<MembershipResult> {
    let r = spec.bounding_radius;
    if w.norm() > r + PRUNE_SLACK {
        return Ok(MembershipResult {
            status: MembershipStatus::Outside,
            certificate: None,
            escape_depth: Some(0),
            states_visited: 1,
        });
    }
    let g = spec.contraction;
    let imgs: Vec<Complex64> = spec.alphabet.digits().iter().map(|a| spec.digit_image(a)).collect();
    let target = float_depth(spec);
    let mut nodes = 0usize;
    let mut max_depth = 0usize;
    let mut stack: Vec<(Complex64, usize)> = vec![(w, 0)];
    while let Some((z, d)) = stack.pop() {
        nodes += 1;
        if nodes > budget {
            return Err(Error::Budget { budget: "membership states", limit: budget });
        }
        max_depth = max_depth.max(d);
        if d == target {
            return Ok(MembershipResult {
                status: MembershipStatus::BoundarySuspect,
                certificate: None,
                escape_depth: None,
                states_visited: nodes,
            });
        }
        let mut kids: Vec<Complex64> =
            imgs.iter().map(|&a| (z - a) / g).filter(|t| t.norm() <= r + PRUNE_SLACK).collect();
        // pop order: smallest modulus first
        kids.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
        stack.extend(kids.into_iter().map(|t| (t, d + 1)));
    }
    Ok(MembershipResult {
        status: MembershipStatus::Outside,
        certificate: None,
        escape_depth: Some(max_depth),
        states_visited: nodes,
    })
}

/// Position of a point relative to a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointClass {
    Interior,
    Boundary,
    Outside,
}

/// Interior/boundary classification for points of a fractal window.
///
/// Heuristic: a member is `Interior` when every probe at distance about
/// [`PROBE_RESOLUTION`] in `2n` directions is also a member, at two scales.
/// Exact windows probe with lattice points `x + β^m u`, whose window images
/// sit at `σ(β)^m σ(u)` from `σ(x)`; other windows probe in floating point.
pub fn classify(spec: &IfsSpec, x: &CyclotomicInt, budget: usize) -> Result<PointClass> {
    let m = membership(spec, x, budget)?;
    if m.status == MembershipStatus::Outside {
        return Ok(PointClass::Outside);
    }
    let order = spec.base.order;
    let n = order.get() as i64;
    let dirs: Vec<CyclotomicInt> = (0..n)
        .flat_map(|j| {
            [
                CyclotomicInt::root(order, j),
                CyclotomicInt::root(order, j) + CyclotomicInt::root(order, j + 1),
            ]
        })
        .collect();
    match (spec.expansion, &spec.kind) {
        (Some(_), IfsKind::Conjugate { .. }) => {
            let g = spec.contraction.norm();
            let m0 = (PROBE_RESOLUTION.ln() / g.ln()).ceil() as u32;
            for scale in [m0, m0 + 2] {
                let step = spec.base.beta.pow(scale);
                for u in &dirs {
                    let probe = *x + step * *u;
                    if membership(spec, &probe, budget)?.status != MembershipStatus::Inside {
                        return Ok(PointClass::Boundary);
                    }
                }
            }
            Ok(PointClass::Interior)
        }
        _ => {
            let w = spec.view(x).embed();
            for eps in [PROBE_RESOLUTION * 10.0, PROBE_RESOLUTION * 100.0] {
                for u in &dirs {
                    let d = u.embed();
                    let probe = w + d / d.norm() * eps;
                    if membership_float(spec, probe, budget)?.status == MembershipStatus::Outside {
                        return Ok(PointClass::Boundary);
                    }
                }
            }
            Ok(PointClass::Interior)
        }
    }
}

/// Membership of points `σ(β)^m·u` near `0` in `K(1/β, A)`, evidence for
/// `0 ∈ int K(1/β, A)` (equivalently, every complex number has a
/// `(1/β, A)`-representation).
pub fn representability_witness(base: &BaseSpec, alphabet: &Alphabet, budget: usize) -> Result<Vec<(CyclotomicInt, MembershipResult)>> {
    let spec = IfsSpec::inverse(base, alphabet)?;
    let order = base.order;
    let small = base.conjugate(base.sigma());
    let g = small.embed().norm();
    let m = (1e-3f64.ln() / g.ln()).ceil() as u32;
    let scale = small.pow(m);
    // eight directions, evenly spread over the 2n units ±ω^j
    let n = order.get() as i64;
    let mut units: Vec<CyclotomicInt> = (0..n).flat_map(|j| [CyclotomicInt::root(order, j), -CyclotomicInt::root(order, j)]).collect();
    units.sort_by(|a, b| a.embed().arg().total_cmp(&b.embed().arg()));
    units.dedup();
    let pick: Vec<CyclotomicInt> = (0..8).map(|i| units[i * units.len() / 8]).collect();
    pick.into_iter()
        .map(|u| {
            let z = scale * u;
            membership(&spec, &z, budget).map(|r| (z, r))
        })
        .collect()
}
