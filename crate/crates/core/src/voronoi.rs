//! Voronoi cells of spectrum patches, region radii and the covering radius.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::BaseSpec;
use crate::cyclotomic::{Alphabet, CyclotomicInt};
use crate::error::{Error, Result};
use crate::geometry::{circumradius, GridIndex, LabeledPolygon};
use crate::spectrum::{generate_ball, generate_degree, Patch, BALL_SLACK, DEFAULT_DEGREE_CAP};

/// Vertices closer than this are merged; shorter edges carry no neighbor.
pub const MERGE_EPS: f64 = 1e-9;
/// Tolerance at which the upper and lower covering-radius bounds meet.
pub const MEET_EPS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VoronoiCell {
    pub center: CyclotomicInt,
    /// Counter-clockwise vertices.
    pub vertices: Vec<Complex64>,
    /// Edge-sharing points, in edge order.
    pub neighbors: Vec<CyclotomicInt>,
    pub radius: f64,
    pub trusted: bool,
}

impl VoronoiCell {
    pub fn area(&self) -> f64 {
        crate::geometry::polygon_area(&self.vertices)
    }
}

/// Polygon and neighbor indices of the cell of `center` against
/// `candidates`, clipped to a square of half-width `half`.
pub fn clip_cell(center: Complex64, candidates: &[(usize, Complex64)], half: f64) -> (Vec<Complex64>, Vec<usize>) {
    let mut sorted: Vec<(f64, usize, Complex64)> =
        candidates.iter().map(|&(i, p)| ((p - center).norm_sqr(), i, p - center)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut poly = LabeledPolygon::square(Complex64::new(0.0, 0.0), half);
    for (d2, i, d) in sorted {
        if d2 == 0.0 {
            continue;
        }
        // skip bisectors beyond the current farthest vertex
        let r = circumradius(&poly.vertices, Complex64::new(0.0, 0.0));
        if d2.sqrt() > 2.0 * r + MERGE_EPS {
            break;
        }
        poly = poly.clip(d, 0.5 * d2, i);
    }
    let (verts, labels) = merge_close(&poly);
    let n = verts.len();
    let mut neighbors = Vec::new();
    for k in 0..n {
        if (verts[(k + 1) % n] - verts[k]).norm() > MERGE_EPS {
            if let Some(i) = labels[k] {
                neighbors.push(i);
            }
        }
    }
    (verts.into_iter().map(|v| v + center).collect(), neighbors)
}

fn merge_close(poly: &LabeledPolygon) -> (Vec<Complex64>, Vec<Option<usize>>) {
    let mut verts: Vec<Complex64> = Vec::with_capacity(poly.vertices.len());
    let mut labels: Vec<Option<usize>> = Vec::with_capacity(poly.vertices.len());
    for (&v, &l) in poly.vertices.iter().zip(&poly.labels) {
        if let Some(&last) = verts.last() {
            if (v - last).norm() <= MERGE_EPS {
                *labels.last_mut().unwrap() = l;
                continue;
            }
        }
        verts.push(v);
        labels.push(l);
    }
    while verts.len() > 1 && (verts[0] - *verts.last().unwrap()).norm() <= MERGE_EPS {
        verts.pop();
        labels.pop();
    }
    (verts, labels)
}

/// Exact Voronoi cell of `points[idx]` within the finite set `points`:
/// enlarges the search radius until the cell radius is at most half of it.
/// Cells still growing past `max_reach` are unbounded and get an infinite radius.
pub fn finite_cell(
    points: &[Complex64],
    grid: &GridIndex,
    idx: usize,
    start: f64,
    max_reach: f64,
) -> (Vec<Complex64>, Vec<usize>, f64) {
    let c = points[idx];
    let mut reach = start;
    loop {
        if reach > max_reach {
            let cands: Vec<(usize, Complex64)> =
                points.iter().enumerate().filter(|&(j, _)| j != idx).map(|(j, &p)| (j, p)).collect();
            let (verts, nb) = clip_cell(c, &cands, reach);
            return (verts, nb, f64::INFINITY);
        }
        let cands: Vec<(usize, Complex64)> =
            grid.within(points, c, reach).into_iter().filter(|&j| j != idx).map(|j| (j, points[j])).collect();
        let (verts, nb) = clip_cell(c, &cands, reach);
        let r = circumradius(&verts, c);
        if r <= 0.5 * reach {
            return (verts, nb, r);
        }
        reach *= 2.0;
    }
}

/// Trusted cells of every patch point with `|x| ≤ safe_radius`.
pub fn cells(patch: &Patch, safe_radius: f64) -> Result<Vec<VoronoiCell>> {
    let bound = patch.alphabet.max_modulus() / (patch.base.value() - 1.0);
    let radius = patch
        .radius()
        .ok_or_else(|| Error::IncompletePatch("cells need a complete ball patch".into()))?;
    if safe_radius > radius - 2.0 * bound + BALL_SLACK {
        return Err(Error::IncompletePatch(format!(
            "safe radius {safe_radius} exceeds patch radius {radius} minus 2/(β−1)"
        )));
    }
    let pts = patch.embedded();
    let reach = 2.0 * bound + BALL_SLACK;
    let grid = GridIndex::new(&pts, reach.max(1e-3));
    let centers: Vec<usize> = (0..pts.len()).filter(|&i| pts[i].norm() <= safe_radius + BALL_SLACK).collect();
    Ok(centers
        .par_iter()
        .map(|&i| {
            let cands: Vec<(usize, Complex64)> =
                grid.within(&pts, pts[i], reach).into_iter().filter(|&j| j != i).map(|j| (j, pts[j])).collect();
            let (vertices, nb) = clip_cell(pts[i], &cands, 4.0 * bound);
            let radius = circumradius(&vertices, pts[i]);
            VoronoiCell {
                center: patch.points[i],
                vertices,
                neighbors: nb.into_iter().map(|j| patch.points[j]).collect(),
                radius,
                trusted: true,
            }
        })
        .collect())
}

/// `R(θ, γ) = (γ²cosθ + γ√(1 − γ²sin²θ)) / (γ² − 1)`.
pub fn region_radius(theta: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 1.0) {
        return Err(Error::InvalidArgument(format!("γ must exceed 1, got {gamma}")));
    }
    let disc = 1.0 - gamma * gamma * theta.sin().powi(2);
    if disc < 0.0 {
        return Err(Error::InvalidArgument(format!("γ·sin θ > 1 for θ = {theta}, γ = {gamma}")));
    }
    Ok((gamma * gamma * theta.cos() + gamma * disc.sqrt()) / (gamma * gamma - 1.0))
}

/// The angle `θ = π/m` where `β = 1 + 2cos(2π/m)`.
pub fn region_angle(base: &BaseSpec) -> Result<f64> {
    let m = base
        .equality_order()
        .ok_or_else(|| Error::InvalidArgument(format!("{} is not of the form 1 + 2cos(2π/m)", base.case_id())))?;
    Ok(PI / m as f64)
}

/// One step of the upper-bound sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeltaStep {
    pub n: u32,
    /// Largest radius among the bounded cells centered in `β^n·B_R(0)`.
    pub delta: f64,
    /// Centers in the region whose cell in `X_n` is unbounded.
    pub unbounded: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoveringRadiusResult {
    /// Largest distance from a point of the plane to the spectrum.
    pub r_c: f64,
    /// First `n` with `Δ_n` equal to the lower bound.
    pub achieved_at_n: Option<u32>,
    /// First `n` where additionally every cell in the region is bounded.
    pub all_bounded_at_n: Option<u32>,
    pub delta_sequence: Vec<DeltaStep>,
    pub lower_bound_radius_used: f64,
    pub lower_bound: f64,
    pub region_radius: f64,
    pub theta: f64,
    pub conclusive: bool,
}

impl CoveringRadiusResult {
    /// `2·r_c`, the diameter of the largest empty disc.
    pub fn covering_diameter(&self) -> f64 {
        2.0 * self.r_c
    }
}

/// Radius of the trusted cell of the origin.
pub fn origin_tile_radius(base: &BaseSpec, alphabet: &Alphabet) -> Result<f64> {
    let bound = alphabet.max_modulus() / (base.value() - 1.0);
    let patch = generate_ball(base, alphabet, 2.0 * bound + 1.0)?;
    let cs = cells(&patch, 0.0)?;
    cs.into_iter()
        .find(|c| c.center.is_zero())
        .map(|c| c.radius)
        .ok_or_else(|| Error::IncompletePatch("origin missing from patch".into()))
}

/// Lower bound from a ball patch, then upper bounds `Δ_n` from the cells of
/// Covering radius: the largest trusted cell radius around the origin as lower
/// bound, met from above by `Δ_n` over the cells of `X_n` centered in `β^n·B_R(0)`.
pub fn covering_radius(base: &BaseSpec, alphabet: &Alphabet, n_max: u32) -> Result<CoveringRadiusResult> {
    let bound = alphabet.max_modulus() / (base.value() - 1.0);
    let safe = 4.0 * bound;
    let patch = generate_ball(base, alphabet, safe + 2.0 * bound + 1.0)?;
    let lower = cells(&patch, safe)?.iter().map(|c| c.radius).fold(0.0, f64::max);

    let theta = region_angle(base)?;
    let big_r = region_radius(theta, base.value())?;
    let mut delta_sequence = Vec::new();
    let mut achieved = None;
    let mut all_bounded = None;
    for n in 1..=n_max {
        let xn = generate_degree(base, alphabet, n, DEFAULT_DEGREE_CAP)?;
        let step = delta_n(&xn, n, base.value().powi(n as i32) * big_r, bound);
        delta_sequence.push(step);
        if step.delta <= lower + MEET_EPS {
            achieved.get_or_insert(n);
            if step.unbounded == 0 {
                all_bounded = Some(n);
                break;
            }
        }
    }
    let r_c = match achieved {
        Some(_) => lower,
        None => delta_sequence.last().map_or(lower, |s| s.delta),
    };
    Ok(CoveringRadiusResult {
        r_c,
        achieved_at_n: achieved,
        all_bounded_at_n: all_bounded,
        delta_sequence,
        lower_bound_radius_used: safe,
        lower_bound: lower,
        region_radius: big_r,
        theta,
        conclusive: achieved.is_some(),
    })
}

/// `Δ_n` for the finite set `X_n` and the closed ball of radius `a_radius`.
pub fn delta_n(xn: &Patch, n: u32, a_radius: f64, bound: f64) -> DeltaStep {
    let pts = xn.embedded();
    let grid = GridIndex::new(&pts, bound);
    let max_reach = 4.0 * (2.0 * pts.iter().map(|p| p.norm()).fold(0.0, f64::max) + 2.0 * bound);
    let radii: Vec<f64> = (0..pts.len())
        .into_par_iter()
        .filter(|&i| pts[i].norm() <= a_radius + BALL_SLACK)
        .map(|i| finite_cell(&pts, &grid, i, 2.0 * bound, max_reach).2)
        .collect();
    DeltaStep {
        n,
        delta: radii.iter().copied().filter(|r| r.is_finite()).fold(0.0, f64::max),
        unbounded: radii.iter().filter(|r| !r.is_finite()).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_bisector() {
        let c = Complex64::new(0.0, 0.0);
        let (v, nb) = clip_cell(c, &[(1, Complex64::new(1.0, 0.0))], 2.0);
        assert_eq!(nb, vec![1]);
        let on_line: Vec<_> = v.iter().filter(|z| (z.re - 0.5).abs() < 1e-12).collect();
        assert_eq!(on_line.len(), 2);
        assert!(v.iter().all(|z| z.re <= 0.5 + 1e-12));
    }

    #[test]
    fn region_radius_values() {
        let tau = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((region_radius(PI / 5.0, tau).unwrap() - 1.6180339895).abs() < 1e-8);
        let delta = 1.0 + 2f64.sqrt();
        assert!((region_radius(PI / 8.0, delta).unwrap() - 1.3065629649).abs() < 1e-8);
        assert!((region_radius(0.0, 3.0).unwrap() - 1.5).abs() < 1e-12);
        assert!(region_radius(PI / 5.0, tau * tau).is_err());
    }

    #[test]
    fn tau2_origin_cell_is_decagon() {
        let b = BaseSpec::lookup("tau2", 10).unwrap();
        let a = Alphabet::polygonal(b.order);
        let patch = generate_ball(&b, &a, 3.0 / (b.value() - 1.0) + 0.1).unwrap();
        let cs = cells(&patch, 0.5).unwrap();
        let c0 = cs.iter().find(|c| c.center.is_zero()).unwrap();
        assert_eq!(c0.vertices.len(), 10);
        assert_eq!(c0.neighbors.len(), 10);
        assert!(c0.neighbors.iter().all(|z| (z.embed().norm() - 1.0).abs() < 1e-12));
        let expected = 0.5 / (PI / 10.0).cos();
        assert!((c0.radius - expected).abs() < 1e-12);
    }

    #[test]
    fn rejects_unsafe_radius() {
        let b = BaseSpec::lookup("delta", 8).unwrap();
        let a = Alphabet::polygonal(b.order);
        let patch = generate_ball(&b, &a, 2.0).unwrap();
        assert!(cells(&patch, 1.0).is_err());
    }
}
