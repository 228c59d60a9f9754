//! Planar helpers: convex clipping, polygon measures, a uniform grid index
//! and a `%g`-style number formatter.

use std::collections::HashMap;

use num_complex::Complex64;

const DEDUP_EPS: f64 = 1e-14;

/// Cross product `a × b` of two plane vectors.
#[inline]
pub fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

#[inline]
pub fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

/// A convex polygon with counter-clockwise vertices; edge `i` runs from
/// `vertices[i]` to `vertices[i+1]` and carries `labels[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPolygon {
    pub vertices: Vec<Complex64>,
    pub labels: Vec<Option<usize>>,
}

impl LabeledPolygon {
    /// Axis-aligned square of half-width `h` centred at `c`, with unlabeled edges.
    pub fn square(c: Complex64, h: f64) -> Self {
        let vertices = vec![
            c + Complex64::new(-h, -h),
            c + Complex64::new(h, -h),
            c + Complex64::new(h, h),
            c + Complex64::new(-h, h),
        ];
        LabeledPolygon { vertices, labels: vec![None; 4] }
    }

    /// Keeps the half-plane `{z : dot(z, normal) <= offset}`; the new edge
    /// introduced by the cut gets `label`.
    pub fn clip(&self, normal: Complex64, offset: f64, label: usize) -> LabeledPolygon {
        let n = self.vertices.len();
        let side = |z: Complex64| dot(z, normal) - offset;
        let mut out = LabeledPolygon { vertices: Vec::with_capacity(n + 1), labels: Vec::with_capacity(n + 1) };
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let (sa, sb) = (side(a), side(b));
            let a_in = sa <= 0.0;
            if a_in {
                out.push(a, self.labels[i]);
            }
            if a_in != (sb <= 0.0) {
                let t = sa / (sa - sb);
                out.push(a + (b - a) * t, if a_in { Some(label) } else { self.labels[i] });
            }
        }
        while out.vertices.len() > 1 && (out.vertices[0] - *out.vertices.last().unwrap()).norm() <= DEDUP_EPS {
            out.vertices.pop();
            out.labels.pop();
        }
        out
    }

    /// Appends a vertex; a repeat of the previous vertex only replaces the
    /// label of the outgoing edge.
    fn push(&mut self, z: Complex64, label: Option<usize>) {
        if let Some(&last) = self.vertices.last() {
            if (last - z).norm() <= DEDUP_EPS {
                *self.labels.last_mut().unwrap() = label;
                return;
            }
        }
        self.vertices.push(z);
        self.labels.push(label);
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 3
    }
}

/// Signed area (positive for counter-clockwise order).
pub fn polygon_area(v: &[Complex64]) -> f64 {
    let n = v.len();
    (0..n).map(|i| cross(v[i], v[(i + 1) % n])).sum::<f64>() * 0.5
}

pub fn polygon_perimeter(v: &[Complex64]) -> f64 {
    let n = v.len();
    (0..n).map(|i| (v[(i + 1) % n] - v[i]).norm()).sum()
}

/// Largest distance from `c` to a vertex.
pub fn circumradius(v: &[Complex64], c: Complex64) -> f64 {
    v.iter().map(|&z| (z - c).norm()).fold(0.0, f64::max)
}

/// Whether `p` lies in the closed convex polygon (CCW) up to `eps`.
pub fn in_convex_polygon(v: &[Complex64], p: Complex64, eps: f64) -> bool {
    let n = v.len();
    (0..n).all(|i| {
        let a = v[i];
        let b = v[(i + 1) % n];
        cross(b - a, p - a) >= -eps * (b - a).norm()
    })
}

/// Interior angle at each vertex, in radians.
pub fn interior_angles(v: &[Complex64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            let prev = v[(i + n - 1) % n];
            let next = v[(i + 1) % n];
            let a = prev - v[i];
            let b = next - v[i];
            cross(b, a).atan2(dot(a, b)).abs()
        })
        .collect()
}

/// Uniform bucket grid for fixed-radius neighbour queries.
#[derive(Clone, Debug)]
pub struct GridIndex {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl GridIndex {
    pub fn new(points: &[Complex64], cell: f64) -> Self {
        assert!(cell > 0.0);
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, &p) in points.iter().enumerate() {
            buckets.entry(Self::key_for(cell, p)).or_default().push(i);
        }
        GridIndex { cell, buckets }
    }

    fn key_for(cell: f64, p: Complex64) -> (i64, i64) {
        ((p.re / cell).floor() as i64, (p.im / cell).floor() as i64)
    }

    /// Indices of points within distance `r` of `p` (candidates are filtered
    /// against `points`).
    pub fn within(&self, points: &[Complex64], p: Complex64, r: f64) -> Vec<usize> {
        let reach = (r / self.cell).ceil() as i64;
        let (kx, ky) = Self::key_for(self.cell, p);
        let mut out = Vec::new();
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                if let Some(b) = self.buckets.get(&(kx + dx, ky + dy)) {
                    out.extend(b.iter().copied().filter(|&i| (points[i] - p).norm() <= r));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Occupied bucket keys, sorted.
    pub fn keys(&self) -> Vec<(i64, i64)> {
        let mut k: Vec<_> = self.buckets.keys().copied().collect();
        k.sort_unstable();
        k
    }

    pub fn bucket(&self, key: (i64, i64)) -> &[usize] {
        self.buckets.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Formats like C's `%.{sig}g`.
pub fn fmt_g(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sig = sig.max(1);
    let exp = format!("{:.*e}", sig - 1, x);
    let (mant, e) = exp.split_once('e').unwrap();
    let e: i32 = e.parse().unwrap();
    if e < -4 || e >= sig as i32 {
        let mant = trim_zeros(mant);
        format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
    } else {
        let decimals = (sig as i32 - 1 - e).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
