//! Local configurations `lc(x) = {y − x : y ∈ X, |y − x| ≤ D/(β−1)}`, where
//! `D` is the diameter of the alphabet, up to rotation and reflection; their
//! descendant graph and the prototiles.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::BaseSpec;
use crate::cyclotomic::{Alphabet, CyclotomicInt, Order};
use crate::error::{Error, Result};
use crate::geometry::{interior_angles, polygon_perimeter};
use crate::spectrum::generate_ball;
use crate::voronoi::{clip_cell, VoronoiCell};

/// Default number of configurations before enumeration stops.
pub const DEFAULT_CONFIG_BUDGET: usize = 100_000;
/// Shape-signature tolerance.
pub const SIGNATURE_EPS: f64 = 1e-9;
/// Band around the threshold inside which the strict test is decided exactly.
const THRESHOLD_BAND: f64 = 1e-9;

/// A local configuration in canonical position (the dihedral image with the
/// lexicographically smallest sorted coefficient list).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LocalConfig {
    pub points: Vec<CyclotomicInt>,
    /// `(parent index, digit index)` of the edge that discovered it.
    pub parent: Option<(usize, usize)>,
}

impl LocalConfig {
    pub fn key(&self) -> &[CyclotomicInt] {
        &self.points
    }
}

/// Radius test `|z| ≤ D/(β−1)` with `D = max |a_i − a_j|`, exact near the threshold.
#[derive(Clone, Debug)]
pub struct RadiusTest {
    radius: f64,
    beta_minus_one: CyclotomicInt,
    /// `D²` for the exact comparison `|z|²(β−1)² ≤ D²`.
    d_squared: CyclotomicInt,
    strict: bool,
}

impl RadiusTest {
    pub fn new(base: &BaseSpec, alphabet: &Alphabet) -> Result<Self> {
        if (alphabet.max_modulus() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("local configurations need unit-modulus digits".into()));
        }
        if base.order != alphabet.order() {
            return Err(Error::OrderMismatch { left: base.order.get(), right: alphabet.order().get() });
        }
        let digits = alphabet.digits();
        let d_squared = digits
            .iter()
            .flat_map(|&a| digits.iter().map(move |&b| (a - b).norm_squared()))
            .max_by(|x, y| x.embed().re.total_cmp(&y.embed().re))
            .expect("nonempty alphabet");
        Ok(RadiusTest {
            radius: d_squared.embed().re.sqrt() / (base.value() - 1.0),
            beta_minus_one: base.beta - CyclotomicInt::one(base.order),
            d_squared,
            strict: false,
        })
    }

    /// `|z| < D/(β−1)` instead.
    pub fn strict(mut self) -> Self {
        self.strict = true;
        self
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn inside(&self, z: &CyclotomicInt) -> bool {
        let d = z.embed().norm();
        if d < self.radius - THRESHOLD_BAND {
            return true;
        }
        if d > self.radius + THRESHOLD_BAND {
            return false;
        }
        let bm = self.beta_minus_one;
        match (self.d_squared - z.norm_squared() * bm * bm).real_sign() {
            Ordering::Greater => true,
            Ordering::Equal => !self.strict,
            Ordering::Less => false,
        }
    }
}

/// The dihedral image minimising the sorted coefficient list.
pub fn canonicalize(points: &[CyclotomicInt], order: Order) -> Vec<CyclotomicInt> {
    let n = order.get();
    let mut best: Option<Vec<CyclotomicInt>> = None;
    let mut rot: Vec<CyclotomicInt> = points.to_vec();
    let mut refl: Vec<CyclotomicInt> = points.iter().map(CyclotomicInt::conj).collect();
    for _ in 0..n {
        for img in [&rot, &refl] {
            let mut s = img.clone();
            s.sort_unstable();
            if best.as_ref().map_or(true, |b| s < *b) {
                best = Some(s);
            }
        }
        rot.iter_mut().for_each(|z| *z = z.rotate());
        refl.iter_mut().for_each(|z| *z = z.rotate());
    }
    best.unwrap_or_default()
}

/// `lc(0)` from a ball patch.
pub fn origin_config(base: &BaseSpec, alphabet: &Alphabet, test: &RadiusTest) -> Result<Vec<CyclotomicInt>> {
    let patch = generate_ball(base, alphabet, test.radius() + 1e-6)?;
    let mut pts: Vec<CyclotomicInt> = patch.points.into_iter().filter(|z| test.inside(z)).collect();
    pts.sort_unstable();
    Ok(pts)
}

/// `lc(βx + a_i)` from `lc(x)`: `{βs + a_j − a_i : s ∈ S, |·| < r}`.
pub fn child(config: &[CyclotomicInt], beta: CyclotomicInt, digits: &[CyclotomicInt], i: usize, test: &RadiusTest) -> Vec<CyclotomicInt> {
    let ai = digits[i];
    let mut out: Vec<CyclotomicInt> = config
        .iter()
        .flat_map(|&s| {
            let bs = beta * s;
            digits.iter().map(move |&aj| bs + aj - ai)
        })
        .filter(|z| test.inside(z))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    pub case: String,
    pub configs: Vec<LocalConfig>,
    /// `(parent, digit index, child)` over config indices.
    pub edges: Vec<(usize, usize, usize)>,
    pub complete: bool,
    pub budget: usize,
}

/// Parents expanded per parallel batch.
const BATCH: usize = 512;

fn fingerprint(key: &[CyclotomicInt]) -> u64 {
    let mut h = DefaultHasher::new();
    key.hash(&mut h);
    h.finish()
}

/// Breadth-first enumeration of local configurations from `lc(0)`.
pub fn enumerate(base: &BaseSpec, alphabet: &Alphabet, budget: usize) -> Result<Enumeration> {
    let test = RadiusTest::new(base, alphabet)?;
    let order = base.order;
    let digits = alphabet.digits();
    let root = canonicalize(&origin_config(base, alphabet, &test)?, order);
    let mut index: HashMap<u64, Vec<usize>> = HashMap::new();
    index.entry(fingerprint(&root)).or_default().push(0);
    let mut configs = vec![LocalConfig { points: root, parent: None }];
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut complete = true;

    'outer: while !frontier.is_empty() {
        let mut next = Vec::new();
        for batch in frontier.chunks(BATCH) {
            let kids: Vec<Vec<Vec<CyclotomicInt>>> = batch
                .par_iter()
                .map(|&id| {
                    (0..digits.len())
                        .map(|i| canonicalize(&child(&configs[id].points, base.beta, digits, i, &test), order))
                        .collect()
                })
                .collect();
            for (&parent, children) in batch.iter().zip(kids) {
                for (digit, key) in children.into_iter().enumerate() {
                    let fp = fingerprint(&key);
                    let found = index.get(&fp).and_then(|ids| ids.iter().copied().find(|&i| configs[i].points == key));
                    let id = match found {
                        Some(id) => id,
                        None => {
                            if configs.len() >= budget {
                                complete = false;
                                break 'outer;
                            }
                            let id = configs.len();
                            configs.push(LocalConfig { points: key, parent: Some((parent, digit)) });
                            index.entry(fp).or_default().push(id);
                            next.push(id);
                            id
                        }
                    };
                    edges.push((parent, digit, id));
                }
            }
        }
        frontier = next;
    }
    Ok(Enumeration { case: base.case_id(), configs, edges, complete, budget })
}

/// A prototile: cell shape up to rotation and reflection.
#[derive(Clone, Debug, Serialize)]
pub struct TileClass {
    pub class_id: usize,
    pub edge_count: usize,
    /// `(edge length, interior angle at the edge's start)` around the cell.
    pub signature: Vec<(f64, f64)>,
    pub representative_cell: VoronoiCell,
    pub member_configs: Vec<usize>,
}

/// Cell of `0` against the points of a configuration.
pub fn config_cell(config: &[CyclotomicInt], half: f64) -> VoronoiCell {
    let pts: Vec<(usize, Complex64)> = config.iter().enumerate().filter(|(_, z)| !z.is_zero()).map(|(i, z)| (i, z.embed())).collect();
    let origin = Complex64::new(0.0, 0.0);
    let (vertices, nb) = clip_cell(origin, &pts, half);
    let radius = crate::geometry::circumradius(&vertices, origin);
    let order = config.first().map(|z| z.order()).expect("nonempty configuration");
    VoronoiCell {
        center: CyclotomicInt::zero(order),
        vertices,
        neighbors: nb.into_iter().map(|i| config[i]).collect(),
        radius,
        trusted: true,
    }
}

/// `(edge length, interior angle)` pairs of a convex polygon.
pub fn shape_signature(vertices: &[Complex64]) -> Vec<(f64, f64)> {
    let n = vertices.len();
    let angles = interior_angles(vertices);
    (0..n).map(|i| ((vertices[(i + 1) % n] - vertices[i]).norm(), angles[i])).collect()
}

fn close(a: &(f64, f64), b: &(f64, f64)) -> bool {
    (a.0 - b.0).abs() <= SIGNATURE_EPS && (a.1 - b.1).abs() <= SIGNATURE_EPS
}

/// Whether two signatures agree up to cyclic rotation and reversal.
pub fn same_shape(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    // reversed traversal: edge i runs backwards, its start angle is the old end angle
    let rev: Vec<(f64, f64)> = (0..n).map(|i| (a[n - 1 - i].0, a[(2 * n - i) % n].1)).collect();
    for shift in 0..n {
        if (0..n).all(|i| close(&a[(i + shift) % n], &b[i])) || (0..n).all(|i| close(&rev[(i + shift) % n], &b[i])) {
            return true;
        }
    }
    false
}

/// Groups the origin cells of the enumerated configurations by shape.
pub fn tile_inventory(base: &BaseSpec, enumeration: &Enumeration) -> Vec<TileClass> {
    let half = 4.0 / (base.value() - 1.0);
    let cells: Vec<VoronoiCell> = enumeration.configs.par_iter().map(|c| config_cell(&c.points, half)).collect();
    let mut classes: Vec<TileClass> = Vec::new();
    let mut keys: Vec<(f64, f64)> = Vec::new();
    for (id, cell) in cells.into_iter().enumerate() {
        let sig = shape_signature(&cell.vertices);
        let key = (cell.area(), polygon_perimeter(&cell.vertices));
        let hit = classes.iter().zip(&keys).position(|(c, k)| {
            c.edge_count == sig.len()
                && (k.0 - key.0).abs() <= 1e-7
                && (k.1 - key.1).abs() <= 1e-7
                && same_shape(&c.signature, &sig)
        });
        match hit {
            Some(i) => classes[i].member_configs.push(id),
            None => {
                classes.push(TileClass {
                    class_id: classes.len(),
                    edge_count: sig.len(),
                    signature: sig,
                    representative_cell: cell,
                    member_configs: vec![id],
                });
                keys.push(key);
            }
        }
    }
    classes
}

/// Tile class of each cell, `None` when its shape is not in `classes`.
pub fn classify_cells(cells: &[VoronoiCell], classes: &[TileClass]) -> Vec<Option<usize>> {
    cells
        .iter()
        .map(|c| {
            let sig = shape_signature(&c.vertices);
            classes.iter().find(|t| same_shape(&t.signature, &sig)).map(|t| t.class_id)
        })
        .collect()
}

/// The descendant graph in dot format.
pub fn config_graph(enumeration: &Enumeration) -> Result<String> {
    if !enumeration.complete {
        return Err(Error::Incomplete(format!(
            "{}: enumeration stopped at the budget of {} configurations",
            enumeration.case, enumeration.budget
        )));
    }
    let mut out = String::new();
    writeln!(out, "digraph local_configurations {{").unwrap();
    writeln!(out, "  label=\"{}\";", enumeration.case).unwrap();
    for (i, c) in enumeration.configs.iter().enumerate() {
        writeln!(out, "  c{i} [label=\"{i} ({})\"];", c.points.len()).unwrap();
    }
    for &(p, d, c) in &enumeration.edges {
        writeln!(out, "  c{p} -> c{c} [label=\"{d}\"];").unwrap();
    }
    writeln!(out, "}}").unwrap();
    Ok(out)
}
