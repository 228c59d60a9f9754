//! The quadratic and cubic Pisot-cyclotomic numbers and their exact
//! expressions in `Z[ω_n]`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::cyclotomic::{gcd, CyclotomicInt, Order};
use crate::error::{Error, Result};

/// Where the `Z[ω_n]` expression of a base comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpressionSource {
    /// One of the closed forms `1 + ω^j + ω^{−j}` / `ω + ω^{−1}`.
    ClosedForm,
    /// Recovered by isolating the real roots of the minimal polynomial and
    /// solving for integer coordinates in `Z[ω + ω^{−1}]`.
    Derived,
}

/// A Pisot-cyclotomic base together with the data every other module needs.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseSpec {
    pub order: Order,
    /// ASCII label: `tau`, `tau2`, `lambda`, `delta`, `kappa`, `mu`, or `None`
    /// for the anonymous rows of the catalog.
    pub name: Option<String>,
    pub beta: CyclotomicInt,
    /// Minimal polynomial, leading coefficient first.
    pub min_poly: Vec<i64>,
    /// Exponents `k ≤ n/2`, coprime to `n`, with `|σ_k(β)| < 1`; ascending.
    pub conj_auts: Vec<u32>,
    pub is_unit: bool,
    /// Approximate value as printed in the catalog table.
    pub approx: f64,
    pub source: ExpressionSource,
}

struct Row {
    name: Option<&'static str>,
    order: u32,
    alt_order: Option<u32>,
    approx: f64,
    min_poly: &'static [i64],
}

const ROWS: [Row; 14] = [
    Row { name: Some("tau"), order: 5, alt_order: Some(10), approx: 1.618033989, min_poly: &[1, -1, -1] },
    Row { name: Some("tau2"), order: 10, alt_order: Some(5), approx: 2.618033989, min_poly: &[1, -3, 1] },
    Row { name: Some("lambda"), order: 7, alt_order: Some(14), approx: 2.246979604, min_poly: &[1, -2, -1, 1] },
    Row { name: None, order: 7, alt_order: Some(14), approx: 4.048917340, min_poly: &[1, -3, -4, -1] },
    Row { name: None, order: 7, alt_order: Some(14), approx: 5.048917340, min_poly: &[1, -6, 5, -1] },
    Row { name: None, order: 7, alt_order: Some(14), approx: 20.44264896, min_poly: &[1, -20, -9, -1] },
    Row { name: None, order: 7, alt_order: Some(14), approx: 21.44264896, min_poly: &[1, -23, 34, -13] },
    Row { name: Some("delta"), order: 8, alt_order: None, approx: 2.414213562, min_poly: &[1, -2, -1] },
    Row { name: None, order: 8, alt_order: None, approx: 3.414213562, min_poly: &[1, -4, 2] },
    Row { name: Some("kappa"), order: 9, alt_order: Some(18), approx: 2.879385242, min_poly: &[1, -3, 0, 1] },
    Row { name: None, order: 9, alt_order: Some(18), approx: 7.290859369, min_poly: &[1, -6, -9, -3] },
    Row { name: None, order: 9, alt_order: Some(18), approx: 8.290859369, min_poly: &[1, -9, 6, -1] },
    Row { name: Some("mu"), order: 12, alt_order: None, approx: 2.732050808, min_poly: &[1, -2, -2] },
    Row { name: None, order: 12, alt_order: None, approx: 3.732050808, min_poly: &[1, -4, 1] },
];

/// Closed forms `β = c + ω^j + ω^{−j}` as `(name, order, c, j)`.
const CLOSED_FORMS: [(&str, u32, i64, i64); 8] = [
    ("tau", 5, 1, 1),
    ("lambda", 7, 1, 1),
    ("delta", 8, 1, 1),
    ("mu", 12, 1, 1),
    ("kappa", 18, 1, 1),
    ("tau", 10, 0, 1),
    ("tau2", 10, 1, 1),
    ("lambda", 14, 1, 2),
];

/// The eight cases whose spectrum is a Delone set, in table order.
pub const DELONE_CASES: [(&str, u32); 8] = [
    ("tau", 5),
    ("tau", 10),
    ("tau2", 10),
    ("lambda", 7),
    ("lambda", 14),
    ("delta", 8),
    ("kappa", 18),
    ("mu", 12),
];

/// The nine cases examined for relative density (Delone cases plus `(κ, 9)`).
pub const DENSITY_CASES: [(&str, u32); 9] = [
    ("tau", 5),
    ("tau", 10),
    ("tau2", 10),
    ("lambda", 7),
    ("lambda", 14),
    ("delta", 8),
    ("kappa", 9),
    ("kappa", 18),
    ("mu", 12),
];

/// All fourteen catalog rows, each in its primary order.
pub fn base_catalog() -> Vec<BaseSpec> {
    ROWS.iter()
        .map(|row| build(row, Order::new(row.order).expect("catalog order")).expect("catalog entry"))
        .collect()
}

/// The eight Delone cases.
pub fn delone_cases() -> Vec<BaseSpec> {
    DELONE_CASES
        .iter()
        .map(|&(name, n)| BaseSpec::lookup(name, n).expect("Delone case"))
        .collect()
}

impl BaseSpec {
    /// Finds a base by name (`tau`, `tau2`, `lambda`, `delta`, `kappa`, `mu`;
    /// a few Unicode/alias spellings are accepted) or by the leading digits
    /// of its approximate value, in the given order.
    pub fn lookup(name: &str, order: u32) -> Result<BaseSpec> {
        let key = canonical_name(name);
        let row = ROWS
            .iter()
            .find(|r| {
                let order_ok = r.order == order || r.alt_order == Some(order);
                let name_ok = match (r.name, &key) {
                    (Some(n), Some(k)) => n == *k,
                    _ => name.parse::<f64>().map(|v| (v - r.approx).abs() < 1e-6).unwrap_or(false),
                };
                order_ok && name_ok
            })
            .ok_or_else(|| Error::UnknownBase { name: name.to_string(), order })?;
        build(row, Order::new(order)?)
    }

    /// Human-readable label: the Greek symbol or the approximate value.
    pub fn label(&self) -> String {
        match self.name.as_deref() {
            Some("tau") => "τ".into(),
            Some("tau2") => "τ²".into(),
            Some("lambda") => "λ".into(),
            Some("delta") => "δ".into(),
            Some("kappa") => "κ".into(),
            Some("mu") => "μ".into(),
            Some(other) => other.into(),
            None => format!("{:.9}", self.approx),
        }
    }

    /// ASCII identifier of the case, e.g. `tau2-10`.
    pub fn case_id(&self) -> String {
        match &self.name {
            Some(n) => format!("{n}-{}", self.order),
            None => format!("{:.6}-{}", self.approx, self.order),
        }
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn is_quadratic(&self) -> bool {
        self.degree() == 2
    }

    /// `β` as a real number.
    pub fn value(&self) -> f64 {
        self.beta.embed().re
    }

    /// `1/(β − 1)`, the escape radius and the covering-radius bound for unit digits.
    pub fn escape_radius(&self) -> f64 {
        1.0 / (self.value() - 1.0)
    }

    /// Canonical conjugating automorphism (the smallest admissible `k`).
    pub fn sigma(&self) -> u32 {
        self.conj_auts[0]
    }

    /// `σ_k(β)`.
    pub fn conjugate(&self, k: u32) -> CyclotomicInt {
        self.beta.galois_unchecked(k)
    }

    /// `β^{−1}` in `Z[ω]` when `β` is a unit.
    pub fn inverse(&self) -> Option<CyclotomicInt> {
        if !self.is_unit {
            return None;
        }
        // β · (β^{d−1} + c_1 β^{d−2} + … + c_{d−1}) = −c_d with c_d = ±1.
        let one = CyclotomicInt::one(self.order);
        let d = self.degree();
        let mut acc = CyclotomicInt::zero(self.order);
        for &c in &self.min_poly[..d] {
            acc = acc * self.beta + one.scale(c);
        }
        let c0 = self.min_poly[d];
        let inv = acc.scale(-c0);
        debug_assert_eq!(inv * self.beta, one);
        Some(inv)
    }

    /// The order `m` with `β = 1 + 2cos(2π/m)`, if any.
    pub fn equality_order(&self) -> Option<u32> {
        let b = self.value();
        (3..=60u32).find(|&m| (1.0 + 2.0 * (2.0 * PI / m as f64).cos() - b).abs() < 1e-12)
    }

    /// Evaluates the minimal polynomial at `β` exactly in `Z[ω]`.
    pub fn min_poly_at_beta(&self) -> CyclotomicInt {
        let one = CyclotomicInt::one(self.order);
        self.min_poly
            .iter()
            .fold(CyclotomicInt::zero(self.order), |acc, &c| acc * self.beta + one.scale(c))
    }
}

fn canonical_name(name: &str) -> Option<&'static str> {
    match name.trim().to_lowercase().as_str() {
        "tau" | "τ" => Some("tau"),
        "tau2" | "tau^2" | "τ²" | "τ2" => Some("tau2"),
        "lambda" | "λ" => Some("lambda"),
        "delta" | "δ" => Some("delta"),
        "kappa" | "κ" => Some("kappa"),
        "mu" | "μ" => Some("mu"),
        _ => None,
    }
}

fn build(row: &Row, order: Order) -> Result<BaseSpec> {
    let closed = row.name.and_then(|name| {
        CLOSED_FORMS
            .iter()
            .find(|&&(nm, n, _, _)| nm == name && n == order.get())
            .map(|&(_, _, c, j)| CyclotomicInt::from_exponents(order, &[(0, c), (j, 1), (-j, 1)]))
    });
    let (beta, source) = match closed {
        Some(b) => (b, ExpressionSource::ClosedForm),
        None => (derive_expression(order, row.min_poly, row.approx)?, ExpressionSource::Derived),
    };
    let n = order.get();
    let conj_auts = (2..=n / 2)
        .filter(|&k| gcd(k, n) == 1 && beta.galois_unchecked(k).embed().norm() < 1.0)
        .collect();
    let constant = *row.min_poly.last().unwrap();
    let spec = BaseSpec {
        order,
        name: row.name.map(str::to_string),
        beta,
        min_poly: row.min_poly.to_vec(),
        conj_auts,
        is_unit: constant.abs() == 1,
        approx: row.approx,
        source,
    };
    if !spec.min_poly_at_beta().is_zero() {
        return Err(Error::InvalidArgument(format!("expression for {} does not satisfy its minimal polynomial", spec.case_id())));
    }
    Ok(spec)
}

/// Real roots of an integer polynomial (leading coefficient first) by
/// sign-change scanning plus bisection.
pub fn real_roots(poly: &[i64]) -> Vec<f64> {
    let lead = poly[0] as f64;
    let bound = 1.0 + poly[1..].iter().map(|&c| (c as f64 / lead).abs()).fold(0.0, f64::max);
    let eval = |x: f64| poly.iter().fold(0.0, |acc, &c| acc * x + c as f64);
    let steps = 200_000;
    let h = 2.0 * bound / steps as f64;
    let mut roots = Vec::new();
    let mut x0 = -bound;
    let mut f0 = eval(x0);
    for i in 1..=steps {
        let x1 = -bound + i as f64 * h;
        let f1 = eval(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = eval(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// Expresses the root of `min_poly` closest to `approx` as an integer
/// polynomial in `y = ω + ω^{−1}`: the real embeddings of `y` are
/// `2cos(2πk/n)` and must be matched with the remaining real roots.
fn derive_expression(order: Order, min_poly: &[i64], approx: f64) -> Result<CyclotomicInt> {
    let n = order.get();
    let d = min_poly.len() - 1;
    let reps: Vec<u32> = (1..n).filter(|&k| 2 * k < n && gcd(k, n) == 1).collect();
    if reps.len() != d {
        return Err(Error::InvalidArgument(format!("degree {d} does not match order {n}")));
    }
    let roots = real_roots(min_poly);
    if roots.len() != d {
        return Err(Error::InvalidArgument("minimal polynomial is not totally real".into()));
    }
    let main = roots
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - approx).abs().partial_cmp(&(b.1 - approx).abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let others: Vec<f64> = roots.iter().enumerate().filter(|&(i, _)| i != main).map(|(_, &r)| r).collect();
    let ys: Vec<f64> = reps.iter().map(|&k| 2.0 * (2.0 * PI * k as f64 / n as f64).cos()).collect();
    let y = CyclotomicInt::from_exponents(order, &[(1, 1), (-1, 1)]);

    for perm in permutations(others.len()) {
        let mut rhs = vec![roots[main]];
        rhs.extend(perm.iter().map(|&i| others[i]));
        let matrix: Vec<Vec<f64>> = ys.iter().map(|&yk| (0..d).map(|i| yk.powi(i as i32)).collect()).collect();
        let Some(sol) = solve(matrix, rhs) else { continue };
        if sol.iter().any(|&b| (b - b.round()).abs() > 1e-6) {
            continue;
        }
        let mut beta = CyclotomicInt::zero(order);
        let mut ypow = CyclotomicInt::one(order);
        for &b in &sol {
            beta = beta + ypow.scale(b.round() as i64);
            ypow = ypow * y;
        }
        if (beta.embed().re - approx).abs() < 1e-6 {
            return Ok(beta);
        }
    }
    Err(Error::InvalidArgument(format!("no integral expression found in order {n}")))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_fourteen_rows() {
        let cat = base_catalog();
        assert_eq!(cat.len(), 14);
        for b in &cat {
            let v = b.value();
            let p = b.min_poly.iter().fold(0.0, |acc, &c| acc * v + c as f64);
            assert!(p.abs() < 1e-9, "{}: {p}", b.case_id());
            assert!((v - b.approx).abs() < 1e-8, "{}: {v}", b.case_id());
            assert!(b.beta.is_real());
            for &k in &b.conj_auts {
                assert!(b.conjugate(k).embed().norm() < 1.0);
            }
            let expected = if b.is_quadratic() { 1 } else { 2 };
            assert_eq!(b.conj_auts.len(), expected, "{}", b.case_id());
        }
    }

    #[test]
    fn delta_and_mu_rows() {
        let d = BaseSpec::lookup("delta", 8).unwrap();
        assert_eq!(d.min_poly, vec![1, -2, -1]);
        assert!(d.is_unit);
        let m = BaseSpec::lookup("μ", 12).unwrap();
        assert_eq!(m.min_poly, vec![1, -2, -2]);
        assert!(!m.is_unit);
        assert!(m.inverse().is_none());
    }

    #[test]
    fn lambda_conjugations_by_enumeration() {
        let l = BaseSpec::lookup("lambda", 7).unwrap();
        assert_eq!(l.conj_auts, vec![2, 3]);
        // brute force over every exponent, independent of the catalog filter
        let mut small: Vec<u32> = (1..7u32)
            .filter(|&k| (1.0 + 2.0 * (2.0 * PI * k as f64 / 7.0).cos()).abs() < 1.0)
            .filter(|&k| k <= 3)
            .collect();
        small.sort();
        assert_eq!(small, l.conj_auts);
        assert!((l.conjugate(2).embed().re.abs() - 0.555).abs() < 1e-3);
        assert!((l.conjugate(3).embed().re.abs() - 0.802).abs() < 1e-3);
    }

    #[test]
    fn table_three_conjugations() {
        for (name, n, k) in [("tau", 5, 2), ("tau", 10, 3), ("tau2", 10, 3), ("delta", 8, 3), ("mu", 12, 5)] {
            assert_eq!(BaseSpec::lookup(name, n).unwrap().sigma(), k, "{name} {n}");
        }
    }

    #[test]
    fn reported_values() {
        let t = BaseSpec::lookup("tau", 5).unwrap();
        assert!((t.value() - 1.618033989).abs() < 1e-9);
        let k = BaseSpec::lookup("kappa", 9).unwrap();
        assert!((k.value() - 2.879385242).abs() < 1e-9);
        assert_eq!(k.source, ExpressionSource::Derived);
        assert_eq!(BaseSpec::lookup("kappa", 18).unwrap().source, ExpressionSource::ClosedForm);
    }

    #[test]
    fn derived_expressions_reproduce_closed_forms() {
        for &(name, n, _, _) in CLOSED_FORMS.iter() {
            let row = ROWS.iter().find(|r| r.name == Some(name)).unwrap();
            let order = Order::new(n).unwrap();
            let closed = BaseSpec::lookup(name, n).unwrap().beta;
            let derived = derive_expression(order, row.min_poly, row.approx).unwrap();
            assert_eq!(closed, derived, "{name} {n}");
        }
    }

    #[test]
    fn inverses_of_units() {
        for b in base_catalog().into_iter().chain(delone_cases()) {
            match b.inverse() {
                Some(inv) => assert_eq!(inv * b.beta, CyclotomicInt::one(b.order)),
                None => assert!(!b.is_unit),
            }
        }
    }

    #[test]
    fn equality_orders() {
        let got: Vec<u32> = delone_cases().iter().map(|b| b.equality_order().unwrap()).collect();
        assert_eq!(got, vec![5, 5, 10, 7, 7, 8, 18, 12]);
    }

    #[test]
    fn unknown_lookup() {
        assert!(matches!(BaseSpec::lookup("delta", 10), Err(Error::UnknownBase { .. })));
        assert!(BaseSpec::lookup("4.048917340", 7).is_ok());
    }
}
