//! Exact arithmetic in the rings of cyclotomic integers `Z[ω_n]`.
//!
//! Elements are stored in the power basis `1, ω, …, ω^{φ(n)−1}` and are kept
//! reduced modulo the `n`-th cyclotomic polynomial at all times, so equality of
//! elements is equality of coefficient vectors. Floating point is only used
//! for the complex embedding `ω ↦ exp(2πi/n)`, never for identity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precise::{self, PreciseComplex};

/// Largest `φ(n)` over the supported orders.
pub const MAX_DEGREE: usize = 6;

/// The orders `n` for which `Z[ω_n]` contains a quadratic or cubic
/// Pisot-cyclotomic number.
pub const SUPPORTED_ORDERS: [u32; 8] = [5, 7, 8, 9, 10, 12, 14, 18];

/// A validated cyclotomic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Order(u8);

impl Order {
    pub fn new(n: u32) -> Result<Self> {
        if SUPPORTED_ORDERS.contains(&n) {
            Ok(Order(n as u8))
        } else {
            Err(Error::UnsupportedOrder(n))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0 as u32
    }

    /// Euler totient `φ(n)`, the rank of `Z[ω_n]` over `Z`.
    #[inline]
    pub fn degree(self) -> usize {
        self.tables().degree
    }

    /// Exponents `k` in `1..n` coprime to `n`, i.e. the Galois group.
    pub fn units(self) -> Vec<u32> {
        let n = self.get();
        (1..n).filter(|&k| gcd(k, n) == 1).collect()
    }

    fn index(self) -> usize {
        SUPPORTED_ORDERS
            .iter()
            .position(|&m| m == self.get())
            .expect("validated order")
    }

    pub(crate) fn tables(self) -> &'static RingTables {
        static TABLES: OnceLock<Vec<RingTables>> = OnceLock::new();
        let all = TABLES.get_or_init(|| SUPPORTED_ORDERS.iter().map(|&n| RingTables::build(n)).collect());
        &all[self.index()]
    }
}

impl TryFrom<u32> for Order {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        Order::new(n)
    }
}

impl From<Order> for u32 {
    fn from(o: Order) -> u32 {
        o.get()
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Per-order lookup tables: the cyclotomic polynomial, the power basis
/// images of `ω^j` and their complex embeddings.
pub(crate) struct RingTables {
    pub n: u32,
    pub degree: usize,
    /// Monic cyclotomic polynomial, ascending coefficients, length `degree + 1`.
    pub cyclotomic: Vec<i64>,
    /// `powers[j]` is `ω^j` reduced, for `j < max(n, 2·degree − 1)`.
    pub powers: Vec<[i64; MAX_DEGREE]>,
    /// `exp(2πij/n)` for `j < degree`.
    pub roots: Vec<Complex64>,
}

impl RingTables {
    fn build(n: u32) -> Self {
        let cyclotomic = cyclotomic_polynomial(n);
        let degree = cyclotomic.len() - 1;
        let count = (n as usize).max(2 * degree);
        let mut powers = Vec::with_capacity(count);
        let mut cur = [0i64; MAX_DEGREE];
        cur[0] = 1;
        for _ in 0..count {
            powers.push(cur);
            // multiply by ω: shift, then fold the overflow term with Φ_n.
            let top = cur[degree - 1];
            let mut next = [0i64; MAX_DEGREE];
            for i in (1..degree).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..degree {
                next[i] -= top * cyclotomic[i];
            }
            cur = next;
        }
        let roots = (0..degree)
            .map(|j| {
                let angle = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        RingTables { n, degree, cyclotomic, powers, roots }
    }
}

/// Ascending integer coefficients of the `n`-th cyclotomic polynomial,
/// computed by dividing `x^n − 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - den.len();
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd] / den[dd];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// An element of `Z[ω_n]` in reduced power-basis form.
///
/// Coefficients are 64-bit and every ring operation is overflow-checked;
/// the operator impls panic on overflow or order mismatch, the `try_*`
/// methods report them as errors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclotomicInt {
    order: Order,
    coeffs: [i64; MAX_DEGREE],
}

impl CyclotomicInt {
    pub fn zero(order: Order) -> Self {
        CyclotomicInt { order, coeffs: [0; MAX_DEGREE] }
    }

    pub fn one(order: Order) -> Self {
        Self::from_int(order, 1)
    }

    pub fn from_int(order: Order, v: i64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = v;
        z
    }

    /// `ω^k` for any integer `k` (negative exponents allowed).
    pub fn root(order: Order, k: i64) -> Self {
        let n = order.get() as i64;
        let j = k.rem_euclid(n) as usize;
        CyclotomicInt { order, coeffs: order.tables().powers[j] }
    }

    /// Builds an element from power-basis coefficients; the slice may be
    /// longer than `φ(n)`, in which case it is reduced.
    pub fn from_coeffs(order: Order, coeffs: &[i64]) -> Result<Self> {
        let t = order.tables();
        let mut acc = [0i128; 2 * MAX_DEGREE];
        let mut z = Self::zero(order);
        for (j, &c) in coeffs.iter().enumerate() {
            if j < t.degree {
                acc[j] += c as i128;
            } else {
                let p = Self::root(order, j as i64);
                for i in 0..t.degree {
                    acc[i] += c as i128 * p.coeffs[i] as i128;
                }
            }
        }
        for i in 0..t.degree {
            z.coeffs[i] = i64::try_from(acc[i]).map_err(|_| Error::Overflow)?;
        }
        Ok(z)
    }

    /// Sum of `c_k ω^k` over `(k, c_k)` pairs, exponents taken modulo `n`.
    pub fn from_exponents(order: Order, terms: &[(i64, i64)]) -> Self {
        terms
            .iter()
            .fold(Self::zero(order), |acc, &(k, c)| acc + Self::root(order, k).scale(c))
    }

    #[inline]
    pub fn order(&self) -> Order {
        self.order
    }

    #[inline]
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs[..self.order.degree()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Largest absolute coefficient.
    pub fn height(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch { left: self.order.get(), right: other.order.get() })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let mut z = *self;
        for (a, b) in z.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *a = a.checked_add(*b).ok_or(Error::Overflow)?;
        }
        Ok(z)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let mut z = *self;
        for (a, b) in z.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *a = a.checked_sub(*b).ok_or(Error::Overflow)?;
        }
        Ok(z)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let t = self.order.tables();
        let d = t.degree;
        let mut conv = [0i128; 2 * MAX_DEGREE];
        for i in 0..d {
            let a = self.coeffs[i] as i128;
            if a == 0 {
                continue;
            }
            for j in 0..d {
                conv[i + j] += a * other.coeffs[j] as i128;
            }
        }
        let mut acc = [0i128; MAX_DEGREE];
        acc[..d].copy_from_slice(&conv[..d]);
        for (k, &c) in conv.iter().enumerate().take(2 * d - 1).skip(d) {
            if c == 0 {
                continue;
            }
            let p = &t.powers[k];
            for i in 0..d {
                acc[i] += c * p[i] as i128;
            }
        }
        let mut z = Self::zero(self.order);
        for i in 0..d {
            z.coeffs[i] = i64::try_from(acc[i]).map_err(|_| Error::Overflow)?;
        }
        Ok(z)
    }

    /// Multiplication by an integer.
    pub fn scale(&self, c: i64) -> Self {
        let mut z = *self;
        for a in z.coeffs.iter_mut() {
            *a = a.checked_mul(c).expect("cyclotomic coefficient overflow");
        }
        z
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..e {
            acc = acc * *self;
        }
        acc
    }

    /// Multiplication by `ω`, cheaper than a general product.
    pub fn rotate(&self) -> Self {
        let t = self.order.tables();
        let d = t.degree;
        let top = self.coeffs[d - 1];
        let mut z = Self::zero(self.order);
        for i in (1..d).rev() {
            z.coeffs[i] = self.coeffs[i - 1];
        }
        for i in 0..d {
            z.coeffs[i] -= top * t.cyclotomic[i];
        }
        z
    }

    /// Image under the automorphism `ω ↦ ω^k`.
    pub fn galois(&self, k: i64) -> Result<Self> {
        let n = self.order.get() as i64;
        let k = k.rem_euclid(n);
        if gcd(k as u32, n as u32) != 1 {
            return Err(Error::NotCoprime { k, n: n as u32 });
        }
        Ok(self.galois_unchecked(k as u32))
    }

    pub fn galois_unchecked(&self, k: u32) -> Self {
        let t = self.order.tables();
        let n = t.n as usize;
        let mut acc = [0i128; MAX_DEGREE];
        for j in 0..t.degree {
            let c = self.coeffs[j];
            if c == 0 {
                continue;
            }
            let p = &t.powers[(j * k as usize) % n];
            for i in 0..t.degree {
                acc[i] += c as i128 * p[i] as i128;
            }
        }
        let mut z = Self::zero(self.order);
        for i in 0..t.degree {
            z.coeffs[i] = i64::try_from(acc[i]).expect("cyclotomic coefficient overflow");
        }
        z
    }

    /// Complex conjugate, i.e. the automorphism `ω ↦ ω^{−1}`.
    pub fn conj(&self) -> Self {
        self.galois_unchecked(self.order.get() - 1)
    }

    /// `z · conj(z)`, an element of the maximal real subring.
    pub fn norm_squared(&self) -> Self {
        *self * self.conj()
    }

    /// Embedding `ω ↦ exp(2πi/n)` in double precision.
    #[inline]
    pub fn embed(&self) -> Complex64 {
        let t = self.order.tables();
        let mut re = 0.0;
        let mut im = 0.0;
        for j in 0..t.degree {
            let c = self.coeffs[j] as f64;
            re += c * t.roots[j].re;
            im += c * t.roots[j].im;
        }
        Complex64::new(re, im)
    }

    /// Embedding evaluated by Horner's rule with `bits` of working precision.
    pub fn embed_with_precision(&self, bits: usize) -> Result<PreciseComplex> {
        if bits < 53 {
            return Err(Error::InvalidArgument(format!("precision {bits} below 53 bits")));
        }
        Ok(precise::horner_embed(self.coeffs(), self.order.get(), bits))
    }

    /// Sign of the real part, decided exactly for zero and escalating the
    /// working precision until the float evaluation is unambiguous.
    pub fn real_sign(&self) -> Ordering {
        let re_sum = *self + self.conj();
        if re_sum.is_zero() {
            return Ordering::Equal;
        }
        let v = re_sum.embed().re;
        if v.abs() > 1e-9 * (1.0 + re_sum.height() as f64) {
            return v.partial_cmp(&0.0).unwrap();
        }
        let mut bits = 128;
        loop {
            let p = precise::horner_embed(re_sum.coeffs(), self.order.get(), bits);
            if let Some(s) = p.re_sign_if_clear(bits) {
                return s;
            }
            bits *= 2;
            assert!(bits <= 1 << 14, "sign of a nonzero algebraic integer did not resolve");
        }
    }

    /// Exact test for membership in the real subring (`z == conj(z)`).
    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Sign of the imaginary part, decided exactly.
    pub fn imag_sign(&self) -> Ordering {
        // (ω⁻¹ − ω) = −2i·sin(2π/n), so Re(z·(ω⁻¹ − ω)) = 2sin(2π/n)·Im(z)
        let rot = Self::root(self.order, -1) - Self::root(self.order, 1);
        (*self * rot).real_sign()
    }

    /// Multiplicative inverse when `z` is a unit of `Z[ω]`.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // z · Π_{k≠1} σ_k(z) = N(z) ∈ Z
        let mut cofactor = Self::one(self.order);
        for k in self.order.units().into_iter().skip(1) {
            cofactor = cofactor.try_mul(&self.galois_unchecked(k)).ok()?;
        }
        let norm = self.try_mul(&cofactor).ok()?;
        match norm.coeffs() {
            [1, rest @ ..] if rest.iter().all(|&c| c == 0) => Some(cofactor),
            [-1, rest @ ..] if rest.iter().all(|&c| c == 0) => Some(-cofactor),
            _ => None,
        }
    }
}

impl fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[ω{}]{:?}", self.order, self.coeffs())
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &c) in self.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            let body = match (j, mag) {
                (0, m) => format!("{m}"),
                (1, 1) => "w".to_string(),
                (1, m) => format!("{m}w"),
                (k, 1) => format!("w^{k}"),
                (k, m) => format!("{m}w^{k}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for CyclotomicInt {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("cyclotomic addition")
    }
}

impl Sub for CyclotomicInt {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("cyclotomic subtraction")
    }
}

impl Mul for CyclotomicInt {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("cyclotomic multiplication")
    }
}

impl Neg for CyclotomicInt {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1)
    }
}

impl Serialize for CyclotomicInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs().serialize(s)
    }
}

/// The digit set `A_n = {0} ∪ {ω^j : 0 ≤ j < n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    order: Order,
    digits: Vec<CyclotomicInt>,
}

impl Alphabet {
    /// The polygonal alphabet: zero first, then `ω^0, …, ω^{n−1}`.
    pub fn polygonal(order: Order) -> Self {
        let mut digits = vec![CyclotomicInt::zero(order)];
        digits.extend((0..order.get() as i64).map(|j| CyclotomicInt::root(order, j)));
        Alphabet { order, digits }
    }

    /// An arbitrary finite alphabet; duplicates are removed.
    pub fn custom(order: Order, digits: Vec<CyclotomicInt>) -> Result<Self> {
        let mut out: Vec<CyclotomicInt> = Vec::with_capacity(digits.len());
        for d in digits {
            if d.order() != order {
                return Err(Error::OrderMismatch { left: order.get(), right: d.order().get() });
            }
            if !out.contains(&d) {
                out.push(d);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidArgument("empty alphabet".into()));
        }
        Ok(Alphabet { order, digits: out })
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn digits(&self) -> &[CyclotomicInt] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Whether this is exactly `A_n` for its order.
    pub fn is_polygonal(&self) -> bool {
        let std = Alphabet::polygonal(self.order);
        self.digits.len() == std.digits.len() && std.digits.iter().all(|d| self.digits.contains(d))
    }

    /// `max |a|` over the digits.
    pub fn max_modulus(&self) -> f64 {
        self.digits.iter().map(|d| d.embed().norm()).fold(0.0, f64::max)
    }
}
