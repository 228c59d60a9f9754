//! Arbitrary-precision complex embeddings backed by `astro-float`.

use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, RoundingMode};
use num_complex::Complex64;

const RM: RoundingMode = RoundingMode::ToEven;
const GUARD_BITS: usize = 64;

/// A complex number with `BigFloat` parts.
#[derive(Clone, Debug)]
pub struct PreciseComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    pub bits: usize,
}

impl PreciseComplex {
    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    /// Sign of the real part when it exceeds the accumulated rounding
    /// error of a `bits`-precision evaluation; `None` when ambiguous.
    pub(crate) fn re_sign_if_clear(&self, bits: usize) -> Option<Ordering> {
        if self.re.is_zero() {
            return None;
        }
        let threshold = BigFloat::from_f64(2f64.powi(-(bits as i32) + 16), self.bits);
        let mag = self.re.abs();
        match mag.cmp(&threshold) {
            Some(c) if c > 0 => Some(if self.re.is_negative() { Ordering::Less } else { Ordering::Greater }),
            _ => None,
        }
    }

    pub fn modulus_squared(&self) -> BigFloat {
        let p = self.bits;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }
}

pub(crate) fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let s = format!("{x}");
    s.parse::<f64>().unwrap_or(f64::NAN)
}

/// Evaluates `Σ c_j ω^j` at `ω = exp(2πi/n)` by Horner's rule.
pub(crate) fn horner_embed(coeffs: &[i64], n: u32, bits: usize) -> PreciseComplex {
    let p = bits + GUARD_BITS;
    let mut cc = Consts::new().expect("astro-float constants");
    let two_pi = cc.pi(p, RM).mul(&BigFloat::from_i64(2, p), p, RM);
    let angle = two_pi.div(&BigFloat::from_i64(n as i64, p), p, RM);
    let wr = angle.cos(p, RM, &mut cc);
    let wi = angle.sin(p, RM, &mut cc);
    let mut re = BigFloat::from_i64(0, p);
    let mut im = BigFloat::from_i64(0, p);
    for &c in coeffs.iter().rev() {
        let nr = re.mul(&wr, p, RM).sub(&im.mul(&wi, p, RM), p, RM);
        let ni = re.mul(&wi, p, RM).add(&im.mul(&wr, p, RM), p, RM);
        re = nr.add(&BigFloat::from_i64(c, p), p, RM);
        im = ni;
    }
    PreciseComplex { re, im, bits: p }
}

#[cfg(test)]
/// `cos(2πk/n)` and `sin(2πk/n)` at the requested precision.
pub(crate) fn root_of_unity(k: i64, n: u32, bits: usize) -> (BigFloat, BigFloat) {
    let p = bits + GUARD_BITS;
    let mut cc = Consts::new().expect("astro-float constants");
    let two_pi = cc.pi(p, RM).mul(&BigFloat::from_i64(2, p), p, RM);
    let angle = two_pi
        .mul(&BigFloat::from_i64(k, p), p, RM)
        .div(&BigFloat::from_i64(n as i64, p), p, RM);
    (angle.cos(p, RM, &mut cc), angle.sin(p, RM, &mut cc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_matches_f64_for_small_inputs() {
        let z = horner_embed(&[1, 1, 0, 0], 5, 128).to_complex64();
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0);
        assert!((z - (1.0 + w)).norm() < 1e-15);
    }

    #[test]
    fn round_trip_to_f64() {
        let x = BigFloat::from_f64(-0.1234567890123, 128);
        assert!((to_f64(&x) + 0.1234567890123).abs() < 1e-16);
        let (c, s) = root_of_unity(1, 8, 128);
        assert!((to_f64(&c) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((to_f64(&s) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
    }
}
