//! Exact scalars: residues mod an odd prime, or big rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A coefficient. Residues are kept in `[0, p)`; rationals are always reduced
/// with a positive denominator (guaranteed by `BigRational`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Fp(u32),
    Rational(BigRational),
}

/// Which coefficient ring an algebra is built over.
///
/// `Kn` is `F_p[v, v^-1]`; `Zp` and `Q` are `Z_(p)[v]` and `Q[v]` and are only
/// used by the integral lift of the Honda law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffRing {
    Kn,
    Zp,
    Q,
}

impl CoeffRing {
    pub fn name(self) -> &'static str {
        match self {
            CoeffRing::Kn => "Kn",
            CoeffRing::Zp => "Zp",
            CoeffRing::Q => "Q",
        }
    }

    pub fn allows_negative_v(self) -> bool {
        matches!(self, CoeffRing::Kn)
    }

    pub fn is_char_p(self) -> bool {
        matches!(self, CoeffRing::Kn)
    }
}

impl std::str::FromStr for CoeffRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Kn" | "kn" | "K" => Ok(CoeffRing::Kn),
            "Zp" | "zp" => Ok(CoeffRing::Zp),
            "Q" | "q" => Ok(CoeffRing::Q),
            other => Err(Error::Config(format!("unknown coefficient ring `{other}`"))),
        }
    }
}

/// Arithmetic context for [`Scalar`]: the prime and the ring flavour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ScalarField {
    p: u32,
    ring: CoeffRing,
}

impl ScalarField {
    pub fn new(p: u32, ring: CoeffRing) -> Self {
        Self { p, ring }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn zero(&self) -> Scalar {
        match self.ring {
            CoeffRing::Kn => Scalar::Fp(0),
            _ => Scalar::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self.ring {
            CoeffRing::Kn => Scalar::Fp(n.rem_euclid(self.p as i64) as u32),
            _ => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
        }
    }

    /// `num/den`, reduced into this field. Fails over `F_p` when `p | den`.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        assert!(den != 0, "zero denominator");
        match self.ring {
            CoeffRing::Kn => {
                let d = den.rem_euclid(self.p as i64) as u32;
                if d == 0 {
                    return Err(Error::NotPIntegral(format!("{num}/{den}")));
                }
                let n = self.from_i64(num);
                Ok(self.mul(&n, &Scalar::Fp(self.inv_mod(d))))
            }
            _ => Ok(Scalar::Rational(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
        }
    }

    pub fn from_rational(&self, r: BigRational) -> Result<Scalar> {
        match self.ring {
            CoeffRing::Kn => reduce_rational(&r, self.p).map(Scalar::Fp),
            _ => Ok(Scalar::Rational(r)),
        }
    }

    pub fn is_zero(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Fp(r) => *r == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Fp(r) => *r == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(((*x as u64 + *y as u64) % self.p as u64) as u32),
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Fp(x) => Scalar::Fp(if *x == 0 { 0 } else { self.p - x }),
            Scalar::Rational(x) => Scalar::Rational(-x),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(((*x as u64 * *y as u64) % self.p as u64) as u32),
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn pow(&self, a: &Scalar, e: u64) -> Scalar {
        match a {
            Scalar::Fp(x) => Scalar::Fp(pow_mod(*x as u64, e, self.p as u64) as u32),
            Scalar::Rational(q) => {
                let e = i32::try_from(e).expect("exponent too large");
                Scalar::Rational(num_traits::pow::Pow::pow(q, e))
            }
        }
    }

    /// Multiplicative inverse, if the scalar is a unit.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match a {
            Scalar::Fp(0) => None,
            Scalar::Fp(x) => Some(Scalar::Fp(self.inv_mod(*x))),
            Scalar::Rational(q) if q.is_zero() => None,
            Scalar::Rational(q) => Some(Scalar::Rational(q.recip())),
        }
    }

    /// A rational is p-integral iff p does not divide its denominator.
    pub fn is_p_integral(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(_) => true,
            Scalar::Rational(q) => !q.denom().is_multiple_of(&BigInt::from(self.p)),
        }
    }

    /// Reduce a p-integral rational to its residue mod p.
    pub fn reduce_mod_p(&self, a: &Scalar) -> Result<Scalar> {
        match a {
            Scalar::Fp(x) => Ok(Scalar::Fp(*x)),
            Scalar::Rational(q) => reduce_rational(q, self.p).map(Scalar::Fp),
        }
    }

    fn inv_mod(&self, x: u32) -> u32 {
        pow_mod(x as u64, self.p as u64 - 2, self.p as u64) as u32
    }

    /// Render in the ASCII polynomial syntax. Residues above `p/2` print as
    /// negatives.
    pub fn render(&self, s: &Scalar) -> String {
        match s {
            Scalar::Fp(x) => {
                if *x > self.p / 2 {
                    format!("-{}", self.p - x)
                } else {
                    x.to_string()
                }
            }
            Scalar::Rational(q) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
        }
    }

    /// Signed small-integer view used by the renderer and the JSON writer.
    pub fn signed(&self, s: &Scalar) -> Option<i64> {
        match s {
            Scalar::Fp(x) => Some(if *x > self.p / 2 { *x as i64 - self.p as i64 } else { *x as i64 }),
            Scalar::Rational(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Rational(_) => None,
        }
    }
}

fn reduce_rational(q: &BigRational, p: u32) -> Result<u32> {
    let pb = BigInt::from(p);
    let den = q.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(Error::NotPIntegral(q.to_string()));
    }
    let num = q.numer().mod_floor(&pb).to_u64().unwrap();
    let den = den.to_u64().unwrap();
    let inv = pow_mod(den, p as u64 - 2, p as u64);
    Ok(((num * inv) % p as u64) as u32)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp(x) => write!(f, "{x}"),
            Scalar::Rational(q) => write!(f, "{q}"),
        }
    }
}

/// Is `n` prime? Trial division; the primes used here are tiny.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_arithmetic() {
        let f = ScalarField::new(5, CoeffRing::Kn);
        assert_eq!(f.add(&Scalar::Fp(3), &Scalar::Fp(4)), Scalar::Fp(2));
        assert_eq!(f.mul(&Scalar::Fp(3), &Scalar::Fp(4)), Scalar::Fp(2));
        assert_eq!(f.neg(&Scalar::Fp(0)), Scalar::Fp(0));
        assert_eq!(f.inv(&Scalar::Fp(2)), Some(Scalar::Fp(3)));
        assert_eq!(f.from_i64(-1), Scalar::Fp(4));
        assert_eq!(f.render(&Scalar::Fp(4)), "-1");
    }

    #[test]
    fn rational_reduction_and_integrality() {
        let q = ScalarField::new(3, CoeffRing::Q);
        let third = q.from_ratio(1, 3).unwrap();
        assert!(!q.is_p_integral(&third));
        assert!(q.reduce_mod_p(&third).is_err());
        let half = q.from_ratio(1, 2).unwrap();
        assert!(q.is_p_integral(&half));
        // 1/2 = 2 mod 3
        assert_eq!(q.reduce_mod_p(&half).unwrap(), Scalar::Fp(2));
        assert_eq!(q.from_ratio(2, -4).unwrap(), q.from_ratio(-1, 2).unwrap());
    }

    #[test]
    fn primes() {
        assert!(is_prime(3) && is_prime(5) && is_prime(7));
        assert!(!is_prime(9) && !is_prime(1));
    }
}
