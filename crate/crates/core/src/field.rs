//! Exact coefficient arithmetic over the rationals and over prime fields
//! `F_p` with `p` odd, including square detection and square roots.
//!
//! A [`Scalar`] carries its field with it: rationals are stored in lowest
//! terms with positive denominator (the `num` normal form), `F_p` residues
//! lie in `[0, p-1]` together with their modulus. Mixing scalars from
//! different fields in one arithmetic expression is a programming error and
//! panics; division by zero panics as well, it is never a sentinel value.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Which exact field arithmetic runs in.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum FieldSpec {
    /// Arbitrary-precision rationals.
    Rational,
    /// The prime field `F_p`, `p` an odd prime.
    Fp(u64),
}

impl FieldSpec {
    /// Builds an `F_p` spec, checking that `p` is an odd prime.
    pub fn fp(p: u64) -> crate::Result<Self> {
        if p == 2 {
            return Err(Error::Config("p = 2 is not supported".into()));
        }
        if !is_prime_u64(p) {
            return Err(Error::Config(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Fp(p))
    }

    /// Parses "rational" or "fp:<P>".
    pub fn parse(s: &str) -> crate::Result<Self> {
        if s == "rational" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(ps) = s.strip_prefix("fp:") {
            let p: u64 = ps
                .parse()
                .map_err(|_| Error::Config(format!("bad modulus in field spec {s:?}")))?;
            return FieldSpec::fp(p);
        }
        Err(Error::Config(format!(
            "unknown field spec {s:?}, expected \"rational\" or \"fp:<P>\""
        )))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Fp(p) => Scalar::Fp {
                value: (n as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
        }
    }

    /// Parses a scalar from its string form: `"n"` or `"n/d"` over the
    /// rationals, a decimal residue over `F_p` (negative values are reduced).
    pub fn parse_scalar(&self, s: &str) -> crate::Result<Scalar> {
        let s = s.trim();
        match *self {
            FieldSpec::Rational => {
                let r: BigRational = if let Some((n, d)) = s.split_once('/') {
                    let num: BigInt = n
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad numerator {n:?}")))?;
                    let den: BigInt = d
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad denominator {d:?}")))?;
                    if den.is_zero() {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    BigRational::new(num, den)
                } else {
                    let num: BigInt = s
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                    BigRational::from_integer(num)
                };
                Ok(Scalar::Rational(r))
            }
            FieldSpec::Fp(p) => {
                let n: i128 = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad residue {s:?}")))?;
                let value = n.rem_euclid(p as i128) as u64;
                Ok(Scalar::Fp { value, modulus: p })
            }
        }
    }

    /// The smallest positive quadratic non-residue of `F_p`; `None` over the
    /// rationals.
    pub fn smallest_nonresidue(&self) -> Option<Scalar> {
        match *self {
            FieldSpec::Rational => None,
            FieldSpec::Fp(p) => {
                let mut n = 2u64;
                loop {
                    if legendre(n % p, p) == -1 {
                        return Some(Scalar::Fp { value: n % p, modulus: p });
                    }
                    n += 1;
                }
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Fp(p) => write!(f, "fp:{p}"),
        }
    }
}

/// An exact field element: a rational or an `F_p` residue.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Fp { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn spec(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Fp { modulus, .. } => FieldSpec::Fp(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn zero_like(&self) -> Scalar {
        self.spec().zero()
    }

    pub fn one_like(&self) -> Scalar {
        self.spec().one()
    }

    /// Multiplicative inverse. Panics on zero: division by zero is a hard
    /// error throughout the crate.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => {
                assert!(!r.is_zero(), "division by zero in Q");
                Scalar::Rational(r.recip())
            }
            Scalar::Fp { value, modulus } => {
                assert!(*value != 0, "division by zero in F_{modulus}");
                Scalar::Fp {
                    value: pow_mod(*value, *modulus - 2, *modulus),
                    modulus: *modulus,
                }
            }
        }
    }

    pub fn pow(&self, mut n: u64) -> Scalar {
        let mut acc = self.one_like();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// Returns `r` with `r^2 = self` when such `r` exists in the field.
    ///
    /// Over the rationals the numerator and denominator are tested for
    /// perfect squares; over `F_p` an Euler-criterion test is followed by
    /// Tonelli–Shanks. The canonical root is the non-negative rational,
    /// respectively the least residue in `[0, (p-1)/2]`.
    pub fn sqrt_if_square(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = exact_int_sqrt(r.numer())?;
                let d = exact_int_sqrt(r.denom())?;
                Some(Scalar::Rational(BigRational::new(n, d)))
            }
            Scalar::Fp { value, modulus } => {
                let p = *modulus;
                if *value == 0 {
                    return Some(Scalar::Fp { value: 0, modulus: p });
                }
                if legendre(*value, p) != 1 {
                    return None;
                }
                let r = tonelli_shanks(*value, p);
                let r = r.min(p - r);
                Some(Scalar::Fp { value: r, modulus: p })
            }
        }
    }

    pub fn is_square(&self) -> bool {
        self.sqrt_if_square().is_some()
    }

    /// Canonical representative of the square class: `1` for nonzero squares,
    /// the smallest positive non-residue over `F_p`, the signed squarefree
    /// part over the rationals. Zero maps to zero.
    pub fn square_class_rep(&self) -> Scalar {
        if self.is_zero() {
            return self.zero_like();
        }
        match self {
            Scalar::Fp { value, modulus } => {
                if legendre(*value, *modulus) == 1 {
                    self.one_like()
                } else {
                    self.spec().smallest_nonresidue().expect("fp has a non-residue")
                }
            }
            Scalar::Rational(r) => {
                // squarefree part of numer*denom, keeping the sign
                let prod = r.numer() * r.denom();
                Scalar::Rational(BigRational::from_integer(squarefree_part(&prod)))
            }
        }
    }

    fn check_same_field(&self, other: &Scalar) {
        assert_eq!(
            self.spec(),
            other.spec(),
            "scalars from different fields in one expression"
        );
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $rat:expr, |$x:ident, $y:ident, $p:ident| $fp:expr) => {
        impl<'a, 'b> $trait<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                self.check_same_field(rhs);
                match (self, rhs) {
                    (Scalar::Rational($a), Scalar::Rational($b)) => Scalar::Rational($rat),
                    (
                        Scalar::Fp { value: $x, modulus: $p },
                        Scalar::Fp { value: $y, .. },
                    ) => Scalar::Fp { value: $fp, modulus: *$p },
                    _ => unreachable!(),
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(&self, &rhs)
            }
        }

        impl<'b> $trait<&'b Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                $trait::$method(&self, rhs)
            }
        }
    };
}

scalar_binop!(Add, add, |a, b| a + b, |x, y, p| add_mod(*x, *y, *p));
scalar_binop!(Sub, sub, |a, b| a - b, |x, y, p| sub_mod(*x, *y, *p));
scalar_binop!(Mul, mul, |a, b| a * b, |x, y, p| mul_mod(*x, *y, *p));

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = (a as u128 + b as u128) % p as u128;
    s as u64
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Legendre symbol of `a` mod the odd prime `p`: 0, 1 or -1.
fn legendre(a: u64, p: u64) -> i32 {
    if a.is_multiple_of(p) {
        return 0;
    }
    let e = pow_mod(a, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Square root mod an odd prime, assuming `a` is a nonzero residue.
fn tonelli_shanks(a: u64, p: u64) -> u64 {
    if p % 4 == 3 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    // write p - 1 = q * 2^s with q odd
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// Exact integer square root: `Some(s)` iff `n = s^2` with `n >= 0`.
fn exact_int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

/// Signed squarefree part of an integer, by trial division with a
/// desk-scale bound. Factors that survive the bound are kept verbatim
/// unless they are perfect squares, which is still exact (the result times
/// a square equals the input) if not minimal.
fn squarefree_part(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_zero());
    let mut rest = n.abs();
    let mut free = BigInt::one();
    let two = BigInt::from(2u32);
    let mut mult = 0u32;
    while rest.is_multiple_of(&two) {
        rest /= &two;
        mult += 1;
    }
    if mult % 2 == 1 {
        free *= &two;
    }
    let mut d = BigInt::from(3u32);
    let bound = BigInt::from(10_000u64);
    while &d * &d <= rest && d <= bound {
        let mut mult = 0u32;
        while rest.is_multiple_of(&d) {
            rest /= &d;
            mult += 1;
        }
        if mult % 2 == 1 {
            free *= &d;
        }
        d += 2;
    }
    if !rest.is_one() {
        match exact_int_sqrt(&rest) {
            Some(_) => {}
            None => free *= &rest,
        }
    }
    if n.is_negative() {
        -free
    } else {
        free
    }
}

/// Deterministic Miller–Rabin for u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
