//! Exact scalar arithmetic over Q or a prime field F_p.
//!
//! Everything downstream is an algebraic identity, so there is no floating
//! point anywhere: rationals are arbitrary-precision, finite-field residues
//! are canonical representatives in `[0, p)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// The ground field: the rationals, or F_p for a prime p.
///
/// Primality is checked on construction, so a `FieldSpec` value is always a
/// genuine field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldSpec {
    kind: FieldKind,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum FieldKind {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// The field of rational numbers.
    pub const RATIONALS: FieldSpec = FieldSpec {
        kind: FieldKind::Rationals,
    };

    /// The prime field F_p. Fails if `p` is not prime.
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if is_prime(p) {
            Ok(FieldSpec {
                kind: FieldKind::Prime(p),
            })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Characteristic: 0 for Q, p for F_p.
    pub fn characteristic(&self) -> u64 {
        match self.kind {
            FieldKind::Rationals => 0,
            FieldKind::Prime(p) => p,
        }
    }

    /// The modulus, if this is a finite field.
    pub fn modulus(&self) -> Option<u64> {
        match self.kind {
            FieldKind::Rationals => None,
            FieldKind::Prime(p) => Some(p),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.modulus().is_some()
    }

    pub fn zero(&self) -> Scalar {
        match self.kind {
            FieldKind::Rationals => Scalar::from_rational(BigRational::zero()),
            FieldKind::Prime(p) => Scalar {
                repr: Repr::Mod { residue: 0, p },
            },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self.kind {
            FieldKind::Rationals => Scalar::from_rational(BigRational::from_integer(n.into())),
            FieldKind::Prime(p) => Scalar {
                repr: Repr::Mod {
                    residue: n.rem_euclid(p as i64) as u64,
                    p,
                },
            },
        }
    }

    /// The scalar `a / b`. Over F_p this requires `b` to be invertible mod p.
    pub fn from_ratio(&self, a: i64, b: i64) -> Result<Scalar> {
        match self.kind {
            FieldKind::Rationals => {
                if b == 0 {
                    return Err(Error::ZeroInverse);
                }
                Ok(Scalar::from_rational(BigRational::new(
                    a.into(),
                    b.into(),
                )))
            }
            FieldKind::Prime(p) => {
                let den = self.from_i64(b);
                let inv = den.inv().map_err(|_| Error::BadReduction(a, b, p))?;
                Ok(self.from_i64(a) * inv)
            }
        }
    }

    /// Sign scalar: +1 or -1 according to `sign`.
    pub fn sign(&self, sign: i64) -> Scalar {
        debug_assert!(sign == 1 || sign == -1);
        self.from_i64(sign)
    }

    /// All field elements, for exhaustive enumeration. Finite fields only.
    pub fn enumerate(&self) -> Result<Vec<Scalar>> {
        match self.kind {
            FieldKind::Rationals => Err(Error::EnumerationOverRationals),
            FieldKind::Prime(p) => Ok((0..p)
                .map(|r| Scalar {
                    repr: Repr::Mod { residue: r, p },
                })
                .collect()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F{}", p),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "Q" || s == "QQ" {
            return Ok(FieldSpec::RATIONALS);
        }
        if let Some(rest) = s.strip_prefix('F') {
            let p: u64 = rest
                .parse()
                .map_err(|_| format!("cannot read field {:?}", s))?;
            return FieldSpec::prime(p).map_err(|e| e.to_string());
        }
        Err(format!(
            "cannot read field {:?} (expected Q or Fp with p prime)",
            s
        ))
    }
}

/// An exact field element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    repr: Repr,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Repr {
    // Boxed via Arc to keep Scalar cheap to clone in the common case of
    // small sparse computations that copy coefficients a lot.
    Rational(Arc<BigRational>),
    Mod { residue: u64, p: u64 },
}

impl Scalar {
    fn from_rational(q: BigRational) -> Scalar {
        Scalar {
            repr: Repr::Rational(Arc::new(q)),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match &self.repr {
            Repr::Rational(_) => FieldSpec::RATIONALS,
            Repr::Mod { p, .. } => FieldSpec {
                kind: FieldKind::Prime(*p),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_zero(),
            Repr::Mod { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_one(),
            Repr::Mod { residue, .. } => *residue == 1,
        }
    }

    /// The canonical residue in `[0, p)`, for finite-field scalars.
    pub fn residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Rational(_) => None,
            Repr::Mod { residue, .. } => Some(*residue),
        }
    }

    /// The underlying rational, for scalars over Q.
    pub fn rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(q) => Some(q),
            Repr::Mod { .. } => None,
        }
    }

    /// Multiplicative inverse. Fails on zero.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        match &self.repr {
            Repr::Rational(q) => Ok(Scalar::from_rational(q.recip())),
            Repr::Mod { residue, p } => {
                // Fermat: a^(p-2) mod p.
                Ok(Scalar {
                    repr: Repr::Mod {
                        residue: pow_mod(*residue, *p - 2, *p),
                        p: *p,
                    },
                })
            }
        }
    }
}

fn binop(a: &Scalar, b: &Scalar, f: fn(&BigRational, &BigRational) -> BigRational, g: fn(u64, u64, u64) -> u64) -> Scalar {
    match (&a.repr, &b.repr) {
        (Repr::Rational(x), Repr::Rational(y)) => Scalar::from_rational(f(x, y)),
        (Repr::Mod { residue: x, p }, Repr::Mod { residue: y, p: q }) => {
            assert_eq!(p, q, "scalars from different fields F{} and F{}", p, q);
            Scalar {
                repr: Repr::Mod {
                    residue: g(*x, *y, *p),
                    p: *p,
                },
            }
        }
        _ => panic!("scalars from different fields (Q vs F_p)"),
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |x, y| x + y, |x, y, p| add_mod(x, y, p))
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |x, y| x - y, |x, y, p| add_mod(x, p - y % p, p))
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |x, y| x * y, mul_mod)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.repr {
            Repr::Rational(q) => Scalar::from_rational(-&**q),
            Repr::Mod { residue, p } => Scalar {
                repr: Repr::Mod {
                    residue: if *residue == 0 { 0 } else { p - residue },
                    p: *p,
                },
            },
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Repr::Mod { residue, .. } => write!(f, "{}", residue),
        }
    }
}

/// Parse a coefficient literal: an integer, or `a/b` over Q (over F_p the
/// ratio is reduced when the denominator is invertible).
pub fn parse_scalar(field: &FieldSpec, text: &str) -> Result<Scalar> {
    if let Some((num, den)) = text.split_once('/') {
        let a: i64 = num
            .parse()
            .map_err(|_| Error::BadBasisName(text.to_string()))?;
        let b: i64 = den
            .parse()
            .map_err(|_| Error::BadBasisName(text.to_string()))?;
        if b == 0 {
            return Err(Error::ZeroInverse);
        }
        field.from_ratio(a, b)
    } else {
        match text.parse::<i64>() {
            Ok(n) => Ok(field.from_i64(n)),
            Err(_) => {
                // Fall back to big integers over Q.
                match self::FieldSpec::RATIONALS == *field {
                    true => {
                        let n = BigInt::from_str(text)
                            .map_err(|_| Error::BadBasisName(text.to_string()))?;
                        Ok(Scalar::from_rational(BigRational::from_integer(n)))
                    }
                    false => Err(Error::BadBasisName(text.to_string())),
                }
            }
        }
    }
}

/// Canonical text for a scalar, inverse to `parse_scalar`.
pub fn scalar_to_string(s: &Scalar) -> String {
    let mut out = String::new();
    use fmt::Write;
    write!(out, "{}", s).unwrap();
    out
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = (a as u128 + b as u128) % p as u128;
    s as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
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

/// Deterministic Miller-Rabin for u64.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == small {
            return true;
        }
        if n % small == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    // This witness set decides primality for all n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Check that a rational scalar's sign matches, for tests and displays.
pub(crate) fn rational_is_negative(s: &Scalar) -> bool {
    match &s.repr {
        Repr::Rational(q) => q.is_negative(),
        Repr::Mod { .. } => false,
    }
}
