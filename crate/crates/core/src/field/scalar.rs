use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact element `rat + irr * sqrt(d)` of a real quadratic field.
///
/// The radicand is carried along with the value. A scalar whose irrational
/// part is zero is stored with radicand `0`, so any rational value combines
/// freely with any field; combining two genuinely irrational values over
/// different radicands is a logic error and panics. Parsing rejects such
/// inputs up front.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    rat: BigRational,
    irr: BigRational,
    root: u64,
}

/// `true` when `d >= 2` has no repeated prime factor.
pub fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

fn join_root(a: u64, b: u64) -> u64 {
    match (a, b) {
        (0, r) | (r, 0) => r,
        (r, s) if r == s => r,
        (r, s) => panic!("mixed radicands sqrt({r}) and sqrt({s}) in one computation"),
    }
}

impl Scalar {
    fn canonical(rat: BigRational, irr: BigRational, root: u64) -> Self {
        if irr.is_zero() {
            Scalar { rat, irr, root: 0 }
        } else {
            Scalar { rat, irr, root }
        }
    }

    pub fn zero() -> Self {
        Scalar::from(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::from(BigRational::from_integer(n))
    }

    /// `num / den`; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::from(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `rat + irr * sqrt(root)`, validating the radicand.
    pub fn quadratic(rat: BigRational, irr: BigRational, root: u64) -> Result<Self> {
        if irr.is_zero() {
            return Ok(Scalar::from(rat));
        }
        if !is_square_free(root) {
            return Err(Error::InvalidRadicand(root));
        }
        Ok(Scalar::canonical(rat, irr, root))
    }

    /// `sqrt(d)` for a square-free `d >= 2`.
    pub fn sqrt_of(d: u64) -> Result<Self> {
        Scalar::quadratic(BigRational::zero(), BigRational::one(), d)
    }

    pub fn rat(&self) -> &BigRational {
        &self.rat
    }

    pub fn irr(&self) -> &BigRational {
        &self.irr
    }

    /// The radicand, or `0` when the value is rational.
    pub fn radicand(&self) -> u64 {
        self.root
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.irr.is_zero() && self.rat.is_integer()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.rat.to_integer())
    }

    /// Exact sign of the real number `rat + irr * sqrt(d)`.
    pub fn sign(&self) -> i8 {
        let s_rat = rat_sign(&self.rat);
        let s_irr = rat_sign(&self.irr);
        if s_irr == 0 {
            return s_rat;
        }
        if s_rat == 0 || s_rat == s_irr {
            return s_irr;
        }
        // Opposite signs: the part with the larger square wins.
        let lhs = &self.rat * &self.rat;
        let rhs = &self.irr * &self.irr * BigRational::from_integer(BigInt::from(self.root));
        match lhs.cmp(&rhs) {
            Ordering::Greater => s_rat,
            Ordering::Less => s_irr,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Algebraic conjugate `rat - irr * sqrt(d)`.
    pub fn conjugate(&self) -> Scalar {
        Scalar::canonical(self.rat.clone(), -&self.irr, self.root)
    }

    /// Field norm `rat^2 - irr^2 * d`, always rational.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat
            - &self.irr * &self.irr * BigRational::from_integer(BigInt::from(self.root))
    }

    pub fn checked_recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Scalar::canonical(&self.rat / &n, -&self.irr / &n, self.root))
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Scalar {
        self.checked_recip().expect("division by zero scalar")
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.irr.is_zero() {
            return self.rat.floor().to_integer();
        }
        // irr * sqrt(d) = sign * sqrt(q) with q = irr^2 d rational and positive.
        let q = &self.irr * &self.irr * BigRational::from_integer(BigInt::from(self.root));
        let root_floor = q.floor().to_integer().sqrt();
        let irr_floor = if self.irr.is_positive() {
            root_floor
        } else {
            // -sqrt(q) floors to -ceil(sqrt(q)); sqrt(q) is irrational here.
            -(root_floor + BigInt::one())
        };
        let base = self.rat.floor().to_integer() + irr_floor;
        // The true floor is base or base + 1.
        let next = Scalar::from_bigint(&base + BigInt::one());
        if (self - &next).sign() >= 0 {
            base + BigInt::one()
        } else {
            base
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Nearest integer, rounding halves up.
    pub fn round(&self) -> BigInt {
        (self + &Scalar::ratio(1, 2)).floor()
    }

    /// Decimal rendering rounded to `digits` places. Display only.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = (self * &Scalar::from_bigint(scale.clone())).round();
        let negative = scaled.is_negative();
        let (int_part, frac_part) = scaled.abs().div_rem(&scale);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            let frac = frac_part.to_string();
            out.push('.');
            for _ in frac.len()..digits as usize {
                out.push('0');
            }
            out.push_str(&frac);
        }
        out
    }

    /// Approximate value, for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let r = self.rat.to_f64().unwrap_or(f64::NAN);
        if self.irr.is_zero() {
            return r;
        }
        r + self.irr.to_f64().unwrap_or(f64::NAN) * (self.root as f64).sqrt()
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other < self {
            other
        } else {
            self
        }
    }
}

fn rat_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl From<BigRational> for Scalar {
    fn from(rat: BigRational) -> Self {
        Scalar {
            rat,
            irr: BigRational::zero(),
            root: 0,
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from_bigint(n)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().cmp(&0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::canonical(-&self.rat, -&self.irr, self.root)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let root = join_root(self.root, rhs.root);
        Scalar::canonical(&self.rat + &rhs.rat, &self.irr + &rhs.irr, root)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let root = join_root(self.root, rhs.root);
        Scalar::canonical(&self.rat - &rhs.rat, &self.irr - &rhs.irr, root)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.irr.is_zero() && rhs.irr.is_zero() {
            return Scalar::from(&self.rat * &rhs.rat);
        }
        let root = join_root(self.root, rhs.root);
        let d = BigRational::from_integer(BigInt::from(root));
        let rat = &self.rat * &rhs.rat + &self.irr * &rhs.irr * d;
        let irr = &self.rat * &rhs.irr + &self.irr * &rhs.rat;
        Scalar::canonical(rat, irr, root)
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.recip()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            return write!(f, "{}", self.rat);
        }
        if self.rat.is_zero() {
            return write!(f, "{}*sqrt({})", self.irr, self.root);
        }
        if self.irr.is_negative() {
            write!(f, "{}-{}*sqrt({})", self.rat, -&self.irr, self.root)
        } else {
            write!(f, "{}+{}*sqrt({})", self.rat, self.irr, self.root)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parse failure inside a scalar token; `offset` is a byte offset into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarSyntaxError {
    pub offset: usize,
    pub message: String,
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn fail<T>(&self, message: impl Into<String>) -> std::result::Result<T, ScalarSyntaxError> {
        Err(ScalarSyntaxError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn digits(&mut self) -> std::result::Result<BigInt, ScalarSyntaxError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected digits");
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digit run parses"))
    }

    fn rat(&mut self) -> std::result::Result<BigRational, ScalarSyntaxError> {
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let num = self.digits()?;
        let den = if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            let den = self.digits()?;
            if den.is_zero() {
                return Err(ScalarSyntaxError {
                    offset: at,
                    message: "zero denominator".into(),
                });
            }
            den
        } else {
            BigInt::one()
        };
        let value = BigRational::new(num, den);
        Ok(if negative { -value } else { value })
    }

    fn sqrt_suffix(&mut self) -> std::result::Result<u64, ScalarSyntaxError> {
        const TAG: &[u8] = b"*sqrt(";
        if !self.text[self.pos..].starts_with(TAG) {
            return self.fail("expected '*sqrt('");
        }
        self.pos += TAG.len();
        let at = self.pos;
        let d = self.digits()?;
        if self.peek() != Some(b')') {
            return self.fail("expected ')'");
        }
        self.pos += 1;
        let d: u64 = match u64::try_from(d) {
            Ok(d) if is_square_free(d) => d,
            _ => {
                return Err(ScalarSyntaxError {
                    offset: at,
                    message: "radicand must be a square-free integer >= 2".into(),
                })
            }
        };
        Ok(d)
    }
}

/// Parse the scalar grammar `rat | rat ('+'|'-') rat '*sqrt(' d ')' | rat '*sqrt(' d ')'`.
pub fn parse_scalar(text: &str) -> std::result::Result<Scalar, ScalarSyntaxError> {
    let mut cur = Cursor {
        text: text.as_bytes(),
        pos: 0,
    };
    let first = cur.rat()?;
    let value = match cur.peek() {
        None => Scalar::from(first),
        Some(b'*') => {
            let d = cur.sqrt_suffix()?;
            Scalar::canonical(BigRational::zero(), first, d)
        }
        Some(op @ (b'+' | b'-')) => {
            cur.pos += 1;
            let mut second = cur.rat()?;
            if op == b'-' {
                second = -second;
            }
            let d = cur.sqrt_suffix()?;
            Scalar::canonical(first, second, d)
        }
        Some(_) => return cur.fail("unexpected character"),
    };
    if cur.pos != text.len() {
        return cur.fail("trailing characters");
    }
    Ok(value)
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_scalar(s.trim()).map_err(|e| Error::Parse {
            line: 0,
            column: e.offset + 1,
            message: e.message,
        })
    }
}
