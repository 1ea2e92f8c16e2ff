//! Exact rationals, p-adic valuations, congruences modulo prime powers and
//! symmetric CRT lifting.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::ArithError;

/// Arbitrary-precision signed rational, always held in lowest terms with a
/// positive denominator. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ArithError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self(BigRational::new(numer.into(), denom)))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    /// `numer / denom` for small literals. Panics on a zero denominator.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).expect("zero denominator")
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self(&self.0 / &rhs.0))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self(Pow::pow(&self.0, exp))
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    /// Multiplies by `p^e` for a possibly negative `e`.
    pub fn scale_pow(&self, p: u64, e: i64) -> Self {
        let factor = BigInt::from(p).pow(e.unsigned_abs() as u32);
        if e >= 0 {
            Self(&self.0 * BigRational::from_integer(factor))
        } else {
            Self(&self.0 / BigRational::from_integer(factor))
        }
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Rational {
    /// Always `num/den`, even for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ArithError::Parse(s.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rational::new(n, d)
            }
            None => Ok(Rational::from_int(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(v: $t) -> Self {
                Rational::from_int(v)
            }
        }
    )*};
}
from_int!(i32, i64, u32, u64, usize, BigInt);

macro_rules! binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl $assign_trait<&Rational> for Rational {
            fn $assign(&mut self, rhs: &Rational) {
                self.0.$assign(&rhs.0);
            }
        }
        impl $assign_trait<Rational> for Rational {
            fn $assign(&mut self, rhs: Rational) {
                self.0.$assign(rhs.0);
            }
        }
    };
}
binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

// Division panics on a zero divisor like the integer types do; use
// `checked_div` where the divisor is data-dependent.
impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        Rational(&self.0 / &rhs.0)
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// p-adic valuation. `Infinite` (the valuation of zero) orders above every
/// finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn at_least(self, t: i64) -> bool {
        self >= Valuation::Finite(t)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl PartialEq<i64> for Valuation {
    fn eq(&self, other: &i64) -> bool {
        *self == Valuation::Finite(*other)
    }
}

impl PartialOrd<i64> for Valuation {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.partial_cmp(&Valuation::Finite(*other))
    }
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n == b {
            return true;
        }
        if n.is_multiple_of(b) {
            return false;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primes in `lo..=hi` by a sieve of Eratosthenes.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        if i as u64 >= lo {
            out.push(i as u64);
        }
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Odd prime `p` together with an exponent `t >= 1`, standing for the
/// modulus `p^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u64,
    t: u32,
}

impl PrimePower {
    pub fn new(p: u64, t: u32) -> Result<Self, ArithError> {
        if p == 2 || !is_prime(p) {
            return Err(ArithError::NotOddPrime(p));
        }
        if t == 0 {
            return Err(ArithError::ZeroExponent);
        }
        Ok(Self { p, t })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.p).pow(self.t)
    }
}

fn vp_int(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(x)`; zero has infinite valuation.
pub fn vp(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    Valuation::Finite(vp_int(x.numer(), &p) - vp_int(x.denom(), &p))
}

/// `a ≡ b (mod p^t)` in the p-adic sense: `v_p(a - b) >= t`.
pub fn congruent(a: &Rational, b: &Rational, m: PrimePower) -> bool {
    vp(&(a - b), m.p).at_least(m.t as i64)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Image of `a` in `Z/p^tZ`, in `[0, p^t)`.
pub fn reduce_mod(a: &Rational, m: PrimePower) -> Result<BigInt, ArithError> {
    let modulus = m.modulus();
    let inv = mod_inverse(a.denom(), &modulus).ok_or(ArithError::NonInvertibleDenominator {
        p: m.p,
        denom: a.denom().clone(),
    })?;
    Ok((a.numer() * inv).mod_floor(&modulus))
}

/// Symmetric CRT lift: the unique `x` in `(-M/2, M/2]` with `x ≡ r_i (mod
/// m_i)` for every pair, where `M` is the product of the moduli. A tie at
/// exactly `M/2` takes the positive value.
pub fn crt_lift(residues: &[(BigInt, BigInt)]) -> Result<BigInt, ArithError> {
    let mut x = BigInt::zero();
    let mut big_m = BigInt::one();
    for (r, m) in residues {
        if !m.is_positive() || r.is_negative() || r >= m {
            return Err(ArithError::InconsistentInput(format!(
                "residue {r} not in [0, {m})"
            )));
        }
        let inv = mod_inverse(&big_m, m).ok_or_else(|| {
            ArithError::InconsistentInput(format!(
                "modulus {m} shares a factor with earlier moduli"
            ))
        })?;
        // x + M * ((r - x) * M^{-1} mod m)
        let step = ((r - &x) * inv).mod_floor(m);
        x += &big_m * step;
        big_m *= m;
    }
    if (&x * 2u32) > big_m {
        x -= &big_m;
    }
    Ok(x)
}

/// `(-1)^e` as an `i64`.
pub fn sign_pow(e: u64) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Word-sized arithmetic in `Z/p^tZ`, the fast path for sums whose terms
/// have p-free denominators.
#[derive(Clone, Copy, Debug)]
pub struct ModRing {
    pp: PrimePower,
    modulus: u64,
}

impl ModRing {
    pub fn new(pp: PrimePower) -> Result<Self, ArithError> {
        let modulus = pp
            .modulus()
            .to_u64()
            .filter(|&m| m < (1 << 63))
            .ok_or(ArithError::ModulusTooLarge { p: pp.p, t: pp.t })?;
        Ok(Self { pp, modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.modulus as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.modulus - b % self.modulus)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64, ArithError> {
        mod_inverse(&BigInt::from(a), &BigInt::from(self.modulus))
            .and_then(|x| x.to_u64())
            .ok_or(ArithError::NonInvertibleDenominator {
                p: self.pp.p,
                denom: BigInt::from(a),
            })
    }

    /// `num / den` in the ring.
    pub fn ratio(&self, num: i64, den: i64) -> Result<u64, ArithError> {
        Ok(self.mul(self.from_i64(num), self.inv(self.from_i64(den))?))
    }

    pub fn reduce(&self, a: &Rational) -> Result<u64, ArithError> {
        Ok(reduce_mod(a, self.pp)?
            .to_u64()
            .expect("residue below modulus"))
    }
}
