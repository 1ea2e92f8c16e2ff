//! Exact evaluation of the truncated hypergeometric sums, the WZ pair behind
//! the `(4k-1)` supercongruence, and terminating instances of Whipple's
//! `6F5(-1)` to `3F2(1)` transformation.

use std::fmt;
use std::str::FromStr;

use crate::arith::{sign_pow, ModRing, Rational};
use crate::error::{ArithError, Error, Result};
use crate::special::{binomial, inv_pochhammer_int, pochhammer};

/// Which summand a truncated sum uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SummandFamily {
    /// `(-1)^k (4k-1)^m (-1/2)_k^3 / k!^3`
    A,
    /// `(4k-1)^m (-1/2)_k^4 / k!^4`
    B,
    /// `(-1)^k (4k+1)^m (1/2)_k^3 / k!^3`
    V,
}

impl SummandFamily {
    fn alternating(self) -> bool {
        matches!(self, SummandFamily::A | SummandFamily::V)
    }

    fn power(self) -> u32 {
        match self {
            SummandFamily::A | SummandFamily::V => 3,
            SummandFamily::B => 4,
        }
    }

    /// Numerator and denominator of `(base + i) / (i + 1)` scaled by 2.
    fn ratio_step(self, i: u64) -> (i64, i64) {
        let i = i as i64;
        match self {
            SummandFamily::A | SummandFamily::B => (2 * i - 1, 2 * i + 2),
            SummandFamily::V => (2 * i + 1, 2 * i + 2),
        }
    }

    /// `4k - 1` or `4k + 1`.
    fn weight_base(self, k: u64) -> i64 {
        match self {
            SummandFamily::A | SummandFamily::B => 4 * k as i64 - 1,
            SummandFamily::V => 4 * k as i64 + 1,
        }
    }
}

impl fmt::Display for SummandFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SummandFamily::A => "A",
            SummandFamily::B => "B",
            SummandFamily::V => "V",
        })
    }
}

impl FromStr for SummandFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(SummandFamily::A),
            "B" | "b" => Ok(SummandFamily::B),
            "V" | "v" => Ok(SummandFamily::V),
            _ => Err(format!("unknown summand family {s:?}")),
        }
    }
}

/// A truncated sum `sum_{k=0}^{upper} term(k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SumSpec {
    family: SummandFamily,
    m: u32,
    upper: u64,
}

impl SumSpec {
    pub fn new(family: SummandFamily, m: u32, upper: u64) -> Result<Self> {
        if m.is_multiple_of(2) {
            return Err(Error::NotOdd(m as u64));
        }
        Ok(Self { family, m, upper })
    }

    pub fn family(&self) -> SummandFamily {
        self.family
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn upper(&self) -> u64 {
        self.upper
    }
}

fn base_ratio(family: SummandFamily, k: u64) -> Rational {
    (0..k)
        .map(|i| {
            let (n, d) = family.ratio_step(i);
            Rational::frac(n, d)
        })
        .product()
}

fn assemble(family: SummandFamily, m: u32, k: u64, base: &Rational) -> Rational {
    let mut t = base.pow(family.power()) * Rational::from(family.weight_base(k)).pow(m);
    if family.alternating() && k % 2 == 1 {
        t = -t;
    }
    t
}

/// The `k`-th summand of the family, exactly.
pub fn term_value(spec: &SumSpec, k: u64) -> Rational {
    assemble(spec.family, spec.m, k, &base_ratio(spec.family, k))
}

/// `sum_{k=0}^{upper}` of the family's summand.
pub fn partial_sum(spec: &SumSpec) -> Rational {
    let mut base = Rational::one();
    let mut sum = Rational::zero();
    for k in 0..=spec.upper {
        sum += assemble(spec.family, spec.m, k, &base);
        let (n, d) = spec.family.ratio_step(k);
        base *= Rational::frac(n, d);
    }
    sum
}

/// The same sum evaluated in `Z/p^tZ`. Fails with
/// `NonInvertibleDenominator` once a term's denominator picks up `p`, which
/// first happens at `k = p` (from `k!`).
pub fn partial_sum_mod(spec: &SumSpec, ring: &ModRing) -> Result<u64, ArithError> {
    let mut num = 1u64;
    let mut den = 1u64;
    let mut sum = 0u64;
    let power = spec.family.power() as u64;
    for k in 0..=spec.upper {
        let base = ring.mul(num, ring.inv(den)?);
        let w = ring.pow(ring.from_i64(spec.family.weight_base(k)), spec.m as u64);
        let t = ring.mul(ring.pow(base, power), w);
        sum = if spec.family.alternating() && k % 2 == 1 {
            ring.sub(sum, t)
        } else {
            ring.add(sum, t)
        };
        let (n, d) = spec.family.ratio_step(k);
        num = ring.mul(num, ring.from_i64(n));
        den = ring.mul(den, ring.from_i64(d));
    }
    Ok(sum)
}

/// Grid point of the WZ pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WzPoint {
    pub n: u64,
    pub k: u64,
}

impl WzPoint {
    pub fn new(n: u64, k: u64) -> Self {
        Self { n, k }
    }
}

fn neg_half() -> Rational {
    Rational::frac(-1, 2)
}

/// `F(n,k) = (-1)^{n+k} (4n-1) (-1/2)_n^2 (-1/2)_{n+k} / ((1)_n^2 (1)_{n-k} (-1/2)_k^2)`,
/// zero for `k > n`.
pub fn wz_f(pt: WzPoint) -> Rational {
    let WzPoint { n, k } = pt;
    let cut = inv_pochhammer_int(n as i64 - k as i64);
    if cut.is_zero() {
        return cut;
    }
    let h = neg_half();
    let pn = pochhammer(&h, n);
    let pk = pochhammer(&h, k);
    let sign = sign_pow(n + k);
    let num = Rational::from(sign * (4 * n as i64 - 1)) * &pn * &pn * pochhammer(&h, n + k);
    let inv_n = inv_pochhammer_int(n as i64);
    num * &inv_n * &inv_n * cut / (&pk * &pk)
}

/// `G(n,k) = (-1)^{n+k} 2 (-1/2)_n^2 (-1/2)_{n+k-1} / ((1)_{n-1}^2 (1)_{n-k} (-1/2)_k^2)`,
/// zero for `n = 0` or `k > n`.
pub fn wz_g(pt: WzPoint) -> Rational {
    let WzPoint { n, k } = pt;
    let inv_prev = inv_pochhammer_int(n as i64 - 1);
    let cut = inv_pochhammer_int(n as i64 - k as i64);
    if inv_prev.is_zero() || cut.is_zero() {
        return Rational::zero();
    }
    let h = neg_half();
    let pn = pochhammer(&h, n);
    let pk = pochhammer(&h, k);
    let num = Rational::from(2 * sign_pow(n + k)) * &pn * &pn * pochhammer(&h, n + k - 1);
    num * &inv_prev * &inv_prev * cut / (&pk * &pk)
}

/// `F(n,k-1) - F(n,k) == G(n+1,k) - G(n,k)`, exactly.
pub fn check_wz_relation(pt: WzPoint) -> Result<bool> {
    if pt.k == 0 {
        return Err(Error::PreconditionViolated(
            "WZ relation needs k >= 1".into(),
        ));
    }
    let WzPoint { n, k } = pt;
    let left = wz_f(WzPoint::new(n, k - 1)) - wz_f(pt);
    let right = wz_g(WzPoint::new(n + 1, k)) - wz_g(pt);
    Ok(left == right)
}

fn require_odd(p: u64) -> Result<()> {
    if p.is_multiple_of(2) {
        return Err(Error::NotOdd(p));
    }
    if p < 3 {
        return Err(Error::PreconditionViolated(format!(
            "need odd p >= 3, got {p}"
        )));
    }
    Ok(())
}

/// Both sides of the telescoped identity
/// `sum_{n=0}^{(p+1)/2} F(n,0) = F((p+1)/2,(p+1)/2) + sum_{k=1}^{(p+1)/2} G((p+3)/2,k)`.
pub fn telescoped_sides(p: u64) -> Result<(Rational, Rational)> {
    require_odd(p)?;
    let half = p.div_ceil(2);
    let left: Rational = (0..=half).map(|n| wz_f(WzPoint::new(n, 0))).sum();
    let tail: Rational = (1..=half).map(|k| wz_g(WzPoint::new(half + 1, k))).sum();
    Ok((left, wz_f(WzPoint::new(half, half)) + tail))
}

pub fn check_telescoped_identity(p: u64) -> Result<bool> {
    let (l, r) = telescoped_sides(p)?;
    Ok(l == r)
}

/// `(F((p+1)/2,(p+1)/2), -2p(2p+1) C(2p,p) C(p-1,(p-1)/2) / (4^p (p+1)^2))`.
/// The identity is algebraic in odd `p`; primality is not required.
pub fn boundary_closed_form(p: u64) -> Result<(Rational, Rational)> {
    require_odd(p)?;
    let half = p.div_ceil(2);
    let direct = wz_f(WzPoint::new(half, half));
    let num = Rational::from(-2 * p as i64 * (2 * p as i64 + 1))
        * Rational::from(binomial(2 * p, p))
        * Rational::from(binomial(p - 1, (p - 1) / 2));
    let den = Rational::from(4).pow(p as u32) * Rational::from((p + 1) * (p + 1));
    Ok((direct, num / den))
}

/// `sum_{k=0}^{terms-1} prod(a_i)_k / (k! prod(b_j)_k) z^k`, refusing any
/// vanishing lower Pochhammer symbol within range.
pub fn hypergeometric_partial(
    upper: &[Rational],
    lower: &[Rational],
    z: &Rational,
    terms: u64,
) -> Result<Rational> {
    for b in lower {
        for i in 0..terms.saturating_sub(1) {
            if (b + Rational::from(i)).is_zero() {
                return Err(Error::ParameterSingularity(format!(
                    "lower parameter {b} hits zero at shift {i}"
                )));
            }
        }
    }
    let mut term = Rational::one();
    let mut sum = Rational::zero();
    for k in 0..terms {
        sum += &term;
        if term.is_zero() || k + 1 == terms {
            break;
        }
        let kk = Rational::from(k);
        let num: Rational = upper.iter().map(|a| a + &kk).product();
        let den: Rational =
            lower.iter().map(|b| b + &kk).product::<Rational>() * Rational::from(k + 1);
        term = term * num * z / den;
    }
    Ok(sum)
}

/// Both sides of Whipple's transformation with `e = -N`:
/// the `6F5(-1)` sum and `((1+a)_N / (1+a-d)_N) * 3F2(1)`.
pub fn whipple_sides(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
    big_n: u64,
) -> Result<(Rational, Rational)> {
    let one = Rational::one();
    let e = -Rational::from(big_n);
    let half_a = a * &Rational::frac(1, 2);
    if big_n > 0 && half_a.is_zero() {
        return Err(Error::ParameterSingularity("a/2 = 0".into()));
    }
    let terms = big_n + 1;
    let lhs = hypergeometric_partial(
        &[
            a.clone(),
            &one + &half_a,
            b.clone(),
            c.clone(),
            d.clone(),
            e.clone(),
        ],
        &[
            half_a.clone(),
            &one + a - b,
            &one + a - c,
            &one + a - d,
            &one + a - &e,
        ],
        &-Rational::one(),
        terms,
    )?;
    let f32 = hypergeometric_partial(
        &[&one + a - b - c, d.clone(), e.clone()],
        &[&one + a - b, &one + a - c],
        &Rational::one(),
        terms,
    )?;
    let prefactor_den = pochhammer(&(&one + a - d), big_n);
    if prefactor_den.is_zero() {
        return Err(Error::ParameterSingularity("(1+a-d)_N = 0".into()));
    }
    let prefactor = pochhammer(&(&one + a), big_n) / prefactor_den;
    Ok((lhs, prefactor * f32))
}

pub fn whipple_terminating(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
    big_n: u64,
) -> Result<bool> {
    let (l, r) = whipple_sides(a, b, c, d, big_n)?;
    Ok(l == r)
}

/// `3F2[-1, d, e; lower, lower; 1] = 1 - d e / lower^2`.
pub fn f32_top_minus_one(d: &Rational, e: &Rational, lower: &Rational) -> Result<Rational> {
    if lower.is_zero() {
        return Err(ArithError::DivisionByZero.into());
    }
    Ok(Rational::one() - d * e / (lower * lower))
}

/// `((-1-p)/2)_k ((-1+p)/2)_k / ((1+p/2)_k (1-p/2)_k)` through Pochhammer
/// symbols.
pub fn product_ratio_pochhammer(p: u64, k: u64) -> Rational {
    let p = p as i64;
    let num = pochhammer(&Rational::frac(-1 - p, 2), k) * pochhammer(&Rational::frac(-1 + p, 2), k);
    let den = pochhammer(&Rational::frac(2 + p, 2), k) * pochhammer(&Rational::frac(2 - p, 2), k);
    num / den
}

/// The same ratio as `prod_{j=1}^k ((2j-3)^2 - p^2) / ((2j)^2 - p^2)`.
pub fn product_ratio(p: u64, k: u64) -> Rational {
    let p2 = (p * p) as i64;
    (1..=k as i64)
        .map(|j| Rational::frac((2 * j - 3).pow(2) - p2, (2 * j).pow(2) - p2))
        .product()
}
