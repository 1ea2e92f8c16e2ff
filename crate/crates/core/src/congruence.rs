//! Named congruence checks. Each one evaluates an exact left-hand side, a
//! closed-form right-hand side, and records `v_p(lhs - rhs)` against the
//! claimed modulus.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Pow;

use crate::arith::{is_prime, sign_pow, ModRing, PrimePower, Rational};
use crate::error::{Error, Result};
use crate::report::CongruenceReport;
use crate::series::{
    partial_sum, partial_sum_mod, product_ratio, wz_f, wz_g, SumSpec, SummandFamily, WzPoint,
};
use crate::special::{binomial, euler_number, h2, pochhammer};

macro_rules! check_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum CheckId {
            $($variant),*
        }

        impl CheckId {
            pub const EVERY: &'static [CheckId] = &[$(CheckId::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name),*
                }
            }
        }

        impl FromStr for CheckId {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok(CheckId::$variant),)*
                    _ => Err(format!("unknown check id {s:?}")),
                }
            }
        }
    };
}

check_ids! {
    VanHamme => "van_hamme",
    SunRefinement => "sun_refinement",
    Thm1 => "thm1",
    Thm2 => "thm2",
    Thm3M3 => "thm3_m3",
    Thm3M5 => "thm3_m5",
    Thm3M7 => "thm3_m7",
    Gs0 => "gs0",
    LemmaSun1 => "lemma_sun1",
    LemmaSun1Printed => "lemma_sun1_printed",
    TailCongruence => "tail_congruence",
    BoundaryMod => "boundary_mod",
    H2Cong => "h2_cong",
    CombinedM3 => "combined_m3",
    CombinedM5 => "combined_m5",
    CombinedM7 => "combined_m7",
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl CheckId {
    /// Every check expected to pass. `lemma_sun1_printed` evaluates the
    /// misprinted `E_{p-1}` form of the lemma and is opt-in.
    pub fn defaults() -> Vec<CheckId> {
        Self::EVERY
            .iter()
            .copied()
            .filter(|&c| c != CheckId::LemmaSun1Printed)
            .collect()
    }

    /// Smallest prime with pass/fail semantics. Below it (only `p = 3`)
    /// rows are informational.
    pub fn min_prime(self) -> u64 {
        match self {
            CheckId::VanHamme | CheckId::Thm2 | CheckId::LemmaSun1 | CheckId::LemmaSun1Printed => 3,
            _ => 5,
        }
    }

    pub fn required_valuation(self) -> u32 {
        use CheckId::*;
        match self {
            VanHamme => 3,
            Thm2 => 2,
            Gs0 => 5,
            LemmaSun1 | LemmaSun1Printed | H2Cong => 1,
            SunRefinement | Thm1 | Thm3M3 | Thm3M5 | Thm3M7 | TailCongruence | BoundaryMod
            | CombinedM3 | CombinedM5 | CombinedM7 => 4,
        }
    }

    /// The truncated family sum forming the left side, when there is one.
    fn family_sum(self, p: u64) -> Option<SumSpec> {
        use CheckId::*;
        let (family, m, upper) = match self {
            VanHamme | SunRefinement => (SummandFamily::V, 1, (p - 1) / 2),
            Thm1 => (SummandFamily::A, 1, p.div_ceil(2)),
            Thm2 => (SummandFamily::A, 3, p.div_ceil(2)),
            Thm3M3 | CombinedM3 => (SummandFamily::B, 3, p.div_ceil(2)),
            Thm3M5 | CombinedM5 => (SummandFamily::B, 5, p.div_ceil(2)),
            Thm3M7 | CombinedM7 => (SummandFamily::B, 7, p.div_ceil(2)),
            Gs0 => (SummandFamily::B, 1, p.div_ceil(2)),
            _ => return None,
        };
        Some(SumSpec::new(family, m, upper).expect("odd weight"))
    }
}

/// Which Euler number `lemma_sun1` is read with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EulerReading {
    /// `E_{p-3}`, as the lemma is applied in the proof.
    Applied,
    /// `E_{p-1}`, as the lemma is printed.
    Printed,
}

fn validate_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_int(v.into())
}

fn pow_p(p: u64, e: u32) -> Rational {
    int(BigInt::from(p).pow(e))
}

/// `sum_{k=1}^{(p-1)/2} 4^k / ((2k-1) C(2k,k))`.
pub fn sun_lemma_sum(p: u64) -> Rational {
    (1..=(p - 1) / 2)
        .map(|k| {
            int(BigInt::from(4).pow(k as u32)) / (int(2 * k as i64 - 1) * int(binomial(2 * k, k)))
        })
        .sum()
}

/// `E - 1 + (-1)^{(p-1)/2}` with `E` per `reading`.
pub fn sun_lemma_rhs(p: u64, reading: EulerReading) -> Rational {
    let e = match reading {
        EulerReading::Applied => euler_number(p - 3),
        EulerReading::Printed => euler_number(p - 1),
    };
    int(e - 1 + sign_pow((p - 1) / 2))
}

pub fn check_lemma_sun1(p: u64, reading: EulerReading) -> Result<CongruenceReport> {
    let id = match reading {
        EulerReading::Applied => CheckId::LemmaSun1,
        EulerReading::Printed => CheckId::LemmaSun1Printed,
    };
    check(id, p)
}

fn sides(id: CheckId, p: u64) -> (Rational, Rational) {
    use CheckId::*;
    let s = sign_pow((p - 1) / 2);
    let pr = int(p);
    let lhs = || match id.family_sum(p) {
        Some(spec) => partial_sum(&spec),
        None => unreachable!("{id} has no family sum"),
    };
    match id {
        VanHamme => (lhs(), int(s * p as i64)),
        SunRefinement => (
            lhs(),
            int(s * p as i64) + pow_p(p, 3) * int(euler_number(p - 3)),
        ),
        Thm1 => (
            lhs(),
            int(-s * p as i64) + pow_p(p, 3) * int(2 - euler_number(p - 3)),
        ),
        Thm2 => (lhs(), int(3 * s * p as i64)),
        Thm3M3 => (lhs(), Rational::zero()),
        Thm3M5 => (lhs(), int(16 * p)),
        Thm3M7 => (lhs(), int(80 * p)),
        Gs0 => (lhs(), -int(5) * pow_p(p, 4)),
        LemmaSun1 => (sun_lemma_sum(p), sun_lemma_rhs(p, EulerReading::Applied)),
        LemmaSun1Printed => (sun_lemma_sum(p), sun_lemma_rhs(p, EulerReading::Printed)),
        TailCongruence => {
            let half = p.div_ceil(2);
            let tail: Rational = (1..=half).map(|k| wz_g(WzPoint::new(half + 1, k))).sum();
            let p3 = pow_p(p, 3);
            let rhs = &p3 - &p3 * int(euler_number(p - 3) - 1 + s);
            (tail, rhs)
        }
        BoundaryMod => {
            let half = p.div_ceil(2);
            (wz_f(WzPoint::new(half, half)), int(s) * (pow_p(p, 3) - &pr))
        }
        H2Cong => (h2(p.div_ceil(2)), int(4)),
        CombinedM3 | CombinedM5 | CombinedM7 => {
            let m = match id {
                CombinedM3 => 3,
                CombinedM5 => 5,
                _ => 7,
            };
            let table = Table1::new(m).expect("m in {3,5,7}");
            let n = p.div_ceil(2);
            (lhs(), table.f(n) - pow_p(p, 2) * table.g(n))
        }
    }
}

/// Runs `id` at `p`. Primes below the check's floor are refused.
pub fn check(id: CheckId, p: u64) -> Result<CongruenceReport> {
    check_with(id, p, false)
}

/// Like [`check`], but with `allow_informational` a prime below the floor
/// is evaluated and the report is flagged informational instead of erroring.
pub fn check_with(id: CheckId, p: u64, allow_informational: bool) -> Result<CongruenceReport> {
    validate_prime(p)?;
    let below_floor = p < id.min_prime();
    if below_floor && !allow_informational {
        return Err(Error::PrimeTooSmall {
            check: id.as_str().into(),
            p,
            min: id.min_prime(),
        });
    }
    let (lhs, rhs) = sides(id, p);
    let mut report = CongruenceReport::new(id.as_str(), p, lhs, rhs, id.required_valuation());
    if let Some(spec) = id.family_sum(p) {
        report = report.with_m(spec.m());
    }
    Ok(if below_floor {
        report.into_informational()
    } else {
        report
    })
}

/// Residues of both sides in `Z/p^tZ`, `t` the check's required valuation.
/// Family sums are accumulated term by term in the ring; everything else is
/// the exact value reduced once.
pub fn fast_residues(id: CheckId, p: u64) -> Result<(u64, u64)> {
    validate_prime(p)?;
    let ring = ModRing::new(PrimePower::new(p, id.required_valuation())?)?;
    let (exact_lhs, rhs) = sides(id, p);
    let lhs = match id.family_sum(p) {
        Some(spec) => partial_sum_mod(&spec, &ring)?,
        None => ring.reduce(&exact_lhs)?,
    };
    Ok((lhs, ring.reduce(&rhs)?))
}

/// `(-1)^{(p+1)/2+k} 2 (1/2)_{(p+1)/2}^2 (1/2)_{(p-1)/2+k} / ((1)_{(p-1)/2}^2 (1)_{(p+1)/2-k} (1/2)_k^2)`
/// against `p^3 4^k / (2k(2k-1) C(2k,k))` modulo `p^4`.
pub fn check_lemma_sun3(p: u64, k: u64) -> Result<CongruenceReport> {
    validate_prime(p)?;
    if p < 5 {
        return Err(Error::PrimeTooSmall {
            check: "lemma_sun3".into(),
            p,
            min: 5,
        });
    }
    let hi = (p - 1) / 2;
    if k < 1 || k > hi {
        return Err(Error::IndexOutOfRange {
            index: k as i64,
            lo: 1,
            hi: hi as i64,
        });
    }
    let half = Rational::frac(1, 2);
    let a = pochhammer(&half, p.div_ceil(2));
    let num = int(2 * sign_pow(p.div_ceil(2) + k)) * &a * &a * pochhammer(&half, hi + k);
    let f = int(crate::special::factorial(hi));
    let pk = pochhammer(&half, k);
    let den = &f * &f * int(crate::special::factorial(p.div_ceil(2) - k)) * &pk * &pk;
    let lhs = num / den;
    let rhs = pow_p(p, 3) * int(BigInt::from(4).pow(k as u32))
        / (int(2 * k) * int(2 * k as i64 - 1) * int(binomial(2 * k, k)));
    Ok(CongruenceReport::new(
        format!("lemma_sun3_k{k}"),
        p,
        lhs,
        rhs,
        4,
    ))
}

/// `prod_{j=1}^k ((2j-3)^2 - p^2)/((2j)^2 - p^2)` against its expansion to
/// order `p^2` (`order = 2`) or `p^4` (`order = 4`).
pub fn check_ratio_expansion(p: u64, k: u64, order: u32) -> Result<CongruenceReport> {
    validate_prime(p)?;
    if order != 2 && order != 4 {
        return Err(Error::PreconditionViolated(format!(
            "order must be 2 or 4, got {order}"
        )));
    }
    let hi = p.div_ceil(2);
    if k > hi {
        return Err(Error::IndexOutOfRange {
            index: k as i64,
            lo: 0,
            hi: hi as i64,
        });
    }
    let lead = pochhammer(&Rational::frac(-1, 2), k) / int(crate::special::factorial(k));
    let lead = &lead * &lead;
    let rhs = if order == 2 {
        lead
    } else {
        let corr: Rational = (1..=k as i64)
            .map(|j| Rational::frac(1, (2 * j).pow(2)) - Rational::frac(1, (2 * j - 3).pow(2)))
            .sum();
        lead * (Rational::one() + pow_p(p, 2) * corr)
    };
    Ok(CongruenceReport::new(
        format!("ratio_expansion_o{order}_k{k}"),
        p,
        product_ratio(p, k),
        rhs,
        order,
    ))
}

/// Closed forms `f_m(n)` and `g_m(n)` for `m` in {3, 5, 7}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Table1 {
    m: u32,
}

fn poly(coeffs_high_first: &[i64], n: &Rational) -> Rational {
    coeffs_high_first
        .iter()
        .fold(Rational::zero(), |acc, &c| acc * n + int(c))
}

impl Table1 {
    pub fn new(m: u32) -> Result<Self> {
        match m {
            3 | 5 | 7 => Ok(Self { m }),
            _ => Err(Error::PreconditionViolated(format!(
                "closed forms exist for m in {{3,5,7}}, got {m}"
            ))),
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn f(&self, n: u64) -> Rational {
        let x = int(n);
        let base = int(-64) * &x * (&x - int(1)) * (int(2) * &x - int(1));
        match self.m {
            3 => Rational::zero(),
            5 => base,
            _ => base * poly(&[24, -24, 11], &x),
        }
    }

    /// Part of `g_m(n)` not multiplying `H_n^{(2)}`.
    pub fn g_rational_part(&self, n: u64) -> Rational {
        let x = int(n);
        let den = int(4) * &x * &x * (&x - int(1)) * (&x - int(1));
        let two_n_minus_1 = int(2) * &x - int(1);
        let num = match self.m {
            3 => &two_n_minus_1 * &two_n_minus_1 * poly(&[7, -7, 1], &x),
            5 => two_n_minus_1 * poly(&[256, -640, 320, 414, -493, 145, -1], &x),
            _ => {
                two_n_minus_1
                    * poly(
                        &[6144, -21504, 24320, -1920, -18496, 17582, -7557, 1433, -1],
                        &x,
                    )
            }
        };
        num / den
    }

    /// Coefficient of `H_n^{(2)}` in `g_m(n)`.
    pub fn g_h2_coefficient(&self, n: u64) -> Rational {
        let x = int(n);
        let base = int(32) * &x * (&x - int(1)) * (int(2) * &x - int(1));
        match self.m {
            3 => Rational::zero(),
            5 => base,
            _ => base * poly(&[24, -24, 11], &x),
        }
    }

    pub fn g(&self, n: u64) -> Rational {
        self.g_rational_part(n) + self.g_h2_coefficient(n) * h2(n)
    }
}

/// Summands `(4k-1)^m (-1/2)_k^2 (-n)_k (n-1)_k / ((1)_k^2 (n+1/2)_k (3/2-n)_k)`
/// for `k = 0..=n`.
fn lemma_terms(m: u32, n: u64) -> Vec<Rational> {
    let nn = n as i64;
    let mut ratio = Rational::one();
    let mut out = Vec::with_capacity(n as usize + 1);
    for k in 0..=nn {
        out.push(int(4 * k - 1).pow(m) * &ratio);
        let step = Rational::frac(2 * k - 1, 2).pow(2) * int(k - nn) * int(nn - 1 + k)
            / (int(k + 1).pow(2)
                * Rational::frac(2 * nn + 1 + 2 * k, 2)
                * Rational::frac(3 - 2 * nn + 2 * k, 2));
        ratio *= step;
    }
    out
}

fn lemma_guard(m: u32, n: u64) -> Result<Table1> {
    if n < 2 {
        return Err(Error::PreconditionViolated(format!(
            "lemma needs n >= 2, got {n}"
        )));
    }
    Table1::new(m)
}

pub fn lemma_f_sum(m: u32, n: u64) -> Rational {
    lemma_terms(m, n).into_iter().sum()
}

/// The same summands weighted by `sum_{j=1}^k (1/(4j^2) - 1/(2j-3)^2)`.
pub fn lemma_g_sum(m: u32, n: u64) -> Rational {
    let mut weight = Rational::zero();
    let mut sum = Rational::zero();
    for (k, t) in lemma_terms(m, n).into_iter().enumerate() {
        let j = k as i64;
        if j >= 1 {
            weight += Rational::frac(1, 4 * j * j) - Rational::frac(1, (2 * j - 3).pow(2));
        }
        sum += t * &weight;
    }
    sum
}

/// Exact equality of the first summation identity with `f_m(n)`.
pub fn check_lemma_f(m: u32, n: u64) -> Result<bool> {
    let table = lemma_guard(m, n)?;
    Ok(lemma_f_sum(m, n) == table.f(n))
}

/// Exact equality of the weighted summation identity with `g_m(n)`.
pub fn check_lemma_g(m: u32, n: u64) -> Result<bool> {
    let table = lemma_guard(m, n)?;
    Ok(lemma_g_sum(m, n) == table.g(n))
}
