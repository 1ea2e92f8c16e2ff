//! The two conjectured families of congruences with unknown integer
//! constants, and recovery of those constants from per-prime residues.
//!
//! Everything here stays on the exact path: for `r >= 2` and for the full
//! truncation `k` runs past `p`, so individual terms are not p-integral.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use rayon::prelude::*;

use crate::arith::{crt_lift, reduce_mod, sign_pow, vp, PrimePower, Rational};
use crate::error::{Error, Result};
use crate::report::{CongruenceReport, DiscoveryResult, Evidence};
use crate::series::{partial_sum, SumSpec, SummandFamily};

/// `C`: alternating cubes, `S ≡ c_m p^r (-1)^{(p-1)r/2} (mod p^{r+2})`.
/// `D`: fourth powers, `S ≡ d_m p^r (mod p^{r+3})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConjFamily {
    C,
    D,
}

impl ConjFamily {
    pub fn summand(self) -> SummandFamily {
        match self {
            ConjFamily::C => SummandFamily::A,
            ConjFamily::D => SummandFamily::B,
        }
    }

    /// Precision (beyond `p^r`) to which the constant is pinned per prime.
    pub fn residue_exponent(self) -> u32 {
        match self {
            ConjFamily::C => 2,
            ConjFamily::D => 3,
        }
    }

    /// The sign `(-1)^{(p-1)r/2}` attached to the right-hand side.
    fn sign(self, p: u64, r: u32) -> i64 {
        match self {
            ConjFamily::C => sign_pow((p - 1) / 2 * r as u64),
            ConjFamily::D => 1,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            ConjFamily::C => "c",
            ConjFamily::D => "d",
        }
    }

    /// Constants listed alongside the conjectures, by `m`.
    pub fn published(self) -> &'static [(u32, i64)] {
        match self {
            ConjFamily::C => &[(1, -1), (3, 3), (5, 23), (7, -5), (9, 1647), (11, -96973)],
            ConjFamily::D => &[
                (1, 0),
                (3, 0),
                (5, 16),
                (7, 80),
                (9, 192),
                (11, 640),
                (13, -3472),
                (15, 138480),
            ],
        }
    }
}

impl fmt::Display for ConjFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ConjFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "c" | "C" => Ok(ConjFamily::C),
            "d" | "D" => Ok(ConjFamily::D),
            _ => Err(format!("unknown conjecture family {s:?} (expected c or d)")),
        }
    }
}

/// Truncation point of the sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// `k <= (p^r + 1)/2`
    Half,
    /// `k <= p^r - 1`
    Full,
}

impl Variant {
    pub fn upper(self, p: u64, r: u32) -> u64 {
        let q = p.pow(r);
        match self {
            Variant::Half => q.div_ceil(2),
            Variant::Full => q - 1,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Variant::Half => "half",
            Variant::Full => "full",
        }
    }
}

fn validate(m: u32, p: u64, r: u32) -> Result<()> {
    if m.is_multiple_of(2) {
        return Err(Error::NotOdd(m as u64));
    }
    if r == 0 {
        return Err(Error::PreconditionViolated("r must be at least 1".into()));
    }
    PrimePower::new(p, 1).map_err(|_| Error::InvalidPrime(p))?;
    Ok(())
}

pub fn conj_sum(family: ConjFamily, m: u32, p: u64, r: u32, variant: Variant) -> Result<Rational> {
    validate(m, p, r)?;
    Ok(partial_sum(&SumSpec::new(
        family.summand(),
        m,
        variant.upper(p, r),
    )?))
}

fn conj_rhs(family: ConjFamily, p: u64, r: u32, constant: &BigInt) -> Rational {
    Rational::from_int(constant * BigInt::from(p).pow(r) * family.sign(p, r))
}

/// Checks the conjectured congruence for a given constant.
pub fn verify_conjecture(
    family: ConjFamily,
    m: u32,
    p: u64,
    r: u32,
    constant: &BigInt,
    variant: Variant,
) -> Result<CongruenceReport> {
    let lhs = conj_sum(family, m, p, r, variant)?;
    Ok(verify_sum(family, m, p, r, constant, variant, lhs))
}

fn verify_sum(
    family: ConjFamily,
    m: u32,
    p: u64,
    r: u32,
    constant: &BigInt,
    variant: Variant,
    lhs: Rational,
) -> CongruenceReport {
    let rhs = conj_rhs(family, p, r, constant);
    let id = format!("conj_{}_{}", family.tag(), variant.tag());
    CongruenceReport::new(id, p, lhs, rhs, r + family.residue_exponent())
        .with_m(m)
        .with_r(r)
}

fn residue_of_sum(family: ConjFamily, p: u64, r: u32, sum: &Rational) -> Result<(BigInt, BigInt)> {
    let v = vp(sum, p);
    if !v.at_least(r as i64) {
        return Err(Error::ValuationTooLow { p, r, valuation: v });
    }
    let scaled = sum.scale_pow(p, -(r as i64)) * Rational::from(family.sign(p, r));
    let pp = PrimePower::new(p, family.residue_exponent())?;
    Ok((reduce_mod(&scaled, pp)?, pp.modulus()))
}

/// The constant's residue modulo `p^2` (C) or `p^3` (D) implied by the sum
/// at `p`.
pub fn extract_residue(
    family: ConjFamily,
    m: u32,
    p: u64,
    r: u32,
    variant: Variant,
) -> Result<(BigInt, BigInt)> {
    let sum = conj_sum(family, m, p, r, variant)?;
    residue_of_sum(family, p, r, &sum)
}

/// Which truncations discovery runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariantSelection {
    Half,
    Full,
    Both,
}

impl VariantSelection {
    fn variants(self) -> &'static [Variant] {
        match self {
            VariantSelection::Half => &[Variant::Half],
            VariantSelection::Full => &[Variant::Full],
            VariantSelection::Both => &[Variant::Half, Variant::Full],
        }
    }
}

impl FromStr for VariantSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "half" => Ok(VariantSelection::Half),
            "full" => Ok(VariantSelection::Full),
            "both" => Ok(VariantSelection::Both),
            _ => Err(format!(
                "unknown variant {s:?} (expected half, full or both)"
            )),
        }
    }
}

fn lift(evidence: &[Evidence]) -> Result<BigInt> {
    let pairs: Vec<(BigInt, BigInt)> = evidence
        .iter()
        .map(|e| (e.residue.clone(), e.modulus.clone()))
        .collect();
    Ok(crt_lift(&pairs)?)
}

fn reproduces(constant: &BigInt, e: &Evidence) -> bool {
    (constant - &e.residue) % &e.modulus == BigInt::zero()
}

/// Symmetric lift of all residues except the one at `skip`.
fn lift_without(evidence: &[Evidence], skip: usize) -> Result<BigInt> {
    let rest: Vec<Evidence> = evidence
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, e)| e.clone())
        .collect();
    lift(&rest)
}

/// Recovers the constant for `(family, m)` from the residues at `primes`,
/// lifted by CRT in increasing prime order.
///
/// The result is `consistent` when at least two primes are used and every
/// prime's residue is predicted by the lift of the others. When it is not,
/// primes whose removal leaves such a self-consistent lift are reported as
/// outliers along with that lift.
pub fn discover_constant(
    family: ConjFamily,
    m: u32,
    primes: &[u64],
    r: u32,
    variants: VariantSelection,
) -> Result<DiscoveryResult> {
    if primes.is_empty() {
        return Err(Error::PreconditionViolated(
            "discovery needs at least one prime".into(),
        ));
    }
    let mut primes = primes.to_vec();
    primes.sort_unstable();
    if primes.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::PreconditionViolated(
            "primes must be distinct".into(),
        ));
    }
    if let Some(&p) = primes.iter().find(|&&p| p < 5) {
        return Err(Error::PrimeTooSmall {
            check: format!("discover_{family}"),
            p,
            min: 5,
        });
    }

    // per prime: residue for each requested variant
    let per_prime: Vec<Vec<(BigInt, BigInt)>> = primes
        .par_iter()
        .map(|&p| {
            variants
                .variants()
                .iter()
                .map(|&v| extract_residue(family, m, p, r, v))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::AtPrime {
                    p,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;

    let variants_agree =
        (variants == VariantSelection::Both).then(|| per_prime.iter().all(|rs| rs[0] == rs[1]));
    let evidence: Vec<Evidence> = primes
        .iter()
        .zip(&per_prime)
        .map(|(&p, rs)| Evidence {
            p,
            residue: rs[0].0.clone(),
            modulus: rs[0].1.clone(),
        })
        .collect();

    let constant = lift(&evidence)?;
    let predicted_by_rest =
        |i: usize| -> Result<bool> { Ok(reproduces(&lift_without(&evidence, i)?, &evidence[i])) };
    let mut consistent = evidence.len() >= 2;
    if consistent {
        for i in 0..evidence.len() {
            if !predicted_by_rest(i)? {
                consistent = false;
                break;
            }
        }
    }

    let (outliers, constant_without_outliers) = if consistent || evidence.len() < 3 {
        (Vec::new(), None)
    } else {
        find_outliers(&evidence)?
    };

    Ok(DiscoveryResult {
        family: family.tag().into(),
        m,
        r,
        constant,
        evidence,
        consistent,
        variants_agree,
        outliers,
        constant_without_outliers,
    })
}

/// Looks for a single prime whose exclusion leaves a constant that every
/// remaining prime reproduces, stable under dropping any further prime.
fn find_outliers(evidence: &[Evidence]) -> Result<(Vec<u64>, Option<BigInt>)> {
    let mut found: Vec<(u64, BigInt)> = Vec::new();
    for skip in 0..evidence.len() {
        let rest: Vec<Evidence> = evidence
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, e)| e.clone())
            .collect();
        let candidate = lift(&rest)?;
        let stable = (0..rest.len()).all(|i| {
            lift_without(&rest, i)
                .map(|c| c == candidate)
                .unwrap_or(false)
        });
        if stable {
            found.push((evidence[skip].p, candidate));
        }
    }
    // a unique self-consistent completion identifies the outlier
    match found.as_slice() {
        [(p, c)] => Ok((vec![*p], Some(c.clone()))),
        _ => Ok((Vec::new(), None)),
    }
}

/// Verifies a constant at every prime for the requested variants.
pub fn verify_constant_at(
    family: ConjFamily,
    m: u32,
    primes: &[u64],
    r: u32,
    constant: &BigInt,
    variants: VariantSelection,
) -> Result<Vec<CongruenceReport>> {
    let jobs: Vec<(u64, Variant)> = primes
        .iter()
        .flat_map(|&p| variants.variants().iter().map(move |&v| (p, v)))
        .collect();
    jobs.par_iter()
        .map(|&(p, v)| verify_conjecture(family, m, p, r, constant, v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn sums() {
        assert_eq!(
            conj_sum(ConjFamily::C, 1, 3, 1, Variant::Half).unwrap(),
            q("-327/512")
        );
        assert_eq!(
            conj_sum(ConjFamily::C, 1, 5, 1, Variant::Half).unwrap(),
            q("-2605/4096")
        );
        let d = conj_sum(ConjFamily::D, 3, 5, 1, Variant::Half).unwrap();
        assert!(vp(&d, 5).at_least(4));
        assert!(conj_sum(ConjFamily::C, 2, 5, 1, Variant::Half).is_err());
        assert!(conj_sum(ConjFamily::C, 1, 5, 0, Variant::Half).is_err());
        assert!(conj_sum(ConjFamily::C, 1, 15, 1, Variant::Half).is_err());
    }

    #[test]
    fn variant_limits() {
        assert_eq!(Variant::Half.upper(5, 1), 3);
        assert_eq!(Variant::Full.upper(5, 1), 4);
        assert_eq!(Variant::Half.upper(11, 2), 61);
        assert_eq!(Variant::Full.upper(11, 2), 120);
    }

    #[test]
    fn verify_examples() {
        let r = verify_conjecture(ConjFamily::C, 1, 3, 1, &b(-1), Variant::Half).unwrap();
        assert_eq!(&r.lhs - &r.rhs, q("-1863/512"));
        assert_eq!(r.achieved_valuation, 4);
        assert!(r.pass);
        assert_eq!(r.required_valuation, 3);
        assert!(
            verify_conjecture(ConjFamily::C, 5, 7, 1, &b(23), Variant::Half)
                .unwrap()
                .pass
        );
        let d = verify_conjecture(ConjFamily::D, 5, 5, 1, &b(16), Variant::Half).unwrap();
        assert!(d.pass);
        assert_eq!(d.required_valuation, 4);
        assert!(
            !verify_conjecture(ConjFamily::C, 5, 7, 1, &b(24), Variant::Half)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn residue_examples() {
        assert_eq!(
            extract_residue(ConjFamily::C, 1, 5, 1, Variant::Half).unwrap(),
            (b(24), b(25))
        );
        assert_eq!(
            extract_residue(ConjFamily::D, 1, 7, 1, Variant::Half).unwrap(),
            (b(0), b(343))
        );
        assert_eq!(
            extract_residue(ConjFamily::C, 3, 11, 1, Variant::Half).unwrap(),
            (b(3), b(121))
        );
    }

    #[test]
    fn valuation_too_low_is_reported() {
        let sum = Rational::frac(1, 3);
        assert!(matches!(
            residue_of_sum(ConjFamily::C, 7, 1, &sum),
            Err(Error::ValuationTooLow { p: 7, r: 1, .. })
        ));
    }

    #[test]
    fn small_discovery() {
        let primes = [5, 7, 11, 13, 17];
        let d = discover_constant(ConjFamily::C, 5, &primes, 1, VariantSelection::Both).unwrap();
        assert_eq!(d.constant, b(23));
        assert!(d.consistent);
        assert_eq!(d.variants_agree, Some(true));
        assert!(d.outliers.is_empty());

        let single = discover_constant(ConjFamily::C, 3, &[11], 1, VariantSelection::Half).unwrap();
        assert_eq!(single.constant, b(3));
        assert!(!single.consistent);

        assert!(discover_constant(ConjFamily::C, 3, &[], 1, VariantSelection::Half).is_err());
        assert!(discover_constant(ConjFamily::C, 3, &[3, 5], 1, VariantSelection::Half).is_err());
        assert!(discover_constant(ConjFamily::C, 3, &[5, 5], 1, VariantSelection::Half).is_err());
    }

    #[test]
    fn outlier_detection() {
        // residues consistent with 7 except a planted wrong one at 13
        let mk = |p: u64, c: i64| {
            let m = b(p as i64 * p as i64);
            Evidence {
                p,
                residue: ((b(c) % &m) + &m) % &m,
                modulus: m,
            }
        };
        let ev = vec![
            mk(5, 7),
            mk(7, 7),
            mk(11, 7),
            mk(13, 8),
            mk(17, 7),
            mk(19, 7),
        ];
        let (out, c) = find_outliers(&ev).unwrap();
        assert_eq!(out, vec![13]);
        assert_eq!(c, Some(b(7)));
    }
}
