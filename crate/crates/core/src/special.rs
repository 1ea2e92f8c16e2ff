//! Pochhammer symbols, binomials, second-order harmonic numbers, Euler
//! numbers, the half-shift gamma ratio, and the Wolstenholme and Morley
//! congruences.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::arith::{is_prime, sign_pow, Rational};
use crate::error::{Error, Result};
use crate::report::CongruenceReport;

/// Rising factorial `(a)_k = a(a+1)...(a+k-1)`.
pub fn pochhammer(a: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut x = a.clone();
    let one = Rational::one();
    for _ in 0..k {
        acc *= &x;
        x += &one;
    }
    acc
}

/// `1/(1)_m = 1/m!`, and `0` for negative `m`.
///
/// The zero convention is what makes the WZ pair vanish outside its
/// support, so both `F` and `G` route through here.
pub fn inv_pochhammer_int(m: i64) -> Rational {
    if m < 0 {
        return Rational::zero();
    }
    Rational::from_int(factorial(m as u64))
        .recip()
        .expect("factorial is nonzero")
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        // exact at every step: acc = C(n, i) before, C(n, i + 1) after
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `H_n^{(2)} = sum_{j=1}^n 1/j^2`.
pub fn h2(n: u64) -> Rational {
    (1..=n).map(|j| Rational::frac(1, (j * j) as i64)).sum()
}

/// Even-index Euler numbers `E_0, E_2, ..., E_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerTable {
    max_index: u64,
    values: Vec<BigInt>,
}

impl EulerTable {
    pub fn max_index(&self) -> u64 {
        self.max_index
    }

    /// `E_0, E_2, ...` in order.
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// `E_n` for any `n <= max_index`; odd indices give zero.
    pub fn get(&self, n: u64) -> Option<BigInt> {
        if n > self.max_index {
            return None;
        }
        if n % 2 == 1 {
            return Some(BigInt::zero());
        }
        Some(self.values[(n / 2) as usize].clone())
    }
}

/// Euler numbers up to `max_index` (rounded down to even) from
/// `sum_{k=0}^{n/2} C(n, 2k) E_{2k} = 0` for even `n >= 2`.
pub fn euler_numbers(max_index: u64) -> EulerTable {
    let max_index = max_index - max_index % 2;
    let mut values: Vec<BigInt> = Vec::with_capacity((max_index / 2 + 1) as usize);
    values.push(BigInt::one());
    for half in 1..=max_index / 2 {
        let n = 2 * half;
        let s: BigInt = values
            .iter()
            .enumerate()
            .map(|(k, e)| binomial(n, 2 * k as u64) * e)
            .sum();
        values.push(-s);
    }
    EulerTable { max_index, values }
}

/// `E_n` alone.
pub fn euler_number(n: u64) -> BigInt {
    euler_numbers(n).get(n).expect("n within table")
}

/// `Γ(1+p/2)Γ(1-p/2) / (Γ(1/2)Γ(3/2))` for odd `p >= 3`, reduced by
/// `Γ(x+1) = xΓ(x)` to `(3/2)_h / (1-p/2)_h` with `h = (p-1)/2`.
pub fn gamma_ratio_half_shift(p: u64) -> Result<Rational> {
    if p.is_multiple_of(2) {
        return Err(Error::NotOdd(p));
    }
    if p < 3 {
        return Err(Error::PreconditionViolated(format!(
            "gamma ratio needs p >= 3, got {p}"
        )));
    }
    let h = (p - 1) / 2;
    let num = pochhammer(&Rational::frac(3, 2), h);
    let den = pochhammer(&(Rational::one() - Rational::frac(p as i64, 2)), h);
    Ok(num.checked_div(&den)?)
}

fn require_prime_above_3(p: u64) -> Result<()> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

/// `C(2p, p) ≡ 2 (mod p^3)` for primes `p > 3`.
pub fn check_wolstenholme(p: u64) -> Result<CongruenceReport> {
    require_prime_above_3(p)?;
    Ok(CongruenceReport::new(
        "wolstenholme",
        p,
        binomial(2 * p, p).into(),
        Rational::from(2),
        3,
    ))
}

/// `C(p-1, (p-1)/2) ≡ (-1)^{(p-1)/2} 4^{p-1} (mod p^3)` for primes `p > 3`.
pub fn check_morley(p: u64) -> Result<CongruenceReport> {
    require_prime_above_3(p)?;
    let h = (p - 1) / 2;
    let rhs = BigInt::from(sign_pow(h)) * BigInt::from(4).pow(p - 1);
    Ok(CongruenceReport::new(
        "morley",
        p,
        binomial(p - 1, h).into(),
        rhs.into(),
        3,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{primes_in_range, vp};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&q("-7/3"), 0), Rational::one());
        assert_eq!(pochhammer(&Rational::one(), 4), Rational::from(24));
        assert_eq!(pochhammer(&q("-1/2"), 2), q("-1/4"));
        assert_eq!(pochhammer(&q("-2"), 3), Rational::zero());
    }

    #[test]
    fn inverse_factorial_convention() {
        assert_eq!(inv_pochhammer_int(-1), Rational::zero());
        assert_eq!(inv_pochhammer_int(-5), Rational::zero());
        assert_eq!(inv_pochhammer_int(0), Rational::one());
        assert_eq!(inv_pochhammer_int(3), q("1/6"));
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(h2(0), Rational::zero());
        assert_eq!(h2(1), Rational::one());
        assert_eq!(h2(2), q("5/4"));
        assert_eq!(h2(3), q("49/36"));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 5), BigInt::from(252));
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(3, 5), BigInt::zero());
        for n in 0..30u64 {
            for k in 0..=n {
                assert_eq!(
                    binomial(n, k),
                    factorial(n) / (factorial(k) * factorial(n - k))
                );
            }
        }
    }

    #[test]
    fn euler_examples() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(euler_numbers(0).values(), ints(&[1]).as_slice());
        assert_eq!(euler_numbers(4).values(), ints(&[1, -1, 5]).as_slice());
        assert_eq!(euler_numbers(6).values(), ints(&[1, -1, 5, -61]).as_slice());
        let t = euler_numbers(10);
        assert_eq!(t.get(8), Some(BigInt::from(1385)));
        assert_eq!(t.get(10), Some(BigInt::from(-50521)));
        assert_eq!(t.get(7), Some(BigInt::zero()));
        assert_eq!(t.get(12), None);
    }

    #[test]
    fn euler_recurrence_holds() {
        let t = euler_numbers(120);
        for n in (2..=120u64).step_by(2) {
            let s: BigInt = (0..=n / 2)
                .map(|k| binomial(n, 2 * k) * t.get(2 * k).unwrap())
                .sum();
            assert!(s.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn gamma_ratio_examples() {
        assert_eq!(gamma_ratio_half_shift(3).unwrap(), Rational::from(-3));
        assert_eq!(gamma_ratio_half_shift(5).unwrap(), Rational::from(5));
        assert_eq!(gamma_ratio_half_shift(7).unwrap(), Rational::from(-7));
        assert!(gamma_ratio_half_shift(4).is_err());
        assert!(gamma_ratio_half_shift(1).is_err());
    }

    #[test]
    fn wolstenholme_and_morley() {
        let w5 = check_wolstenholme(5).unwrap();
        assert_eq!(w5.lhs, Rational::from(252));
        assert_eq!(w5.achieved_valuation, 3);
        assert!(w5.pass);
        assert!(check_wolstenholme(7).unwrap().pass);
        assert_eq!(check_wolstenholme(3), Err(Error::InvalidPrime(3)));
        assert_eq!(check_wolstenholme(9), Err(Error::InvalidPrime(9)));

        let m5 = check_morley(5).unwrap();
        assert_eq!(&m5.lhs - &m5.rhs, Rational::from(-250));
        assert_eq!(m5.achieved_valuation, 3);
        assert!(check_morley(11).unwrap().pass);
        assert_eq!(check_morley(3), Err(Error::InvalidPrime(3)));

        for p in primes_in_range(5, 199) {
            assert!(check_wolstenholme(p).unwrap().pass, "wolstenholme p = {p}");
            assert!(check_morley(p).unwrap().pass, "morley p = {p}");
        }
        // Wolstenholme fails at p = 3 when evaluated directly: C(6,3) - 2 = 18.
        assert_eq!(vp(&Rational::from(binomial(6, 3) - 2), 3), 2);
    }
}
