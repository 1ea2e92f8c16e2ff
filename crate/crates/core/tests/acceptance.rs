//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use supercong::congruence::{
    check_lemma_f, check_lemma_g, check_lemma_sun1, check_lemma_sun3, check_ratio_expansion,
    fast_residues, lemma_f_sum, lemma_g_sum, EulerReading,
};
use supercong::conjecture::{
    discover_constant, verify_conjecture, ConjFamily, Variant, VariantSelection,
};
use supercong::series::{
    boundary_closed_form, check_telescoped_identity, check_wz_relation, whipple_sides, wz_f, wz_g,
    WzPoint,
};
use supercong::special::gamma_ratio_half_shift;
use supercong::{
    check, check_with, congruent, primes_in_range, reduce_mod, CheckId, PrimePower, Rational,
};

type Outcome = Result<String, String>;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> Result<(), String> {
    ensure(elapsed < Duration::from_secs(limit_secs), || {
        format!("took {elapsed:.2?}, limit {limit_secs} s")
    })
}

fn scan(ids: &[CheckId], lo: u64, hi: u64) -> Result<usize, String> {
    let mut n = 0;
    for p in primes_in_range(lo, hi) {
        for &id in ids {
            let r = check(id, p).map_err(|e| format!("{id} p={p}: {e}"))?;
            ensure(r.pass, || {
                format!(
                    "{id} p={p}: valuation {} < {}",
                    r.achieved_valuation, r.required_valuation
                )
            })?;
            n += 1;
        }
    }
    Ok(n)
}

fn c1_lemma_exactness() -> Outcome {
    let t = Instant::now();
    ensure(lemma_f_sum(5, 2) == q("-384"), || {
        "f_5(2) spot value".into()
    })?;
    ensure(lemma_g_sum(3, 2) == q("135/16"), || {
        "g_3(2) spot value".into()
    })?;
    for m in [3, 5, 7] {
        for n in 2..=50 {
            ensure(check_lemma_f(m, n).unwrap(), || {
                format!("f identity m={m} n={n}")
            })?;
            ensure(check_lemma_g(m, n).unwrap(), || {
                format!("g identity m={m} n={n}")
            })?;
        }
    }
    within(t.elapsed(), 5)?;
    Ok(format!("294 exact identities in {:.2?}", t.elapsed()))
}

fn c2_wz() -> Outcome {
    let t = Instant::now();
    let left = wz_f(WzPoint::new(1, 0)) - wz_f(WzPoint::new(1, 1));
    let right = wz_g(WzPoint::new(2, 1)) - wz_g(WzPoint::new(1, 1));
    ensure(left == q("9/8") && right == q("9/8"), || {
        format!("(1,1): {left} vs {right}")
    })?;
    let mut count = 0;
    for n in 1..=60 {
        for k in 1..=n {
            ensure(check_wz_relation(WzPoint::new(n, k)).unwrap(), || {
                format!("relation at ({n},{k})")
            })?;
            count += 1;
        }
    }
    let primes: Vec<u64> = primes_in_range(3, 97);
    for &p in &primes {
        ensure(check_telescoped_identity(p).unwrap(), || {
            format!("telescoped identity p={p}")
        })?;
    }
    within(t.elapsed(), 10)?;
    Ok(format!(
        "{count} grid points, {} primes in {:.2?}",
        primes.len(),
        t.elapsed()
    ))
}

fn c3_thm1() -> Outcome {
    let r5 = check(CheckId::Thm1, 5).unwrap();
    ensure(r5.lhs == q("-2605/4096") && r5.rhs == q("370"), || {
        "p=5 sides".into()
    })?;
    ensure(
        &r5.lhs - &r5.rhs == q("-1518125/4096") && r5.achieved_valuation == 4,
        || "p=5 valuation".into(),
    )?;
    let n = scan(&[CheckId::Thm1], 5, 199)?;
    let r3 = check_with(CheckId::Thm1, 3, true).unwrap();
    ensure(r3.informational && !r3.is_failure(), || {
        "p=3 must be informational".into()
    })?;
    ensure(
        &r3.lhs - &r3.rhs == q("-15687/512") && r3.achieved_valuation == 3,
        || format!("p=3 valuation {}", r3.achieved_valuation),
    )?;
    Ok(format!(
        "{n} primes at p^4; p=3 informational with valuation 3"
    ))
}

fn c4_thm2() -> Outcome {
    let r5 = check(CheckId::Thm2, 5).unwrap();
    ensure(
        &r5.lhs - &r5.rhs == q("-53125/4096") && r5.achieved_valuation == 5,
        || "p=5 spot".into(),
    )?;
    let n = scan(&[CheckId::Thm2], 5, 199)?;
    Ok(format!("{n} primes at p^2; p=5 achieves valuation 5"))
}

fn c5_thm3() -> Outcome {
    let t = Instant::now();
    let n = scan(&[CheckId::Thm3M3, CheckId::Thm3M5, CheckId::Thm3M7], 5, 199)?;
    within(t.elapsed(), 30)?;
    Ok(format!("{n} rows at p^4 in {:.2?}", t.elapsed()))
}

fn c6_van_hamme_sun() -> Outcome {
    let n = scan(&[CheckId::VanHamme, CheckId::SunRefinement], 5, 199)?;
    let r3 = check(CheckId::VanHamme, 3).unwrap();
    ensure(
        r3.lhs == q("3/8") && r3.rhs == q("-3") && r3.achieved_valuation == 3 && r3.pass,
        || "p=3".into(),
    )?;
    Ok(format!("{n} rows; p=3 passes with valuation 3"))
}

fn c7_gs0_mod_p5() -> Outcome {
    let n = scan(&[CheckId::Gs0], 5, 199)?;
    Ok(format!("{n} primes at p^5"))
}

fn c8_lemma_sun1() -> Outcome {
    let n = scan(&[CheckId::LemmaSun1], 5, 199)?;
    let five = PrimePower::new(5, 1).unwrap();
    let seven = PrimePower::new(7, 1).unwrap();
    let p5 = check_lemma_sun1(5, EulerReading::Printed).unwrap();
    ensure(p5.lhs == q("26/9"), || "p=5 lhs".into())?;
    ensure(
        reduce_mod(&p5.lhs, five).unwrap() == BigInt::from(4),
        || "p=5 lhs residue".into(),
    )?;
    ensure(
        reduce_mod(&p5.rhs, five).unwrap() == BigInt::from(0),
        || "p=5 printed rhs residue".into(),
    )?;
    ensure(!p5.pass, || "printed reading should fail at p=5".into())?;
    let p7 = check_lemma_sun1(7, EulerReading::Printed).unwrap();
    ensure(p7.lhs == q("794/225"), || "p=7 lhs".into())?;
    ensure(
        reduce_mod(&p7.lhs, seven).unwrap() == BigInt::from(3),
        || "p=7 lhs residue".into(),
    )?;
    ensure(
        reduce_mod(&p7.rhs, seven).unwrap() == BigInt::from(0),
        || "p=7 printed rhs residue".into(),
    )?;
    ensure(!p7.pass, || "printed reading should fail at p=7".into())?;
    Ok(format!(
        "E_(p-3) reading passes at {n} primes; printed E_(p-1) reading fails at p=5,7"
    ))
}

fn c9_lemma_sun3() -> Outcome {
    let r = check_lemma_sun3(5, 1).unwrap();
    ensure(
        &r.lhs - &r.rhs == q("-60625/512") && r.achieved_valuation == 4,
        || "(5,1) spot".into(),
    )?;
    let mut n = 0;
    for p in primes_in_range(5, 97) {
        for k in 1..=(p - 1) / 2 {
            let r = check_lemma_sun3(p, k).unwrap();
            ensure(r.pass, || {
                format!("p={p} k={k}: valuation {}", r.achieved_valuation)
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} (p,k) pairs at p^4"))
}

fn c10_proof_steps() -> Outcome {
    let n = scan(
        &[
            CheckId::BoundaryMod,
            CheckId::TailCongruence,
            CheckId::CombinedM3,
            CheckId::CombinedM5,
            CheckId::CombinedM7,
            CheckId::H2Cong,
        ],
        5,
        97,
    )?;
    let mut ratios = 0;
    for p in primes_in_range(5, 97) {
        for k in 0..=p.div_ceil(2) {
            for order in [2, 4] {
                let r = check_ratio_expansion(p, k, order).unwrap();
                ensure(r.pass, || {
                    format!("ratio expansion p={p} k={k} order={order}")
                })?;
                ratios += 1;
            }
        }
    }
    for p in (3..=199).step_by(2) {
        let (a, b) = boundary_closed_form(p).unwrap();
        ensure(a == b, || format!("boundary closed form p={p}"))?;
    }
    Ok(format!(
        "{n} congruence rows, {ratios} ratio expansions, 99 boundary identities"
    ))
}

fn random_rational(rng: &mut StdRng) -> Rational {
    Rational::new(rng.gen_range(-12..=12), rng.gen_range(1..=8)).unwrap()
}

fn c11_whipple_gamma() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0011);
    let mut total = 0;
    for big_n in 0..=8u64 {
        let mut admissible = 0;
        while admissible < 100 {
            let (a, b, c, d) = (
                random_rational(&mut rng),
                random_rational(&mut rng),
                random_rational(&mut rng),
                random_rational(&mut rng),
            );
            let Ok((l, r)) = whipple_sides(&a, &b, &c, &d, big_n) else {
                continue;
            };
            ensure(l == r, || format!("N={big_n} a={a} b={b} c={c} d={d}"))?;
            admissible += 1;
        }
        total += admissible;
    }
    for p in (3..=199u64).step_by(2) {
        let expected = Rational::from(p as i64 * if (p - 1) / 2 % 2 == 0 { 1 } else { -1 });
        ensure(gamma_ratio_half_shift(p).unwrap() == expected, || {
            format!("gamma ratio p={p}")
        })?;
    }
    Ok(format!(
        "{total} admissible Whipple draws; gamma ratio for 99 odd p"
    ))
}

type Discovered = BTreeMap<(ConjFamily, u32), supercong::DiscoveryResult>;

fn c12_discovery(found: &mut Discovered) -> Outcome {
    let t = Instant::now();
    let primes = primes_in_range(5, 199);
    let mut misses = Vec::new();
    for family in [ConjFamily::C, ConjFamily::D] {
        for &(m, published) in family.published() {
            let d = discover_constant(family, m, &primes, 1, VariantSelection::Both)
                .map_err(|e| e.to_string())?;
            if d.constant != BigInt::from(published)
                || !d.consistent
                || d.variants_agree != Some(true)
            {
                let lifted = d.constant.to_string();
                let lifted = if lifted.len() > 24 {
                    format!("{}... ({} digits)", &lifted[..12], lifted.len())
                } else {
                    lifted
                };
                misses.push(format!(
                    "{family}_{m}: tabulated {published}, lifted {lifted}, consistent={}, variants_agree={:?}, outliers={:?}, without outliers={}",
                    d.consistent,
                    d.variants_agree,
                    d.outliers,
                    d.constant_without_outliers.as_ref().map(|c| c.to_string()).unwrap_or("-".into())
                ));
            }
            found.insert((family, m), d);
        }
    }
    within(t.elapsed(), 120)?;
    if misses.is_empty() {
        Ok(format!("14 constants reproduced in {:.2?}", t.elapsed()))
    } else {
        Err(misses.join("; "))
    }
}

fn c13_r2(found: &Discovered) -> Outcome {
    let mut n = 0;
    for (&(family, m), d) in found {
        let constant = if d.consistent {
            d.constant.clone()
        } else {
            d.constant_without_outliers
                .clone()
                .ok_or_else(|| format!("{family}_{m}: no discovered constant"))?
        };
        for p in [5, 7, 11] {
            for v in [Variant::Half, Variant::Full] {
                let r = verify_conjecture(family, m, p, 2, &constant, v).unwrap();
                ensure(r.pass, || {
                    format!(
                        "{family}_{m}={constant} p={p} {v:?}: valuation {} < {}",
                        r.achieved_valuation, r.required_valuation
                    )
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} r=2 rows"))
}

fn c14_oracle_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0014);
    let primes = primes_in_range(5, 199);
    let ids = CheckId::defaults();
    for _ in 0..1000 {
        let id = ids[rng.gen_range(0..ids.len())];
        let p = primes[rng.gen_range(0..primes.len())];
        let exact = check(id, p).unwrap();
        let (l, r) = fast_residues(id, p).unwrap();
        let pp = PrimePower::new(p, id.required_valuation()).unwrap();
        ensure(
            BigInt::from(l) == reduce_mod(&exact.lhs, pp).unwrap(),
            || format!("{id} p={p}: lhs residue"),
        )?;
        ensure(
            BigInt::from(r) == reduce_mod(&exact.rhs, pp).unwrap(),
            || format!("{id} p={p}: rhs residue"),
        )?;
        ensure((l == r) == exact.pass, || {
            format!("{id} p={p}: verdicts differ")
        })?;
    }
    let mut agreed = 0;
    while agreed < 1000 {
        let p = primes[rng.gen_range(0..6)];
        let pp = PrimePower::new(p, rng.gen_range(1..=4)).unwrap();
        let a = random_rational(&mut rng);
        // bias toward congruent pairs
        let b = if rng.gen_bool(0.5) {
            &a + &Rational::from_int(pp.modulus() * rng.gen_range(-3..=3))
        } else {
            random_rational(&mut rng)
        };
        let (Ok(ra), Ok(rb)) = (reduce_mod(&a, pp), reduce_mod(&b, pp)) else {
            continue;
        };
        ensure(congruent(&a, &b, pp) == (ra == rb), || {
            format!("{a} vs {b} mod {p}^{}", pp.t())
        })?;
        agreed += 1;
    }
    Ok("1000 check instances and 1000 rational pairs agree".into())
}

fn main() {
    let mut found = Discovered::new();
    let mut results: Vec<(&str, Outcome)> = vec![
        ("1 f_m, g_m closed-form exactness", c1_lemma_exactness()),
        ("2 WZ relation and telescoping", c2_wz()),
        ("3 thm1 mod p^4", c3_thm1()),
        ("4 thm2 mod p^2", c4_thm2()),
        ("5 thm3_m3, thm3_m5, thm3_m7 mod p^4", c5_thm3()),
        ("6 van_hamme and sun_refinement", c6_van_hamme_sun()),
        ("7 gs0 congruence mod p^5", c7_gs0_mod_p5()),
        ("8 lemma_sun1, both Euler-number readings", c8_lemma_sun1()),
        ("9 lemma_sun3 mod p^4", c9_lemma_sun3()),
        ("10 proof-step congruences", c10_proof_steps()),
        ("11 Whipple and gamma ratio", c11_whipple_gamma()),
    ];
    results.push(("12 constant discovery", c12_discovery(&mut found)));
    results.push(("13 r = 2 verification", c13_r2(&found)));
    results.push(("14 fast path vs exact path", c14_oracle_equivalence()));

    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
