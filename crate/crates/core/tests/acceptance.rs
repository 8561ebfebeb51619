//! Acceptance suite: one PASS/FAIL line per criterion, with wall-clock limits where the
//! criterion sets one. Runs without the libtest harness so the lines are always printed.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semistable_core::field::{Fp, Fp2};
use semistable_core::lattice::{solve_lambda_system, verify_g1_congruence};
use semistable_core::llc::{
    det_check, point_count, reduce, GaloisRepDescriptor, ReductionInput, Region,
};
use semistable_core::mahler::{c0_valuation, evaluate, mahler_coeffs, MahlerSeries};
use semistable_core::padic::binom;
use semistable_core::polylog::{log_branch, polylog_derivative};
use semistable_core::tree::{
    hecke_t10, hecke_t12, hecke_tm10, random_edge_function, HeckeCache, HeckeRelation,
    IZCharacter,
};
use semistable_core::{PadicScalar, Prime, Surd, Valuation};

use common::*;

type Outcome = Result<String, String>;

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `H + u p^{twice/2}`, the `√p` coordinate carrying odd `twice`.
fn l_at(p: Prime, r: u32, twice: i64, num: i64, den: i64) -> Surd {
    let u = q(num, den);
    let pr = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(BigInt::from(p.get()).pow(e as u32))
        } else {
            BigRational::one() / BigRational::from_integer(BigInt::from(p.get()).pow((-e) as u32))
        }
    };
    if twice % 2 == 0 {
        Surd::new(p, shift_constant(r) + u * pr(twice / 2), BigRational::zero())
    } else {
        Surd::new(p, shift_constant(r), u * pr((twice - 1) / 2))
    }
}

fn criterion_1() -> Outcome {
    let units = [(1i64, 1i64), (2, 1), (-1, 1), (3, 2), (7, 3), (-5, 4)];
    let mut points = 0;
    let mut intervals = 0;
    for pv in [5u64, 7] {
        let p = prime(pv);
        let one = Fp2::from_fp(Fp::one(p));
        for k in 3..=(pv as u32 + 1) {
            let r = k - 2;
            let last = point_count(r);
            for i in 1..=last {
                for &(num, den) in &units {
                    if (num.rem_euclid(pv as i64)) == 0 {
                        continue;
                    }
                    let l = l_at(p, r, 2 * i as i64 - r as i64, num, den);
                    let red = reduce(&ReductionInput::new(p, k, l).unwrap()).map_err(|e| e.to_string())?;
                    let hand = Fp::from_u64(p, hand_lambda(pv, r, i, num, den));
                    let lambda = red.lambda.ok_or("no λ at a point")?;
                    let lambda_inv = lambda.inv().ok_or("λ not a unit")?;
                    if r % 2 == 1 && i == last {
                        check(lambda + lambda_inv == Fp2::from_fp(hand) && lambda * lambda_inv == one, || {
                            format!("p={pv} k={k} i={i}: λ+λ⁻¹ ≠ {hand}")
                        })?;
                    } else {
                        check(lambda == Fp2::from_fp(hand), || {
                            format!("p={pv} k={k} i={i} u={num}/{den}: λ = {lambda}, hand {hand}")
                        })?;
                    }
                    let expected = GaloisRepDescriptor::reducible(
                        p,
                        ((r + 1 - i) as u64, lambda),
                        (i as u64, lambda_inv),
                    );
                    check(red.descriptor == expected && red.region == Region::Point(i), || {
                        format!("p={pv} k={k} point {i}: got {}", red.descriptor)
                    })?;
                    points += 1;
                }
            }
            // interval i is (i-1, i) in t = ν + r/2; the first is unbounded on the left and,
            // for even r, the last is t > r/2
            let mut samples: Vec<(u32, Option<i64>)> = vec![(1, Some(-6)), (1, Some(1))];
            for i in 2..=last {
                samples.push((i, Some(2 * i as i64 - 1)));
            }
            if r % 2 == 0 {
                samples.push((last + 1, Some(2 * last as i64 + 1)));
                samples.push((last + 1, Some(2 * last as i64 + 6)));
                samples.push((last + 1, None));
            }
            for (i, twice_t) in samples {
                let l = match twice_t {
                    Some(tt) => l_at(p, r, tt - r as i64, 2, 1),
                    None => Surd::new(p, shift_constant(r), BigRational::zero()),
                };
                let red = reduce(&ReductionInput::new(p, k, l).unwrap()).map_err(|e| e.to_string())?;
                let c = (r + 1) as u64 + (i as u64 - 1) * (pv - 1);
                let expected = GaloisRepDescriptor::irreducible(p, c, one).unwrap();
                check(red.descriptor == expected && red.region == Region::Interval(i), || {
                    format!("p={pv} k={k} interval {i}: got {} at ν = {}", red.descriptor, red.nu)
                })?;
                intervals += 1;
            }
        }
    }
    Ok(format!("{points} point samples, {intervals} interval samples"))
}

fn criterion_2() -> Outcome {
    let mut outputs = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for pv in [5u64, 7] {
        let p = prime(pv);
        for k in 3..=(pv as u32 + 1) {
            let r = k - 2;
            let last = point_count(r);
            let mut regions = Vec::new();
            let mut samples: Vec<Surd> =
                (-6..=r as i64 + 4).map(|tt| l_at(p, r, tt - r as i64, 1, 1)).collect();
            samples.push(Surd::new(p, shift_constant(r), BigRational::zero()));
            check(samples.len() as u32 > 2 * last + 1, || "sweep too coarse".into())?;
            for l in samples {
                let red = reduce(&ReductionInput::new(p, k, l).unwrap()).map_err(|e| e.to_string())?;
                check(det_check(&red.descriptor, r), || format!("det fails at {}", red.descriptor))?;
                check(red.descriptor.is_irreducible() == matches!(red.region, Region::Interval(_)), || {
                    "region / descriptor type mismatch".into()
                })?;
                if regions.last() != Some(&red.region) {
                    regions.push(red.region);
                }
                outputs += 1;
            }
            let mut expected = Vec::new();
            for i in 1..=last {
                expected.push(Region::Interval(i));
                expected.push(Region::Point(i));
            }
            if r % 2 == 0 {
                expected.push(Region::Interval(last + 1));
            }
            check(regions == expected, || format!("p={pv} k={k}: sweep {regions:?}"))?;
            for _ in 0..200 {
                let l = q(rng.gen_range(-5000..5000), rng.gen_range(1..400));
                let red = reduce(&ReductionInput::rational(p, k, l).unwrap()).map_err(|e| e.to_string())?;
                check(det_check(&red.descriptor, r), || format!("det fails at {}", red.descriptor))?;
                outputs += 1;
            }
        }
    }
    Ok(format!("{outputs} outputs, all determinant-consistent"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checks = 0;
    for pv in [5u64, 7] {
        let p = prime(pv);
        for r in 0..pv as u32 {
            let chi = IZCharacter::d_power(p, r as i64);
            let mut cache = HeckeCache::default();
            for _ in 0..100 {
                let f = random_edge_function(chi, 4, 2, |n| rng.gen_range(0..n));
                for rel in HeckeRelation::applicable(p, r) {
                    let ok = rel.holds_on_with(&f, &mut cache).map_err(|e| e.to_string())?;
                    check(ok, || format!("{} fails for p={pv} r={r}", rel.name()))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} relation instances"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = prime(5);
    let chi = IZCharacter::d_power(p, 0);
    let mut edges = 0;
    for _ in 0..50 {
        let f = random_edge_function(chi, 6, 3, |n| rng.gen_range(0..n));
        edges += f.support().len();
        let e = |x: semistable_core::Result<_>| x.map_err(|e| e.to_string());
        check(e(hecke_t10(&f))? == graph_flip(&f), || "T10 ≠ flip".into())?;
        check(e(hecke_tm10(&f))? == graph_source(&f), || "Tm10 ≠ source".into())?;
        check(e(hecke_t12(&f))? == graph_sink(&f), || "T12 ≠ sink".into())?;
    }
    Ok(format!("50 functions, {edges} supported edges"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = |v: i64, p: Prime| PadicScalar::from_int(v, p, 12).unwrap();
    let err = |e: semistable_core::Error| e.to_string();
    for pv in [5u64, 7] {
        let p = prime(pv);
        for _ in 0..40 {
            let len = rng.gen_range(1..=30);
            let coeffs: Vec<PadicScalar> = (0..len)
                .map(|_| s(rng.gen_range(-500..500), p).shift(2 * rng.gen_range(0..3)))
                .collect();
            let series = MahlerSeries::new(p, coeffs);
            let back = mahler_coeffs(p, |x| evaluate(&series, x as i64), len).map_err(err)?;
            check(back.agrees_with(&series), || "round trip failed".into())?;
        }
        for m in 0..12u64 {
            let series = mahler_coeffs(p, |x| Ok(s(binom(x as i64, m).try_into().unwrap(), p)), 16)
                .map_err(err)?;
            for (n, a) in series.coefficients().iter().enumerate() {
                check(a.agrees_with(&s((n as u64 == m) as i64, p)), || format!("a_{n}(C(x,{m}))"))?;
            }
        }
        let modulus = pv * pv;
        for i in 0..modulus {
            let series =
                mahler_coeffs(p, |x| Ok(s((x % modulus == i) as i64, p)), i as usize + 1).map_err(err)?;
            let c = series.coefficients();
            check(c[..i as usize].iter().all(|a| a.agrees_with(&s(0, p))), || {
                format!("indicator of {i}: early coefficient nonzero")
            })?;
            check(c[i as usize].agrees_with(&s(1, p)), || format!("indicator of {i}: a_i ≠ 1"))?;
        }
        for _ in 0..40 {
            let len = rng.gen_range(1..=pv as usize);
            let coeffs: Vec<PadicScalar> = (0..len)
                .map(|_| s(rng.gen_range(1..500), p).shift(2 * rng.gen_range(0..3)))
                .collect();
            let series = MahlerSeries::new(p, coeffs);
            let pointwise = (0..(pv * pv) as i64)
                .map(|x| evaluate(&series, x).map(|v| v.valuation()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?
                .into_iter()
                .min()
                .unwrap();
            check(pointwise == c0_valuation(&series), || {
                format!("c0 valuation {} vs pointwise {pointwise}", c0_valuation(&series))
            })?;
        }
    }
    Ok("round trip, binomial, indicator and sup-norm checks".into())
}

fn criterion_6() -> Outcome {
    let err = |e: semistable_core::Error| e.to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for pv in [5u64, 7, 11] {
        let p = prime(pv);
        let l = log_branch(&q(pv as i64, 1), p, 8).map_err(err)?;
        check(l.constant.is_zero() && l.ell == PadicScalar::from_int(1, p, 8).unwrap(), || {
            format!("log_L({pv}) = {l}")
        })?;
    }
    let p = prime(5);
    for _ in 0..200 {
        let mut pick = || {
            let n = rng.gen_range(1..2000i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            q(n, rng.gen_range(1..300))
        };
        let (x, y) = (pick(), pick());
        let lhs = log_branch(&(&x * &y), p, 8).map_err(err)?;
        let rhs = log_branch(&x, p, 8)
            .and_then(|a| a.checked_add(&log_branch(&y, p, 8)?))
            .map_err(err)?;
        check(lhs.constant.agrees_with(&rhs.constant) && lhs.ell.agrees_with(&rhs.ell), || {
            format!("log({x}·{y})")
        })?;
    }
    // (f(z + p^m) - f(z))/p^m - f'(z) for f = z^n log_L z gains a factor p per step
    let zero = BigRational::zero();
    let mut sample = String::new();
    for n in 2..=4u32 {
        for z in [q(1, 1), q(2, 1), q(-3, 7), q(5, 1)] {
            let mut margins = Vec::new();
            for m in 2..=5u32 {
                let h = q(5i64.pow(m), 1);
                let d = polylog_derivative(n, 1, &z, &zero, p, 24).map_err(err)?;
                let a = polylog_derivative(n, 0, &(&z + &h), &zero, p, 24).map_err(err)?;
                let b = polylog_derivative(n, 0, &z, &zero, p, 24).map_err(err)?;
                let diff = a
                    .checked_sub(&b)
                    .map_err(err)?
                    .mul_rational(&(BigRational::one() / &h))
                    .checked_sub(&d)
                    .map_err(err)?;
                margins.push(diff.valuation());
            }
            if sample.is_empty() {
                let shown: Vec<String> = margins.iter().map(|v| v.to_string()).collect();
                sample = format!("margins for z^{n} log z at {z}: {}", shown.join(", "));
            }
            for w in margins.windows(2) {
                check(w[1] >= w[0].shift(1.into()), || format!("n={n} z={z}: margins {margins:?}"))?;
            }
        }
    }
    Ok(format!("log_L(p) = L, 200 additivity pairs, {sample}"))
}

fn criterion_7() -> Outcome {
    let mut systems = 0;
    for pv in [5u64, 7, 11] {
        let p = prime(pv);
        for n in 1..pv as u32 {
            let sys = solve_lambda_system(n, p).map_err(|e| e.to_string())?;
            check(sys.lambdas == gauss_lambdas(n, pv), || format!("p={pv} n={n}: elimination differs"))?;
            check(sys.lambda_p == -BigRational::one(), || "λ_p ≠ -1".into())?;
            let mut sums = vec![BigRational::zero(); n as usize + 1];
            for (j, s) in sums.iter_mut().enumerate() {
                for (i, l) in sys.lambdas.iter().enumerate() {
                    *s += l * num_traits::pow(q(i as i64, 1), j);
                }
                *s -= num_traits::pow(q(pv as i64, 1), j);
            }
            check(sums.iter().all(Zero::is_zero), || format!("p={pv} n={n}: nonzero power sum"))?;
            let mut pattern = vec![0u64; n as usize + 1];
            pattern[0] = 1;
            check(sys.residues() == pattern, || format!("p={pv} n={n}: pattern {:?}", sys.residues()))?;
            systems += 1;
        }
    }
    Ok(format!("{systems} systems"))
}

fn criterion_8() -> Outcome {
    let mut cases: Vec<(u64, u32, u32, i64)> =
        admissible_triples().into_iter().map(|(p, r, n)| (p, r, n, -2)).collect();
    cases.push((7, 4, 4, -1));
    cases.push((5, 3, 3, -1));
    let mut cells = 0;
    let mut worst = Valuation::Infinite;
    for &(pv, r, n, twice_x) in &cases {
        let rep = verify_g1_congruence(prime(pv), r, n, twice_x, 8).map_err(|e| e.to_string())?;
        check(rep.all_pass(), || format!("p={pv} r={r} n={n} x={twice_x}/2 fails"))?;
        cells += rep.cells.len();
        worst = worst.min(rep.min_margin());
    }
    Ok(format!("{} cases, {cells} cells, smallest margin {worst}", cases.len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome, Option<Duration>); 8] = [
        (1, "reduction table", criterion_1, Some(Duration::from_secs(1))),
        (2, "alternation and determinant", criterion_2, None),
        (3, "Iwahori-Hecke relations", criterion_3, Some(Duration::from_secs(5))),
        (4, "graph-oracle equivalence", criterion_4, None),
        (5, "Mahler suite", criterion_5, None),
        (6, "log branch", criterion_6, None),
        (7, "Vandermonde system", criterion_7, None),
        (8, "g1 congruences", criterion_8, Some(Duration::from_secs(10))),
    ];
    let mut passed = Vec::new();
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed < l);
        let ok = outcome.is_ok() && in_time;
        let limit_text = limit.map(|l| format!(" < {l:?}")).unwrap_or_default();
        let detail = match outcome {
            Ok(d) => d,
            Err(e) => e,
        };
        println!(
            "criterion {id} [{}] {name}: {detail} ({elapsed:.2?}{limit_text})",
            if ok { "PASS" } else { "FAIL" }
        );
        passed.push((id, ok));
    }
    let backing = passed.iter().filter(|(id, _)| [1, 2, 3, 4, 7, 8].contains(id)).all(|&(_, ok)| ok);
    println!(
        "criterion 9 [{}] scope: the subquotient and endpoint arguments are not reconstructed; \
         this layer rests on criteria 1-4 and 7-8",
        if backing { "PASS" } else { "FAIL" }
    );
    if passed.iter().all(|&(_, ok)| ok) && backing {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
