//! Acceptance criteria, one test per criterion. Every check is exact; run
//! with `--nocapture` to see each criterion's detail line.

mod common;

use std::time::{Duration, Instant};

use common::*;
use qcwfa::compiler::{check_string, cross_check, BlockLayout};
use qcwfa::qcfa::{default_max_steps, rotation_a, rotation_b, DiagnosticKind, Observable, ThetaEntry};
use qcwfa::wfa::{EvalError, WTransition};
use qcwfa::{compile, palindrome_machine, CMatrix, CVector, Dir, ExpSum, GaussianRational, Semiring, TapeSymbol, Verdict, Wfa};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn is_palindrome(x: &str) -> bool {
    x.chars().eq(x.chars().rev())
}

/// Palindrome dichotomy over all 511 strings of length ≤ 8.
fn criterion_1() -> Outcome {
    let started = Instant::now();
    let m = palindrome_machine();
    let report = cross_check(&m, 8, None, false).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    ensure(report.rows.len() == 511, || format!("{} strings", report.rows.len()))?;
    for row in &report.rows {
        let sim_zero = row.p_rej.as_ref().is_some_and(|p| p.is_zero());
        let wfa_zero = row.value.as_ref().is_some_and(ExpSum::is_zero);
        let pal = is_palindrome(&row.input);
        ensure(row.agree() && sim_zero == pal && wfa_zero == pal, || {
            format!("{:?}: p_rej zero {sim_zero}, W∘x zero {wfa_zero}, palindrome {pal}", row.input)
        })?;
    }
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("511 strings, {} agree, {:.2?}", report.agreeing(), elapsed))
}

/// Worked value on "ab", confirmed against the direct product (AB)ᵀ(BA)·e₀.
fn criterion_2() -> Outcome {
    let a = rotation_a();
    let b = rotation_b();
    let total = a.mul(&b).unwrap().transpose().mul(&b.mul(&a).unwrap()).unwrap();
    let col = total.apply(&CVector::basis(3, 0)).unwrap();
    // Frozen from an exact fraction computation of the same product.
    let expected_col = CVector::new(vec![gr("616/625"), gr("-12/125"), gr("87/625")]);
    ensure(col == expected_col, || format!("T·e0 = {col}"))?;
    let oracle_p_rej = &col[1].norm_sq() + &col[2].norm_sq();
    ensure(oracle_p_rej == q(11169, 390625), || format!("oracle p_rej = {oracle_p_rej}"))?;

    let m = palindrome_machine();
    let sim = m.run("ab", default_max_steps(&m, 2), false).unwrap();
    ensure(sim.p_rej == q(11169, 390625), || format!("simulator p_rej = {}", sim.p_rej))?;

    let w = compile(&m).unwrap();
    let value = w.evaluate("ab", w.default_max_steps(2), false).unwrap().value;
    let expected = ExpSum::from_terms([(1, col[1].clone()), (2, col[2].clone())]);
    ensure(value == expected, || format!("W∘ab = {value}"))?;
    ensure(value.to_string() == "{1: -12/125, 2: 87/625}", || value.to_string())?;
    Ok(format!("p_rej = {}, W∘ab = {value}", sim.p_rej))
}

/// A·Aᵀ = B·Bᵀ = I, and the two-scan product telescopes on palindromes.
fn criterion_3() -> Outcome {
    let a = rotation_a();
    let b = rotation_b();
    ensure(a.mul(&a.transpose()).unwrap().is_identity(), || "A·Aᵀ ≠ I".into())?;
    ensure(b.mul(&b.transpose()).unwrap().is_identity(), || "B·Bᵀ ≠ I".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = palindrome_machine();
    for _ in 0..50 {
        let x = random_palindrome(&mut rng, 12);
        let mut first = CMatrix::identity(3);
        let mut second = CMatrix::identity(3);
        for c in x.chars() {
            let u = if c == 'a' { &a } else { &b };
            first = u.mul(&first).unwrap();
            second = u.transpose().mul(&second).unwrap();
        }
        let total = second.mul(&first).unwrap();
        ensure(total.is_identity(), || format!("{x:?}: product is not I"))?;
        let sim = m.run(&x, default_max_steps(&m, x.len()), false).unwrap();
        ensure(sim.p_acc.is_one(), || format!("{x:?}: p_acc = {}", sim.p_acc))?;
    }
    Ok("A·Aᵀ = B·Bᵀ = I; 50 palindromes give the identity".into())
}

/// Block weights equal unnormalized amplitudes at every aligned macro-step.
fn criterion_4() -> Outcome {
    let m = palindrome_machine();
    let w = compile(&m).unwrap();
    let layout = BlockLayout::for_machine(&m);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut steps = 0;
    for _ in 0..100 {
        let x = random_string(&mut rng, &['a', 'b'], 12);
        let row = check_string(&m, &w, &layout, &x, None, true);
        ensure(row.agree(), || format!("{x:?}: {:?} {:?}", row.trace_mismatch, row.error))?;
        steps += m.run(&x, default_max_steps(&m, x.len()), false).unwrap().steps;
    }
    Ok(format!("100 strings, {steps} macro-steps compared"))
}

/// Frontier evaluation equals brute-force path enumeration.
fn criterion_5() -> Outcome {
    let mut inputs = 0;
    let mut nonzero = 0;
    let wfas = hand_wfas();
    for (name, w) in &wfas {
        ensure(w.num_states() <= 4, || format!("{name} has {} states", w.num_states()))?;
        for x in qcwfa::compiler::enumerate_strings(&['a', 'b'], 3) {
            let got = w.evaluate(&x, 1000, false).map_err(|e| format!("{name} {x:?}: {e}"))?.value;
            let oracle = brute_force_paths(w, &x, 64);
            ensure(got == oracle, || format!("{name} {x:?}: {got} vs {oracle}"))?;
            inputs += 1;
            nonzero += usize::from(!got.is_zero());
        }
    }
    Ok(format!("{} machines, {inputs} inputs ({nonzero} nonzero values)", wfas.len()))
}

/// Exactly two automaton steps per simulator step: steps = 2·|scan| − 1.
fn criterion_6() -> Outcome {
    let m = palindrome_machine();
    let w = compile(&m).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut points = Vec::new();
    for n in [10usize, 100, 1000] {
        let x: String = (0..n).map(|_| if rng.gen_bool(0.5) { 'a' } else { 'b' }).collect();
        let scan = m.run(&x, default_max_steps(&m, n), false).unwrap().steps;
        let eval = w.evaluate(&x, w.default_max_steps(n), false).unwrap();
        ensure(eval.scan.len() == eval.steps, || "one tape read per step".into())?;
        points.push((scan as i64, eval.steps as i64));
    }
    let (c0, s0) = points[0];
    let slopes: Vec<(i64, i64)> = points[1..].iter().map(|&(c, s)| (s - s0, c - c0)).collect();
    for &(ds, dc) in &slopes {
        ensure(ds == 2 * dc, || format!("slope {ds}/{dc} ≠ 2"))?;
    }
    let intercept = s0 - 2 * c0;
    ensure(points.iter().all(|&(c, s)| s == 2 * c + intercept), || format!("{points:?}"))?;
    Ok(format!("(|scan|, steps) = {points:?}; a = 2, b = {intercept}"))
}

fn random_gr(rng: &mut impl Rng) -> GaussianRational {
    let mut part = || q(rng.gen_range(-9..=9), rng.gen_range(1..=7));
    GaussianRational::new(part(), part())
}

fn random_expsum(rng: &mut impl Rng) -> ExpSum {
    let n = rng.gen_range(0..=3);
    (0..n).map(|_| (rng.gen_range(0..5), random_gr(rng))).collect()
}

fn semiring_axioms<T: Semiring + std::fmt::Debug>(a: &T, b: &T, c: &T) -> Result<(), String> {
    let zero = T::zero();
    let one = T::one();
    let checks = [
        ("⊕ associative", a.plus(b).plus(c) == a.plus(&b.plus(c))),
        ("⊕ commutative", a.plus(b) == b.plus(a)),
        ("0̄ ⊕-identity", a.plus(&zero) == *a),
        ("⊗ associative", a.times(b).times(c) == a.times(&b.times(c))),
        ("1̄ ⊗-identity", a.times(&one) == *a && one.times(a) == *a),
        ("right distributive", a.plus(b).times(c) == a.times(c).plus(&b.times(c))),
        ("left distributive", c.times(&a.plus(b)) == c.times(a).plus(&c.times(b))),
        ("0̄ annihilates", a.times(&zero) == zero && zero.times(a) == zero),
    ];
    match checks.iter().find(|(_, ok)| !ok) {
        Some((axiom, _)) => Err(format!("{axiom} fails for {a:?}, {b:?}, {c:?}")),
        None => Ok(()),
    }
}

/// Semiring axioms on 1000 random triples for both carriers.
fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let (a, b, c) = (random_gr(&mut rng), random_gr(&mut rng), random_gr(&mut rng));
        semiring_axioms(&a, &b, &c)?;
    }
    for _ in 0..1000 {
        let (a, b, c) = (random_expsum(&mut rng), random_expsum(&mut rng), random_expsum(&mut rng));
        semiring_axioms(&a, &b, &c)?;
    }
    Ok("1000 triples each for GaussianRational and ExpSum".into())
}

/// |S_W| = 2·|S|·|Q| + |F| on the palindrome machine and 5 random machines.
fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut machines = vec![palindrome_machine()];
    machines.extend((0..5).map(|_| random_machine(&mut rng)));
    let mut sizes = Vec::new();
    for m in &machines {
        let w = compile(m).map_err(|e| e.to_string())?;
        let finals: usize = m
            .measurement_states()
            .iter()
            .map(|&i| {
                let rej: std::collections::BTreeSet<usize> = m
                    .theta
                    .iter()
                    .filter(|(&(s, _), _)| s == i)
                    .filter_map(|(_, e)| match e {
                        ThetaEntry::Measure(obs) => Some(obs.rej.iter().copied()),
                        ThetaEntry::Unitary(_) => None,
                    })
                    .flatten()
                    .collect();
                rej.len()
            })
            .sum();
        let expected = 2 * m.num_classical() * m.num_quantum() + finals;
        ensure(w.num_states() == expected, || format!("{} ≠ {expected}", w.num_states()))?;
        ensure(w.finals().len() == finals, || "final count".into())?;
        sizes.push(w.num_states());
    }
    ensure(sizes[0] == 26, || format!("palindrome size {}", sizes[0]))?;
    Ok(format!("sizes {sizes:?}"))
}

/// Named validator diagnostics and an evaluator head-nondeterminism report.
fn criterion_9() -> Outcome {
    let a = TapeSymbol::Letter('a');
    let kinds = |m: &qcwfa::Qcfa| m.validate().map(|_| Vec::new()).unwrap_or_else(|e| e.0);

    let mut m = palindrome_machine();
    m.theta.insert((0, a), ThetaEntry::Unitary(rotation_a().scale(&GaussianRational::from(2))));
    let d = kinds(&m);
    ensure(
        d.len() == 1 && d[0].kind == DiagnosticKind::NotUnitary && d[0].to_string().contains("(scan1, a)"),
        || format!("{d:?}"),
    )?;

    let mut m = palindrome_machine();
    m.theta.insert((3, TapeSymbol::Dollar), ThetaEntry::Measure(Observable::new([1], [1, 2], [0])));
    let d = kinds(&m);
    ensure(
        d.len() == 1 && matches!(d[0].kind, DiagnosticKind::NotPartition(_)) && d[0].to_string().contains("(final, dollar)"),
        || format!("{d:?}"),
    )?;

    let mut m = palindrome_machine();
    m.theta.insert((1, a), ThetaEntry::Measure(Observable::new([0], [1], [2])));
    let d = kinds(&m);
    ensure(
        d.len() == 1 && d[0].kind == DiagnosticKind::InitialNotNonHalting && d[0].to_string().contains("(rewind, a)"),
        || format!("{d:?}"),
    )?;

    let w = Wfa::new(
        vec!["p".into(), "l".into(), "r".into(), "f".into()],
        vec!['a'],
        0,
        [3].into(),
        vec![
            WTransition { from: 0, symbol: TapeSymbol::Cent, weight: ExpSum::one(), to: 1, dir: Dir::Right },
            WTransition { from: 0, symbol: TapeSymbol::Cent, weight: ExpSum::one(), to: 2, dir: Dir::Right },
            WTransition { from: 1, symbol: a, weight: ExpSum::one(), to: 3, dir: Dir::Left },
            WTransition { from: 2, symbol: a, weight: ExpSum::one(), to: 3, dir: Dir::Right },
        ],
    )
    .unwrap();
    match w.evaluate("a", 100, false) {
        Err(EvalError::HeadNondeterminism(v)) if v.step == 2 && v.symbol == a => {}
        other => return Err(format!("expected head nondeterminism, got {other:?}")),
    }
    ensure(w.check_head_determinism("a", 100).is_err(), || "dry run missed it".into())?;
    let v = compile(&palindrome_machine()).unwrap().recognize_zero("ab", 1000).unwrap();
    ensure(v == Verdict::NotInLanguage, || "sanity".into())?;
    Ok("non-unitary, non-partition, q0 placement and head conflict all reported".into())
}

fn report(name: &str, outcome: Outcome) {
    match outcome {
        Ok(detail) => println!("PASS criterion {name}: {detail}"),
        Err(why) => panic!("FAIL criterion {name}: {why}"),
    }
}

macro_rules! criteria {
    ($($test:ident => $check:ident, $name:literal;)*) => {
        $(
            #[test]
            fn $test() {
                report($name, $check());
            }
        )*
    };
}

criteria! {
    criterion_1_palindrome_dichotomy => criterion_1, "1 palindrome dichotomy";
    criterion_2_worked_value_on_ab => criterion_2, "2 worked value on \"ab\"";
    criterion_3_matrix_facts => criterion_3, "3 matrix facts";
    criterion_4_amplitude_weight_correspondence => criterion_4, "4 amplitude/weight correspondence";
    criterion_5_path_sum_oracle => criterion_5, "5 path-sum oracle";
    criterion_6_linear_step_count => criterion_6, "6 linear step count";
    criterion_7_semiring_axioms => criterion_7, "7 semiring axioms";
    criterion_8_size_formula => criterion_8, "8 size formula";
    criterion_9_robustness => criterion_9, "9 robustness";
}
