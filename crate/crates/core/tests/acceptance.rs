//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::process::ExitCode;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use numera::affine::{build_fl, compose_fixed_point, enumerate_up_values};
use numera::algnum::AlgNum;
use numera::automata::{genealogical_rep, genealogical_val, Dfa, UpWord, Word};
use numera::counting::{beta_coefficients, transducer, CountingTables};
use numera::fixtures;
use numera::periodic::{kth_root, per_language};
use numera::pisot::{build_bertrand, equivalence_check, field_from_coefficients, random_samples, theta_expansion_of_one};
use numera::poly::{q, qi, Q};
use numera::realline::{h_step, interval_of_prefix, represent, value_of_up, Representation, System};

use common::{all_words, binary_digits, first_words, per_oracle, power, random_nfa};

/// Largest gap allowed between a limit-quotient estimate and an exact
/// interval endpoint.
const EQ_INTERVAL_TOL: f64 = 1e-6;
/// Horizon of the limit-quotient estimates.
const EQ_INTERVAL_HORIZON: usize = 40;
/// Step budget for representations of random elements of ℚ(τ).
const PERIODIC_BUDGET: usize = 5000;
const SAMPLE_SEED: u64 = 20_260_101;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rat(x: &AlgNum) -> Q {
    x.to_rational().expect("rational value")
}

fn ex5() -> System {
    System::new(&fixtures::ex5()).unwrap()
}

fn word(s: &System, t: &str) -> Word {
    s.dfa().alphabet().parse_word(t).unwrap()
}

fn up(s: &System, t: &str) -> UpWord {
    UpWord::parse(s.dfa().alphabet(), t).unwrap()
}

fn growth() -> Outcome {
    let s = ex5();
    let th = rat(s.theta());
    let a: Vec<Q> = s.dfa().states().map(|p| rat(s.a(p))).collect();
    ensure(th == qi(2) && a == [qi(1), qi(2), qi(1)], || format!("θ = {th}, a = {a:?}"))
}

fn intervals() -> Outcome {
    let s = ex5();
    let expected = [
        ("a", q(1, 2), qi(1)),
        ("aa", q(1, 2), q(5, 8)),
        ("ab", q(5, 8), q(3, 4)),
        ("ac", q(3, 4), qi(1)),
        ("aca", q(3, 4), q(5, 6)),
        ("acb", q(5, 6), q(7, 8)),
        ("acc", q(7, 8), qi(1)),
    ];
    let mut bad = Vec::new();
    for (w, lo, hi) in expected {
        let iw = interval_of_prefix(&s, &word(&s, w)).map_err(|e| e.to_string())?;
        let (glo, ghi) = (rat(&iw.lower), rat(&iw.upper));
        if (glo.clone(), ghi.clone()) != (lo.clone(), hi.clone()) {
            bad.push(format!("I_{w} = [{glo}, {ghi}], expected [{lo}, {hi}]"));
        }
    }
    ensure(bad.is_empty(), || bad.join("; "))
}

fn trace_of_four_sevenths() -> Outcome {
    let s = ex5();
    let x = s.field().from_q(q(4, 7));
    let rep = represent(&s, &x, 100).map_err(|e| e.to_string())?;
    let Representation::Periodic { word: w, trace } = &rep else {
        return Err("no period detected".into());
    };
    ensure(w == &up(&s, "a(acc)^w"), || format!("word {}", w.display(s.dfa().alphabet())))?;
    let states: Vec<&str> = trace.steps.iter().map(|t| s.dfa().name(t.state)).collect();
    let ys: Vec<Q> = trace.steps.iter().map(|t| rat(&t.y)).collect();
    let want_ys = [q(1, 7), q(1, 7), q(4, 7), q(4, 7), q(1, 7)];
    ensure(states == ["q0", "q1", "q2", "q1", "q1"] && ys == want_ys, || format!("trace {states:?} {ys:?}"))?;
    let mut orbit = vec![(s.dfa().initial(), s.field().from_q(q(1, 7)))];
    for _ in 0..4 {
        let (p, y) = orbit.last().unwrap();
        orbit.push(h_step(&s, *p, y).map_err(|e| e.to_string())?);
    }
    let got: Vec<(String, Q)> = orbit.iter().map(|(p, y)| (s.dfa().name(*p).to_string(), rat(y))).collect();
    let want: Vec<(String, Q)> =
        ["q0", "q1", "q2", "q1", "q1"].iter().map(|n| n.to_string()).zip(want_ys).collect();
    ensure(got == want, || format!("h-orbit {got:?}"))
}

fn round_trip() -> Outcome {
    let s = ex5();
    let v1 = rat(&value_of_up(&s, &up(&s, "a(acc)^w")).map_err(|e| e.to_string())?);
    let v2 = rat(&value_of_up(&s, &up(&s, "(ab)^w")).map_err(|e| e.to_string())?);
    ensure(v1 == q(4, 7) && v2 == q(2, 3), || format!("values {v1}, {v2}"))
}

fn fixed_points() -> Outcome {
    let s = ex5();
    let fl = build_fl(&s);
    // Compositions are written right to left; walks read left to right.
    let cases = [
        ("id_a f_b", q(1, 3)),
        ("id_a f_a id_c f_b", q(1, 15)),
        ("id_a f_a id_c f_c f_b", q(5, 31)),
        ("f_c f_a id_c f_c", q(3, 5)),
    ];
    for (walk, want) in cases {
        let path = fl.parse_path(walk).map_err(|e| e.to_string())?;
        let x = rat(&compose_fixed_point(&fl, &path).map_err(|e| e.to_string())?);
        ensure(x == want, || format!("fixed point of {walk} = {x}"))?;
    }
    let mut vals = enumerate_up_values(&s, 5, 1).map_err(|e| e.to_string())?;
    vals.extend(enumerate_up_values(&s, 4, 3).map_err(|e| e.to_string())?);
    let mapped = [
        (q(2, 3), "(ab)^w"),
        (q(8, 15), "(aacb)^w"),
        (q(18, 31), "(aaccb)^w"),
        (q(4, 5), "a(cacc)^w"),
        (q(23, 40), "aac(cacc)^w"),
    ];
    for (x, w) in mapped {
        let found = vals.iter().find(|v| v.value.to_rational() == Some(x.clone()));
        ensure(found.is_some_and(|v| v.word == up(&s, w)), || format!("{x} ↔ {w} not enumerated"))?;
    }
    let v = vals.iter().find(|v| v.value.to_rational() == Some(q(23, 40))).unwrap();
    let walk = fl.render(&v.path);
    ensure(walk == "id_a f_a id_c", || format!("23/40 reached through {walk}"))
}

fn eigen_relation() -> Outcome {
    for d in [fixtures::ex5(), fixtures::binary(), fixtures::fib()] {
        let s = System::new(&d).map_err(|e| e.to_string())?;
        let m = s.dfa();
        for p in m.states() {
            let sum = m.edges(p).fold(s.field().zero(), |acc, (_, t)| &acc + s.a(t));
            ensure(sum == s.theta() * s.a(p), || format!("state {} of {:?}", m.name(p), m.names()))?;
        }
    }
    Ok(())
}

fn ranking() -> Outcome {
    for d in [fixtures::ex5(), fixtures::binary(), fixtures::evena(), fixtures::fib()] {
        let words = first_words(&d, 201);
        for (n, w) in words.iter().enumerate() {
            let r = genealogical_rep(&d, &BigUint::from(n)).map_err(|e| e.to_string())?;
            let v = genealogical_val(&d, w).map_err(|e| e.to_string())?;
            ensure(&r == w && v == BigUint::from(n), || format!("rank {n}: {}", d.alphabet().render(w)))?;
        }
    }
    Ok(())
}

fn periods() -> Outcome {
    for d in [fixtures::ex5(), fixtures::evena()] {
        let per = per_language(&d).map_err(|e| e.to_string())?;
        for w in all_words(d.alphabet().len(), 6) {
            ensure(per.accepts(&w) == per_oracle(&d, &w), || format!("per on {}", d.alphabet().render(&w)))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    for i in 0..20 {
        let m = random_nfa(&mut rng, 4);
        for k in 1..=3 {
            let r = kth_root(&m, k).map_err(|e| e.to_string())?;
            for u in all_words(2, 5) {
                ensure(r.accepts(&u) == m.accepts(&power(&u, k)), || format!("NFA {i}, k = {k}, u = {u:?}"))?;
            }
        }
    }
    Ok(())
}

fn binary_sanity() -> Outcome {
    let s = System::new(&fixtures::binary()).unwrap();
    let mut count = 0;
    for den in 1..=64u64 {
        for num in den.div_ceil(2)..=den {
            if num_integer::gcd(num, den) != 1 {
                continue;
            }
            count += 1;
            let x = s.field().from_q(q(num as i64, den as i64));
            let rep = represent(&s, &x, 1000).map_err(|e| e.to_string())?;
            let Representation::Periodic { word: w, .. } = &rep else {
                return Err(format!("{num}/{den}: no period"));
            };
            let v = value_of_up(&s, w).map_err(|e| e.to_string())?;
            ensure(v == x, || format!("{num}/{den} evaluates to {v}"))?;
            let n = 2 * den as usize + 4;
            ensure(w.prefix(n) == binary_digits(num, den, n), || format!("{num}/{den}: digits differ"))?;
        }
    }
    ensure(count > 600, || format!("only {count} fractions"))
}

fn numeric_intervals() -> Outcome {
    let s = ex5();
    let d = s.dfa();
    let n = EQ_INTERVAL_HORIZON;
    let t = CountingTables::new(d, n);
    let q0 = d.initial();
    let f = |x: &BigUint| x.to_f64().unwrap();
    let vn = f(t.v(q0, n));
    let mut worst = 0f64;
    for w in d.words_up_to(4).into_iter().filter(|w| !w.is_empty()) {
        let ell = w.len();
        let mut below = BigUint::zero();
        let mut upto = BigUint::zero();
        for m in all_words(d.alphabet().len(), ell).into_iter().filter(|m| m.len() == ell) {
            let Some(p) = d.run(&m) else { continue };
            if m < w {
                below += t.u(p, n - ell);
            }
            if m <= w {
                upto += t.u(p, n - ell);
            }
        }
        let base = f(t.v(q0, n - 1)) / vn;
        let (lo, hi) = (base + f(&below) / vn, base + f(&upto) / vn);
        let iw = interval_of_prefix(&s, &w).map_err(|e| e.to_string())?;
        worst = worst.max((lo - iw.lower.to_f64()).abs()).max((hi - iw.upper.to_f64()).abs());
    }
    ensure(worst <= EQ_INTERVAL_TOL, || format!("largest gap {worst:e}"))
}

fn golden_system() -> Outcome {
    let f = field_from_coefficients(&[-1, -1, 1]).unwrap();
    let b = build_bertrand(&theta_expansion_of_one(&f).map_err(|e| e.to_string())?, &f).map_err(|e| e.to_string())?;
    let u: Vec<u64> = b.u_sequence(8).iter().map(|x| x.to_u64().unwrap()).collect();
    ensure(u == [1, 2, 3, 5, 8, 13, 21, 34], || format!("U = {u:?}"))?;
    for w in all_words(2, 12) {
        let zeck = w.is_empty() || (w[0] == 1 && !w.windows(2).any(|p| p == [1, 1]));
        ensure(b.a_prime.accepts(&w) == zeck, || format!("language differs on {w:?}"))?;
    }
    let t = CountingTables::new(&b.a_prime, 31);
    let big_u = b.u_sequence(31);
    let q1 = b.a_prime.state_by_name("q1").unwrap();
    for n in 1..=30 {
        ensure(t.u(b.q0(), n) == &(&big_u[n] - &big_u[n - 1]), || format!("u_q0({n})"))?;
        ensure(t.u(q1, n) == t.v(b.q0(), n), || format!("u_q1({n})"))?;
    }
    let samples = random_samples(&f, 50, 6, SAMPLE_SEED);
    ensure(samples.len() == 50, || "too few samples".into())?;
    let r = equivalence_check(&b, &samples, 30).map_err(|e| e.to_string())?;
    ensure(r.passed(), || format!("{} mismatches: {:?}", r.mismatches.len(), r.mismatches.first()))?;
    ensure(r.cases.iter().all(|&c| c > 0), || format!("cases exercised {:?}", r.cases))
}

fn golden_samples_are_periodic() -> Outcome {
    let f = field_from_coefficients(&[-1, -1, 1]).unwrap();
    let b = build_bertrand(&theta_expansion_of_one(&f).map_err(|e| e.to_string())?, &f).map_err(|e| e.to_string())?;
    let s = b.system().map_err(|e| e.to_string())?;
    let samples = random_samples(&f, 50, 6, SAMPLE_SEED + 1);
    ensure(samples.len() == 50, || "too few samples".into())?;
    for x in &samples {
        let rep = represent(&s, x, PERIODIC_BUDGET).map_err(|e| e.to_string())?;
        ensure(matches!(rep, Representation::Periodic { .. }), || format!("{x}: no period"))?;
    }
    Ok(())
}

fn beta_label(d: &Dfa, p: usize, l: usize) -> Vec<u32> {
    d.states()
        .map(|qi| (0..l).filter(|&t| d.step(p, t) == Some(qi)).count() as u32 + u32::from(qi == d.initial()))
        .collect()
}

fn transducer_labels() -> Outcome {
    let d = fixtures::evena();
    for e in transducer(&d) {
        ensure(e.counts == beta_label(&d, e.from, e.letter), || format!("edge {} {}", e.from, e.letter))?;
    }
    ensure(transducer(&d).len() == 4, || "edge count".into())?;
    let t = CountingTables::new(&d, 9);
    for w in all_words(2, 8).into_iter().filter(|w| !w.is_empty()) {
        let b = beta_coefficients(&d, &w, w.len()).map_err(|e| e.to_string())?;
        for j in 0..w.len() {
            let p = d.run(&w[..j]).unwrap();
            let want = beta_label(&d, p, w[j]);
            let got: Vec<u32> = d.states().map(|q| b.beta[q][j]).collect();
            ensure(got == want, || format!("β at {j} of {w:?}"))?;
        }
        if d.accepts(&w) {
            // val(w) = Σ_j Σ_q β_{q,j} u_q(|w| − 1 − j).
            let ell = w.len();
            let mut v = BigUint::zero();
            for j in 0..ell {
                for q in d.states() {
                    v += t.u(q, ell - 1 - j) * b.beta[q][j];
                }
            }
            let direct = genealogical_val(&d, &w).map_err(|e| e.to_string())?;
            ensure(v == direct, || format!("value of {w:?}"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("growth of the three-state example: θ = 2, a = (1, 2, 1)", growth),
        ("intervals I_w of the three-state example", intervals),
        ("representation trace of 4/7", trace_of_four_sevenths),
        ("values of a(acc)^w and (ab)^w", round_trip),
        ("affine fixed points and their witnesses", fixed_points),
        ("eigenvector relation Σ a_(q.σ) = θ a_q", eigen_relation),
        ("ranking against enumeration, n ≤ 200", ranking),
        ("periods and k-th roots against oracles", periods),
        ("binary fractions with denominator ≤ 64", binary_sanity),
        ("limit quotients at n = 40 within 1e-6", numeric_intervals),
        ("golden Bertrand system", golden_system),
        ("periodic representations of random elements of ℚ(τ)", golden_samples_are_periodic),
        ("β-transducer labels and coefficients", transducer_labels),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {:>2} {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
