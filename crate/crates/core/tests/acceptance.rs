//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use transdim::coanalysis::{
    all_tuples, certificate_from_fibration, check_certificate, coanalyzable_bounded, dagger_fiberability_demo,
    fiberable_bounded, CoAnalysisCertificate, Tuple,
};
use transdim::codim::{jacobian_at, strongly_d_independent_at, TransMatrix};
use transdim::constant_param::{
    build_certificate, decide_creation, fiber_equation, fiber_level, verdict_reproduces, verify_certificate,
    CreationVerdict, PointStatus,
};
use transdim::diffpoly::order_vector;
use transdim::dimension::{Dim, SetDescriptor};
use transdim::exact_algebra::{rat, RatFunc, Rational, UniPoly};
use transdim::parse::{parse_diffpoly, parse_transseries, parse_univariate};
use transdim::transseries::{lambda_partial_sum, omega_partial_sum, LogVector, Monomial, Transseries};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type MemberFamily = (&'static str, &'static str, fn(&Rational) -> Transseries);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ts(s: &str) -> Transseries {
    parse_transseries(s).expect("valid literal")
}

fn zero_set_reproduction() -> Outcome {
    let start = Instant::now();
    let p = parse_diffpoly("Y*D2(Y) - D1(Y)^2", 1).map_err(|e| e.to_string())?;
    let mut r = common::rng(1);
    for _ in 0..100 {
        let a = Rational::new(r.gen_range(-50..=50).into(), r.gen_range(1..=20).into());
        let b = Rational::new(r.gen_range(-50..=50).into(), r.gen_range(1..=20).into());
        let y = Transseries::x().scale(&b).exp_large().map_err(|e| e.to_string())?.scale(&a);
        ensure!(p.evaluate(std::slice::from_ref(&y)).map_err(|e| e.to_string())?.is_zero(), "{y} is not a zero");
    }
    let non_members = [
        "x",
        "x^2",
        "exp(x^2)",
        "x + exp(x)",
        "l1",
        "x*exp(x)",
        "exp(x) + exp(2*x)",
        "exp(x) + 1",
        "x^(1/2)",
        "exp(x^(1/2))",
        "l2",
        "x*l1",
        "exp(x)*l1",
        "x^(-1)",
        "exp(exp(x))",
        "exp(x) + x^2",
        "x^2*exp(3*x)",
        "exp(x) + exp(-x)",
        "exp(x*l1)",
        "1 + x^(-1)",
    ];
    for s in non_members {
        ensure!(!p.evaluate(&[ts(s)]).map_err(|e| e.to_string())?.is_zero(), "{s} evaluated to zero");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("100 members, 20 non-members, {elapsed:.2?}"))
}

fn derivation_laws() -> Outcome {
    let mut r = common::rng(2);
    for _ in 0..200 {
        let (f, g) = (common::transseries(&mut r, 2), common::transseries(&mut r, 2));
        ensure!((&f * &g).derive() == &(&f.derive() * &g) + &(&f * &g.derive()), "Leibniz fails for {f}, {g}");
        let l = common::purely_large(&mut r, 2);
        let e = l.exp_large().map_err(|e| e.to_string())?;
        ensure!(e.derive() == &l.derive() * &e, "exp rule fails for {l}");
    }
    Ok("200 Leibniz pairs, 200 exp arguments".into())
}

fn membership_oracles() -> Outcome {
    for n in 0..=5 {
        let step = |p: i64| {
            Transseries::monomial(Monomial::from_logs(LogVector::from_pairs((0..=n).map(|i| (i, rat(-p, 1))))))
        };
        let (lam, om) = (lambda_partial_sum(n), omega_partial_sum(n));
        ensure!(lam.lambda_member(), "λ_{n} rejected");
        ensure!(!(&lam + &step(1)).lambda_member(), "λ_{n} + step accepted");
        ensure!(om.omega_member(), "ω_{n} rejected");
        ensure!(!(&om + &step(2)).omega_member(), "ω_{n} + step accepted");
    }
    let mut r = common::rng(3);
    for squared in [false, true] {
        let member = |f: &Transseries| if squared { f.omega_member() } else { f.lambda_member() };
        for _ in 0..300 {
            let (f, g) = (common::near_partial_sum(&mut r, squared), common::near_partial_sum(&mut r, squared));
            let (lo, hi) = if f.cmp_value(&g) == Ordering::Greater { (g, f) } else { (f, g) };
            ensure!(!member(&hi) || member(&lo), "not downward closed: {lo} <= {hi}");
        }
    }
    for i in 0..300 {
        let f = if i % 2 == 0 {
            let squared = r.gen_bool(0.5);
            common::near_partial_sum(&mut r, squared)
        } else {
            common::transseries(&mut r, 1)
        };
        let d = f.depth();
        for partial in [lambda_partial_sum, omega_partial_sum] {
            let signs: BTreeSet<_> = (d + 2..=d + 6).map(|n| format!("{:?}", (&f - &partial(n)).sign())).collect();
            ensure!(signs.len() == 1, "cutoff unstable for {f}");
        }
    }
    Ok("partial sums n <= 5, 600 ordered pairs, 300 stability windows".into())
}

fn strong_independence() -> Outcome {
    let err = |e: transdim::Error| e.to_string();
    let fam = [parse_diffpoly("D1(Y1) - Y2", 2).map_err(err)?, parse_diffpoly("D1(Y2)", 2).map_err(err)?];
    let rep = strongly_d_independent_at(&fam, &[ts("x"), ts("1")]).map_err(err)?;
    ensure!(rep.independent && rep.rank == 2, "[Y1' - Y2, Y2'] has rank {}", rep.rank);
    let p = [parse_diffpoly("Y*D2(Y) - D1(Y)^2", 1).map_err(err)?];
    ensure!(strongly_d_independent_at(&p, &[ts("3*exp(2*x)")]).map_err(err)?.rank == 1, "rank at 3e^(2x)");
    ensure!(strongly_d_independent_at(&p, &[ts("0")]).map_err(err)?.rank == 0, "rank at 0");

    let mut r = common::rng(4);
    for _ in 0..50 {
        let (rows, cols) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let mut m: Vec<Vec<UniPoly>> =
            (0..rows).map(|_| (0..cols).map(|_| common::int_poly(&mut r, 2, 3)).collect()).collect();
        if rows > 1 && r.gen_bool(0.5) {
            let w = common::int_poly(&mut r, 1, 2);
            m[rows - 1] = m[0].iter().map(|e| &w * e).collect();
        }
        let trans = TransMatrix::from_rows(m.iter().map(|row| row.iter().map(common::poly_in_x).collect()).collect())
            .map_err(err)?;
        let rank = trans.minor_rank().map_err(err)?;
        let mut oracle = 0;
        for _ in 0..4 {
            let a = Rational::new(r.gen_range(7..=97).into(), r.gen_range(1..=5).into());
            let specialized =
                common::rational_rank(m.iter().map(|row| row.iter().map(|p| p.eval(&a)).collect()).collect());
            ensure!(specialized <= rank, "specialization rank {specialized} above minor rank {rank}");
            oracle = oracle.max(specialized);
        }
        ensure!(oracle == rank, "minor rank {rank}, oracle {oracle}");
    }
    for _ in 0..50 {
        let arity = r.gen_range(1..=3);
        let fam: Vec<_> =
            (0..r.gen_range(1..=3)).map(|_| common::nonzero_diff_polynomial(&mut r, arity, 2, 3)).collect();
        let y: Vec<Transseries> = (0..arity).map(|_| common::transseries(&mut r, 1)).collect();
        let star = order_vector(&fam).map_err(err)?;
        let base = jacobian_at(&fam, &y, &star).map_err(err)?.minor_rank().map_err(err)?;
        for j in 0..arity {
            let mut inflated = star.clone();
            inflated[j] += 1;
            let k = jacobian_at(&fam, &y, &inflated).map_err(err)?.minor_rank().map_err(err)?;
            ensure!(k <= base, "inflated order vector gains rank");
        }
    }
    Ok("worked ranks, 50 oracle matrices, 50 order-vector families".into())
}

fn dimension_calculus() -> Outcome {
    let mut r = common::rng(5);
    let dim = |d: &SetDescriptor| d.dim_eval().map_err(|e| e.to_string());
    let add = |a: Dim, b: Dim| match (a, b) {
        (Dim::Val(x), Dim::Val(y)) => Dim::Val(x + y),
        _ => Dim::NegInf,
    };
    for _ in 0..300 {
        let n = r.gen_range(1..=3);
        let (a, b) = (common::descriptor(&mut r, n, 3), common::descriptor(&mut r, n, 3));
        let (da, db) = (dim(&a)?, dim(&b)?);
        let u = dim(&SetDescriptor::union(a.clone(), b.clone()))?;
        ensure!(u.lo == da.lo.max(db.lo) && u.hi == da.hi.max(db.hi), "union rule");
        let m = r.gen_range(1..=2);
        let c = common::descriptor(&mut r, m, 2);
        let (dc, p) = (dim(&c)?, dim(&SetDescriptor::product(a.clone(), c))?);
        ensure!(p.lo == add(da.lo, dc.lo) && p.hi == add(da.hi, dc.hi), "product rule");
        let mut sigma: Vec<usize> = (1..=n).collect();
        sigma.shuffle(&mut r);
        ensure!(dim(&SetDescriptor::permute(sigma, a.clone()))? == da, "permutation rule");
        let k = r.gen_range(1..=n);
        let pr = dim(&SetDescriptor::project(a, k))?;
        ensure!(pr.hi <= da.hi.min(Dim::Val(k)), "projection bound");
    }
    Ok("300 random descriptor trees".into())
}

fn rosenlicht_grid() -> Result<usize, String> {
    let mut cases = 0;
    let roots: Vec<i64> = (-2..=2).collect();
    let numerators: Vec<UniPoly> = common::coefficient_grid(&roots, 3)
        .into_iter()
        .map(|c| UniPoly::from_ints(&c))
        .filter(|p| !p.is_zero())
        .collect();
    for k in 1..=4 {
        for multiset in common::multisets(&roots, k) {
            let mult = common::root_multiplicities(&multiset);
            for lead in [rat(1, 1), rat(-2, 1)] {
                let g = mult.iter().fold(UniPoly::constant(lead.clone()), |acc, (a, m)| {
                    &acc * &UniPoly::linear_root(a).pow(*m as u32)
                });
                for f in &numerators {
                    if !f.gcd(&g).is_constant() {
                        continue;
                    }
                    cases += 1;
                    let pf = common::partial_fractions(f, &lead, &mult);
                    let expected = common::rosenlicht_oracle(&pf);
                    let v = decide_creation(f, &g).map_err(|e| e.to_string())?;
                    let agree = match (&expected, &v) {
                        (common::OracleVerdict::Exact, CreationVerdict::ExactDerivative(_)) => {
                            verdict_reproduces(f, &g, &v)
                        }
                        (common::OracleVerdict::Log(c), CreationVerdict::LogDerivative { c: got, .. }) => {
                            got == c && verdict_reproduces(f, &g, &v)
                        }
                        (common::OracleVerdict::No, CreationVerdict::NoCreation { .. }) => true,
                        _ => false,
                    };
                    ensure!(agree, "F = {f}, G = {g}: oracle {expected:?}, got {v:?}");
                }
            }
        }
    }
    Ok(cases)
}

fn rosenlicht_decision() -> Outcome {
    let start = Instant::now();
    let cases = rosenlicht_grid()?;
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "grid took {elapsed:?}");
    let poly = |s: &str| parse_univariate(s).map_err(|e| e.to_string());
    let pinned = [
        (poly("1")?, poly("Y")?, "LogDerivative"),
        (poly("1")?, poly("Y^2")?, "ExactDerivative"),
        (poly("Y^2 - 2")?, poly("Y + 1")?, "NoCreation"),
    ];
    for (f, g, tag) in &pinned {
        let v = decide_creation(f, g).map_err(|e| e.to_string())?;
        ensure!(v.tag() == *tag && v.field() == "Q", "{f}·Y' - {g}: {v:?}");
    }
    let mut r = common::rng(6);
    let mut round_trips = 0;
    while round_trips < 200 {
        let c = common::small_rational(&mut r);
        let factors: Vec<(UniPoly, i64)> = (0..r.gen_range(1..=3))
            .map(|_| (common::nonzero_int_poly(&mut r, 2, 3), *[-2i64, -1, 1, 2].choose(&mut r).unwrap()))
            .filter(|(p, _)| !p.is_constant())
            .collect();
        if factors.is_empty() {
            continue;
        }
        let mut target = RatFunc::zero();
        for (p, n) in &factors {
            let term = RatFunc::new(p.derivative(), p.clone()).map_err(|e| e.to_string())?;
            target = target.add(&term.scale(&Rational::from_integer((*n).into())));
        }
        let target = target.scale(&c);
        if target.is_zero() {
            continue;
        }
        let (f, g) = (target.num().clone(), target.den().clone());
        let v = decide_creation(&f, &g).map_err(|e| e.to_string())?;
        ensure!(verdict_reproduces(&f, &g, &v), "{target}: {v:?} does not reproduce");
        ensure!(!matches!(v, CreationVerdict::ExactDerivative(_)), "{target} has residues but was called exact");
        round_trips += 1;
    }
    Ok(format!("{cases} grid cases in {elapsed:.2?}, 3 pinned verdicts, 200 round trips"))
}

fn certificates() -> Outcome {
    let poly = |s: &str| parse_univariate(s).map_err(|e| e.to_string());
    let mut r = common::rng(7);
    let families: [MemberFamily; 3] = [
        ("1", "Y", |k| ts("exp(x)").scale(k)),
        ("1", "2*Y", |k| ts("exp(2*x)").scale(k)),
        ("1", "1", |k| &ts("x") + &Transseries::constant(k.clone())),
    ];
    for (f, g, member) in families {
        let (f, g) = (poly(f)?, poly(g)?);
        let cert = build_certificate(&f, &g).map_err(|e| e.to_string())?;
        let pts: Vec<Transseries> = (0..100).map(|_| member(&common::small_rational(&mut r))).collect();
        let status = verify_certificate(&f, &g, &cert, &pts).map_err(|e| e.to_string())?;
        ensure!(status.iter().all(|s| *s == PointStatus::Pass), "{f}·Y' - {g}: {status:?}");
    }
    let (f, g) = (poly("1")?, poly("Y")?);
    let cert = build_certificate(&f, &g).map_err(|e| e.to_string())?;
    let status = verify_certificate(&f, &g, &cert, &[ts("0"), ts("x")]).map_err(|e| e.to_string())?;
    ensure!(status == [PointStatus::Excluded, PointStatus::NotMember], "flags: {status:?}");
    let (f, g) = (poly("1")?, poly("Y^2")?);
    let cert = build_certificate(&f, &g).map_err(|e| e.to_string())?;
    let status = verify_certificate(&f, &g, &cert, &[ts("-1*x^(-1)")]).map_err(|e| e.to_string())?;
    ensure!(status == [PointStatus::Pass], "Y' - Y^2 at -1/x: {status:?}");

    for (f, g, bound) in [("1", "Y", 1), ("1", "Y^2", 1), ("2*Y", "Y^2 - 2", 2), ("3*Y^2", "Y^3 + 1", 3)] {
        let (f, g) = (poly(f)?, poly(g)?);
        let cert = build_certificate(&f, &g).map_err(|e| e.to_string())?;
        ensure!(cert.fiber_bound == bound, "{g}: fiber bound {}", cert.fiber_bound);
        for k in [-2, -1, 1, 3] {
            let level = fiber_level(&cert, &rat(k, 1)).map_err(|e| e.to_string())?;
            let eq = fiber_equation(&cert, &level);
            ensure!(eq.len() >= 2 && eq.len() - 1 <= bound, "{g}: fiber equation of degree {}", eq.len() - 1);
        }
    }
    Ok("300 members pass, excluded and non-member points flagged, 4 fiber bounds".into())
}

fn coanalysis() -> Outcome {
    let mut instances = 0;
    for size in 1..=4 {
        let tuples: Vec<Tuple> = all_tuples(size, 1).collect();
        for consts in common::nonempty_subsets(size) {
            let st = common::structure(size, &consts);
            for e in 0..=2 {
                let oracle = common::PartitionOracle::new(size, consts.len(), 2, e);
                for mask in 0..1usize << size {
                    let set = common::set_from_mask(&tuples, mask);
                    for r in 0..=2u32 {
                        instances += 1;
                        let closed = coanalyzable_bounded(&st, set.len(), r, e);
                        ensure!(closed == oracle.coanalyzable(mask, r as usize), "closed form vs oracle on {set:?}");
                        let fib = fiberable_bounded(&st, &set, r, e).map_err(|e| e.to_string())?;
                        ensure!(fib.is_some() == closed, "fiberability vs co-analysis on {set:?}");
                        if let Some(w) = fib {
                            let cert = certificate_from_fibration(&w, r, e);
                            ensure!(
                                check_certificate(&st, 1, &set, &cert).map_err(|e| e.to_string())?,
                                "certificate rejected"
                            );
                        } else if r == 1 {
                            // Any one-step certificate would have to be a subset of C × S.
                            let cells: Vec<Tuple> =
                                consts.iter().flat_map(|&c| set.iter().map(move |s| vec![c, s[0]])).collect();
                            for cm in 0..1usize << cells.len() {
                                let cert = CoAnalysisCertificate {
                                    e,
                                    relations: vec![common::set_from_mask(&cells, cm)],
                                    dims: vec![],
                                };
                                ensure!(
                                    !check_certificate(&st, 1, &set, &cert).map_err(|e| e.to_string())?,
                                    "bogus certificate accepted"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    for size in 1..=5 {
        let tuples: Vec<Tuple> = all_tuples(size, 1).collect();
        for consts in common::nonempty_subsets(size) {
            let st = common::structure(size, &consts);
            for mask in 0..1usize << size {
                let set = common::set_from_mask(&tuples, mask);
                for r in 0..=2u32 {
                    for e in 0..=3 {
                        let answer = coanalyzable_bounded(&st, set.len(), r, e);
                        let fib = fiberable_bounded(&st, &set, r, e).map_err(|e| e.to_string())?;
                        ensure!(answer == fib.is_some(), "equivalence fails on {set:?}");
                        ensure!(!answer || coanalyzable_bounded(&st, set.len(), r + 1, e), "not monotone in r");
                        ensure!(!answer || coanalyzable_bounded(&st, set.len(), r, e + 1), "not monotone in e");
                    }
                }
            }
        }
    }
    let mut rng = common::rng(8);
    for _ in 0..500 {
        let size = rng.gen_range(2..=4);
        let n = rng.gen_range(1..=2);
        let consts: Vec<usize> = (0..size).filter(|_| rng.gen_bool(0.5)).collect();
        let consts = if consts.is_empty() { vec![0] } else { consts };
        let st = common::structure(size, &consts);
        let set: BTreeSet<Tuple> = all_tuples(size, n).filter(|_| rng.gen_bool(0.4)).collect();
        let (r, e) = (rng.gen_range(0..=2), rng.gen_range(0..=3));
        let fib = fiberable_bounded(&st, &set, r, e).map_err(|e| e.to_string())?;
        ensure!(coanalyzable_bounded(&st, set.len(), r, e) == fib.is_some(), "random instance {set:?}");
        if let Some(w) = fib {
            let cert = certificate_from_fibration(&w, r, e);
            ensure!(check_certificate(&st, n, &set, &cert).map_err(|e| e.to_string())?, "certificate rejected");
        }
    }
    Ok(format!("{instances} oracle instances, exhaustive |M| <= 5, 500 random"))
}

fn dagger_demo() -> Outcome {
    let report = dagger_fiberability_demo().map_err(|e| e.to_string())?;
    ensure!(report.passed(), "{report:?}");
    Ok(format!("{} samples in {} fibers", report.samples, report.fibers))
}

fn cli() -> Outcome {
    let golden = common::cli_checks::check_golden(false)?;
    let rejected = common::cli_checks::fuzz(10, 10_000)?;
    ensure!(rejected > 7_000, "only {rejected} malformed inputs rejected");
    Ok(format!("{golden} golden invocations, 10000 fuzz inputs ({rejected} rejected), no crashes"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("zero-set reproduction", zero_set_reproduction),
        ("derivation laws", derivation_laws),
        ("Λ/Ω membership", membership_oracles),
        ("strong d-independence", strong_independence),
        ("dimension calculus", dimension_calculus),
        ("Rosenlicht decision", rosenlicht_decision),
        ("parametrization certificates", certificates),
        ("co-analysis", coanalysis),
        ("dagger fiberability demo", dagger_demo),
        ("command line", cli),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {:.2?})", i + 1, start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
