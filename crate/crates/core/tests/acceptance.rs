//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use minorweave::algebra::{LaurentMonomial, LaurentPolynomial, MinorSymbol};
use minorweave::correspondences::{fiber_weight_sum, phi};
use minorweave::elliptope::{
    cholesky, det_identity_check, psi_inverse, random_correlation_matrix, sample_vector, Marginal, Psi,
};
use minorweave::minors::{connected_table, verify_relation, MinorTable, SquareMatrix, SymmetricMatrix};
use minorweave::paths::{catalan_weight, enumerate_schroder, for_each_catalan, for_each_schroder, schroder_weight};
use minorweave::random::{rational_matrix, symmetric_rational_matrix, Seeded};
use minorweave::reconstruct::{
    catalan_formulas, entry_formula, is_generic, lower_formulas, reconstruct_lower_with, reconstruct_symmetric_with,
    Method,
};
use minorweave::tilings::{enumerate_tilings, tiling_weight};
use num_traits::Zero;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mono(factors: &[(&str, i32)]) -> LaurentMonomial {
    factors.iter().map(|(s, e)| (s.parse::<MinorSymbol>().unwrap(), *e)).collect()
}

fn poly(terms: &[&[(&str, i32)]]) -> LaurentPolynomial {
    terms.iter().map(|t| mono(t)).collect()
}

fn catalan_counts() -> Outcome {
    let expected = [1u64, 2, 5, 14, 42, 132, 429, 1430, 4862];
    for (n, want) in (2..=10).zip(expected) {
        let mut count = 0u64;
        for_each_catalan(n, 1, n, |_| count += 1).unwrap();
        ensure(count == want, || format!("n={n}: {count} paths, expected {want}"))?;
    }
    Ok("n = 2..10 give 1, 2, 5, ..., 4862".into())
}

fn schroder_counts() -> Outcome {
    let expected = [1u64, 2, 6, 22, 90, 394, 1806];
    for (n, want) in (2..=8).zip(expected) {
        let mut count = 0u64;
        for_each_schroder(n, 1, n - 1, |_| count += 1).unwrap();
        ensure(count == want, || format!("n={n}: {count} paths, expected {want}"))?;
    }
    Ok("n = 2..8 give 1, 2, 6, 22, 90, 394, 1806".into())
}

fn golden_symmetric_4x4() -> Outcome {
    let expected: Vec<((usize, usize), LaurentPolynomial)> = vec![
        ((1, 1), poly(&[&[("p[1]", 1)]])),
        ((1, 2), poly(&[&[("a[1,2]", 1)]])),
        ((1, 3), poly(&[&[("a[1,3|2]", 1), ("p[2]", -1)], &[("a[1,2]", 1), ("a[2,3]", 1), ("p[2]", -1)]])),
        (
            (1, 4),
            poly(&[
                &[("a[1,4|2,3]", 1), ("p[2,3]", -1)],
                &[("a[1,2]", 1), ("a[2,4|3]", 1), ("p[2]", -1), ("p[3]", -1)],
                &[("a[1,3|2]", 1), ("a[3,4]", 1), ("p[2]", -1), ("p[3]", -1)],
                &[("a[1,2]", 1), ("a[2,3]", 1), ("a[3,4]", 1), ("p[2]", -1), ("p[3]", -1)],
                &[("a[1,3|2]", 1), ("a[2,3]", 1), ("a[2,4|3]", 1), ("p[2]", -1), ("p[2,3]", -1), ("p[3]", -1)],
            ]),
        ),
        ((2, 2), poly(&[&[("p[2]", 1)]])),
        ((2, 3), poly(&[&[("a[2,3]", 1)]])),
        ((2, 4), poly(&[&[("a[2,4|3]", 1), ("p[3]", -1)], &[("a[2,3]", 1), ("a[3,4]", 1), ("p[3]", -1)]])),
        ((3, 3), poly(&[&[("p[3]", 1)]])),
        ((3, 4), poly(&[&[("a[3,4]", 1)]])),
        ((4, 4), poly(&[&[("p[4]", 1)]])),
    ];
    for ((i, j), want) in &expected {
        let got = entry_formula(4, *i, *j, Method::Catalan).unwrap().poly;
        ensure(got.to_string() == want.to_string(), || format!("x[{i},{j}] = {got}, expected {want}"))?;
    }
    Ok(format!("{} entries match", expected.len()))
}

fn golden_x41() -> Outcome {
    let want = poly(&[
        &[("a[2,1]", 1), ("a[3,2]", 1), ("a[4,3]", 1), ("p[2]", -1), ("p[3]", -1)],
        &[("a[3,1|2]", 1), ("a[4,3]", 1), ("p[2]", -1), ("p[3]", -1)],
        &[("a[2,1]", 1), ("a[4,2|3]", 1), ("p[2]", -1), ("p[3]", -1)],
        &[("a[3,1|2]", 1), ("a[4,2|3]", 1), ("p[2]", -1), ("p[3]", -1), ("a[3,2]", -1)],
        &[("a[3,1|2]", 1), ("a[4,2|3]", 1), ("p[2,3]", -1), ("a[3,2]", -1)],
        &[("a[4,1|2,3]", 1), ("p[2,3]", -1)],
    ]);
    for method in [Method::Schroder, Method::Tiling] {
        let got = entry_formula(4, 4, 1, method).unwrap().poly;
        ensure(got == want, || format!("{method}: {got}"))?;
    }
    let tilings = enumerate_tilings(4, 2, 7).unwrap().len();
    ensure(tilings == 6, || format!("|A_4(2,7)| = {tilings}"))?;
    Ok("six-term x41 from both expansions; 6 tilings of HD_4(2,7)".into())
}

fn bijection() -> Outcome {
    let mut checked = 0usize;
    for n in 2..=6 {
        for i in 2..=n {
            for j in 1..i {
                let tilings = enumerate_tilings(n, 2 * j, 2 * i - 1).unwrap();
                let mut images = BTreeSet::new();
                for t in &tilings {
                    let s = phi(t).map_err(|e| format!("n={n} i={i} j={j}: {e}"))?;
                    ensure(schroder_weight(&s) == tiling_weight(t), || {
                        format!("n={n} i={i} j={j}: weight differs for {:?}", s.steps())
                    })?;
                    images.insert(s);
                }
                let paths: BTreeSet<_> = enumerate_schroder(n, j, i - 1).unwrap().into_iter().collect();
                ensure(images.len() == tilings.len(), || format!("n={n} i={i} j={j}: not injective"))?;
                ensure(images == paths, || format!("n={n} i={i} j={j}: not onto"))?;
                checked += tilings.len();
            }
        }
    }
    Ok(format!("{checked} tilings, n <= 6"))
}

/// 200 symmetric matrices with n cycling through 3..=8, redrawn until generic.
fn symmetric_corpus() -> Vec<(SquareMatrix, MinorTable)> {
    let formulas: Vec<_> = (0..=8).map(catalan_formulas).collect();
    let mut rng = Seeded::new(2024);
    (0..200)
        .map(|k| {
            let n = 3 + k % 6;
            loop {
                let x = symmetric_rational_matrix(&mut rng, n);
                let t = connected_table(&x);
                if is_generic(&t, &formulas[n]) {
                    return (x, t);
                }
            }
        })
        .collect()
}

fn round_trips(corpus: &[(SquareMatrix, MinorTable)]) -> Outcome {
    let formulas: Vec<_> = (0..=8).map(catalan_formulas).collect();
    for (k, (x, t)) in corpus.iter().enumerate() {
        let n = x.n();
        let y = reconstruct_symmetric_with(&formulas[n], t, n).map_err(|e| format!("matrix {k}: {e}"))?;
        ensure(y.matrix() == x, || format!("matrix {k} (n={n}) differs after reconstruction"))?;
    }
    let mut rng = Seeded::new(77);
    let mut general = 0;
    for n in 2..=6 {
        let schroder = lower_formulas(n, Method::Schroder).unwrap();
        let tiling = lower_formulas(n, Method::Tiling).unwrap();
        for _ in 0..20 {
            let (x, t) = loop {
                let x = rational_matrix(&mut rng, n);
                let t = connected_table(&x);
                if is_generic(&t, &schroder) {
                    break (x, t);
                }
            };
            for formulas in [&schroder, &tiling] {
                let lower = reconstruct_lower_with(formulas, &t).map_err(|e| format!("general n={n}: {e}"))?;
                for ((i, j), v) in lower {
                    ensure(&v == x.get(i, j), || format!("general n={n}: x[{i},{j}] differs"))?;
                }
            }
            general += 1;
        }
    }
    Ok(format!("{} symmetric (n = 3..8) and {general} general (n = 2..6, both methods) exact", corpus.len()))
}

fn relations(corpus: &[(SquareMatrix, MinorTable)]) -> Outcome {
    let mut residuals = 0;
    for (k, (x, _)) in corpus.iter().enumerate() {
        let sym = SymmetricMatrix::new(x.clone()).unwrap();
        for r in verify_relation(&sym) {
            ensure(r.residual.is_zero(), || format!("matrix {k}: residual at ({}, {})", r.i, r.j))?;
            residuals += 1;
        }
    }
    let mut paths = 0;
    for n in 2..=6 {
        // the corpus starts at n = 3; below that no minor appears in a denominator
        let t = match corpus.iter().find(|(x, _)| x.n() == n) {
            Some((_, t)) => t.clone(),
            None => connected_table(&symmetric_rational_matrix(&mut Seeded::new(5), n)),
        };
        for a in 1..n {
            for b in a + 1..=n {
                let mut failure = None;
                for_each_catalan(n, a, b, |c| {
                    let lhs = fiber_weight_sum(&c).evaluate(|s| t.lookup(s));
                    let rhs = catalan_weight(&c).unwrap().evaluate(|s| t.lookup(s));
                    if lhs != rhs && failure.is_none() {
                        failure = Some(format!("n={n}: fiber sum differs on {:?}", c.steps()));
                    }
                    paths += 1;
                })
                .unwrap();
                if let Some(f) = failure {
                    return Err(f);
                }
            }
        }
    }
    Ok(format!("{residuals} relation residuals zero; fiber sums exact on {paths} Catalan paths"))
}

fn elliptope() -> Outcome {
    let mut worst_inv = 0.0f64;
    let mut worst_fwd = 0.0f64;
    for n in 3..=8 {
        let map = Psi::new(n);
        for stream in 0..100 {
            let v = sample_vector(n, 11, stream, Marginal::default()).unwrap();
            let y = map.apply(&v).map_err(|e| format!("n={n}: psi failed: {e}"))?;
            ensure(cholesky(&y.rows()).is_some(), || format!("n={n}: psi output not PD"))?;
            let back = psi_inverse(&y).map_err(|e| format!("n={n}: {e}"))?;
            worst_inv = worst_inv.max(back.max_abs_diff(&v));
        }
        let mut rng = Seeded::new(500 + n as u64);
        for _ in 0..20 {
            let y = random_correlation_matrix(n, &mut rng);
            let again = map.apply(&psi_inverse(&y).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            worst_fwd = worst_fwd.max(again.max_abs_diff(&y));
        }
    }
    ensure(worst_inv <= 1e-10, || format!("psi_inverse(psi(v)) off by {worst_inv:e}"))?;
    ensure(worst_fwd <= 1e-10, || format!("psi(psi_inverse(Y)) off by {worst_fwd:e}"))?;
    let mut worst_closed = 0.0f64;
    let map3 = Psi::new(3);
    for stream in 0..100 {
        let v = sample_vector(3, 3, stream, Marginal::default()).unwrap();
        let y = map3.apply(&v).unwrap();
        let (r12, r23, r13) = (v.get(1, 2), v.get(2, 3), v.get(1, 3));
        let y13 = r12 * r23 - r13 * (1.0 - r12 * r12).sqrt() * (1.0 - r23 * r23).sqrt();
        for (got, want) in [(y.get(1, 2), r12), (y.get(2, 3), r23), (y.get(1, 3), y13)] {
            worst_closed = worst_closed.max((got - want).abs());
        }
    }
    ensure(worst_closed <= 1e-12, || format!("n=3 closed form off by {worst_closed:e}"))?;
    let mut worst_det = 0.0f64;
    for n in 2..=6 {
        for stream in 0..50 {
            let v = sample_vector(n, 13, stream, Marginal::default()).unwrap();
            worst_det = worst_det.max(det_identity_check(&v).unwrap());
        }
    }
    ensure(worst_det < 1e-9, || format!("determinant identity residual {worst_det:e}"))?;
    Ok(format!(
        "inverse {worst_inv:.1e}, forward {worst_fwd:.1e}, n=3 closed form {worst_closed:.1e}, det {worst_det:.1e}"
    ))
}

fn degree_witness() -> Outcome {
    let f = entry_formula(9, 1, 9, Method::Catalan).unwrap();
    let min = f.poly.terms().map(|(m, _)| m.degree()).min().unwrap();
    let witness = mono(&[
        ("a[1,3|2]", 1),
        ("a[3,5|4]", 1),
        ("a[5,7|6]", 1),
        ("a[7,9|8]", 1),
        ("p[2]", -1),
        ("p[3]", -1),
        ("p[4]", -1),
        ("p[5]", -1),
        ("p[6]", -1),
        ("p[7]", -1),
        ("p[8]", -1),
    ]);
    ensure(min == -3, || format!("minimum degree {min}"))?;
    ensure(witness.degree() == -3 && f.poly.coefficient(&witness) == 1, || "witness term missing".into())?;
    Ok(format!("min degree -3 over {} terms, witness present", f.poly.len()))
}

fn main() {
    let corpus_start = Instant::now();
    let corpus = symmetric_corpus();
    let corpus_time = corpus_start.elapsed();

    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(u32, &str, Duration, Check)> = vec![
        (1, "Catalan counts", Duration::from_secs(5), Box::new(catalan_counts)),
        (2, "Schroder counts", Duration::from_secs(10), Box::new(schroder_counts)),
        (3, "symmetric 4x4 golden formulas", Duration::from_secs(60), Box::new(golden_symmetric_4x4)),
        (4, "x41 golden formula", Duration::from_secs(60), Box::new(golden_x41)),
        (5, "tiling/Schroder bijection", Duration::from_secs(120), Box::new(bijection)),
        (6, "round-trip exactness", Duration::from_secs(300), Box::new(|| round_trips(&corpus))),
        (7, "relation and fiber sums", Duration::from_secs(300), Box::new(|| relations(&corpus))),
        (8, "elliptope", Duration::from_secs(300), Box::new(elliptope)),
        (9, "n=9 minimal-degree witness", Duration::from_secs(60), Box::new(degree_witness)),
    ];

    let mut failed = 0;
    for (id, name, bound, check) in criteria {
        let start = Instant::now();
        let mut outcome = check();
        let mut elapsed = start.elapsed();
        if id == 6 {
            elapsed += corpus_time;
        }
        if outcome.is_ok() && elapsed > bound {
            outcome = Err(format!("took {elapsed:.2?}, bound {bound:?}"));
        }
        match outcome {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail} [{elapsed:.2?}, bound {bound:?}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id} ({name}): {detail} [{elapsed:.2?}, bound {bound:?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria passed");
}
