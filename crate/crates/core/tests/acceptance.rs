//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test --test acceptance`.

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use kronspin::linalg::spectrum_multiset_equal;
use kronspin::{
    build_general, build_h2, check_property, commutator, eigh, kron, lanczos_extremal,
    noncommutativity_witness, spec_to_kronsum, swap_kron_factors, total_component,
    total_spin_squared, verify_h2_decomposition, Complex64, ComplexMatrix, HamiltonianSpec,
    KronProperty, LanczosConfig, PauliAxis, StateVector, WeightTriple, Which,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Counting;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let now = CURRENT.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

#[global_allocator]
static ALLOC: Counting = Counting;

type Outcome = Result<String, String>;
type Criterion<'a> = (usize, &'static str, Box<dyn Fn() -> Outcome + 'a>);

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(rng.gen(), rng.gen()))
        .collect();
    ComplexMatrix::new(rows, cols, data).unwrap()
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let m = random_matrix(rng, n, n);
    m.add(&m.adjoint()).unwrap()
}

fn dim(rng: &mut ChaCha8Rng) -> usize {
    rng.gen_range(1..=6)
}

/// Random connected-or-not coupling graph with isotropic J on each edge.
fn random_spec(rng: &mut ChaCha8Rng, n: usize) -> HamiltonianSpec {
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(0.5) {
                edges.push((i, j, rng.gen_range(-2.0..2.0)));
            }
        }
    }
    HamiltonianSpec::new(n, rng.gen_range(-1.0..1.0), &edges).unwrap()
}

/// Operand pairs shared by criteria 1 and 3.
fn law_pairs() -> Vec<(ComplexMatrix, ComplexMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..200)
        .map(|_| {
            let (r1, c1, r2, c2) = (dim(&mut rng), dim(&mut rng), dim(&mut rng), dim(&mut rng));
            (
                random_matrix(&mut rng, r1, c1),
                random_matrix(&mut rng, r2, c2),
            )
        })
        .collect()
}

fn criterion_1(pairs: &[(ComplexMatrix, ComplexMatrix)]) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tol = 1e-10;
    let mut worst = 0.0f64;
    for (a, b) in pairs {
        let (r1, c1) = a.shape();
        let (r2, c2) = b.shape();
        let a2 = random_matrix(&mut rng, r1, c1);
        let b2 = random_matrix(&mut rng, r2, c2);
        // Conformable second factors for the mixed product.
        let (p1, p2) = (dim(&mut rng), dim(&mut rng));
        let a3 = random_matrix(&mut rng, c1, p1);
        let b3 = random_matrix(&mut rng, c2, p2);
        let scalars = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let cases: [(KronProperty, Vec<ComplexMatrix>); 6] = [
            (KronProperty::ZeroFactor, vec![a.clone(), b.clone()]),
            (
                KronProperty::IdentityFactors,
                vec![ComplexMatrix::identity(r1), ComplexMatrix::identity(r2)],
            ),
            (
                KronProperty::LeftDistributive,
                vec![a.clone(), a2, b.clone()],
            ),
            (
                KronProperty::RightDistributive,
                vec![a.clone(), b.clone(), b2],
            ),
            (KronProperty::ScalarFactor, vec![a.clone(), b.clone()]),
            (
                KronProperty::MixedProduct,
                vec![a.clone(), a3, b.clone(), b3],
            ),
        ];
        for (property, operands) in cases {
            let check =
                check_property(property, &operands, &scalars, tol).map_err(|e| e.to_string())?;
            worst = worst.max(check.report.residual);
            if !check.report.passed {
                return Err(format!(
                    "{}: residual {:e}",
                    check.report.property_name, check.report.residual
                ));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 5.0 {
        return Err(format!("took {secs:.2}s"));
    }
    Ok(format!("200 pairs, worst residual {worst:.1e}, {secs:.2}s"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 0..100 {
        let n = rng.gen_range(2..=6);
        let a = random_matrix(&mut rng, n, n);
        let b = random_matrix(&mut rng, n, n);
        if noncommutativity_witness(&a, &b, 1e-10).unwrap().is_none() {
            return Err(format!("pair {k} has no witness"));
        }
    }
    for n in 1..=6 {
        let i = ComplexMatrix::identity(n);
        if let Some(w) = noncommutativity_witness(&i, &i, 0.0).unwrap() {
            return Err(format!("identity pair of order {n} reported witness {w:?}"));
        }
    }
    Ok("100 random pairs with a witness, identity pairs without".into())
}

fn criterion_3(pairs: &[(ComplexMatrix, ComplexMatrix)]) -> Outcome {
    for (k, (a, b)) in pairs.iter().enumerate() {
        let swapped = swap_kron_factors(&kron(a, b).unwrap(), a.shape(), b.shape()).unwrap();
        if swapped != kron(b, a).unwrap() {
            return Err(format!("pair {k}: shuffle is not exact"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..50 {
        let (n1, n2) = (dim(&mut rng), dim(&mut rng));
        let a = random_hermitian(&mut rng, n1);
        let b = random_hermitian(&mut rng, n2);
        let s1 = eigh(&kron(&a, &b).unwrap(), false).unwrap();
        let s2 = eigh(&kron(&b, &a).unwrap(), false).unwrap();
        if !spectrum_multiset_equal(&s1, &s2, 1e-8) {
            return Err(format!("hermitian pair {k}: spectra differ"));
        }
    }
    Ok("200 exact shuffles, 50 hermitian spectra agree".into())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..50 {
        let (n1, n2) = (dim(&mut rng), dim(&mut rng));
        // Diagonally dominant, hence well conditioned.
        let shift = |m: ComplexMatrix, n| {
            m.add(&ComplexMatrix::identity(n).scale_real(2.0 * n as f64))
                .unwrap()
        };
        let a = shift(random_matrix(&mut rng, n1, n1), n1);
        let b = shift(random_matrix(&mut rng, n2, n2), n2);
        let check = check_property(KronProperty::InverseOfProduct, &[a, b], &[], 1e-8).unwrap();
        if !check.report.passed {
            return Err(format!(
                "pair {k}: corrected inverse residual {:e}",
                check.report.residual
            ));
        }
    }
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
    let b = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[1.0, 1.0]]).unwrap();
    let check = check_property(KronProperty::InverseOfProduct, &[a, b], &[], 1e-8).unwrap();
    let [literal, conjugated] = check.diagnostics.as_slice() else {
        return Err("expected two diagnostics".into());
    };
    if !check.report.passed || literal.passed || !conjugated.passed {
        return Err(format!(
            "corrected {}, literal {} (residual {:e}), conjugated {}",
            check.report.passed, literal.passed, literal.residual, conjugated.passed
        ));
    }
    Ok(format!(
        "corrected form holds; literal form off by {:.4} on the counterexample, exact after P",
        literal.residual
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mu: f64 = rng.gen_range(-2.0..2.0);
        let j: f64 = rng.gen_range(-2.0..2.0);
        let got = eigh(&build_h2(mu, j), false).unwrap().eigenvalues;
        let mut want = [-3.0 * j, j - 2.0 * mu, j, j + 2.0 * mu];
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(want) {
            worst = worst.max((g - w).abs());
        }
    }
    if worst >= 1e-8 {
        return Err(format!("max deviation {worst:e}"));
    }
    Ok(format!("20 draws, max deviation {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for n in 1..=8 {
        let sz = total_component(PauliAxis::Z, n).unwrap();
        let s2 = total_spin_squared(n).unwrap();
        worst = worst.max(commutator(&sz, &s2).unwrap().frobenius_norm());
        for _ in 0..10 {
            let h = build_general(&random_spec(&mut rng, n)).unwrap();
            worst = worst.max(commutator(&h, &sz).unwrap().frobenius_norm());
            worst = worst.max(commutator(&h, &s2).unwrap().frobenius_norm());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if worst >= 1e-9 || secs >= 60.0 {
        return Err(format!("worst residual {worst:e}, {secs:.2}s"));
    }
    Ok(format!(
        "n = 1..8 x 10 graphs, worst residual {worst:.1e}, {secs:.2}s"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for k in 0..10 {
        let a: f64 = rng.gen_range(-2.0..2.0);
        let d = verify_h2_decomposition(WeightTriple::isotropic(a), -a);
        for r in &d.squared_components {
            if r.residual >= 1e-12 * (a * a).max(1.0) {
                return Err(format!(
                    "triple {k}: {} residual {:e}",
                    r.property_name, r.residual
                ));
            }
        }
        if d.report.residual >= 1e-10 {
            return Err(format!("triple {k}: residual {:e}", d.report.residual));
        }
        worst = worst.max(d.report.residual);
    }
    Ok(format!("10 isotropic triples, worst residual {worst:.1e}"))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_8() -> Outcome {
    for n in 2..=4usize {
        // Count basis states by number of up spins: that fixes 2·S_z = n - 2·down.
        let mut count_by_twice_m = std::collections::BTreeMap::<i64, usize>::new();
        for state in 0..(1usize << n) {
            let down = state.count_ones() as i64;
            *count_by_twice_m.entry(n as i64 - 2 * down).or_default() += 1;
        }
        let sz = eigh(&total_component(PauliAxis::Z, n).unwrap(), false).unwrap();
        let got: Vec<(f64, usize)> = sz.multiplicities(1e-8);
        let want: Vec<(f64, usize)> = count_by_twice_m
            .iter()
            .map(|(&m2, &c)| (m2 as f64 / 2.0, c))
            .collect();
        for (m2, c) in &count_by_twice_m {
            let ups = ((n as i64 + m2) / 2) as usize;
            if *c != binomial(n, ups) {
                return Err(format!("n={n}: enumeration disagrees with C({n},{ups})"));
            }
        }
        if !same_multiplicities(&got, &want) {
            return Err(format!("n={n}: S_z {got:?} vs {want:?}"));
        }

        // Multiplets of spin s: N(m = s) - N(m = s + 1), each (2s + 1)-fold.
        let mut want_s2 = Vec::new();
        for (&m2, &c) in count_by_twice_m.iter().filter(|(&m2, _)| m2 >= 0) {
            let above = count_by_twice_m.get(&(m2 + 2)).copied().unwrap_or(0);
            let multiplets = c - above;
            if multiplets > 0 {
                let s = m2 as f64 / 2.0;
                want_s2.push((s * (s + 1.0), multiplets * (m2 as usize + 1)));
            }
        }
        want_s2.sort_by(|x, y| x.0.total_cmp(&y.0));
        let s2 = eigh(&total_spin_squared(n).unwrap(), false).unwrap();
        let got_s2 = s2.multiplicities(1e-8);
        if !same_multiplicities(&got_s2, &want_s2) {
            return Err(format!("n={n}: S^2 {got_s2:?} vs {want_s2:?}"));
        }
    }
    Ok("S_z and S^2 multiplicities match enumeration for n = 2, 3, 4".into())
}

fn same_multiplicities(a: &[(f64, usize)], b: &[(f64, usize)]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x.0 - y.0).abs() < 1e-8 && x.1 == y.1)
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for n in 1..=10 {
        let spec = random_spec(&mut rng, n);
        let dense = build_general(&spec).unwrap();
        let op = spec_to_kronsum(&spec);
        let dim = 1usize << n;
        let columns: Vec<usize> = if n <= 6 {
            (0..dim).collect()
        } else {
            (0..16).map(|_| rng.gen_range(0..dim)).collect()
        };
        for c in columns {
            let y = op.matvec(&StateVector::basis(n, c).unwrap()).unwrap();
            for (r, v) in y.amplitudes().iter().enumerate() {
                worst = worst.max((v - dense.get(r, c)).norm());
            }
        }
    }
    if worst >= 1e-10 {
        return Err(format!("matvec vs dense column residual {worst:e}"));
    }

    let spec = HamiltonianSpec::chain(10, 0.0, 1.0).unwrap();
    let dense = eigh(&build_general(&spec).unwrap(), false)
        .unwrap()
        .eigenvalues[0];
    let cfg = LanczosConfig {
        which: Which::Lowest,
        k: 1,
        ..LanczosConfig::default()
    };
    let lanczos = lanczos_extremal(&spec_to_kronsum(&spec), &cfg)
        .map_err(|e| e.to_string())?
        .eigenvalues[0];
    // Independent dense solve of the 10-site chain.
    let oracle = -17.03214082913149;
    if (lanczos - dense).abs() >= 1e-7 || (dense - oracle).abs() >= 1e-7 {
        return Err(format!("lanczos {lanczos}, dense {dense}, oracle {oracle}"));
    }
    Ok(format!(
        "column residual {worst:.1e}; n=10 ground {lanczos:.12} vs dense {dense:.12}"
    ))
}

fn criterion_10() -> Outcome {
    let n = 20;
    let op = spec_to_kronsum(&HamiltonianSpec::chain(n, 0.5, 1.0).unwrap());
    if op.terms().len() != 3 * 19 + 20 {
        return Err(format!("{} terms", op.terms().len()));
    }
    let base = CURRENT.load(Ordering::Relaxed);
    PEAK.store(base, Ordering::Relaxed);
    let x = StateVector::random(n, 10).unwrap();
    let start = Instant::now();
    let y = op.matvec(&x).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let peak = PEAK.load(Ordering::Relaxed).saturating_sub(base);
    let limit = 10 * (1usize << n) * std::mem::size_of::<Complex64>();
    drop((x, y));
    if secs >= 5.0 || peak >= limit {
        return Err(format!(
            "{secs:.2}s, peak {} MiB (limit {} MiB)",
            peak >> 20,
            limit >> 20
        ));
    }
    Ok(format!(
        "77-term matvec at n=20 in {secs:.3}s, peak {:.1} MiB of {} MiB allowed",
        peak as f64 / (1 << 20) as f64,
        limit >> 20
    ))
}

fn main() {
    // Criterion 10 runs first so the peak counter sees only its own buffers,
    // but lines are reported in criterion order.
    let pairs = law_pairs();
    let criteria: Vec<Criterion> = vec![
        (10, "matrix-free performance", Box::new(criterion_10)),
        (1, "kronecker laws", Box::new(|| criterion_1(&pairs))),
        (2, "non-commutativity witness", Box::new(criterion_2)),
        (3, "shuffle similarity", Box::new(|| criterion_3(&pairs))),
        (
            4,
            "inverse-of-product discrimination",
            Box::new(criterion_4),
        ),
        (5, "two-spin spectrum", Box::new(criterion_5)),
        (6, "conservation laws", Box::new(criterion_6)),
        (7, "two-spin decomposition", Box::new(criterion_7)),
        (8, "S_z and S^2 multiplicities", Box::new(criterion_8)),
        (9, "matrix-free fidelity", Box::new(criterion_9)),
    ];
    let mut results: Vec<(usize, &str, Outcome)> = criteria
        .iter()
        .map(|(k, name, run)| {
            let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
                .unwrap_or_else(|_| Err("panicked".into()));
            (*k, *name, outcome)
        })
        .collect();
    results.sort_by_key(|r| r.0);
    let mut failures = 0;
    for (k, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  criterion {k:>2} {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  criterion {k:>2} {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        results.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
