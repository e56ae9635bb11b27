//! Acceptance criteria, one line of output each.
//!
//! Published values (factors, coefficient lists, multiplicities, the sharp
//! constant) are written out here independently of the library's own
//! reference tables so that a typo on either side shows up as a failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use c60_core::exec::Execution;
use c60_core::graph::{buckyball, face_census, find_antipodal_involution};
use c60_core::green::{
    c0_via_diagonal, c0_via_trace, c_of_a_closed_form, constant_diagonal, diagonal_samples, green_columns,
    green_matrix_with, pseudo_green_with, FIT_SAMPLES,
};
use c60_core::linalg::{
    charpoly, fit_rational_function, int, ratio, to_f64, BigRational, IntPolynomial, RatPolynomial, RationalFunction,
    RationalMatrix,
};
use c60_core::sobolev::{energy, equality_witness, sobolev_trial, Mode, StateVector};
use c60_core::spectral::{build_spectral_table, cluster, numeric_eigenvalues};
use c60_core::symmetry::{assemble_green_via_blocks, block_split, half_spectra_check};
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FACTORS: [(&[i64], u32); 8] = [
    (&[0, 1], 1),
    (&[-2, 1], 9),
    (&[-5, 1], 4),
    (&[3, -5, 1], 5),
    (&[11, -7, 1], 5),
    (&[8, -7, 1], 4),
    (&[19, -9, 1], 3),
    (&[4, -22, 25, -9, 1], 3),
];
const N_COEFFS: [i64; 15] = [
    3344, 160806, 1153562, 3594661, 6334271, 7104785, 5406109, 2893077, 1109403, 306415, 60463, 8315, 757, 41, 1,
];
const D_FACTORS: [&[i64]; 8] =
    [&[0, 1], &[2, 1], &[5, 1], &[3, 5, 1], &[8, 7, 1], &[11, 7, 1], &[19, 9, 1], &[4, 22, 25, 9, 1]];
const MULTIPLICITIES: [usize; 15] = [1, 3, 5, 3, 4, 9, 5, 3, 3, 5, 3, 5, 4, 4, 3];
const SEED: u64 = 20240601;

type Criterion = fn() -> Result<String, String>;

fn c0() -> BigRational {
    ratio(239741, 376200)
}

fn product() -> IntPolynomial {
    FACTORS.iter().fold(IntPolynomial::one(), |acc, (c, e)| &acc * &IntPolynomial::from_i64(c).pow(*e))
}

fn published_c() -> RationalFunction {
    let d = D_FACTORS.iter().fold(IntPolynomial::one(), |acc, f| &acc * &IntPolynomial::from_i64(f));
    RationalFunction::from_int_polys(&IntPolynomial::from_i64(&N_COEFFS), &d).unwrap()
}

/// `(1/60)·Σ e·g′(a)/g(a)` over the factors with `g(a) = f(−a)`: the
/// logarithmic derivative taken factor by factor.
fn c_by_log_derivative() -> RationalFunction {
    let mut acc = RationalFunction::constant(&int(0));
    for (c, e) in FACTORS {
        let g = IntPolynomial::from_i64(c).compose_neg();
        let term = RationalFunction::from_int_polys(&g.derivative(), &g).unwrap();
        acc = acc.add(&term.scale(&int(e as i64)));
    }
    acc.scale(&ratio(1, 60))
}

fn laplacian() -> RationalMatrix {
    buckyball().laplacian()
}

fn check(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    check(elapsed <= limit, &format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn criterion_1() -> Result<String, String> {
    let a = laplacian();
    let t = Instant::now();
    let p = charpoly(&a, Execution::Sequential).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    check(p == product(), "charpoly differs from the factor product")?;
    within(elapsed, Duration::from_secs(60), "single-threaded charpoly")?;
    Ok(format!("charpoly = product of 8 factors, all 61 coefficients ({elapsed:.2?} single-threaded)"))
}

fn criterion_2() -> Result<String, String> {
    let a = laplacian();
    let t = Instant::now();
    let (g, _) = pseudo_green_with(&a, Execution::Sequential).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let diag = c0_via_diagonal(&g).map_err(|e| e.to_string())?;
    let trace = c0_via_trace(&product()).map_err(|e| e.to_string())?;
    // q(0) and q'(0) straight from the coefficients of P = x·q
    let p = product();
    let by_hand = -BigRational::new(p.coeff(2), p.coeff(1) * 60);
    check(diag == c0(), "diagonal route")?;
    check(trace == c0() && by_hand == c0(), "trace route")?;
    let decimal = to_f64(&diag);
    check(format!("{decimal:.5}") == "0.63727", "decimal expansion")?;
    within(elapsed, Duration::from_secs(30), "pseudo-inverse")?;
    Ok(format!("diagonal = trace = 239741/376200 = {decimal:.8} ({elapsed:.2?})"))
}

fn criterion_3() -> Result<String, String> {
    let a = laplacian();
    let t = Instant::now();
    let samples = diagonal_samples(&a, FIT_SAMPLES, Execution::default()).map_err(|e| e.to_string())?;
    let fitted = fit_rational_function(&samples, 14, 15).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    check(samples.len() == 33, "sample count")?;
    let closed = c_of_a_closed_form(&product());
    let published = published_c();
    check(fitted == published, "fitted vs published")?;
    check(closed == published, "closed form vs published")?;
    check(c_by_log_derivative() == published, "factorwise log-derivative vs published")?;
    check(fitted.numerator().coeffs() == published.numerator().coeffs(), "numerator coefficients")?;
    check(published.eval(&int(1)) == Some(ratio(28136010, 87119712)), "C(1)")?;
    within(elapsed, Duration::from_secs(600), "33 solves and fit")?;
    Ok(format!("fitted = closed form = published N/D, degrees (14, 15) ({elapsed:.2?})"))
}

/// Real roots of the factors from their closed forms.
fn closed_form_roots() -> Vec<(f64, usize)> {
    let s5 = 5f64.sqrt();
    let s13 = 13f64.sqrt();
    let s17 = 17f64.sqrt();
    let mut v = vec![
        (0.0, 1),
        (2.0, 9),
        (5.0, 4),
        ((5.0 - s13) / 2.0, 5),
        ((5.0 + s13) / 2.0, 5),
        ((7.0 - s5) / 2.0, 5),
        ((7.0 + s5) / 2.0, 5),
        ((7.0 - s17) / 2.0, 4),
        ((7.0 + s17) / 2.0, 4),
        ((9.0 - s5) / 2.0, 3),
        ((9.0 + s5) / 2.0, 3),
    ];
    for (sa, sb) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
        let inner = (38.0 + sa * 2.0 * s5).sqrt();
        v.push(((9.0 + sa * s5 + sb * inner) / 4.0, 3));
    }
    v.sort_by(|x, y| x.0.total_cmp(&y.0));
    v
}

fn criterion_4() -> Result<String, String> {
    let a = laplacian();
    let table = build_spectral_table(&product()).map_err(|e| e.to_string())?;
    let num = numeric_eigenvalues(&a).map_err(|e| e.to_string())?;
    check(num.residual <= 1e-10, "eigenpair residual")?;
    let clusters = cluster(&num.values, 1e-8);
    let sizes: Vec<usize> = clusters.iter().map(Vec::len).collect();
    check(sizes == MULTIPLICITIES, &format!("cluster sizes {sizes:?}"))?;
    check(table.multiplicities() == MULTIPLICITIES, "table multiplicities")?;
    let expected = closed_form_roots();
    let mut worst: f64 = 0.0;
    for ((c, e), (root, m)) in clusters.iter().zip(&table.entries).zip(&expected) {
        check(e.multiplicity == *m, "closed-form multiplicity")?;
        check((e.numeric - root).abs() <= 1e-11, "bisected root vs closed form")?;
        for v in c {
            worst = worst.max((v - e.numeric).abs());
        }
    }
    check(worst <= 1e-8, &format!("numeric deviation {worst:e}"))?;
    let trace: f64 = num.values.iter().sum();
    check((trace - 180.0).abs() <= 1e-8 && (table.trace() - 180.0).abs() <= 1e-8, "trace")?;
    Ok(format!("15 clusters with published multiplicities, max deviation {worst:.1e}, trace 180"))
}

fn criterion_5() -> Result<String, String> {
    let a = laplacian();
    let (g, _) = pseudo_green_with(&a, Execution::default()).map_err(|e| e.to_string())?;
    let mul = |x: &RationalMatrix, y: &RationalMatrix| x.try_mul(y).unwrap();
    let ag = mul(&a, &g);
    let ga = mul(&g, &a);
    check(mul(&ag, &a) == a, "A G A = A")?;
    check(mul(&ga, &g) == g, "G A G = G")?;
    check(ag.transpose() == ag && ga.transpose() == ga, "symmetry of AG and GA")?;
    let e0 = RationalMatrix::filled(60, 60, ratio(1, 60));
    let complement = RationalMatrix::identity(60).try_sub(&e0).unwrap();
    check(ag == complement && ga == complement, "A G = G A = I − E0")?;
    check(mul(&g, &e0).is_zero() && mul(&e0, &g).is_zero(), "G E0 = E0 G = 0")?;
    check(constant_diagonal(&g).is_ok(), "diagonal of G★")?;
    for a_val in [ratio(1, 10), int(1), int(10)] {
        let (ga, _) = green_matrix_with(&a, &a_val, Execution::default()).map_err(|e| e.to_string())?;
        check(a.add_scalar_identity(&a_val).try_mul(&ga).unwrap() == RationalMatrix::identity(60), "inverse")?;
        let d = constant_diagonal(&ga).map_err(|e| e.to_string())?;
        check(Some(d) == published_c().eval(&a_val), "diagonal of G(a) equals C(a)")?;
    }
    Ok("four axioms, A·G★ = I − E₀, G★·E₀ = 0, constant diagonals at a ∈ {1/10, 1, 10}".into())
}

fn criterion_6() -> Result<String, String> {
    let pole = RationalFunction::new(&RatPolynomial::one(), &RatPolynomial::new(vec![int(0), int(60)])).unwrap();
    for c in [published_c(), c_of_a_closed_form(&product())] {
        let regular = c.sub(&pole);
        check(!regular.has_pole_at(&int(0)), "pole at 0 remains")?;
        check(regular.eval(&int(0)) == Some(c0()), "value at 0")?;
    }
    Ok("C(a) − 1/(60a) is regular at 0 with value 239741/376200".into())
}

fn criterion_7() -> Result<String, String> {
    let g = buckyball();
    let a = g.laplacian();
    let sigma = find_antipodal_involution(&g).map_err(|e| e.to_string())?;
    let split = block_split(&a, &sigma).map_err(|e| e.to_string())?;
    check(split.conjugation_check().map_err(|e| e.to_string())?, "J⁻¹AJ")?;
    let halves = half_spectra_check(&split, &product(), Execution::default()).map_err(|e| e.to_string())?;
    check(&halves.plus * &halves.minus == product(), "half charpolys")?;
    let (gs, full) = pseudo_green_with(&a, Execution::default()).map_err(|e| e.to_string())?;
    let blocks = assemble_green_via_blocks(&split, None, Execution::default()).map_err(|e| e.to_string())?;
    check(blocks.matrix == gs, "block-assembled G★")?;
    let (g1, _) = green_matrix_with(&a, &int(1), Execution::default()).map_err(|e| e.to_string())?;
    let blocks1 = assemble_green_via_blocks(&split, Some(&int(1)), Execution::default()).map_err(|e| e.to_string())?;
    check(blocks1.matrix == g1, "block-assembled G(1)")?;
    check(blocks.total_stats().updates < full.updates, "half solves are cheaper")?;
    Ok(format!(
        "J⁻¹AJ = diag(A₊, A₋), charpolys recombine, G★ and G(1) agree ({} vs {} updates)",
        blocks.total_stats().updates,
        full.updates
    ))
}

fn criterion_8() -> Result<String, String> {
    let g = buckyball();
    let a = g.laplacian();
    let t = Instant::now();
    let (gs, _) = pseudo_green_with(&a, Execution::default()).map_err(|e| e.to_string())?;
    // independent energy: plain edge sum over the graph
    let edge_energy = |u: &StateVector| -> BigRational {
        g.edges().iter().fold(BigRational::zero(), |acc, &(i, j)| {
            let d = &u.values()[i] - &u.values()[j];
            acc + &d * &d
        })
    };
    for index in 0..1000 {
        let u = StateVector::random(60, SEED, index, true);
        check(u.is_mean_zero(), "random vector is mean-zero")?;
        let max = u.values().iter().map(|x| x.abs()).max().unwrap();
        let e = edge_energy(&u);
        check(energy(&u, &a).map_err(|e| e.to_string())? == e, "energy")?;
        check(&max * &max <= c0() * &e, &format!("trial {index} violates the mean-zero inequality"))?;
    }
    for j in 0..60 {
        let w = equality_witness(&gs, &a, j, &Mode::MeanZero).map_err(|e| e.to_string())?;
        let col = StateVector::column(&gs, j);
        check(w.equality && w.lhs == c0() * edge_energy(&col), &format!("equality on column {j} of G★"))?;
    }
    let (g1, _) = green_matrix_with(&a, &int(1), Execution::default()).map_err(|e| e.to_string())?;
    let c1 = published_c().eval(&int(1)).unwrap();
    for index in 0..1000 {
        let u = StateVector::random(60, SEED, index, false);
        let t = sobolev_trial(&u, &c1, &a, &Mode::Damped(int(1))).map_err(|e| e.to_string())?;
        check(t.holds && t.energy == edge_energy(&u) + u.norm_squared(), "damped trial")?;
    }
    for j in 0..60 {
        let w = equality_witness(&g1, &a, j, &Mode::Damped(int(1))).map_err(|e| e.to_string())?;
        check(w.equality && w.constant == c1, &format!("equality on column {j} of G(1)"))?;
    }
    let col = StateVector::column(&gs, 0);
    let weak = sobolev_trial(&col, &(c0() - ratio(1, 1_000_000)), &a, &Mode::MeanZero).map_err(|e| e.to_string())?;
    check(!weak.holds, "C₀ − 10⁻⁶ should fail on column 0")?;
    let elapsed = t.elapsed();
    within(elapsed, Duration::from_secs(60), "Sobolev trials")?;
    Ok(format!("1000 + 1000 trials hold, equality on all columns of G★ and G(1), C₀ − 10⁻⁶ fails ({elapsed:.2?})"))
}

fn criterion_9() -> Result<String, String> {
    let g = buckyball();
    let census = face_census(&g).map_err(|e| e.to_string())?;
    check(g.vertex_count() == 60 && g.edge_count() == 90, "counts")?;
    check(g.is_regular(3) && g.is_connected() && g.girth() == Some(5), "cubic, connected, girth 5")?;
    check(census.pentagon_count == 12 && census.hexagon_count == 20, "faces")?;
    check(60 - 90 + census.face_count() as i64 == 2, "Euler")?;

    let mut perm: Vec<usize> = (0..60).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(SEED));
    let h = g.relabel(&perm).map_err(|e| e.to_string())?;
    let a = h.laplacian();
    check(charpoly(&a, Execution::default()).map_err(|e| e.to_string())? == product(), "relabeled charpoly")?;
    let (gs, _) = pseudo_green_with(&a, Execution::default()).map_err(|e| e.to_string())?;
    check(c0_via_diagonal(&gs).map_err(|e| e.to_string())? == c0(), "relabeled C₀")?;
    let samples: Vec<_> = (1..=33)
        .map(|k| (int(k), green_columns(&a, &int(k), &[17], Execution::Sequential).unwrap()[(17, 0)].clone()))
        .collect();
    check(fit_rational_function(&samples, 14, 15).map_err(|e| e.to_string())? == published_c(), "relabeled C(a)")?;
    Ok(format!("60/90/32, cubic, girth 5, 12 + 20 faces; criteria 1–3 invariant under seeded relabeling (seed {SEED})"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("characteristic polynomial", criterion_1),
        ("C0 three routes", criterion_2),
        ("C(a) three routes", criterion_3),
        ("eigenvalue table", criterion_4),
        ("Moore-Penrose and constant diagonals", criterion_5),
        ("limit identity", criterion_6),
        ("block reduction", criterion_7),
        ("Sobolev inequalities", criterion_8),
        ("graph combinatorics and relabeling", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
