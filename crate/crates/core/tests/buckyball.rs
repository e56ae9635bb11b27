use c60_core::exec::Execution;
use c60_core::graph::{buckyball, find_antipodal_involution};
use c60_core::green::{
    c_of_a_closed_form, green_limit_entries, green_matrix, limit_identity_check, pseudo_green, GreenBundle, GreenError,
};
use c60_core::linalg::{charpoly, determinant, int, ratio, BigRational, IntPolynomial, RatPolynomial};
use c60_core::reference;
use c60_core::sobolev::{energy, energy_a, equality_witness, reproducing_check, schwarz_check, Mode, StateVector};
use c60_core::spectral::{build_spectral_table, cross_validate, numeric_eigenvalues, SpectralError};
use c60_core::symmetry::block_split;
use c60_core::verify::{verify_all, VerifyOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn determinant_of_shifted_laplacian() {
    let a = buckyball().laplacian();
    assert_eq!(determinant(&a), int(0));
    // det(A + I) = (−1)⁶⁰·P(−1)
    let p = reference::charpoly_product();
    assert_eq!(determinant(&a.add_scalar_identity(&int(1))), p.eval(&int(-1)));
}

#[test]
fn spectral_table_rows() {
    let table = build_spectral_table(&reference::charpoly_product()).unwrap();
    assert_eq!(table.entries.len(), 15);
    assert_eq!(table.multiplicities(), reference::MULTIPLICITIES);
    let row = table.entries.iter().find(|e| e.closed_form_hint == "(5 - √13)/2").unwrap();
    assert_eq!(row.multiplicity, 5);
    assert!((row.numeric - 0.697224362268).abs() < 1e-11);
    for (e, approx) in table.entries.iter().zip(reference::APPROXIMATE_EIGENVALUES) {
        assert!((e.numeric - approx).abs() < 0.01, "{} vs {approx}", e.numeric);
    }
    // quadratic factors have positive non-square discriminants
    for (f, _) in reference::charpoly_factors() {
        if f.degree() == Some(2) {
            let disc: c60_core::linalg::BigInt = f.coeff(1) * f.coeff(1) - 4 * f.coeff(0) * f.coeff(2);
            let r = num_integer::Roots::sqrt(&disc);
            assert!(disc > 0.into() && &r * &r != disc);
        }
    }
    let csv = table.to_csv();
    assert_eq!(csv.lines().count(), 16);
    assert!(csv.starts_with("factor,root_index,numeric,multiplicity"));
}

#[test]
fn perturbed_spectrum_is_rejected() {
    let table = build_spectral_table(&reference::charpoly_product()).unwrap();
    let mut num = numeric_eigenvalues(&buckyball().laplacian()).unwrap();
    assert!(cross_validate(&num, &table).unwrap().within_tolerance);
    assert!(num.values[59] < 6.0);
    num.values[20] += 1e-3;
    num.values.sort_by(f64::total_cmp);
    assert!(matches!(cross_validate(&num, &table), Err(SpectralError::MultiplicityMismatch(_))));
}

#[test]
fn green_at_one_and_seventh() {
    let a = buckyball().laplacian();
    let g = green_matrix(&a, &int(1)).unwrap();
    assert!(g.diagonal().iter().all(|d| *d == ratio(28136010, 87119712)));
    let g7 = green_matrix(&a, &ratio(1, 7)).unwrap();
    let id = a.add_scalar_identity(&ratio(1, 7)).try_mul(&g7).unwrap();
    assert_eq!(id, c60_core::linalg::RationalMatrix::identity(60));
    assert!(matches!(green_matrix(&a, &int(0)), Err(GreenError::NonPositiveParameter(_))));
}

#[test]
fn closed_form_denominator_is_squarefree_part() {
    let p = reference::charpoly_product();
    let c = c_of_a_closed_form(&p);
    let sq = RatPolynomial::from_int(&p.compose_neg()).squarefree_part();
    let (prim, _) = sq.primitive_integer();
    let den = c.denominator();
    assert!(den == &prim || den == &-&prim);
    assert_eq!(den.degree(), Some(15));
}

#[test]
fn limit_with_wrong_residue() {
    let c = reference::damped_constant();
    assert!(limit_identity_check(&c, &reference::c0(), 60).unwrap());
    assert!(matches!(limit_identity_check(&c, &reference::c0(), 59), Err(GreenError::PoleRemains { .. })));
    let pole = c60_core::linalg::RationalFunction::new(&RatPolynomial::one(), &RatPolynomial::new(vec![int(0), int(60)]))
        .unwrap();
    let r = c.sub(&pole);
    assert_eq!(r.eval(&int(1)), Some(c.eval(&int(1)).unwrap() - ratio(1, 60)));
    assert!(c.eval(&int(1)) > c.eval(&int(2)));
}

#[test]
fn entrywise_limit_on_random_entries() {
    let a = buckyball().laplacian();
    let gs = pseudo_green(&a).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let entries: Vec<(usize, usize)> = (0..20).map(|_| (rng.gen_range(0..60), rng.gen_range(0..60))).collect();
    let out = green_limit_entries(&a, &gs, 15, &entries, Execution::default()).unwrap();
    assert!(out.iter().all(|e| e.holds));
}

#[test]
fn sobolev_properties() {
    let g = buckyball();
    let a = g.laplacian();
    let bundle = GreenBundle::build(&a, &reference::charpoly_product(), Execution::default()).unwrap();
    assert_eq!(bundle.c0, reference::c0());
    assert_eq!(bundle.c(&int(1)).unwrap(), ratio(28136010, 87119712));
    assert_eq!(energy(&StateVector::delta(60, 0), &a).unwrap(), int(3));
    assert_eq!(energy_a(&StateVector::constant(60, int(1)), &a, &int(1)).unwrap(), int(60));
    assert_eq!(energy_a(&StateVector::delta(60, 0), &a, &int(2)).unwrap(), int(5));

    // indicator of a pentagon: five edges leave it
    let census = c60_core::graph::face_census(&g).unwrap();
    let pent = census.faces.iter().find(|f| f.len() == 5).unwrap();
    let u = StateVector::new((0..60).map(|i| int(pent.contains(&i) as i64)).collect());
    let leaving = g.edges().iter().filter(|(i, j)| pent.contains(i) != pent.contains(j)).count();
    assert_eq!(energy(&u, &a).unwrap(), int(leaving as i64));
    assert_eq!(leaving, 5);

    for k in 0..5 {
        let u = StateVector::random(60, 99, k, true);
        assert!(reproducing_check(&u, &bundle.g_star, &a, &Mode::MeanZero).unwrap().holds);
        assert!((0..60).all(|j| schwarz_check(&u, &bundle.g_star, &a, &bundle.c0, j).unwrap()));
    }
    let g1 = bundle.green(&int(1)).unwrap();
    let w = equality_witness(&g1, &a, 17, &Mode::Damped(int(1))).unwrap();
    assert!(w.equality);
    assert_eq!(w.lhs, &w.constant * &w.constant);

    // doubling a column scales both sides by four
    let col = StateVector::column(&bundle.g_star, 0).scale(&int(2));
    let e = energy(&col, &a).unwrap();
    assert_eq!(e, &bundle.c0 * int(4));
    assert_eq!(col.max_abs_squared(), &bundle.c0 * &e);
}

#[test]
fn involution_puts_laplacian_in_block_form() {
    let g = buckyball();
    let split = block_split(&g.laplacian(), &find_antipodal_involution(&g).unwrap()).unwrap();
    assert!(split.a0.diagonal().iter().all(|d| *d == int(3)));
    let ones = vec![int(1); 30];
    assert!(split.a_plus.mul_vec(&ones).unwrap().iter().all(|x| *x == int(0)));
    let plus = charpoly(&split.a_plus, Execution::default()).unwrap();
    assert_eq!(plus.degree(), Some(30));
    assert_eq!(plus.coeff(0), 0.into());
    let j = split.to_json(None);
    assert_eq!(j["a0"].as_array().unwrap().len(), 30);
}

#[test]
fn verification_report_passes() {
    let opts = VerifyOptions { trials: 25, seed: 3, ..Default::default() };
    let report = verify_all(&opts);
    for (name, c) in &report.checks {
        assert!(c.passed, "{name}: {}", c.detail);
    }
    assert_eq!(report.checks.len(), 14);
    let json = report.to_json();
    assert_eq!(json["passed"], true);
}

#[test]
fn reference_numerator_is_integer_polynomial() {
    let c = reference::damped_constant();
    assert_eq!(c.numerator(), &IntPolynomial::from_i64(&reference::DAMPED_NUMERATOR));
    let x: BigRational = c.eval(&ratio(1, 10)).unwrap();
    assert!(x > c.eval(&int(1)).unwrap());
}
