//! The full battery of exact checks on the buckyball, as named pass/fail items.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exec::Execution;
use crate::graph::{buckyball, face_census, find_antipodal_involution, PolyhedralGraph};
use crate::green::{
    c0_via_diagonal, c0_via_trace, c_of_a_closed_form, c_of_a_fit, constant_diagonal, green_limit_entries,
    green_matrix_with, limit_at_zero, moore_penrose_check, monotonicity_scan, pseudo_green_with, CRoutes,
};
use crate::linalg::{charpoly, format_rational, int, ratio, to_f64, BigRational, IntPolynomial, RationalMatrix};
use crate::reference;
use crate::sobolev::{equality_witness, run_trials, Mode, StateVector};
use crate::spectral::{build_spectral_table, cross_validate, numeric_eigenvalues};
use crate::symmetry::{assemble_green_via_blocks, block_split, half_spectra_check};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub trials: u64,
    /// Damping values at which diagonal constancy of `G(a)` is checked.
    pub a_values: Vec<BigRational>,
    pub exec: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 1000,
            a_values: vec![ratio(1, 10), int(1), int(10)],
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub passed: bool,
    pub detail: String,
}

/// Checks keyed (and therefore ordered) by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: BTreeMap<String, Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.values().all(|c| c.passed)
    }

    fn record(&mut self, name: &str, outcome: Result<String, String>) {
        let check = match outcome {
            Ok(detail) => Check { passed: true, detail },
            Err(detail) => Check { passed: false, detail },
        };
        self.checks.insert(name.to_string(), check);
    }

    pub fn to_json(&self) -> serde_json::Value {
        let checks: serde_json::Map<String, serde_json::Value> = self
            .checks
            .iter()
            .map(|(k, c)| (k.clone(), serde_json::json!({ "passed": c.passed, "detail": c.detail })))
            .collect();
        serde_json::json!({ "passed": self.all_passed(), "checks": checks })
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Everything later checks share.
struct Base {
    graph: PolyhedralGraph,
    laplacian: RationalMatrix,
    p: IntPolynomial,
    g_star: RationalMatrix,
}

fn graph_check(g: &PolyhedralGraph) -> Result<String, String> {
    let census = face_census(g).map_err(err)?;
    let (v, e, f) = (g.vertex_count(), g.edge_count(), census.face_count());
    ensure(v == 60 && e == 90, format!("{v} vertices, {e} edges"))?;
    ensure(g.is_regular(3) && g.is_connected(), "not a connected cubic graph")?;
    ensure(g.girth() == Some(5), format!("girth {:?}", g.girth()))?;
    ensure(
        census.pentagon_count == 12 && census.hexagon_count == 20,
        format!("{} pentagons, {} hexagons", census.pentagon_count, census.hexagon_count),
    )?;
    ensure(v as i64 - e as i64 + f as i64 == 2, "Euler characteristic is not 2")?;
    Ok(format!("v={v} e={e} f={f}, cubic, girth 5, 12 pentagons, 20 hexagons"))
}

fn spectral_check(base: &Base) -> Result<String, String> {
    let table = build_spectral_table(&base.p).map_err(err)?;
    ensure(table.multiplicities() == reference::MULTIPLICITIES, format!("multiplicities {:?}", table.multiplicities()))?;
    ensure((table.trace() - 180.0).abs() <= 1e-8, format!("trace {}", table.trace()))?;
    let num = numeric_eigenvalues(&base.laplacian).map_err(err)?;
    ensure(num.residual <= 1e-10, format!("eigenpair residual {:e}", num.residual))?;
    let report = cross_validate(&num, &table).map_err(err)?;
    ensure(report.within_tolerance, format!("max deviation {:e}", report.max_deviation))?;
    Ok(format!("15 rows, max deviation {:.1e}, residual {:.1e}", report.max_deviation, num.residual))
}

fn c0_check(base: &Base) -> Result<String, String> {
    let diag = c0_via_diagonal(&base.g_star).map_err(err)?;
    let trace = c0_via_trace(&base.p).map_err(err)?;
    let published = reference::c0();
    ensure(diag == trace && trace == published, format!("diagonal {diag}, trace {trace}"))?;
    let decimal = to_f64(&diag);
    ensure(format!("{decimal:.5}") == "0.63727", format!("decimal {decimal}"))?;
    Ok(format!("{} = {decimal:.10}", format_rational(&diag)))
}

fn c_of_a_check(base: &Base, exec: Execution) -> Result<String, String> {
    let routes = CRoutes::compute(&base.laplacian, &base.p, exec).map_err(err)?;
    let c = routes.agreed().map_err(err)?;
    ensure(c.numerator().degree() == Some(14) && c.denominator().degree() == Some(15), "unexpected degrees")?;
    Ok(format!("fitted, closed-form and published agree; C(1) = {}", format_rational(&c.eval(&int(1)).unwrap_or_default())))
}

fn moore_penrose(base: &Base) -> Result<String, String> {
    let r = moore_penrose_check(&base.laplacian, &base.g_star).map_err(err)?;
    ensure(r.all_hold(), format!("{r:?}"))?;
    Ok("four axioms, A·G★ = G★·A = I − E₀, G★·E₀ = E₀·G★ = 0".into())
}

fn diagonal_check(base: &Base, a_values: &[BigRational], exec: Execution) -> Result<String, String> {
    let c0 = constant_diagonal(&base.g_star).map_err(err)?;
    let closed = c_of_a_closed_form(&base.p);
    let mut parts = vec![format!("G★: {}", format_rational(&c0))];
    for a in a_values {
        let (g, _) = green_matrix_with(&base.laplacian, a, exec).map_err(err)?;
        let c = constant_diagonal(&g).map_err(err)?;
        ensure(Some(&c) == closed.eval(a).as_ref(), format!("diagonal of G({}) is not C(a)", format_rational(a)))?;
        ensure(g.trace() == &c * int(60), "trace is not 60·C(a)")?;
        parts.push(format!("G({}): {}", format_rational(a), format_rational(&c)));
    }
    Ok(parts.join("; "))
}

fn limit_check(base: &Base, exec: Execution) -> Result<String, String> {
    let c = c_of_a_closed_form(&base.p);
    let value = limit_at_zero(&c, &int(60)).map_err(err)?;
    ensure(value == reference::c0(), format!("limit {value}"))?;
    ensure(limit_at_zero(&c, &int(59)).is_err(), "1/(59a) should leave a pole")?;
    // entrywise on column 0
    let entries: Vec<(usize, usize)> = (0..60).map(|i| (i, 0)).collect();
    let limits = green_limit_entries(&base.laplacian, &base.g_star, 15, &entries, exec).map_err(err)?;
    let bad: Vec<usize> = limits.iter().filter(|e| !e.holds).map(|e| e.row).collect();
    ensure(bad.is_empty(), format!("entry limits fail at rows {bad:?}"))?;
    Ok(format!("C(a) − 1/(60a) → {} at 0; G(a) − E₀/a → G★ on column 0", format_rational(&value)))
}

fn monotonicity_check(base: &Base) -> Result<String, String> {
    let c = c_of_a_closed_form(&base.p);
    let points = [ratio(1, 10), ratio(1, 2), int(1), int(2), int(5), int(10)];
    ensure(monotonicity_scan(&c, &points), "C(a) is not strictly decreasing")?;
    Ok("strictly decreasing on 1/10, 1/2, 1, 2, 5, 10".into())
}

fn spectral_consistency(base: &Base) -> Result<String, String> {
    let table = build_spectral_table(&base.p).map_err(err)?;
    let exact = to_f64(&c_of_a_closed_form(&base.p).eval(&int(1)).unwrap_or_default());
    let approx = table.mean_resolvent(1.0);
    ensure((exact - approx).abs() <= 1e-9, format!("{approx} vs {exact}"))?;
    Ok(format!("spectral sum at a=1 matches C(1) to {:.1e}", (exact - approx).abs()))
}

fn block_check(base: &Base, exec: Execution) -> Result<String, String> {
    let sigma = find_antipodal_involution(&base.graph).map_err(err)?;
    let split = block_split(&base.laplacian, &sigma).map_err(err)?;
    ensure(split.conjugation_check().map_err(err)?, "J⁻¹AJ is not diag(A+, A-)")?;
    half_spectra_check(&split, &base.p, exec).map_err(err)?;
    let (_, full_stats) = pseudo_green_with(&base.laplacian, exec).map_err(err)?;
    let blocks = assemble_green_via_blocks(&split, None, exec).map_err(err)?;
    ensure(blocks.matrix == base.g_star, "block-route G★ differs")?;
    let (g1, _) = green_matrix_with(&base.laplacian, &int(1), exec).map_err(err)?;
    let blocks1 = assemble_green_via_blocks(&split, Some(&int(1)), exec).map_err(err)?;
    ensure(blocks1.matrix == g1, "block-route G(1) differs")?;
    let half = blocks.total_stats().updates;
    ensure(half < full_stats.updates, format!("half solves cost {half} ≥ {}", full_stats.updates))?;
    Ok(format!("block route exact; {half} vs {} elimination updates", full_stats.updates))
}

fn sobolev_mean_zero(base: &Base, opts: &VerifyOptions) -> Result<String, String> {
    let c0 = reference::c0();
    let records = run_trials(&base.laplacian, &c0, &Mode::MeanZero, opts.seed, opts.trials, opts.exec).map_err(err)?;
    let failed: Vec<u64> = records.iter().filter(|r| !r.trial.holds).map(|r| r.index).collect();
    ensure(failed.is_empty(), format!("inequality fails for trials {failed:?}"))?;
    for j in 0..60 {
        let w = equality_witness(&base.g_star, &base.laplacian, j, &Mode::MeanZero).map_err(err)?;
        ensure(w.equality && w.constant == c0, format!("no equality on column {j}"))?;
    }
    let weaker = &c0 - ratio(1, 1_000_000);
    let column = StateVector::column(&base.g_star, 0);
    let t = crate::sobolev::sobolev_trial(&column, &weaker, &base.laplacian, &Mode::MeanZero).map_err(err)?;
    ensure(!t.holds, "C₀ − 10⁻⁶ still holds on column 0")?;
    Ok(format!("{} trials hold, equality on 60 columns, C₀ − 10⁻⁶ fails", records.len()))
}

fn sobolev_damped(base: &Base, opts: &VerifyOptions) -> Result<String, String> {
    let a = int(1);
    let (g, _) = green_matrix_with(&base.laplacian, &a, opts.exec).map_err(err)?;
    let c = constant_diagonal(&g).map_err(err)?;
    let mode = Mode::Damped(a);
    let records = run_trials(&base.laplacian, &c, &mode, opts.seed, opts.trials, opts.exec).map_err(err)?;
    ensure(records.iter().all(|r| r.trial.holds), "damped inequality fails")?;
    for j in 0..60 {
        let w = equality_witness(&g, &base.laplacian, j, &mode).map_err(err)?;
        ensure(w.equality, format!("no equality on column {j} of G(1)"))?;
    }
    Ok(format!("{} trials hold at a=1, equality on 60 columns of G(1)", records.len()))
}

/// Charpoly, `C₀` and `C(a)` of a seeded random relabeling.
fn relabel_check(base: &Base, opts: &VerifyOptions) -> Result<String, String> {
    let mut perm: Vec<usize> = (0..60).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(opts.seed));
    let h = base.graph.relabel(&perm).map_err(err)?;
    let a = h.laplacian();
    let p = charpoly(&a, opts.exec).map_err(err)?;
    ensure(p == base.p, "charpoly changed under relabeling")?;
    let (gs, _) = pseudo_green_with(&a, opts.exec).map_err(err)?;
    ensure(c0_via_diagonal(&gs).map_err(err)? == reference::c0(), "C₀ changed under relabeling")?;
    let fitted = c_of_a_fit(&a, 14, 15, opts.exec).map_err(err)?;
    ensure(fitted == reference::damped_constant(), "C(a) changed under relabeling")?;
    Ok(format!("invariant under relabeling with seed {}", opts.seed))
}

pub fn verify_all(opts: &VerifyOptions) -> VerificationReport {
    let mut report = VerificationReport::default();
    let graph = buckyball();
    report.record("graph_combinatorics", graph_check(&graph));
    let laplacian = graph.laplacian();
    let p = match charpoly(&laplacian, opts.exec) {
        Ok(p) => p,
        Err(e) => {
            report.record("charpoly_product", Err(e.to_string()));
            return report;
        }
    };
    report.record(
        "charpoly_product",
        ensure(p == reference::charpoly_product(), "charpoly differs from the factor product")
            .map(|_| "equals the product of the eight factors".into()),
    );
    let g_star = match pseudo_green_with(&laplacian, opts.exec) {
        Ok((g, _)) => g,
        Err(e) => {
            report.record("moore_penrose", Err(e.to_string()));
            return report;
        }
    };
    let base = Base { graph, laplacian, p, g_star };
    report.record("spectral_table", spectral_check(&base));
    report.record("spectral_consistency", spectral_consistency(&base));
    report.record("c0_routes", c0_check(&base));
    report.record("c_of_a_routes", c_of_a_check(&base, opts.exec));
    report.record("moore_penrose", moore_penrose(&base));
    report.record("diagonal_constancy", diagonal_check(&base, &opts.a_values, opts.exec));
    report.record("limit_identity", limit_check(&base, opts.exec));
    report.record("monotonicity", monotonicity_check(&base));
    report.record("block_reduction", block_check(&base, opts.exec));
    report.record("sobolev_mean_zero", sobolev_mean_zero(&base, opts));
    report.record("sobolev_damped", sobolev_damped(&base, opts));
    report.record("relabel_invariance", relabel_check(&base, opts));
    report
}
