//! Seeded verification suites. Each row names the identity it checks and
//! records the exact quantities compared.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use weilres::algebra::{AlgebraElement, FreeExtension};
use weilres::galois::{fixed_points, verify_descent, GroupAction};
use weilres::norms::{non_quasicompact_witness, spectral_radius, spectral_value, MonicPoly};
use weilres::random;
use weilres::ring::{Elem, FieldEmbedding, FieldKind, FieldSpec, LogNorm, Poly};
use weilres::weil::{points_over, psi_apply, restrict, Presentation, PresentationBase};
use weilres::Error;

use crate::document::{field_json, Document};
use crate::error::{CliError, CliResult};

pub const SUITES: [&str; 5] = ["adjunction", "products", "descent", "example26", "sigma"];

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub rows: Vec<Value>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64) -> Self {
        SuiteReport { suite: suite.into(), seed, rows: Vec::new() }
    }

    fn push(&mut self, identity: &str, pass: bool, mut detail: Value) {
        detail["identity"] = json!(identity);
        detail["pass"] = json!(pass);
        self.rows.push(detail);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r["pass"] == json!(true))
    }

    pub fn to_json(&self) -> Value {
        let failed = self.rows.iter().filter(|r| r["pass"] != json!(true)).count();
        json!({
            "command": "verify",
            "suite": self.suite,
            "seed": self.seed,
            "status": if self.passed() { "PASS" } else { "FAIL" },
            "rows_total": self.rows.len(),
            "rows_failed": failed,
            "rows": self.rows,
        })
    }
}

pub fn run(doc: &Document, suite: &str, seed: u64) -> CliResult<SuiteReport> {
    match suite {
        "adjunction" => adjunction(doc, seed),
        "products" => products(doc, seed),
        "descent" => descent(doc, seed),
        "example26" => example26(doc, seed),
        "sigma" => sigma(doc, seed),
        other => Err(CliError::Input(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    }
}

/// `GF(q^n)` over `GF(q)` as `F_q[t]/(m)` with the default modulus of
/// `GF(q^n)`.
pub fn finite_extension(q: u64, n: u32) -> CliResult<Arc<FreeExtension>> {
    let base = FieldSpec::prime(q)?;
    let big = FieldSpec::gf(q.pow(n))?;
    let FieldKind::Finite { modulus, .. } = big.kind() else {
        return Err(CliError::Input(format!("GF({q}^{n}) is not a proper extension")));
    };
    let terms: Vec<_> = modulus.iter().enumerate().map(|(k, c)| (vec![k as u32], base.from_int(*c as i64))).collect();
    let m = Poly::from_terms(&base, vec!["t".into()], terms)?;
    Ok(FreeExtension::from_minimal_polynomial(&base, &m, "t")?)
}

/// Draws until every generator involves a variable, so no row is
/// trivially empty.
fn nondegenerate(rng: &mut ChaCha8Rng, mut draw: impl FnMut(&mut ChaCha8Rng) -> Presentation) -> Presentation {
    loop {
        let p = draw(rng);
        let live = p.generators().iter().all(|g| g.used_vars().iter().any(|v| p.variables().contains(v)));
        if live {
            return p;
        }
    }
}

fn sorted_by_index(field: &FieldSpec, mut pts: Vec<Vec<Elem>>) -> Vec<Vec<Elem>> {
    pts.sort_by_key(|p| p.iter().map(|e| field.index_of(e)).collect::<Vec<_>>());
    pts
}

/// Compares `R(X)(K)` with `X(K')` through `Ψ`, for a finite field
/// extension `K'/K`.
fn adjunction_row(p: &Presentation, ext: &Arc<FreeExtension>) -> CliResult<Value> {
    let r = restrict(p, ext)?;
    let model = ext.as_finite_field()?;
    let left = points_over(&r.presentation, ext.base())?;
    let right = points_over(p, &model.field)?;
    let mut images = Vec::with_capacity(left.len());
    for pt in &left {
        let elems = psi_apply(&r, pt)?;
        images.push(elems.iter().map(|b| model.to_field(b)).collect::<weilres::Result<Vec<_>>>()?);
    }
    let n_images = images.len();
    let mut images = sorted_by_index(&model.field, images);
    images.dedup();
    let bijection_ok = images.len() == n_images && images == right;
    Ok(json!({
        "base": field_json(ext.base()),
        "extension_degree": ext.rank(),
        "generators": p.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "count_restricted": left.len(),
        "count_source": right.len(),
        "bijection_ok": bijection_ok,
    }))
}

const ADJUNCTION: &str = "|R(X)(K)| = |X(K')| with Psi a bijection";

fn adjunction(doc: &Document, seed: u64) -> CliResult<SuiteReport> {
    let mut report = SuiteReport::new("adjunction", seed);
    let mut rng = random::rng(seed);
    let systems = doc.options.systems.unwrap_or(10);
    let exts = if doc.has_extension() {
        let e = doc.extension()?;
        if !e.base().is_finite() {
            return Err(CliError::Input("adjunction suite needs a finite base field".into()));
        }
        vec![e]
    } else {
        let f2 = FieldSpec::prime(2)?;
        let golden = Presentation::parse(PresentationBase::Field(f2), &["u"], &["u^2 + u + 1"])?;
        let e = finite_extension(2, 2)?;
        push_adjunction(&mut report, adjunction_row(&golden.with_provenance("golden"), &e)?);
        vec![e, finite_extension(2, 3)?, finite_extension(3, 2)?]
    };
    for (_, p) in doc.presentations()? {
        push_adjunction(&mut report, adjunction_row(&p, &exts[0])?);
    }
    for e in &exts {
        for i in 0..systems {
            let nvars = rng.gen_range(1..=2);
            let ngens = rng.gen_range(1..=2);
            let p = nondegenerate(&mut rng, |r| random::extension_system(r, e, nvars, ngens, 3))
                .with_provenance(format!("random {i}"));
            push_adjunction(&mut report, adjunction_row(&p, e)?);
        }
    }
    Ok(report)
}

fn push_adjunction(report: &mut SuiteReport, row: Value) {
    let pass = row["count_restricted"] == row["count_source"] && row["bijection_ok"] == json!(true);
    report.push(ADJUNCTION, pass, row);
}

fn doc_or_default_extension(doc: &Document) -> CliResult<Arc<FreeExtension>> {
    if doc.has_extension() {
        let e = doc.extension()?;
        if !e.base().is_finite() {
            return Err(CliError::Input(format!("suite needs a finite base field, got {}", e.base())));
        }
        Ok(e)
    } else {
        finite_extension(3, 2)
    }
}

/// Base enumeration budget for the base-change rows of the products suite.
const BASE_CHANGE_BUDGET: u64 = 100_000;

fn products(doc: &Document, seed: u64) -> CliResult<SuiteReport> {
    let mut report = SuiteReport::new("products", seed);
    let mut rng = random::rng(seed);
    let ext = doc_or_default_extension(doc)?;
    let k = ext.base().clone();
    let pairs = doc.options.pairs.unwrap_or(20);
    let mut fields = doc.test_fields(&[])?;
    if fields.is_empty() {
        let q = k.order().expect("finite base");
        fields = [1u32, 2, 3]
            .iter()
            .filter_map(|&m| q.checked_pow(m).filter(|&s| s <= 100))
            .map(FieldSpec::gf)
            .collect::<weilres::Result<_>>()?;
    }
    let mut firsts = Vec::new();
    for i in 0..pairs {
        let (n1, g1) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let (n2, g2) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let p1 = nondegenerate(&mut rng, |r| random::extension_system(r, &ext, n1, g1, 3));
        let p2 = nondegenerate(&mut rng, |r| random::extension_system(r, &ext, n2, g2, 3));
        let whole = restrict(&p1.product(&p2)?, &ext)?;
        let parts = restrict(&p1, &ext)?.product(&restrict(&p2, &ext)?)?;
        let lhs = whole.presentation.canonical_generators();
        let rhs = parts.presentation.canonical_generators();
        let same_vars = whole.variables() == parts.variables();
        report.push(
            "R(X1 x X2) = R(X1) x R(X2)",
            same_vars && lhs == rhs,
            json!({
                "pair": i,
                "variables": whole.variables(),
                "generators_whole": lhs.len(),
                "generators_product": rhs.len(),
            }),
        );
        firsts.push(p1);
    }
    for field in &fields {
        let Ok(embed) = FieldEmbedding::find(&k, field) else {
            continue;
        };
        let q = field.order().expect("finite test field");
        for (i, p) in firsts.iter().enumerate() {
            let d = (p.variables().len() * ext.rank()) as u32;
            if q.checked_pow(d).is_none_or(|s| s > BASE_CHANGE_BUDGET) {
                continue;
            }
            let r = restrict(p, &ext)?;
            let changed_after = r.base_change(&embed)?;
            let ext_f = ext.base_change(&embed)?;
            let changed_before = restrict(&p.base_change(&embed)?, &ext_f)?;
            let same =
                changed_after.presentation.canonical_generators() == changed_before.presentation.canonical_generators();
            let a = points_over(&changed_after.presentation, field)?.len();
            let b = points_over(&changed_before.presentation, field)?.len();
            let c = points_over(&r.presentation, field)?.len();
            report.push(
                "R(X) x_K F = R(X x_K F) on F-points",
                same && a == b && b == c,
                json!({
                    "pair": i,
                    "field": field_json(field),
                    "count_base_changed_restriction": a,
                    "count_restriction_of_base_change": b,
                    "count_restriction": c,
                    "generators_equal": same,
                }),
            );
        }
    }
    Ok(report)
}

/// Tame `(q, n)` pairs for random descent triples.
const TAME: [(u64, u32); 4] = [(3, 2), (2, 3), (5, 2), (7, 2)];

fn descent_rows(
    report: &mut SuiteReport,
    label: &str,
    x: &Presentation,
    ext: &Arc<FreeExtension>,
    act: &GroupAction,
    fields: &[FieldSpec],
) -> CliResult<()> {
    let d = verify_descent(x, ext, act, fields)?;
    for row in &d.rows {
        report.push(
            "R(X_K')^G = X",
            row.count_left == row.count_right && row.bijection_ok,
            json!({
                "presentation": label,
                "field": row.field,
                "count_left": row.count_left,
                "count_right": row.count_right,
                "bijection_ok": row.bijection_ok,
                "fixed_generators": d.fixed.presentation.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(())
}

fn descent(doc: &Document, seed: u64) -> CliResult<SuiteReport> {
    let mut report = SuiteReport::new("descent", seed);
    let mut rng = random::rng(seed);
    let ext = doc_or_default_extension(doc)?;
    let act = doc.action(&ext)?;
    let mut fields = doc.test_fields(&[])?;
    if fields.is_empty() {
        let q = ext.base().order().expect("finite base");
        fields = (1..=3u32)
            .filter_map(|m| q.checked_pow(m).filter(|&s| s <= 100))
            .map(FieldSpec::gf)
            .collect::<weilres::Result<_>>()?;
    }
    for (name, x) in doc.presentations()? {
        if !matches!(x.base(), PresentationBase::Field(_)) {
            return Err(CliError::Input(format!("descent suite: presentation {name:?} must be over the base field")));
        }
        descent_rows(&mut report, &name, &x, &ext, &act, &fields)?;
    }
    let triples = doc.options.systems.unwrap_or(5);
    for i in 0..triples {
        let (q, n) = TAME[i % TAME.len()];
        let e = finite_extension(q, n)?;
        let frob = GroupAction::frobenius(&e)?;
        let nvars = rng.gen_range(1..=2);
        let ngens = rng.gen_range(1..=2);
        let x = nondegenerate(&mut rng, |r| random::field_system(r, e.base(), nvars, ngens, 3));
        let fs = [FieldSpec::prime(q)?, FieldSpec::gf(q.pow(n))?];
        descent_rows(&mut report, &format!("random {i} over GF({q}), degree {n}"), &x, &e, &frob, &fs)?;
    }
    // wild input must be refused
    let e = finite_extension(2, 2)?;
    let x = Presentation::parse(PresentationBase::Field(e.base().clone()), &["u"], &["u^2 + 1"])?;
    let refused =
        matches!(fixed_points(&GroupAction::frobenius(&e)?, &restrict(&x, &e)?, false), Err(Error::WildAction { .. }));
    report.push("wild action (|G|, p) > 1 is rejected", refused, json!({"base": "GF(2)", "order": 2}));
    Ok(report)
}

fn example26(doc: &Document, seed: u64) -> CliResult<SuiteReport> {
    let mut report = SuiteReport::new("example26", seed);
    let ext = if doc.has_extension() {
        doc.extension()?
    } else {
        let f = match doc.field()?.kind() {
            FieldKind::FunctionField { .. } => doc.field()?,
            _ => FieldSpec::function_field(2, num_rational::BigRational::new(1.into(), 2.into()))?,
        };
        let p = f.characteristic();
        let m = Poly::parse_with_vars(&f, &format!("t^{p} - [x]"), &["t".into()])?;
        FreeExtension::from_minimal_polynomial(&f, &m, "t")?
    };
    let threshold = doc.threshold(None)?.unwrap_or(LogNorm::from_int(3));
    let w = non_quasicompact_witness(&ext, &threshold)?;
    let p = ext.base().characteristic() as u32;
    let k = w.k;
    report.push(
        "b_k = x^(-k)(y - t) is nilpotent with lognorm(x^(-k)) > threshold",
        w.holds(),
        json!({
            "k": k,
            "element": w.element.to_text(),
            "nilpotency_order": w.nilpotency_order,
            "lognorm_xk": w.lognorm_xk.to_string(),
            "threshold": w.threshold.to_string(),
        }),
    );
    let power_zero = w.element.pow(p).is_zero();
    let matrix_zero = w.element.mult_matrix().pow(p).is_zero();
    report.push(
        "b_k^p = 0",
        power_zero && matrix_zero,
        json!({"p": p, "element_power_zero": power_zero, "matrix_power_zero": matrix_zero}),
    );
    report.push(
        "rho(b_k) = -inf",
        w.spectral_radius.is_neg_inf(),
        json!({"spectral_radius": w.spectral_radius.to_string()}),
    );
    let f = ext.base();
    for j in 1..=k + 2 {
        let mut den = vec![0u64; j as usize + 1];
        den[j as usize] = 1;
        let xk = f.ratfn(&[1], &den)?;
        let ln = f.lognorm(&xk)?;
        report.push(
            "lognorm(x^(-k)) = k",
            ln == LogNorm::from_int(j as i64),
            json!({"k": j, "lognorm": ln.to_string()}),
        );
    }
    Ok(report)
}

/// Max coordinate log-norm of a constant element.
fn coordinate_norm(b: &AlgebraElement) -> CliResult<LogNorm> {
    let f = b.ext().base();
    let mut best = LogNorm::NegInf;
    for c in b.scalar_coords().ok_or_else(|| CliError::Input("element has parameters".into()))? {
        best = best.max(f.lognorm(&c)?);
    }
    Ok(best)
}

/// Checks `ρ ≤ N_m/m` and `N_m ≤ m·ρ + spread` for `m ≤ max_m`, where
/// `N_m` is the coordinate norm of `b^m`. With integral structure
/// constants the first is submultiplicativity and the second follows from
/// the recurrence of the characteristic polynomial.
pub fn power_bound_holds(b: &AlgebraElement, max_m: u32) -> CliResult<bool> {
    let rho = spectral_radius(b)?;
    let n = b.ext().rank() as u32;
    let mut norms = vec![LogNorm::zero()];
    let mut pw = b.ext().one();
    for _ in 1..=max_m.max(n) {
        pw = pw.mul(b);
        norms.push(coordinate_norm(&pw)?);
    }
    if rho.is_neg_inf() {
        return Ok(norms[n as usize..].iter().all(|x| x.is_neg_inf()));
    }
    let mut spread = LogNorm::NegInf;
    for (i, ni) in norms.iter().enumerate().take(n as usize) {
        if !ni.is_neg_inf() {
            spread = spread.max(ni.minus(&rho.mul_int(i as u64))?);
        }
    }
    for (m, nm) in norms.iter().enumerate().skip(1) {
        let lower = rho.mul_int(m as u64) <= *nm;
        let upper = *nm <= rho.mul_int(m as u64) + spread.clone();
        if !(lower && upper) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn monic_pair(rng: &mut ChaCha8Rng, f: &FieldSpec) -> (MonicPoly, MonicPoly) {
    let (dp, dq) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let p = random::monic(rng, f, dp);
    let q = random::monic(rng, f, dq);
    (p, q)
}

fn sigma(doc: &Document, seed: u64) -> CliResult<SuiteReport> {
    let mut report = SuiteReport::new("sigma", seed);
    let mut rng = random::rng(seed);
    let cases = doc.options.systems.unwrap_or(200);
    let half = num_rational::BigRational::new(1.into(), 2.into());
    for f in [FieldSpec::padic(2)?, FieldSpec::function_field(3, half.clone())?] {
        let mut failures = 0;
        for _ in 0..cases {
            let (p, q) = monic_pair(&mut rng, &f);
            if spectral_value(&p.mul(&q)?)? != spectral_value(&p)?.max(spectral_value(&q)?) {
                failures += 1;
            }
        }
        report.push(
            "sigma(pq) = max(sigma(p), sigma(q))",
            failures == 0,
            json!({"field": field_json(&f), "cases": cases, "failures": failures}),
        );
    }
    let q2 = FieldSpec::padic(2)?;
    let fixed = [
        ("t^2", "t", LogNorm::NegInf),
        ("t^2 - 2", "1 + t", LogNorm::zero()),
        ("t^2 - 2", "t", LogNorm::from_ratio(-1, 2)),
    ];
    for (m, b, expected) in fixed {
        let e = FreeExtension::from_minimal_polynomial(&q2, &Poly::parse(&q2, m)?, "t")?;
        let el = crate::document::parse_element(&e, b)?;
        let rho = spectral_radius(&el)?;
        report.push(
            "rho(b) = sigma(chi_b)",
            rho == expected,
            json!({"field": field_json(&q2), "minimal_polynomial": m, "element": b, "spectral_radius": rho.to_string(), "expected": expected.to_string()}),
        );
    }
    let ff = FieldSpec::function_field(3, half)?;
    let elements = (cases / 4).max(1);
    for m in ["t^2 - [x]", "t^3 - [x]*t - 1"] {
        let e = FreeExtension::from_minimal_polynomial(&ff, &Poly::parse(&ff, m)?, "t")?;
        let mut failures = 0;
        for _ in 0..elements {
            if !power_bound_holds(&random::algebra_element(&mut rng, &e), 8)? {
                failures += 1;
            }
        }
        report.push(
            "rho(b) = lim |b^m|^(1/m) = sigma(chi_b)",
            failures == 0,
            json!({"field": field_json(&ff), "minimal_polynomial": m, "cases": elements, "failures": failures}),
        );
    }
    Ok(report)
}
