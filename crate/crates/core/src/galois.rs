//! Finite group actions on free extensions, the induced action on Weil
//! restrictions, fixed-point presentations and descent checks.

use std::sync::Arc;

use num_integer::Integer;

use crate::algebra::{AlgebraElement, FreeExtension};
use crate::error::{Error, Result};
use crate::ring::{Elem, FieldEmbedding, FieldKind, FieldSpec, Poly};
use crate::weil::{points_over, psi_apply, restrict, Presentation, PresentationBase, RestrictionResult};

/// A finite group acting on an extension by base-linear automorphisms.
/// Element 0 is the identity; `table[g][h]` is the index of `g∘h`;
/// column `j` of `matrices[g]` holds the coordinates of `g(e_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAction {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    matrices: Vec<Vec<Vec<Elem>>>,
}

/// Outcome of [`validate_action`].
#[derive(Clone, Debug, PartialEq)]
pub struct ActionReport {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

impl GroupAction {
    /// Unchecked constructor; see [`validate_action`].
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>, matrices: Vec<Vec<Vec<Elem>>>) -> Self {
        GroupAction { names, table, matrices }
    }

    pub fn trivial(ext: &FreeExtension) -> Self {
        GroupAction { names: vec!["id".into()], table: vec![vec![0]], matrices: vec![identity(ext.base(), ext.rank())] }
    }

    /// The cyclic group generated by `b ↦ b^p` on `F_p[t]/(m)`.
    pub fn frobenius(ext: &Arc<FreeExtension>) -> Result<Self> {
        let p = match ext.base().kind() {
            FieldKind::Prime { p } => *p,
            _ => return Err(Error::unsupported("Frobenius needs a prime base field")),
        };
        ext.as_finite_field()?;
        let n = ext.rank();
        let mut names = Vec::with_capacity(n);
        let mut matrices = Vec::with_capacity(n);
        for k in 0..n {
            names.push(match k {
                0 => "id".to_string(),
                1 => "frob".to_string(),
                k => format!("frob^{k}"),
            });
            let e = u32::try_from(p.pow(k as u32)).map_err(|_| Error::ResourceBound("Frobenius power".into()))?;
            let cols: Vec<Vec<Elem>> =
                (0..n).map(|j| ext.basis(j).pow(e).scalar_coords().expect("scalar extension")).collect();
            matrices.push((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect());
        }
        let table = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
        Ok(GroupAction { names, table, matrices })
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn matrices(&self) -> &[Vec<Vec<Elem>>] {
        &self.matrices
    }

    /// `g(b)`.
    pub fn apply(&self, g: usize, b: &AlgebraElement) -> AlgebraElement {
        let m = &self.matrices[g];
        let f = b.ext().base();
        let coords = m
            .iter()
            .map(|row| row.iter().zip(b.coords()).fold(Poly::zero(f, Vec::new()), |acc, (a, c)| &acc + &c.scale(a)))
            .collect();
        AlgebraElement::new(b.ext().clone(), coords).expect("square action matrix")
    }

    /// A generating set chosen greedily in element order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for g in 1..self.order() {
            if span.contains(&g) {
                continue;
            }
            gens.push(g);
            // close under multiplication by the generators
            let mut i = 0;
            span.push(g);
            while i < span.len() {
                for &s in &gens {
                    let h = self.table[span[i]][s];
                    if !span.contains(&h) {
                        span.push(h);
                    }
                }
                i += 1;
            }
        }
        gens
    }

    fn map_elements(&self, embed: &FieldEmbedding) -> GroupAction {
        GroupAction {
            names: self.names.clone(),
            table: self.table.clone(),
            matrices: self
                .matrices
                .iter()
                .map(|m| m.iter().map(|r| r.iter().map(|a| embed.apply(a)).collect()).collect())
                .collect(),
        }
    }
}

fn identity(f: &FieldSpec, n: usize) -> Vec<Vec<Elem>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect()
}

fn mat_mul(f: &FieldSpec, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&a[i][k], &b[k][j])))).collect())
        .collect()
}

/// Checks that every matrix is a ring automorphism of `ext` and that the
/// matrices compose according to the table. Stops at the first failure.
pub fn validate_action(act: &GroupAction, ext: &Arc<FreeExtension>) -> ActionReport {
    let fail = |msg: String| ActionReport { ok: false, diagnostics: vec![msg] };
    let n = ext.rank();
    let f = ext.base();
    let order = act.order();
    if order == 0 {
        return fail("empty group".into());
    }
    if act.matrices.len() != order || act.table.len() != order || act.table.iter().any(|r| r.len() != order) {
        return fail(format!("{order} elements need {order} matrices and an {order}×{order} table"));
    }
    if act.table.iter().flatten().any(|&h| h >= order) {
        return fail("table entry out of range".into());
    }
    for (g, m) in act.matrices.iter().enumerate() {
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return fail(format!("matrix of {} is not {n}×{n}", act.names[g]));
        }
        if m.iter().flatten().any(|a| !f.contains(a)) {
            return fail(format!("matrix of {} has entries outside {f}", act.names[g]));
        }
    }
    if act.matrices[0] != identity(f, n) {
        return fail(format!("first element {} does not act as the identity", act.names[0]));
    }
    if !ext.has_scalar_structure() {
        return fail("extension has non-constant structure constants".into());
    }
    for g in 0..order {
        let one = ext.one();
        if act.apply(g, &one) != one {
            return fail(format!("{} does not fix the unit", act.names[g]));
        }
        for i in 0..n {
            for j in 0..n {
                let (ei, ej) = (ext.basis(i), ext.basis(j));
                let lhs = act.apply(g, &ei).mul(&act.apply(g, &ej));
                let rhs = act.apply(g, &ei.mul(&ej));
                if lhs != rhs {
                    return fail(format!(
                        "{} is not multiplicative on ({}, {})",
                        act.names[g],
                        ext.basis_names()[i],
                        ext.basis_names()[j]
                    ));
                }
            }
        }
    }
    for g in 0..order {
        for h in 0..order {
            let gh = act.table[g][h];
            if mat_mul(f, &act.matrices[g], &act.matrices[h]) != act.matrices[gh] {
                return fail(format!(
                    "matrices of {} and {} do not compose to {}",
                    act.names[g], act.names[h], act.names[gh]
                ));
            }
        }
    }
    ActionReport { ok: true, diagnostics: Vec::new() }
}

/// Substitution `u_k_i ↦ Σ_j M_g[i][j] u_k_j` on the restriction variables
/// for each group element: the action on points.
pub type Substitution = Vec<(String, Poly)>;

/// The induced action on a restriction of a presentation defined over the
/// base field.
pub fn induced_action(act: &GroupAction, r: &RestrictionResult) -> Result<Vec<Substitution>> {
    let symbols = r.ext.symbol_names();
    if r.source.generators().iter().any(|g| g.used_vars().iter().any(|v| symbols.contains(v))) {
        return Err(Error::unsupported(
            "generators mention extension constants; the induced action needs equations over the base field",
        ));
    }
    let f = r.ext.base();
    let n = r.ext.rank();
    Ok(act
        .matrices
        .iter()
        .map(|m| {
            let mut subst = Vec::new();
            for (_, block) in &r.coordinate_map {
                for i in 0..n {
                    let img = (0..n)
                        .fold(Poly::zero(f, Vec::new()), |acc, j| &acc + &Poly::var(f, &block[j]).scale(&m[i][j]));
                    subst.push((block[i].clone(), img));
                }
            }
            subst
        })
        .collect())
}

/// Fixed points of a group action on a restriction, reduced by linear
/// elimination.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointPresentation {
    /// Reduced presentation in the surviving variables.
    pub presentation: Presentation,
    /// `g·v − v` for generators `g` and restriction variables `v`.
    pub linear_relations: Vec<Poly>,
    /// Variables solved for, with their expressions in surviving variables.
    pub eliminated: Vec<(String, Poly)>,
    /// Variables of the restriction, in order.
    pub full_variables: Vec<String>,
}

impl FixedPointPresentation {
    /// The unreduced form: the reduced generators plus `v − expr` for each
    /// eliminated variable, in all restriction variables.
    pub fn with_relations(&self) -> Result<Presentation> {
        let mut gens = self.presentation.generators().to_vec();
        for (v, e) in &self.eliminated {
            gens.push(&Poly::var(self.presentation.field(), v) - e);
        }
        let gens = gens.iter().map(|g| g.with_vars(&self.full_variables)).collect::<Result<Vec<_>>>()?;
        Presentation::new(PresentationBase::Field(self.presentation.field().clone()), self.full_variables.clone(), gens)
    }

    /// Extends a point of the reduced presentation (over any field the base
    /// embeds into) to all restriction variables.
    pub fn lift_point(&self, point: &[Elem], field: &FieldSpec) -> Result<Vec<Elem>> {
        let embed = FieldEmbedding::find(self.presentation.field(), field)?;
        let free = self.presentation.variables();
        let values: Vec<(String, Elem)> = free.iter().cloned().zip(point.iter().cloned()).collect();
        self.full_variables
            .iter()
            .map(|v| match self.eliminated.iter().find(|(w, _)| w == v) {
                Some((_, e)) => embed.apply_poly(e).eval_named(&values),
                None => Ok(values.iter().find(|(w, _)| w == v).expect("free variable").1.clone()),
            })
            .collect()
    }
}

/// Adds the relations `g·v − v` for a generating set of the group and
/// eliminates variables by Gauss–Jordan reduction, taking pivots from the
/// last variable backwards. Wild actions (`gcd(|G|, p) > 1`) are refused
/// unless `allow_wild` is set.
pub fn fixed_points(act: &GroupAction, r: &RestrictionResult, allow_wild: bool) -> Result<FixedPointPresentation> {
    let report = validate_action(act, &r.ext);
    if !report.ok {
        return Err(Error::InvalidAction(report.diagnostics.join("; ")));
    }
    let f = r.ext.base().clone();
    let ch = f.characteristic();
    let order = act.order();
    if ch > 0 && (order as u64).gcd(&ch) != 1 && !allow_wild {
        return Err(Error::WildAction { order, characteristic: ch });
    }
    induced_action(act, r)?;
    let vars = r.variables().to_vec();
    let col = |v: &str| vars.iter().position(|w| w == v).expect("restriction variable");
    let n = r.ext.rank();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    let mut linear_relations = Vec::new();
    for g in act.generating_set() {
        let m = &act.matrices[g];
        for (_, block) in &r.coordinate_map {
            for i in 0..n {
                let mut row = vec![f.zero(); vars.len()];
                for j in 0..n {
                    let delta = if i == j { f.one() } else { f.zero() };
                    row[col(&block[j])] = f.sub(&m[i][j], &delta);
                }
                if row.iter().all(|a| f.is_zero(a)) {
                    continue;
                }
                let rel = row
                    .iter()
                    .zip(&vars)
                    .fold(Poly::zero(&f, vars.clone()), |acc, (a, v)| &acc + &Poly::var(&f, v).scale(a));
                linear_relations.push(rel);
                rows.push(row);
            }
        }
    }
    let pivots = rref_from_right(&f, &mut rows);
    let mut eliminated = Vec::new();
    for (row, &pc) in rows.iter().zip(&pivots) {
        let expr = row
            .iter()
            .enumerate()
            .filter(|&(c, a)| c != pc && !f.is_zero(a))
            .fold(Poly::zero(&f, Vec::new()), |acc, (c, a)| &acc - &Poly::var(&f, &vars[c]).scale(a));
        eliminated.push((vars[pc].clone(), expr));
    }
    eliminated.sort_by_key(|(v, _)| col(v));
    let free: Vec<String> = vars.iter().filter(|v| !eliminated.iter().any(|(w, _)| w == *v)).cloned().collect();
    let mut gens = Vec::new();
    for g in r.generators() {
        let s = g.substitute(&eliminated)?;
        if !s.is_zero() {
            gens.push(s.with_vars(&free)?);
        }
    }
    let presentation =
        Presentation::new(PresentationBase::Field(f.clone()), free, gens)?.with_provenance("fixed points");
    Ok(FixedPointPresentation { presentation, linear_relations, eliminated, full_variables: vars })
}

/// Gauss–Jordan elimination choosing pivot columns from the right. Leaves
/// only the nonzero rows, each normalised at its pivot; returns the pivot
/// column of each row.
fn rref_from_right(f: &FieldSpec, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in (0..ncols).rev() {
        let Some(r) = (next..rows.len()).find(|&r| !f.is_zero(&rows[r][c])) else {
            continue;
        };
        rows.swap(next, r);
        let inv = f.inv(&rows[next][c]).expect("nonzero pivot");
        for a in rows[next].iter_mut() {
            *a = f.mul(a, &inv);
        }
        for r in 0..rows.len() {
            if r == next || f.is_zero(&rows[r][c]) {
                continue;
            }
            let factor = rows[r][c].clone();
            for k in 0..ncols {
                let v = f.sub(&rows[r][k], &f.mul(&factor, &rows[next][k]));
                rows[r][k] = v;
            }
        }
        pivots.push(c);
        next += 1;
    }
    rows.truncate(next);
    pivots
}

/// One field of a descent check.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentRow {
    pub field: String,
    /// Points of the fixed-point presentation.
    pub count_left: usize,
    /// Points of the original presentation.
    pub count_right: usize,
    pub bijection_ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescentReport {
    pub fixed: FixedPointPresentation,
    pub rows: Vec<DescentRow>,
}

impl DescentReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.count_left == r.count_right && r.bijection_ok)
    }
}

/// Compares the fixed points of `R(X ×_K K')` with `X` over each test
/// field, and checks that `Ψ` sends fixed points onto the diagonal
/// `c ↦ c·1` bijectively onto the points of `X`.
pub fn verify_descent(
    x: &Presentation,
    ext: &Arc<FreeExtension>,
    act: &GroupAction,
    fields: &[FieldSpec],
) -> Result<DescentReport> {
    if !matches!(x.base(), PresentationBase::Field(k) if k == ext.base()) {
        return Err(Error::invalid("descent needs a presentation over the base field of the extension"));
    }
    let r = restrict(x, ext)?;
    let fixed = fixed_points(act, &r, false)?;
    let mut rows = Vec::with_capacity(fields.len());
    for field in fields {
        let left = points_over(&fixed.presentation, field)?;
        let right = points_over(x, field)?;
        let embed = FieldEmbedding::find(ext.base(), field)?;
        let r_f = r.base_change(&embed)?;
        let act_f = act.map_elements(&embed);
        let unit: Vec<Elem> = r_f.ext.one().scalar_coords().expect("scalar unit");
        let lead = unit.iter().position(|u| !field.is_zero(u)).expect("nonzero unit");
        let mut bijection_ok = true;
        let mut images: Vec<Vec<Elem>> = Vec::with_capacity(left.len());
        for a in &left {
            let full = fixed.lift_point(a, field)?;
            let elems = psi_apply(&r_f, &full)?;
            let mut c = Vec::with_capacity(elems.len());
            for b in &elems {
                let coords = b.scalar_coords().expect("scalar point");
                let ci = field.div(&coords[lead], &unit[lead])?;
                let fixed_by_all = (0..act_f.order()).all(|g| &act_f.apply(g, b) == b);
                if !fixed_by_all || coords.iter().zip(&unit).any(|(x, u)| *x != field.mul(&ci, u)) {
                    bijection_ok = false;
                }
                c.push(ci);
            }
            images.push(c);
        }
        let mut sorted = images.clone();
        sorted.sort_by_key(|p| p.iter().map(|e| field.index_of(e)).collect::<Vec<_>>());
        sorted.dedup();
        if sorted.len() != images.len() || sorted != right {
            bijection_ok = false;
        }
        // σ(c) = c·1 must be a fixed point for every c ∈ X(F)
        for c in &right {
            let full: Vec<Elem> = c.iter().flat_map(|ci| unit.iter().map(move |u| field.mul(ci, u))).collect();
            let reduced: Vec<Elem> = fixed
                .presentation
                .variables()
                .iter()
                .map(|v| full[fixed.full_variables.iter().position(|w| w == v).expect("variable")].clone())
                .collect();
            if fixed.lift_point(&reduced, field)? != full {
                bijection_ok = false;
            }
        }
        rows.push(DescentRow {
            field: field.describe(),
            count_left: left.len(),
            count_right: right.len(),
            bijection_ok,
        });
    }
    Ok(DescentReport { fixed, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Arc<FreeExtension> {
        let f3 = FieldSpec::prime(3).unwrap();
        FreeExtension::from_minimal_polynomial(&f3, &Poly::parse(&f3, "t^2 + 1").unwrap(), "t").unwrap()
    }

    #[test]
    fn frobenius_on_f9() {
        let k = f9();
        let act = GroupAction::frobenius(&k).unwrap();
        let f = k.base();
        assert_eq!(act.matrices()[1], vec![vec![f.one(), f.zero()], vec![f.zero(), f.from_int(-1)]]);
        assert!(validate_action(&act, &k).ok);
        assert!(validate_action(&GroupAction::trivial(&k), &k).ok);
    }

    #[test]
    fn corrupted_matrix_is_reported() {
        let k = f9();
        let f = k.base().clone();
        let mut act = GroupAction::frobenius(&k).unwrap();
        act.matrices[1][1][1] = f.from_int(2);
        act.matrices[1][0][1] = f.one();
        let rep = validate_action(&act, &k);
        assert!(!rep.ok);
        assert!(rep.diagnostics[0].contains("frob"));
    }

    #[test]
    fn golden_descent() {
        let k = f9();
        let f3 = k.base().clone();
        let x = Presentation::parse(PresentationBase::Field(f3.clone()), &["u"], &["u^2 - 2"]).unwrap();
        let act = GroupAction::frobenius(&k).unwrap();
        let r = restrict(&x, &k).unwrap();
        let subs = induced_action(&act, &r).unwrap();
        assert_eq!(subs[1][1].1.to_string(), "2*u_2");
        let fp = fixed_points(&act, &r, false).unwrap();
        assert_eq!(fp.presentation.variables(), ["u_1"]);
        assert_eq!(fp.presentation.generators()[0].to_string(), "u_1^2 + 1");
        let full = fp.with_relations().unwrap();
        let expect =
            Presentation::parse(PresentationBase::Field(f3.clone()), &["u_1", "u_2"], &["u_1^2 - 2", "u_2"]).unwrap();
        assert_eq!(full.canonical_generators(), expect.canonical_generators());
        let fields = [f3.clone(), FieldSpec::gf(9).unwrap(), FieldSpec::gf(27).unwrap()];
        let rep = verify_descent(&x, &k, &act, &fields).unwrap();
        let counts: Vec<_> = rep.rows.iter().map(|r| (r.count_left, r.count_right)).collect();
        assert_eq!(counts, [(0, 0), (2, 2), (0, 0)]);
        assert!(rep.passed());
    }

    #[test]
    fn affine_line_and_cubic() {
        let k = f9();
        let f3 = k.base().clone();
        let act = GroupAction::frobenius(&k).unwrap();
        let fields = [f3.clone(), FieldSpec::gf(9).unwrap(), FieldSpec::gf(27).unwrap()];
        let line = Presentation::affine_space(PresentationBase::Field(f3.clone()), vec!["u".into()]).unwrap();
        let rep = verify_descent(&line, &k, &act, &fields).unwrap();
        assert_eq!(rep.rows.iter().map(|r| r.count_left).collect::<Vec<_>>(), [3, 9, 27]);
        assert!(rep.passed());
        let cubic = Presentation::parse(PresentationBase::Field(f3.clone()), &["u"], &["u^3 - u"]).unwrap();
        let rep = verify_descent(&cubic, &k, &act, &fields[..1]).unwrap();
        assert_eq!((rep.rows[0].count_left, rep.rows[0].count_right), (3, 3));
        assert!(rep.passed());
    }

    #[test]
    fn wild_action_rejected() {
        let f2 = FieldSpec::prime(2).unwrap();
        let k = FreeExtension::from_minimal_polynomial(&f2, &Poly::parse(&f2, "t^2 + t + 1").unwrap(), "t").unwrap();
        let act = GroupAction::frobenius(&k).unwrap();
        let x = Presentation::parse(PresentationBase::Field(f2), &["u"], &["u^2 + 1"]).unwrap();
        let r = restrict(&x, &k).unwrap();
        assert!(matches!(fixed_points(&act, &r, false), Err(Error::WildAction { order: 2, characteristic: 2 })));
        assert!(fixed_points(&act, &r, true).is_ok());
    }

    #[test]
    fn induced_action_composes() {
        let f2 = FieldSpec::prime(2).unwrap();
        let k = FreeExtension::from_minimal_polynomial(&f2, &Poly::parse(&f2, "t^3 + t + 1").unwrap(), "t").unwrap();
        let act = GroupAction::frobenius(&k).unwrap();
        let x = Presentation::parse(PresentationBase::Field(f2), &["u", "v"], &["u*v + 1"]).unwrap();
        let r = restrict(&x, &k).unwrap();
        let subs = induced_action(&act, &r).unwrap();
        for g in 0..3 {
            for h in 0..3 {
                let gh = act.table()[g][h];
                // point map of g∘h is g after h: substitute h's images into g's
                for (v, img) in &subs[gh] {
                    let g_img = &subs[g].iter().find(|(w, _)| w == v).unwrap().1;
                    assert_eq!(&g_img.substitute(&subs[h]).unwrap(), img);
                }
            }
        }
    }
}
