use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::ring::{Elem, FieldEmbedding, FieldSpec, Poly};

use super::presentation::{Presentation, PresentationBase};
use super::restrict::{evaluate_in_algebra, RestrictionResult};

/// Largest field the point oracle enumerates over.
pub const MAX_FIELD_SIZE: u64 = 100;
/// Most variables the point oracle accepts.
pub const MAX_VARIABLES: usize = 6;
/// Cap on `q^d`, the number of assignments tried.
pub const MAX_ASSIGNMENTS: u64 = 10_000_000;

/// Reads the generators of `p` over the finite field `target`.
fn generators_over(p: &Presentation, target: &FieldSpec) -> Result<Vec<Poly>> {
    match p.base() {
        PresentationBase::Field(k) => {
            let embed = FieldEmbedding::find(k, target)?;
            Ok(p.generators().iter().map(|g| embed.apply_poly(g)).collect())
        }
        PresentationBase::Extension(e) => {
            let model = e.as_finite_field()?;
            let into_model = FieldEmbedding::find(e.base(), &model.field)?;
            let into_target = FieldEmbedding::find(&model.field, target)?;
            let symbols = e
                .symbols()
                .into_iter()
                .map(|(name, b)| Ok((name, Poly::constant(&model.field, model.to_field(&b)?))))
                .collect::<Result<Vec<_>>>()?;
            p.generators()
                .iter()
                .map(|g| Ok(into_target.apply_poly(&into_model.apply_poly(g).substitute(&symbols)?)))
                .collect()
        }
    }
}

/// A generator compiled to element indices of a finite field.
struct Compiled {
    terms: Vec<(usize, Vec<u32>)>,
}

/// All points of `p` with coordinates in the finite field `target`, in
/// canonical order (lexicographic in element index, first variable most
/// significant).
pub fn points_over(p: &Presentation, target: &FieldSpec) -> Result<Vec<Vec<Elem>>> {
    let q = target.order().ok_or_else(|| Error::invalid(format!("{target} is not a finite field")))?;
    if q > MAX_FIELD_SIZE {
        return Err(Error::ResourceBound(format!("field of size {q} exceeds {MAX_FIELD_SIZE}")));
    }
    let d = p.variables().len();
    if d > MAX_VARIABLES {
        return Err(Error::ResourceBound(format!("{d} variables exceed {MAX_VARIABLES}")));
    }
    let total = q
        .checked_pow(d as u32)
        .filter(|&t| t <= MAX_ASSIGNMENTS)
        .ok_or_else(|| Error::ResourceBound(format!("{q}^{d} assignments exceed {MAX_ASSIGNMENTS}")))?;
    let q = q as usize;
    let elems = target.elements()?;
    let index = |a: &Elem| target.index_of(a) as usize;
    let zero = index(&target.zero());
    let mut add = vec![0usize; q * q];
    let mut mul = vec![0usize; q * q];
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            add[i * q + j] = index(&target.add(a, b));
            mul[i * q + j] = index(&target.mul(a, b));
        }
    }
    let mut compiled = Vec::new();
    let mut max_deg = 1;
    for g in generators_over(p, target)? {
        let g = g.with_vars(p.variables())?;
        let terms: Vec<(usize, Vec<u32>)> = g.terms().map(|(m, c)| (index(c), m.clone())).collect();
        max_deg = terms.iter().flat_map(|(_, m)| m.iter().copied()).fold(max_deg, u32::max);
        compiled.push(Compiled { terms });
    }
    // pow[x][e] = index of elems[x]^e
    let one = index(&target.one());
    let pow: Vec<Vec<usize>> = (0..q)
        .map(|x| {
            let mut row = vec![one; max_deg as usize + 1];
            for e in 1..=max_deg as usize {
                row[e] = mul[row[e - 1] * q + x];
            }
            row
        })
        .collect();
    let mut out = Vec::new();
    let mut assignment = vec![0usize; d];
    for _ in 0..total {
        let vanishes = compiled.iter().all(|g| {
            let mut acc = zero;
            for (c, m) in &g.terms {
                let mut t = *c;
                for (x, &e) in assignment.iter().zip(m) {
                    if e > 0 {
                        t = mul[t * q + pow[*x][e as usize]];
                    }
                }
                acc = add[acc * q + t];
            }
            acc == zero
        });
        if vanishes {
            out.push(assignment.iter().map(|&i| elems[i].clone()).collect());
        }
        for slot in assignment.iter_mut().rev() {
            *slot += 1;
            if *slot < q {
                break;
            }
            *slot = 0;
        }
    }
    Ok(out)
}

/// `Ψ`: sends a point of the restriction (over the base field of the
/// extension) to the point `x_k = Σ_j a_kj e_j` of the source, checking
/// both that the input is a point and that the image satisfies the source
/// equations.
pub fn psi_apply(r: &RestrictionResult, point: &[Elem]) -> Result<Vec<AlgebraElement>> {
    let vars = r.variables();
    if point.len() != vars.len() {
        return Err(Error::NotAPoint(format!("expected {} coordinates, got {}", vars.len(), point.len())));
    }
    let base = r.ext.base();
    if let Some(a) = point.iter().find(|a| !base.contains(a)) {
        return Err(Error::NotAPoint(format!("{} is not in {base}", base.format_elem(a))));
    }
    for g in r.generators() {
        if !base.is_zero(&g.with_vars(vars)?.eval(point)) {
            return Err(Error::NotAPoint(format!("generator {g} does not vanish")));
        }
    }
    let n = r.ext.rank();
    let mut bindings = Vec::with_capacity(r.coordinate_map.len());
    for (k, (v, _)) in r.coordinate_map.iter().enumerate() {
        let b = AlgebraElement::from_scalars(r.ext.clone(), &point[k * n..(k + 1) * n])?;
        bindings.push((v.clone(), b));
    }
    for g in r.source.generators() {
        if !evaluate_in_algebra(g, &r.ext, &bindings)?.is_zero() {
            return Err(Error::NotAPoint(format!("image violates source generator {g}")));
        }
    }
    Ok(bindings.into_iter().map(|(_, b)| b).collect())
}
