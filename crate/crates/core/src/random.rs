//! Seeded generators for random test data.
//!
//! Everything draws from a caller-supplied [`ChaCha8Rng`], so runs are
//! reproducible from the seed alone.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, FreeExtension};
use crate::norms::MonicPoly;
use crate::ring::{Elem, FieldKind, FieldSpec, Poly};
use crate::weil::{Presentation, PresentationBase};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer numerators are drawn from `[-BOUND, BOUND]`.
const BOUND: i64 = 30;

fn small_rational(rng: &mut ChaCha8Rng, p_bias: Option<u64>) -> BigRational {
    let num = rng.gen_range(-BOUND..=BOUND);
    let mut den = rng.gen_range(1..=6i64);
    // make p-power denominators and numerators common
    if let Some(p) = p_bias {
        let e = rng.gen_range(0..=2u32);
        if rng.gen_bool(0.5) {
            den *= (p as i64).pow(e);
        } else {
            return BigRational::new(BigInt::from(num * (p as i64).pow(e)), BigInt::from(den));
        }
    }
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A random element: uniform in finite fields, small fractions in `Q` and
/// `Q_p`, and quotients of low-degree polynomials in `F_p(x)`.
pub fn element(rng: &mut ChaCha8Rng, field: &FieldSpec) -> Elem {
    match field.kind() {
        FieldKind::Prime { .. } | FieldKind::Finite { .. } => {
            let q = field.order().expect("finite");
            field.element_at(rng.gen_range(0..q))
        }
        FieldKind::Rational => field.from_rational(&small_rational(rng, None)).expect("rational"),
        FieldKind::PAdic { p } => field.from_rational(&small_rational(rng, Some(*p))).expect("rational"),
        FieldKind::FunctionField { p, .. } => {
            let dn = rng.gen_range(0..=3usize);
            let dd = rng.gen_range(0..=2usize);
            let num: Vec<u64> = (0..=dn).map(|_| rng.gen_range(0..*p)).collect();
            let mut den: Vec<u64> = (0..=dd).map(|_| rng.gen_range(0..*p)).collect();
            den[dd] = rng.gen_range(1..*p);
            field.ratfn(&num, &den).expect("nonzero denominator")
        }
    }
}

pub fn nonzero_element(rng: &mut ChaCha8Rng, field: &FieldSpec) -> Elem {
    loop {
        let a = element(rng, field);
        if !field.is_zero(&a) {
            return a;
        }
    }
}

fn monomial(rng: &mut ChaCha8Rng, nvars: usize, max_degree: u32) -> Vec<u32> {
    let total = rng.gen_range(0..=max_degree);
    let mut m = vec![0u32; nvars];
    if nvars > 0 {
        for _ in 0..total {
            m[rng.gen_range(0..nvars)] += 1;
        }
    }
    m
}

/// A polynomial with up to `max_terms` terms of total degree at most
/// `max_degree`.
pub fn poly(rng: &mut ChaCha8Rng, field: &FieldSpec, vars: &[String], max_degree: u32, max_terms: usize) -> Poly {
    let terms = (0..rng.gen_range(1..=max_terms.max(1)))
        .map(|_| (monomial(rng, vars.len(), max_degree), element(rng, field)))
        .collect::<Vec<_>>();
    Poly::from_terms(field, vars.to_vec(), terms).expect("monomials match variables")
}

/// A monic polynomial of the given degree.
pub fn monic(rng: &mut ChaCha8Rng, field: &FieldSpec, degree: usize) -> MonicPoly {
    let coeffs = (0..degree).map(|_| if rng.gen_bool(0.2) { field.zero() } else { element(rng, field) }).collect();
    MonicPoly::new(field, coeffs).expect("valid coefficients")
}

/// An element of `ext` with random constant coordinates.
pub fn algebra_element(rng: &mut ChaCha8Rng, ext: &Arc<FreeExtension>) -> AlgebraElement {
    let coords: Vec<Elem> = (0..ext.rank()).map(|_| element(rng, ext.base())).collect();
    AlgebraElement::from_scalars(ext.clone(), &coords).expect("rank-sized coordinates")
}

/// A system over `ext` (coefficients are polynomials in the extension
/// generator) in `nvars` variables `u, v, w, …`.
pub fn extension_system(
    rng: &mut ChaCha8Rng,
    ext: &Arc<FreeExtension>,
    nvars: usize,
    ngens: usize,
    max_degree: u32,
) -> Presentation {
    let names = variable_names(nvars);
    let sym = ext.generator().expect("monogenic extension").to_string();
    let f = ext.base();
    let gens = (0..ngens)
        .map(|_| {
            let mut vars = names.clone();
            vars.push(sym.clone());
            let nterms = rng.gen_range(1..=4usize);
            let terms: Vec<_> = (0..nterms)
                .map(|_| {
                    let mut m = monomial(rng, nvars, max_degree);
                    m.push(rng.gen_range(0..ext.rank() as u32));
                    (m, element(rng, f))
                })
                .collect();
            Poly::from_terms(f, vars, terms).expect("monomials match variables")
        })
        .collect();
    Presentation::new(PresentationBase::Extension(ext.clone()), names, gens).expect("declared variables")
}

/// A system over a field in `nvars` variables `u, v, w, …`.
pub fn field_system(
    rng: &mut ChaCha8Rng,
    field: &FieldSpec,
    nvars: usize,
    ngens: usize,
    max_degree: u32,
) -> Presentation {
    let names = variable_names(nvars);
    let gens = (0..ngens).map(|_| poly(rng, field, &names, max_degree, 4)).collect();
    Presentation::new(PresentationBase::Field(field.clone()), names, gens).expect("declared variables")
}

pub fn variable_names(n: usize) -> Vec<String> {
    const NAMES: [&str; 6] = ["u", "v", "w", "s", "r", "q"];
    (0..n).map(|i| NAMES.get(i).map_or_else(|| format!("z{i}"), |s| s.to_string())).collect()
}
