//! Weil restriction of polynomial presentations along free extensions,
//! with disc bookkeeping, products, base change and a point oracle.

mod disc;
mod points;
mod presentation;
mod restrict;

pub use disc::{disc_generators, disc_generators_with_radius, DiscBlock};
pub use points::{points_over, psi_apply, MAX_ASSIGNMENTS, MAX_FIELD_SIZE, MAX_VARIABLES};
pub use presentation::{Presentation, PresentationBase};
pub use restrict::{
    coordinate_block, evaluate_in_algebra, expand_element, generic_element, restrict, Exhaustion,
    IntegralityConstraint, RestrictionResult,
};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{AlgebraElement, FreeExtension};
    use crate::ring::{FieldEmbedding, FieldSpec, LogNorm, Poly};

    fn ext(f: &FieldSpec, m: &str, sym: &str) -> Arc<FreeExtension> {
        FreeExtension::from_minimal_polynomial(f, &Poly::parse(f, m).unwrap(), sym).unwrap()
    }

    fn strings(ps: &[Poly]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn expand_over_gaussian_rationals() {
        let q = FieldSpec::rational();
        let k = ext(&q, "i^2 + 1", "i");
        let f = Poly::parse(&q, "u^2 - a").unwrap();
        let c = expand_element(&f, &k, &["u".into()]).unwrap();
        assert_eq!(strings(&c), ["u_1^2 - u_2^2 - a", "2*u_1*u_2"]);
        let c = expand_element(&Poly::from_int(&q, 7), &k, &[]).unwrap();
        assert_eq!(strings(&c), ["7", "0"]);
    }

    fn f4_example() -> (Arc<FreeExtension>, Presentation) {
        let f2 = FieldSpec::prime(2).unwrap();
        let k = ext(&f2, "w^2 + w + 1", "w");
        let p = Presentation::parse(PresentationBase::Extension(k.clone()), &["u"], &["u^2 + u + 1"]).unwrap();
        (k, p)
    }

    #[test]
    fn restriction_of_cube_roots_over_f4() {
        let (k, p) = f4_example();
        let r = restrict(&p, &k).unwrap();
        assert_eq!(strings(r.generators()), ["u_1^2 + u_2^2 + u_1 + 1", "u_2^2 + u_2"]);
        let f2 = FieldSpec::prime(2).unwrap();
        let pts = points_over(&r.presentation, &f2).unwrap();
        assert_eq!(pts, vec![vec![f2.from_int(0), f2.from_int(1)], vec![f2.from_int(1), f2.from_int(1)]]);
        let f4 = FieldSpec::gf(4).unwrap();
        assert_eq!(points_over(&p, &f4).unwrap().len(), 2);
        let img = psi_apply(&r, &pts[0]).unwrap();
        assert_eq!(img, vec![k.basis(1)]);
        assert!(matches!(psi_apply(&r, &[f2.zero(), f2.zero()]), Err(crate::Error::NotAPoint(_))));
    }

    #[test]
    fn affine_line_restricts_to_affine_space() {
        let f3 = FieldSpec::prime(3).unwrap();
        let k = ext(&f3, "t^3 - t + 1", "t");
        let p = Presentation::affine_space(PresentationBase::Extension(k.clone()), vec!["u".into()]).unwrap();
        let r = restrict(&p, &k).unwrap();
        assert_eq!(r.variables(), ["u_1", "u_2", "u_3"]);
        assert!(r.generators().is_empty());
        assert_eq!(points_over(&r.presentation, &f3).unwrap().len(), 27);
        let zero = psi_apply(&r, &[f3.zero(), f3.zero(), f3.zero()]).unwrap();
        assert!(zero[0].is_zero());
    }

    #[test]
    fn disc_generators_examples() {
        let q = FieldSpec::rational();
        let k = ext(&q, "t^2 - d", "t");
        let block = vec!["x_1".to_string(), "x_2".to_string()];
        let d = disc_generators(&k, &[k.one()], &block, "y").unwrap();
        let expect = ["y1_1 + 2*x_1", "y1_2 - x_1^2 + d*x_2^2"].map(|s| Poly::parse(&q, s).unwrap());
        assert_eq!(d.generators, expect);
        let d = disc_generators(&k, &[k.zero()], &block, "y").unwrap();
        assert_eq!(strings(&d.generators), ["y1_1", "y1_2"]);
        let r1 = ext(&q, "t - 3", "t");
        let d = disc_generators(&r1, &[r1.one().scale(&Poly::var(&q, "r"))], &["x_1".into()], "y").unwrap();
        assert_eq!(strings(&d.generators), ["r*x_1 + y1_1"]);
    }

    #[test]
    fn disc_radius_scaling() {
        let q = FieldSpec::rational();
        let k = ext(&q, "t^2 - 5", "t");
        let block = vec!["x_1".to_string(), "x_2".to_string()];
        let r = AlgebraElement::new(k.clone(), vec![Poly::from_int(&q, 1), Poly::from_int(&q, 2)]).unwrap();
        let a = Poly::from_int(&q, 3);
        let d1 = disc_generators(&k, std::slice::from_ref(&r), &block, "y").unwrap();
        let d2 = disc_generators(&k, &[r.scale(&a)], &block, "y").unwrap();
        for (j, (g1, g2)) in d1.generators.iter().zip(&d2.generators).enumerate() {
            let y = Poly::var(&q, &d1.y_variables[j]);
            let c1 = &y - g1;
            let c2 = &y - g2;
            assert_eq!(c2, &c1 * &a.pow(j as u32 + 1));
        }
    }

    #[test]
    fn radii_produce_disc_blocks() {
        let q2 = FieldSpec::padic(2).unwrap();
        let k = ext(&q2, "t^2 - 2", "t");
        let p = Presentation::affine_space(PresentationBase::Extension(k.clone()), vec!["u".into()])
            .unwrap()
            .with_radii(vec![LogNorm::from_int(1)])
            .unwrap();
        let r = restrict(&p, &k).unwrap();
        assert_eq!(r.discs.len(), 1);
        assert_eq!(r.discs[0].y_variables, ["u_y1_1", "u_y1_2"]);
        assert_eq!(r.discs[0].berkovich_radii, Some(vec![LogNorm::from_int(1), LogNorm::from_int(2)]));
    }

    #[test]
    fn products_rename_and_commute() {
        let f3 = FieldSpec::prime(3).unwrap();
        let k = ext(&f3, "t^2 + 1", "t");
        let base = PresentationBase::Extension(k.clone());
        let p1 = Presentation::parse(base.clone(), &["u"], &["u^2 - t"]).unwrap();
        let p2 = Presentation::parse(base, &["u"], &["u + 1"]).unwrap();
        let prod = p1.product(&p2).unwrap();
        assert_eq!(prod.variables(), ["u", "u_b"]);
        let lhs = restrict(&prod, &k).unwrap();
        let rhs = restrict(&p1, &k).unwrap().product(&restrict(&p2, &k).unwrap()).unwrap();
        assert_eq!(lhs.presentation.canonical_generators(), rhs.presentation.canonical_generators());
        assert_eq!(lhs.variables(), rhs.variables());
    }

    #[test]
    fn base_change_keeps_equations() {
        let f3 = FieldSpec::prime(3).unwrap();
        let f9 = FieldSpec::gf(9).unwrap();
        let p = Presentation::parse(PresentationBase::Field(f3.clone()), &["u"], &["u^2 - 2"]).unwrap();
        let e = FieldEmbedding::find(&f3, &f9).unwrap();
        let q = p.base_change(&e).unwrap();
        assert_eq!(q.generators()[0].to_string(), "u^2 + 1");
        assert_eq!(points_over(&p, &f9).unwrap(), points_over(&q, &f9).unwrap());
        assert_eq!(p.base_change(&FieldEmbedding::identity(&f3)).unwrap(), p);
    }

    #[test]
    fn exhaustion_products() {
        let q = FieldSpec::padic(3).unwrap();
        let k = ext(&q, "t^2 - 3", "t");
        let (_, p) = (0, Presentation::affine_space(PresentationBase::Extension(k.clone()), vec!["u".into()]).unwrap());
        let m = vec![k.basis(1), k.one().scale(&Poly::from_int(&q, 3))];
        let r = restrict(&p, &k).unwrap().with_exhaustion(m, 2).unwrap();
        let ml = r.exhaustion.as_ref().unwrap().m_lambda();
        assert_eq!(ml.len(), 3);
        assert_eq!(r.integrality_constraints().len(), 3);
    }

    #[test]
    fn enumeration_bounds_are_errors() {
        let f2 = FieldSpec::prime(2).unwrap();
        let vars: Vec<String> = (0..7).map(|i| format!("v{i}")).collect();
        let p = Presentation::affine_space(PresentationBase::Field(f2.clone()), vars).unwrap();
        assert!(matches!(points_over(&p, &f2), Err(crate::Error::ResourceBound(_))));
        let big = FieldSpec::prime(101).unwrap();
        let p = Presentation::affine_space(PresentationBase::Field(big.clone()), vec!["u".into()]).unwrap();
        assert!(matches!(points_over(&p, &big), Err(crate::Error::ResourceBound(_))));
    }
}
