use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use weilres::algebra::{tensor_product, AlgebraElement, FreeExtension};
use weilres::norms::{spectral_radius, spectral_value, spectral_value_product_check};
use weilres::random;
use weilres::ring::{FieldSpec, LogNorm, Poly};
use weilres::weil::{disc_generators, restrict, Presentation, PresentationBase};

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::prime(5).unwrap(),
        FieldSpec::gf(9).unwrap(),
        FieldSpec::rational(),
        FieldSpec::padic(2).unwrap(),
        FieldSpec::function_field(2, half()).unwrap(),
    ]
}

fn valued_fields() -> Vec<FieldSpec> {
    vec![FieldSpec::padic(3).unwrap(), FieldSpec::function_field(3, half()).unwrap()]
}

fn ext(f: &FieldSpec, m: &str) -> Arc<FreeExtension> {
    FreeExtension::from_minimal_polynomial(f, &Poly::parse(f, m).unwrap(), "t").unwrap()
}

fn extensions() -> Vec<Arc<FreeExtension>> {
    let f3 = FieldSpec::prime(3).unwrap();
    let q2 = FieldSpec::padic(2).unwrap();
    let ff = FieldSpec::function_field(2, half()).unwrap();
    let f9 = ext(&f3, "t^2 + 1");
    vec![
        f9.clone(),
        ext(&q2, "t^2 - 2"),
        ext(&q2, "t^3 - t - 1"),
        ext(&ff, "t^2 - [x]"),
        tensor_product(&f9, &f9).unwrap(),
    ]
}

fn vars() -> Vec<String> {
    vec!["u".into(), "v".into()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn polynomial_ring_axioms(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        for f in fields() {
            let a = random::poly(&mut rng, &f, &vars(), 3, 4);
            let b = random::poly(&mut rng, &f, &vars(), 3, 4);
            let c = random::poly(&mut rng, &f, &vars(), 3, 4);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }
    }

    #[test]
    fn lognorm_is_a_valuation(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        for f in valued_fields() {
            let a = random::element(&mut rng, &f);
            let b = random::element(&mut rng, &f);
            let (la, lb) = (f.lognorm(&a).unwrap(), f.lognorm(&b).unwrap());
            prop_assert_eq!(f.lognorm(&f.mul(&a, &b)).unwrap(), la.clone() + lb.clone());
            prop_assert!(f.lognorm(&f.add(&a, &b)).unwrap() <= la.max(lb));
        }
    }

    #[test]
    fn gauss_norm_is_multiplicative(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        for f in valued_fields() {
            let p = random::poly(&mut rng, &f, &vars(), 3, 4);
            let q = random::poly(&mut rng, &f, &vars(), 3, 4);
            let radii = vec![
                LogNorm::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
                LogNorm::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
            ];
            let gp = p.with_vars(&vars()).unwrap().gauss_norm(&radii).unwrap();
            let gq = q.with_vars(&vars()).unwrap().gauss_norm(&radii).unwrap();
            let gpq = (&p * &q).with_vars(&vars()).unwrap().gauss_norm(&radii).unwrap();
            prop_assert_eq!(gpq, gp + gq);
        }
    }

    #[test]
    fn spectral_value_is_multiplicative(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        for f in valued_fields() {
            let (dp, dq) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let p = random::monic(&mut rng, &f, dp);
            let q = random::monic(&mut rng, &f, dq);
            prop_assert!(spectral_value_product_check(&p, &q).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mult_matrix_is_a_homomorphism(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        for e in extensions() {
            let b = random::algebra_element(&mut rng, &e);
            let c = random::algebra_element(&mut rng, &e);
            prop_assert_eq!(b.mul(&c).mult_matrix(), b.mult_matrix().mul(&c.mult_matrix()));
            prop_assert_eq!(b.add(&c).mult_matrix(), b.mult_matrix().add(&c.mult_matrix()));
        }
    }

    #[test]
    fn cayley_hamilton(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        for e in extensions() {
            let b = if rng.gen_bool(0.5) {
                random::algebra_element(&mut rng, &e)
            } else {
                symbolic_element(&mut rng, &e)
            };
            let mut coeffs = b.charpoly_coefficients();
            coeffs.insert(0, Poly::one(e.base()));
            coeffs.reverse();
            prop_assert!(b.mult_matrix().eval_poly(&coeffs).is_zero());
        }
    }

    #[test]
    fn charpoly_scaling_law(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        for e in extensions() {
            let a = Poly::constant(e.base(), random::element(&mut rng, e.base()));
            let b = random::algebra_element(&mut rng, &e);
            let scaled = b.scale(&a).charpoly_coefficients();
            for (i, (ci, si)) in b.charpoly_coefficients().iter().zip(&scaled).enumerate() {
                prop_assert_eq!(si, &(ci * &a.pow(i as u32 + 1)));
            }
        }
    }

    #[test]
    fn integral_elements_form_a_ring(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        for (p, m) in [(2, "t^2 - 2"), (2, "t^2 + 1"), (3, "t^2 - 3"), (3, "t^3 - 3*t - 3")] {
            let f = FieldSpec::padic(p).unwrap();
            let e = ext(&f, m);
            let b = integral_element(&mut rng, &e, p);
            let c = integral_element(&mut rng, &e, p);
            prop_assert!(b.is_integral().unwrap() && c.is_integral().unwrap());
            prop_assert!(b.mul(&c).is_integral().unwrap());
            prop_assert!(b.add(&c).is_integral().unwrap());
        }
    }

    #[test]
    fn spectral_radius_properties(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let q2 = FieldSpec::padic(2).unwrap();
        let ff = FieldSpec::function_field(3, half()).unwrap();
        for e in [ext(&q2, "t^2 - 2"), ext(&q2, "t^3 - t - 1"), ext(&ff, "t^2 - [x]")] {
            let b = random::algebra_element(&mut rng, &e);
            let c = random::algebra_element(&mut rng, &e);
            let (rb, rc) = (spectral_radius(&b).unwrap(), spectral_radius(&c).unwrap());
            prop_assert!(spectral_radius(&b.mul(&c)).unwrap() <= rb.clone() + rc);
            if e.base() == &q2 {
                prop_assert_eq!(b.is_integral().unwrap(), rb <= LogNorm::zero());
            }
        }
    }

    #[test]
    fn disc_radius_scaling(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let q = FieldSpec::rational();
        let e = ext(&q, "t^2 - 7");
        let block = vec!["x_1".to_string(), "x_2".to_string()];
        let r = random::algebra_element(&mut rng, &e);
        let a = Poly::constant(&q, random::element(&mut rng, &q));
        let d1 = disc_generators(&e, std::slice::from_ref(&r), &block, "y").unwrap();
        let d2 = disc_generators(&e, &[r.scale(&a)], &block, "y").unwrap();
        for (j, (g1, g2)) in d1.generators.iter().zip(&d2.generators).enumerate() {
            let y = Poly::var(&q, &d1.y_variables[j]);
            prop_assert_eq!(&y - g2, &(&y - g1) * &a.pow(j as u32 + 1));
        }
    }

    #[test]
    fn closed_immersions_are_respected(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let f3 = FieldSpec::prime(3).unwrap();
        let e = ext(&f3, "t^2 + 1");
        let big = random::extension_system(&mut rng, &e, 2, 3, 3);
        let small = Presentation::new(big.base().clone(), big.variables().to_vec(), big.generators()[..2].to_vec()).unwrap();
        let rs = restrict(&small, &e).unwrap().presentation.canonical_generators();
        let rb = restrict(&big, &e).unwrap().presentation.canonical_generators();
        prop_assert!(rs.iter().all(|g| rb.contains(g)));
    }
}

fn symbolic_element(rng: &mut ChaCha8Rng, e: &Arc<FreeExtension>) -> AlgebraElement {
    let params = vec!["a".to_string(), "b".to_string()];
    let coords = (0..e.rank()).map(|_| random::poly(rng, e.base(), &params, 1, 2)).collect();
    AlgebraElement::new(e.clone(), coords).unwrap()
}

/// Coordinates in `Z_(p)` give integral elements when the basis is a power
/// basis of a monic integral polynomial.
fn integral_element(rng: &mut ChaCha8Rng, e: &Arc<FreeExtension>, p: u64) -> AlgebraElement {
    let f = e.base();
    let coords: Vec<_> = (0..e.rank())
        .map(|_| {
            let num = rng.gen_range(-40..=40i64);
            let mut den = rng.gen_range(1..=9i64);
            while den % p as i64 == 0 {
                den += 1;
            }
            f.from_rational(&BigRational::new(num.into(), den.into())).unwrap()
        })
        .collect();
    AlgebraElement::from_scalars(e.clone(), &coords).unwrap()
}

#[test]
fn spectral_value_of_pure_power_is_neg_inf() {
    let f = FieldSpec::padic(5).unwrap();
    let p = weilres::norms::MonicPoly::new(&f, vec![f.zero(); 4]).unwrap();
    assert!(spectral_value(&p).unwrap().is_neg_inf());
}

#[test]
fn restriction_respects_field_bases() {
    let f2 = FieldSpec::prime(2).unwrap();
    let e = ext(&f2, "t^2 + t + 1");
    let x = Presentation::parse(PresentationBase::Field(f2), &["u"], &["u^3 + 1"]).unwrap();
    let r = restrict(&x, &e).unwrap();
    assert_eq!(r.coefficient_index.len(), 1);
    assert_eq!(r.coefficient_index[0].len(), 2);
}
