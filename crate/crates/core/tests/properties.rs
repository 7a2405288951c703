use drinfeld_ram::algebra::{factor_monic, make_field, place_valuation, q, qi, FieldDescriptor, Place, Poly, RationalFunction, Val};
use drinfeld_ram::herbrand::{compose, psi_artin_schreier, psi_tame};
use drinfeld_ram::oracle::series::PuiseuxSeries;
use proptest::prelude::*;

fn field(k: u8) -> FieldDescriptor {
    match k % 3 {
        0 => make_field(2, 1).unwrap(),
        1 => make_field(3, 1).unwrap(),
        _ => make_field(2, 2).unwrap(),
    }
}

fn poly(f: &FieldDescriptor, c: &[u32]) -> Poly {
    Poly::from_coeffs(f, c.iter().map(|x| x % f.q()).collect())
}

fn nonzero(f: &FieldDescriptor, c: &[u32]) -> Poly {
    let p = poly(f, c);
    if p.is_zero() {
        Poly::one(f)
    } else {
        p
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuation_is_additive(k in 0u8..3, a in prop::collection::vec(0u32..4, 1..6), b in prop::collection::vec(0u32..4, 1..6),
                             c in prop::collection::vec(0u32..4, 1..4)) {
        let f = field(k);
        let x = RationalFunction::new(nonzero(&f, &a), Poly::one(&f).add(&Poly::x(&f))).unwrap();
        let y = RationalFunction::from_poly(nonzero(&f, &b));
        let places = [Place::Infinite, Place::parse(&f, "t").unwrap(), Place::parse(&f, "t+1").unwrap()];
        let mut extra = factor_monic(&nonzero(&f, &c)).unwrap().into_iter().map(|(p, _)| Place::Finite(p)).collect::<Vec<_>>();
        extra.extend(places);
        for v in &extra {
            let (vx, vy, vxy) = (place_valuation(&x, v), place_valuation(&y, v), place_valuation(&x.mul(&y), v));
            prop_assert_eq!(vxy, Val::Finite(vx.finite().unwrap() + vy.finite().unwrap()));
        }
    }

    #[test]
    fn product_formula(k in 0u8..3, a in prop::collection::vec(0u32..4, 1..7), b in prop::collection::vec(0u32..4, 1..7)) {
        let f = field(k);
        let x = RationalFunction::new(nonzero(&f, &a), nonzero(&f, &b).monic()).unwrap();
        let mut total = *place_valuation(&x, &Place::Infinite).finite().unwrap();
        for part in [x.num(), x.den()] {
            if part.deg() == 0 {
                continue;
            }
            for (p, _) in factor_monic(part).unwrap() {
                let d = p.deg() as i64;
                total += d * place_valuation(&x, &Place::Finite(p)).finite().unwrap();
            }
        }
        prop_assert_eq!(total, 0);
    }

    #[test]
    fn psi_inverse_round_trip(qk in 0usize..3, rn in 1i64..40, rd in 1i64..5, e in 1u64..6, y in -4i64..60) {
        let (qq, p) = [(2u64, 2u64), (3, 3), (4, 2)][qk];
        let e = if e % p == 0 { e + 1 } else { e };
        let psi = compose(&psi_artin_schreier(qq, &q(rn, rd)).unwrap(), &psi_tame(e, p).unwrap());
        prop_assert!(psi.is_valid_psi());
        let y = q(y, 3).max(qi(-1));
        prop_assert_eq!(psi.invert().eval(&psi.eval(&y)), y);
    }

    #[test]
    fn series_ring_laws(a in prop::collection::vec((-6i64..6, 1i64..4, 1u32..3), 0..5),
                        b in prop::collection::vec((-6i64..6, 1i64..4, 1u32..3), 0..5)) {
        let f = make_field(3, 1).unwrap();
        let mk = |t: &[(i64, i64, u32)]| {
            let terms: Vec<_> = t.iter().map(|&(n, d, c)| (q(n, d), c)).collect();
            PuiseuxSeries::from_terms(&f, &terms, None)
        };
        let (x, y) = (mk(&a), mk(&b));
        prop_assert!(x.mul(&y).sub(&y.mul(&x)).is_exact_zero());
        let lhs = x.add(&y).pow(3);
        let rhs = x.pow(3).add(&y.pow(3));
        prop_assert!(lhs.sub(&rhs).is_exact_zero());
    }
}
