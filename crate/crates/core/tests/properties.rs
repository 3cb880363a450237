use kym_core::exactmath::{int, rat, sturm_root_count};
use kym_core::positivity::certify_positivity;
use kym_core::surface::{build_surface_solution, SurfaceConfig};
use kym_core::threefold::{kappa2_closed_form, solve_kappa_system, KappaSolution};
use kym_core::{PoleSum, Poly, Rational};
use num::Zero;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

/// `x` with `0 < |x| < 1`.
fn pole_x() -> impl Strategy<Value = Rational> {
    (2i64..=11)
        .prop_flat_map(|d| (1..d, Just(d), any::<bool>()))
        .prop_map(|(n, d, neg)| if neg { rat(-n, d) } else { rat(n, d) })
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 0..5).prop_map(Poly::new)
}

fn polesum() -> impl Strategy<Value = PoleSum> {
    (poly(), prop::collection::vec((pole_x(), 1u32..=4, rational()), 0..4)).prop_map(|(p, poles)| {
        poles.into_iter().fold(PoleSum::from_poly(p), |acc, (x, j, c)| {
            &acc + &PoleSum::pole(x, j, c).unwrap()
        })
    })
}

fn sample_points() -> Vec<Rational> {
    vec![int(-1), rat(-1, 3), int(0), rat(2, 7), int(1)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_is_pointwise(f in polesum(), g in polesum()) {
        let h = &f + &g;
        for z in sample_points() {
            prop_assert_eq!(h.eval(&z).unwrap(), f.eval(&z).unwrap() + g.eval(&z).unwrap());
        }
        prop_assert_eq!(&(&h - &g), &f);
    }

    #[test]
    fn multiplication_is_pointwise(f in polesum(), g in polesum()) {
        let h = &f * &g;
        for z in sample_points() {
            prop_assert_eq!(h.eval(&z).unwrap(), f.eval(&z).unwrap() * g.eval(&z).unwrap());
        }
    }

    #[test]
    fn divide_linear_inverts_multiplication(f in polesum(), x in pole_x()) {
        let q = f.divide_linear(&x).unwrap();
        prop_assert_eq!(q.mul_poly(&PoleSum::linear_factor(&x)), f);
    }

    #[test]
    fn rational_form_round_trip(f in polesum()) {
        let (num, den) = f.to_rational();
        for z in sample_points() {
            prop_assert_eq!(f.eval(&z).unwrap(), num.eval(&z) / den.eval(&z));
        }
        let back = PoleSum::from_fraction(&num, &f.denominator_factors()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn antiderivative_of_derivative(f in polesum(), base in rational()) {
        let d = f.derivative();
        let g = d.antiderivative(&base).unwrap();
        // g = f - f(base)
        prop_assert!(g.eval(&base).unwrap().is_zero());
        prop_assert_eq!(g.derivative(), d);
    }

    #[test]
    fn sturm_counts_planted_roots(roots in prop::collection::btree_set((-9i64..=9, 1i64..=5), 0..5),
                                  mult in 1u32..=3, lead in 1i64..=5) {
        let roots: std::collections::BTreeSet<Rational> = roots.into_iter().map(|(n, d)| rat(n, d)).collect();
        let mut p = Poly::constant(int(lead));
        for r in &roots {
            p = &p * &Poly::linear(-r.clone(), int(1)).pow(mult);
        }
        // complex pair 1 + z² adds no real roots
        p = &p * &Poly::from_i64(&[1, 0, 1]);
        let (lo, hi) = (int(-2), int(2));
        let iso = sturm_root_count(&p, &lo, &hi).unwrap();
        let inside = roots.iter().filter(|r| **r > lo && **r <= hi).count();
        prop_assert_eq!(iso.root_count, inside);
        prop_assert_eq!(iso.isolating_intervals.len(), inside);
        for (a, b) in &iso.isolating_intervals {
            prop_assert_eq!(roots.iter().filter(|r| *r > a && *r <= b).count(), 1);
        }
    }

    #[test]
    fn surface_profiles_are_positive(k in 1i64..=20, kp in 1i64..=40, k1 in -6i64..=6,
                                     k2 in prop::sample::select(vec![-3i64, -1, 1, 2, 7]), h in 0i64..=8) {
        let sol = build_surface_solution(&SurfaceConfig::new(k, kp, k1, k2, h).unwrap()).unwrap();
        prop_assert!(certify_positivity(&sol.profile).positive);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn kappa2_closed_form_matches_system(x1 in pole_x(), x2 in pole_x(),
                                         s1 in (-8i64..=8, 1i64..=4), s2 in (-8i64..=8, 1i64..=4)) {
        prop_assume!(x1 != x2 && x1 != -x2.clone());
        let (s1, s2) = (rat(s1.0, s1.1), rat(s2.0, s2.1));
        let closed = kappa2_closed_form(&x1, &x2, &s1, &s2).unwrap();
        match solve_kappa_system(&x1, &x2, &s1, &s2).unwrap() {
            KappaSolution::Unique { kappa2, .. } => prop_assert_eq!(kappa2, closed),
            other => prop_assert!(false, "expected a unique solution, got {:?}", other),
        }
    }

    #[test]
    fn rank_one_only_on_antidiagonal(x1 in pole_x(), x2 in pole_x(), s1 in rational(), s2 in rational()) {
        prop_assume!(x1 != x2);
        let sol = solve_kappa_system(&x1, &x2, &s1, &s2).unwrap();
        let degenerate = !matches!(sol, KappaSolution::Unique { .. });
        prop_assert_eq!(degenerate, x1 == -x2.clone());
    }
}
