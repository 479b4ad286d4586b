use nalgebra::{DMatrix, DVector};
use pbosons::fock::{interior_defect, tensor, tensor_vec, FockOperator, FockSpace, FockVector};
use pbosons::landau::{single_index_counterexample, LandauModel};
use pbosons::nogo::{solve_kernel, NogoFamily};
use pbosons::pairs::{
    build_pair, phi_closed_form, phi_ladder, psi_series, BiorthogonalSystem, DeformationFamily, FamilyKind,
};
use pbosons::C64;
use proptest::prelude::*;

fn c64() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

/// Complex parameter with modulus at most `r`.
fn in_disk(r: f64) -> impl Strategy<Value = C64> {
    (0.0..r, 0.0..std::f64::consts::TAU).prop_map(|(m, t)| C64::from_polar(m, t))
}

fn vector(space: FockSpace) -> impl Strategy<Value = FockVector> {
    prop::collection::vec(c64(), space.total_dim()).prop_map(move |v| {
        FockVector::from_coeffs(space, DVector::from_vec(v), 0.0).unwrap()
    })
}

fn operator(space: FockSpace) -> impl Strategy<Value = FockOperator> {
    let n = space.total_dim();
    prop::collection::vec(c64(), n * n).prop_map(move |v| {
        FockOperator::from_matrix(space, DMatrix::from_vec(n, n, v), 0).unwrap()
    })
}

fn kind() -> impl Strategy<Value = FamilyKind> {
    prop_oneof![Just(FamilyKind::GaussLowering), Just(FamilyKind::GaussRaising)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_matches_inner_product(
        (x, u, v) in (2usize..10).prop_map(|d| FockSpace::single(d).unwrap())
            .prop_flat_map(|s| (operator(s), vector(s), vector(s)))
    ) {
        let lhs = u.inner(&x.apply(&v).unwrap()).unwrap();
        let rhs = x.adjoint().apply(&u).unwrap().inner(&v).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn inner_product_is_positive(v in (2usize..20).prop_flat_map(|d| vector(FockSpace::single(d).unwrap()))) {
        let ip = v.inner(&v).unwrap();
        prop_assert!(ip.re >= 0.0);
        prop_assert!(ip.im.abs() <= 1e-15 * ip.re);
        prop_assert!((ip.re.sqrt() - v.norm()).abs() <= 1e-12 * (1.0 + v.norm()));
    }

    #[test]
    fn tensor_mixed_product(
        (x, y, u, v) in (2usize..=8).prop_map(|d| FockSpace::single(d).unwrap())
            .prop_flat_map(|s| (operator(s), operator(s), vector(s), vector(s)))
    ) {
        let lhs = tensor(&x, &y).unwrap().apply(&tensor_vec(&u, &v).unwrap()).unwrap();
        let rhs = tensor_vec(&x.apply(&u).unwrap(), &y.apply(&v).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs).unwrap() <= 1e-11 * (1.0 + rhs.norm()));
    }

    #[test]
    fn family_commutator_is_identity(kind in kind(), p in in_disk(0.45)) {
        let space = FockSpace::single(32).unwrap();
        let pair = build_pair(DeformationFamily::new(kind, p), space).unwrap();
        let comm = pair.a().commutator(pair.b()).unwrap();
        let d = interior_defect(&comm, &FockOperator::identity(space), 2).unwrap();
        prop_assert!(d <= 1e-12);
    }

    #[test]
    fn ladder_matches_closed_form(kind in kind(), p in in_disk(0.3), n_max in 0usize..12) {
        let space = FockSpace::single(64).unwrap();
        let family = DeformationFamily::new(kind, p);
        let pair = build_pair(family, space).unwrap();
        let ladder = phi_ladder(&pair, n_max).unwrap();
        for (n, v) in ladder.iter().enumerate() {
            let closed = phi_closed_form(family, n, space).unwrap();
            let allowance = 1e-10 + v.tail_bound() + closed.tail_bound();
            prop_assert!(v.distance(&closed).unwrap() <= allowance, "n={}", n);
        }
    }

    #[test]
    fn biorthonormal_in_disk(kind in kind(), p in in_disk(0.3)) {
        let space = FockSpace::single(80).unwrap();
        let sys = BiorthogonalSystem::for_family(DeformationFamily::new(kind, p), space, 12).unwrap();
        prop_assert!(sys.max_pairing_defect() <= 1e-9);
    }

    #[test]
    fn parity_support(p in in_disk(0.3), n in 0usize..20) {
        let space = FockSpace::single(48).unwrap();
        let family = DeformationFamily::gauss_lowering(p);
        let phi = phi_closed_form(family, n, space).unwrap();
        let psi = psi_series(family, n, space).unwrap();
        for j in 0..48 {
            if j > n || (n - j) % 2 == 1 {
                prop_assert_eq!(phi.coeffs()[j], C64::new(0.0, 0.0));
            }
            if j < n || (j - n) % 2 == 1 {
                prop_assert_eq!(psi.coeffs()[j], C64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn negated_parameter_flips_alternate_terms(a in -0.45f64..0.45, n in 0usize..24) {
        let space = FockSpace::single(32).unwrap();
        let plus = phi_closed_form(DeformationFamily::gauss_lowering(C64::new(a, 0.0)), n, space).unwrap();
        let minus = phi_closed_form(DeformationFamily::gauss_lowering(C64::new(-a, 0.0)), n, space).unwrap();
        for j in (0..=n).rev().step_by(2) {
            let sign = if ((n - j) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert_eq!(minus.coeffs()[j], plus.coeffs()[j] * sign);
        }
    }

    #[test]
    fn dual_family_mirrors_raising_family(power in 2usize..5, b in in_disk(2.0), k_max in 1usize..60) {
        let dual = solve_kernel(NogoFamily::dual_power_lowering(power, b), k_max).unwrap();
        let direct = solve_kernel(NogoFamily::power_raising(power, b.conj()), k_max).unwrap();
        prop_assert_eq!(dual.terms.len(), direct.terms.len());
        for (x, y) in dual.terms.iter().zip(&direct.terms) {
            prop_assert_eq!(x.index, y.index);
            prop_assert_eq!(x.log_sq, y.log_sq);
        }
        prop_assert_eq!(dual.classification.map(|c| c.class), direct.classification.map(|c| c.class));
    }

    #[test]
    fn kernel_zero_pattern(power in 2usize..6, a in in_disk(1.0)) {
        let rec = solve_kernel(NogoFamily::power_raising(power, a), 20).unwrap();
        let dense = rec.dense_coefficients(120);
        for (i, c) in dense.iter().enumerate() {
            if i % (power + 1) != 0 {
                prop_assert_eq!(*c, C64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn quadratic_ratio_formula(a in 0.001f64..2.0) {
        let rec = solve_kernel(NogoFamily::power_raising(2, C64::new(a, 0.0)), 101).unwrap();
        for (k, r) in rec.ratios.iter().enumerate() {
            let k = k as f64;
            let expected = a * a * (3.0 * k + 1.0) * (3.0 * k + 2.0) / (3.0 * k + 3.0);
            prop_assert!((r - expected).abs() <= 1e-10 * expected);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn counterexample_is_robust(a in in_disk(0.3), b in in_disk(0.3)) {
        let model = LandauModel::new(20, a, b).unwrap();
        let rep = single_index_counterexample(&model, 10).unwrap();
        prop_assert!(rep.max_overlap <= 1e-9);
        prop_assert!(rep.f_norm >= 1.0);
    }
}
