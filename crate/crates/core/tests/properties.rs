use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use qudit_algebra::cyclo::{totient, CycloScalar};
use qudit_algebra::lattice::{make_v, proj_p, proj_r, script_p_from_clock, LatticeConfig, Mode};
use qudit_algebra::matrix::{OperatorMatrix, Scalar, ScalarField};

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
}

/// An element of `Q(ζ_d)` with small rational coefficients.
fn element() -> impl Strategy<Value = CycloScalar> {
    (2u64..=12).prop_flat_map(|d| {
        let phi = totient(d) as usize;
        prop::collection::vec((-6i64..=6, 1i64..=4), phi).prop_map(move |pairs| {
            let coeffs = pairs
                .into_iter()
                .map(|(n, den)| BigRational::new(n.into(), den.into()))
                .collect();
            CycloScalar::from_coeffs(d, coeffs).unwrap()
        })
    })
}

fn pair() -> impl Strategy<Value = (CycloScalar, CycloScalar)> {
    (element(), prop::collection::vec((-6i64..=6, 1i64..=4), 12)).prop_map(|(x, raw)| {
        let d = x.conductor();
        let phi = x.coeffs().len();
        let coeffs = raw[..phi]
            .iter()
            .map(|&(n, den)| BigRational::new(n.into(), den.into()))
            .collect();
        (x, CycloScalar::from_coeffs(d, coeffs).unwrap())
    })
}

/// Exact `dim × dim` matrix over `Q(ζ_c)` with entries `k q^j`, mostly zero.
fn matrix(dim: usize, conductor: u64) -> impl Strategy<Value = OperatorMatrix> {
    prop::collection::vec((-2i64..=2, 0i64..12), dim * dim).prop_map(move |cells| {
        let field = ScalarField::Exact { conductor };
        OperatorMatrix::from_fn(dim, field, |i, j| {
            let (k, power) = cells[i * dim + j];
            let root = field.root_of_unity(conductor, power).unwrap();
            match (root, field.integer(k)) {
                (Scalar::Exact(r), Scalar::Exact(k)) => Scalar::Exact(&r * &k),
                _ => unreachable!(),
            }
        })
        .unwrap()
    })
}

fn square_triple() -> impl Strategy<Value = (OperatorMatrix, OperatorMatrix, OperatorMatrix)> {
    (2usize..=4, 2u64..=6)
        .prop_flat_map(|(dim, c)| (matrix(dim, c), matrix(dim, c), matrix(dim, c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn embedding_is_a_ring_homomorphism((x, y) in pair()) {
        prop_assert!(close((&x + &y).to_complex(), x.to_complex() + y.to_complex()));
        prop_assert!(close((&x - &y).to_complex(), x.to_complex() - y.to_complex()));
        prop_assert!(close((&x * &y).to_complex(), x.to_complex() * y.to_complex()));
    }

    #[test]
    fn multiplication_commutes_and_distributes((x, y) in pair(), z in any::<u8>()) {
        let w = &x + &CycloScalar::from_integer(x.conductor(), i64::from(z % 5));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&w * &(&x + &y), &(&w * &x) + &(&w * &y));
    }

    #[test]
    fn nonzero_elements_invert(x in element()) {
        prop_assume!(!x.is_zero());
        let inv = x.invert().unwrap();
        prop_assert_eq!(&x * &inv, CycloScalar::one(x.conductor()));
    }

    #[test]
    fn conjugation_matches_complex_conjugation(x in element()) {
        prop_assert!(close(x.conjugate().to_complex(), x.to_complex().conj()));
        prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        // x * conj(x) = |x|^2 is real
        prop_assert!((&x * &x.conjugate()).to_complex().im.abs() < 1e-9);
    }

    #[test]
    fn lifting_preserves_value_and_products((x, y) in pair(), factor in 2u64..=3) {
        let target = x.conductor() * factor;
        let (lx, ly) = (x.lift(target).unwrap(), y.lift(target).unwrap());
        prop_assert!(close(lx.to_complex(), x.to_complex()));
        prop_assert_eq!(&lx * &ly, (&x * &y).lift(target).unwrap());
    }

    #[test]
    fn adjoint_reverses_products((a, b, _) in square_triple()) {
        let lhs = a.matmul(&b).unwrap().adjoint();
        let rhs = b.adjoint().matmul(&a.adjoint()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn multiplication_is_associative((a, b, c) in square_triple()) {
        let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
        let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn powers_add_exponents((a, _, _) in square_triple(), j in 0u32..4, k in 0u32..4) {
        prop_assert_eq!(a.matpow(j + k), a.matpow(j).matmul(&a.matpow(k)).unwrap());
    }

    #[test]
    fn kron_mixed_product((a, c, _) in square_triple(), (b, d, _) in square_triple()) {
        // factors may live in different fields; kron and matmul lift to a common one
        let lhs = a.kron(&b).unwrap().matmul(&c.kron(&d).unwrap()).unwrap();
        let rhs = a.matmul(&c).unwrap().kron(&b.matmul(&d).unwrap()).unwrap();
        prop_assert_eq!(lhs.equals(&rhs, 0.0), Ok(true));
    }

    #[test]
    fn float_image_tracks_exact_products((a, b, _) in square_triple()) {
        let exact = a.matmul(&b).unwrap().to_float();
        let float = a.to_float().matmul(&b.to_float()).unwrap();
        prop_assert!(exact.max_residual(&float).unwrap() < 1e-9);
    }

    #[test]
    fn shift_projections_multiply_to_the_max(d in 2usize..=7, n in 0usize..=7, m in 0usize..=7) {
        let cfg = LatticeConfig::new(d, Mode::Exact).unwrap();
        let (n, m) = (n.min(d), m.min(d));
        prop_assert_eq!(
            proj_p(&cfg, n).unwrap().matmul(&proj_p(&cfg, m).unwrap()).unwrap(),
            proj_p(&cfg, n.max(m)).unwrap()
        );
        prop_assert_eq!(
            proj_r(&cfg, n).unwrap().matmul(&proj_r(&cfg, m).unwrap()).unwrap(),
            proj_r(&cfg, n.max(m)).unwrap()
        );
    }

    #[test]
    fn clock_projections_are_periodic(d in 2usize..=7, n in -40i64..40, wraps in -3i64..=3) {
        let cfg = LatticeConfig::new(d, Mode::Exact).unwrap();
        let v = make_v(&cfg);
        let shifted = script_p_from_clock(&cfg, &v, n + wraps * d as i64).unwrap();
        prop_assert_eq!(shifted, script_p_from_clock(&cfg, &v, n).unwrap());
    }
}
