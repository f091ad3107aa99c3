use nalgebra::DMatrix;
use pencil_resolvent::linalg::{
    growth_rate, intersect, rel_dev, subspace_sum, ComplexMatrix, Subspace, Tolerances, C64,
};
use pencil_resolvent::pencil::{flip_pencil, Annulus, OperatorPencil};
use pencil_resolvent::projections::{assemble_domain, decompose};
use pencil_resolvent::resolvent::solve_basic;
use pencil_resolvent::zoo::{build, Family, FamilySpec};
use pencil_resolvent::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        C64::new(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng))
    })
}

fn unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    gaussian(n, n, rng).qr().q()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn modular_law(seed in any::<u64>(), n in 3usize..8, w_frac in 0.3f64..1.0, u_frac in 0.0f64..1.0, v_frac in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w_dim = ((n as f64 * w_frac) as usize).max(1);
        let u_dim = (w_dim as f64 * u_frac) as usize;
        let v_dim = (n as f64 * v_frac) as usize;
        let wb = gaussian(n, w_dim, &mut rng);
        let w = Subspace::span(&wb, &tol());
        let u = Subspace::span(&(&wb * gaussian(w_dim, u_dim, &mut rng)), &tol());
        let v = Subspace::span(&gaussian(n, v_dim, &mut rng), &tol());
        let lhs = intersect(&subspace_sum(&u, &v, &tol()).unwrap(), &w, &tol()).unwrap();
        let rhs = subspace_sum(&u, &intersect(&v, &w, &tol()).unwrap(), &tol()).unwrap();
        prop_assert_eq!(lhs.dim(), rhs.dim());
        prop_assert!(lhs.max_angle(&rhs) < 1e-8);
    }

    #[test]
    fn growth_rate_is_scale_invariant(q in 0.05f64..20.0, scale in 1e-6f64..1e6, len in 6usize..40) {
        let norms: Vec<f64> = (0..len).map(|j| q.powi(j as i32) * (1.0 + 0.1 * (j as f64).sin())).collect();
        let scaled: Vec<f64> = norms.iter().map(|x| x * scale).collect();
        let a = growth_rate(&norms, None).unwrap();
        let b = growth_rate(&scaled, None).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a);
    }

    #[test]
    fn flip_is_an_involution(seed in any::<u64>(), n in 1usize..6, s in 0.0f64..3.0, gap in 0.01f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = OperatorPencil::new(gaussian(n, n, &mut rng), gaussian(n, n, &mut rng)).unwrap();
        let back = flip_pencil(&flip_pencil(&p));
        prop_assert_eq!(&back.a0, &p.a0);
        prop_assert_eq!(&back.a1, &p.a1);
        let a = Annulus::new(s, s + gap).unwrap();
        let aa = a.flip().flip();
        prop_assert!((aa.s() - a.s()).abs() <= 1e-12 * a.r() && (aa.r() - a.r()).abs() <= 1e-12 * a.r());
    }

    #[test]
    fn overlapping_subspaces_are_not_complementary(seed in any::<u64>(), n in 2usize..7, extra in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let extra = extra.min(n - 2);
        let shared = gaussian(n, 1, &mut rng);
        let with = |k: usize, rng: &mut ChaCha8Rng| {
            let mut m = shared.clone().resize_horizontally(1 + k, C64::new(0.0, 0.0));
            m.columns_mut(1, k).copy_from(&gaussian(n, k, rng));
            Subspace::span(&m, &tol())
        };
        let xs = with(extra, &mut rng);
        let xr = with(n - 1 - extra, &mut rng);
        let err = assemble_domain(&xs, &xr, &tol()).unwrap_err();
        prop_assert!(matches!(err, Error::NotComplementary { .. }), "{}", err);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projections_follow_unitary_changes_of_basis(seed in 0u64..10_000, n in 2usize..6) {
        let built = build(&FamilySpec::new(Family::RandomRegular { n, seed })).unwrap().pencil;
        let annulus = built.provenance.annulus_hint.unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let u = unitary(n, &mut rng);
        let v = unitary(n, &mut rng);
        let moved = OperatorPencil::new(&v * &built.a0 * &u, &v * &built.a1 * &u).unwrap();
        let d = decompose(&built, &annulus, 24, &tol()).unwrap();
        let dm = decompose(&moved, &annulus, 24, &tol()).unwrap();
        let b = solve_basic(&built, &d, &tol()).unwrap();
        let bm = solve_basic(&moved, &dm, &tol()).unwrap();
        let (uh, vh) = (u.adjoint(), v.adjoint());
        let pairs = [
            (&dm.p, &uh * &d.p * &u),
            (&dm.pc, &uh * &d.pc * &u),
            (&dm.q, &v * &d.q * &vh),
            (&dm.qc, &v * &d.qc * &vh),
            (&bm.r_minus1, &uh * &b.r_minus1 * &vh),
            (&bm.r0, &uh * &b.r0 * &vh),
        ];
        for (got, want) in pairs {
            prop_assert!(rel_dev(got, &want) < 1e-8, "deviation {:e}", rel_dev(got, &want));
        }
    }
}
