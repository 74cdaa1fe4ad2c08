use proptest::prelude::*;

use optimal_sl2::jordan::nilpotent_jordan;
use optimal_sl2::matrix::ad_matrix;
use optimal_sl2::orbits::rep_from_partition;
use optimal_sl2::springer::{eps_exp, eps_log, springer_apply, springer_invert, SpringerCoeffs};
use optimal_sl2::tilting::{adjoint_descriptor, tilting_decompose};
use optimal_sl2::{Cocharacter, Fp, FpMat, Mat, Partition, Prime, QMat};

const PRIMES: [u32; 4] = [2, 3, 5, 7];

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|p| Prime::new(p).unwrap())
}

fn partition(n_max: usize, part_max: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=part_max, 1..=n_max).prop_filter_map("size", move |v| {
        (v.iter().sum::<usize>() <= n_max).then(|| Partition::new(v).unwrap())
    })
}

/// Unit lower times unit upper triangular, from a flat entry list.
fn invertible(p: Prime, n: usize, e: &[i64]) -> FpMat {
    let mut l = Mat::identity(&p, n);
    let mut u = Mat::identity(&p, n);
    let mut k = 0;
    for i in 0..n {
        for j in 0..n {
            if i > j {
                l[(i, j)] = Fp::new(e[k % e.len()], p);
            } else if i < j {
                u[(i, j)] = Fp::new(e[k % e.len()], p);
            }
            k += 1;
        }
    }
    &l * &u
}

fn conjugated(x: &FpMat, g: &FpMat) -> FpMat {
    x.conjugate_by(g, &g.inverse().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity(p in prime(), r in 1usize..6, c in 1usize..6, e in prop::collection::vec(-9i64..9, 36)) {
        let m: FpMat = Mat::from_ints(&p, r, c, &e[..r * c]);
        let rn = m.rank_nullspace();
        prop_assert_eq!(rn.rank + rn.nullspace.len(), c);
        for v in &rn.nullspace {
            prop_assert!((&m * v).is_zero());
        }
    }

    #[test]
    fn rational_rank_plus_nullity(r in 1usize..5, c in 1usize..5, e in prop::collection::vec(-5i64..5, 16)) {
        let m: QMat = Mat::from_ints(&(), r, c, &e[..r * c]);
        prop_assert_eq!(m.rank() + m.nullity(), c);
    }

    #[test]
    fn jordan_type_is_a_conjugacy_invariant(
        p in prime(), lam in partition(6, 6), e in prop::collection::vec(-9i64..9, 1..20)
    ) {
        let x = rep_from_partition::<Fp>(&lam, &p);
        let y = conjugated(&x, &invertible(p, lam.n(), &e));
        let jd = nilpotent_jordan(&y).unwrap();
        prop_assert_eq!(&jd.partition, &lam);
        prop_assert!(jd.check());
        prop_assert_eq!(lam.n() * lam.n() - ad_matrix(&y).rank(), lam.centralizer_dim());
    }

    #[test]
    fn springer_round_trip_preserves_jordan_type(
        p in prime(),
        lam in partition(5, 5),
        a in prop::collection::vec(0i64..7, 4),
        lead in 1i64..7,
        e in prop::collection::vec(-9i64..9, 1..20),
    ) {
        let n = lam.n();
        prop_assume!(lead % i64::from(p.get()) != 0);
        prop_assume!(n >= 2);
        let mut coeffs = a[..n - 1].to_vec();
        coeffs[0] = lead;
        let f = SpringerCoeffs::from_ints(&p, &coeffs).unwrap();
        let g = invertible(p, n, &e);
        let u = conjugated(&(&Mat::identity(&p, n) + &rep_from_partition::<Fp>(&lam, &p)), &g);
        let x = springer_apply(&f, &u).unwrap();
        prop_assert_eq!(springer_invert(&f, &x).unwrap(), u.clone());
        prop_assert_eq!(nilpotent_jordan(&x).unwrap().partition, lam);
        let h = invertible(p, n, &e[1..].iter().chain([&3]).copied().collect::<Vec<_>>());
        let hu = conjugated(&u, &h);
        prop_assert_eq!(springer_apply(&f, &hu).unwrap(), conjugated(&x, &h));
    }

    #[test]
    fn truncated_exp_log_are_inverse(
        p in prime(), lam in partition(6, 7), e in prop::collection::vec(-9i64..9, 1..20)
    ) {
        prop_assume!(lam.largest() <= p.get() as usize);
        let x = conjugated(&rep_from_partition::<Fp>(&lam, &p), &invertible(p, lam.n(), &e));
        let u = eps_exp(&x).unwrap();
        prop_assert!(u.is_unipotent());
        prop_assert_eq!(eps_log(&u).unwrap(), x);
    }

    #[test]
    fn cocharacter_is_multiplicative(
        p in prime(), w in prop::collection::vec(-4i64..4, 1..5), s in 1i64..7, t in 1i64..7,
        e in prop::collection::vec(-9i64..9, 1..20),
    ) {
        let (s, t) = (Fp::new(s, p), Fp::new(t, p));
        prop_assume!(s.residue() != 0 && t.residue() != 0);
        let psi = Cocharacter::new(invertible(p, w.len(), &e), w).unwrap();
        prop_assert_eq!(&psi.eval(&s) * &psi.eval(&t), psi.eval(&(s * t)));
    }

    #[test]
    fn tilting_decomposition_reconstructs_the_character(p in prime(), lam in partition(7, 7)) {
        prop_assume!(lam.largest() <= p.get() as usize);
        let desc = adjoint_descriptor(&lam, p).unwrap();
        let d = tilting_decompose(&desc, p).unwrap();
        prop_assert_eq!(d.character(p), desc.character.clone());
        prop_assert_eq!(d.fixed_point_count() as usize, desc.fix_p);
        prop_assert_eq!(desc.character.dim() as usize, lam.n() * lam.n());
    }
}
