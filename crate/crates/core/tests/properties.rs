use proptest::prelude::*;

use e7sym::algebra::Algebra;
use e7sym::conformal::{
    bracket, e7_basis, freudenthal_action, quartic, quartic_linear_coefficient, E7Elem, E7Family, FreudVec,
};
use e7sym::cubie::{assemble_cube, extract_freudvec, naive_action, sided_action, CubieError};
use e7sym::harness::{export_structure_constants, report_string, verify_all, RunConfig, Suite};
use e7sym::random::Sampler;
use e7sym::rational::Rational;

fn algebra() -> impl Strategy<Value = Algebra> {
    prop::sample::select(Algebra::ALL.to_vec())
}

/// A generic Θ: e₆ part of a basis element plus random ρ, A, B.
fn random_theta(s: &mut Sampler, alg: Algebra) -> E7Elem {
    let basis = e7_basis(alg).unwrap();
    let phi = basis.elems[s.index(basis.e6_dim)].phi.clone();
    E7Elem {
        phi,
        rho: s.rational(),
        a: s.herm_mat(alg),
        b: s.herm_mat(alg),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rational_field_ops(a in any::<i64>(), b in 1i64..=i64::MAX, c in any::<i64>(), d in 1i64..1_000_000) {
        let x = Rational::new(a, b);
        let y = Rational::new(c, d);
        prop_assert_eq!((x.clone() + y.clone()) - y.clone(), x.clone());
        if !y.is_zero() {
            prop_assert_eq!((x.clone() * y.clone()) / y.clone(), x.clone());
        }
        prop_assert_eq!((x.clone() * y.clone()).to_big(), x.to_big() * y.to_big());
    }

    #[test]
    fn action_is_linear_in_p(seed in any::<u64>(), alg in algebra()) {
        let mut s = Sampler::new(seed);
        let theta = random_theta(&mut s, alg);
        let (p1, p2, c) = (s.freud_vec(alg), s.freud_vec(alg), s.rational());
        let lhs = freudenthal_action(&theta, &p1.add(&p2.scale(&c)).unwrap()).unwrap();
        let rhs = freudenthal_action(&theta, &p1)
            .unwrap()
            .add(&freudenthal_action(&theta, &p2).unwrap().scale(&c))
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quartic_is_invariant(seed in any::<u64>(), alg in algebra()) {
        let mut s = Sampler::new(seed);
        let theta = random_theta(&mut s, alg);
        let p = s.freud_vec(alg);
        let dir = freudenthal_action(&theta, &p).unwrap();
        prop_assert!(quartic_linear_coefficient(&p, &dir).unwrap().is_zero());
    }

    #[test]
    fn quartic_is_homogeneous_of_degree_four(seed in any::<u64>(), alg in algebra()) {
        let mut s = Sampler::new(seed);
        let p = s.freud_vec(alg);
        let t = s.rational();
        prop_assert_eq!(quartic(&p.scale(&t)), quartic(&p) * t.pow(4));
    }

    #[test]
    fn cube_round_trip(seed in any::<u64>(), alg in algebra()) {
        let mut s = Sampler::new(seed);
        let p = s.freud_vec(alg);
        let cube = assemble_cube(&p);
        prop_assert!(cube.is_antisymmetric());
        prop_assert_eq!(extract_freudvec(&cube).unwrap(), p);
    }

    #[test]
    fn bracket_is_antisymmetric(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let alg = Algebra::Complex;
        let (t1, t2) = (random_theta(&mut s, alg), random_theta(&mut s, alg));
        let ab = bracket(&t1, &t2).unwrap();
        let ba = bracket(&t2, &t1).unwrap();
        prop_assert_eq!(ab.mat.add(&ba.mat).unwrap().nnz(), 0);
    }
}

#[test]
fn cube_actions_preserve_antisymmetry() {
    let mut s = Sampler::new(7);
    for alg in Algebra::ALL {
        let basis = e7_basis(alg).unwrap();
        let cube = assemble_cube(&s.freud_vec(alg));
        for (theta, label) in basis.elems.iter().zip(&basis.labels) {
            if !theta.has_matrix_form() {
                continue;
            }
            let naive = naive_action(theta, &cube).unwrap();
            assert!(naive.is_antisymmetric(), "naive {label} over {alg:?}");
            match sided_action(theta, &cube) {
                Ok(sided) => assert!(sided.is_antisymmetric(), "sided {label} over {alg:?}"),
                Err(CubieError::SidedInconsistent { .. }) => {}
                Err(e) => panic!("sided {label} over {alg:?}: {e}"),
            }
        }
    }
}

#[test]
fn translations_are_graded() {
    for alg in [Algebra::Real, Algebra::Quaternion] {
        let basis = e7_basis(alg).unwrap();
        let mb = basis.matrixized().unwrap();
        let of = |f: E7Family| -> Vec<usize> { (0..basis.len()).filter(|&i| basis.families[i] == f).collect() };
        let (ta, tb) = (of(E7Family::Translation), of(E7Family::ConformalTranslation));
        for same in [&ta, &tb] {
            for &i in same {
                for &j in same {
                    assert!(mb.mats[i].commutator(&mb.mats[j]).unwrap().is_zero());
                }
            }
        }
        for &i in &ta {
            for &j in &tb {
                let c = mb.coordinates(&mb.mats[i].commutator(&mb.mats[j]).unwrap()).unwrap().unwrap();
                for (k, x) in c.iter().enumerate() {
                    if !x.is_zero() {
                        assert!(
                            matches!(basis.families[k], E7Family::E6 | E7Family::Dilation),
                            "[{}, {}] has a {:?} component",
                            basis.labels[i],
                            basis.labels[j],
                            basis.families[k]
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn structure_constants_satisfy_jacobi() {
    let sc = export_structure_constants(Algebra::Quaternion).unwrap();
    let n = sc.dim;
    let c = sc.dense();
    let at = |i: usize, j: usize, k: usize| &c[(i * n + j) * n + k];
    let mut s = Sampler::new(11);
    for _ in 0..200 {
        let (i, j, k) = (s.index(n), s.index(n), s.index(n));
        for l in 0..n {
            let mut sum = Rational::ZERO;
            for m in 0..n {
                sum += at(i, j, m).clone() * at(m, k, l).clone();
                sum += at(j, k, m).clone() * at(m, i, l).clone();
                sum += at(k, i, m).clone() * at(m, j, l).clone();
            }
            assert!(sum.is_zero(), "Jacobi fails at ({i},{j},{k}) component {l}");
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let config = RunConfig {
        seed: 99,
        samples: 3,
        algebras: vec![Algebra::Real, Algebra::Complex],
        suites: vec![Suite::Quartic, Suite::Lemma1, Suite::Symplectic],
    };
    assert_eq!(report_string(&verify_all(&config)), report_string(&verify_all(&config)));
}

#[test]
fn freud_basis_spans_the_representation() {
    for (alg, dim) in Algebra::ALL.into_iter().zip([14, 20, 32, 56]) {
        let basis = FreudVec::basis(alg);
        assert_eq!(basis.len(), dim);
        for (i, v) in basis.iter().enumerate() {
            let c = v.coords();
            assert_eq!(c.iter().filter(|x| !x.is_zero()).count(), 1);
            assert!(c[i].is_one());
        }
    }
}
