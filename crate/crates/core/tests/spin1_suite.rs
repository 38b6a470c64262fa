use bwspin::clifford::{build_gamma_basis, find_r};
use bwspin::fields::{col_f, spin1_labels, Momentum, SPIN1_DIM};
use bwspin::linsys::{contains, equivalent, mass_spectrum, LinearSystem};
use bwspin::sampling::Sampler;
use bwspin::scalar::{ratio, re};
use bwspin::spin1::*;
use bwspin::tensor::pair_slot;
use bwspin::{Exact, C64};
use num_complex::Complex;

fn random_params(s: &mut Sampler) -> ParameterSet<f64> {
    ParameterSet::new(s.complex(-1.0, 1.0), s.complex(-1.0, 1.0), s.complex(-1.0, 1.0), s.complex(-1.0, 1.0))
}

#[test]
fn multispinor_and_tensor_systems_agree() {
    let basis = build_gamma_basis::<f64>();
    let r = find_r(&basis).unwrap();
    let mut s = Sampler::new(101);
    for _ in 0..5 {
        let params = random_params(&mut s);
        let roots = params.shell_roots().unwrap();
        for _ in 0..10 {
            let p = s.off_shell(&roots);
            let ms = multispinor_spin1_system(&params, &p, &basis, &r);
            let t = derive_tensor_system(&params, &p, Reading::PauliMetric);
            assert!(equivalent(&ms, &t).unwrap());
            assert_eq!(t.nullity(), 0);
        }
        for root in &roots {
            let p = s.on_shell(root);
            let ms = multispinor_spin1_system(&params, &p, &basis, &r);
            let t = derive_tensor_system(&params, &p, Reading::PauliMetric);
            assert!(equivalent(&ms, &t).unwrap());
            assert_eq!(t.nullity(), 4);
        }
    }
}

#[test]
fn equivalence_holds_exactly_on_shell() {
    let basis = build_gamma_basis::<Exact>();
    let r = find_r(&basis).unwrap();
    let z = || ratio::<Exact>(0, 1);
    // a = 1 and nothing else: the shell is p² = 1
    let params = ParameterSet::new(re::<Exact>(1), z(), z(), z());
    assert_eq!(params.shell_roots().unwrap(), vec![re::<Exact>(1)]);
    let p = Sampler::new(8).on_shell(&re::<Exact>(1));
    let ms = multispinor_spin1_system(&params, &p, &basis, &r);
    let t = derive_tensor_system(&params, &p, Reading::PauliMetric);
    assert!(equivalent(&ms, &t).unwrap());
    assert_eq!(ms.nullity(), 4);
}

#[test]
fn literal_reading_misses_the_shell() {
    let basis = build_gamma_basis::<f64>();
    let r = find_r(&basis).unwrap();
    let mut s = Sampler::new(102);
    let params = random_params(&mut s);
    let roots = params.shell_roots().unwrap();
    let p = s.on_shell(&roots[0]);
    let ms = multispinor_spin1_system(&params, &p, &basis, &r);
    assert!(!equivalent(&ms, &derive_tensor_system(&params, &p, Reading::Literal)).unwrap());
}

#[test]
fn both_sectors_follow_from_the_multispinor_rows() {
    let basis = build_gamma_basis::<f64>();
    let r = find_r(&basis).unwrap();
    let mut s = Sampler::new(103);
    let params = random_params(&mut s);
    let p = s.on_shell(&params.shell_roots().unwrap()[0]);
    let ms = multispinor_spin1_system(&params, &p, &basis, &r);
    assert!(contains(&ms, &derive_spin1_system(&params, &p)).unwrap());
    assert!(contains(&ms, &derive_duffin_kemmer(&params, &p)).unwrap());
}

#[test]
fn operator_sign_convention() {
    let basis = build_gamma_basis::<f64>();
    let mut s = Sampler::new(3);
    let params = random_params(&mut s);
    let p: Momentum<f64> = s.off_shell(&[]);
    let plus = bw_operator(&params, &p, Chirality::Plus, &basis);
    let minus = bw_operator(&params, &p, Chirality::Minus, &basis);
    let diff = &plus - &minus;
    let want = basis.gamma5.scale(&(params.q_coeff(&p) * Complex::new(2.0, 0.0)));
    assert!(diff.max_diff(&want) < 1e-14);
}

#[test]
fn second_order_rows_follow_from_the_tensor_system() {
    let mut s = Sampler::new(104);
    for _ in 0..5 {
        let params = random_params(&mut s);
        let roots = params.shell_roots().unwrap();
        for p in [s.off_shell(&roots), s.on_shell(&roots[1])] {
            assert!(ast_containment(&params, &p).unwrap());
            let reduced = eliminated_tensor_system(&params, &p).unwrap();
            assert!(contains(&reduced, &eliminate_potentials(&params, &p).unwrap()).unwrap());
        }
    }
}

/// Coefficients of p^ν F_{νλ} over the six stored F slots.
fn transversality(p: &Momentum<f64>) -> LinearSystem<f64> {
    let labels: Vec<String> = spin1_labels()[col_f(0)..].to_vec();
    let mut sys = LinearSystem::new(labels).unwrap();
    for la in 0..4 {
        let mut row = vec![Complex::new(0.0, 0.0); 6];
        for nu in 0..4 {
            if let Some((slot, sign)) = pair_slot(nu, la) {
                row[slot] += p.upper(nu) * sign as f64;
            }
        }
        sys.push_row(row, "plumbing").unwrap();
    }
    sys
}

fn ast_residual(params: &ParameterSet<f64>, p: &Momentum<f64>, f: &[C64]) -> f64 {
    let mut x = vec![Complex::new(0.0, 0.0); SPIN1_DIM];
    x[col_f(0)..].clone_from_slice(f);
    ast_system(params, p).residual(&x)
}

#[test]
fn transverse_field_lives_on_the_bracket_roots() {
    let mut s = Sampler::new(105);
    for _ in 0..10 {
        let params = random_params(&mut s);
        let spec = mass_spectrum(&params.a, &params.b, &params.c, &params.d).unwrap();
        for root in &spec.roots {
            assert!(spec.evaluate(root).norm() <= 1e-10);
            let p = s.on_shell(root);
            let transverse = transversality(&p).nullspace();
            assert_eq!(transverse.len(), 3);
            for f in &transverse {
                assert!(ast_residual(&params, &p, f) <= 1e-10);
            }
        }
        let p = s.off_shell(&spec.roots);
        let f = &transversality(&p).nullspace()[0];
        assert!(ast_residual(&params, &p, f) > 1e-6);
    }
}

#[test]
fn elimination_refuses_a_vanishing_pivot() {
    let z = Complex::new(0.0, 0.0);
    let params = ParameterSet::new(Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0), z, z);
    let p = Sampler::new(1).on_shell(&Complex::new(1.0, 0.0));
    assert_eq!(eliminate_potentials(&params, &p).unwrap_err(), Spin1Error::DegenerateElimination);
}

#[test]
fn weinberg_round_trip_on_every_branch() {
    let mut s = Sampler::new(106);
    let m = 1.7;
    let mut worst = 0.0f64;
    for branch in WeinbergBranch::ALL {
        for _ in 0..100 {
            let a_w: C64 = s.complex(-2.0, 2.0);
            let b_w: C64 = s.complex(-2.0, 2.0);
            for family in weinberg_inverse(&a_w, &b_w, &m, branch).unwrap() {
                let a: C64 = s.complex(-1.0, 1.0);
                let [a, b, c, d] = family.at(&a).unwrap();
                let params = ParameterSet::new(a, b, c, d);
                let back = weinberg_map(&params, &m, branch).unwrap();
                worst = worst.max((back.a_w - a_w).norm()).max((back.b_w - b_w).norm());
            }
        }
    }
    assert!(worst <= 1e-12, "{worst}");
}

#[test]
fn weinberg_columns_match_their_formulas() {
    let mut s = Sampler::new(107);
    let m = 1.3f64;
    for _ in 0..20 {
        let a: C64 = s.complex(-1.0, 1.0);
        let b: C64 = s.complex(-1.0, 1.0);
        let c: C64 = s.complex(-1.0, 1.0);
        let params = ParameterSet::new(a, b, c, b);
        let left = weinberg_map(&params, &m, WeinbergBranch { column: Column::Left, b_sign: 1 }).unwrap();
        let right = weinberg_map(&params, &m, WeinbergBranch { column: Column::Right, b_sign: 1 }).unwrap();
        let k = c * c - a * a;
        let l = a * b - c * b;
        assert!((k + left.b_w * m * m / 2.0).norm() < 1e-12);
        assert!((-2.0 * l - (left.a_w - 1.0) / 2.0).norm() < 1e-12);
        assert!((k - right.b_w * m * m / 2.0).norm() < 1e-12);
        assert!((2.0 * l - (right.a_w + 1.0) / 2.0).norm() < 1e-12);
    }
    let one = Complex::new(1.0, 0.0);
    // depends on (a, b, c, d) only through c² − a² and ab − cd
    let params = ParameterSet::new(s.complex(-1.0, 1.0), one * 0.4, s.complex(-1.0, 1.0), one * 0.4);
    let flipped = ParameterSet::new(-params.a, -params.b, -params.c, -params.d);
    for branch in [WeinbergBranch { column: Column::Left, b_sign: 1 }, WeinbergBranch { column: Column::Right, b_sign: 1 }] {
        let x = weinberg_map(&params, &m, branch).unwrap();
        let y = weinberg_map(&flipped, &m, branch).unwrap();
        assert!((x.a_w - y.a_w).norm() < 1e-14 && (x.b_w - y.b_w).norm() < 1e-14);
    }
    let flat = ParameterSet::new(one, one, one, one);
    assert_eq!(weinberg_map(&flat, &1.0, WeinbergBranch { column: Column::Left, b_sign: 1 }).unwrap().a_w, one);
    assert_eq!(weinberg_map(&flat, &1.0, WeinbergBranch { column: Column::Right, b_sign: 1 }).unwrap().a_w, -one);
    assert_eq!(
        weinberg_map(&flat, &1.0, WeinbergBranch { column: Column::Left, b_sign: -1 }).unwrap_err(),
        Spin1Error::BranchViolated(-1)
    );
}

#[test]
fn sixteen_sign_tuples() {
    let all = enumerate_sign_variants();
    assert_eq!(all.len(), 16);
    assert_eq!(all[0].0, [1, 1, 1, 1]);
    assert_eq!(all[1].0, [1, 1, 1, -1]);
    assert_eq!(all[15].0, [-1, -1, -1, -1]);
    for (e, k) in &all {
        assert_eq!(2 * k.a1, e[0] + e[2]);
        assert_eq!(2 * k.a2, e[1] + e[3]);
        assert_eq!(2 * k.b1, e[0] - e[2]);
        assert_eq!(2 * k.b2, e[1] - e[3]);
        assert_eq!(make_sign_variant(e.map(|x| -x)).unwrap(), k.negated());
    }
    assert_eq!(make_sign_variant([1, 0, 1, 1]).unwrap_err(), Spin1Error::BadSign(0));
}

#[test]
fn negating_a_tuple_and_the_momentum_keeps_the_rows() {
    let mut s = Sampler::new(108);
    let p: Momentum<f64> = s.off_shell(&[]);
    for (e, _) in enumerate_sign_variants() {
        assert!(negated_tuple_identity(&1.3, &0.6, e, &p).unwrap(), "{e:?}");
    }
}

#[test]
fn sign_variant_classes_at_generic_momentum() {
    let mut s = Sampler::new(109);
    for _ in 0..3 {
        let p: Momentum<f64> = s.off_shell(&[]);
        let classes = sign_variant_classes(&1.3, &0.6, &p).unwrap();
        assert_eq!(classes.count, 13);
        for ((e, k), rank) in enumerate_sign_variants().iter().zip(&classes.ranks) {
            let want = if k.b1 == 0 && k.b2 == 0 { 10 } else { 12 };
            assert_eq!(*rank, want, "{e:?}");
        }
    }
}

#[test]
fn variant_rows_match_the_sign_operators_for_the_plain_tuple() {
    let basis = build_gamma_basis::<f64>();
    let r = find_r(&basis).unwrap();
    let mut s = Sampler::new(110);
    let p: Momentum<f64> = s.off_shell(&[]);
    let ms = sign_variant_multispinor_system(&1.3, &0.0, [1, 1, 1, 1], &p, &basis, &r);
    let z = Complex::new(0.0, 0.0);
    let params = ParameterSet::new(Complex::new(1.3, 0.0), z, z, z);
    assert!(equivalent(&ms, &derive_tensor_system(&params, &p, Reading::PauliMetric)).unwrap());
}
