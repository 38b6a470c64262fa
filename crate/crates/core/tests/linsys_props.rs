use bwspin::linsys::*;
use bwspin::matrix::CMatrix;
use bwspin::scalar::to_c64;
use bwspin::{Exact, C64};
use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;

fn system(rows: &[Vec<C64>], n: usize) -> LinearSystem<f64> {
    let mut s = LinearSystem::new((0..n).map(|k| format!("x{k}")).collect()).unwrap();
    for r in rows {
        s.push_row(r.clone(), "plumbing").unwrap();
    }
    s
}

fn svd_rank(m: &CMatrix<f64>) -> usize {
    let d = DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)]);
    let sv = d.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|s| **s > 1e-10 * top).count()
}

/// rows × n matrix of the given rank built as a product of random factors.
fn low_rank(entries: &[f64], rows: usize, n: usize, rank: usize) -> Vec<Vec<C64>> {
    let a = |i: usize, k: usize| Complex::new(entries[(i * 7 + k * 3) % entries.len()], entries[(i * 5 + k * 11 + 1) % entries.len()]);
    let b = |k: usize, j: usize| Complex::new(entries[(k * 13 + j * 2 + 3) % entries.len()], entries[(k * 3 + j * 17 + 5) % entries.len()]);
    (0..rows).map(|i| (0..n).map(|j| (0..rank).map(|k| a(i, k) * b(k, j)).sum()).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity_is_width(entries in prop::collection::vec(-1.0f64..1.0, 40), rows in 1usize..9, n in 1usize..9, rank in 0usize..6) {
        let s = system(&low_rank(&entries, rows, n, rank), n);
        prop_assert_eq!(s.rank() + s.nullspace().len(), n);
        for v in s.nullspace() {
            prop_assert!(s.residual(&v) < 1e-9);
        }
    }

    #[test]
    fn rank_agrees_with_svd(entries in prop::collection::vec(-1.0f64..1.0, 40), rows in 1usize..9, n in 1usize..9, rank in 0usize..6) {
        let s = system(&low_rank(&entries, rows, n, rank), n);
        prop_assert_eq!(s.rank(), svd_rank(&s.matrix()));
    }

    #[test]
    fn equivalence_is_an_equivalence(entries in prop::collection::vec(-1.0f64..1.0, 40), mix in prop::collection::vec(-1.0f64..1.0, 16)) {
        let rows = low_rank(&entries, 4, 6, 3);
        let a = system(&rows, 6);
        // invertible recombination of the rows
        let m = |i: usize, j: usize| Complex::new(mix[4 * i + j] + if i == j { 4.0 } else { 0.0 }, 0.0);
        let recombined: Vec<Vec<C64>> = (0..4).map(|i| (0..6).map(|c| (0..4).map(|j| m(i, j) * rows[j][c]).sum()).collect()).collect();
        let b = system(&recombined, 6);
        let c = b.reordered(&b.unknowns().iter().rev().cloned().collect::<Vec<_>>()).unwrap();
        prop_assert!(equivalent(&a, &a).unwrap());
        prop_assert!(equivalent(&a, &b).unwrap());
        prop_assert!(equivalent(&b, &a).unwrap());
        prop_assert!(equivalent(&b, &c).unwrap());
        prop_assert!(equivalent(&a, &c).unwrap());
    }

    #[test]
    fn json_round_trip(entries in prop::collection::vec(-1.0f64..1.0, 40)) {
        let s = system(&low_rank(&entries, 3, 5, 2), 5);
        let back = LinearSystem::<f64>::from_json_value(&s.to_json_value()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn spectrum_is_blind_to_overall_sign(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d in -2.0f64..2.0) {
        let z = |x: f64| Complex::new(x, 0.0);
        let s = mass_spectrum(&z(a), &z(b), &z(c), &z(d));
        let t = mass_spectrum(&z(-a), &z(-b), &z(-c), &z(-d));
        match (s, t) {
            (Ok(s), Ok(t)) => {
                prop_assert_eq!(&s.coefficients, &t.coefficients);
                prop_assert_eq!(s.roots.len(), t.roots.len());
                for r in &s.roots {
                    prop_assert!(s.evaluate(r).norm() <= 1e-8 * (1.0 + s.coefficients.iter().map(|c| c.norm()).sum::<f64>() * (1.0 + r.norm() * r.norm())));
                }
            }
            (Err(e), Err(f)) => prop_assert_eq!(e, f),
            _ => prop_assert!(false, "results disagree"),
        }
    }
}

#[test]
fn spectrum_examples() {
    let z = |x: f64| Complex::new(x, 0.0);
    let s = mass_spectrum(&z(0.0), &z(1.0), &z(0.0), &z(0.0)).unwrap();
    assert_eq!(s.roots, vec![z(0.0), z(0.0)]);
    assert!(s.double_root);
    let s = mass_spectrum(&z(1.0), &z(0.0), &z(0.0), &z(0.0)).unwrap();
    assert!(s.no_propagating_branch);
    assert_eq!(s.degree, 0);
    let s = mass_spectrum(&z(1.0), &z(1.0), &z(0.0), &z(0.0)).unwrap();
    assert_eq!(s.degree, 2);
    assert_eq!(mass_spectrum(&z(1.0), &z(1.0), &z(1.0), &z(1.0)).unwrap_err(), LinsysError::IdenticallyDegenerate);
}

#[test]
fn spectrum_keeps_a_tiny_root_accurate() {
    let z = |x: f64| Complex::new(x, 0.0);
    // (c²−a²) tiny against ab − cd: naive formula would cancel
    let s = mass_spectrum(&z(1.0), &z(1e4), &z(1.0 + 1e-9), &z(0.0)).unwrap();
    for r in &s.roots {
        assert!(s.evaluate(r).norm() <= 1e-9 * (1.0 + r.norm() * r.norm() * 1e8));
    }
    let small = s.roots.iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min);
    assert!((small - 1e-13).abs() < 1e-15, "{small}");
}

#[test]
fn exact_rank_and_elimination() {
    let q = |n: i64| Complex::new(Exact::from_integer(n.into()), Exact::from_integer(0.into()));
    let mut s = LinearSystem::<Exact>::new(vec!["x".into(), "y".into(), "z".into()]).unwrap();
    s.push_row(vec![q(1), q(-1), q(0)], "plumbing").unwrap();
    s.push_row(vec![q(0), q(1), q(-2)], "plumbing").unwrap();
    s.push_row(vec![q(1), q(0), q(-2)], "plumbing").unwrap();
    assert_eq!(s.rank(), 2);
    let ns = s.nullspace();
    assert_eq!(ns.len(), 1);
    assert!(s.residual(&ns[0]) == Exact::from_integer(0.into()));
    let e = s.eliminate_to(&["x".into(), "z".into()]).unwrap();
    let mut want = LinearSystem::<Exact>::new(vec!["x".into(), "z".into()]).unwrap();
    want.push_row(vec![q(1), q(-2)], "plumbing").unwrap();
    assert!(equivalent(&e, &want).unwrap());
    assert!(e.rows().iter().all(|r| r.provenance == "elimination"));
    assert_eq!(to_c64(&ns[0][0]).im, 0.0);
}

#[test]
fn labels_must_be_unique_and_match() {
    assert_eq!(
        LinearSystem::<f64>::new(vec!["a".into(), "a".into()]).unwrap_err(),
        LinsysError::DuplicateLabel("a".into())
    );
    let a = system(&[], 2);
    let b = LinearSystem::<f64>::new(vec!["p".into(), "q".into()]).unwrap();
    assert_eq!(equivalent(&a, &b).unwrap_err(), LinsysError::LabelMismatch);
}

#[test]
fn ranks_of_wide_and_tall_matrices_match_svd() {
    let mut seed = 1u64;
    let mut next = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    for (rows, cols, rank) in [(40, 100, 25), (120, 60, 59), (30, 30, 30)] {
        let a: Vec<Vec<C64>> = (0..rows).map(|_| (0..rank).map(|_| Complex::new(next(), next())).collect()).collect();
        let b: Vec<Vec<C64>> = (0..rank).map(|_| (0..cols).map(|_| Complex::new(next(), next())).collect()).collect();
        let m = CMatrix::from_fn(rows, cols, |i, j| (0..rank).map(|k| a[i][k] * b[k][j]).sum());
        assert_eq!(rank_of(&m), rank);
        assert_eq!(svd_rank(&m), rank);
    }
}
