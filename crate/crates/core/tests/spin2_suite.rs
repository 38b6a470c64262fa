use bwspin::clifford::{build_gamma_basis, find_r};
use bwspin::fields::{Momentum, Spin2Layout};
use bwspin::linsys::{contains, LinearSystem};
use bwspin::sampling::Sampler;
use bwspin::spin2::*;
use bwspin::{is_known_provenance, Exact, C64};
use num_complex::Complex;
use proptest::prelude::*;

fn one() -> C64 {
    Complex::new(1.0, 0.0)
}

fn momenta(seed: u64) -> (Momentum<f64>, Momentum<f64>) {
    let mut s = Sampler::new(seed);
    (s.off_shell(&[one()]), s.on_shell(&one()))
}

#[test]
fn standard_nullities() {
    let basis = build_gamma_basis::<f64>();
    let r = find_r(&basis).unwrap();
    let point = ModifiedCoeffs::specialization_point();
    let layout = Spin2Layout::standard();
    let ctr = contraction_rows(&layout, &point, &basis, &r);
    for seed in 0..3 {
        let (off, on) = momenta(seed);
        for (p, dynamics, contracted, multispinor) in [(&off, 0, 0, 0), (&on, 30, 5, 9)] {
            let st = standard_spin2_system(&1.0, p).unwrap();
            assert_eq!(st.dynamical.nullity(), dynamics);
            assert_eq!(standard_spin2_constraints(p).nullity(), 26);
            assert_eq!(st.dynamical.stacked(&ctr).unwrap().nullity(), contracted);
            let ms = multispinor_spin2_rows(&layout, &point, &1.0, p, &[0, 1, 2, 3], &basis, &r);
            assert_eq!(ms.nullity(), multispinor);
            assert_eq!(verify_triviality(&1.0, p).unwrap().nullspace_dim, 0);
        }
    }
}

#[test]
fn triviality_at_other_masses() {
    let mut s = Sampler::new(40);
    for _ in 0..4 {
        let m: f64 = s.rational(0.5, 2.0);
        let x = Complex::new(m * m, 0.0);
        for p in [s.off_shell(&[x]), s.on_shell(&x)] {
            let report = verify_triviality(&m, &p).unwrap();
            assert_eq!(report.nullspace_dim, 0);
        }
    }
}

#[test]
fn triviality_report_names_its_witness() {
    let (_, on) = momenta(5);
    let report = verify_triviality(&1.0, &on).unwrap();
    assert_eq!(report.dynamics_nullspace_dim, 30);
    assert_eq!(report.witness.len(), 30);
    assert!(report.witness_families.iter().all(|f| CONSTRAINT_FAMILIES.contains(&f.as_str())));
    assert_eq!(report.ablations.len(), CONSTRAINT_FAMILIES.len());
    // no single family is indispensable: the others still force zero
    assert!(report.ablations.iter().all(|a| a.nullspace_dim == 0));
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["nullspace_dim"], 0);
}

#[test]
fn triviality_holds_over_rationals() {
    let m = Exact::from_integer(1.into());
    let x = Complex::new(m.clone(), Exact::from_integer(0.into()));
    let p: Momentum<Exact> = Sampler::new(6).on_shell(&x);
    let st = standard_spin2_system(&m, &p).unwrap();
    let all = st.combined.stacked(&standard_spin2_constraints(&p)).unwrap();
    assert_eq!(all.nullity(), 0);
}

#[test]
fn contraction_route_implies_all_but_two_families() {
    let basis = build_gamma_basis::<f64>();
    let r = find_r(&basis).unwrap();
    let ctr = contraction_rows(&Spin2Layout::standard(), &ModifiedCoeffs::specialization_point(), &basis, &r);
    let (off, _) = momenta(7);
    let cons = standard_spin2_constraints(&off);
    let mut missing = Vec::new();
    for fam in CONSTRAINT_FAMILIES {
        let part = cons.filter_rows(|row| row.provenance == *fam);
        assert!(part.n_rows() > 0);
        if !contains(&ctr, &part).unwrap() {
            missing.push(fam);
        }
    }
    assert_eq!(missing, ["g-metric-trace", "r-trace"]);
}

#[test]
fn recovery_at_the_specialization_point() {
    let point = ModifiedCoeffs::specialization_point();
    for seed in 10..13 {
        let (off, on) = momenta(seed);
        for (p, ranks) in [(&off, (100, 100)), (&on, (70, 70))] {
            let rep = recovery_report(&point, &1.0, p).unwrap();
            assert!(rep.recovered);
            assert_eq!(rep.dynamical_ranks, ranks);
            assert_eq!(rep.constraint_ranks, (90, 74));
        }
    }
    assert_eq!(specialize_to_standard(&point.perturbed(4, &one())), point);
}

fn broken(sweep: &[(String, bool)]) -> Vec<&str> {
    sweep.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect()
}

#[test]
fn perturbation_sweep_on_and_off_shell() {
    let (off, on) = momenta(20);
    let delta = Complex::new(1e-3, 0.0);
    let on_sweep = perturbation_sweep(&1.0, &on, &delta).unwrap();
    assert_eq!(on_sweep.len(), 12);
    // b7, b8, b9 only enter multiplied by a3, which vanishes at the point
    assert_eq!(broken(&on_sweep), ["a1", "a2", "a3", "b1", "b2", "b3", "b4", "b5", "b6"]);
    assert_eq!(broken(&perturbation_sweep(&1.0, &off, &delta).unwrap()), ["a3", "b3", "b6"]);
}

#[test]
fn g_equation_follows_from_the_dynamics() {
    let mut s = Sampler::new(30);
    let point = ModifiedCoeffs::specialization_point();
    let generic = ModifiedCoeffs { alpha: std::array::from_fn(|_| s.complex(0.5, 1.5)), beta: std::array::from_fn(|_| s.complex(0.5, 1.5)) };
    let (off, on) = momenta(31);
    for coeffs in [&point, &generic] {
        for p in [&off, &on] {
            assert!(g_equation_containment(coeffs, &1.0, p).unwrap());
        }
    }
    let g_off = derive_g_equation(&point, &1.0, &off).unwrap();
    let g_on = derive_g_equation(&point, &1.0, &on).unwrap();
    assert_eq!(g_off.nullity(), 0);
    assert_eq!(g_on.nullity(), 11);
    assert!(divergence_pair_defect(&g_on, &on) <= 1e-10);
    let w = [Complex::new(0.3, 0.1), Complex::new(-0.7, 0.2), Complex::new(0.5, -0.4)];
    assert!(transverse_traceless_defect(&1.0, &on, &w).unwrap() <= 1e-10);
    assert!(transverse_traceless_defect(&1.0, &off, &w).unwrap() <= 1e-10);
}

#[test]
fn bad_inputs_are_rejected() {
    let (off, _) = momenta(1);
    assert!(matches!(standard_spin2_system(&0.0, &off), Err(Spin2Error::ZeroMass)));
    assert!(matches!(verify_triviality(&0.0, &off), Err(Spin2Error::ZeroMass)));
    let mut no_g = ModifiedCoeffs::<f64>::specialization_point();
    no_g.alpha[0] = Complex::new(0.0, 0.0);
    assert!(matches!(derive_g_equation(&no_g, &1.0, &off), Err(Spin2Error::Precondition(_))));
}

fn all_known(s: &LinearSystem<f64>) -> bool {
    s.rows().iter().all(|r| !r.provenance.is_empty() && is_known_provenance(&r.provenance))
}

#[test]
fn every_row_has_a_known_provenance() {
    let basis = build_gamma_basis::<f64>();
    let r = find_r(&basis).unwrap();
    let point = ModifiedCoeffs::specialization_point();
    let (_, on) = momenta(2);
    let st = standard_spin2_system(&1.0, &on).unwrap();
    let md = modified_spin2_system(&point, &1.0, &on).unwrap();
    let layout = Spin2Layout::standard();
    for s in [
        &st.combined,
        &standard_spin2_constraints(&on),
        &md.combined,
        &contraction_rows(&layout, &point, &basis, &r),
        &multispinor_spin2_rows(&layout, &point, &1.0, &on, &[0, 3], &basis, &r),
        &derive_g_equation(&point, &1.0, &on).unwrap(),
        &md.dynamical.eliminate_to(&layout.labels()).unwrap(),
    ] {
        assert!(all_known(s));
    }
    assert!(!is_known_provenance("made-up-row"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn rescaling_an_alpha_against_its_betas_keeps_the_nullity(
        seed in 0u64..1000,
        which in 0usize..3,
        lambda in 0.2f64..3.0,
        phase in 0.0f64..6.0,
    ) {
        let mut s = Sampler::new(seed);
        let coeffs = ModifiedCoeffs { alpha: std::array::from_fn(|_| s.complex(0.5, 1.5)), beta: std::array::from_fn(|_| s.complex(0.5, 1.5)) };
        let p = s.on_shell(&one());
        let l = Complex::from_polar(lambda, phase);
        let mut scaled = coeffs.clone();
        scaled.alpha[which] *= l;
        for j in 3 * which..3 * which + 3 {
            scaled.beta[j] /= l;
        }
        let a = modified_spin2_system(&coeffs, &1.0, &p).unwrap();
        let b = modified_spin2_system(&scaled, &1.0, &p).unwrap();
        prop_assert_eq!(a.combined.nullity(), b.combined.nullity());
        prop_assert_eq!(a.dynamical.nullity(), b.dynamical.nullity());
    }
}
