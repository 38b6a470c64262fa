//! Generalized Bargmann-Wigner equations for spin 1 and spin 2 as finite
//! linear systems in momentum space.
//!
//! Every algebraic routine is generic over [`scalar::Scalar`], so the same
//! code runs in `f64`, `f32` and exact rationals.

pub mod clifford;
pub mod fields;
pub mod linsys;
pub mod matrix;
pub mod sampling;
pub mod scalar;
pub mod spin1;
pub mod spin2;
pub mod tensor;

pub type C64 = num_complex::Complex<f64>;
pub type Exact = num_rational::BigRational;

/// Row provenance names used across all derived systems.
pub const VOCABULARY: &[&str] = &[
    "plumbing",
    "elimination",
    "proca-curl",
    "proca-divergence",
    "potential-divergence",
    "dual-divergence",
    "scalar-mass",
    "dk-scalar",
    "dk-pseudoscalar",
    "dk-axial",
    "dk-gradient",
    "dk-axial-curl",
    "ast-second-order",
    "multispinor-first-index",
    "multispinor-second-index",
    "variant-curl",
    "variant-divergence",
    "variant-potential-divergence",
    "variant-dual",
    "variant-scalar",
    "g-from-t-divergence",
    "f-from-r-divergence",
    "t-from-g-curl",
    "r-from-f-curl",
    "g-divergence",
    "f-divergence",
    "t-dual-divergence",
    "r-dual-divergence",
    "g-trace",
    "g-antisymmetric",
    "g-metric-trace",
    "f-trace",
    "f-dual",
    "t-trace",
    "t-dual",
    "f-t-exchange",
    "f-t-dual",
    "r-trace",
    "r-dual",
    "contraction",
    "multispinor-index-1",
    "multispinor-index-2",
    "multispinor-index-3",
    "multispinor-index-4",
    "modified-g-divergence",
    "modified-f-divergence",
    "modified-t-curl",
    "modified-r-curl",
    "g-second-order",
    "vector-definition",
];

/// Whether a provenance string belongs to the fixed vocabulary.
pub fn is_known_provenance(s: &str) -> bool {
    if VOCABULARY.contains(&s) {
        return true;
    }
    match s.strip_prefix("essential-") {
        Some(n) => n.len() == 2 && matches!(n.parse::<u32>(), Ok(1..=13)),
        None => false,
    }
}

/// Sign and matrix conventions, embedded in reports.
pub fn conventions() -> serde_json::Value {
    serde_json::json!({
        "metric": "diag(+1,-1,-1,-1)",
        "gamma": "Dirac representation",
        "gamma5": "i g0 g1 g2 g3",
        "sigma": "(i/2)[g^m, g^n]",
        "epsilon": "eps^{0123} = +1",
        "plane_wave": "d_m -> -i p_m",
        "spin1_reading": "first derivative -> +p_m; A, A~ -> -i times expansion coefficient; F -> minus expansion coefficient",
        "storage": "spin-2 components with all indices lower",
    })
}
