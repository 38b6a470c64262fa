//! Generalized spin-1 equations: the Dirac-type operator pair acting on a
//! rank-2 multispinor, the tensor systems it implies, the second-order
//! equation for the antisymmetric field, the map onto the Weinberg-type
//! parameters, and the sixteen sign-operator variants.

use num_complex::Complex;
use thiserror::Error;

use crate::clifford::{spin1_expansion, GammaBasis, RMatrix};
use crate::fields::{col_a, col_a_tilde, col_f, spin1_labels, Momentum, PHI, PHI_TILDE};
use crate::linsys::{contains, equivalent, LinearSystem, LinsysError};
use crate::matrix::CMatrix;
use crate::scalar::{csqrt, i_unit, imag, is_zero, mag, one, ratio, re, zero, Scalar, C};
use crate::tensor::{eps, pair_label, pair_slot, raise_factor, Ix, LinForm, Lo, Up, PAIRS};

#[derive(Debug, Error, PartialEq)]
pub enum Spin1Error {
    #[error("sign entries must be +1 or -1, got {0}")]
    BadSign(i8),
    #[error("degenerate elimination: a + b p^2 vanishes at this momentum")]
    DegenerateElimination,
    #[error("parameters violate the branch condition b = {0}d")]
    BranchViolated(i8),
    #[error("no solution with b = {0}d for the requested (A, B)")]
    NoSolution(i8),
    #[error("square root not representable in this field")]
    NotRepresentable,
    #[error(transparent)]
    Linsys(#[from] LinsysError),
}

/// Every scalar parameter of the spin-1 and spin-2 constructions.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSet<T: Scalar> {
    pub a: C<T>,
    pub b: C<T>,
    pub c: C<T>,
    pub d: C<T>,
    /// Spin-2 mass.
    pub m: T,
    pub m1: T,
    pub m2: T,
    pub eps: [i8; 4],
}

impl<T: Scalar> ParameterSet<T> {
    pub fn new(a: C<T>, b: C<T>, c: C<T>, d: C<T>) -> Self {
        Self { a, b, c, d, m: T::one(), m1: T::one(), m2: T::one(), eps: [1; 4] }
    }

    /// a + b p².
    pub fn p_coeff(&self, p: &Momentum<T>) -> C<T> {
        self.a.clone() + self.b.clone() * p.p2()
    }

    /// c + d p².
    pub fn q_coeff(&self, p: &Momentum<T>) -> C<T> {
        self.c.clone() + self.d.clone() * p.p2()
    }

    /// Roots x = p² of the determinant condition x = (a + b x)² − (c + d x)².
    pub fn shell_roots(&self) -> Result<Vec<C<T>>, Spin1Error> {
        let (a, b, c, d) = (self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone());
        let q2 = b.clone() * b.clone() - d.clone() * d.clone();
        let q1 = re::<T>(2) * (a.clone() * b - c.clone() * d) - one::<T>();
        let q0 = a.clone() * a - c.clone() * c;
        quadratic_roots(&q2, &q1, &q0)
    }
}

fn quadratic_roots<T: Scalar>(q2: &C<T>, q1: &C<T>, q0: &C<T>) -> Result<Vec<C<T>>, Spin1Error> {
    if is_zero(q2) {
        if is_zero(q1) {
            return Ok(vec![]);
        }
        return Ok(vec![-q0.clone() / q1.clone()]);
    }
    let disc = q1.clone() * q1.clone() - re::<T>(4) * q2.clone() * q0.clone();
    let s = csqrt(&disc).ok_or(Spin1Error::NotRepresentable)?;
    let two_a = re::<T>(2) * q2.clone();
    Ok(vec![(-q1.clone() + s.clone()) / two_a.clone(), (-q1.clone() - s) / two_a])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Plus,
    Minus,
}

/// γ^μ p_μ + (a + b p²) ± γ5 (c + d p²): the plane-wave image of
/// iγ^μ∂_μ + a − b∂² ± γ5(c − d∂²) with ∂_μ → −i p_μ.
pub fn bw_operator<T: Scalar>(params: &ParameterSet<T>, p: &Momentum<T>, sign: Chirality, basis: &GammaBasis<T>) -> CMatrix<T> {
    let pp = params.p_coeff(p);
    let mut q = params.q_coeff(p);
    if sign == Chirality::Minus {
        q = -q;
    }
    let mut out = basis.slash(&p.p);
    out = &out + &basis.identity.scale(&pp);
    &out + &basis.gamma5.scale(&q)
}

/// How the tensor equations are read in momentum space.
///
/// `PauliMetric` treats them as written in x₄ = it notation: a first
/// derivative becomes +p_μ, and the potentials in the equations relate to the
/// expansion coefficients by A = −i·A, Ã = −i·Ã, F = −F (φ, φ̃ unchanged).
/// `Literal` reads them with ∂_μ → −i p_μ and the coefficients unchanged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Reading {
    #[default]
    PauliMetric,
    Literal,
}

/// Linear forms for the tensor-equation field symbols under a reading.
pub struct Symbols<T: Scalar> {
    reading: Reading,
    p: Momentum<T>,
}

impl<T: Scalar> Symbols<T> {
    pub fn new(reading: Reading, p: &Momentum<T>) -> Self {
        Self { reading, p: p.clone() }
    }

    /// Image of ∂ with the given index position.
    pub fn d(&self, ix: Ix) -> C<T> {
        match self.reading {
            Reading::PauliMetric => self.p.at(ix),
            Reading::Literal => -i_unit::<T>() * self.p.at(ix),
        }
    }

    fn phase(&self, which: usize) -> C<T> {
        match self.reading {
            Reading::Literal => one(),
            Reading::PauliMetric => match which {
                0 | 1 => one(),
                2 | 3 => -i_unit::<T>(),
                _ => -one::<T>(),
            },
        }
    }

    pub fn phi(&self) -> LinForm<T> {
        LinForm::unit(PHI).scaled(&self.phase(0))
    }

    pub fn phi_tilde(&self) -> LinForm<T> {
        LinForm::unit(PHI_TILDE).scaled(&self.phase(1))
    }

    pub fn a(&self, ix: Ix) -> LinForm<T> {
        LinForm::unit(col_a(ix.value())).scaled(&(self.phase(2) * re::<T>(raise_factor(&[ix]))))
    }

    pub fn a_tilde(&self, ix: Ix) -> LinForm<T> {
        LinForm::unit(col_a_tilde(ix.value())).scaled(&(self.phase(3) * re::<T>(raise_factor(&[ix]))))
    }

    pub fn f(&self, i: Ix, j: Ix) -> LinForm<T> {
        match pair_slot(i.value(), j.value()) {
            None => LinForm::zero(),
            Some((s, sign)) => {
                LinForm::unit(col_f(s)).scaled(&(self.phase(4) * re::<T>(sign * raise_factor(&[i, j]))))
            }
        }
    }
}

fn spin1_system<T: Scalar>() -> LinearSystem<T> {
    LinearSystem::new(spin1_labels()).expect("unique labels")
}

fn sum4<T: Scalar>(f: impl Fn(usize) -> LinForm<T>) -> LinForm<T> {
    (0..4).fold(LinForm::zero(), |acc, k| acc + f(k))
}

/// Proca-like rows and their constraints, under the default reading.
pub fn derive_spin1_system<T: Scalar>(params: &ParameterSet<T>, p: &Momentum<T>) -> LinearSystem<T> {
    derive_spin1_system_with(params, p, Reading::default())
}

pub fn derive_spin1_system_with<T: Scalar>(params: &ParameterSet<T>, p: &Momentum<T>, reading: Reading) -> LinearSystem<T> {
    let s = Symbols::new(reading, p);
    let pp = params.p_coeff(p);
    let qq = params.q_coeff(p);
    let half = ratio::<T>(1, 2);
    let mut sys = spin1_system();
    for &(nu, la) in &PAIRS {
        let row = s.a(Lo(la)).scaled(&s.d(Lo(nu))) - s.a(Lo(nu)).scaled(&s.d(Lo(la))) - s.f(Lo(nu), Lo(la)).scaled(&(re::<T>(2) * pp.clone()));
        sys.push_form(&row, "proca-curl");
    }
    for la in 0..4 {
        let row = sum4(|mu| s.f(Lo(mu), Lo(la)).scaled(&s.d(Up(mu))))
            - s.a(Lo(la)).scaled(&(half.clone() * pp.clone()))
            - s.a_tilde(Lo(la)).scaled(&(half.clone() * qq.clone()));
        sys.push_form(&row, "proca-divergence");
    }
    let row = sum4(|la| s.a(Lo(la)).scaled(&(i_unit::<T>() * s.d(Up(la))))) + s.phi_tilde().scaled(&qq);
    sys.push_form(&row, "potential-divergence");
    for tau in 0..4 {
        let row = crate::tensor::sum_over::<T, 3>(|[mu, la, ka]| {
            let e = eps([Up(mu), Up(la), Up(ka), Up(tau)]);
            if e == 0 {
                return LinForm::zero();
            }
            s.f(Lo(la), Lo(ka)).scaled(&(s.d(Lo(mu)) * re::<T>(e)))
        });
        sys.push_form(&row, "dual-divergence");
    }
    sys.push_form(&s.phi().scaled(&qq), "scalar-mass");
    sys
}

/// Spin-0 sector rows and their constraints, under the default reading.
pub fn derive_duffin_kemmer<T: Scalar>(params: &ParameterSet<T>, p: &Momentum<T>) -> LinearSystem<T> {
    derive_duffin_kemmer_with(params, p, Reading::default())
}

pub fn derive_duffin_kemmer_with<T: Scalar>(params: &ParameterSet<T>, p: &Momentum<T>, reading: Reading) -> LinearSystem<T> {
    let s = Symbols::new(reading, p);
    let pp = params.p_coeff(p);
    let qq = params.q_coeff(p);
    let mut sys = spin1_system();
    sys.push_form(&s.phi().scaled(&pp), "dk-scalar");
    let row = sum4(|mu| s.a_tilde(Lo(mu)).scaled(&(i_unit::<T>() * s.d(Up(mu))))) - s.phi_tilde().scaled(&pp);
    sys.push_form(&row, "dk-pseudoscalar");
    for nu in 0..4 {
        let row = s.a_tilde(Lo(nu)).scaled(&pp) + s.a(Lo(nu)).scaled(&qq) + s.phi_tilde().scaled(&(i_unit::<T>() * s.d(Lo(nu))));
        sys.push_form(&row, "dk-axial");
    }
    for mu in 0..4 {
        sys.push_form(&s.phi().scaled(&s.d(Lo(mu))), "dk-gradient");
    }
    for &(nu, la) in &PAIRS {
        let row = s.a_tilde(Lo(la)).scaled(&s.d(Lo(nu))) - s.a_tilde(Lo(nu)).scaled(&s.d(Lo(la)))
            + s.f(Lo(nu), Lo(la)).scaled(&(re::<T>(2) * qq.clone()));
        sys.push_form(&row, "dk-axial-curl");
    }
    sys
}

/// Union of the Proca-like and spin-0 systems.
pub fn derive_tensor_system<T: Scalar>(params: &ParameterSet<T>, p: &Momentum<T>, reading: Reading) -> LinearSystem<T> {
    let mut s = derive_spin1_system_with(params, p, reading);
    s.extend(&derive_duffin_kemmer_with(params, p, reading)).expect("same labels");
    s
}

fn multispinor_rows<T: Scalar>(
    first: &CMatrix<T>,
    second: &CMatrix<T>,
    basis: &GammaBasis<T>,
    r: &RMatrix<T>,
) -> LinearSystem<T> {
    let bs = spin1_expansion(basis, r);
    let cols1: Vec<CMatrix<T>> = bs.iter().map(|b| first * b).collect();
    let cols2: Vec<CMatrix<T>> = bs.iter().map(|b| second * &b.transpose()).collect();
    let mut sys = spin1_system();
    for (cols, tag) in [(&cols1, "multispinor-first-index"), (&cols2, "multispinor-second-index")] {
        for e in 0..16 {
            let row: Vec<C<T>> = cols.iter().map(|m| m.as_slice()[e].clone()).collect();
            if row.iter().all(is_zero) {
                continue;
            }
            sys.push_row(row, tag).expect("row length");
        }
    }
    sys
}

/// The operator pair applied to Ψ = Σ x_k B_k: O₊Ψ = 0 and O₋Ψᵀ = 0.
pub fn multispinor_spin1_system<T: Scalar>(
    params: &ParameterSet<T>,
    p: &Momentum<T>,
    basis: &GammaBasis<T>,
    r: &RMatrix<T>,
) -> LinearSystem<T> {
    let plus = bw_operator(params, p, Chirality::Plus, basis);
    let minus = bw_operator(params, p, Chirality::Minus, basis);
    multispinor_rows(&plus, &minus, basis, r)
}

fn f_labels() -> Vec<String> {
    (0..6).map(|s| format!("F[{}]", pair_label(s))).collect()
}

/// Second-order equation for the antisymmetric field after the potentials
/// are eliminated: ∂_μ∂^ν F_{νλ} − ∂_λ∂^ν F_{νμ} + bracket(p²) F_{μλ} = 0.
pub fn eliminate_potentials<T: Scalar>(params: &ParameterSet<T>, p: &Momentum<T>) -> Result<LinearSystem<T>, Spin1Error> {
    eliminate_potentials_with(params, p, Reading::default())
}

pub fn eliminate_potentials_with<T: Scalar>(
    params: &ParameterSet<T>,
    p: &Momentum<T>,
    reading: Reading,
) -> Result<LinearSystem<T>, Spin1Error> {
    let pp = params.p_coeff(p);
    let m = mag(&pp);
    if m.is_zero() || (!T::is_exact() && m < T::from_ratio(1, 100_000_000)) {
        return Err(Spin1Error::DegenerateElimination);
    }
    Ok(ast_rows(params, p, reading).eliminate_to(&f_labels())?)
}

/// Consequences of the tensor system for F alone: A, Ã, φ, φ̃ eliminated.
pub fn eliminated_tensor_system<T: Scalar>(params: &ParameterSet<T>, p: &Momentum<T>) -> Result<LinearSystem<T>, Spin1Error> {
    Ok(derive_tensor_system(params, p, Reading::default()).eliminate_to(&f_labels())?)
}

fn ast_rows<T: Scalar>(params: &ParameterSet<T>, p: &Momentum<T>, reading: Reading) -> LinearSystem<T> {
    let s = Symbols::new(reading, p);
    let [c2, c1, c0] = crate::linsys::bracket_coefficients(&params.a, &params.b, &params.c, &params.d);
    let x = p.p2();
    let bracket = c2 * x.clone() * x.clone() + c1 * x + c0;
    let mut sys = spin1_system();
    for &(mu, la) in &PAIRS {
        let row = sum4(|nu| {
            s.f(Lo(nu), Lo(la)).scaled(&(s.d(Lo(mu)) * s.d(Up(nu)))) - s.f(Lo(nu), Lo(mu)).scaled(&(s.d(Lo(la)) * s.d(Up(nu))))
        }) + s.f(Lo(mu), Lo(la)).scaled(&bracket);
        sys.push_form(&row, "ast-second-order");
    }
    sys
}

/// The second-order rows embedded over all spin-1 unknowns.
pub fn ast_system<T: Scalar>(params: &ParameterSet<T>, p: &Momentum<T>) -> LinearSystem<T> {
    ast_rows(params, p, Reading::default())
}

/// Whether the second-order rows are implied by the tensor system.
pub fn ast_containment<T: Scalar>(params: &ParameterSet<T>, p: &Momentum<T>) -> Result<bool, Spin1Error> {
    let full = derive_tensor_system(params, p, Reading::default());
    Ok(contains(&full, &ast_system(params, p))?)
}

/// Which sign column of the map and which sign of b = ±d.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeinbergBranch {
    pub column: Column,
    /// +1 for b = d, −1 for b = −d.
    pub b_sign: i8,
}

impl WeinbergBranch {
    pub const ALL: [WeinbergBranch; 4] = [
        WeinbergBranch { column: Column::Left, b_sign: 1 },
        WeinbergBranch { column: Column::Left, b_sign: -1 },
        WeinbergBranch { column: Column::Right, b_sign: 1 },
        WeinbergBranch { column: Column::Right, b_sign: -1 },
    ];

    fn column_sign(self) -> i64 {
        match self.column {
            Column::Left => -1,
            Column::Right => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeinbergParams<T: Scalar> {
    pub a_w: C<T>,
    pub b_w: C<T>,
    pub branch: WeinbergBranch,
}

fn close<T: Scalar>(x: &C<T>, y: &C<T>) -> bool {
    let d = mag(&(x.clone() - y.clone()));
    d.is_zero() || (!T::is_exact() && d <= T::from_ratio(1, 1_000_000_000_000) * (T::one() + mag(x) + mag(y)))
}

/// Left column: c²−a² = −Bm²/2, −2(ab−cd) = (A−1)/2.
/// Right column: c²−a² = +Bm²/2, +2(ab−cd) = (A+1)/2.
pub fn weinberg_map<T: Scalar>(
    params: &ParameterSet<T>,
    m: &T,
    branch: WeinbergBranch,
) -> Result<WeinbergParams<T>, Spin1Error> {
    let s = re::<T>(branch.b_sign as i64);
    if !close(&params.b, &(s * params.d.clone())) {
        return Err(Spin1Error::BranchViolated(branch.b_sign));
    }
    let (a, b, c, d) = (&params.a, &params.b, &params.c, &params.d);
    let k = c.clone() * c.clone() - a.clone() * a.clone();
    let l = a.clone() * b.clone() - c.clone() * d.clone();
    let m2 = Complex::new(m.clone() * m.clone(), T::zero());
    let cs = re::<T>(branch.column_sign());
    let b_w = re::<T>(2) * cs.clone() * k / m2;
    let a_w = cs * (re::<T>(4) * l - one::<T>());
    Ok(WeinbergParams { a_w, b_w, branch })
}

/// One-parameter solution family of the inverse map, parametrized by a.
#[derive(Clone, Debug, PartialEq)]
pub struct WeinbergFamily<T: Scalar> {
    pub branch: WeinbergBranch,
    /// Target value of c² − a².
    pub k: C<T>,
    /// Target value of ab − cd.
    pub l: C<T>,
    /// Sign of the square root chosen for c.
    pub c_sign: i8,
}

impl<T: Scalar> WeinbergFamily<T> {
    /// (a, b, c, d) on this family at the given a.
    pub fn at(&self, a: &C<T>) -> Result<[C<T>; 4], Spin1Error> {
        let root = csqrt(&(a.clone() * a.clone() + self.k.clone())).ok_or(Spin1Error::NotRepresentable)?;
        let c = root * re::<T>(self.c_sign as i64);
        let s = re::<T>(self.branch.b_sign as i64);
        let denom = s.clone() * a.clone() - c.clone();
        let d = if is_zero(&denom) {
            if !is_zero(&self.l) {
                return Err(Spin1Error::NoSolution(self.branch.b_sign));
            }
            zero()
        } else {
            self.l.clone() / denom
        };
        Ok([a.clone(), s * d.clone(), c, d])
    }
}

pub fn weinberg_inverse<T: Scalar>(
    a_w: &C<T>,
    b_w: &C<T>,
    m: &T,
    branch: WeinbergBranch,
) -> Result<Vec<WeinbergFamily<T>>, Spin1Error> {
    let cs = re::<T>(branch.column_sign());
    let m2 = Complex::new(m.clone() * m.clone(), T::zero());
    let k = cs.clone() * b_w.clone() * m2 * ratio::<T>(1, 2);
    let l = (cs * a_w.clone() + one::<T>()) * ratio::<T>(1, 4);
    Ok([1i8, -1].map(|c_sign| WeinbergFamily { branch, k: k.clone(), l: l.clone(), c_sign }).to_vec())
}

/// A₁ = (ε₁+ε₃)/2, A₂ = (ε₂+ε₄)/2, B₁ = (ε₁−ε₃)/2, B₂ = (ε₂−ε₄)/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignVariantCoeffs {
    pub a1: i8,
    pub a2: i8,
    pub b1: i8,
    pub b2: i8,
}

impl SignVariantCoeffs {
    pub fn negated(self) -> Self {
        Self { a1: -self.a1, a2: -self.a2, b1: -self.b1, b2: -self.b2 }
    }
}

pub fn make_sign_variant(eps: [i8; 4]) -> Result<SignVariantCoeffs, Spin1Error> {
    for e in eps {
        if e != 1 && e != -1 {
            return Err(Spin1Error::BadSign(e));
        }
    }
    Ok(SignVariantCoeffs {
        a1: (eps[0] + eps[2]) / 2,
        a2: (eps[1] + eps[3]) / 2,
        b1: (eps[0] - eps[2]) / 2,
        b2: (eps[1] - eps[3]) / 2,
    })
}

/// All sixteen sign tuples, + before −, first entry slowest.
pub fn enumerate_sign_variants() -> Vec<([i8; 4], SignVariantCoeffs)> {
    let mut out = Vec::with_capacity(16);
    for n in 0..16u8 {
        let eps: [i8; 4] = std::array::from_fn(|k| if n >> (3 - k) & 1 == 0 { 1 } else { -1 });
        out.push((eps, make_sign_variant(eps).expect("valid signs")));
    }
    out
}

pub fn derive_sign_variant_system<T: Scalar>(
    m1: &T,
    m2: &T,
    coeffs: SignVariantCoeffs,
    p: &Momentum<T>,
) -> LinearSystem<T> {
    derive_sign_variant_system_with(m1, m2, coeffs, p, Reading::default())
}

pub fn derive_sign_variant_system_with<T: Scalar>(
    m1: &T,
    m2: &T,
    k: SignVariantCoeffs,
    p: &Momentum<T>,
    reading: Reading,
) -> LinearSystem<T> {
    let s = Symbols::new(reading, p);
    let m1 = Complex::new(m1.clone(), T::zero());
    let m2 = Complex::new(m2.clone(), T::zero());
    let (a1, a2, b1, b2) = (re::<T>(k.a1 as i64), re::<T>(k.a2 as i64), re::<T>(k.b1 as i64), re::<T>(k.b2 as i64));
    let i = i_unit::<T>();
    let mut sys = spin1_system();
    for &(mu, la) in &PAIRS {
        let dual = crate::tensor::sum_over::<T, 2>(|[al, be]| {
            let e = eps([Lo(al), Lo(be), Lo(mu), Lo(la)]);
            if e == 0 {
                return LinForm::zero();
            }
            s.f(Up(al), Up(be)).scaled(&re(e))
        });
        let row = s.a(Lo(la)).scaled(&s.d(Lo(mu))) - s.a(Lo(mu)).scaled(&s.d(Lo(la)))
            + s.f(Lo(mu), Lo(la)).scaled(&(re::<T>(2) * m1.clone() * a1.clone()))
            + dual.scaled(&(i.clone() * m2.clone() * a2.clone()));
        sys.push_form(&row, "variant-curl");
    }
    let half = ratio::<T>(1, 2);
    for ka in 0..4 {
        let row = sum4(|la| s.f(Lo(ka), Lo(la)).scaled(&s.d(Up(la))))
            - s.a(Lo(ka)).scaled(&(half.clone() * m1.clone() * a1.clone()))
            - s.a_tilde(Lo(ka)).scaled(&(half.clone() * m2.clone() * b2.clone()));
        sys.push_form(&row, "variant-divergence");
    }
    let row = sum4(|mu| s.a(Lo(mu)).scaled(&(-i.clone() * s.d(Up(mu)))))
        + s.phi().scaled(&(re::<T>(2) * m1.clone() * b1.clone()))
        + s.phi_tilde().scaled(&(re::<T>(2) * m2.clone() * b2.clone()));
    sys.push_form(&row, "variant-potential-divergence");
    for la in 0..4 {
        let dual = crate::tensor::sum_over::<T, 3>(|[mu, nu, ka]| {
            let e = eps([Lo(mu), Lo(nu), Lo(ka), Lo(la)]);
            if e == 0 {
                return LinForm::zero();
            }
            s.f(Up(nu), Up(ka)).scaled(&(s.d(Up(mu)) * re::<T>(e)))
        });
        let row = dual.scaled(&i) - s.a(Lo(la)).scaled(&(m2.clone() * a2.clone())) - s.a_tilde(Lo(la)).scaled(&(m1.clone() * b1.clone()));
        sys.push_form(&row, "variant-dual");
    }
    let row = s.phi_tilde().scaled(&(m1.clone() * b1.clone())) + s.phi().scaled(&(m2.clone() * b2.clone()));
    sys.push_form(&row, "variant-scalar");
    sys
}

/// The sign-operator input pair on Ψ = Σ x_k B_k:
/// (p̸ + ε₁m₁ + ε₂m₂γ5)Ψ = 0 and (p̸ + ε₃m₁ + ε₄m₂γ5)Ψᵀ = 0.
pub fn sign_variant_multispinor_system<T: Scalar>(
    m1: &T,
    m2: &T,
    eps4: [i8; 4],
    p: &Momentum<T>,
    basis: &GammaBasis<T>,
    r: &RMatrix<T>,
) -> LinearSystem<T> {
    let slash = basis.slash(&p.p);
    let op = |e_mass: i8, e_axial: i8| {
        let mass = Complex::new(m1.clone() * T::from_ratio(e_mass as i64, 1), T::zero());
        let axial = Complex::new(m2.clone() * T::from_ratio(e_axial as i64, 1), T::zero());
        &(&slash + &basis.identity.scale(&mass)) + &basis.gamma5.scale(&axial)
    };
    multispinor_rows(&op(eps4[0], eps4[1]), &op(eps4[2], eps4[3]), basis, r)
}

/// rows(−ε, −p) = −rows(ε, p) entrywise, hence equal rowspaces.
pub fn negated_tuple_identity<T: Scalar>(m1: &T, m2: &T, eps4: [i8; 4], p: &Momentum<T>) -> Result<bool, Spin1Error> {
    let k = make_sign_variant(eps4)?;
    let s = derive_sign_variant_system(m1, m2, k, p);
    let n = derive_sign_variant_system(m1, m2, k.negated(), &p.negated());
    if s.n_rows() != n.n_rows() {
        return Ok(false);
    }
    let entrywise = s.rows().iter().zip(n.rows()).all(|(a, b)| {
        a.provenance == b.provenance && a.coeffs.iter().zip(&b.coeffs).all(|(x, y)| close(&-x.clone(), y))
    });
    Ok(entrywise && equivalent(&s, &n)?)
}

/// Partition of the sixteen variants into rowspace classes at momentum p.
#[derive(Clone, Debug, PartialEq)]
pub struct VariantClasses {
    pub count: usize,
    /// Class index per variant, in enumeration order.
    pub labels: Vec<usize>,
    pub ranks: Vec<usize>,
}

pub fn sign_variant_classes<T: Scalar>(m1: &T, m2: &T, p: &Momentum<T>) -> Result<VariantClasses, Spin1Error> {
    let systems: Vec<LinearSystem<T>> =
        enumerate_sign_variants().into_iter().map(|(_, k)| derive_sign_variant_system(m1, m2, k, p)).collect();
    let mut labels = vec![usize::MAX; systems.len()];
    let mut count = 0;
    for i in 0..systems.len() {
        if labels[i] != usize::MAX {
            continue;
        }
        labels[i] = count;
        for j in i + 1..systems.len() {
            if labels[j] == usize::MAX && equivalent(&systems[i], &systems[j])? {
                labels[j] = count;
            }
        }
        count += 1;
    }
    Ok(VariantClasses { count, labels, ranks: systems.iter().map(|s| s.rank()).collect() })
}

/// Imaginary unit helper for callers building complex parameters.
pub fn imaginary<T: Scalar>(v: i64) -> C<T> {
    imag(v, 1)
}
