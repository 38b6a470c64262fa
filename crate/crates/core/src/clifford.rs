//! Dirac algebra in the standard representation, the symmetrizing matrix R,
//! and transpose-symmetry classification.

use thiserror::Error;

use crate::linsys::{inverse, nullspace_of};
use crate::matrix::CMatrix;
use crate::scalar::{i_unit, mag, one, ratio, re, zero, Scalar, C};
use crate::tensor::{pair_slot, Metric, PAIRS};

#[derive(Debug, Error, PartialEq)]
pub enum CliffordError {
    #[error("transpose-symmetry conditions admit no nonzero R; the basis is broken")]
    NoSymmetrizer,
    #[error("R is singular")]
    SingularR,
}

/// γ^μ (upper index), γ5 = iγ⁰γ¹γ²γ³ and σ^{μν} = (i/2)[γ^μ, γ^ν].
#[derive(Clone, Debug, PartialEq)]
pub struct GammaBasis<T: Scalar> {
    pub gamma: [CMatrix<T>; 4],
    pub gamma5: CMatrix<T>,
    /// σ^{μν} for the lexicographic pairs.
    pub sigma: [CMatrix<T>; 6],
    pub identity: CMatrix<T>,
}

fn block<T: Scalar>(tl: &CMatrix<T>, tr: &CMatrix<T>, bl: &CMatrix<T>, br: &CMatrix<T>) -> CMatrix<T> {
    CMatrix::from_fn(4, 4, |r, c| {
        let q = match (r < 2, c < 2) {
            (true, true) => tl,
            (true, false) => tr,
            (false, true) => bl,
            (false, false) => br,
        };
        q[(r % 2, c % 2)].clone()
    })
}

fn commutator_sigma<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    (&(a * b) - &(b * a)).scale(&(i_unit::<T>() * ratio::<T>(1, 2)))
}

pub fn build_gamma_basis<T: Scalar>() -> GammaBasis<T> {
    let z = zero::<T>();
    let o = one::<T>();
    let i = i_unit::<T>();
    let m2 = |a: C<T>, b: C<T>, c: C<T>, d: C<T>| CMatrix::from_vec(2, 2, vec![a, b, c, d]);
    let id2 = m2(o.clone(), z.clone(), z.clone(), o.clone());
    let zero2 = CMatrix::zeros(2, 2);
    let pauli = [
        m2(z.clone(), o.clone(), o.clone(), z.clone()),
        m2(z.clone(), -i.clone(), i.clone(), z.clone()),
        m2(o.clone(), z.clone(), z.clone(), -o.clone()),
    ];
    let g0 = block(&id2, &zero2, &zero2, &(-&id2));
    let gk = |s: &CMatrix<T>| block(&zero2, s, &(-s), &zero2);
    let gamma = [g0, gk(&pauli[0]), gk(&pauli[1]), gk(&pauli[2])];
    GammaBasis::from_gammas(gamma)
}

impl<T: Scalar> GammaBasis<T> {
    /// Completes a basis from four matrices γ^μ.
    pub fn from_gammas(gamma: [CMatrix<T>; 4]) -> Self {
        let gamma5 = (&(&(&gamma[0] * &gamma[1]) * &gamma[2]) * &gamma[3]).scale(&i_unit());
        let sigma = PAIRS.map(|(a, b)| commutator_sigma(&gamma[a], &gamma[b]));
        Self { gamma, gamma5, sigma, identity: CMatrix::identity(4) }
    }

    /// σ^{μν} for any ordered pair, zero on the diagonal.
    pub fn sigma_at(&self, mu: usize, nu: usize) -> CMatrix<T> {
        match pair_slot(mu, nu) {
            None => CMatrix::zeros(4, 4),
            Some((slot, s)) => self.sigma[slot].scale(&re(s)),
        }
    }

    /// γ^μ p_μ for a contravariant p.
    pub fn slash(&self, p_upper: &[C<T>; 4]) -> CMatrix<T> {
        let mut out = CMatrix::zeros(4, 4);
        for mu in 0..4 {
            let pl = p_upper[mu].clone() * re::<T>(Metric::sign(mu));
            out = &out + &self.gamma[mu].scale(&pl);
        }
        out
    }

    /// S γ S⁻¹ for every generator.
    pub fn conjugated(&self, s: &CMatrix<T>, s_inv: &CMatrix<T>) -> Self {
        Self::from_gammas(self.gamma.clone().map(|g| &(s * &g) * s_inv))
    }

    /// The sixteen basis elements with names, in the order
    /// I, γ5, γ^μ, γ5γ^μ, σ^{μν}.
    pub fn elements(&self) -> Vec<(String, CMatrix<T>)> {
        let mut out = vec![("I".to_string(), self.identity.clone()), ("g5".to_string(), self.gamma5.clone())];
        for mu in 0..4 {
            out.push((format!("g{mu}"), self.gamma[mu].clone()));
        }
        for mu in 0..4 {
            out.push((format!("g5g{mu}"), &self.gamma5 * &self.gamma[mu]));
        }
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            out.push((format!("s{a}{b}"), self.sigma[k].clone()));
        }
        out
    }

    /// Elements B whose product B·R is expected symmetric.
    pub fn symmetric_class(&self) -> Vec<CMatrix<T>> {
        let mut v: Vec<CMatrix<T>> = self.gamma.to_vec();
        v.extend(self.sigma.iter().cloned());
        v
    }

    /// Elements B whose product B·R is expected antisymmetric.
    pub fn antisymmetric_class(&self) -> Vec<CMatrix<T>> {
        let mut v = vec![self.identity.clone(), self.gamma5.clone()];
        v.extend(self.gamma.iter().map(|g| &self.gamma5 * g));
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix<T: Scalar> {
    pub r: CMatrix<T>,
    pub r_inverse: CMatrix<T>,
}

/// Stacked linear conditions on the 16 entries of R: (B R)ᵀ = ±B R for the
/// symmetric and antisymmetric classes.
pub fn symmetry_conditions<T: Scalar>(basis: &GammaBasis<T>) -> CMatrix<T> {
    let mut blocks = Vec::new();
    for (class, sign) in [(basis.symmetric_class(), -1i64), (basis.antisymmetric_class(), 1)] {
        for b in class {
            let mut m = CMatrix::zeros(16, 16);
            for k in 0..16 {
                let mut e = CMatrix::zeros(4, 4);
                e[(k / 4, k % 4)] = one();
                let x = &b * &e;
                let cond = &x.transpose() + &x.scale(&re(sign));
                for (r, v) in cond.as_slice().iter().enumerate() {
                    m[(r, k)] = v.clone();
                }
            }
            blocks.push(m);
        }
    }
    let refs: Vec<&CMatrix<T>> = blocks.iter().collect();
    CMatrix::vstack(&refs)
}

/// Dimension of the solution space of the symmetry conditions.
pub fn symmetrizer_dimension<T: Scalar>(basis: &GammaBasis<T>) -> usize {
    nullspace_of(&symmetry_conditions(basis)).len()
}

pub fn find_r<T: Scalar>(basis: &GammaBasis<T>) -> Result<RMatrix<T>, CliffordError> {
    let ns = nullspace_of(&symmetry_conditions(basis));
    let v = ns.into_iter().next().ok_or(CliffordError::NoSymmetrizer)?;
    let mut best = 0;
    for (k, x) in v.iter().enumerate() {
        if mag(x) > mag(&v[best]) {
            best = k;
        }
    }
    let norm = v[best].clone();
    let r = CMatrix::from_vec(4, 4, v.into_iter().map(|x| x / norm.clone()).collect());
    let r_inverse = inverse(&r).ok_or(CliffordError::SingularR)?;
    Ok(RMatrix { r, r_inverse })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    Neither,
}

pub fn classify_symmetry<T: Scalar>(m: &CMatrix<T>) -> Symmetry {
    let t = m.transpose();
    let tol = T::rank_tolerance() * m.max_mag();
    let close = |d: T| d.is_zero() || (!T::is_exact() && d <= tol);
    if close((&t - m).max_mag()) {
        Symmetry::Symmetric
    } else if close((&t + m).max_mag()) {
        Symmetry::Antisymmetric
    } else {
        Symmetry::Neither
    }
}

/// Expansion matrices of a rank-2 multispinor, in component order
/// φ, φ̃, A_λ, Ã_λ, F_{λκ} (lexicographic pairs, with the factor 2 of the
/// ordered-pair sum absorbed).
pub fn spin1_expansion<T: Scalar>(basis: &GammaBasis<T>, r: &RMatrix<T>) -> Vec<CMatrix<T>> {
    let rr = &r.r;
    let mut out = vec![rr.clone(), &basis.gamma5 * rr];
    for g in &basis.gamma {
        out.push(g * rr);
    }
    for g in &basis.gamma {
        out.push(&(&basis.gamma5 * g) * rr);
    }
    for s in &basis.sigma {
        out.push((s * rr).scale(&re(2)));
    }
    out
}
