//! Spin-2 from a rank-4 multispinor: the standard tensor system and its
//! algebraic constraints, the triviality certificate, the α/β-modified
//! system, recovery of the standard case, and the second-order G equation.

use num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

use crate::clifford::{GammaBasis, RMatrix};
use crate::fields::{spin2_pack_matrix, Block, FieldsError, Momentum, Spin2Layout};
use crate::linsys::{contains, equivalent, nullspace_of, LinearSystem, LinsysError};
use crate::matrix::CMatrix;
use crate::scalar::{i_unit, is_zero, mag, one, ratio, re, zero, Scalar, C};
use crate::tensor::{delta, levi_civita, sum_over, LinForm, Lo, Metric, Up, PAIRS};

#[derive(Debug, Error, PartialEq)]
pub enum Spin2Error {
    #[error("mass must be nonzero")]
    ZeroMass,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Linsys(#[from] LinsysError),
    #[error(transparent)]
    Fields(#[from] FieldsError),
}

/// Expansion weights α₁..α₃ and β₁..β₉ of the modified rank-4 function.
#[derive(Clone, Debug, PartialEq)]
pub struct ModifiedCoeffs<T: Scalar> {
    pub alpha: [C<T>; 3],
    pub beta: [C<T>; 9],
}

pub const COEFF_NAMES: [&str; 12] = ["a1", "a2", "a3", "b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8", "b9"];

impl<T: Scalar> ModifiedCoeffs<T> {
    /// α₃ = β₃ = β₆ = β₉ = 0, all others 1.
    pub fn specialization_point() -> Self {
        let o = one::<T>;
        let z = zero::<T>;
        Self { alpha: [o(), o(), z()], beta: [o(), o(), z(), o(), o(), z(), o(), o(), z()] }
    }

    /// Coefficient k in the order a1, a2, a3, b1, ..., b9.
    pub fn get(&self, k: usize) -> C<T> {
        if k < 3 {
            self.alpha[k].clone()
        } else {
            self.beta[k - 3].clone()
        }
    }

    pub fn perturbed(&self, k: usize, delta: &C<T>) -> Self {
        let mut out = self.clone();
        if k < 3 {
            out.alpha[k] += delta.clone();
        } else {
            out.beta[k - 3] += delta.clone();
        }
        out
    }

    fn ab(&self, i: usize, j: usize) -> C<T> {
        self.alpha[i - 1].clone() * self.beta[j - 1].clone()
    }
}

/// Coefficients at the standard point, whatever was passed in.
pub fn specialize_to_standard<T: Scalar>(_coeffs: &ModifiedCoeffs<T>) -> ModifiedCoeffs<T> {
    ModifiedCoeffs::specialization_point()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spin2System<T: Scalar> {
    pub dynamical: LinearSystem<T>,
    pub constraints: LinearSystem<T>,
    pub combined: LinearSystem<T>,
}

impl<T: Scalar> Spin2System<T> {
    fn new(dynamical: LinearSystem<T>, constraints: LinearSystem<T>) -> Self {
        let combined = dynamical.stacked(&constraints).expect("same unknowns");
        Self { dynamical, constraints, combined }
    }
}

/// Component access with index positions written as a string of 'u'/'d'.
struct Comps<T: Scalar> {
    layout: Spin2Layout,
    dl: [C<T>; 4],
    du: [C<T>; 4],
}

fn sign(i: usize) -> i64 {
    Metric::sign(i)
}

impl<T: Scalar> Comps<T> {
    fn new(layout: Spin2Layout, p: &Momentum<T>) -> Self {
        let mi = -i_unit::<T>();
        Self {
            layout,
            dl: std::array::from_fn(|k| mi.clone() * p.lower(k)),
            du: std::array::from_fn(|k| mi.clone() * p.upper(k)),
        }
    }

    fn system(&self) -> LinearSystem<T> {
        LinearSystem::new(self.layout.labels()).expect("unique labels")
    }

    fn x(&self, b: Block, pos: &str, ix: &[usize]) -> LinForm<T> {
        let f: i64 = pos.bytes().zip(ix).map(|(c, &i)| if c == b'u' { sign(i) } else { 1 }).product();
        let form = self.layout.comp::<T>(b, ix);
        if f == 1 {
            form
        } else {
            form.scaled(&re(f))
        }
    }
}

/// Levi-Civita tensor with positions written as 'u'/'d'.
fn e(pos: &str, ix: [usize; 4]) -> i64 {
    let base = levi_civita(ix[0], ix[1], ix[2], ix[3]);
    if base == 0 {
        return 0;
    }
    base * pos.bytes().zip(ix).map(|(c, i)| if c == b'd' { sign(i) } else { 1 }).product::<i64>()
}

fn g(i: usize) -> i64 {
    sign(i)
}

fn check_mass<T: Scalar>(m: &T) -> Result<C<T>, Spin2Error> {
    if m.is_zero() {
        return Err(Spin2Error::ZeroMass);
    }
    Ok(Complex::new(m.clone(), T::zero()))
}

/// First-order rows of the standard construction and their divergence and
/// dual-divergence constraints, over G, F, T, R with all indices lower.
pub fn standard_spin2_system<T: Scalar>(m: &T, p: &Momentum<T>) -> Result<Spin2System<T>, Spin2Error> {
    let mc = check_mass(m)?;
    let c = Comps::new(Spin2Layout::standard(), p);
    let two_m = re::<T>(2) / mc.clone();
    let half_m = ratio::<T>(1, 2) / mc.clone();
    let inv_m = one::<T>() / mc;
    let mut dynamical = c.system();
    for k in 0..4 {
        for n in 0..4 {
            let div = sum_over::<T, 1>(|[u]| c.x(Block::T, "ddd", &[k, u, n]).scaled(&c.du[u]));
            dynamical.push_form(&(div.scaled(&two_m) + c.x(Block::G, "dd", &[k, n])), "g-from-t-divergence");
        }
    }
    for &(k, t) in &PAIRS {
        for n in 0..4 {
            let div = sum_over::<T, 1>(|[u]| c.x(Block::R, "dddd", &[k, t, u, n]).scaled(&c.du[u]));
            dynamical.push_form(&(div.scaled(&two_m) + c.x(Block::F, "ddd", &[k, t, n])), "f-from-r-divergence");
        }
    }
    for k in 0..4 {
        for &(u, n) in &PAIRS {
            let curl = c.x(Block::G, "dd", &[k, n]).scaled(&c.dl[u]) - c.x(Block::G, "dd", &[k, u]).scaled(&c.dl[n]);
            dynamical.push_form(&(c.x(Block::T, "ddd", &[k, u, n]) - curl.scaled(&half_m)), "t-from-g-curl");
        }
    }
    for &(k, t) in &PAIRS {
        for &(u, n) in &PAIRS {
            let curl = c.x(Block::F, "ddd", &[k, t, n]).scaled(&c.dl[u]) - c.x(Block::F, "ddd", &[k, t, u]).scaled(&c.dl[n]);
            dynamical.push_form(&(c.x(Block::R, "dddd", &[k, t, u, n]) - curl.scaled(&half_m)), "r-from-f-curl");
        }
    }
    let mut constraints = c.system();
    for k in 0..4 {
        let row = sum_over::<T, 1>(|[u]| c.x(Block::G, "dd", &[k, u]).scaled(&c.du[u]));
        constraints.push_form(&row.scaled(&inv_m), "g-divergence");
    }
    for &(k, t) in &PAIRS {
        let row = sum_over::<T, 1>(|[u]| c.x(Block::F, "ddd", &[k, t, u]).scaled(&c.du[u]));
        constraints.push_form(&row.scaled(&inv_m), "f-divergence");
    }
    for k in 0..4 {
        for mu in 0..4 {
            let row = sum_over::<T, 3>(|[a, b, n]| {
                let s = levi_civita(a, b, n, mu);
                if s == 0 {
                    return LinForm::zero();
                }
                c.x(Block::T, "ddd", &[k, b, n]).scaled(&(c.dl[a].clone() * re::<T>(s)))
            });
            constraints.push_form(&row.scaled(&inv_m), "t-dual-divergence");
        }
    }
    for &(k, t) in &PAIRS {
        for mu in 0..4 {
            let row = sum_over::<T, 3>(|[a, b, n]| {
                let s = levi_civita(a, b, n, mu);
                if s == 0 {
                    return LinForm::zero();
                }
                c.x(Block::R, "dddd", &[k, t, b, n]).scaled(&(c.dl[a].clone() * re::<T>(s)))
            });
            constraints.push_form(&row.scaled(&inv_m), "r-dual-divergence");
        }
    }
    Ok(Spin2System::new(dynamical, constraints))
}

/// Names of the algebraic constraint families, in emission order.
pub const CONSTRAINT_FAMILIES: [&str; 11] = [
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
];

/// Algebraic trace, symmetry, dual and exchange conditions on G, F, T, R.
/// Momentum independent; the argument keeps the signature uniform.
pub fn standard_spin2_constraints<T: Scalar>(_p: &Momentum<T>) -> LinearSystem<T> {
    let layout = Spin2Layout::standard();
    let comp = |b: Block, ix: &[usize]| layout.comp::<T>(b, ix);
    let mut s = LinearSystem::new(layout.labels()).expect("unique labels");
    let gtrace = || sum_over::<T, 1>(|[u]| comp(Block::G, &[u, u]).scaled(&re(g(u))));
    s.push_form(&gtrace(), "g-trace");
    for &(k, u) in &PAIRS {
        s.push_form(&(comp(Block::G, &[k, u]) - comp(Block::G, &[u, k])), "g-antisymmetric");
    }
    for k in 0..4 {
        for u in 0..4 {
            let mut row = comp(Block::G, &[k, u]).scaled(&re(g(k) * g(u)));
            if k == u {
                row = row - gtrace().scaled(&ratio(g(k), 2));
            }
            s.push_form(&row, "g-metric-trace");
        }
    }
    for k in 0..4 {
        s.push_form(&sum_over::<T, 1>(|[u]| comp(Block::F, &[k, u, u]).scaled(&re(g(u)))), "f-trace");
    }
    for k in 0..4 {
        s.push_form(&sum_over::<T, 1>(|[u]| comp(Block::F, &[u, k, u]).scaled(&re(g(u)))), "f-trace");
    }
    let eps3 = |b: Block, n: usize| {
        sum_over::<T, 3>(|[k, t, u]| {
            let e = levi_civita(k, t, u, n);
            if e == 0 {
                LinForm::zero()
            } else {
                comp(b, &[k, t, u]).scaled(&re(e))
            }
        })
    };
    for n in 0..4 {
        s.push_form(&eps3(Block::F, n), "f-dual");
    }
    for k in 0..4 {
        s.push_form(&sum_over::<T, 1>(|[u]| comp(Block::T, &[u, u, k]).scaled(&re(g(u)))), "t-trace");
    }
    for k in 0..4 {
        s.push_form(&sum_over::<T, 1>(|[u]| comp(Block::T, &[u, k, u]).scaled(&re(g(u)))), "t-trace");
    }
    for n in 0..4 {
        s.push_form(&eps3(Block::T, n), "t-dual");
    }
    for &(k, t) in &PAIRS {
        for u in 0..4 {
            s.push_form(&(comp(Block::F, &[k, t, u]) - comp(Block::T, &[u, k, t])), "f-t-exchange");
        }
    }
    for l in 0..4 {
        s.push_form(&(eps3(Block::F, l) + eps3(Block::T, l)), "f-t-dual");
    }
    let r = |ix: [usize; 4]| comp(Block::R, &ix);
    for pattern in 0..4 {
        for k in 0..4 {
            for u in 0..4 {
                let row = sum_over::<T, 1>(|[n]| {
                    let ix = match pattern {
                        0 => [k, n, u, n],
                        1 => [n, k, u, n],
                        2 => [k, n, n, u],
                        _ => [n, k, n, u],
                    };
                    r(ix).scaled(&re(g(n)))
                });
                s.push_form(&row, "r-trace");
            }
        }
    }
    s.push_form(&sum_over::<T, 2>(|[u, n]| r([u, n, u, n]).scaled(&re(g(u) * g(n)))), "r-trace");
    for k in 0..4 {
        for t in 0..4 {
            let row = sum_over::<T, 4>(|[u, n, a, b]| {
                let e = levi_civita(u, n, a, b);
                if e == 0 {
                    return LinForm::zero();
                }
                let mut f = LinForm::zero();
                if b == k {
                    f = f + r([u, t, n, a]).scaled(&re(e * g(b)));
                }
                if b == t {
                    f = f - r([n, a, u, k]).scaled(&re(e * g(b)));
                }
                f
            });
            s.push_form(&row, "r-dual");
        }
    }
    let full = sum_over::<T, 4>(|[k, t, u, n]| {
        let e = levi_civita(k, t, u, n);
        if e == 0 {
            LinForm::zero()
        } else {
            r([k, t, u, n]).scaled(&re(e))
        }
    });
    s.push_form(&full, "r-dual");
    s
}

fn pack_matrix<T: Scalar>(layout: &Spin2Layout, coeffs: &ModifiedCoeffs<T>, basis: &GammaBasis<T>, r: &RMatrix<T>) -> CMatrix<T> {
    spin2_pack_matrix(layout, &coeffs.alpha, &coeffs.beta, basis, r)
}

/// Contractions of the rank-4 function with R⁻¹, R⁻¹γ5 and R⁻¹γ5γ^λ over
/// its two middle spinor indices, as rows over the given layout.
pub fn contraction_rows<T: Scalar>(
    layout: &Spin2Layout,
    coeffs: &ModifiedCoeffs<T>,
    basis: &GammaBasis<T>,
    r: &RMatrix<T>,
) -> LinearSystem<T> {
    let pm = pack_matrix(layout, coeffs, basis, r);
    let ri = &r.r_inverse;
    let mut mats = vec![ri.clone(), ri * &basis.gamma5];
    for l in 0..4 {
        mats.push(&(ri * &basis.gamma5) * &basis.gamma[l]);
    }
    let mut s = LinearSystem::new(layout.labels()).expect("labels");
    for cm in &mats {
        for a in 0..4 {
            for d in 0..4 {
                let mut row = vec![zero::<T>(); layout.len()];
                for b in 0..4 {
                    for c in 0..4 {
                        let w = cm[(b, c)].clone();
                        if is_zero(&w) {
                            continue;
                        }
                        let e = 64 * a + 16 * b + 4 * c + d;
                        for (x, v) in row.iter_mut().zip(pm.row(e)) {
                            if !is_zero(v) {
                                *x += w.clone() * v.clone();
                            }
                        }
                    }
                }
                if !row.iter().all(is_zero) {
                    s.push_row(row, "contraction").expect("length");
                }
            }
        }
    }
    s
}

/// (p̸ − m) applied to each listed spinor index of the rank-4 function.
pub fn multispinor_spin2_rows<T: Scalar>(
    layout: &Spin2Layout,
    coeffs: &ModifiedCoeffs<T>,
    m: &T,
    p: &Momentum<T>,
    which: &[usize],
    basis: &GammaBasis<T>,
    r: &RMatrix<T>,
) -> LinearSystem<T> {
    let pm = pack_matrix(layout, coeffs, basis, r);
    let mass = Complex::new(m.clone(), T::zero());
    let d = &basis.slash(&p.p) - &basis.identity.scale(&mass);
    let stride = [64, 16, 4, 1];
    let mut s = LinearSystem::new(layout.labels()).expect("labels");
    for &w in which {
        let tag = format!("multispinor-index-{}", w + 1);
        for e in 0..256 {
            let i_w = (e / stride[w]) % 4;
            let base = e - i_w * stride[w];
            let mut row = vec![zero::<T>(); layout.len()];
            for j in 0..4 {
                let f = d[(i_w, j)].clone();
                if is_zero(&f) {
                    continue;
                }
                for (x, v) in row.iter_mut().zip(pm.row(base + j * stride[w])) {
                    if !is_zero(v) {
                        *x += f.clone() * v.clone();
                    }
                }
            }
            if !row.iter().all(is_zero) {
                s.push_row(row, &tag).expect("length");
            }
        }
    }
    s
}

/// One ablation entry: constraint rows removed and the resulting nullity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ablation {
    pub family: String,
    pub removed_rows: Vec<usize>,
    pub nullspace_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrivialityReport {
    pub nullspace_dim: usize,
    /// Nullity of the first-order system without the algebraic constraints.
    pub dynamics_nullspace_dim: usize,
    /// Indices into the constraint rows that, added to the dynamics, already
    /// force the full rank (greedy, then pruned).
    pub witness: Vec<usize>,
    pub witness_families: Vec<String>,
    pub ablations: Vec<Ablation>,
}

/// Nullity of the standard first-order system together with the algebraic
/// constraints, with a greedy certificate and per-family ablations.
pub fn verify_triviality<T: Scalar>(m: &T, p: &Momentum<T>) -> Result<TrivialityReport, Spin2Error> {
    let sys = standard_spin2_system(m, p)?;
    let cons = standard_spin2_constraints(p);
    let full = sys.combined.stacked(&cons)?;
    let n = full.n_unknowns();
    let nullspace_dim = full.nullity();
    let target = n - nullspace_dim;
    let base = sys.combined;
    let mut witness = Vec::new();
    let mut current = base.clone();
    let mut rank = current.rank();
    for (k, row) in cons.rows().iter().enumerate() {
        if rank == target {
            break;
        }
        let mut trial = current.clone();
        trial.push_row(row.coeffs.clone(), &row.provenance)?;
        let r = trial.rank();
        if r > rank {
            rank = r;
            current = trial;
            witness.push(k);
        }
    }
    let with_rows = |keep: &[usize]| {
        let mut s = base.clone();
        for &k in keep {
            let row = &cons.rows()[k];
            s.push_row(row.coeffs.clone(), &row.provenance).expect("length");
        }
        s
    };
    let mut i = 0;
    while i < witness.len() {
        let mut fewer = witness.clone();
        fewer.remove(i);
        if with_rows(&fewer).rank() == target {
            witness = fewer;
        } else {
            i += 1;
        }
    }
    let witness_families = witness.iter().map(|&k| cons.rows()[k].provenance.clone()).collect();
    let mut ablations = Vec::new();
    for fam in CONSTRAINT_FAMILIES {
        let removed: Vec<usize> = cons.rows().iter().enumerate().filter(|(_, r)| r.provenance == fam).map(|(k, _)| k).collect();
        let kept: Vec<usize> = (0..cons.n_rows()).filter(|k| !removed.contains(k)).collect();
        ablations.push(Ablation { family: fam.to_string(), removed_rows: removed, nullspace_dim: with_rows(&kept).nullity() });
    }
    Ok(TrivialityReport {
        nullspace_dim,
        dynamics_nullspace_dim: base.nullity(),
        witness,
        witness_families,
        ablations,
    })
}

/// Dynamical rows of the modified system over all nine blocks.
fn modified_dynamics<T: Scalar>(k: &ModifiedCoeffs<T>, mc: &C<T>, c: &Comps<T>) -> LinearSystem<T> {
    let i = i_unit::<T>();
    let two = re::<T>(2);
    let half = ratio::<T>(1, 2);
    let inv_m = one::<T>() / mc.clone();
    let mut s = c.system();
    for kk in 0..4 {
        for mu in 0..4 {
            let t = sum_over::<T, 1>(|[n]| c.x(Block::T, "duu", &[kk, mu, n]).scaled(&c.dl[n]));
            let tt = sum_over::<T, 3>(|[n, al, be]| {
                let ee = e("uuuu", [mu, n, al, be]);
                if ee == 0 {
                    return LinForm::zero();
                }
                c.x(Block::TTilde, "ddd", &[kk, al, be]).scaled(&(c.dl[n].clone() * re::<T>(ee)))
            });
            let row = t.scaled(&(two.clone() * k.ab(2, 4) * inv_m.clone())) + tt.scaled(&(i.clone() * k.ab(3, 7) * inv_m.clone()))
                - c.x(Block::G, "du", &[kk, mu]).scaled(&k.ab(1, 1));
            s.push_form(&row, "modified-g-divergence");
        }
    }
    for &(kk, t) in &PAIRS {
        for mu in 0..4 {
            let rr = sum_over::<T, 1>(|[n]| c.x(Block::R, "dduu", &[kk, t, mu, n]).scaled(&c.dl[n]));
            let rt = sum_over::<T, 3>(|[al, be, n]| {
                let ee = e("dddd", [al, be, kk, t]);
                if ee == 0 {
                    return LinForm::zero();
                }
                c.x(Block::RTilde, "uuuu", &[al, be, mu, n]).scaled(&(c.dl[n].clone() * re::<T>(ee)))
            });
            let dt = sum_over::<T, 3>(|[n, al, be]| {
                let ee = e("uuuu", [mu, n, al, be]);
                if ee == 0 {
                    return LinForm::zero();
                }
                c.x(Block::DTilde, "dddd", &[kk, t, al, be]).scaled(&(c.dl[n].clone() * re::<T>(ee)))
            });
            let dd = sum_over::<T, 5>(|[n, al, be, l, de]| {
                let ee = e("uuuu", [mu, n, al, be]) * e("dddd", [l, de, kk, t]);
                if ee == 0 {
                    return LinForm::zero();
                }
                c.x(Block::D, "uudd", &[l, de, al, be]).scaled(&(c.dl[n].clone() * re::<T>(ee)))
            });
            let ft = sum_over::<T, 2>(|[al, be]| {
                let ee = e("dddd", [al, be, kk, t]);
                if ee == 0 {
                    return LinForm::zero();
                }
                c.x(Block::FTilde, "uuu", &[al, be, mu]).scaled(&re(ee))
            });
            let row = rr.scaled(&(two.clone() * k.ab(2, 5) * inv_m.clone()))
                + rt.scaled(&(i.clone() * k.ab(2, 6) * inv_m.clone()))
                + dt.scaled(&(i.clone() * k.ab(3, 8) * inv_m.clone()))
                - dd.scaled(&(k.ab(3, 9) * half.clone() * inv_m.clone()))
                - c.x(Block::F, "ddu", &[kk, t, mu]).scaled(&k.ab(1, 2))
                - ft.scaled(&(i.clone() * k.ab(1, 3) * half.clone()));
            s.push_form(&row, "modified-f-divergence");
        }
    }
    for kk in 0..4 {
        for &(mu, nu) in &PAIRS {
            let tt = sum_over::<T, 2>(|[al, be]| {
                let ee = e("uuuu", [al, be, mu, nu]);
                if ee == 0 {
                    return LinForm::zero();
                }
                c.x(Block::TTilde, "ddd", &[kk, al, be]).scaled(&re(ee))
            });
            let curl = c.x(Block::G, "du", &[kk, nu]).scaled(&c.du[mu]) - c.x(Block::G, "du", &[kk, mu]).scaled(&c.du[nu]);
            let row = c.x(Block::T, "duu", &[kk, mu, nu]).scaled(&(two.clone() * k.ab(2, 4)))
                + tt.scaled(&(i.clone() * k.ab(3, 7)))
                - curl.scaled(&(k.ab(1, 1) * inv_m.clone()));
            s.push_form(&row, "modified-t-curl");
        }
    }
    for &(kk, t) in &PAIRS {
        for &(mu, nu) in &PAIRS {
            let dt = sum_over::<T, 2>(|[al, be]| {
                let ee = e("uuuu", [al, be, mu, nu]);
                if ee == 0 {
                    return LinForm::zero();
                }
                c.x(Block::DTilde, "dddd", &[kk, t, al, be]).scaled(&re(ee))
            });
            let rt = sum_over::<T, 2>(|[al, be]| {
                let ee = e("dddd", [al, be, kk, t]);
                if ee == 0 {
                    return LinForm::zero();
                }
                c.x(Block::RTilde, "uuuu", &[al, be, mu, nu]).scaled(&re(ee))
            });
            let dd = sum_over::<T, 4>(|[al, be, l, de]| {
                let ee = e("uuuu", [al, be, mu, nu]) * e("dddd", [l, de, kk, t]);
                if ee == 0 {
                    return LinForm::zero();
                }
                c.x(Block::D, "uudd", &[l, de, al, be]).scaled(&re(ee))
            });
            let fcurl = c.x(Block::F, "ddu", &[kk, t, nu]).scaled(&c.du[mu]) - c.x(Block::F, "ddu", &[kk, t, mu]).scaled(&c.du[nu]);
            let ftcurl = sum_over::<T, 2>(|[al, be]| {
                let ee = e("dddd", [al, be, kk, t]);
                if ee == 0 {
                    return LinForm::zero();
                }
                (c.x(Block::FTilde, "uuu", &[al, be, nu]).scaled(&c.du[mu]) - c.x(Block::FTilde, "uuu", &[al, be, mu]).scaled(&c.du[nu]))
                    .scaled(&re(ee))
            });
            let row = c.x(Block::R, "dduu", &[kk, t, mu, nu]).scaled(&(two.clone() * k.ab(2, 5)))
                + dt.scaled(&(i.clone() * k.ab(3, 8)))
                + rt.scaled(&(i.clone() * k.ab(2, 6)))
                - dd.scaled(&(k.ab(3, 9) * half.clone()))
                - fcurl.scaled(&(k.ab(1, 2) * inv_m.clone()))
                - ftcurl.scaled(&(i.clone() * k.ab(1, 3) * half.clone() * inv_m.clone()));
            s.push_form(&row, "modified-r-curl");
        }
    }
    s
}

/// Essential algebraic constraints of the modified function, numbered in
/// order of appearance.
fn essential_constraints<T: Scalar>(k: &ModifiedCoeffs<T>, c: &Comps<T>) -> LinearSystem<T> {
    let i = i_unit::<T>();
    let two = re::<T>(2);
    let two_i = i.clone() * two.clone();
    let mut s = c.system();
    let tag = |n: usize| format!("essential-{n:02}");
    let x = |b: Block, pos: &str, ix: &[usize]| c.x(b, pos, ix);
    let trace1 = |b: Block, pos: &str, f: &dyn Fn(usize) -> Vec<usize>| sum_over::<T, 1>(|[u]| x(b, pos, &f(u)));
    let eps3 = |b: Block, epos: &str, xpos: &str, free: usize| {
        sum_over::<T, 3>(|[kk, t, u]| {
            let ee = e(epos, [kk, t, u, free]);
            if ee == 0 {
                LinForm::zero()
            } else {
                x(b, xpos, &[kk, t, u]).scaled(&re(ee))
            }
        })
    };

    s.push_form(&trace1(Block::G, "ud", &|u| vec![u, u]).scaled(&k.ab(1, 1)), &tag(1));
    for &(kk, u) in &PAIRS {
        s.push_form(&(x(Block::G, "dd", &[kk, u]) - x(Block::G, "dd", &[u, kk])).scaled(&k.ab(1, 1)), &tag(1));
    }
    for al in 0..4 {
        let row = trace1(Block::F, "ddu", &|u| vec![al, u, u]).scaled(&(two_i.clone() * k.ab(1, 2)))
            + eps3(Block::FTilde, "uuud", "ddd", al).scaled(&k.ab(1, 3));
        s.push_form(&row, &tag(2));
    }
    for al in 0..4 {
        let row = trace1(Block::FTilde, "ddu", &|u| vec![al, u, u]).scaled(&(two_i.clone() * k.ab(1, 3)))
            + eps3(Block::F, "uuud", "ddd", al).scaled(&k.ab(1, 2));
        s.push_form(&row, &tag(3));
    }
    for al in 0..4 {
        let row = trace1(Block::T, "udd", &|u| vec![u, u, al]).scaled(&(two_i.clone() * k.ab(2, 4)))
            - eps3(Block::TTilde, "uuud", "ddd", al).scaled(&k.ab(3, 7));
        s.push_form(&row, &tag(4));
    }
    for al in 0..4 {
        let row = trace1(Block::TTilde, "udd", &|u| vec![u, u, al]).scaled(&(two_i.clone() * k.ab(3, 7)))
            - eps3(Block::T, "uuud", "ddd", al).scaled(&k.ab(2, 4));
        s.push_form(&row, &tag(5));
    }
    let eps4 = |b1: Block, c1: C<T>, b2: Block, c2: C<T>| {
        sum_over::<T, 4>(|[u, n, kk, t]| {
            let ee = e("uuuu", [u, n, kk, t]);
            if ee == 0 {
                return LinForm::zero();
            }
            (x(b1, "dddd", &[kk, t, u, n]).scaled(&c1) + x(b2, "dddd", &[kk, t, u, n]).scaled(&c2)).scaled(&re(ee))
        })
    };
    let dtrace = |b: Block| sum_over::<T, 2>(|[u, n]| x(b, "uudd", &[u, n, u, n]));
    let row = eps4(Block::RTilde, k.ab(2, 6), Block::DTilde, k.ab(3, 8)).scaled(&i)
        + dtrace(Block::R).scaled(&(two.clone() * k.ab(2, 5)))
        + dtrace(Block::D).scaled(&(two.clone() * k.ab(3, 9)));
    s.push_form(&row, &tag(6));
    let row = eps4(Block::R, k.ab(2, 5), Block::D, k.ab(3, 9)).scaled(&i)
        + dtrace(Block::RTilde).scaled(&(two.clone() * k.ab(2, 6)))
        + dtrace(Block::DTilde).scaled(&(two.clone() * k.ab(3, 8)));
    s.push_form(&row, &tag(7));
    for be in 0..4 {
        for al in 0..4 {
            let tr = |b: Block| trace1(b, "dduu", &|u| vec![be, u, u, al]);
            let ep = |b: Block| {
                sum_over::<T, 3>(|[n, l, u]| {
                    let ee = e("uudd", [n, al, l, be]);
                    if ee == 0 {
                        LinForm::zero()
                    } else {
                        x(b, "uudd", &[l, u, u, n]).scaled(&re(ee))
                    }
                })
            };
            let row = tr(Block::R).scaled(&(two_i.clone() * k.ab(2, 5)))
                + tr(Block::D).scaled(&(two_i.clone() * k.ab(3, 9)))
                + ep(Block::RTilde).scaled(&k.ab(2, 6))
                + ep(Block::DTilde).scaled(&k.ab(3, 8));
            s.push_form(&row, &tag(8));
        }
    }
    for l in 0..4 {
        let row = trace1(Block::F, "uud", &|u| vec![l, u, u]).scaled(&(two_i.clone() * k.ab(1, 2)))
            - trace1(Block::T, "duu", &|u| vec![u, u, l]).scaled(&(two_i.clone() * k.ab(2, 4)))
            + eps3(Block::FTilde, "uuuu", "ddd", l).scaled(&k.ab(1, 3))
            + eps3(Block::TTilde, "uuuu", "ddd", l).scaled(&k.ab(3, 7));
        s.push_form(&row, &tag(9));
    }
    for l in 0..4 {
        let row = trace1(Block::FTilde, "uud", &|u| vec![l, u, u]).scaled(&(two_i.clone() * k.ab(1, 3)))
            - trace1(Block::TTilde, "duu", &|u| vec![u, u, l]).scaled(&(two_i.clone() * k.ab(3, 7)))
            + eps3(Block::F, "uuuu", "ddd", l).scaled(&k.ab(1, 2))
            + eps3(Block::T, "uuuu", "ddd", l).scaled(&k.ab(2, 4));
        s.push_form(&row, &tag(10));
    }
    for l in 0..4 {
        for al in 0..4 {
            let dl = re::<T>(delta(l, al));
            let blk = |b: Block| {
                trace1(b, "uudd", &|u| vec![l, u, u, al]).scaled(&two)
                    + trace1(b, "dduu", &|u| vec![al, u, u, l]).scaled(&two)
                    + sum_over::<T, 2>(|[u, n]| x(b, "uudd", &[u, n, u, n])).scaled(&dl)
            };
            let epsblk = |b: Block| {
                sum_over::<T, 3>(|[kk, u, n]| {
                    let ee = e("dduu", [kk, al, u, n]);
                    if ee == 0 {
                        LinForm::zero()
                    } else {
                        x(b, "uudd", &[kk, l, u, n]).scaled(&re(ee))
                    }
                }) - sum_over::<T, 3>(|[kk, t, u]| {
                    let ee = e("uuuu", [kk, t, u, l]);
                    if ee == 0 {
                        LinForm::zero()
                    } else {
                        x(b, "dddd", &[kk, t, u, al]).scaled(&re(ee))
                    }
                })
            };
            let gpart = x(Block::G, "ud", &[l, al]).scaled(&two) - trace1(Block::G, "ud", &|u| vec![u, u]).scaled(&dl);
            let row = gpart.scaled(&k.ab(1, 1)) - blk(Block::R).scaled(&(two.clone() * k.ab(2, 5)))
                + blk(Block::D).scaled(&(two.clone() * k.ab(3, 9)))
                + epsblk(Block::DTilde).scaled(&(two_i.clone() * k.ab(3, 8)))
                - epsblk(Block::RTilde).scaled(&(two_i.clone() * k.ab(2, 6)));
            s.push_form(&row, &tag(11));
            let row = blk(Block::DTilde).scaled(&(two.clone() * k.ab(3, 8))) - blk(Block::RTilde).scaled(&(two.clone() * k.ab(2, 6)))
                + epsblk(Block::D).scaled(&(two_i.clone() * k.ab(3, 9)))
                - epsblk(Block::R).scaled(&(two_i.clone() * k.ab(2, 5)));
            s.push_form(&row, &tag(12));
        }
    }
    let half_i = i.clone() * ratio::<T>(1, 2);
    for al in 0..4 {
        for be in 0..4 {
            for l in 0..4 {
                let gl = |other: usize| re::<T>(g(l) * delta(l, other));
                let fpart = x(Block::F, "uuu", &[al, be, l]) - x(Block::F, "uuu", &[be, l, al]).scaled(&two)
                    + trace1(Block::F, "uud", &|u| vec![be, u, u]).scaled(&gl(al))
                    - trace1(Block::F, "uud", &|u| vec![al, u, u]).scaled(&gl(be));
                let tpart = x(Block::T, "uuu", &[l, al, be]) - x(Block::T, "uuu", &[be, l, al]).scaled(&two)
                    + trace1(Block::T, "duu", &|u| vec![u, u, al]).scaled(&gl(be))
                    - trace1(Block::T, "duu", &|u| vec![u, u, be]).scaled(&gl(al));
                let eab = |a: usize, b: usize| e("uuuu", [a, b, al, be]);
                let ftpart = sum_over::<T, 2>(|[kk, t]| x(Block::FTilde, "ddu", &[kk, t, l]).scaled(&re(eab(kk, t))))
                    + sum_over::<T, 2>(|[kk, u]| x(Block::FTilde, "ddu", &[kk, u, u]).scaled(&re(2 * eab(l, kk))))
                    + sum_over::<T, 2>(|[u, kk]| x(Block::FTilde, "udd", &[l, kk, u]).scaled(&re(2 * eab(u, kk))));
                let ttpart = sum_over::<T, 2>(|[u, n]| x(Block::TTilde, "udd", &[l, u, n]).scaled(&re(eab(u, n))))
                    + sum_over::<T, 2>(|[n, u]| x(Block::TTilde, "udd", &[u, u, n]).scaled(&re(2 * eab(n, l))))
                    + sum_over::<T, 2>(|[u, kk]| x(Block::TTilde, "ddu", &[kk, u, l]).scaled(&re(2 * eab(u, kk))));
                let row = fpart.scaled(&k.ab(1, 2)) - tpart.scaled(&k.ab(2, 4)) + ftpart.scaled(&(half_i.clone() * k.ab(1, 3)))
                    - ttpart.scaled(&(half_i.clone() * k.ab(3, 7)));
                s.push_form(&row, &tag(13));
            }
        }
    }
    s
}

/// Dynamical rows and essential constraints of the modified function over
/// all nine blocks.
pub fn modified_spin2_system<T: Scalar>(coeffs: &ModifiedCoeffs<T>, m: &T, p: &Momentum<T>) -> Result<Spin2System<T>, Spin2Error> {
    let mc = check_mass(m)?;
    let c = Comps::new(Spin2Layout::full(), p);
    Ok(Spin2System::new(modified_dynamics(coeffs, &mc, &c), essential_constraints(coeffs, &c)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveryReport {
    pub dynamical_equivalent: bool,
    pub combined_equivalent: bool,
    pub constraints_contained: bool,
    /// Ranks of the restricted modified and the standard dynamical systems.
    pub dynamical_ranks: (usize, usize),
    /// Ranks of the restricted essential and the standard algebraic constraints.
    pub constraint_ranks: (usize, usize),
    pub recovered: bool,
}

/// Compares the modified system, with the tilde blocks eliminated, against
/// the standard one.
pub fn recovery_report<T: Scalar>(coeffs: &ModifiedCoeffs<T>, m: &T, p: &Momentum<T>) -> Result<RecoveryReport, Spin2Error> {
    let keep = Spin2Layout::standard().labels();
    let modified = modified_spin2_system(coeffs, m, p)?;
    let standard = standard_spin2_system(m, p)?;
    let algebraic = standard_spin2_constraints(p);
    let dyn_r = modified.dynamical.eliminate_to(&keep)?;
    let cons_r = modified.constraints.eliminate_to(&keep)?;
    let comb_r = modified.combined.eliminate_to(&keep)?;
    let std_all = standard.combined.stacked(&algebraic)?;
    let dynamical_equivalent = equivalent(&dyn_r, &standard.combined)?;
    let combined_equivalent = equivalent(&comb_r, &std_all)?;
    let constraints_contained = contains(&cons_r, &algebraic)?;
    Ok(RecoveryReport {
        dynamical_equivalent,
        combined_equivalent,
        constraints_contained,
        dynamical_ranks: (dyn_r.rank(), standard.combined.rank()),
        constraint_ranks: (cons_r.rank(), algebraic.rank()),
        recovered: dynamical_equivalent && combined_equivalent && constraints_contained,
    })
}

/// Recovery of the standard system at the specialization point.
pub fn recovery_check<T: Scalar>(m: &T, p: &Momentum<T>) -> Result<bool, Spin2Error> {
    Ok(recovery_report(&ModifiedCoeffs::specialization_point(), m, p)?.recovered)
}

/// Recovery after shifting each coefficient in turn by `delta`.
pub fn perturbation_sweep<T: Scalar>(m: &T, p: &Momentum<T>, delta: &C<T>) -> Result<Vec<(String, bool)>, Spin2Error> {
    let point = ModifiedCoeffs::<T>::specialization_point();
    let mut out = Vec::new();
    for (k, name) in COEFF_NAMES.iter().enumerate() {
        let r = recovery_report(&point.perturbed(k, delta), m, p)?;
        out.push((name.to_string(), r.recovered));
    }
    Ok(out)
}

/// Unknown labels of the G-equation system: G plus the auxiliary vector.
pub fn g_equation_labels() -> Vec<String> {
    let mut v = Spin2Layout::new(&[Block::G]).labels();
    v.extend((0..4).map(|n| format!("V[{n}]")));
    v
}

fn g_second_order_rows<T: Scalar>(layout: &Spin2Layout, mc: &C<T>, p: &Momentum<T>, labels: Vec<String>) -> LinearSystem<T> {
    let inv_m2 = one::<T>() / (mc.clone() * mc.clone());
    let p2 = p.p2();
    let mut s = LinearSystem::new(labels).expect("labels");
    for kk in 0..4 {
        for mu in 0..4 {
            let gk = |n: usize| layout.at::<T>(Block::G, &[Lo(kk), Up(n)]);
            let long = sum_over::<T, 1>(|[n]| gk(n).scaled(&(p.lower(n) * p.upper(mu))));
            let row = (gk(mu).scaled(&p2) - long).scaled(&inv_m2) - gk(mu);
            s.push_form(&row, "g-second-order");
        }
    }
    s
}

fn require_g<T: Scalar>(coeffs: &ModifiedCoeffs<T>) -> Result<(), Spin2Error> {
    if is_zero(&coeffs.alpha[0]) || is_zero(&coeffs.beta[0]) {
        return Err(Spin2Error::Precondition("the G equation needs a1 != 0 and b1 != 0".into()));
    }
    Ok(())
}

/// (1/m²)[∂_ν∂^μG_κ^ν − ∂²G_κ^μ] = G_κ^μ, the trace condition, and
/// ∂_μG^μ_ν = V_ν defining the auxiliary vector.
pub fn derive_g_equation<T: Scalar>(coeffs: &ModifiedCoeffs<T>, m: &T, p: &Momentum<T>) -> Result<LinearSystem<T>, Spin2Error> {
    require_g(coeffs)?;
    let mc = check_mass(m)?;
    let layout = Spin2Layout::new(&[Block::G]);
    let mut s = g_second_order_rows(&layout, &mc, p, g_equation_labels());
    s.push_form(&sum_over::<T, 1>(|[u]| layout.at::<T>(Block::G, &[Up(u), Lo(u)])), "g-trace");
    let mi = -i_unit::<T>();
    for n in 0..4 {
        let div = sum_over::<T, 1>(|[u]| layout.at::<T>(Block::G, &[Up(u), Lo(n)]).scaled(&(mi.clone() * p.lower(u))));
        s.push_form(&(div - LinForm::unit(16 + n)), "vector-definition");
    }
    Ok(s)
}

/// Whether the second-order G rows follow from the modified dynamical rows
/// once every other block is eliminated.
pub fn g_equation_containment<T: Scalar>(coeffs: &ModifiedCoeffs<T>, m: &T, p: &Momentum<T>) -> Result<bool, Spin2Error> {
    require_g(coeffs)?;
    let mc = check_mass(m)?;
    let layout = Spin2Layout::new(&[Block::G]);
    let rows = g_second_order_rows(&layout, &mc, p, layout.labels());
    let modified = modified_spin2_system(coeffs, m, p)?;
    let reduced = modified.dynamical.eliminate_to(&layout.labels())?;
    Ok(contains(&reduced, &rows)?)
}

/// Largest |p^ν V_ν| over an orthonormal basis of the G-equation nullspace,
/// relative to the largest entry of each vector.
pub fn divergence_pair_defect<T: Scalar>(system: &LinearSystem<T>, p: &Momentum<T>) -> T {
    let mut worst = T::zero();
    for v in system.nullspace() {
        let scale = v.iter().map(mag).fold(T::zero(), |a, b| if b > a { b } else { a });
        if scale.is_zero() {
            continue;
        }
        let dot = (0..4).fold(zero::<T>(), |acc, n| acc + p.upper(n) * v[16 + n].clone());
        let d = mag(&dot) / scale;
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Applies the second-order G operator to a random transverse traceless
/// symmetric G and returns the largest deviation from ((p² − m²)/m²)G.
pub fn transverse_traceless_defect<T: Scalar>(m: &T, p: &Momentum<T>, weights: &[C<T>]) -> Result<T, Spin2Error> {
    let mc = check_mass(m)?;
    let layout = Spin2Layout::new(&[Block::G]);
    let mut cond = LinearSystem::<T>::new(layout.labels())?;
    for n in 0..4 {
        cond.push_form(&sum_over::<T, 1>(|[u]| layout.at::<T>(Block::G, &[Up(u), Lo(n)]).scaled(&p.lower(u))), "plumbing");
    }
    cond.push_form(&sum_over::<T, 1>(|[u]| layout.at::<T>(Block::G, &[Up(u), Lo(u)])), "plumbing");
    for &(a, b) in &PAIRS {
        cond.push_form(&(layout.comp::<T>(Block::G, &[a, b]) - layout.comp::<T>(Block::G, &[b, a])), "plumbing");
    }
    let basis = nullspace_of(&cond.matrix());
    let mut gv = vec![zero::<T>(); 16];
    for (v, w) in basis.iter().zip(weights.iter().cycle()) {
        for (x, y) in gv.iter_mut().zip(v) {
            *x += w.clone() * y.clone();
        }
    }
    let rows = g_second_order_rows(&layout, &mc, p, layout.labels());
    let factor = (p.p2() - mc.clone() * mc.clone()) / (mc.clone() * mc);
    let mut worst = T::zero();
    for (r, row) in rows.rows().iter().enumerate() {
        let (kk, mu) = (r / 4, r % 4);
        let lhs = row.coeffs.iter().zip(&gv).fold(zero::<T>(), |acc, (a, b)| acc + a.clone() * b.clone());
        let rhs = factor.clone() * gv[4 * kk + mu].clone() * re::<T>(g(mu));
        let d = mag(&(lhs - rhs));
        if d > worst {
            worst = d;
        }
    }
    Ok(worst)
}
