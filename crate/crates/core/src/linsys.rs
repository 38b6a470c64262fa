//! Finite complex linear systems over labeled unknowns: rank, nullspace,
//! rowspace equivalence and containment, and the bracket-polynomial spectrum.

use std::collections::{HashMap, HashSet};

use num_complex::Complex;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::CMatrix;
use crate::scalar::{csqrt, from_c64, is_zero, mag, ratio, re, to_c64, zero, Scalar, C};
use crate::tensor::LinForm;

#[derive(Debug, Error, PartialEq)]
pub enum LinsysError {
    #[error("duplicate unknown label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label sets differ")]
    LabelMismatch,
    #[error("row has {got} coefficients, expected {expected}")]
    RowLength { got: usize, expected: usize },
    #[error("malformed system JSON: {0}")]
    Json(String),
    #[error("the bracket polynomial is identically zero; every x solves it")]
    IdenticallyDegenerate,
    #[error("roots are not representable in the exact field")]
    NotRepresentable,
}

/// Result of Gauss-Jordan elimination with complete pivoting.
struct Echelon<T: Scalar> {
    reduced: CMatrix<T>,
    col_perm: Vec<usize>,
    rank: usize,
}

fn normalize_rows<T: Scalar>(m: &mut CMatrix<T>) {
    if T::is_exact() {
        return;
    }
    for r in 0..m.rows() {
        let row = m.row_mut(r);
        let s = row.iter().map(mag).fold(T::zero(), |a, b| if b > a { b } else { a });
        if s.is_zero() {
            continue;
        }
        let inv = Complex::new(T::one() / s, T::zero());
        for x in row.iter_mut() {
            *x = x.clone() * inv.clone();
        }
    }
}

fn echelon<T: Scalar>(m: &CMatrix<T>, reduce_above: bool) -> Echelon<T> {
    let mut a = m.clone();
    normalize_rows(&mut a);
    let (rows, cols) = (a.rows(), a.cols());
    let tol = T::rank_tolerance() * a.max_mag();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let mut best = (k, k, T::zero());
        for r in k..rows {
            for c in k..cols {
                let v = mag(&a[(r, c)]);
                if v > best.2 {
                    best = (r, c, v);
                }
            }
        }
        if best.2.is_zero() || best.2 <= tol {
            break;
        }
        a.swap_rows(k, best.0);
        a.swap_cols(k, best.1);
        col_perm.swap(k, best.1);
        let inv = C::<T>::one() / a[(k, k)].clone();
        for x in a.row_mut(k).iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row: Vec<C<T>> = a.row(k).to_vec();
        let start = if reduce_above { 0 } else { k + 1 };
        for r in start..rows {
            if r == k {
                continue;
            }
            let f = a[(r, k)].clone();
            if is_zero(&f) {
                continue;
            }
            let row = a.row_mut(r);
            for c in k..cols {
                let v = f.clone() * pivot_row[c].clone();
                row[c] -= v;
            }
        }
        rank += 1;
    }
    Echelon { reduced: a, col_perm, rank }
}

pub fn rank_of<T: Scalar>(m: &CMatrix<T>) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    echelon(m, false).rank
}

fn inner<T: Scalar>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(zero(), |acc, (x, y)| acc + x.conj() * y.clone())
}

/// Gram-Schmidt; vectors are normalized when the field has square roots.
fn orthogonalize<T: Scalar>(vs: Vec<Vec<C<T>>>) -> Vec<Vec<C<T>>> {
    let mut out: Vec<Vec<C<T>>> = Vec::with_capacity(vs.len());
    for mut v in vs {
        for u in &out {
            let f = inner(u, &v) / inner(u, u);
            for (x, y) in v.iter_mut().zip(u) {
                *x -= f.clone() * y.clone();
            }
        }
        if !T::is_exact() {
            let n2 = inner(&v, &v).re;
            if let Some(n) = n2.try_sqrt() {
                let inv = Complex::new(T::one() / n, T::zero());
                for x in v.iter_mut() {
                    *x = x.clone() * inv.clone();
                }
            }
        }
        out.push(v);
    }
    out
}

/// Basis of {x : m x = 0}; orthonormal for floating fields, orthogonal for exact ones.
pub fn nullspace_of<T: Scalar>(m: &CMatrix<T>) -> Vec<Vec<C<T>>> {
    let cols = m.cols();
    if m.rows() == 0 {
        return orthogonalize((0..cols).map(|k| unit_vec(cols, k)).collect());
    }
    let e = echelon(m, true);
    let mut basis = Vec::with_capacity(cols - e.rank);
    for j in e.rank..cols {
        let mut xp = vec![zero::<T>(); cols];
        xp[j] = C::one();
        for i in 0..e.rank {
            xp[i] = -e.reduced[(i, j)].clone();
        }
        let mut x = vec![zero::<T>(); cols];
        for (slot, &orig) in e.col_perm.iter().enumerate() {
            x[orig] = xp[slot].clone();
        }
        basis.push(x);
    }
    orthogonalize(basis)
}

/// Vectors y with yᵀ m = 0.
pub fn left_nullspace_of<T: Scalar>(m: &CMatrix<T>) -> Vec<Vec<C<T>>> {
    nullspace_of(&m.transpose())
}

fn unit_vec<T: Scalar>(n: usize, k: usize) -> Vec<C<T>> {
    let mut v = vec![zero(); n];
    v[k] = C::one();
    v
}

/// One solution of m x = b, or `None` when the system is inconsistent.
pub fn solve<T: Scalar>(m: &CMatrix<T>, b: &[C<T>]) -> Option<Vec<C<T>>> {
    assert_eq!(m.rows(), b.len());
    let cols = m.cols();
    let aug = CMatrix::from_fn(m.rows(), cols + 1, |r, c| if c < cols { m[(r, c)].clone() } else { b[r].clone() });
    // pivot only inside the coefficient block so the right-hand side stays last
    let mut a = aug;
    let tol = T::rank_tolerance() * m.max_mag();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    let rows = a.rows();
    for k in 0..rows.min(cols) {
        let mut best = (k, k, T::zero());
        for r in k..rows {
            for c in k..cols {
                let v = mag(&a[(r, c)]);
                if v > best.2 {
                    best = (r, c, v);
                }
            }
        }
        if best.2.is_zero() || best.2 <= tol {
            break;
        }
        a.swap_rows(k, best.0);
        a.swap_cols(k, best.1);
        col_perm.swap(k, best.1);
        let inv = C::<T>::one() / a[(k, k)].clone();
        for x in a.row_mut(k).iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row: Vec<C<T>> = a.row(k).to_vec();
        for r in 0..rows {
            if r == k {
                continue;
            }
            let f = a[(r, k)].clone();
            if is_zero(&f) {
                continue;
            }
            let row = a.row_mut(r);
            for c in k..=cols {
                let v = f.clone() * pivot_row[c].clone();
                row[c] -= v;
            }
        }
        rank += 1;
    }
    let scale = b.iter().map(mag).fold(m.max_mag(), |a, x| if x > a { x } else { a });
    let res_tol = T::rank_tolerance() * scale * T::from_ratio(1000, 1);
    for r in rank..rows {
        let v = mag(&a[(r, cols)]);
        if !(v.is_zero() || (!T::is_exact() && v <= res_tol)) {
            return None;
        }
    }
    let mut x = vec![zero::<T>(); cols];
    for i in 0..rank {
        x[col_perm[i]] = a[(i, cols)].clone();
    }
    Some(x)
}

/// Minimum-norm solution of m x = b.
pub fn min_norm_solve<T: Scalar>(m: &CMatrix<T>, b: &[C<T>]) -> Option<Vec<C<T>>> {
    let mut x = solve(m, b)?;
    for n in nullspace_of(m) {
        let f = inner(&n, &x) / inner(&n, &n);
        for (xi, ni) in x.iter_mut().zip(&n) {
            *xi -= f.clone() * ni.clone();
        }
    }
    Some(x)
}

pub fn inverse<T: Scalar>(m: &CMatrix<T>) -> Option<CMatrix<T>> {
    let n = m.rows();
    if n != m.cols() || rank_of(m) < n {
        return None;
    }
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        let col = solve(m, &unit_vec(n, k))?;
        for r in 0..n {
            out[(r, k)] = col[r].clone();
        }
    }
    Some(out)
}

/// Row of a linear system together with the name of the relation it encodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Row<T: Scalar> {
    pub coeffs: Vec<C<T>>,
    pub provenance: String,
}

/// Homogeneous system sum_k M_rk x_k = 0 over labeled unknowns.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem<T: Scalar> {
    unknowns: Vec<String>,
    rows: Vec<Row<T>>,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn new(unknowns: Vec<String>) -> Result<Self, LinsysError> {
        let mut seen = HashSet::new();
        for u in &unknowns {
            if !seen.insert(u.as_str()) {
                return Err(LinsysError::DuplicateLabel(u.clone()));
            }
        }
        Ok(Self { unknowns, rows: Vec::new() })
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn rows(&self) -> &[Row<T>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_unknowns(&self) -> usize {
        self.unknowns.len()
    }

    pub fn push_row(&mut self, coeffs: Vec<C<T>>, provenance: &str) -> Result<(), LinsysError> {
        if coeffs.len() != self.unknowns.len() {
            return Err(LinsysError::RowLength { got: coeffs.len(), expected: self.unknowns.len() });
        }
        self.rows.push(Row { coeffs, provenance: provenance.to_string() });
        Ok(())
    }

    /// Appends a row built from a sparse form; identically zero forms are skipped.
    pub fn push_form(&mut self, form: &LinForm<T>, provenance: &str) {
        if form.is_zero() {
            return;
        }
        let n = self.unknowns.len();
        self.rows.push(Row { coeffs: form.to_dense(n), provenance: provenance.to_string() });
    }

    pub fn extend(&mut self, other: &Self) -> Result<(), LinsysError> {
        let o = other.reordered(&self.unknowns)?;
        self.rows.extend(o.rows);
        Ok(())
    }

    pub fn matrix(&self) -> CMatrix<T> {
        CMatrix::from_rows(self.rows.iter().map(|r| r.coeffs.clone()).collect(), self.unknowns.len())
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.matrix())
    }

    pub fn nullspace(&self) -> Vec<Vec<C<T>>> {
        nullspace_of(&self.matrix())
    }

    pub fn nullity(&self) -> usize {
        self.n_unknowns() - self.rank()
    }

    /// Largest |row · x| over all rows.
    pub fn residual(&self, x: &[C<T>]) -> T {
        self.matrix().mul_vec(x).iter().map(mag).fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Same system with columns permuted to the given label order.
    pub fn reordered(&self, labels: &[String]) -> Result<Self, LinsysError> {
        if labels.len() != self.unknowns.len() {
            return Err(LinsysError::LabelMismatch);
        }
        let pos: HashMap<&str, usize> = self.unknowns.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut map = Vec::with_capacity(labels.len());
        for l in labels {
            map.push(*pos.get(l.as_str()).ok_or(LinsysError::LabelMismatch)?);
        }
        let rows = self
            .rows
            .iter()
            .map(|r| Row { coeffs: map.iter().map(|&k| r.coeffs[k].clone()).collect(), provenance: r.provenance.clone() })
            .collect();
        Ok(Self { unknowns: labels.to_vec(), rows })
    }

    pub fn stacked(&self, other: &Self) -> Result<Self, LinsysError> {
        let mut s = self.clone();
        s.extend(other)?;
        Ok(s)
    }

    pub fn filter_rows(&self, mut keep: impl FnMut(&Row<T>) -> bool) -> Self {
        Self { unknowns: self.unknowns.clone(), rows: self.rows.iter().filter(|r| keep(r)).cloned().collect() }
    }

    /// Consequences of the system involving only the `keep` unknowns:
    /// every other unknown is eliminated through the left nullspace of its columns.
    pub fn eliminate_to(&self, keep: &[String]) -> Result<Self, LinsysError> {
        let pos: HashMap<&str, usize> = self.unknowns.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut kept = Vec::new();
        for l in keep {
            kept.push(*pos.get(l.as_str()).ok_or(LinsysError::LabelMismatch)?);
        }
        let kept_set: HashSet<usize> = kept.iter().copied().collect();
        let dropped: Vec<usize> = (0..self.unknowns.len()).filter(|k| !kept_set.contains(k)).collect();
        let m = self.matrix();
        let ext = CMatrix::from_fn(m.rows(), dropped.len(), |r, c| m[(r, dropped[c])].clone());
        let std = CMatrix::from_fn(m.rows(), kept.len(), |r, c| m[(r, kept[c])].clone());
        let mut out = Self::new(keep.to_vec())?;
        if ext.is_zero() {
            for (r, row) in self.rows.iter().enumerate() {
                out.rows.push(Row { coeffs: std.row(r).to_vec(), provenance: row.provenance.clone() });
            }
            return Ok(out);
        }
        for y in left_nullspace_of(&ext) {
            let mut coeffs = vec![zero::<T>(); kept.len()];
            for (r, yr) in y.iter().enumerate() {
                if is_zero(yr) {
                    continue;
                }
                for (c, v) in coeffs.iter_mut().enumerate() {
                    *v += yr.clone() * std[(r, c)].clone();
                }
            }
            out.rows.push(Row { coeffs, provenance: "elimination".to_string() });
        }
        Ok(out)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let js = SystemJson {
            unknowns: self.unknowns.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| RowJson {
                    coeffs: r.coeffs.iter().map(|z| {
                        let w = to_c64(z);
                        [w.re, w.im]
                    }).collect(),
                    provenance: r.provenance.clone(),
                })
                .collect(),
        };
        serde_json::to_value(js).expect("plain data serializes")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self, LinsysError> {
        let js: SystemJson = serde_json::from_value(v.clone()).map_err(|e| LinsysError::Json(e.to_string()))?;
        let mut s = Self::new(js.unknowns)?;
        for r in js.rows {
            let coeffs = r.coeffs.iter().map(|[a, b]| from_c64(Complex::new(*a, *b))).collect();
            s.push_row(coeffs, &r.provenance)?;
        }
        Ok(s)
    }
}

#[derive(Serialize, Deserialize)]
struct RowJson {
    coeffs: Vec<[f64; 2]>,
    provenance: String,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    unknowns: Vec<String>,
    rows: Vec<RowJson>,
}

/// Ranks (r1, r2, r_stacked) used by the equivalence decision.
pub fn stacked_ranks<T: Scalar>(s1: &LinearSystem<T>, s2: &LinearSystem<T>) -> Result<(usize, usize, usize), LinsysError> {
    let st = s1.stacked(s2)?;
    Ok((s1.rank(), s2.rank(), st.rank()))
}

/// rowspace(s1) = rowspace(s2).
pub fn equivalent<T: Scalar>(s1: &LinearSystem<T>, s2: &LinearSystem<T>) -> Result<bool, LinsysError> {
    let (a, b, s) = stacked_ranks(s1, s2)?;
    Ok(a == b && b == s)
}

/// rowspace(part) ⊆ rowspace(base).
pub fn contains<T: Scalar>(base: &LinearSystem<T>, part: &LinearSystem<T>) -> Result<bool, LinsysError> {
    let st = base.stacked(part)?;
    Ok(st.rank() == base.rank())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult<T: Scalar> {
    /// Roots with multiplicity.
    pub roots: Vec<C<T>>,
    /// Coefficients (x², x¹, x⁰) of the bracket polynomial.
    pub coefficients: [C<T>; 3],
    pub degree: usize,
    pub double_root: bool,
    /// No finite root: the polynomial is a nonzero constant.
    pub no_propagating_branch: bool,
}

impl<T: Scalar> SpectrumResult<T> {
    pub fn evaluate(&self, x: &C<T>) -> C<T> {
        let [c2, c1, c0] = &self.coefficients;
        c2.clone() * x.clone() * x.clone() + c1.clone() * x.clone() + c0.clone()
    }
}

/// Bracket polynomial (c²−a²) − 2(ab−cd) x + (d²−b²) x², x = p².
pub fn bracket_coefficients<T: Scalar>(a: &C<T>, b: &C<T>, c: &C<T>, d: &C<T>) -> [C<T>; 3] {
    let ab_cd = a.clone() * b.clone() - c.clone() * d.clone();
    [
        d.clone() * d.clone() - b.clone() * b.clone(),
        -(re::<T>(2) * ab_cd),
        c.clone() * c.clone() - a.clone() * a.clone(),
    ]
}

pub fn mass_spectrum<T: Scalar>(a: &C<T>, b: &C<T>, c: &C<T>, d: &C<T>) -> Result<SpectrumResult<T>, LinsysError> {
    let coefficients = bracket_coefficients(a, b, c, d);
    let [c2, c1, c0] = coefficients.clone();
    let scale = [&c2, &c1, &c0].iter().map(|z| mag(z)).fold(T::zero(), |a, b| if b > a { b } else { a });
    if scale.is_zero() {
        return Err(LinsysError::IdenticallyDegenerate);
    }
    let tiny = |z: &C<T>| {
        let m = mag(z);
        m.is_zero() || m <= T::rank_tolerance() * scale.clone()
    };
    let mut out = SpectrumResult { roots: vec![], coefficients, degree: 0, double_root: false, no_propagating_branch: false };
    if tiny(&c2) {
        if tiny(&c1) {
            out.no_propagating_branch = true;
            return Ok(out);
        }
        out.degree = 1;
        out.roots.push(-c0 / c1);
        return Ok(out);
    }
    out.degree = 2;
    let disc = c1.clone() * c1.clone() - re::<T>(4) * c2.clone() * c0.clone();
    if tiny(&disc) {
        let r = -c1 / (re::<T>(2) * c2);
        out.double_root = true;
        out.roots = vec![r.clone(), r];
        return Ok(out);
    }
    let s = csqrt(&disc).ok_or(LinsysError::NotRepresentable)?;
    // pick the sign avoiding cancellation, then Vieta for the partner root
    let plus = c1.clone() + s.clone();
    let minus = c1.clone() - s;
    let q = if mag(&plus) >= mag(&minus) { plus } else { minus };
    let q = -q * ratio::<T>(1, 2);
    let r1 = q.clone() / c2;
    let r2 = if is_zero(&q) { r1.clone() } else { c0 / q };
    out.roots = vec![r1, r2];
    Ok(out)
}
