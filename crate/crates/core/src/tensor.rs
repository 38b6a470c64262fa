//! Index bookkeeping: metric, antisymmetric-pair codec, Levi-Civita symbol,
//! and sparse linear forms over labeled unknowns.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::scalar::{is_zero, zero, Scalar, C};

/// Minkowski metric diag(+1, -1, -1, -1).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Metric;

impl Metric {
    pub const SIGNATURE: [i64; 4] = [1, -1, -1, -1];

    pub fn g(&self, mu: usize, nu: usize) -> i64 {
        if mu == nu {
            Self::SIGNATURE[mu]
        } else {
            0
        }
    }

    pub fn sign(mu: usize) -> i64 {
        Self::SIGNATURE[mu]
    }
}

/// Antisymmetric index pairs in lexicographic order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Slot of the unordered pair {i, j} and the sign picked up by ordering it;
/// `None` on the diagonal.
pub fn pair_slot(i: usize, j: usize) -> Option<(usize, i64)> {
    if i == j {
        return None;
    }
    let (lo, hi, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
    let slot = PAIRS.iter().position(|&p| p == (lo, hi)).expect("indices below 4");
    Some((slot, s))
}

pub fn pair_label(slot: usize) -> String {
    let (a, b) = PAIRS[slot];
    format!("{a}{b}")
}

/// eps^{abcd} with eps^{0123} = +1.
pub fn levi_civita(a: usize, b: usize, c: usize, d: usize) -> i64 {
    let p = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return 0;
            }
        }
    }
    let mut s = 1;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// An index value together with its position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ix {
    Lo(usize),
    Up(usize),
}

impl Ix {
    pub fn value(self) -> usize {
        match self {
            Ix::Lo(i) | Ix::Up(i) => i,
        }
    }
}

pub use Ix::{Lo, Up};

/// Factor turning an all-lower component into one with the given positions.
pub fn raise_factor(ix: &[Ix]) -> i64 {
    ix.iter()
        .map(|i| match *i {
            Ix::Up(k) => Metric::sign(k),
            Ix::Lo(_) => 1,
        })
        .product()
}

/// Levi-Civita tensor with arbitrary index positions.
pub fn eps(ix: [Ix; 4]) -> i64 {
    let base = levi_civita(ix[0].value(), ix[1].value(), ix[2].value(), ix[3].value());
    if base == 0 {
        return 0;
    }
    let lower: i64 = ix
        .iter()
        .map(|i| match *i {
            Ix::Lo(k) => Metric::sign(k),
            Ix::Up(_) => 1,
        })
        .product();
    base * lower
}

pub fn delta(a: usize, b: usize) -> i64 {
    i64::from(a == b)
}

/// Sparse linear form sum_k c_k x_k over unknown columns.
#[derive(Clone, Debug, PartialEq)]
pub struct LinForm<T: Scalar> {
    terms: BTreeMap<usize, C<T>>,
}

impl<T: Scalar> Default for LinForm<T> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<T: Scalar> LinForm<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(col: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(col, crate::scalar::one());
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(is_zero)
    }

    pub fn add_scaled(&mut self, other: &Self, c: &C<T>) {
        if is_zero(c) {
            return;
        }
        for (k, v) in &other.terms {
            let e = self.terms.entry(*k).or_insert_with(zero);
            *e += v.clone() * c.clone();
        }
    }

    pub fn scaled(&self, c: &C<T>) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn coeff(&self, col: usize) -> C<T> {
        self.terms.get(&col).cloned().unwrap_or_else(zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &C<T>)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn to_dense(&self, n: usize) -> Vec<C<T>> {
        let mut v = vec![zero(); n];
        for (k, c) in &self.terms {
            v[*k] = c.clone();
        }
        v
    }

    pub fn eval(&self, x: &[C<T>]) -> C<T> {
        self.terms.iter().fold(zero(), |acc, (k, c)| acc + c.clone() * x[*k].clone())
    }
}

/// Sum of `f` over all index tuples in 0..4, skipping zero terms cheaply.
pub fn sum_over<T: Scalar, const K: usize>(mut f: impl FnMut([usize; K]) -> LinForm<T>) -> LinForm<T> {
    let mut acc = LinForm::zero();
    let total = 4usize.pow(K as u32);
    for n in 0..total {
        let mut idx = [0usize; K];
        let mut r = n;
        for slot in idx.iter_mut().rev() {
            *slot = r % 4;
            r /= 4;
        }
        let term = f(idx);
        acc += &term;
    }
    acc
}

impl<T: Scalar> AddAssign<&LinForm<T>> for LinForm<T> {
    fn add_assign(&mut self, rhs: &LinForm<T>) {
        for (k, v) in &rhs.terms {
            let e = self.terms.entry(*k).or_insert_with(zero);
            *e += v.clone();
        }
    }
}

impl<T: Scalar> Add for LinForm<T> {
    type Output = LinForm<T>;
    fn add(mut self, rhs: LinForm<T>) -> LinForm<T> {
        self += &rhs;
        self
    }
}

impl<T: Scalar> Sub for LinForm<T> {
    type Output = LinForm<T>;
    fn sub(mut self, rhs: LinForm<T>) -> LinForm<T> {
        self.add_scaled(&rhs, &-crate::scalar::one::<T>());
        self
    }
}

impl<T: Scalar> Neg for LinForm<T> {
    type Output = LinForm<T>;
    fn neg(self) -> LinForm<T> {
        self.scaled(&-crate::scalar::one::<T>())
    }
}

impl<T: Scalar> Mul<C<T>> for LinForm<T> {
    type Output = LinForm<T>;
    fn mul(self, rhs: C<T>) -> LinForm<T> {
        self.scaled(&rhs)
    }
}

impl<T: Scalar> Mul<&C<T>> for &LinForm<T> {
    type Output = LinForm<T>;
    fn mul(self, rhs: &C<T>) -> LinForm<T> {
        self.scaled(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_conventions() {
        assert_eq!(levi_civita(0, 1, 2, 3), 1);
        assert_eq!(levi_civita(1, 0, 2, 3), -1);
        assert_eq!(levi_civita(0, 0, 2, 3), 0);
        assert_eq!(eps([Lo(0), Lo(1), Lo(2), Lo(3)]), -1);
        assert_eq!(eps([Up(0), Lo(1), Up(2), Up(3)]), -1);
    }

    #[test]
    fn pair_codec_round_trip() {
        for (slot, &(a, b)) in PAIRS.iter().enumerate() {
            assert_eq!(pair_slot(a, b), Some((slot, 1)));
            assert_eq!(pair_slot(b, a), Some((slot, -1)));
        }
        assert_eq!(pair_slot(2, 2), None);
    }

    #[test]
    fn sum_over_visits_every_tuple() {
        let mut n = 0;
        let _: LinForm<f64> = sum_over::<f64, 3>(|_| {
            n += 1;
            LinForm::zero()
        });
        assert_eq!(n, 64);
    }
}
