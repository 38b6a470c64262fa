//! Tensor-component containers and the multispinor expansions that
//! connect them to rank-2 and rank-4 spinor arrays.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::clifford::{spin1_expansion, GammaBasis, RMatrix};
use crate::linsys::{min_norm_solve, solve};
use crate::matrix::CMatrix;
use crate::scalar::{from_c64, is_zero, re, to_c64, zero, Scalar, C};
use crate::tensor::{pair_label, pair_slot, raise_factor, Ix, LinForm, Metric, PAIRS};
use num_complex::Complex;

#[derive(Debug, Error, PartialEq)]
pub enum FieldsError {
    #[error("expansion Gram matrix is singular")]
    SingularGram,
    #[error("array is not in the image of the expansion")]
    NotInImage,
    #[error("component JSON: {0}")]
    Json(String),
}

/// Four-momentum with contravariant components p^μ.
#[derive(Clone, Debug, PartialEq)]
pub struct Momentum<T: Scalar> {
    pub p: [C<T>; 4],
}

impl<T: Scalar> Momentum<T> {
    pub fn new(p: [C<T>; 4]) -> Self {
        Self { p }
    }

    pub fn upper(&self, mu: usize) -> C<T> {
        self.p[mu].clone()
    }

    pub fn lower(&self, mu: usize) -> C<T> {
        self.p[mu].clone() * re::<T>(Metric::sign(mu))
    }

    pub fn at(&self, ix: Ix) -> C<T> {
        match ix {
            Ix::Up(m) => self.upper(m),
            Ix::Lo(m) => self.lower(m),
        }
    }

    pub fn p2(&self) -> C<T> {
        (0..4).fold(zero(), |acc, mu| acc + self.upper(mu) * self.lower(mu))
    }

    pub fn negated(&self) -> Self {
        Self { p: self.p.clone().map(|x| -x) }
    }

    pub fn to_c64(&self) -> [Complex<f64>; 4] {
        self.p.clone().map(|x| to_c64(&x))
    }
}

// ---------------------------------------------------------------- spin 1

pub const SPIN1_DIM: usize = 16;
pub const PHI: usize = 0;
pub const PHI_TILDE: usize = 1;

pub fn col_a(lambda: usize) -> usize {
    2 + lambda
}

pub fn col_a_tilde(lambda: usize) -> usize {
    6 + lambda
}

pub fn col_f(slot: usize) -> usize {
    10 + slot
}

pub fn spin1_labels() -> Vec<String> {
    let mut v = vec!["phi".to_string(), "phi~".to_string()];
    v.extend((0..4).map(|l| format!("A[{l}]")));
    v.extend((0..4).map(|l| format!("A~[{l}]")));
    v.extend((0..6).map(|s| format!("F[{}]", pair_label(s))));
    v
}

/// Expansion coefficients of a rank-2 multispinor; all indices lower.
#[derive(Clone, Debug, PartialEq)]
pub struct Spin1Components<T: Scalar> {
    pub phi: C<T>,
    pub phi_tilde: C<T>,
    pub a: [C<T>; 4],
    pub a_tilde: [C<T>; 4],
    /// F_{μν} on the lexicographic pairs.
    pub f: [C<T>; 6],
}

impl<T: Scalar> Spin1Components<T> {
    pub fn zero() -> Self {
        Self::from_vec(&vec![zero(); SPIN1_DIM])
    }

    pub fn from_vec(v: &[C<T>]) -> Self {
        assert_eq!(v.len(), SPIN1_DIM);
        Self {
            phi: v[PHI].clone(),
            phi_tilde: v[PHI_TILDE].clone(),
            a: std::array::from_fn(|l| v[col_a(l)].clone()),
            a_tilde: std::array::from_fn(|l| v[col_a_tilde(l)].clone()),
            f: std::array::from_fn(|s| v[col_f(s)].clone()),
        }
    }

    pub fn to_vec(&self) -> Vec<C<T>> {
        let mut v = vec![self.phi.clone(), self.phi_tilde.clone()];
        v.extend(self.a.iter().cloned());
        v.extend(self.a_tilde.iter().cloned());
        v.extend(self.f.iter().cloned());
        v
    }

    /// F_{μν} for any ordered pair.
    pub fn f_at(&self, mu: usize, nu: usize) -> C<T> {
        match pair_slot(mu, nu) {
            None => zero(),
            Some((s, sign)) => self.f[s].clone() * re::<T>(sign),
        }
    }

    pub fn to_json(&self) -> Value {
        let arr = |xs: &[C<T>]| Value::Array(xs.iter().map(|z| json_c(z)).collect());
        json!({
            "phi": [json_c(&self.phi)],
            "phi~": [json_c(&self.phi_tilde)],
            "A": arr(&self.a),
            "A~": arr(&self.a_tilde),
            "F": arr(&self.f),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, FieldsError> {
        let mut out = Vec::with_capacity(SPIN1_DIM);
        for (name, n) in [("phi", 1), ("phi~", 1), ("A", 4), ("A~", 4), ("F", 6)] {
            out.extend(read_block(v, name, n)?);
        }
        Ok(Self::from_vec(&out))
    }
}

fn json_c<T: Scalar>(z: &C<T>) -> Value {
    let w = to_c64(z);
    json!([w.re, w.im])
}

fn read_block<T: Scalar>(v: &Value, name: &str, n: usize) -> Result<Vec<C<T>>, FieldsError> {
    let arr = v.get(name).and_then(Value::as_array).ok_or_else(|| FieldsError::Json(format!("missing `{name}`")))?;
    if arr.len() != n {
        return Err(FieldsError::Json(format!("`{name}` needs {n} entries")));
    }
    arr.iter()
        .map(|e| {
            let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| FieldsError::Json(format!("bad entry in `{name}`")))?;
            let re_ = pair[0].as_f64().ok_or_else(|| FieldsError::Json("non-numeric".into()))?;
            let im_ = pair[1].as_f64().ok_or_else(|| FieldsError::Json("non-numeric".into()))?;
            Ok(from_c64(Complex::new(re_, im_)))
        })
        .collect()
}

/// Rank-2 spinor array Ψ_{αβ}.
#[derive(Clone, Debug, PartialEq)]
pub struct Multispinor2<T: Scalar> {
    pub psi: CMatrix<T>,
}

pub fn pack_spin1<T: Scalar>(c: &Spin1Components<T>, basis: &GammaBasis<T>, r: &RMatrix<T>) -> Multispinor2<T> {
    let mut psi = CMatrix::zeros(4, 4);
    for (b, x) in spin1_expansion(basis, r).iter().zip(c.to_vec()) {
        if !is_zero(&x) {
            psi = &psi + &b.scale(&x);
        }
    }
    Multispinor2 { psi }
}

fn trace_inner<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> C<T> {
    (&a.adjoint() * b).trace()
}

pub fn unpack_spin1<T: Scalar>(
    psi: &Multispinor2<T>,
    basis: &GammaBasis<T>,
    r: &RMatrix<T>,
) -> Result<Spin1Components<T>, FieldsError> {
    let bs = spin1_expansion(basis, r);
    let gram = CMatrix::from_fn(SPIN1_DIM, SPIN1_DIM, |i, j| trace_inner(&bs[i], &bs[j]));
    let rhs: Vec<C<T>> = bs.iter().map(|b| trace_inner(b, &psi.psi)).collect();
    if crate::linsys::rank_of(&gram) < SPIN1_DIM {
        return Err(FieldsError::SingularGram);
    }
    let x = solve(&gram, &rhs).ok_or(FieldsError::SingularGram)?;
    Ok(Spin1Components::from_vec(&x))
}

// ---------------------------------------------------------------- spin 2

/// Component blocks of the rank-4 expansion, in storage order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    G,
    F,
    FTilde,
    T,
    TTilde,
    R,
    RTilde,
    D,
    DTilde,
}

impl Block {
    pub const ALL: [Block; 9] =
        [Block::G, Block::F, Block::FTilde, Block::T, Block::TTilde, Block::R, Block::RTilde, Block::D, Block::DTilde];
    pub const STANDARD: [Block; 4] = [Block::G, Block::F, Block::T, Block::R];

    pub fn name(self) -> &'static str {
        match self {
            Block::G => "G",
            Block::F => "F",
            Block::FTilde => "F~",
            Block::T => "T",
            Block::TTilde => "T~",
            Block::R => "R",
            Block::RTilde => "R~",
            Block::D => "D",
            Block::DTilde => "D~",
        }
    }

    /// (rows, cols) with 6 standing for an antisymmetric pair.
    pub fn shape(self) -> (usize, usize) {
        match self {
            Block::G => (4, 4),
            Block::F | Block::FTilde => (6, 4),
            Block::T | Block::TTilde => (4, 6),
            _ => (6, 6),
        }
    }

    pub fn size(self) -> usize {
        let (a, b) = self.shape();
        a * b
    }

    /// Number of tensor indices.
    pub fn arity(self) -> usize {
        match self {
            Block::G => 2,
            Block::F | Block::FTilde | Block::T | Block::TTilde => 3,
            _ => 4,
        }
    }

    /// Indices (i, j) of (α, β) multiplying this block: α_i β_j.
    pub fn coefficient_indices(self) -> (usize, usize) {
        match self {
            Block::G => (0, 0),
            Block::F => (0, 1),
            Block::FTilde => (0, 2),
            Block::T => (1, 3),
            Block::R => (1, 4),
            Block::RTilde => (1, 5),
            Block::TTilde => (2, 6),
            Block::DTilde => (2, 7),
            Block::D => (2, 8),
        }
    }

    pub fn is_tilde(self) -> bool {
        !Block::STANDARD.contains(&self)
    }

    /// Storage slot (row, col) and sign of an all-lower index tuple.
    fn slot(self, ix: &[usize]) -> Option<(usize, usize, i64)> {
        match self {
            Block::G => Some((ix[0], ix[1], 1)),
            Block::F | Block::FTilde => pair_slot(ix[0], ix[1]).map(|(s, g)| (s, ix[2], g)),
            Block::T | Block::TTilde => pair_slot(ix[1], ix[2]).map(|(s, g)| (ix[0], s, g)),
            _ => {
                let (a, ga) = pair_slot(ix[0], ix[1])?;
                let (b, gb) = pair_slot(ix[2], ix[3])?;
                Some((a, b, ga * gb))
            }
        }
    }

    fn label(self, row: usize, col: usize) -> String {
        let (r, c) = match self {
            Block::G => (row.to_string(), col.to_string()),
            Block::F | Block::FTilde => (pair_label(row), col.to_string()),
            Block::T | Block::TTilde => (row.to_string(), pair_label(col)),
            _ => (pair_label(row), pair_label(col)),
        };
        format!("{}[{},{}]", self.name(), r, c)
    }
}

/// Column layout of a set of spin-2 blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct Spin2Layout {
    blocks: Vec<Block>,
    offsets: Vec<usize>,
    n: usize,
}

impl Spin2Layout {
    pub fn new(blocks: &[Block]) -> Self {
        let mut offsets = Vec::new();
        let mut n = 0;
        for b in blocks {
            offsets.push(n);
            n += b.size();
        }
        Self { blocks: blocks.to_vec(), offsets, n }
    }

    pub fn standard() -> Self {
        Self::new(&Block::STANDARD)
    }

    pub fn full() -> Self {
        Self::new(&Block::ALL)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn offset(&self, b: Block) -> Option<usize> {
        self.blocks.iter().position(|&x| x == b).map(|k| self.offsets[k])
    }

    pub fn labels(&self) -> Vec<String> {
        let mut v = Vec::with_capacity(self.n);
        for &b in &self.blocks {
            let (rows, cols) = b.shape();
            for r in 0..rows {
                for c in 0..cols {
                    v.push(b.label(r, c));
                }
            }
        }
        v
    }

    pub fn block_labels(&self, b: Block) -> Vec<String> {
        let (rows, cols) = b.shape();
        (0..rows).flat_map(|r| (0..cols).map(move |c| b.label(r, c))).collect()
    }

    /// Component with all indices lower as a linear form; zero on repeated
    /// antisymmetric indices or blocks absent from the layout.
    pub fn comp<T: Scalar>(&self, b: Block, ix: &[usize]) -> LinForm<T> {
        assert_eq!(ix.len(), b.arity());
        let Some(off) = self.offset(b) else { return LinForm::zero() };
        match b.slot(ix) {
            None => LinForm::zero(),
            Some((r, c, s)) => LinForm::unit(off + r * b.shape().1 + c).scaled(&re(s)),
        }
    }

    /// Component with explicit index positions.
    pub fn at<T: Scalar>(&self, b: Block, ix: &[Ix]) -> LinForm<T> {
        let vals: Vec<usize> = ix.iter().map(|i| i.value()).collect();
        self.comp::<T>(b, &vals).scaled(&re(raise_factor(ix)))
    }
}

/// Spin-2 tensor components, all indices lower, stored per block on the
/// pair codec.
#[derive(Clone, Debug, PartialEq)]
pub struct Spin2Components<T: Scalar> {
    values: Vec<C<T>>,
}

impl<T: Scalar> Spin2Components<T> {
    pub fn zero() -> Self {
        Self { values: vec![zero(); Spin2Layout::full().len()] }
    }

    pub fn from_vec(values: Vec<C<T>>) -> Self {
        assert_eq!(values.len(), Spin2Layout::full().len());
        Self { values }
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.values
    }

    pub fn block(&self, b: Block) -> &[C<T>] {
        let off = Spin2Layout::full().offset(b).expect("full layout");
        &self.values[off..off + b.size()]
    }

    pub fn block_mut(&mut self, b: Block) -> &mut [C<T>] {
        let off = Spin2Layout::full().offset(b).expect("full layout");
        &mut self.values[off..off + b.size()]
    }

    /// Values of the standard blocks G, F, T, R in standard-layout order.
    pub fn standard_part(&self) -> Vec<C<T>> {
        Block::STANDARD.iter().flat_map(|&b| self.block(b).to_vec()).collect()
    }

    pub fn from_standard(v: &[C<T>]) -> Self {
        let mut out = Self::zero();
        let mut k = 0;
        for b in Block::STANDARD {
            let n = b.size();
            out.block_mut(b).clone_from_slice(&v[k..k + n]);
            k += n;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for b in Block::ALL {
            m.insert(b.name().to_string(), Value::Array(self.block(b).iter().map(json_c).collect()));
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self, FieldsError> {
        let mut values = Vec::new();
        for b in Block::ALL {
            values.extend(read_block(v, b.name(), b.size())?);
        }
        Ok(Self { values })
    }
}

/// Rank-4 spinor array indexed by ((αβ), (γδ)) as a 16×16 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Multispinor4<T: Scalar> {
    pub psi: CMatrix<T>,
}

impl<T: Scalar> Multispinor4<T> {
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> C<T> {
        self.psi[(4 * a + b, 4 * c + d)].clone()
    }

    /// Largest violation of symmetry within each index pair.
    pub fn pair_symmetry_defect(&self) -> T {
        let mut worst = T::zero();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let x = self.get(a, b, c, d);
                        for y in [self.get(b, a, c, d), self.get(a, b, d, c)] {
                            let m = crate::scalar::mag(&(x.clone() - y));
                            if m > worst {
                                worst = m;
                            }
                        }
                    }
                }
            }
        }
        worst
    }
}

/// Left (first pair) and right (second pair) expansion matrices of one
/// stored component, with the ordered-pair multiplicity folded in.
fn block_matrices<T: Scalar>(
    b: Block,
    row: usize,
    col: usize,
    basis: &GammaBasis<T>,
    rm: &CMatrix<T>,
) -> (CMatrix<T>, CMatrix<T>) {
    let g = |mu: usize| &basis.gamma[mu] * rm;
    let s = |slot: usize| (&basis.sigma[slot] * rm).scale(&re(2));
    let s5 = |slot: usize| (&(&basis.gamma5 * &basis.sigma[slot]) * rm).scale(&re(2));
    match b {
        Block::G => (g(col), g(row)),
        Block::F => (g(col), s(row)),
        Block::FTilde => (g(col), s5(row)),
        Block::T => (s(col), g(row)),
        Block::TTilde => (s5(col), g(row)),
        Block::R => (s(col), s(row)),
        Block::RTilde => (s(col), s5(row)),
        Block::DTilde => (s5(col), s(row)),
        Block::D => (s5(col), s5(row)),
    }
}

/// Linear map from components (columns, in `layout` order) to the
/// flattened rank-4 array (256 rows).
pub fn spin2_pack_matrix<T: Scalar>(
    layout: &Spin2Layout,
    alpha: &[C<T>; 3],
    beta: &[C<T>; 9],
    basis: &GammaBasis<T>,
    r: &RMatrix<T>,
) -> CMatrix<T> {
    let mut out = CMatrix::zeros(256, layout.len());
    for &b in layout.blocks() {
        let (i, j) = b.coefficient_indices();
        let coef = alpha[i].clone() * beta[j].clone();
        let off = layout.offset(b).expect("block in layout");
        let (rows, cols) = b.shape();
        for rr in 0..rows {
            for cc in 0..cols {
                let k = off + rr * cols + cc;
                if is_zero(&coef) {
                    continue;
                }
                let (left, right) = block_matrices(b, rr, cc, basis, &r.r);
                let o = CMatrix::outer(left.as_slice(), right.as_slice());
                for (e, v) in o.as_slice().iter().enumerate() {
                    if !is_zero(v) {
                        out[(e, k)] = v.clone() * coef.clone();
                    }
                }
            }
        }
    }
    out
}

pub fn pack_spin2<T: Scalar>(
    c: &Spin2Components<T>,
    alpha: &[C<T>; 3],
    beta: &[C<T>; 9],
    basis: &GammaBasis<T>,
    r: &RMatrix<T>,
) -> Multispinor4<T> {
    let m = spin2_pack_matrix(&Spin2Layout::full(), alpha, beta, basis, r);
    Multispinor4 { psi: CMatrix::from_vec(16, 16, m.mul_vec(c.as_slice())) }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spin2Unpacked<T: Scalar> {
    pub components: Spin2Components<T>,
    /// Blocks whose coefficient product vanishes; they are returned as zero.
    pub undetermined: Vec<Block>,
}

/// Minimum-norm preimage of a rank-4 array under the nine-block expansion.
///
/// The expansion is injective only on special coefficient sets (the four
/// standard blocks, for example); elsewhere the preimage is the one of
/// least norm, so pack(unpack(Ψ)) = Ψ on the image.
pub fn unpack_spin2<T: Scalar>(
    psi: &Multispinor4<T>,
    alpha: &[C<T>; 3],
    beta: &[C<T>; 9],
    basis: &GammaBasis<T>,
    r: &RMatrix<T>,
) -> Result<Spin2Unpacked<T>, FieldsError> {
    let undetermined: Vec<Block> = Block::ALL
        .into_iter()
        .filter(|b| {
            let (i, j) = b.coefficient_indices();
            is_zero(&(alpha[i].clone() * beta[j].clone()))
        })
        .collect();
    let active: Vec<Block> = Block::ALL.into_iter().filter(|b| !undetermined.contains(b)).collect();
    let layout = Spin2Layout::new(&active);
    let m = spin2_pack_matrix(&layout, alpha, beta, basis, r);
    let x = min_norm_solve(&m, psi.psi.as_slice()).ok_or(FieldsError::NotInImage)?;
    let mut components = Spin2Components::zero();
    for &b in &active {
        let off = layout.offset(b).expect("active block");
        components.block_mut(b).clone_from_slice(&x[off..off + b.size()]);
    }
    Ok(Spin2Unpacked { components, undetermined })
}

/// Labels of the pair-symmetric rank-4 array entries (for reports).
pub fn pair_names() -> Vec<String> {
    PAIRS.iter().map(|(a, b)| format!("{a}{b}")).collect()
}
