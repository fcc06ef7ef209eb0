//! Algebraic groups `GL(n)`, `SL(n)`, tori and their products, with the
//! adjoint and coadjoint actions on a fixed Lie-algebra basis.
//!
//! Basis conventions: `gl_n` uses the matrix units `E_ij` in row-major order;
//! `sl_n` uses the off-diagonal `E_ij` (row-major) followed by
//! `H_i = E_ii - E_{i+1,i+1}`; a torus of rank `r` uses its `r` coordinate
//! lines. Products use the concatenation of factor bases. The dual `g*` is
//! always written in the dual basis, so dual maps are transposes.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{DenseMatrix, Field};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("cannot parse group descriptor {0:?}")]
    Parse(String),
    #[error("matrix for factor {factor} is not invertible")]
    NotInvertible { factor: usize },
    #[error("matrix for SL factor {factor} has determinant != 1")]
    DeterminantNotOne { factor: usize },
    #[error("torus factor {factor} must be diagonal")]
    NotDiagonal { factor: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// An algebraic group descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AlgGroup {
    GL(usize),
    SL(usize),
    Torus(usize),
    Product(Vec<AlgGroup>),
}

/// Numerical invariants of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupData {
    pub dim: usize,
    pub rank: usize,
    pub center_dim: usize,
    /// Exponents of the Lie algebra; `None` where no convention is fixed
    /// (reductive `GL(n)`).
    pub exponents: Option<Vec<usize>>,
}

impl AlgGroup {
    /// The simple (non-product) factors, flattened.
    pub fn factors(&self) -> Vec<AlgGroup> {
        match self {
            AlgGroup::Product(gs) => gs.iter().flat_map(AlgGroup::factors).collect(),
            g => vec![g.clone()],
        }
    }

    /// Size of the matrices representing a simple factor.
    pub fn matrix_size(&self) -> usize {
        match self {
            AlgGroup::GL(n) | AlgGroup::SL(n) | AlgGroup::Torus(n) => *n,
            AlgGroup::Product(gs) => gs.iter().map(AlgGroup::matrix_size).sum(),
        }
    }

    pub fn dim(&self) -> usize {
        self.data().dim
    }

    pub fn rank(&self) -> usize {
        self.data().rank
    }

    pub fn center_dim(&self) -> usize {
        self.data().center_dim
    }

    pub fn is_abelian(&self) -> bool {
        self.factors().iter().all(|g| match g {
            AlgGroup::Torus(_) | AlgGroup::GL(1) => true,
            AlgGroup::SL(n) => *n <= 1,
            _ => false,
        })
    }

    /// `dim`, `rank`, `center_dim` and exponents. Products add.
    pub fn data(&self) -> GroupData {
        match self {
            AlgGroup::GL(n) => GroupData {
                dim: n * n,
                rank: *n,
                center_dim: 1,
                exponents: None,
            },
            AlgGroup::SL(n) => GroupData {
                dim: n * n - 1,
                rank: n - 1,
                center_dim: 0,
                exponents: Some((1..*n).collect()),
            },
            AlgGroup::Torus(r) => GroupData {
                dim: *r,
                rank: *r,
                center_dim: *r,
                exponents: Some(Vec::new()),
            },
            AlgGroup::Product(gs) => {
                let parts: Vec<GroupData> = gs.iter().map(AlgGroup::data).collect();
                GroupData {
                    dim: parts.iter().map(|d| d.dim).sum(),
                    rank: parts.iter().map(|d| d.rank).sum(),
                    center_dim: parts.iter().map(|d| d.center_dim).sum(),
                    exponents: parts.iter().try_fold(Vec::new(), |mut acc, d| {
                        acc.extend(d.exponents.as_ref()?);
                        Some(acc)
                    }),
                }
            }
        }
    }

    /// Labels of the Lie-algebra basis, e.g. `E12`, `H1`, `t1`.
    pub fn lie_basis(&self) -> Vec<String> {
        let factors = self.factors();
        let multi = factors.len() > 1;
        factors
            .iter()
            .enumerate()
            .flat_map(|(k, g)| {
                let prefix = if multi { format!("{}:", k + 1) } else { String::new() };
                let labels: Vec<String> = match g {
                    AlgGroup::GL(n) => (0..*n)
                        .flat_map(|i| (0..*n).map(move |j| format!("E{}{}", i + 1, j + 1)))
                        .collect(),
                    AlgGroup::SL(n) => sl_offdiag(*n)
                        .map(|(i, j)| format!("E{}{}", i + 1, j + 1))
                        .chain((1..*n).map(|i| format!("H{i}")))
                        .collect(),
                    AlgGroup::Torus(r) => (1..=*r).map(|i| format!("t{i}")).collect(),
                    AlgGroup::Product(_) => unreachable!("factors are simple"),
                };
                labels.into_iter().map(move |l| format!("{prefix}{l}"))
            })
            .collect()
    }
}

fn sl_offdiag(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

impl fmt::Display for AlgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgGroup::GL(n) => write!(f, "GL{n}"),
            AlgGroup::SL(n) => write!(f, "SL{n}"),
            AlgGroup::Torus(r) => write!(f, "T^{r}"),
            AlgGroup::Product(gs) => {
                let parts: Vec<String> = gs.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

impl FromStr for AlgGroup {
    type Err = LieError;

    /// Accepts `GL2`, `SL3`, `T^2` and `x`-separated products like `GL2xT^1`.
    fn from_str(s: &str) -> Result<Self, LieError> {
        let err = || LieError::Parse(s.to_string());
        let parse_simple = |t: &str| -> Result<AlgGroup, LieError> {
            let t = t.trim();
            let upper = t.to_ascii_uppercase();
            let (ctor, rest): (fn(usize) -> AlgGroup, &str) = if let Some(r) = upper.strip_prefix("GL") {
                (AlgGroup::GL, r)
            } else if let Some(r) = upper.strip_prefix("SL") {
                (AlgGroup::SL, r)
            } else if let Some(r) = upper.strip_prefix('T') {
                (AlgGroup::Torus, r.strip_prefix('^').unwrap_or(r))
            } else {
                return Err(err());
            };
            let n: usize = rest.trim().parse().map_err(|_| err())?;
            if n == 0 {
                return Err(err());
            }
            Ok(ctor(n))
        };
        let parts: Vec<&str> = s.split(['x', 'X']).collect();
        if parts.len() == 1 {
            parse_simple(parts[0])
        } else {
            Ok(AlgGroup::Product(parts.into_iter().map(parse_simple).collect::<Result<_, _>>()?))
        }
    }
}

/// A point of `G(k)`: one matrix per simple factor (tori as diagonal
/// matrices).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement<E> {
    group: AlgGroup,
    blocks: Vec<DenseMatrix<E>>,
}

impl<E: Clone + PartialEq> GroupElement<E> {
    /// Validates invertibility, `det = 1` for `SL` and diagonality for tori.
    pub fn new<F: Field<Elem = E>>(f: &F, group: &AlgGroup, blocks: Vec<DenseMatrix<E>>) -> Result<Self, LieError> {
        let factors = group.factors();
        if factors.len() != blocks.len() {
            return Err(LieError::Shape(format!(
                "{} has {} factors, got {} matrices",
                group,
                factors.len(),
                blocks.len()
            )));
        }
        for (k, (g, b)) in factors.iter().zip(&blocks).enumerate() {
            let n = g.matrix_size();
            if b.rows() != n || b.cols() != n {
                return Err(LieError::Shape(format!("factor {} of {} needs a {n}x{n} matrix", k + 1, group)));
            }
            if let AlgGroup::Torus(_) = g {
                if (0..n).any(|i| (0..n).any(|j| i != j && !f.is_zero(b.get(i, j)))) {
                    return Err(LieError::NotDiagonal { factor: k });
                }
            }
            let det = b.determinant(f);
            if f.is_zero(&det) {
                return Err(LieError::NotInvertible { factor: k });
            }
            if matches!(g, AlgGroup::SL(_)) && !f.is_one(&det) {
                return Err(LieError::DeterminantNotOne { factor: k });
            }
        }
        Ok(Self {
            group: group.clone(),
            blocks,
        })
    }

    /// Splits a block-diagonal matrix into factor blocks; off-block entries
    /// must vanish.
    pub fn from_matrix<F: Field<Elem = E>>(f: &F, group: &AlgGroup, m: &DenseMatrix<E>) -> Result<Self, LieError> {
        let n = group.matrix_size();
        if m.rows() != n || m.cols() != n {
            return Err(LieError::Shape(format!("{group} needs a {n}x{n} matrix")));
        }
        let mut blocks = Vec::new();
        let mut offset = 0;
        for g in group.factors() {
            let s = g.matrix_size();
            let mut b = DenseMatrix::zeros(f, s, s);
            for i in 0..s {
                for j in 0..s {
                    b.set(i, j, m.get(offset + i, offset + j).clone());
                }
            }
            blocks.push(b);
            offset += s;
        }
        let assembled = DenseMatrix::block_diagonal(f, &blocks);
        if assembled != *m {
            return Err(LieError::Shape(format!("matrix is not block diagonal for {group}")));
        }
        Self::new(f, group, blocks)
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, group: &AlgGroup) -> Self {
        Self {
            group: group.clone(),
            blocks: group
                .factors()
                .iter()
                .map(|g| DenseMatrix::identity(f, g.matrix_size()))
                .collect(),
        }
    }

    pub fn group(&self) -> &AlgGroup {
        &self.group
    }

    pub fn blocks(&self) -> &[DenseMatrix<E>] {
        &self.blocks
    }

    /// The full block-diagonal matrix.
    pub fn matrix<F: Field<Elem = E>>(&self, f: &F) -> DenseMatrix<E> {
        DenseMatrix::block_diagonal(f, &self.blocks)
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, rhs: &Self) -> Self {
        assert_eq!(self.group, rhs.group, "product of elements of different groups");
        Self {
            group: self.group.clone(),
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a.mul(f, b)).collect(),
        }
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Self {
        Self {
            group: self.group.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| b.inverse(f).expect("group elements are invertible"))
                .collect(),
        }
    }

    pub fn pow<F: Field<Elem = E>>(&self, f: &F, e: u64) -> Self {
        Self {
            group: self.group.clone(),
            blocks: self.blocks.iter().map(|b| b.pow(f, e)).collect(),
        }
    }

    pub fn is_identity<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.blocks.iter().all(|b| b.is_identity(f))
    }

    pub fn format<F: Field<Elem = E>>(&self, f: &F) -> String {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.format(f)).collect();
        parts.join(" x ")
    }
}

/// Matrix of `u ↦ g u g⁻¹` on the Lie-algebra basis (`dim G x dim G`).
pub fn adjoint<F: Field>(f: &F, g: &GroupElement<F::Elem>) -> DenseMatrix<F::Elem> {
    let blocks: Vec<DenseMatrix<F::Elem>> = g
        .group
        .factors()
        .iter()
        .zip(&g.blocks)
        .map(|(factor, m)| match factor {
            AlgGroup::Torus(r) => DenseMatrix::identity(f, *r),
            AlgGroup::GL(n) => adjoint_gl(f, *n, m),
            AlgGroup::SL(n) => adjoint_sl(f, *n, m),
            AlgGroup::Product(_) => unreachable!("factors are simple"),
        })
        .collect();
    DenseMatrix::block_diagonal(f, &blocks)
}

/// `adjoint(g⁻¹)ᵀ`, the action on `g*` in dual coordinates.
pub fn coadjoint<F: Field>(f: &F, g: &GroupElement<F::Elem>) -> DenseMatrix<F::Elem> {
    adjoint(f, &g.inverse(f)).transpose()
}

/// `g E_ij g⁻¹` as an `n x n` matrix.
fn conjugate_unit<F: Field>(
    f: &F,
    g: &DenseMatrix<F::Elem>,
    ginv: &DenseMatrix<F::Elem>,
    i: usize,
    j: usize,
) -> DenseMatrix<F::Elem> {
    let n = g.rows();
    let mut out = DenseMatrix::zeros(f, n, n);
    for a in 0..n {
        for b in 0..n {
            out.set(a, b, f.mul(g.get(a, i), ginv.get(j, b)));
        }
    }
    out
}

fn adjoint_gl<F: Field>(f: &F, n: usize, g: &DenseMatrix<F::Elem>) -> DenseMatrix<F::Elem> {
    let ginv = g.inverse(f).expect("group elements are invertible");
    let mut ad = DenseMatrix::zeros(f, n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let img = conjugate_unit(f, g, &ginv, i, j);
            for a in 0..n {
                for b in 0..n {
                    ad.set(a * n + b, i * n + j, img.get(a, b).clone());
                }
            }
        }
    }
    ad
}

/// Coordinates of a trace-zero matrix in the `sl_n` basis.
fn sl_coordinates<F: Field>(f: &F, n: usize, m: &DenseMatrix<F::Elem>) -> Vec<F::Elem> {
    let mut coords: Vec<F::Elem> = sl_offdiag(n).map(|(a, b)| m.get(a, b).clone()).collect();
    let mut partial = f.zero();
    for k in 0..n.saturating_sub(1) {
        partial = f.add(&partial, m.get(k, k));
        coords.push(partial.clone());
    }
    coords
}

fn adjoint_sl<F: Field>(f: &F, n: usize, g: &DenseMatrix<F::Elem>) -> DenseMatrix<F::Elem> {
    let ginv = g.inverse(f).expect("group elements are invertible");
    let dim = n * n - 1;
    let mut ad = DenseMatrix::zeros(f, dim, dim);
    let mut images: Vec<DenseMatrix<F::Elem>> = sl_offdiag(n).map(|(i, j)| conjugate_unit(f, g, &ginv, i, j)).collect();
    for k in 0..n.saturating_sub(1) {
        let a = conjugate_unit(f, g, &ginv, k, k);
        let b = conjugate_unit(f, g, &ginv, k + 1, k + 1);
        images.push(a.sub(f, &b));
    }
    for (col, img) in images.iter().enumerate() {
        for (row, v) in sl_coordinates(f, n, img).into_iter().enumerate() {
            ad.set(row, col, v);
        }
    }
    ad
}

/// Projects an `n x n` matrix onto `sl_n` coordinates, dropping the trace.
/// Used by the Koszul models; exact for trace-zero input.
pub fn sl_projection_indices(n: usize) -> (Vec<(usize, usize)>, usize) {
    (sl_offdiag(n).collect(), n.saturating_sub(1))
}
