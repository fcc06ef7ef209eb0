//! Finite chain complexes and their homology.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::field::Field;
use super::sparse::SparseMatrix;
use super::ExactError;

/// A bounded chain complex `C_top -> ... -> C_1 -> C_0`.
///
/// `differentials[k]` is `d_{k+1} : C_{k+1} -> C_k`, a `dims[k] x dims[k+1]`
/// matrix. An optional internal grading assigns an integer weight to every
/// basis vector; differentials must preserve it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex<E> {
    dims: Vec<usize>,
    differentials: Vec<SparseMatrix<E>>,
    weights: Option<Vec<Vec<i64>>>,
}

/// Betti numbers and Euler characteristic of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub betti: Vec<usize>,
    pub euler: i64,
    /// `weight -> betti numbers by degree`, present for graded complexes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graded: Option<BTreeMap<i64, Vec<usize>>>,
}

impl HomologyReport {
    pub fn betti_string(&self) -> String {
        self.betti.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }

    /// Dimension in degree `n`, zero beyond the top.
    pub fn dim(&self, n: usize) -> usize {
        self.betti.get(n).copied().unwrap_or(0)
    }
}

/// Alternating sum `sum (-1)^n xs[n]`.
pub fn alternating_sum(xs: &[usize]) -> i64 {
    xs.iter()
        .enumerate()
        .map(|(n, &x)| if n % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

impl<E: Clone + Send + Sync> ChainComplex<E> {
    /// Validates shapes and `d∘d = 0`.
    pub fn new<F: Field<Elem = E>>(
        f: &F,
        dims: Vec<usize>,
        differentials: Vec<SparseMatrix<E>>,
    ) -> Result<Self, ExactError> {
        let c = Self {
            dims,
            differentials,
            weights: None,
        };
        c.validate(f)?;
        Ok(c)
    }

    /// Like [`ChainComplex::new`] with an internal grading.
    pub fn graded<F: Field<Elem = E>>(
        f: &F,
        dims: Vec<usize>,
        differentials: Vec<SparseMatrix<E>>,
        weights: Vec<Vec<i64>>,
    ) -> Result<Self, ExactError> {
        let c = Self {
            dims,
            differentials,
            weights: Some(weights),
        };
        c.validate(f)?;
        Ok(c)
    }

    fn validate<F: Field<Elem = E>>(&self, f: &F) -> Result<(), ExactError> {
        if self.dims.is_empty() || self.differentials.len() + 1 != self.dims.len() {
            return Err(ExactError::ShapeMismatch(format!(
                "{} terms need {} differentials, got {}",
                self.dims.len(),
                self.dims.len().saturating_sub(1),
                self.differentials.len()
            )));
        }
        for (k, d) in self.differentials.iter().enumerate() {
            if (d.rows(), d.cols()) != (self.dims[k], self.dims[k + 1]) {
                return Err(ExactError::ShapeMismatch(format!(
                    "d_{} is {}x{}, expected {}x{}",
                    k + 1,
                    d.rows(),
                    d.cols(),
                    self.dims[k],
                    self.dims[k + 1]
                )));
            }
        }
        for k in 1..self.differentials.len() {
            if !self.differentials[k - 1].mul(f, &self.differentials[k]).is_zero() {
                return Err(ExactError::ComplexInvalid { degree: k + 1 });
            }
        }
        if let Some(w) = &self.weights {
            if w.len() != self.dims.len() || w.iter().zip(&self.dims).any(|(w, &d)| w.len() != d) {
                return Err(ExactError::ShapeMismatch("weight table does not match dims".into()));
            }
            for (k, d) in self.differentials.iter().enumerate() {
                if let Some((i, j, _)) = d.triplets().find(|(i, j, _)| w[k][*i] != w[k + 1][*j]) {
                    return Err(ExactError::GradingViolated {
                        degree: k + 1,
                        row: i,
                        col: j,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differentials(&self) -> &[SparseMatrix<E>] {
        &self.differentials
    }

    /// `d_n : C_n -> C_{n-1}` for `n >= 1`.
    pub fn differential(&self, n: usize) -> &SparseMatrix<E> {
        &self.differentials[n - 1]
    }

    pub fn weights(&self) -> Option<&[Vec<i64>]> {
        self.weights.as_deref()
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.dims)
    }

    /// Exact homology; ranks of distinct differentials (and of distinct weight
    /// blocks) are computed in parallel.
    pub fn homology<F: Field<Elem = E>>(&self, f: &F) -> HomologyReport {
        let betti = betti_from_ranks(&self.dims, &ranks(f, &self.differentials));
        let graded = self.weights.as_ref().map(|w| {
            let mut all: Vec<i64> = w.iter().flatten().copied().collect();
            all.sort_unstable();
            all.dedup();
            all.into_par_iter()
                .map(|weight| {
                    let idx: Vec<Vec<usize>> = w
                        .iter()
                        .map(|ws| (0..ws.len()).filter(|&i| ws[i] == weight).collect())
                        .collect();
                    let dims: Vec<usize> = idx.iter().map(Vec::len).collect();
                    let blocks: Vec<SparseMatrix<E>> = self
                        .differentials
                        .iter()
                        .enumerate()
                        .map(|(k, d)| d.submatrix(&idx[k], &idx[k + 1]))
                        .collect();
                    (weight, betti_from_ranks(&dims, &ranks(f, &blocks)))
                })
                .collect::<BTreeMap<_, _>>()
        });
        let report = HomologyReport {
            euler: alternating_sum(&betti),
            betti,
            graded,
        };
        debug_assert_eq!(report.euler, self.euler_characteristic());
        report
    }

    /// The conjugated complex `A_{n-1} d_n A_n^{-1}` for invertible changes of
    /// basis `A_n` (given together with their inverses).
    pub fn change_basis<F: Field<Elem = E>>(
        &self,
        f: &F,
        bases: &[(SparseMatrix<E>, SparseMatrix<E>)],
    ) -> Result<Self, ExactError> {
        assert_eq!(bases.len(), self.dims.len());
        let diffs = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| bases[k].0.mul(f, d).mul(f, &bases[k + 1].1))
            .collect();
        Self::new(f, self.dims.clone(), diffs)
    }
}

fn ranks<F: Field>(f: &F, ds: &[SparseMatrix<F::Elem>]) -> Vec<usize> {
    ds.par_iter().map(|d| d.rank(f)).collect()
}

fn betti_from_ranks(dims: &[usize], ranks: &[usize]) -> Vec<usize> {
    (0..dims.len())
        .map(|n| {
            let out = if n == 0 { 0 } else { ranks[n - 1] };
            let inc = ranks.get(n).copied().unwrap_or(0);
            dims[n] - out - inc
        })
        .collect()
}
