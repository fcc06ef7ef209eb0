//! Koszul models of derived representation schemes of the torus and of
//! closed surfaces, and their homology in a window of internal degrees.
//!
//! A model is the polynomial ring on the matrix entries (even, weight 1)
//! tensored with an exterior algebra on odd variables `θ`, with
//! `d(θ_k) = f_k`. Localization at determinants is not performed, so the
//! homology reported is that of the non-localized complex.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{ChainComplex, Field, SparseMatrix};
use crate::liegroups::AlgGroup;

/// Largest graded piece (in basis vectors) built by default.
pub const DEFAULT_BUDGET: usize = 20_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum KoszulError {
    #[error("graded piece of homological degree {degree}, internal degree {weight} has dimension {dim} > budget {budget}")]
    BudgetExceeded {
        weight: usize,
        degree: usize,
        dim: usize,
        budget: usize,
    },
    #[error("no Koszul model for {0}")]
    Unsupported(String),
}

/// A polynomial with integer coefficients, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, 1);
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().checked_add(c).expect("coefficient overflow");
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(d)` when every term has total degree `d` (`None` for zero or
    /// inhomogeneous polynomials).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>() as usize);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e.to_vec(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in self.terms() {
            out.add_term(e.to_vec(), c.checked_mul(k).expect("coefficient overflow"));
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                let e = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, x.checked_mul(y).expect("coefficient overflow"));
            }
        }
        out
    }

    /// Moves variable `i` to `offset + i` in a ring with `nvars` variables.
    pub fn embed(&self, nvars: usize, offset: usize) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in self.terms() {
            let mut big = vec![0; nvars];
            big[offset..offset + e.len()].copy_from_slice(e);
            out.add_term(big, c);
        }
        out
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        // Largest exponent vectors first.
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let c = *c;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { names[i].clone() } else { format!("{}^{x}", names[i]) })
                .collect();
            let sign = if c < 0 { "-" } else { "+" };
            if k > 0 {
                out.push_str(&format!(" {sign} "));
            } else if c < 0 {
                out.push('-');
            }
            let a = c.abs();
            match (a, mono.is_empty()) {
                (_, true) => out.push_str(&a.to_string()),
                (1, false) => out.push_str(&mono.join("*")),
                _ => out.push_str(&format!("{a}*{}", mono.join("*"))),
            }
        }
        out
    }
}

type PolyMatrix = Vec<Vec<Poly>>;

fn symbolic_matrix(nvars: usize, n: usize, offset: usize) -> PolyMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| Poly::var(nvars, offset + i * n + j)).collect())
        .collect()
}

fn mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    let nvars = a[0][0].nvars();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Poly::zero(nvars), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

fn mat_sub(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.sub(y)).collect())
        .collect()
}

fn mat_scale(a: &PolyMatrix, c: &Poly) -> PolyMatrix {
    a.iter().map(|r| r.iter().map(|x| x.mul(c)).collect()).collect()
}

fn minor(a: &PolyMatrix, row: usize, col: usize) -> PolyMatrix {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Determinant by cofactor expansion along the first row.
fn det(a: &PolyMatrix) -> Poly {
    match a.len() {
        0 => unreachable!("empty matrix"),
        1 => a[0][0].clone(),
        n => (0..n).fold(Poly::zero(a[0][0].nvars()), |acc, j| {
            let term = a[0][j].mul(&det(&minor(a, 0, j)));
            if j % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            }
        }),
    }
}

/// Adjugate, so that `A · adj(A) = det(A) · Id`.
fn adjugate(a: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    let nvars = a[0][0].nvars();
    if n == 1 {
        return vec![vec![Poly::constant(nvars, 1)]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = det(&minor(a, j, i));
                    if (i + j) % 2 == 0 {
                        c
                    } else {
                        c.scale(-1)
                    }
                })
                .collect()
        })
        .collect()
}

/// A Koszul model: polynomial ring on `even_names` with odd generators whose
/// differentials are `relations`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulModel {
    pub label: String,
    pub even_names: Vec<String>,
    pub odd_names: Vec<String>,
    /// Internal degree of each odd variable (the degree of its relation).
    pub odd_weights: Vec<usize>,
    pub relations: Vec<Poly>,
    /// Determinants that would be inverted in the localized model.
    pub localized_dets: Vec<Poly>,
    pub notes: Vec<String>,
}

impl KoszulModel {
    pub fn n_even_vars(&self) -> usize {
        self.even_names.len()
    }

    pub fn n_odd_vars(&self) -> usize {
        self.odd_names.len()
    }

    /// Relations as readable strings.
    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.format(&self.even_names)).collect()
    }

    fn check(&self) {
        assert_eq!(self.odd_weights.len(), self.relations.len());
        for (r, &w) in self.relations.iter().zip(&self.odd_weights) {
            assert!(r.is_zero() || r.homogeneous_degree() == Some(w), "relation not of weight {w}");
        }
    }

    /// Disjoint union of variables, for product groups.
    fn merge(label: String, parts: Vec<KoszulModel>) -> KoszulModel {
        let total: usize = parts.iter().map(KoszulModel::n_even_vars).sum();
        let multi = parts.len() > 1;
        let mut out = KoszulModel {
            label,
            even_names: vec![],
            odd_names: vec![],
            odd_weights: vec![],
            relations: vec![],
            localized_dets: vec![],
            notes: vec![],
        };
        let mut offset = 0;
        for (k, p) in parts.into_iter().enumerate() {
            let n_even = p.n_even_vars();
            let tag = |s: &String| if multi { format!("{s}_{}", k + 1) } else { s.clone() };
            out.even_names.extend(p.even_names.iter().map(tag));
            out.odd_names.extend(p.odd_names.iter().map(tag));
            out.odd_weights.extend(&p.odd_weights);
            out.relations.extend(p.relations.iter().map(|r| r.embed(total, offset)));
            out.localized_dets.extend(p.localized_dets.iter().map(|r| r.embed(total, offset)));
            for note in p.notes {
                if !out.notes.contains(&note) {
                    out.notes.push(note);
                }
            }
            offset += n_even;
        }
        out.check();
        out
    }
}

fn matrix_names(prefix: &str, n: usize, index: Option<usize>) -> Vec<String> {
    let suffix = index.map_or(String::new(), |i| format!("_{i}"));
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| format!("{prefix}{}{}{suffix}", i + 1, j + 1))
        .collect()
}

fn gl_torus_factor(n: usize) -> KoszulModel {
    let nvars = 2 * n * n;
    let x = symbolic_matrix(nvars, n, 0);
    let y = symbolic_matrix(nvars, n, n * n);
    let c = mat_sub(&mat_mul(&x, &y), &mat_mul(&y, &x));
    let mut even_names = matrix_names("x", n, None);
    even_names.extend(matrix_names("y", n, None));
    KoszulModel {
        label: format!("torus:GL{n}"),
        even_names,
        odd_names: matrix_names("t", n, None),
        odd_weights: vec![2; n * n],
        relations: c.into_iter().flatten().collect(),
        localized_dets: vec![det(&x), det(&y)],
        notes: vec![],
    }
}

fn sl_torus_factor(n: usize) -> KoszulModel {
    let mut m = gl_torus_factor(n);
    // Coordinates of the traceless commutator: off-diagonal entries, then
    // partial sums of the diagonal.
    let entry = |i: usize, j: usize| m.relations[i * n + j].clone();
    let mut rels = Vec::new();
    let mut names = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                rels.push(entry(i, j));
                names.push(format!("t{}{}", i + 1, j + 1));
            }
        }
    }
    let mut partial = Poly::zero(2 * n * n);
    for k in 0..n.saturating_sub(1) {
        partial = partial.add(&entry(k, k));
        rels.push(partial.clone());
        names.push(format!("h{}", k + 1));
    }
    m.label = format!("torus:SL{n}");
    m.odd_weights = vec![2; rels.len()];
    m.relations = rels;
    m.odd_names = names;
    m.localized_dets = vec![];
    m.notes = vec!["determinant-one equations on X, Y are not imposed".into()];
    m
}

/// `k[X, Y, θ]` with `dθ = [X, Y]` (projected to `sl_n` coordinates for
/// `SL(n)`); tori are products of `GL(1)`.
pub fn torus_model(group: &AlgGroup) -> Result<KoszulModel, KoszulError> {
    let parts = group
        .factors()
        .iter()
        .flat_map(|g| match g {
            AlgGroup::GL(n) => vec![Ok(gl_torus_factor(*n))],
            AlgGroup::SL(n) if *n >= 2 => vec![Ok(sl_torus_factor(*n))],
            AlgGroup::Torus(r) => (0..*r).map(|_| Ok(gl_torus_factor(1))).collect(),
            g => vec![Err(KoszulError::Unsupported(g.to_string()))],
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KoszulModel::merge(format!("torus:{group}"), parts))
}

fn gl_surface_factor(n: usize, genus: usize) -> KoszulModel {
    let block = n * n;
    let nvars = 2 * genus * block;
    let xs: Vec<PolyMatrix> = (0..genus).map(|i| symbolic_matrix(nvars, n, 2 * i * block)).collect();
    let ys: Vec<PolyMatrix> = (0..genus).map(|i| symbolic_matrix(nvars, n, (2 * i + 1) * block)).collect();
    let id: PolyMatrix = (0..n)
        .map(|i| (0..n).map(|j| Poly::constant(nvars, (i == j) as i64)).collect())
        .collect();
    let mut left = id;
    let mut dets = Poly::constant(nvars, 1);
    for i in 0..genus - 1 {
        let step = mat_mul(&mat_mul(&xs[i], &ys[i]), &mat_mul(&adjugate(&xs[i]), &adjugate(&ys[i])));
        left = mat_mul(&left, &step);
        dets = dets.mul(&det(&xs[i])).mul(&det(&ys[i]));
    }
    let g = genus - 1;
    let left = mat_mul(&left, &mat_mul(&xs[g], &ys[g]));
    let right = mat_scale(&mat_mul(&ys[g], &xs[g]), &dets);
    let rel = mat_sub(&left, &right);
    let mut even_names = Vec::new();
    for i in 0..genus {
        let idx = (genus > 1).then_some(i + 1);
        even_names.extend(matrix_names("x", n, idx));
        even_names.extend(matrix_names("y", n, idx));
    }
    let weight = 2 * n * (genus - 1) + 2;
    KoszulModel {
        label: format!("surface:GL{n},g={genus}"),
        even_names,
        odd_names: matrix_names("t", n, None),
        odd_weights: vec![weight; block],
        relations: rel.into_iter().flatten().collect(),
        localized_dets: xs.iter().chain(&ys).map(det).collect(),
        notes: vec![
            "relations cleared of inverses: right-multiplied by Y_g X_g and by the product of det(X_i) det(Y_i), i < g"
                .into(),
        ],
    }
}

/// Koszul model of `Σ_g` for `GL(n)` (and products of `GL`'s and tori):
/// `dΘ = Π [X_i, Y_i] - Id` with inverses cleared via adjugates.
pub fn surface_model(group: &AlgGroup, genus: usize) -> Result<KoszulModel, KoszulError> {
    if genus == 0 {
        return Err(KoszulError::Unsupported("genus 0".into()));
    }
    let parts = group
        .factors()
        .iter()
        .flat_map(|g| match g {
            AlgGroup::GL(n) => vec![Ok(gl_surface_factor(*n, genus))],
            AlgGroup::Torus(r) => (0..*r).map(|_| Ok(gl_surface_factor(1, genus))).collect(),
            g => vec![Err(KoszulError::Unsupported(format!("surface model for {g}")))],
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KoszulModel::merge(format!("surface:{group},g={genus}"), parts))
}

/// Homology of a Koszul model by homological degree and internal degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedBetti {
    pub model: String,
    pub max_internal_degree: usize,
    /// `betti[a][w]`: homological degree `a`, internal degree `w`.
    pub betti: Vec<Vec<usize>>,
    /// Dimensions of the chain groups, same indexing.
    pub chain_dims: Vec<Vec<usize>>,
    pub pre_localization: bool,
    pub notes: Vec<String>,
}

impl GradedBetti {
    pub fn get(&self, degree: usize, weight: usize) -> usize {
        self.betti.get(degree).and_then(|r| r.get(weight)).copied().unwrap_or(0)
    }

    /// Largest homological degree with a nonzero entry.
    pub fn top_degree(&self) -> Option<usize> {
        (0..self.betti.len()).rev().find(|&a| self.betti[a].iter().any(|&b| b > 0))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("homological_degree,internal_degree,dim,pre_localization\n");
        for (a, row) in self.betti.iter().enumerate() {
            for (w, b) in row.iter().enumerate() {
                out.push_str(&format!("{a},{w},{b},{}\n", self.pre_localization));
            }
        }
        out
    }
}

impl fmt::Display for GradedBetti {
    /// Rows are homological degrees, columns internal degrees.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (pre-localization)", self.model)?;
        let header: Vec<String> = (0..=self.max_internal_degree).map(|w| format!("{w:>6}")).collect();
        writeln!(f, "  a\\w {}", header.join(""))?;
        for (a, row) in self.betti.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|b| format!("{b:>6}")).collect();
            writeln!(f, "{a:>5} {}", cells.join(""))?;
        }
        Ok(())
    }
}

/// Exponent vectors of degree `k` in `n` variables, graded-lex descending.
fn monomials(n: usize, k: usize) -> Vec<Vec<u32>> {
    fn go(n: usize, k: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(k as u32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e as u32);
            go(n, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(vec![]);
        }
        return out;
    }
    go(n, k, &mut Vec::new(), &mut out);
    out
}

/// `C(n + k - 1, k)`, the number of monomials of degree `k` in `n` variables.
pub fn monomial_count(n: usize, k: usize) -> usize {
    if n == 0 {
        return (k == 0) as usize;
    }
    (0..k).fold(1usize, |acc, i| acc * (n + i) / (i + 1))
}

/// Homology of the (non-localized) Koszul complex for internal degrees
/// `0..=max_internal_degree`, one parallel job per internal degree.
pub fn truncated_homology<F: Field>(
    f: &F,
    model: &KoszulModel,
    max_internal_degree: usize,
    budget: usize,
) -> Result<GradedBetti, KoszulError> {
    let n_even = model.n_even_vars();
    let n_odd = model.n_odd_vars();
    // Odd subsets grouped by size; each as (sorted members, weight).
    let mut subsets: Vec<Vec<(Vec<usize>, usize)>> = vec![Vec::new(); n_odd + 1];
    for mask in 0u64..(1 << n_odd) {
        let members: Vec<usize> = (0..n_odd).filter(|&i| mask >> i & 1 == 1).collect();
        let w = members.iter().map(|&i| model.odd_weights[i]).sum();
        subsets[members.len()].push((members, w));
    }
    let piece_dim = |a: usize, w: usize| -> usize {
        subsets[a]
            .iter()
            .filter(|(_, sw)| *sw <= w)
            .map(|(_, sw)| monomial_count(n_even, w - sw))
            .sum()
    };
    let mut chain_dims = vec![vec![0; max_internal_degree + 1]; n_odd + 1];
    for w in 0..=max_internal_degree {
        for a in 0..=n_odd {
            let dim = piece_dim(a, w);
            if dim > budget {
                return Err(KoszulError::BudgetExceeded {
                    weight: w,
                    degree: a,
                    dim,
                    budget,
                });
            }
            chain_dims[a][w] = dim;
        }
    }
    let columns: Vec<Vec<usize>> = (0..=max_internal_degree)
        .into_par_iter()
        .map(|w| weight_homology(f, model, &subsets, w))
        .collect();
    let betti = (0..=n_odd).map(|a| columns.iter().map(|c| c[a]).collect()).collect();
    Ok(GradedBetti {
        model: model.label.clone(),
        max_internal_degree,
        betti,
        chain_dims,
        pre_localization: true,
        notes: model.notes.clone(),
    })
}

fn weight_homology<F: Field>(
    f: &F,
    model: &KoszulModel,
    subsets: &[Vec<(Vec<usize>, usize)>],
    w: usize,
) -> Vec<usize> {
    let n_even = model.n_even_vars();
    let mut mono_cache: HashMap<usize, (Vec<Vec<u32>>, HashMap<Vec<u32>, usize>)> = HashMap::new();
    // Basis of K_a(w): (subset index, monomial index) with offsets.
    struct Piece {
        offsets: HashMap<Vec<usize>, usize>,
        dim: usize,
    }
    let mut pieces = Vec::new();
    for group in subsets {
        let mut offsets = HashMap::new();
        let mut dim = 0;
        for (members, sw) in group.iter().filter(|(_, sw)| *sw <= w) {
            offsets.insert(members.clone(), dim);
            let k = w - sw;
            let entry = mono_cache.entry(k).or_insert_with(|| {
                let ms = monomials(n_even, k);
                let idx = ms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
                (ms, idx)
            });
            dim += entry.0.len();
        }
        pieces.push(Piece { offsets, dim });
    }
    let dims: Vec<usize> = pieces.iter().map(|p| p.dim).collect();
    let mut diffs = Vec::new();
    for a in 1..subsets.len() {
        let mut triplets = Vec::new();
        for (members, sw) in subsets[a].iter().filter(|(_, sw)| *sw <= w) {
            let col_base = pieces[a].offsets[members];
            let (src_monos, _) = &mono_cache[&(w - sw)];
            for (t, &s) in members.iter().enumerate() {
                let rel = &model.relations[s];
                if rel.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = members.iter().copied().filter(|&x| x != s).collect();
                let row_base = pieces[a - 1].offsets[&rest];
                let target_k = w - sw + model.odd_weights[s];
                let (_, tgt_index) = &mono_cache[&target_k];
                let sign = if t % 2 == 0 { 1 } else { -1 };
                for (mi, m) in src_monos.iter().enumerate() {
                    for (e, c) in rel.terms() {
                        let prod: Vec<u32> = m.iter().zip(e).map(|(x, y)| x + y).collect();
                        triplets.push((row_base + tgt_index[&prod], col_base + mi, f.from_i64(sign * c)));
                    }
                }
            }
        }
        diffs.push(SparseMatrix::from_triplets(f, dims[a - 1], dims[a], triplets));
    }
    let complex = ChainComplex::new(f, dims, diffs).expect("Koszul differential squares to zero");
    complex.homology(f).betti
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Ranks `C(r, i)`, `i = 0..=r`, of representation homology of `Σ_g` with
/// coefficients in a rank-`r` torus as a free module over the functions on
/// `G^{2g}`; zero above `r`.
pub fn hr_torus_closed_form(r: usize, genus: usize) -> Vec<u64> {
    assert!(genus >= 1, "genus must be positive");
    (0..=r as u64).map(|i| binom(r as u64, i)).collect()
}

/// Graded Betti numbers of a model with all relations zero: free of rank
/// `C(r, a)` in homological degree `a`, generated in internal degree
/// `a · odd_weight`, over a polynomial ring in `n_even` variables.
pub fn abelian_betti_closed_form(n_even: usize, r: usize, odd_weight: usize, a: usize, w: usize) -> u64 {
    let rank = hr_torus_closed_form(r, 1).get(a).copied().unwrap_or(0);
    match w.checked_sub(a * odd_weight) {
        Some(k) => rank * monomial_count(n_even, k) as u64,
        None => 0,
    }
}
