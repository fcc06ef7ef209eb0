//! The `E²` page `Sym^w(H_*)` of the completion spectral sequence, computed
//! from Betti numbers in characteristic zero, and its lacunarity.
//!
//! Over a field of characteristic zero a complex is formal, so derived
//! symmetric powers depend only on the homology dimensions: `Sym(H_*)` is
//! the free graded-commutative algebra, polynomial on even-degree classes
//! and exterior on odd-degree ones.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("cannot parse graded dimensions {input:?}: {reason}")]
pub struct GradedDimsError {
    pub input: String,
    pub reason: String,
}

/// Finitely supported `degree -> dimension`; zero entries are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GradedDims(BTreeMap<usize, u64>);

impl GradedDims {
    pub fn new(entries: impl IntoIterator<Item = (usize, u64)>) -> Self {
        let mut m = BTreeMap::new();
        for (d, n) in entries {
            *m.entry(d).or_insert(0) += n;
        }
        m.retain(|_, n| *n > 0);
        Self(m)
    }

    /// From Betti numbers indexed by degree.
    pub fn from_betti(betti: &[usize]) -> Self {
        Self::new(betti.iter().enumerate().map(|(d, &b)| (d, b as u64)))
    }

    pub fn get(&self, degree: usize) -> u64 {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.0.iter().map(|(d, n)| (*d, *n))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }
}

impl FromStr for GradedDims {
    type Err = GradedDimsError;

    /// `0:2,2:2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| GradedDimsError {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let mut entries = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (d, n) = part.split_once(':').ok_or_else(|| err("expected degree:dim"))?;
            let d = d.trim().parse().map_err(|_| err("bad degree"))?;
            let n = n.trim().parse().map_err(|_| err("bad dimension"))?;
            entries.push((d, n));
        }
        Ok(Self::new(entries))
    }
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(d, n)| format!("{d}:{n}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `table[w][n] = dim Sym^w(H)_n` for `w <= w_max`, `n <= n_max`.
fn sym_table(h: &GradedDims, w_max: usize, n_max: usize) -> Vec<Vec<u64>> {
    let mut a = vec![vec![0u64; n_max + 1]; w_max + 1];
    a[0][0] = 1;
    let add = |x: u64, y: u64| x.checked_add(y).expect("dimension exceeds u64");
    for (d, count) in h.iter() {
        for _ in 0..count {
            if d % 2 == 0 {
                // Multiply by 1/(1 - s t^d).
                for w in 1..=w_max {
                    for n in d..=n_max {
                        a[w][n] = add(a[w][n], a[w - 1][n - d]);
                    }
                }
            } else {
                // Multiply by (1 + s t^d).
                for w in (1..=w_max).rev() {
                    for n in (d..=n_max).rev() {
                        a[w][n] = add(a[w][n], a[w - 1][n - d]);
                    }
                }
            }
        }
    }
    a
}

/// `dim Sym^p(H)` by total degree, up to the largest degree it can reach.
pub fn derived_sym_dims(h: &GradedDims, p: usize) -> GradedDims {
    let n_max = p * h.max_degree().unwrap_or(0);
    let t = sym_table(h, p, n_max);
    GradedDims::new(t[p].iter().enumerate().map(|(n, &v)| (n, v)))
}

/// One nonzero entry of the page. `weight` is the symmetric power and
/// `degree` the total degree; `(shifted_p, shifted_q) = (degree - weight,
/// weight)` are the coordinates of the reindexed filtration, concentrated in
/// `q >= 0, p >= -q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E2Entry {
    pub weight: usize,
    pub degree: usize,
    pub shifted_p: i64,
    pub shifted_q: usize,
    pub dim: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E2Page {
    pub input: GradedDims,
    pub p_max: usize,
    pub n_max: usize,
    /// Nonzero entries ordered by `(weight, degree)`.
    pub entries: Vec<E2Entry>,
    pub lacunary_modulus: Option<usize>,
    /// Always true: the page is computed from Betti numbers alone.
    pub formality_assumed: bool,
}

impl E2Page {
    pub fn get(&self, weight: usize, degree: usize) -> u64 {
        self.entries
            .iter()
            .find(|e| e.weight == weight && e.degree == degree)
            .map_or(0, |e| e.dim)
    }

    /// Total degrees carrying a nonzero entry.
    pub fn support(&self) -> BTreeSet<usize> {
        self.entries.iter().map(|e| e.degree).collect()
    }

    /// `weight,degree,shifted_p,shifted_q,dim` rows for every cell of the
    /// window, zeros included.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight,degree,shifted_p,shifted_q,dim\n");
        for w in 0..=self.p_max {
            for n in 0..=self.n_max {
                out.push_str(&format!("{w},{n},{},{w},{}\n", n as i64 - w as i64, self.get(w, n)));
            }
        }
        out
    }
}

/// All `Sym^w(H)_n` with `w <= p_max`, `n <= n_max`.
pub fn e2_page(h: &GradedDims, p_max: usize, n_max: usize) -> E2Page {
    let t = sym_table(h, p_max, n_max);
    let mut entries = Vec::new();
    for (w, row) in t.iter().enumerate() {
        for (n, &dim) in row.iter().enumerate() {
            if dim > 0 {
                entries.push(E2Entry {
                    weight: w,
                    degree: n,
                    shifted_p: n as i64 - w as i64,
                    shifted_q: w,
                    dim,
                });
            }
        }
    }
    let g = entries
        .iter()
        .map(|e| e.degree)
        .filter(|&n| n > 0)
        .fold(0usize, |g, n| g.gcd(&n));
    E2Page {
        input: h.clone(),
        p_max,
        n_max,
        entries,
        lacunary_modulus: (g >= 2).then_some(g),
        formality_assumed: true,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerationReport {
    pub degenerate: bool,
    pub reason: String,
    /// Degrees where the abutment is nonzero when the page degenerates;
    /// empty otherwise.
    pub predicted_nonzero_degrees: Vec<usize>,
    /// Total degrees with a nonzero `E²` entry (an upper bound in general).
    pub e2_support: Vec<usize>,
}

/// Differentials lower total degree by one, so a page supported in a single
/// residue class modulo some `d >= 2` has none.
pub fn degeneration_report(page: &E2Page) -> DegenerationReport {
    let support: Vec<usize> = page.support().into_iter().collect();
    if support.iter().all(|&n| n == 0) {
        return DegenerationReport {
            degenerate: true,
            reason: "no entries in positive total degree".into(),
            predicted_nonzero_degrees: support.clone(),
            e2_support: support,
        };
    }
    match page.lacunary_modulus {
        Some(m) => DegenerationReport {
            degenerate: true,
            reason: format!("lacunary: all nonzero total degrees are multiples of {m}"),
            predicted_nonzero_degrees: (0..=page.n_max).step_by(m).collect(),
            e2_support: support,
        },
        None => DegenerationReport {
            degenerate: false,
            reason: "differentials not excluded".into(),
            predicted_nonzero_degrees: Vec::new(),
            e2_support: support,
        },
    }
}
