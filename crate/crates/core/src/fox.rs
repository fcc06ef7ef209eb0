//! Free-group words, Fox free differential calculus and the Artin action of
//! braid groups on free groups.
//!
//! Fox derivatives are left derivations of `Z[F_n]`:
//! `∂_i(x_j) = δ_ij`, `∂_i(uv) = ∂_i(u) + u·∂_i(v)`, `∂_i(x_i⁻¹) = -x_i⁻¹`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{DenseMatrix, Field, SparseMatrix};
use crate::liegroups::{adjoint, AlgGroup, GroupElement};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FoxError {
    #[error("cannot parse {what} {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
    #[error("generator {generator} is not assigned by the representation ({assigned} assigned)")]
    MissingGenerator { generator: usize, assigned: usize },
    #[error("relator {index} ({relator}) does not evaluate to the identity")]
    RelatorViolated { index: usize, relator: String },
    #[error("generator index {generator} out of range for rank {rank}")]
    OutOfRange { generator: usize, rank: usize },
}

/// A letter `x_g` or `x_g⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Self {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// Exponent `±1`.
    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A word in a free group. Stored as written; [`Word::reduced`] gives the
/// freely reduced normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Self(vec![Letter::new(g, false)])
    }

    pub fn generator_inverse(g: usize) -> Self {
        Self(vec![Letter::new(g, true)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, rhs: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&rhs.0);
        Word(v).reduced()
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::new();
        for _ in 0..e.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v).reduced()
    }

    /// The commutator `[u, v] = u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    /// Exponent sum of each generator (the image in the abelianization).
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut s = vec![0; rank];
        for l in &self.0 {
            s[l.generator] += l.exponent();
        }
        s
    }

    /// Applies the endomorphism `x_g ↦ images[g]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut v = Vec::new();
        for l in &self.0 {
            let img = &images[l.generator];
            if l.inverse {
                v.extend(img.inverse().0);
            } else {
                v.extend_from_slice(&img.0);
            }
        }
        Word(v).reduced()
    }

    /// Parses space-separated letters: `a`..`z` (uppercase for inverses),
    /// `x3`/`X3` (1-based), optionally with an exponent such as `a^3` or
    /// `b^-2`. `1` or an empty string is the identity.
    pub fn parse(s: &str) -> Result<Word, FoxError> {
        let err = |reason: &str| FoxError::Parse {
            what: "word",
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.parse::<i64>().map_err(|_| err("bad exponent"))?),
                None => (tok, 1),
            };
            let mut chars = base.chars();
            let c = chars.next().ok_or_else(|| err("empty token"))?;
            let rest: String = chars.collect();
            let (generator, inverse) = if rest.is_empty() && c.is_ascii_alphabetic() {
                (c.to_ascii_lowercase() as usize - 'a' as usize, c.is_ascii_uppercase())
            } else if (c == 'x' || c == 'X') && !rest.is_empty() {
                let k: usize = rest.parse().map_err(|_| err("bad generator index"))?;
                if k == 0 {
                    return Err(err("generator indices start at 1"));
                }
                (k - 1, c == 'X')
            } else {
                return Err(err(&format!("unrecognized token {tok:?}")));
            };
            let letter = Letter::new(generator, inverse);
            let (letter, count) = if exp < 0 {
                (letter.inv(), exp.unsigned_abs())
            } else {
                (letter, exp as u64)
            };
            letters.extend(std::iter::repeat_n(letter, count as usize));
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let toks: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                if l.generator < 26 {
                    let c = (b'a' + l.generator as u8) as char;
                    if l.inverse {
                        c.to_ascii_uppercase().to_string()
                    } else {
                        c.to_string()
                    }
                } else {
                    format!("{}{}", if l.inverse { 'X' } else { 'x' }, l.generator + 1)
                }
            })
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// An element of the integral group ring `Z[F_n]`, kept on reduced words
/// with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(&Word::identity())
    }

    pub fn from_word(w: &Word) -> Self {
        Self::from_terms([(1, w.clone())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Word)>) -> Self {
        let mut out = Self::zero();
        for (c, w) in terms {
            out.add_term(c, &w);
        }
        out
    }

    pub fn add_term(&mut self, c: i64, w: &Word) {
        if c == 0 {
            return;
        }
        match self.terms.entry(w.reduced()) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(c, w);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(w, c)| (c * k, w.clone())))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in self.terms() {
            for (v, b) in rhs.terms() {
                out.add_term(a * b, &u.mul(v));
            }
        }
        out
    }

    /// Sum of coefficients.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (a, w.is_empty()) {
                (1, _) => write!(f, "{w}")?,
                (_, true) => write!(f, "{a}")?,
                _ => write!(f, "{a}*{w}")?,
            }
        }
        Ok(())
    }
}

/// The Fox derivative `∂_i(w)`, computed on the reduced form of `w`.
pub fn fox_derivative(w: &Word, i: usize) -> GroupRingElement {
    let w = w.reduced();
    let mut out = GroupRingElement::zero();
    let mut prefix = Word::identity();
    for &l in w.letters() {
        if l.generator == i {
            if l.inverse {
                // -prefix · x_i⁻¹
                out.add_term(-1, &prefix.mul(&Word(vec![l])));
            } else {
                out.add_term(1, &prefix);
            }
        }
        prefix.0.push(l);
    }
    out
}

/// A finite presentation `⟨x_1..x_n | r_1..r_m⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub n_generators: usize,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(n_generators: usize, relators: Vec<Word>) -> Result<Self, FoxError> {
        for r in &relators {
            if let Some(g) = r.max_generator().filter(|&g| g >= n_generators) {
                return Err(FoxError::OutOfRange {
                    generator: g,
                    rank: n_generators,
                });
            }
        }
        Ok(Self { n_generators, relators })
    }

    /// `⟨x, y | x^p y^-q⟩`, the torus-knot group.
    pub fn torus_knot(p: u32, q: u32) -> Self {
        let x = Word::generator(0).pow(p as i64);
        let y = Word::generator(1).pow(-(q as i64));
        Self {
            n_generators: 2,
            relators: vec![x.mul(&y)],
        }
    }

    /// The Heisenberg group `⟨α, β, γ | [α,β], [α,γ], [γ,β]α⁻¹⟩`.
    pub fn heisenberg() -> Self {
        let (a, b, c) = (Word::generator(0), Word::generator(1), Word::generator(2));
        Self {
            n_generators: 3,
            relators: vec![
                Word::commutator(&a, &b),
                Word::commutator(&a, &c),
                Word::commutator(&c, &b).mul(&a.inverse()),
            ],
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(ToString::to_string).collect();
        write!(f, "<{} generators | {}>", self.n_generators, rels.join(", "))
    }
}

/// Adjoint matrices of the generators and their inverses under a
/// representation, for repeated word evaluation.
pub struct AdjointTable<'a, F: Field> {
    field: &'a F,
    rep: &'a [GroupElement<F::Elem>],
    ad: Vec<(DenseMatrix<F::Elem>, DenseMatrix<F::Elem>)>,
    dim: usize,
}

impl<'a, F: Field> AdjointTable<'a, F> {
    pub fn new(field: &'a F, group: &AlgGroup, rep: &'a [GroupElement<F::Elem>]) -> Self {
        let ad = rep
            .iter()
            .map(|g| (adjoint(field, g), adjoint(field, &g.inverse(field))))
            .collect();
        Self {
            field,
            rep,
            ad,
            dim: group.dim(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, w: &Word) -> Result<(), FoxError> {
        match w.max_generator() {
            Some(g) if g >= self.rep.len() => Err(FoxError::MissingGenerator {
                generator: g,
                assigned: self.rep.len(),
            }),
            _ => Ok(()),
        }
    }

    /// `Ad(ρ(w))`.
    pub fn word(&self, w: &Word) -> Result<DenseMatrix<F::Elem>, FoxError> {
        self.check(w)?;
        let f = self.field;
        let mut acc = DenseMatrix::identity(f, self.dim);
        for l in w.letters() {
            let (a, ai) = &self.ad[l.generator];
            acc = acc.mul(f, if l.inverse { ai } else { a });
        }
        Ok(acc)
    }

    /// `Σ c · Ad(ρ(w))`.
    pub fn element(&self, e: &GroupRingElement) -> Result<DenseMatrix<F::Elem>, FoxError> {
        let f = self.field;
        let mut acc = DenseMatrix::zeros(f, self.dim, self.dim);
        for (w, c) in e.terms() {
            acc = acc.add(f, &self.word(w)?.scale(f, &f.from_i64(c)));
        }
        Ok(acc)
    }
}

/// `ρ(w)` as a group element.
pub fn evaluate_word<F: Field>(
    f: &F,
    group: &AlgGroup,
    w: &Word,
    rep: &[GroupElement<F::Elem>],
) -> Result<GroupElement<F::Elem>, FoxError> {
    let mut acc = GroupElement::identity(f, group);
    for l in w.letters() {
        let g = rep.get(l.generator).ok_or(FoxError::MissingGenerator {
            generator: l.generator,
            assigned: rep.len(),
        })?;
        acc = acc.mul(f, &if l.inverse { g.inverse(f) } else { g.clone() });
    }
    Ok(acc)
}

/// Evaluates a group-ring element through `Ad ∘ ρ`.
pub fn evaluate<F: Field>(
    f: &F,
    group: &AlgGroup,
    e: &GroupRingElement,
    rep: &[GroupElement<F::Elem>],
) -> Result<DenseMatrix<F::Elem>, FoxError> {
    AdjointTable::new(f, group, rep).element(e)
}

/// True iff every relator evaluates to the identity.
pub fn check_representation<F: Field>(
    f: &F,
    group: &AlgGroup,
    p: &Presentation,
    rep: &[GroupElement<F::Elem>],
) -> bool {
    first_violated_relator(f, group, p, rep).is_none() && rep.len() >= p.n_generators
}

fn first_violated_relator<F: Field>(
    f: &F,
    group: &AlgGroup,
    p: &Presentation,
    rep: &[GroupElement<F::Elem>],
) -> Option<usize> {
    p.relators
        .iter()
        .position(|r| !evaluate_word(f, group, r, rep).is_ok_and(|g| g.is_identity(f)))
}

/// The evaluated Fox Jacobian: block `(j, i)` is `Ad(ρ(∂_i r_j))`, so the
/// matrix maps `g^{#gen} → g^{#rel}` and its kernel is the cocycle space
/// `Z¹(Γ, Ad ρ)`.
pub fn fox_jacobian<F: Field>(
    f: &F,
    group: &AlgGroup,
    p: &Presentation,
    rep: &[GroupElement<F::Elem>],
) -> Result<SparseMatrix<F::Elem>, FoxError> {
    if rep.len() < p.n_generators {
        return Err(FoxError::MissingGenerator {
            generator: rep.len(),
            assigned: rep.len(),
        });
    }
    if let Some(index) = first_violated_relator(f, group, p, rep) {
        return Err(FoxError::RelatorViolated {
            index,
            relator: p.relators[index].to_string(),
        });
    }
    let table = AdjointTable::new(f, group, rep);
    let d = group.dim();
    let blocks: Vec<Vec<Option<SparseMatrix<F::Elem>>>> = p
        .relators
        .par_iter()
        .map(|r| {
            (0..p.n_generators)
                .map(|i| {
                    let m = table.element(&fox_derivative(r, i))?;
                    Ok((!m.is_zero(f)).then(|| m.to_sparse(f)))
                })
                .collect::<Result<Vec<_>, FoxError>>()
        })
        .collect::<Result<_, _>>()?;
    let rs = vec![d; p.relators.len()];
    let cs = vec![d; p.n_generators];
    Ok(SparseMatrix::from_blocks(f, &rs, &cs, &blocks))
}

/// A braid word `σ_{i_1}^{±1} … σ_{i_k}^{±1}` on a number of strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    /// `(i, inverse)` with `1 <= i < strands`.
    letters: Vec<(usize, bool)>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<(usize, bool)>) -> Result<Self, FoxError> {
        let bad = |reason: String| FoxError::Parse {
            what: "braid",
            input: format!("{letters:?} on {strands} strands"),
            reason,
        };
        if strands < 2 {
            return Err(bad("need at least 2 strands".into()));
        }
        if let Some((i, _)) = letters.iter().find(|(i, _)| *i == 0 || *i >= strands) {
            return Err(bad(format!("generator s{i} out of range")));
        }
        Ok(Self { strands, letters })
    }

    /// Parses `s1 s2 S1` (capital for inverse); `^k` repeats a letter and a
    /// parenthesized group may be raised to a power, e.g. `(s1 s2)^3`.
    pub fn parse(strands: usize, s: &str) -> Result<Self, FoxError> {
        let letters = parse_braid_letters(s).map_err(|reason| FoxError::Parse {
            what: "braid",
            input: s.to_string(),
            reason,
        })?;
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[(usize, bool)] {
        &self.letters
    }

    pub fn concat(&self, rhs: &BraidWord) -> BraidWord {
        assert_eq!(self.strands, rhs.strands);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    /// Underlying permutation `π` with `β(x_i)` conjugate to `x_{π(i)}`
    /// (0-based).
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &(i, _) in &self.letters {
            // perm ← perm ∘ (i-1 i)
            perm.swap(i - 1, i);
        }
        perm
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let toks: Vec<String> = self
            .letters
            .iter()
            .map(|(i, inv)| format!("{}{i}", if *inv { 'S' } else { 's' }))
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

fn parse_braid_letters(s: &str) -> Result<Vec<(usize, bool)>, String> {
    fn power(rest: &str) -> Result<(usize, &str), String> {
        match rest.strip_prefix('^') {
            Some(r) => {
                let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
                let k = r[..end].parse().map_err(|_| "bad exponent".to_string())?;
                Ok((k, &r[end..]))
            }
            None => Ok((1, rest)),
        }
    }
    let mut out = Vec::new();
    let mut rest = s.trim_start();
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('(') {
            let close = r.find(')').ok_or("unbalanced parenthesis")?;
            let inner = parse_braid_letters(&r[..close])?;
            let (k, r2) = power(&r[close + 1..])?;
            for _ in 0..k {
                out.extend_from_slice(&inner);
            }
            rest = r2.trim_start();
            continue;
        }
        let c = rest.chars().next().unwrap();
        if c != 's' && c != 'S' {
            return Err(format!("unexpected {c:?}"));
        }
        let r = &rest[1..];
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        let i: usize = r[..end].parse().map_err(|_| "missing generator index".to_string())?;
        let (k, r2) = power(&r[end..])?;
        for _ in 0..k {
            out.push((i, c == 'S'));
        }
        rest = r2.trim_start();
    }
    Ok(out)
}

/// Images of `x_1..x_n` under a single Artin generator `σ_i^{±1}`.
fn artin_letter(n: usize, i: usize, inverse: bool) -> Vec<Word> {
    let (a, b) = (i - 1, i);
    let mut images: Vec<Word> = (0..n).map(Word::generator).collect();
    let xa = Word::generator(a);
    let xb = Word::generator(b);
    if inverse {
        images[a] = xb.clone();
        images[b] = xb.inverse().mul(&xa).mul(&xb);
    } else {
        images[a] = xa.mul(&xb).mul(&xa.inverse());
        images[b] = xa;
    }
    images
}

/// The Artin automorphism of `F_n` for a braid:
/// `σ_i: x_i ↦ x_i x_{i+1} x_i⁻¹, x_{i+1} ↦ x_i`, and a word acts as the
/// composite `φ_{i_1} ∘ … ∘ φ_{i_k}`.
pub fn artin_image(beta: &BraidWord) -> Vec<Word> {
    let n = beta.strands;
    let mut images: Vec<Word> = (0..n).map(Word::generator).collect();
    for &(i, inv) in &beta.letters {
        let step = artin_letter(n, i, inv);
        images = step.iter().map(|w| w.substitute(&images)).collect();
    }
    images
}
