//! Seeded samplers for representations of the supported spaces.
//!
//! Sample `i` of a run with seed `s` uses its own ChaCha stream, so results
//! do not depend on how samples are scheduled across threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{coboundary_rank, validate, CotangentError, RepPoint};
use crate::exact::{DenseMatrix, Field};
use crate::fox::{BraidWord, Word};
use crate::liegroups::{AlgGroup, GroupElement};
use crate::spaces::SpaceModel;

/// The generator for sample `index` of a run seeded with `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn small_nonzero<F: Field>(f: &F, rng: &mut ChaCha8Rng, choices: &[i64]) -> F::Elem {
    loop {
        let v = f.from_i64(choices[rng.gen_range(0..choices.len())]);
        if !f.is_zero(&v) {
            return v;
        }
    }
}

fn random_factor<F: Field>(f: &F, g: &AlgGroup, rng: &mut ChaCha8Rng) -> DenseMatrix<F::Elem> {
    let n = g.matrix_size();
    match g {
        AlgGroup::Torus(_) => random_torus_factor(f, g, rng),
        _ => {
            let mut m = DenseMatrix::identity(f, n);
            if n > 1 {
                for _ in 0..2 * n + 1 {
                    let i = rng.gen_range(0..n);
                    let j = (i + rng.gen_range(1..n)) % n;
                    let mut e = DenseMatrix::identity(f, n);
                    e.set(i, j, small_nonzero(f, rng, &[-2, -1, 1, 2]));
                    m = m.mul(f, &e);
                }
            }
            if matches!(g, AlgGroup::GL(_)) {
                m = m.mul(f, &random_torus_factor(f, g, rng));
            }
            m
        }
    }
}

/// A diagonal element of the standard maximal torus of a simple factor.
fn random_torus_factor<F: Field>(f: &F, g: &AlgGroup, rng: &mut ChaCha8Rng) -> DenseMatrix<F::Elem> {
    let n = g.matrix_size();
    let mut diag: Vec<F::Elem> = (0..n).map(|_| small_nonzero(f, rng, &[-2, -1, 2, 3, 5])).collect();
    if matches!(g, AlgGroup::SL(_)) {
        let prod = diag[..n - 1].iter().fold(f.one(), |acc, x| f.mul(&acc, x));
        diag[n - 1] = f.inv(&prod).expect("nonzero");
    }
    DenseMatrix::diagonal(f, &diag)
}

fn assemble<F: Field>(f: &F, group: &AlgGroup, blocks: Vec<DenseMatrix<F::Elem>>) -> GroupElement<F::Elem> {
    GroupElement::new(f, group, blocks).expect("sampler produced a valid element")
}

/// A random element: products of small elementary matrices (times a small
/// diagonal for `GL`).
pub fn random_element<F: Field>(f: &F, group: &AlgGroup, rng: &mut ChaCha8Rng) -> GroupElement<F::Elem> {
    let blocks = group.factors().iter().map(|g| random_factor(f, g, rng)).collect();
    assemble(f, group, blocks)
}

/// A random element of the diagonal maximal torus.
pub fn random_torus_element<F: Field>(f: &F, group: &AlgGroup, rng: &mut ChaCha8Rng) -> GroupElement<F::Elem> {
    let blocks = group.factors().iter().map(|g| random_torus_factor(f, g, rng)).collect();
    assemble(f, group, blocks)
}

fn conjugate<F: Field>(f: &F, h: &GroupElement<F::Elem>, g: &GroupElement<F::Elem>) -> GroupElement<F::Elem> {
    h.mul(f, g).mul(f, &h.inverse(f))
}

/// `k` elements of one maximal torus, conjugated by a common random element.
pub fn commuting_tuple<F: Field>(
    f: &F,
    group: &AlgGroup,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<GroupElement<F::Elem>> {
    let h = random_element(f, group, rng);
    (0..k).map(|_| conjugate(f, &h, &random_torus_element(f, group, rng))).collect()
}

/// A representation of `π_1(Σ_g)` with generators `a_1, b_1, …`.
///
/// Slots are filled two handles at a time with `(a, b, h b h⁻¹, h a h⁻¹)`
/// where `h` is a power of `[b, a]`, whose commutators cancel; a leftover
/// handle gets a commuting pair. Pairs `(a, b)` are redrawn (up to 64
/// times) until their joint centralizer in `g` is the center, so these
/// samples are good representations. Abelian groups get independent
/// elements.
pub fn surface_rep<F: Field>(f: &F, group: &AlgGroup, genus: usize, rng: &mut ChaCha8Rng) -> RepPoint<F::Elem> {
    let assignment = if group.is_abelian() {
        (0..2 * genus).map(|_| random_torus_element(f, group, rng)).collect()
    } else if genus == 1 {
        commuting_tuple(f, group, 2, rng)
    } else {
        let mut out = Vec::with_capacity(2 * genus);
        let mut handles = genus;
        while handles >= 2 {
            let target = group.dim() - group.center_dim();
            let (mut a, mut b) = (random_element(f, group, rng), random_element(f, group, rng));
            for _ in 0..64 {
                if coboundary_rank(f, &[a.clone(), b.clone()]) == target {
                    break;
                }
                (a, b) = (random_element(f, group, rng), random_element(f, group, rng));
            }
            let c = b.mul(f, &a).mul(f, &b.inverse(f)).mul(f, &a.inverse(f));
            let h = c.pow(f, rng.gen_range(0..3));
            out.extend([a.clone(), b.clone(), conjugate(f, &h, &b), conjugate(f, &h, &a)]);
            handles -= 2;
        }
        if handles == 1 {
            out.extend(commuting_tuple(f, group, 2, rng));
        }
        out
    };
    RepPoint {
        group: group.clone(),
        assignment,
    }
}

/// `n` random elements, for free groups.
pub fn free_rep<F: Field>(f: &F, group: &AlgGroup, n: usize, rng: &mut ChaCha8Rng) -> RepPoint<F::Elem> {
    RepPoint {
        group: group.clone(),
        assignment: (0..n).map(|_| random_element(f, group, rng)).collect(),
    }
}

fn is_fixed<F: Field>(f: &F, braid: &BraidWord, rho: &RepPoint<F::Elem>) -> bool {
    validate(f, &SpaceModel::link(braid.clone()), rho).is_ok()
}

/// A representation of `F_n` fixed by the braid's Artin automorphism.
///
/// Families, chosen by `index`: all generators equal; commuting elements
/// constant on the cycles of the permutation; on three strands
/// `g_3 = (g_1 g_2)⁻¹` (fixed by central braids); on two strands a
/// conjugated pair satisfying `aba = bab`. A family whose candidate is not
/// fixed falls back to the commuting one.
pub fn link_rep<F: Field>(
    f: &F,
    group: &AlgGroup,
    braid: &BraidWord,
    index: u64,
    rng: &mut ChaCha8Rng,
) -> RepPoint<F::Elem> {
    let n = braid.strands();
    let make = |assignment| RepPoint {
        group: group.clone(),
        assignment,
    };
    let commuting = |rng: &mut ChaCha8Rng| {
        let perm = braid.permutation();
        let mut cycle_of = vec![usize::MAX; n];
        let mut cycles = 0;
        for s in 0..n {
            if cycle_of[s] != usize::MAX {
                continue;
            }
            let mut i = s;
            while cycle_of[i] == usize::MAX {
                cycle_of[i] = cycles;
                i = perm[i];
            }
            cycles += 1;
        }
        let values = commuting_tuple(f, group, cycles, rng);
        make(cycle_of.iter().map(|&c| values[c].clone()).collect())
    };
    let candidate = match index % 3 {
        0 => Some(make(vec![random_element(f, group, rng); n])),
        2 if n == 3 => {
            let g1 = random_element(f, group, rng);
            let g2 = random_element(f, group, rng);
            let g3 = g1.mul(f, &g2).inverse(f);
            Some(make(vec![g1, g2, g3]))
        }
        2 if n == 2 && matches!(group, AlgGroup::SL(2) | AlgGroup::GL(2)) => {
            let a = DenseMatrix::from_i64(f, &[vec![1, 1], vec![0, 1]]);
            let b = DenseMatrix::from_i64(f, &[vec![1, 0], vec![-1, 1]]);
            let h = random_element(f, group, rng);
            Some(make(vec![
                conjugate(f, &h, &assemble(f, group, vec![a])),
                conjugate(f, &h, &assemble(f, group, vec![b])),
            ]))
        }
        _ => None,
    };
    match candidate {
        Some(rho) if is_fixed(f, braid, &rho) => rho,
        _ => commuting(rng),
    }
}

/// All diagonal representations `γ ↦ diag(ζ^{a_1}, …)` with `ζ` a primitive
/// `p`-th root of unity, one per multiset of exponents (and `Σ a_i ≡ 0` for
/// `SL`). Needs a simple factor group and `ζ_p` in the field.
pub fn diagonal_root_reps<F: Field>(f: &F, group: &AlgGroup, p: u64) -> Result<Vec<GroupElement<F::Elem>>, CotangentError> {
    let no_sampler = |reason: &str| CotangentError::NoSampler {
        space: format!("diagonal p-th roots, p = {p}"),
        group: group.to_string(),
        reason: reason.to_string(),
    };
    if matches!(group, AlgGroup::Product(_)) {
        return Err(no_sampler("products are not enumerated"));
    }
    let zeta = f.root_of_unity(p).ok_or_else(|| no_sampler(&format!("{} has no primitive root of unity", f.name())))?;
    let powers: Vec<F::Elem> = (0..p).map(|k| f.pow(&zeta, k)).collect();
    let n = group.matrix_size();
    let mut out = Vec::new();
    let mut exps = vec![0u64; n];
    loop {
        let sl_ok = !matches!(group, AlgGroup::SL(_)) || exps.iter().sum::<u64>() % p == 0;
        if sl_ok {
            let diag: Vec<F::Elem> = exps.iter().map(|&e| powers[e as usize].clone()).collect();
            out.push(assemble(f, group, vec![DenseMatrix::diagonal(f, &diag)]));
        }
        // Next nondecreasing exponent tuple.
        let Some(pos) = (0..n).rev().find(|&i| exps[i] + 1 < p) else { break };
        let v = exps[pos] + 1;
        exps[pos..].iter_mut().for_each(|e| *e = v);
    }
    Ok(out)
}

/// Sample `index` of a seeded run for a space.
pub fn sample_rep<F: Field>(
    f: &F,
    x: &SpaceModel,
    group: &AlgGroup,
    seed: u64,
    index: u64,
) -> Result<RepPoint<F::Elem>, CotangentError> {
    let mut rng = rng_for(seed, index);
    let no_sampler = |reason: &str| CotangentError::NoSampler {
        space: x.to_string(),
        group: group.to_string(),
        reason: reason.to_string(),
    };
    match x {
        SpaceModel::Surface { genus } => Ok(surface_rep(f, group, *genus, &mut rng)),
        SpaceModel::WedgeCircles { n } => Ok(free_rep(f, group, *n, &mut rng)),
        SpaceModel::LinkComplement { braid } => Ok(link_rep(f, group, braid, index, &mut rng)),
        SpaceModel::LensSpace { p, .. } | SpaceModel::CyclicGroupSpace { p } => {
            let reps = diagonal_root_reps(f, group, *p)?;
            let g = reps[rng.gen_range(0..reps.len())].clone();
            let h = random_element(f, group, &mut rng);
            Ok(RepPoint {
                group: group.clone(),
                assignment: vec![conjugate(f, &h, &g)],
            })
        }
        SpaceModel::ComplexProjective { .. } => Ok(RepPoint {
            group: group.clone(),
            assignment: vec![],
        }),
        SpaceModel::FinitePresentation { presentation, .. } => {
            // Commuting tuples satisfy every relator with zero exponent sums.
            let n = presentation.n_generators;
            let balanced = presentation
                .relators
                .iter()
                .all(|r: &Word| r.exponent_sums(n).iter().all(|&e| e == 0));
            if !balanced {
                return Err(no_sampler("relators with nonzero exponent sums; supply the representation"));
            }
            Ok(RepPoint {
                group: group.clone(),
                assignment: commuting_tuple(f, group, n, &mut rng),
            })
        }
    }
}

/// `count` samples in parallel; deterministic for a given seed.
pub fn sample_reps<F: Field>(
    f: &F,
    x: &SpaceModel,
    group: &AlgGroup,
    seed: u64,
    count: usize,
) -> Result<Vec<RepPoint<F::Elem>>, CotangentError> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| sample_rep(f, x, group, seed, i))
        .collect()
}

/// `tr [a, b] != 2`: the pair generates an irreducible subgroup of `SL_2`.
pub fn is_irreducible_sl2_pair<F: Field>(f: &F, a: &GroupElement<F::Elem>, b: &GroupElement<F::Elem>) -> bool {
    let c = a.mul(f, b).mul(f, &a.inverse(f)).mul(f, &b.inverse(f)).matrix(f);
    let tr = f.add(c.get(0, 0), c.get(1, 1));
    tr != f.from_i64(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Cyclotomic, PrimeField, Rationals};

    #[test]
    fn samplers_are_deterministic_and_valid() {
        let q = Rationals;
        for s in ["surface:g=1", "surface:g=2", "surface:g=3", "wedge:n=2", "link:braid=(s1 s2)^3,strands=3"] {
            let x: SpaceModel = s.parse().unwrap();
            for g in [AlgGroup::GL(1), AlgGroup::GL(2), AlgGroup::SL(2), AlgGroup::Torus(2)] {
                let a = sample_reps(&q, &x, &g, 7, 6).unwrap();
                let b = sample_reps(&q, &x, &g, 7, 6).unwrap();
                assert_eq!(a, b);
                for rho in &a {
                    validate(&q, &x, rho).unwrap_or_else(|e| panic!("{s} {g}: {e}"));
                }
            }
        }
    }

    #[test]
    fn link_families_are_fixed() {
        let f = PrimeField::new(101).unwrap();
        for (n, b) in [(2, "s1"), (3, "(s1 s2)^3"), (2, "s1^3"), (4, "s1 s3 s2")] {
            let braid = BraidWord::parse(n, b).unwrap();
            let x = SpaceModel::link(braid.clone());
            for g in [AlgGroup::SL(2), AlgGroup::GL(2), AlgGroup::Torus(1)] {
                for i in 0..6 {
                    let rho = sample_rep(&f, &x, &g, 3, i).unwrap();
                    assert!(is_fixed(&f, &braid, &rho), "{b} {g} sample {i}");
                }
            }
        }
    }

    #[test]
    fn special_link_families_are_used() {
        let q = Rationals;
        let sl2 = AlgGroup::SL(2);
        let trefoil = BraidWord::parse(2, "s1^3").unwrap();
        let rho = link_rep(&q, &sl2, &trefoil, 2, &mut rng_for(1, 2));
        assert!(rho.assignment[0] != rho.assignment[1]);
        let twist = BraidWord::parse(3, "(s1 s2)^3").unwrap();
        let rho = link_rep(&q, &sl2, &twist, 2, &mut rng_for(1, 2));
        let prod = rho.assignment.iter().fold(GroupElement::identity(&q, &sl2), |acc, g| acc.mul(&q, g));
        assert!(prod.is_identity(&q));
        assert!(is_irreducible_sl2_pair(&q, &rho.assignment[0], &rho.assignment[1]));
    }

    #[test]
    fn diagonal_root_enumeration() {
        let k = Cyclotomic::new(5);
        assert_eq!(diagonal_root_reps(&k, &AlgGroup::GL(2), 5).unwrap().len(), 15);
        assert_eq!(diagonal_root_reps(&k, &AlgGroup::SL(2), 5).unwrap().len(), 3);
        assert_eq!(diagonal_root_reps(&k, &AlgGroup::GL(1), 5).unwrap().len(), 5);
        assert!(diagonal_root_reps(&Rationals, &AlgGroup::GL(2), 5).is_err());
        let two = diagonal_root_reps(&Rationals, &AlgGroup::GL(2), 2).unwrap();
        assert_eq!(two.len(), 3);
    }

    #[test]
    fn presentation_sampler_needs_balanced_relators() {
        let q = Rationals;
        let torus_like: SpaceModel = "pres:gens=3;rels=a b A B, a c A C".parse().unwrap();
        let rho = sample_rep(&q, &torus_like, &AlgGroup::GL(2), 1, 0).unwrap();
        validate(&q, &torus_like, &rho).unwrap();
        let heis: SpaceModel = "pres:gens=3;rels=a b A B, a c A C, c b C B A".parse().unwrap();
        assert!(matches!(
            sample_rep(&q, &heis, &AlgGroup::SL(2), 1, 0),
            Err(CotangentError::NoSampler { .. })
        ));
    }
}
