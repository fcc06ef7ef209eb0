//! Cotangent complexes `T*_ρ DRep_G(X)` at a representation, their homology,
//! Euler characteristics, tangent dimensions and vanishing certificates.

pub mod sampling;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{ChainComplex, DenseMatrix, ExactError, Field, HomologyReport, SparseMatrix};
use crate::fox::{artin_image, evaluate_word, fox_derivative, fox_jacobian, AdjointTable, FoxError};
use crate::liegroups::{adjoint, AlgGroup, GroupElement};
use crate::spaces::{CotangentTemplate, SpaceError, SpaceModel, DEFAULT_CUTOFF};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CotangentError {
    #[error(transparent)]
    Fox(#[from] FoxError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("{space} needs {expected} group elements, got {got}")]
    WrongArity { space: String, expected: usize, got: usize },
    #[error("element {index} does not belong to {group}")]
    GroupMismatch { index: usize, group: String },
    #[error("ρ(γ)^{p} is not the identity")]
    OrderViolated { p: u64 },
    #[error("ρ is not fixed by the braid: ρ(β(x_{strand})) != ρ(x_{strand})", strand = .strand + 1)]
    FixedPointViolated { strand: usize },
    #[error("no sampler for {space} in {group}: {reason}")]
    NoSampler { space: String, group: String, reason: String },
}

/// A representation: one group element per generator of the space's
/// presentation, per strand of a braid, or the single generator `γ` of a
/// cyclic fundamental group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepPoint<E> {
    pub group: AlgGroup,
    pub assignment: Vec<GroupElement<E>>,
}

impl<E: Clone + PartialEq> RepPoint<E> {
    pub fn new(group: AlgGroup, assignment: Vec<GroupElement<E>>) -> Result<Self, CotangentError> {
        if let Some(index) = assignment.iter().position(|g| *g.group() != group) {
            return Err(CotangentError::GroupMismatch {
                index,
                group: group.to_string(),
            });
        }
        Ok(Self { group, assignment })
    }

    pub fn trivial<F: Field<Elem = E>>(f: &F, group: &AlgGroup, n: usize) -> Self {
        Self {
            group: group.clone(),
            assignment: vec![GroupElement::identity(f, group); n],
        }
    }

    pub fn format<F: Field<Elem = E>>(&self, f: &F) -> Vec<String> {
        self.assignment.iter().map(|g| g.format(f)).collect()
    }

    pub fn is_trivial<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.assignment.iter().all(|g| g.is_identity(f))
    }
}

/// Number of group elements a representation of `x` assigns.
pub fn arity(x: &SpaceModel) -> usize {
    match x {
        SpaceModel::LinkComplement { braid } => braid.strands(),
        _ => x.fundamental_group().presentation.n_generators,
    }
}

/// Checks that `ρ` is a representation of the space's fundamental group in
/// the form its template consumes.
pub fn validate<F: Field>(f: &F, x: &SpaceModel, rho: &RepPoint<F::Elem>) -> Result<(), CotangentError> {
    let expected = arity(x);
    if rho.assignment.len() != expected {
        return Err(CotangentError::WrongArity {
            space: x.to_string(),
            expected,
            got: rho.assignment.len(),
        });
    }
    match x {
        SpaceModel::LinkComplement { braid } => {
            for (strand, img) in artin_image(braid).iter().enumerate() {
                let g = evaluate_word(f, &rho.group, img, &rho.assignment)?;
                if g != rho.assignment[strand] {
                    return Err(CotangentError::FixedPointViolated { strand });
                }
            }
            Ok(())
        }
        SpaceModel::LensSpace { p, .. } | SpaceModel::CyclicGroupSpace { p } => {
            if rho.assignment[0].pow(f, *p).is_identity(f) {
                Ok(())
            } else {
                Err(CotangentError::OrderViolated { p: *p })
            }
        }
        _ => {
            let p = x.fundamental_group().presentation;
            match p
                .relators
                .iter()
                .position(|r| !evaluate_word(f, &rho.group, r, &rho.assignment).is_ok_and(|g| g.is_identity(f)))
            {
                Some(index) => Err(FoxError::RelatorViolated {
                    index,
                    relator: p.relators[index].to_string(),
                }
                .into()),
                None => Ok(()),
            }
        }
    }
}

/// `Σ_{r<p} X^r`.
fn norm_map<F: Field>(f: &F, x: &DenseMatrix<F::Elem>, p: u64) -> DenseMatrix<F::Elem> {
    let mut acc = DenseMatrix::zeros(f, x.rows(), x.cols());
    let mut power = DenseMatrix::identity(f, x.rows());
    for _ in 0..p {
        acc = acc.add(f, &power);
        power = power.mul(f, x);
    }
    acc
}

fn minus_identity<F: Field>(f: &F, m: &DenseMatrix<F::Elem>) -> DenseMatrix<F::Elem> {
    m.sub(f, &DenseMatrix::identity(f, m.rows()))
}

/// Instantiates a template at `ρ` (which must already be valid).
pub fn instantiate<F: Field>(
    f: &F,
    template: &CotangentTemplate,
    rho: &RepPoint<F::Elem>,
) -> Result<ChainComplex<F::Elem>, CotangentError> {
    let group = &rho.group;
    let d = group.dim();
    let dims = template.dims(d);
    let diffs: Vec<SparseMatrix<F::Elem>> = match template {
        CotangentTemplate::Cone { presentation } if presentation.relators.is_empty() => vec![],
        CotangentTemplate::Cone { presentation } => {
            vec![fox_jacobian(f, group, presentation, &rho.assignment)?.transpose()]
        }
        CotangentTemplate::LinkCone { braid } => {
            let n = braid.strands();
            let table = AdjointTable::new(f, group, &rho.assignment);
            let images = artin_image(braid);
            let mut triplets = Vec::new();
            for (i, img) in images.iter().enumerate() {
                for j in 0..n {
                    let block = table.element(&fox_derivative(img, j))?;
                    for r in 0..d {
                        for c in 0..d {
                            let v = block.get(r, c);
                            if !f.is_zero(v) {
                                triplets.push((i * d + r, j * d + c, v.clone()));
                            }
                        }
                    }
                }
            }
            // The cotangent map is the dual of the tangent map J_β.
            let jbeta = SparseMatrix::from_triplets(f, n * d, n * d, triplets);
            vec![SparseMatrix::identity(f, n * d).sub(f, &jbeta.transpose())]
        }
        CotangentTemplate::Lens { p, l, .. } => {
            let x = adjoint(f, &rho.assignment[0]);
            let norm = norm_map(f, &x, *p).transpose().to_sparse(f);
            (0..dims.len() - 1)
                .map(|i| {
                    if i % 2 == 0 {
                        norm.clone()
                    } else {
                        minus_identity(f, &x.pow(f, l[i.div_ceil(2)])).transpose().to_sparse(f)
                    }
                })
                .collect()
        }
        CotangentTemplate::Periodic { p, cutoff } => {
            let x = adjoint(f, &rho.assignment[0]);
            let norm = norm_map(f, &x, *p).transpose().to_sparse(f);
            let step = minus_identity(f, &x).transpose().to_sparse(f);
            (0..*cutoff).map(|i| if i % 2 == 0 { norm.clone() } else { step.clone() }).collect()
        }
    };
    Ok(ChainComplex::new(f, dims, diffs)?)
}

/// `T*_ρ DRep_G(X)` as a chain complex. `Bℤ_p` uses the default cutoff.
pub fn cotangent_complex<F: Field>(
    f: &F,
    x: &SpaceModel,
    rho: &RepPoint<F::Elem>,
) -> Result<ChainComplex<F::Elem>, CotangentError> {
    cotangent_complex_truncated(f, x, rho, DEFAULT_CUTOFF)
}

pub fn cotangent_complex_truncated<F: Field>(
    f: &F,
    x: &SpaceModel,
    rho: &RepPoint<F::Elem>,
    cutoff: usize,
) -> Result<ChainComplex<F::Elem>, CotangentError> {
    let template = x.build_template_truncated(cutoff)?;
    validate(f, x, rho)?;
    instantiate(f, &template, rho)
}

pub fn cotangent_homology<F: Field>(
    f: &F,
    x: &SpaceModel,
    rho: &RepPoint<F::Elem>,
) -> Result<HomologyReport, CotangentError> {
    Ok(cotangent_complex(f, x, rho)?.homology(f))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCheck {
    pub chi: i64,
    pub expected: i64,
    /// Euler characteristic of the cell model behind the template.
    pub model_euler: i64,
    pub pass: bool,
}

/// Compares `χ[T*_ρ]` with `(1 - χ)·dim G` for the template's cell model.
/// For link complements the model is the complement wedged with a 2-sphere
/// (χ = 1), so the expected value is 0.
pub fn euler_check<F: Field>(f: &F, x: &SpaceModel, rho: &RepPoint<F::Elem>) -> Result<EulerCheck, CotangentError> {
    let template = x.build_template()?;
    let model_euler = template.model_euler().ok_or_else(|| SpaceError::Unsupported {
        op: "euler_check",
        space: x.to_string(),
    })?;
    let chi = cotangent_homology(f, x, rho)?.euler;
    let expected = (1 - model_euler) * rho.group.dim() as i64;
    Ok(EulerCheck {
        chi,
        expected,
        model_euler,
        pass: chi == expected,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentDims {
    /// `dim Z¹(π_1, Ad ρ)`, the Zariski tangent space of `Rep_G(π_1)` at `ρ`.
    pub z1: usize,
    /// `dim H¹(π_1, Ad ρ)`.
    pub h1_group: usize,
    /// `dim H⁰(π_1, Ad ρ)`, the joint fixed space of the adjoints.
    pub fixed: usize,
}

/// Tangent data from the Fox Jacobian of `π_1`.
pub fn tangent_dims<F: Field>(f: &F, x: &SpaceModel, rho: &RepPoint<F::Elem>) -> Result<TangentDims, CotangentError> {
    validate(f, x, rho)?;
    let p = x.fundamental_group().presentation;
    let d = rho.group.dim();
    let rank_j = fox_jacobian(f, &rho.group, &p, &rho.assignment)?.rank(f);
    let z1 = p.n_generators * d - rank_j;
    let coboundary = coboundary_rank(f, &rho.assignment);
    Ok(TangentDims {
        z1,
        h1_group: z1 - coboundary,
        fixed: d - coboundary,
    })
}

/// Rank of `u ↦ (Ad(g_i) u - u)_i`, i.e. `dim B¹`.
pub fn coboundary_rank<F: Field>(f: &F, gens: &[GroupElement<F::Elem>]) -> usize {
    let Some(first) = gens.first() else { return 0 };
    let d = first.group().dim();
    let mut triplets = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        let m = minus_identity(f, &adjoint(f, g));
        for r in 0..d {
            for c in 0..d {
                if !f.is_zero(m.get(r, c)) {
                    triplets.push((k * d + r, c, m.get(r, c).clone()));
                }
            }
        }
    }
    SparseMatrix::from_triplets(f, gens.len() * d, d, triplets).rank(f)
}

/// Per-representation vanishing data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub space: String,
    pub group: String,
    pub field: String,
    pub rep: Vec<String>,
    pub h: Vec<usize>,
    /// `dim H_1` when every `H_i`, `i >= 2`, vanishes.
    pub vanishing_bound: Option<usize>,
    pub declared_local_dim: Option<usize>,
    /// `dim H_0` equals the declared local dimension.
    pub smooth_flag: bool,
    /// Always `"POINT"`: the certificate covers this representation only.
    pub scope: &'static str,
}

pub fn vanishing_certificate<F: Field>(
    f: &F,
    x: &SpaceModel,
    rho: &RepPoint<F::Elem>,
    declared_local_dim: Option<usize>,
) -> Result<Certificate, CotangentError> {
    let h = cotangent_homology(f, x, rho)?.betti;
    Ok(certificate_from(f, x, rho, h, declared_local_dim))
}

fn certificate_from<F: Field>(
    f: &F,
    x: &SpaceModel,
    rho: &RepPoint<F::Elem>,
    h: Vec<usize>,
    declared_local_dim: Option<usize>,
) -> Certificate {
    let vanishing_bound = h
        .iter()
        .skip(2)
        .all(|&b| b == 0)
        .then(|| h.get(1).copied().unwrap_or(0));
    Certificate {
        space: x.to_string(),
        group: rho.group.to_string(),
        field: f.name(),
        rep: rho.format(f),
        smooth_flag: declared_local_dim.is_some_and(|n| h.first() == Some(&n)),
        h,
        vanishing_bound,
        declared_local_dim,
        scope: "POINT",
    }
}

/// Maximum over a sample of certificates. This bounds nothing beyond the
/// sampled points, hence the `SAMPLED` qualifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleSummary {
    pub samples: usize,
    pub max_h: Vec<usize>,
    /// Maximum vanishing bound, `None` if some sample had higher homology.
    pub max_vanishing_bound: Option<usize>,
    pub smooth_count: usize,
    pub qualifier: &'static str,
}

pub fn summarize(certs: &[Certificate]) -> SampleSummary {
    let len = certs.iter().map(|c| c.h.len()).max().unwrap_or(0);
    let max_h = (0..len)
        .map(|i| certs.iter().map(|c| c.h.get(i).copied().unwrap_or(0)).max().unwrap_or(0))
        .collect();
    let max_vanishing_bound = certs
        .iter()
        .try_fold(0, |acc, c| c.vanishing_bound.map(|b| acc.max(b)));
    SampleSummary {
        samples: certs.len(),
        max_h,
        max_vanishing_bound,
        smooth_count: certs.iter().filter(|c| c.smooth_flag).count(),
        qualifier: "SAMPLED",
    }
}

/// Group cohomology `H^i(ℤ_p, Ad ρ)`, `i = 0..=cutoff`, from the periodic
/// resolution `X - 1, N, X - 1, …`. One extra term is computed so the top
/// reported degree is exact.
pub fn cyclic_cohomology<F: Field>(
    f: &F,
    p: u64,
    gamma: &GroupElement<F::Elem>,
    cutoff: usize,
) -> Result<Vec<usize>, CotangentError> {
    if !gamma.pow(f, p).is_identity(f) {
        return Err(CotangentError::OrderViolated { p });
    }
    let x = adjoint(f, gamma);
    let d = x.rows();
    let norm = norm_map(f, &x, p).transpose().to_sparse(f);
    let step = minus_identity(f, &x).transpose().to_sparse(f);
    let diffs = (0..cutoff + 1)
        .map(|i| if i % 2 == 0 { step.clone() } else { norm.clone() })
        .collect();
    let c = ChainComplex::new(f, vec![d; cutoff + 2], diffs)?;
    let mut betti = c.homology(f).betti;
    betti.truncate(cutoff + 1);
    Ok(betti)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Cyclotomic, PrimeField, Rationals};
    use crate::fox::BraidWord;

    fn space(s: &str) -> SpaceModel {
        s.parse().unwrap()
    }

    fn gl2_diag<F: Field>(f: &F, a: F::Elem, b: F::Elem) -> GroupElement<F::Elem> {
        GroupElement::new(f, &AlgGroup::GL(2), vec![DenseMatrix::diagonal(f, &[a, b])]).unwrap()
    }

    #[test]
    fn torus_at_trivial_rep() {
        let q = Rationals;
        let x = space("surface:g=1");
        let rho = RepPoint::trivial(&q, &AlgGroup::GL(2), 2);
        let c = cotangent_complex(&q, &x, &rho).unwrap();
        assert!(c.differential(1).is_zero());
        assert_eq!(cotangent_homology(&q, &x, &rho).unwrap().betti, vec![8, 4]);
        let e = euler_check(&q, &x, &rho).unwrap();
        assert_eq!((e.chi, e.expected, e.pass), (4, 4, true));
        assert_eq!(tangent_dims(&q, &x, &rho).unwrap().z1, 8);
    }

    #[test]
    fn regular_commuting_pair_in_gl2() {
        let q = Rationals;
        let x = space("surface:g=1");
        let a = gl2_diag(&q, q.from_i64(2), q.one());
        let b = gl2_diag(&q, q.from_i64(3), q.one());
        let rho = RepPoint::new(AlgGroup::GL(2), vec![a, b]).unwrap();
        let cert = vanishing_certificate(&q, &x, &rho, Some(6)).unwrap();
        assert_eq!(cert.h, vec![6, 2]);
        assert_eq!(cert.vanishing_bound, Some(2));
        assert!(cert.smooth_flag);
    }

    #[test]
    fn lens_5_1_2() {
        let k = Cyclotomic::new(5);
        let x = space("lens:p=5,q=1 2");
        let rho = RepPoint::new(AlgGroup::GL(2), vec![gl2_diag(&k, k.zeta(), k.one())]).unwrap();
        let h = cotangent_homology(&k, &x, &rho).unwrap();
        assert_eq!(h.betti, vec![2, 0, 2]);
        let bad = RepPoint::new(AlgGroup::GL(2), vec![gl2_diag(&k, k.from_i64(2), k.one())]).unwrap();
        assert_eq!(cotangent_homology(&k, &x, &bad), Err(CotangentError::OrderViolated { p: 5 }));
    }

    #[test]
    fn cyclic_cohomology_examples() {
        let k = Cyclotomic::new(5);
        let g = gl2_diag(&k, k.zeta(), k.one());
        assert_eq!(cyclic_cohomology(&k, 5, &g, 6).unwrap(), vec![2, 0, 0, 0, 0, 0, 0]);
        let q = Rationals;
        let id = GroupElement::identity(&q, &AlgGroup::SL(2));
        assert_eq!(cyclic_cohomology(&q, 7, &id, 3).unwrap(), vec![3, 0, 0, 0]);
        let minus = gl2_diag(&q, q.from_i64(-1), q.from_i64(-1));
        assert_eq!(cyclic_cohomology(&q, 2, &minus, 4).unwrap(), vec![4, 0, 0, 0, 0]);
        // In characteristic p the norm degenerates and cohomology is periodic.
        let f = PrimeField::new(3).unwrap();
        let id3 = GroupElement::identity(&f, &AlgGroup::GL(1));
        assert_eq!(cyclic_cohomology(&f, 3, &id3, 3).unwrap(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn link_cone_at_trivial_rep_is_identity_minus_permutation() {
        let q = Rationals;
        let sl2 = AlgGroup::SL(2);
        let x = SpaceModel::link(BraidWord::parse(2, "s1").unwrap());
        let rho = RepPoint::trivial(&q, &sl2, 2);
        let d = cotangent_complex(&q, &x, &rho).unwrap().differential(1).to_dense(&q);
        for r in 0..6 {
            for c in 0..6 {
                let perm = if (r + 3) % 6 == c { q.one() } else { q.zero() };
                let id = if r == c { q.one() } else { q.zero() };
                assert_eq!(d.get(r, c), &q.sub(&id, &perm));
            }
        }
        assert_eq!(cotangent_homology(&q, &x, &rho).unwrap().betti, vec![3, 3]);
        let e = euler_check(&q, &x, &rho).unwrap();
        assert_eq!((e.chi, e.pass), (0, true));
    }

    #[test]
    fn link_cone_matches_presentation_cone() {
        let q = Rationals;
        let sl2 = AlgGroup::SL(2);
        let a = GroupElement::new(&q, &sl2, vec![DenseMatrix::from_i64(&q, &[vec![1, 1], vec![0, 1]])]).unwrap();
        let b = GroupElement::new(&q, &sl2, vec![DenseMatrix::from_i64(&q, &[vec![1, 0], vec![-1, 1]])]).unwrap();
        let braid = BraidWord::parse(2, "s1^3").unwrap();
        let link = SpaceModel::link(braid);
        let rho = RepPoint::new(sl2, vec![a, b]).unwrap();
        let h = cotangent_homology(&q, &link, &rho).unwrap();
        let pres = SpaceModel::FinitePresentation {
            presentation: link.presentation_of().unwrap(),
            euler: None,
        };
        assert_eq!(cotangent_homology(&q, &pres, &rho).unwrap().betti, h.betti);
        assert_eq!(h.betti[0], h.betti[1]);
    }

    #[test]
    fn link_rejects_non_fixed_points() {
        let q = Rationals;
        let x = SpaceModel::link(BraidWord::parse(2, "s1").unwrap());
        let rho = RepPoint::new(
            AlgGroup::GL(2),
            vec![gl2_diag(&q, q.from_i64(2), q.one()), gl2_diag(&q, q.one(), q.one())],
        )
        .unwrap();
        assert!(matches!(
            cotangent_complex(&q, &x, &rho),
            Err(CotangentError::FixedPointViolated { .. })
        ));
    }

    #[test]
    fn arity_and_relator_checks() {
        let q = Rationals;
        let x = space("surface:g=1");
        let rho = RepPoint::trivial(&q, &AlgGroup::GL(2), 3);
        assert!(matches!(
            cotangent_complex(&q, &x, &rho),
            Err(CotangentError::WrongArity { expected: 2, got: 3, .. })
        ));
        let gl2 = AlgGroup::GL(2);
        let u = GroupElement::new(&q, &gl2, vec![DenseMatrix::from_i64(&q, &[vec![1, 1], vec![0, 1]])]).unwrap();
        let v = GroupElement::new(&q, &gl2, vec![DenseMatrix::from_i64(&q, &[vec![1, 0], vec![1, 1]])]).unwrap();
        let rho = RepPoint::new(gl2, vec![u, v]).unwrap();
        assert!(matches!(
            cotangent_complex(&q, &x, &rho),
            Err(CotangentError::Fox(FoxError::RelatorViolated { .. }))
        ));
    }

    #[test]
    fn torus_knot_tangent_space_at_trivial() {
        let q = Rationals;
        let x = SpaceModel::FinitePresentation {
            presentation: crate::fox::Presentation::torus_knot(2, 3),
            euler: None,
        };
        let rho = RepPoint::trivial(&q, &AlgGroup::SL(2), 2);
        let t = tangent_dims(&q, &x, &rho).unwrap();
        assert_eq!((t.z1, t.h1_group, t.fixed), (3, 3, 3));
    }

    #[test]
    fn wedge_certificate() {
        let q = Rationals;
        let x = space("wedge:n=3");
        let rho = RepPoint::trivial(&q, &AlgGroup::SL(2), 3);
        let c = vanishing_certificate(&q, &x, &rho, None).unwrap();
        assert_eq!((c.h.clone(), c.vanishing_bound, c.smooth_flag), (vec![9], Some(0), false));
        let s = summarize(&[c.clone(), c]);
        assert_eq!((s.samples, s.max_h, s.max_vanishing_bound), (2, vec![9], Some(0)));
        assert_eq!(s.qualifier, "SAMPLED");
    }

    #[test]
    fn periodic_template_for_bz() {
        let k = Cyclotomic::new(5);
        let x = space("bz:p=5");
        let rho = RepPoint::new(AlgGroup::GL(2), vec![gl2_diag(&k, k.zeta(), k.one())]).unwrap();
        let h = cotangent_complex_truncated(&k, &x, &rho, 4).unwrap().homology(&k);
        // ker N = the two nontrivial eigenlines; the top term only sees N.
        assert_eq!(h.betti, vec![2, 0, 0, 0, 2]);
        assert!(matches!(euler_check(&k, &x, &rho), Err(CotangentError::Space(_))));
    }
}
