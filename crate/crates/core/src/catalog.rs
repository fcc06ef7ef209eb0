//! Closed-form answers: character homology of `CP^r`, its local-system
//! homology, and vanishing bounds for representation homology.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::liegroups::AlgGroup;
use crate::spaces::{SpaceError, SpaceModel};

/// Dimensions of a graded algebra by degree, with its generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoincareSeries {
    /// `(degree, dim)` for every degree `0..=cutoff`.
    pub dims: Vec<(usize, u64)>,
    pub generator_degrees: Vec<usize>,
    pub description: String,
}

impl PoincareSeries {
    pub fn dim(&self, degree: usize) -> u64 {
        self.dims.iter().find(|(d, _)| *d == degree).map_or(0, |(_, n)| *n)
    }
}

/// Free graded-commutative algebra on generators `ξ^{(i)}_{2s-1}` of degree
/// `2 r m_i + 2 s - 1` (`s = 1..r`, `m_i` the exponents). All generators are
/// odd, so this is an exterior algebra.
pub fn cpr_char_homology(exponents: &[usize], r: usize, cutoff: usize) -> PoincareSeries {
    let mut gens: Vec<usize> = exponents
        .iter()
        .flat_map(|&m| (1..=r).map(move |s| 2 * r * m + 2 * s - 1))
        .collect();
    gens.sort_unstable();
    let mut dims = vec![0u64; cutoff + 1];
    dims[0] = 1;
    for &g in &gens {
        for n in (g..=cutoff).rev() {
            dims[n] += dims[n - g];
        }
    }
    let list: Vec<String> = gens.iter().map(ToString::to_string).collect();
    PoincareSeries {
        dims: dims.into_iter().enumerate().collect(),
        description: format!("exterior algebra on generators of degrees [{}]", list.join(", ")),
        generator_degrees: gens,
    }
}

/// `dim H_{i+1}(CP^r, g*)` as a map `i -> dim G`, nonzero exactly for
/// `i = 1, 3, …, 2r - 1`.
pub fn cpr_local_system_homology(group: &AlgGroup, r: usize) -> BTreeMap<usize, usize> {
    (1..2 * r).step_by(2).map(|i| (i, group.dim())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    /// Holds globally.
    Proven,
    /// Holds after completion at smooth representations.
    LocalSmooth,
    /// Expected but not proven.
    Conjectural,
}

/// `HR_i(X, G) = 0` for all `i > bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub bound: usize,
    pub status: BoundStatus,
    pub conjectural: bool,
    pub source: String,
}

fn bound(bound: usize, status: BoundStatus, source: &str) -> Bound {
    Bound {
        bound,
        status,
        conjectural: status == BoundStatus::Conjectural,
        source: source.to_string(),
    }
}

/// Vanishing bounds for representation homology of `X` with coefficients in
/// `G`, each labeled by status.
pub fn global_bounds(x: &SpaceModel, group: &AlgGroup) -> Result<Vec<Bound>, SpaceError> {
    let d = group.dim();
    use BoundStatus::*;
    match x {
        SpaceModel::Surface { genus: 1 } => Ok(vec![
            bound(d, Proven, "torus: vanishing above dim G"),
            bound(group.rank(), LocalSmooth, "torus, completed at smooth points: vanishing above rank G"),
            bound(group.rank(), Conjectural, "torus: vanishing above rank G"),
        ]),
        SpaceModel::Surface { .. } => Ok(vec![
            bound(d, Proven, "closed surface: vanishing above dim G"),
            bound(
                group.center_dim(),
                LocalSmooth,
                "higher genus, completed at smooth points: vanishing above dim Z(G)",
            ),
            bound(group.center_dim(), Conjectural, "higher genus: vanishing above dim Z(G)"),
        ]),
        SpaceModel::LinkComplement { braid } => Ok(vec![bound(
            braid.strands() * d,
            Proven,
            "link complement of an n-strand braid closure: vanishing above n dim G",
        )]),
        SpaceModel::CyclicGroupSpace { .. } | SpaceModel::WedgeCircles { .. } => Ok(vec![bound(
            0,
            Proven,
            "virtually free fundamental group: vanishing in positive degrees",
        )]),
        _ => Err(SpaceError::Unsupported {
            op: "global_bounds",
            space: x.to_string(),
        }),
    }
}

/// Markdown table of bounds.
pub fn bounds_markdown(x: &SpaceModel, group: &AlgGroup, bounds: &[Bound]) -> String {
    let mut out = String::from("| space | group | bound | status | statement |\n|---|---|---|---|---|\n");
    for b in bounds {
        let status = match b.status {
            BoundStatus::Proven => "proven",
            BoundStatus::LocalSmooth => "local (smooth points)",
            BoundStatus::Conjectural => "CONJECTURAL",
        };
        out.push_str(&format!("| {x} | {group} | {} | {status} | {} |\n", b.bound, b.source));
    }
    out
}

/// Markdown table of a Poincaré series, nonzero degrees only.
pub fn series_markdown(series: &PoincareSeries) -> String {
    let mut out = format!("{}\n\n| degree | dim |\n|---|---|\n", series.description);
    for (d, n) in series.dims.iter().filter(|(_, n)| *n > 0) {
        out.push_str(&format!("| {d} | {n} |\n"));
    }
    out
}
