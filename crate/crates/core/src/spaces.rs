//! Space models: fundamental-group presentations, cotangent-complex
//! templates and topological Euler characteristics.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::fox::{artin_image, BraidWord, FoxError, Presentation, Word};

/// Default homological cutoff for the periodic model of `Bℤ_p`.
pub const DEFAULT_CUTOFF: usize = 6;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error("cannot parse space {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("invalid space: {0}")]
    Invalid(String),
    #[error("{op} is not supported for {space}")]
    Unsupported { op: &'static str, space: String },
    #[error(transparent)]
    Fox(#[from] FoxError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceModel {
    /// Closed orientable surface of genus `g >= 1`.
    Surface { genus: usize },
    /// Complement of the closure of a braid.
    LinkComplement { braid: BraidWord },
    /// `L_p(q_1, ..., q_m) = S^{2m-1}/ℤ_p`.
    LensSpace { p: u64, q: Vec<u64> },
    WedgeCircles { n: usize },
    /// `Bℤ_p`, the infinite lens space.
    CyclicGroupSpace { p: u64 },
    /// The presentation 2-complex, optionally with a declared Euler
    /// characteristic for the space it stands in for.
    FinitePresentation { presentation: Presentation, euler: Option<i64> },
    ComplexProjective { r: usize },
}

/// `π_1` together with whether the presentation complex is a model of the
/// space itself (false for lens spaces, `Bℤ_p` and `CP^r`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalGroup {
    pub presentation: Presentation,
    pub models_space: bool,
}

/// Shape of the cotangent complex of a space, independent of `ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CotangentTemplate {
    /// `g*^{#rel}` (degree 1) → `g*^{#gen}` (degree 0) by the transposed
    /// Fox Jacobian; a single term when there are no relators.
    Cone { presentation: Presentation },
    /// Cone of `Id - Q(β*)` on `(g*)^n`.
    LinkCone { braid: BraidWord },
    /// `2m - 1` copies of `g*`, differentials alternating between the norm
    /// and `X^{l_k} - 1` where `q_k l_k ≡ 1 (mod p)`.
    Lens { p: u64, q: Vec<u64>, l: Vec<u64> },
    /// Periodic resolution of `Bℤ_p` truncated at `cutoff`.
    Periodic { p: u64, cutoff: usize },
}

impl CotangentTemplate {
    /// Dimensions of the instantiated complex for a group of dimension `d`,
    /// indexed by homological degree.
    pub fn dims(&self, d: usize) -> Vec<usize> {
        match self {
            Self::Cone { presentation } if presentation.relators.is_empty() => vec![presentation.n_generators * d],
            Self::Cone { presentation } => vec![presentation.n_generators * d, presentation.relators.len() * d],
            Self::LinkCone { braid } => vec![braid.strands() * d; 2],
            Self::Lens { q, .. } => vec![d; 2 * q.len() - 1],
            Self::Periodic { cutoff, .. } => vec![d; cutoff + 1],
        }
    }

    /// Euler characteristic of the finite cell model the template comes
    /// from, or `None` for the truncated periodic model.
    pub fn model_euler(&self) -> Option<i64> {
        match self {
            Self::Cone { presentation } => {
                Some(1 - presentation.n_generators as i64 + presentation.relators.len() as i64)
            }
            // n one-cells and n two-cells: the link complement wedged with a sphere.
            Self::LinkCone { .. } => Some(1),
            Self::Lens { .. } => Some(0),
            Self::Periodic { .. } => None,
        }
    }
}

impl SpaceModel {
    pub fn surface(genus: usize) -> Result<Self, SpaceError> {
        if genus == 0 {
            return Err(SpaceError::Invalid("genus must be at least 1".into()));
        }
        Ok(Self::Surface { genus })
    }

    pub fn link(braid: BraidWord) -> Self {
        Self::LinkComplement { braid }
    }

    pub fn lens(p: u64, q: Vec<u64>) -> Result<Self, SpaceError> {
        if p < 2 {
            return Err(SpaceError::Invalid(format!("lens order p = {p} must exceed 1")));
        }
        if q.len() < 2 {
            return Err(SpaceError::Invalid("lens spaces need at least two rotation parameters".into()));
        }
        if let Some(bad) = q.iter().find(|&&qk| qk.gcd(&p) != 1) {
            return Err(SpaceError::Invalid(format!("parameter {bad} is not coprime to {p}")));
        }
        Ok(Self::LensSpace { p, q })
    }

    pub fn cyclic(p: u64) -> Result<Self, SpaceError> {
        if p < 2 {
            return Err(SpaceError::Invalid(format!("order p = {p} must exceed 1")));
        }
        Ok(Self::CyclicGroupSpace { p })
    }

    pub fn projective(r: usize) -> Result<Self, SpaceError> {
        if r == 0 {
            return Err(SpaceError::Invalid("CP^r needs r >= 1".into()));
        }
        Ok(Self::ComplexProjective { r })
    }

    fn unsupported(&self, op: &'static str) -> SpaceError {
        SpaceError::Unsupported {
            op,
            space: self.to_string(),
        }
    }

    /// A presentation whose 2-complex models the space (or, for links,
    /// `⟨x_i | x_i β(x_i)⁻¹⟩`).
    pub fn presentation_of(&self) -> Result<Presentation, SpaceError> {
        match self {
            Self::Surface { genus } => Ok(surface_presentation(*genus)),
            Self::LinkComplement { braid } => {
                let images = artin_image(braid);
                let rels = images
                    .iter()
                    .enumerate()
                    .map(|(i, img)| Word::generator(i).mul(&img.inverse()))
                    .collect();
                Ok(Presentation::new(braid.strands(), rels)?)
            }
            Self::WedgeCircles { n } => Ok(Presentation::new(*n, vec![])?),
            Self::FinitePresentation { presentation, .. } => Ok(presentation.clone()),
            _ => Err(self.unsupported("presentation_of")),
        }
    }

    /// `π_1` for every model, flagged when the presentation complex is not
    /// a model of the space.
    pub fn fundamental_group(&self) -> FundamentalGroup {
        match self {
            Self::LensSpace { p, .. } | Self::CyclicGroupSpace { p } => FundamentalGroup {
                presentation: Presentation {
                    n_generators: 1,
                    relators: vec![Word::generator(0).pow(*p as i64)],
                },
                models_space: false,
            },
            Self::ComplexProjective { .. } => FundamentalGroup {
                presentation: Presentation {
                    n_generators: 0,
                    relators: vec![],
                },
                models_space: false,
            },
            _ => FundamentalGroup {
                presentation: self.presentation_of().expect("presentation-based space"),
                models_space: true,
            },
        }
    }

    pub fn build_template(&self) -> Result<CotangentTemplate, SpaceError> {
        self.build_template_truncated(DEFAULT_CUTOFF)
    }

    /// Like [`SpaceModel::build_template`]; `cutoff` only affects `Bℤ_p`.
    pub fn build_template_truncated(&self, cutoff: usize) -> Result<CotangentTemplate, SpaceError> {
        match self {
            Self::Surface { .. } | Self::WedgeCircles { .. } | Self::FinitePresentation { .. } => {
                Ok(CotangentTemplate::Cone {
                    presentation: self.presentation_of()?,
                })
            }
            Self::LinkComplement { braid } => Ok(CotangentTemplate::LinkCone { braid: braid.clone() }),
            Self::LensSpace { p, q } => Ok(CotangentTemplate::Lens {
                p: *p,
                q: q.clone(),
                l: q.iter().map(|&qk| inverse_mod(qk, *p)).collect(),
            }),
            Self::CyclicGroupSpace { p } => Ok(CotangentTemplate::Periodic { p: *p, cutoff }),
            Self::ComplexProjective { .. } => Err(self.unsupported("build_template")),
        }
    }

    pub fn euler_top(&self) -> Result<i64, SpaceError> {
        match self {
            Self::Surface { genus } => Ok(2 - 2 * *genus as i64),
            Self::LinkComplement { .. } | Self::LensSpace { .. } => Ok(0),
            Self::WedgeCircles { n } => Ok(1 - *n as i64),
            Self::FinitePresentation { presentation, euler } => Ok(euler.unwrap_or(
                1 - presentation.n_generators as i64 + presentation.relators.len() as i64,
            )),
            Self::ComplexProjective { r } => Ok(*r as i64 + 1),
            Self::CyclicGroupSpace { .. } => Err(self.unsupported("euler_top")),
        }
    }
}

/// `⟨a_1, b_1, …, a_g, b_g | [a_1,b_1]⋯[a_g,b_g]⟩`, generators ordered
/// `a_1, b_1, a_2, …`.
pub fn surface_presentation(genus: usize) -> Presentation {
    let rel = (0..genus).fold(Word::identity(), |acc, i| {
        acc.mul(&Word::commutator(&Word::generator(2 * i), &Word::generator(2 * i + 1)))
    });
    Presentation {
        n_generators: 2 * genus,
        relators: vec![rel],
    }
}

/// Number of cycles of the underlying permutation (link components).
pub fn cycle_count(beta: &BraidWord) -> usize {
    let perm = beta.permutation();
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
        }
    }
    cycles
}

/// `l` in `[1, p)` with `q l ≡ 1 (mod p)`; `q` must be coprime to `p`.
pub fn inverse_mod(q: u64, p: u64) -> u64 {
    let e = (q as i128).extended_gcd(&(p as i128));
    assert_eq!(e.gcd, 1, "{q} is not invertible mod {p}");
    e.x.rem_euclid(p as i128) as u64
}

fn parse_error(input: &str, reason: impl Into<String>) -> SpaceError {
    SpaceError::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

impl FromStr for SpaceModel {
    type Err = SpaceError;

    /// `surface:g=2`, `link:braid=s1 s1 s1,strands=2`, `lens:p=5,q=1 2`,
    /// `wedge:n=3`, `bz:p=7`, `cp:r=2`,
    /// `pres:gens=3;rels=a b A B, a c A C[;chi=0]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, rest) = s.trim().split_once(':').ok_or_else(|| parse_error(s, "missing ':'"))?;
        let sep = if kind == "pres" { ';' } else { ',' };
        let mut fields = std::collections::BTreeMap::new();
        for part in rest.split(sep).filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| parse_error(s, format!("expected key=value, got {part:?}")))?;
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
        let take = |k: &str| fields.get(k).ok_or_else(|| parse_error(s, format!("missing field {k}")));
        let num = |k: &str| -> Result<u64, SpaceError> {
            take(k)?
                .parse()
                .map_err(|_| parse_error(s, format!("field {k} is not a nonnegative integer")))
        };
        let allowed: &[&str] = match kind {
            "surface" => &["g"],
            "link" => &["braid", "strands"],
            "lens" => &["p", "q"],
            "wedge" => &["n"],
            "bz" => &["p"],
            "cp" => &["r"],
            "pres" => &["gens", "rels", "chi"],
            _ => return Err(parse_error(s, format!("unknown space kind {kind:?}"))),
        };
        if let Some(k) = fields.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(parse_error(s, format!("unexpected field {k}")));
        }
        match kind {
            "surface" => Self::surface(num("g")? as usize),
            "link" => {
                let braid_text = take("braid")?;
                let strands = match fields.get("strands") {
                    Some(_) => num("strands")? as usize,
                    None => {
                        // Smallest braid group containing every generator.
                        let probe = BraidWord::parse(usize::MAX, braid_text)?;
                        probe.letters().iter().map(|(i, _)| i + 1).max().unwrap_or(2).max(2)
                    }
                };
                Ok(Self::link(BraidWord::parse(strands, braid_text)?))
            }
            "lens" => {
                let q = take("q")?
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| parse_error(s, format!("bad lens parameter {t:?}"))))
                    .collect::<Result<Vec<u64>, _>>()?;
                Self::lens(num("p")?, q)
            }
            "wedge" => Ok(Self::WedgeCircles { n: num("n")? as usize }),
            "bz" => Self::cyclic(num("p")?),
            "cp" => Self::projective(num("r")? as usize),
            _ => {
                let gens = num("gens")? as usize;
                let rels = fields
                    .get("rels")
                    .map(|r| {
                        r.split(',')
                            .filter(|w| !w.trim().is_empty())
                            .map(Word::parse)
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .transpose()?
                    .unwrap_or_default();
                let euler = fields
                    .get("chi")
                    .map(|c| c.parse::<i64>().map_err(|_| parse_error(s, "chi is not an integer")))
                    .transpose()?;
                Ok(Self::FinitePresentation {
                    presentation: Presentation::new(gens, rels)?,
                    euler,
                })
            }
        }
    }
}

impl fmt::Display for SpaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Surface { genus } => write!(f, "surface:g={genus}"),
            Self::LinkComplement { braid } => write!(f, "link:braid={braid},strands={}", braid.strands()),
            Self::LensSpace { p, q } => {
                let q: Vec<String> = q.iter().map(ToString::to_string).collect();
                write!(f, "lens:p={p},q={}", q.join(" "))
            }
            Self::WedgeCircles { n } => write!(f, "wedge:n={n}"),
            Self::CyclicGroupSpace { p } => write!(f, "bz:p={p}"),
            Self::ComplexProjective { r } => write!(f, "cp:r={r}"),
            Self::FinitePresentation { presentation, euler } => {
                let rels: Vec<String> = presentation.relators.iter().map(ToString::to_string).collect();
                write!(f, "pres:gens={};rels={}", presentation.n_generators, rels.join(", "))?;
                if let Some(c) = euler {
                    write!(f, ";chi={c}")?;
                }
                Ok(())
            }
        }
    }
}
