//! Subcommand implementations. Each returns the same result in three
//! renderings; all numbers are exact.

use rayon::prelude::*;
use rephom::catalog::{bounds_markdown, cpr_char_homology, cpr_local_system_homology, global_bounds, series_markdown};
use rephom::cotangent::sampling::{sample_rep, sample_reps};
use rephom::cotangent::{
    arity, cotangent_complex_truncated, cyclic_cohomology, euler_check, summarize, tangent_dims,
    vanishing_certificate, RepPoint,
};
use rephom::exact::{Cyclotomic, Field, PrimeField, Rationals};
use rephom::koszul::{surface_model, torus_model, truncated_homology, KoszulModel, DEFAULT_BUDGET};
use rephom::liegroups::AlgGroup;
use rephom::spaces::{SpaceModel, DEFAULT_CUTOFF};
use rephom::specseq::{degeneration_report, e2_page, GradedDims};
use serde_json::{json, Value};

use crate::config::{FieldSpec, FileConfig, RepSpec};
use crate::error::CliError;
use crate::literal::parse_element;

pub struct Output {
    pub json: Value,
    pub table: String,
    pub csv: String,
}

/// Runs `$body` with `$f` bound to the configured field and `$z` to its
/// distinguished root of unity (`ζ_N` for `Q(ζ_N)`, none otherwise).
macro_rules! with_field {
    ($spec:expr, |$f:ident, $z:ident| $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $f = &Rationals;
                let $z: Option<&<Rationals as Field>::Elem> = None;
                $body
            }
            FieldSpec::Prime(q) => {
                let $f = &PrimeField::new(q).expect("validated prime");
                let $z: Option<&u64> = None;
                $body
            }
            FieldSpec::Cyclotomic(n) => {
                let field = Cyclotomic::new(n);
                let zeta = field.zeta();
                let $f = &field;
                let $z = Some(&zeta);
                $body
            }
        }
    };
}

fn missing(key: &str) -> CliError {
    CliError::new("config.missing", format!("--{key} is required (flag or config key {key:?})"))
}

pub fn space_of(cfg: &FileConfig) -> Result<SpaceModel, CliError> {
    Ok(cfg.space.as_deref().ok_or_else(|| missing("space"))?.parse::<SpaceModel>()?)
}

pub fn group_of(cfg: &FileConfig) -> Result<AlgGroup, CliError> {
    Ok(cfg.group.as_deref().ok_or_else(|| missing("group"))?.parse::<AlgGroup>()?)
}

/// The configured field, defaulting to `Q(ζ_p)` for spaces with `π_1 = ℤ_p`
/// and to `Q` otherwise.
pub fn field_of(cfg: &FileConfig, space: Option<&SpaceModel>) -> Result<FieldSpec, CliError> {
    match (&cfg.field, space) {
        (Some(s), _) => s.parse(),
        (None, Some(SpaceModel::LensSpace { p, .. } | SpaceModel::CyclicGroupSpace { p })) => {
            Ok(FieldSpec::Cyclotomic(*p))
        }
        _ => Ok(FieldSpec::Rationals),
    }
}

fn rep_of(cfg: &FileConfig, default: &str) -> Result<RepSpec, CliError> {
    cfg.rep.as_deref().unwrap_or(default).parse()
}

fn resolve_rep<F: Field>(
    f: &F,
    z: Option<&F::Elem>,
    x: &SpaceModel,
    group: &AlgGroup,
    spec: &RepSpec,
    seed: u64,
) -> Result<RepPoint<F::Elem>, CliError> {
    match spec {
        RepSpec::Trivial => Ok(RepPoint::trivial(f, group, arity(x))),
        RepSpec::Sample(i) => Ok(sample_rep(f, x, group, seed, *i)?),
        RepSpec::Literal(text) => {
            let elements = text
                .split(';')
                .map(|e| parse_element(f, z, group, e))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(RepPoint::new(group.clone(), elements)?)
        }
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn kv_table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

pub fn cotangent(cfg: &FileConfig) -> Result<Output, CliError> {
    let x = space_of(cfg)?;
    let group = group_of(cfg)?;
    let spec = rep_of(cfg, "trivial")?;
    let seed = cfg.seed.unwrap_or(0);
    let cutoff = cfg.cutoff.unwrap_or(DEFAULT_CUTOFF);
    with_field!(field_of(cfg, Some(&x))?, |f, z| {
        let rho = resolve_rep(f, z, &x, &group, &spec, seed)?;
        let c = cotangent_complex_truncated(f, &x, &rho, cutoff)?;
        let h = c.homology(f);
        let euler = euler_check(f, &x, &rho).ok();
        let tangent = tangent_dims(f, &x, &rho).ok();
        let rep = rho.format(f);
        let json = json!({
            "command": "cotangent",
            "space": x.to_string(),
            "group": group.to_string(),
            "field": f.name(),
            "rep": rep,
            "dims": c.dims(),
            "betti": h.betti,
            "euler": h.euler,
            "euler_check": euler,
            "tangent": tangent,
        });
        let mut rows = vec![
            ("space", x.to_string()),
            ("group", group.to_string()),
            ("field", f.name()),
            ("rep", rep.join("; ")),
            ("dims", join(c.dims())),
            ("betti", h.betti_string()),
            ("euler", h.euler.to_string()),
        ];
        if let Some(e) = &euler {
            let verdict = if e.pass { "pass" } else { "FAIL" };
            rows.push(("euler check", format!("{verdict} (expected {})", e.expected)));
        }
        if let Some(t) = &tangent {
            rows.push(("tangent", format!("z1 {} h1 {} h0 {}", t.z1, t.h1_group, t.fixed)));
        }
        let csv = std::iter::once("degree,chain_dim,betti\n".to_string())
            .chain(h.betti.iter().enumerate().map(|(i, b)| format!("{i},{},{b}\n", c.dims()[i])))
            .collect();
        Ok(Output {
            json,
            table: kv_table(&rows),
            csv,
        })
    })
}

pub fn certify(cfg: &FileConfig) -> Result<Output, CliError> {
    let x = space_of(cfg)?;
    let group = group_of(cfg)?;
    let spec = rep_of(cfg, "sample")?;
    let seed = cfg.seed.unwrap_or(0);
    let samples = cfg.samples.unwrap_or(20);
    let cutoff = cfg.cutoff.unwrap_or(DEFAULT_CUTOFF);
    with_field!(field_of(cfg, Some(&x))?, |f, z| {
        let reps = match spec {
            RepSpec::Sample(_) => sample_reps(f, &x, &group, seed, samples)?,
            other => vec![resolve_rep(f, z, &x, &group, &other, seed)?],
        };
        let rows = reps
            .par_iter()
            .map(|rho| {
                let cert = vanishing_certificate(f, &x, rho, cfg.declared_dim)?;
                let euler = euler_check(f, &x, rho).ok();
                let cohomology = match x {
                    SpaceModel::CyclicGroupSpace { p } => Some(cyclic_cohomology(f, p, &rho.assignment[0], cutoff)?),
                    _ => None,
                };
                Ok((cert, euler, cohomology))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let certs: Vec<_> = rows.iter().map(|(c, _, _)| c.clone()).collect();
        let summary = summarize(&certs);
        let euler_all = rows
            .iter()
            .map(|(_, e, _)| e.as_ref().map(|e| e.pass))
            .collect::<Option<Vec<bool>>>()
            .map(|v| v.iter().all(|&p| p));
        let entries: Vec<Value> = rows
            .iter()
            .enumerate()
            .map(|(i, (cert, euler, coh))| {
                json!({ "index": i, "certificate": cert, "euler_check": euler, "group_cohomology": coh })
            })
            .collect();
        let json = json!({
            "command": "certify",
            "space": x.to_string(),
            "group": group.to_string(),
            "field": f.name(),
            "seed": seed,
            "samples": rows.len(),
            "results": entries,
            "summary": summary,
            "all_euler_pass": euler_all,
        });
        let fmt_opt = |v: Option<usize>| v.map_or("-".to_string(), |b| b.to_string());
        let mut table = format!("{x} in {group} over {}, {} sample(s), seed {seed}\n", f.name(), rows.len());
        table.push_str("index  H                bound  euler  smooth  cohomology\n");
        let mut csv = String::from("index,h,vanishing_bound,euler_pass,smooth,group_cohomology\n");
        for (i, (cert, euler, coh)) in rows.iter().enumerate() {
            let e = euler.as_ref().map_or("-", |e| if e.pass { "pass" } else { "FAIL" });
            let coh_text = coh.as_ref().map_or("-".to_string(), |c| join(c));
            table.push_str(&format!(
                "{i:>5}  {:<15}  {:>5}  {e:>5}  {:>6}  {coh_text}\n",
                join(&cert.h),
                fmt_opt(cert.vanishing_bound),
                cert.smooth_flag
            ));
            csv.push_str(&format!(
                "{i},{},{},{e},{},{}\n",
                join(&cert.h),
                fmt_opt(cert.vanishing_bound),
                cert.smooth_flag,
                coh.as_ref().map_or(String::new(), |c| join(c))
            ));
        }
        table.push_str(&format!(
            "{}: max H = [{}], max vanishing bound = {}, smooth {}/{}\n",
            summary.qualifier,
            join(&summary.max_h),
            fmt_opt(summary.max_vanishing_bound),
            summary.smooth_count,
            summary.samples
        ));
        Ok(Output { json, table, csv })
    })
}

pub fn e2(cfg: &FileConfig) -> Result<Output, CliError> {
    let h: GradedDims = match (&cfg.h, &cfg.space) {
        (Some(text), _) => text.parse().map_err(|e| CliError::new("config.h", format!("{e}")))?,
        (None, Some(_)) => {
            let out = cotangent(cfg)?;
            let betti: Vec<usize> = serde_json::from_value(out.json["betti"].clone()).expect("betti is a list");
            GradedDims::from_betti(&betti)
        }
        (None, None) => return Err(missing("h")),
    };
    let p_max = cfg.pmax.unwrap_or(4);
    let n_max = cfg.nmax.unwrap_or(p_max * h.max_degree().unwrap_or(0).max(1));
    let page = e2_page(&h, p_max, n_max);
    let report = degeneration_report(&page);
    let json = json!({
        "command": "e2",
        "input": page.input,
        "p_max": p_max,
        "n_max": n_max,
        "lacunary_modulus": page.lacunary_modulus,
        "formality_assumed": page.formality_assumed,
        "entries": page.entries,
        "degeneration": report,
    });
    let mut table = format!("E2 = Sym(H), H = {h}; rows weight, columns total degree\n  w\\n");
    table.push_str(&(0..=n_max).map(|n| format!("{n:>6}")).collect::<String>());
    table.push('\n');
    for w in 0..=p_max {
        table.push_str(&format!("{w:>5}"));
        table.push_str(&(0..=n_max).map(|n| format!("{:>6}", page.get(w, n))).collect::<String>());
        table.push('\n');
    }
    let modulus = page.lacunary_modulus.map_or("none".to_string(), |m| m.to_string());
    table.push_str(&kv_table(&[
        ("lacunary modulus", modulus),
        ("degenerate", format!("{} ({})", report.degenerate, report.reason)),
        ("predicted degrees", join(&report.predicted_nonzero_degrees)),
        ("formality assumed", page.formality_assumed.to_string()),
    ]));
    Ok(Output {
        json,
        table,
        csv: page.to_csv(),
    })
}

/// `torus:GL2` or `surface:GL1,g=2`.
fn model_of(text: &str) -> Result<KoszulModel, CliError> {
    let err = |reason: &str| CliError::new("config.model", format!("cannot parse model {text:?}: {reason}"));
    let (kind, rest) = text.trim().split_once(':').ok_or_else(|| err("expected torus:<group> or surface:<group>,g=<n>"))?;
    match kind {
        "torus" => Ok(torus_model(&rest.parse::<AlgGroup>()?)?),
        "surface" => {
            let (g, genus) = rest.split_once(",g=").ok_or_else(|| err("missing ,g=<genus>"))?;
            let genus = genus.trim().parse().map_err(|_| err("bad genus"))?;
            Ok(surface_model(&g.parse::<AlgGroup>()?, genus)?)
        }
        _ => Err(err("unknown model kind")),
    }
}

pub fn koszul(cfg: &FileConfig) -> Result<Output, CliError> {
    let model = model_of(cfg.model.as_deref().ok_or_else(|| missing("model"))?)?;
    let cutoff = cfg.cutoff.unwrap_or(4);
    let budget = cfg.budget.unwrap_or(DEFAULT_BUDGET);
    with_field!(field_of(cfg, None)?, |f, _z| {
        let b = truncated_homology(f, &model, cutoff, budget)?;
        let json = json!({
            "command": "koszul",
            "model": model.label,
            "field": f.name(),
            "even_variables": model.even_names,
            "odd_variables": model.odd_names,
            "odd_weights": model.odd_weights,
            "relations": model.relation_strings(),
            "budget": budget,
            "homology": b,
        });
        let mut table = b.to_string();
        for n in &b.notes {
            table.push_str(&format!("note: {n}\n"));
        }
        Ok(Output {
            json,
            table,
            csv: b.to_csv(),
        })
    })
}

fn exponents_of(cfg: &FileConfig, group: Option<&AlgGroup>) -> Result<Vec<usize>, CliError> {
    if let Some(text) = &cfg.exponents {
        return text
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| CliError::new("config.exponents", format!("bad exponent {t:?}"))))
            .collect();
    }
    let group = group.ok_or_else(|| missing("group"))?;
    group.data().exponents.ok_or_else(|| {
        CliError::new(
            "config.unsupported",
            format!("no exponent convention for {group}; pass --exponents"),
        )
    })
}

pub fn catalog(cfg: &FileConfig) -> Result<Output, CliError> {
    if let Some(space) = &cfg.bounds {
        let x: SpaceModel = space.parse()?;
        let group = group_of(cfg)?;
        let bounds = global_bounds(&x, &group)?;
        let json = json!({
            "command": "catalog",
            "kind": "bounds",
            "space": x.to_string(),
            "group": group.to_string(),
            "bounds": bounds,
        });
        let mut csv = String::from("bound,status,conjectural,statement\n");
        for b in &bounds {
            let status = serde_json::to_value(b.status).expect("status serializes");
            csv.push_str(&format!(
                "{},{},{},\"{}\"\n",
                b.bound,
                status.as_str().unwrap_or_default(),
                b.conjectural,
                b.source
            ));
        }
        return Ok(Output {
            json,
            table: bounds_markdown(&x, &group, &bounds),
            csv,
        });
    }
    let r = cfg.cpr.ok_or_else(|| missing("bounds or --cpr"))?;
    let group = cfg.group.as_deref().map(str::parse::<AlgGroup>).transpose()?;
    let exponents = exponents_of(cfg, group.as_ref())?;
    let top: usize = exponents.iter().map(|&m| (1..=r).map(|s| 2 * r * m + 2 * s - 1).sum::<usize>()).sum();
    let cutoff = cfg.cutoff.unwrap_or(top);
    let series = cpr_char_homology(&exponents, r, cutoff);
    let local = group.as_ref().map(|g| cpr_local_system_homology(g, r));
    let json = json!({
        "command": "catalog",
        "kind": "cpr",
        "r": r,
        "group": group.as_ref().map(ToString::to_string),
        "exponents": exponents,
        "character_homology": series,
        "local_system_homology": local,
    });
    let mut table = format!("CP^{r}, exponents [{}]\n\n", join(&exponents));
    table.push_str(&series_markdown(&series));
    if let Some(l) = &local {
        table.push_str("\nH_{i+1}(CP^r, g*)\n\n| i | dim |\n|---|---|\n");
        for (i, d) in l {
            table.push_str(&format!("| {i} | {d} |\n"));
        }
    }
    let csv = std::iter::once("degree,dim\n".to_string())
        .chain(series.dims.iter().map(|(d, n)| format!("{d},{n}\n")))
        .collect();
    Ok(Output { json, table, csv })
}
