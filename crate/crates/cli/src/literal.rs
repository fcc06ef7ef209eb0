//! Field-element and group-element literals.
//!
//! Scalars: integers, `a/b`, and (over `Q(ζ_N)`) polynomials in `z`, e.g.
//! `-z^2 + 1/2*z - 3`. Elements: `id`, `-id`, `diag:a,b`, `mat:a,b/c,d`,
//! with `|` separating the blocks of a product group.

use rephom::exact::{DenseMatrix, Field};
use rephom::liegroups::{AlgGroup, GroupElement};

use crate::error::CliError;

fn rep_error(input: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::new("config.rep", format!("cannot parse {input:?}: {reason}"))
}

/// Parses a scalar; `z` is the field's distinguished root of unity, if any.
pub fn parse_scalar<F: Field>(f: &F, z: Option<&F::Elem>, input: &str) -> Result<F::Elem, CliError> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(rep_error(input, "empty scalar"));
    }
    // Split into signed terms, keeping signs that follow '^'.
    let mut terms = Vec::new();
    let mut current = String::new();
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > 0 && !s[..i].ends_with('^') {
            terms.push(std::mem::take(&mut current));
        }
        current.push(c);
    }
    terms.push(current);
    let mut acc = f.zero();
    for t in terms {
        acc = f.add(&acc, &parse_term(f, z, input, &t)?);
    }
    Ok(acc)
}

fn parse_term<F: Field>(f: &F, z: Option<&F::Elem>, input: &str, term: &str) -> Result<F::Elem, CliError> {
    let (negative, body) = match term.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, term.strip_prefix('+').unwrap_or(term)),
    };
    let (coef_text, power) = match body.find('z') {
        Some(pos) => {
            let exp_text = &body[pos + 1..];
            let exp: i64 = match exp_text.strip_prefix('^') {
                Some(e) => e.parse().map_err(|_| rep_error(input, format!("bad exponent {e:?}")))?,
                None if exp_text.is_empty() => 1,
                None => return Err(rep_error(input, format!("unexpected {exp_text:?} after z"))),
            };
            (body[..pos].strip_suffix('*').unwrap_or(&body[..pos]), Some(exp))
        }
        None => (body, None),
    };
    let coef = if coef_text.is_empty() {
        if power.is_none() {
            return Err(rep_error(input, "empty term"));
        }
        f.one()
    } else {
        let (num, den) = match coef_text.split_once('/') {
            Some((n, d)) => (n, d),
            None => (coef_text, "1"),
        };
        let num: i64 = num.parse().map_err(|_| rep_error(input, format!("bad number {coef_text:?}")))?;
        let den: i64 = den.parse().map_err(|_| rep_error(input, format!("bad number {coef_text:?}")))?;
        f.from_rational(num, den)
            .ok_or_else(|| rep_error(input, format!("{coef_text} has a zero denominator in {}", f.name())))?
    };
    let value = match power {
        None => coef,
        Some(e) => {
            let z = z.ok_or_else(|| rep_error(input, format!("z is not available in {}", f.name())))?;
            let base = if e < 0 { f.inv(z).expect("roots of unity are units") } else { z.clone() };
            f.mul(&coef, &f.pow(&base, e.unsigned_abs()))
        }
    };
    Ok(if negative { f.neg(&value) } else { value })
}

fn parse_block<F: Field>(
    f: &F,
    z: Option<&F::Elem>,
    factor: &AlgGroup,
    text: &str,
) -> Result<DenseMatrix<F::Elem>, CliError> {
    let n = factor.matrix_size();
    let t = text.trim();
    let scalars = |list: &str| -> Result<Vec<F::Elem>, CliError> {
        list.split(',').map(|x| parse_scalar(f, z, x)).collect()
    };
    match t {
        "id" | "1" => return Ok(DenseMatrix::identity(f, n)),
        "-id" | "-1" => return Ok(DenseMatrix::identity(f, n).scale(f, &f.from_i64(-1))),
        _ => {}
    }
    if let Some(list) = t.strip_prefix("diag:") {
        let d = scalars(list)?;
        if d.len() != n {
            return Err(rep_error(text, format!("{factor} needs {n} diagonal entries, got {}", d.len())));
        }
        return Ok(DenseMatrix::diagonal(f, &d));
    }
    if let Some(rows) = t.strip_prefix("mat:") {
        let rows: Vec<Vec<F::Elem>> = rows.split('/').map(scalars).collect::<Result<_, _>>()?;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(rep_error(text, format!("{factor} needs a {n}x{n} matrix")));
        }
        return Ok(DenseMatrix::from_rows(rows));
    }
    Err(rep_error(text, "expected id, -id, diag:... or mat:..."))
}

/// One group element; `id`/`-id` without `|` apply to every factor.
pub fn parse_element<F: Field>(
    f: &F,
    z: Option<&F::Elem>,
    group: &AlgGroup,
    text: &str,
) -> Result<GroupElement<F::Elem>, CliError> {
    let factors = group.factors();
    let mut parts: Vec<&str> = text.split('|').collect();
    if parts.len() == 1 && factors.len() > 1 && matches!(parts[0].trim(), "id" | "-id") {
        parts = vec![parts[0]; factors.len()];
    }
    if parts.len() != factors.len() {
        return Err(rep_error(text, format!("{group} has {} factors, got {} blocks", factors.len(), parts.len())));
    }
    let blocks = factors
        .iter()
        .zip(parts)
        .map(|(g, p)| parse_block(f, z, g, p))
        .collect::<Result<Vec<_>, _>>()?;
    GroupElement::new(f, group, blocks).map_err(|e| rep_error(text, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rephom::exact::{Cyclotomic, PrimeField, Rationals};

    #[test]
    fn rational_scalars() {
        let q = Rationals;
        assert_eq!(q.format(&parse_scalar(&q, None, "3/4").unwrap()), "3/4");
        assert_eq!(q.format(&parse_scalar(&q, None, " -2 + 1/2 ").unwrap()), "-3/2");
        assert!(parse_scalar(&q, None, "z").is_err());
        assert!(parse_scalar(&q, None, "1/0").is_err());
        assert!(parse_scalar(&q, None, "").is_err());
    }

    #[test]
    fn cyclotomic_scalars() {
        let f = Cyclotomic::new(5);
        let z = f.zeta();
        let a = parse_scalar(&f, Some(&z), "z^2 - 1/2*z + 3").unwrap();
        let expected = f.add(&f.sub(&f.pow(&z, 2), &f.mul(&Field::from_rational(&f, 1, 2).unwrap(), &z)), &f.from_i64(3));
        assert_eq!(a, expected);
        let inv = parse_scalar(&f, Some(&z), "z^-1").unwrap();
        assert!(f.is_one(&f.mul(&inv, &z)));
        assert_eq!(parse_scalar(&f, Some(&z), "-z").unwrap(), f.neg(&z));
    }

    #[test]
    fn modular_scalars() {
        let f = PrimeField::new(13).unwrap();
        assert_eq!(parse_scalar(&f, None, "1/2").unwrap(), 7);
        assert_eq!(parse_scalar(&f, None, "-1").unwrap(), 12);
    }

    #[test]
    fn elements() {
        let q = Rationals;
        let gl2 = AlgGroup::GL(2);
        let m = parse_element(&q, None, &gl2, "mat:1,1/0,1").unwrap();
        assert_eq!(m.format(&q), parse_element(&q, None, &gl2, "mat: 1, 1 / 0, 1").unwrap().format(&q));
        assert!(parse_element(&q, None, &gl2, "-id").is_ok());
        assert!(parse_element(&q, None, &gl2, "diag:1").is_err());
        assert!(parse_element(&q, None, &gl2, "mat:1,2/2,4").is_err());
        assert!(parse_element(&q, None, &AlgGroup::SL(2), "diag:2,1").is_err());
        let prod: AlgGroup = "GL2xT^1".parse().unwrap();
        assert!(parse_element(&q, None, &prod, "diag:2,3|diag:5").is_ok());
        assert!(parse_element(&q, None, &prod, "id").is_ok());
        assert!(parse_element(&q, None, &prod, "diag:2,3").is_err());
    }
}
