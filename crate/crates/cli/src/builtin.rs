use anyhow::{bail, Result};
use koszul_core::dg::{
    ce_coalgebra, dual_numbers, exterior_algebra, exterior_coalgebra, ground_algebra, ground_coalgebra, sym_algebra,
    universal_envelope, Family, LiePresentation, Truncation,
};
use koszul_core::linalg::Field;

use crate::format::Structure;

#[derive(Clone, Debug, Default)]
pub struct Params {
    pub dim: Option<usize>,
    pub max_weight: Option<u32>,
    pub lie: Option<String>,
    pub n: Option<u32>,
}

pub const FAMILIES: &[&str] =
    &["sym", "ext-coalgebra", "ext-algebra", "dual-numbers", "ce", "envelope", "lie", "ground-algebra", "ground-coalgebra"];

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    match v {
        Some(x) => Ok(x),
        None => bail!("builtin {family} needs --{flag}"),
    }
}

pub fn build(family: &str, field: Field, p: &Params) -> Result<Structure> {
    let lie = || -> Result<LiePresentation> {
        let name = p.lie.as_deref().unwrap_or("sl2");
        Ok(LiePresentation::by_name(name, field)?)
    };
    Ok(match family {
        "sym" => Structure::Algebra(sym_algebra(field, need(p.dim, "dim", family)?, need(p.max_weight, "max-weight", family)?)),
        "ext-coalgebra" => Structure::Coalgebra(exterior_coalgebra(field, need(p.dim, "dim", family)?)),
        "ext-algebra" => Structure::Algebra(exterior_algebra(field, need(p.dim, "dim", family)?)),
        "dual-numbers" => Structure::Algebra(dual_numbers(field)),
        "ce" => Structure::Coalgebra(ce_coalgebra(&lie()?)?),
        "envelope" => Structure::Algebra(universal_envelope(&lie()?, need(p.n, "N", family)?)?),
        "lie" => Structure::Lie(lie()?),
        "ground-algebra" => Structure::Algebra(ground_algebra(field)),
        "ground-coalgebra" => Structure::Coalgebra(ground_coalgebra(field)),
        other => bail!("unknown family '{other}'; known: {}", FAMILIES.join(", ")),
    })
}

/// The builder output a tagged structure claims to be, if the tag determines it.
pub fn regenerate(family: &Family, s: &Structure) -> Option<Structure> {
    let (field, truncation, is_algebra) = match s {
        Structure::Algebra(a) => (a.field(), a.truncation(), true),
        Structure::Coalgebra(c) => (c.field(), c.truncation(), false),
        _ => return None,
    };
    let p = match (family, truncation) {
        (Family::Sym { dim }, Truncation::Weight(w)) => Params { dim: Some(*dim), max_weight: Some(w), ..Params::default() },
        (Family::Envelope { lie }, Truncation::Filtered(n)) => Params { lie: Some(lie.clone()), n: Some(n), ..Params::default() },
        (Family::Ce { lie }, _) => Params { lie: Some(lie.clone()), ..Params::default() },
        (Family::ExtCoalgebra { dim } | Family::ExtAlgebra { dim }, _) => Params { dim: Some(*dim), ..Params::default() },
        _ => Params::default(),
    };
    let name = match (family, is_algebra) {
        (Family::Ground, true) => "ground-algebra",
        (Family::Ground, false) => "ground-coalgebra",
        (Family::Sym { .. }, _) => "sym",
        (Family::ExtCoalgebra { .. }, _) => "ext-coalgebra",
        (Family::ExtAlgebra { .. }, _) => "ext-algebra",
        (Family::DualNumbers, _) => "dual-numbers",
        (Family::Ce { .. }, _) => "ce",
        (Family::Envelope { .. }, _) => "envelope",
    };
    // a tag that cannot be rebuilt (wrong truncation, unknown Lie algebra) never matches
    Some(build(name, field, &p).unwrap_or_else(|_| Structure::Lie(LiePresentation::abelian(0, field))))
}
