//! The structure file format: one directive per line, `#` starts a comment.
//!
//! ```text
//! field Q                      # or a prime, e.g. `field 101`
//! kind algebra                 # algebra | coalgebra | lie | tau
//! family sym 2                 # optional builder tag, checked against the data
//! truncation weight 4          # exact | weight N | word-length N | filtered N
//! window 0..1 -1..4            # optional default window: degrees, then weights
//! elem 1 0 0                   # name, degree, weight (`-` for none)
//! unit 1                       # algebra: unit; coalgebra: `coaugmentation`
//! augment 1 1                  # algebra: ε(e) = c; coalgebra: `counit`
//! mul x1 x1 x1^2 1             # e_a e_b has coefficient c on e_t
//! undefined x1^2 x1^3          # product beyond the truncation
//! delta c a b 1                # Δ(c) has coefficient 1 on a ⊗ b
//! d a b -1/2                   # d(a) has coefficient -1/2 on b
//! bracket e f h 1              # lie: [e, f] has coefficient 1 on h
//! tau v1 x1 1                  # tau: τ(v1) has coefficient 1 on x1
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use koszul_core::dg::{DgAlgebra, DgCoalgebra, Family, LiePresentation, Truncation};
use koszul_core::graded::{BasisElem, GradedSpace, Window};
use koszul_core::linalg::{parse_scalar, Field, Scalar, SparseVec};

/// A parse failure with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug)]
pub enum Structure {
    Algebra(DgAlgebra),
    Coalgebra(DgCoalgebra),
    Lie(LiePresentation),
    Tau(TauFile),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Algebra(_) => "algebra",
            Structure::Coalgebra(_) => "coalgebra",
            Structure::Lie(_) => "lie",
            Structure::Tau(_) => "tau",
        }
    }
}

/// The values of a twisting cochain by basis names, resolved once both sides are known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauFile {
    pub field: Field,
    pub entries: Vec<(String, String, Scalar)>,
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub structure: Structure,
    pub window: Option<Window>,
}

#[derive(Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let body = match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Tok { text: &body[s..i], col: body[..s].chars().count() + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Tok { text: &body[s..], col: body[..s].chars().count() + 1 });
    }
    out
}

struct Ctx {
    line: usize,
}

impl Ctx {
    fn err<T>(&self, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: self.line, col, message: message.into() })
    }
}

#[derive(Default)]
struct Raw {
    field: Option<Field>,
    kind: Option<String>,
    name: Option<String>,
    family: Option<(Family, usize, usize)>,
    truncation: Option<Truncation>,
    window: Option<Window>,
    elems: Vec<BasisElem>,
    unit: Option<(String, usize, usize)>,
    augment: Vec<(String, Scalar, usize, usize)>,
    mul: Vec<([String; 3], Scalar, usize, [usize; 3])>,
    undefined: Vec<([String; 2], usize, [usize; 2])>,
    delta: Vec<([String; 3], Scalar, usize, [usize; 3])>,
    d: Vec<([String; 2], Scalar, usize, [usize; 2])>,
    bracket: Vec<([String; 3], Scalar, usize, [usize; 3])>,
    tau: Vec<(String, String, Scalar)>,
}

fn parse_range(ctx: &Ctx, t: Tok) -> Result<(i32, i32), ParseError> {
    let (a, b) = match t.text.split_once("..") {
        Some(p) => p,
        None => return ctx.err(t.col, format!("expected a range LO..HI, found '{}'", t.text)),
    };
    match (a.parse(), b.parse()) {
        (Ok(a), Ok(b)) if a <= b => Ok((a, b)),
        _ => ctx.err(t.col, format!("bad range '{}'", t.text)),
    }
}

/// Parses `DLO..DHI[,WLO..WHI]` as used by the `--window` flag.
pub fn parse_window(s: &str) -> Result<Window, String> {
    let ctx = Ctx { line: 1 };
    let mut parts = s.split(',');
    let tok = |text| Tok { text, col: 1 };
    let degrees = parse_range(&ctx, tok(parts.next().unwrap_or(""))).map_err(|e| e.message)?;
    let weights = match parts.next() {
        Some(w) => Some(parse_range(&ctx, tok(w)).map_err(|e| e.message)?),
        None => None,
    };
    if parts.next().is_some() {
        return Err("a window has at most a degree range and a weight range".into());
    }
    Ok(Window::new(degrees, weights))
}

pub fn parse_field(s: &str) -> Result<Field, String> {
    if s == "Q" || s == "q" {
        return Ok(Field::Rational);
    }
    let p: u64 = s.parse().map_err(|_| format!("field must be Q or a prime, found '{s}'"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

fn parse_family(ctx: &Ctx, args: &[Tok]) -> Result<Family, ParseError> {
    let head = args[0];
    let num = |i: usize| -> Result<usize, ParseError> {
        match args.get(i) {
            Some(t) => t.text.parse().or_else(|_| ctx.err(t.col, format!("expected a dimension, found '{}'", t.text))),
            None => ctx.err(head.col, "missing dimension"),
        }
    };
    let lie = |i: usize| -> Result<String, ParseError> {
        match args.get(i) {
            Some(t) => Ok(t.text.to_string()),
            None => ctx.err(head.col, "missing Lie algebra name"),
        }
    };
    Ok(match head.text {
        "ground" => Family::Ground,
        "sym" => Family::Sym { dim: num(1)? },
        "ext-coalgebra" => Family::ExtCoalgebra { dim: num(1)? },
        "ext-algebra" => Family::ExtAlgebra { dim: num(1)? },
        "dual-numbers" => Family::DualNumbers,
        "ce" => Family::Ce { lie: lie(1)? },
        "envelope" => Family::Envelope { lie: lie(1)? },
        other => return ctx.err(head.col, format!("unknown family '{other}'")),
    })
}

fn family_words(f: &Family) -> String {
    match f {
        Family::Ground => "ground".into(),
        Family::Sym { dim } => format!("sym {dim}"),
        Family::ExtCoalgebra { dim } => format!("ext-coalgebra {dim}"),
        Family::ExtAlgebra { dim } => format!("ext-algebra {dim}"),
        Family::DualNumbers => "dual-numbers".into(),
        Family::Ce { lie } => format!("ce {lie}"),
        Family::Envelope { lie } => format!("envelope {lie}"),
    }
}

fn expect_args(ctx: &Ctx, head: Tok, args: &[Tok], n: usize) -> Result<(), ParseError> {
    if args.len() != n {
        let col = args.get(n).map_or(head.col, |t| t.col);
        return ctx.err(col, format!("'{}' takes {n} arguments, found {}", head.text, args.len()));
    }
    Ok(())
}

/// Parses a structure file; `field_override` replaces the declared field.
pub fn parse(text: &str, field_override: Option<Field>) -> Result<Parsed, ParseError> {
    let mut raw = Raw::default();
    for (ln, line) in text.lines().enumerate() {
        let ctx = Ctx { line: ln + 1 };
        let toks = tokens(line);
        let Some((&head, args)) = toks.split_first() else { continue };
        let fld = raw.field.unwrap_or(Field::Rational);
        let scalar = |t: Tok| -> Result<Scalar, ParseError> {
            parse_scalar(fld, t.text).or_else(|e| ctx.err(t.col, format!("bad coefficient '{}': {e}", t.text)))
        };
        let int = |t: Tok| -> Result<i32, ParseError> {
            t.text.parse().or_else(|_| ctx.err(t.col, format!("expected an integer, found '{}'", t.text)))
        };
        let s = |t: Tok| t.text.to_string();
        match head.text {
            "field" => {
                expect_args(&ctx, head, args, 1)?;
                if raw.field.is_some() {
                    return ctx.err(head.col, "field declared twice");
                }
                if !raw.elems.is_empty() || !raw.tau.is_empty() {
                    return ctx.err(head.col, "field must precede the data");
                }
                let declared = parse_field(args[0].text).or_else(|e| ctx.err(args[0].col, e))?;
                raw.field = Some(field_override.unwrap_or(declared));
            }
            "kind" => {
                expect_args(&ctx, head, args, 1)?;
                match args[0].text {
                    "algebra" | "coalgebra" | "lie" | "tau" => raw.kind = Some(s(args[0])),
                    other => return ctx.err(args[0].col, format!("unknown kind '{other}'")),
                }
            }
            "name" => {
                expect_args(&ctx, head, args, 1)?;
                raw.name = Some(s(args[0]));
            }
            "family" => {
                if args.is_empty() {
                    return ctx.err(head.col, "'family' needs a family name");
                }
                raw.family = Some((parse_family(&ctx, args)?, ctx.line, head.col));
            }
            "truncation" => {
                let t = match args.first().map(|t| t.text) {
                    Some("exact") => {
                        expect_args(&ctx, head, args, 1)?;
                        Truncation::Exact
                    }
                    Some(k @ ("weight" | "word-length" | "filtered")) => {
                        expect_args(&ctx, head, args, 2)?;
                        let n: u32 = args[1]
                            .text
                            .parse()
                            .or_else(|_| ctx.err(args[1].col, format!("expected a bound, found '{}'", args[1].text)))?;
                        match k {
                            "weight" => Truncation::Weight(n),
                            "word-length" => Truncation::WordLength(n),
                            _ => Truncation::Filtered(n),
                        }
                    }
                    _ => return ctx.err(args.first().map_or(head.col, |t| t.col), "expected exact, weight N, word-length N or filtered N"),
                };
                raw.truncation = Some(t);
            }
            "window" => {
                if args.is_empty() || args.len() > 2 {
                    return ctx.err(head.col, "'window' takes a degree range and an optional weight range");
                }
                let degrees = parse_range(&ctx, args[0])?;
                let weights = args.get(1).map(|t| parse_range(&ctx, *t)).transpose()?;
                raw.window = Some(Window::new(degrees, weights));
            }
            "elem" => {
                expect_args(&ctx, head, args, 3)?;
                if raw.elems.iter().any(|e| e.name == args[0].text) {
                    return ctx.err(args[0].col, format!("duplicate basis element '{}'", args[0].text));
                }
                let weight = if args[2].text == "-" { None } else { Some(int(args[2])?) };
                raw.elems.push(BasisElem::new(args[0].text, int(args[1])?, weight));
            }
            "unit" | "coaugmentation" => {
                expect_args(&ctx, head, args, 1)?;
                raw.unit = Some((s(args[0]), ctx.line, args[0].col));
            }
            "augment" | "counit" => {
                expect_args(&ctx, head, args, 2)?;
                raw.augment.push((s(args[0]), scalar(args[1])?, ctx.line, args[0].col));
            }
            "mul" | "delta" | "bracket" => {
                expect_args(&ctx, head, args, 4)?;
                let entry = ([s(args[0]), s(args[1]), s(args[2])], scalar(args[3])?, ctx.line, [args[0].col, args[1].col, args[2].col]);
                match head.text {
                    "mul" => raw.mul.push(entry),
                    "delta" => raw.delta.push(entry),
                    _ => raw.bracket.push(entry),
                }
            }
            "undefined" => {
                expect_args(&ctx, head, args, 2)?;
                raw.undefined.push(([s(args[0]), s(args[1])], ctx.line, [args[0].col, args[1].col]));
            }
            "d" => {
                expect_args(&ctx, head, args, 3)?;
                raw.d.push(([s(args[0]), s(args[1])], scalar(args[2])?, ctx.line, [args[0].col, args[1].col]));
            }
            "tau" => {
                expect_args(&ctx, head, args, 3)?;
                raw.tau.push((s(args[0]), s(args[1]), scalar(args[2])?));
            }
            other => return ctx.err(head.col, format!("unknown directive '{other}'")),
        }
    }
    build(raw)
}

fn build(raw: Raw) -> Result<Parsed, ParseError> {
    let at = |line: usize, col: usize, message: String| ParseError { line, col, message };
    let top = |message: &str| ParseError { line: 1, col: 1, message: message.into() };
    let field = raw.field.ok_or_else(|| top("missing 'field' directive"))?;
    let kind = raw.kind.clone().ok_or_else(|| top("missing 'kind' directive"))?;
    let index = |name: &str, line: usize, col: usize| -> Result<usize, ParseError> {
        raw.elems
            .iter()
            .position(|e| e.name == name)
            .ok_or_else(|| at(line, col, format!("unknown basis element '{name}'")))
    };
    let n = raw.elems.len();
    let structure = match kind.as_str() {
        "tau" => Structure::Tau(TauFile { field, entries: raw.tau.clone() }),
        "lie" => {
            let basis: Vec<String> = raw.elems.iter().map(|e| e.name.clone()).collect();
            let mut brackets = Vec::new();
            for ([a, b, c], x, line, col) in &raw.bracket {
                let (i, j, k) = (index(a, *line, col[0])?, index(b, *line, col[1])?, index(c, *line, col[2])?);
                if i >= j {
                    return Err(at(*line, col[0], "list brackets [a, b] with a before b in the basis".into()));
                }
                brackets.push((i, j, k, x.clone()));
            }
            let mut grouped: Vec<(usize, usize, SparseVec)> = Vec::new();
            for (i, j, k, x) in brackets {
                let add = SparseVec::unit(k, field).scale(&x);
                match grouped.iter_mut().find(|g| g.0 == i && g.1 == j) {
                    Some(g) => g.2 = g.2.add_scaled(&field.one(), &add),
                    None => grouped.push((i, j, add)),
                }
            }
            let name = raw.name.clone().unwrap_or_else(|| "lie".into());
            Structure::Lie(LiePresentation::new(&name, field, basis, grouped).map_err(|e| top(&e.to_string()))?)
        }
        "algebra" | "coalgebra" => {
            let space = Arc::new(GradedSpace::new(raw.elems.clone()).map_err(|e| top(&e.to_string()))?);
            let (unit_name, uline, ucol) = raw.unit.clone().ok_or_else(|| top("missing unit/coaugmentation"))?;
            let unit = index(&unit_name, uline, ucol)?;
            let mut aug = Vec::new();
            for (name, x, line, col) in &raw.augment {
                aug.push((index(name, *line, *col)?, x.clone()));
            }
            let augmentation = SparseVec::from_pairs(aug);
            let mut d = vec![Vec::new(); n];
            for ([a, b], x, line, col) in &raw.d {
                d[index(a, *line, col[0])?].push((index(b, *line, col[1])?, x.clone()));
            }
            let d: Vec<SparseVec> = d.into_iter().map(SparseVec::from_pairs).collect();
            let truncation = raw.truncation.unwrap_or(Truncation::Exact);
            if kind == "algebra" {
                if !raw.delta.is_empty() {
                    return Err(at(raw.delta[0].2, 1, "'delta' in an algebra file".into()));
                }
                let mut mult: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n * n];
                let mut defined = vec![true; n * n];
                for ([a, b, c], x, line, col) in &raw.mul {
                    let (i, j) = (index(a, *line, col[0])?, index(b, *line, col[1])?);
                    mult[i * n + j].push((index(c, *line, col[2])?, x.clone()));
                }
                for ([a, b], line, col) in &raw.undefined {
                    let (i, j) = (index(a, *line, col[0])?, index(b, *line, col[1])?);
                    if !mult[i * n + j].is_empty() {
                        return Err(at(*line, col[0], format!("product {a}·{b} is both defined and undefined")));
                    }
                    defined[i * n + j] = false;
                }
                let table = mult.into_iter().zip(defined).map(|(v, ok)| ok.then(|| SparseVec::from_pairs(v))).collect();
                let a = DgAlgebra::new(field, space, unit, table, d, augmentation, truncation).map_err(|e| top(&e.to_string()))?;
                Structure::Algebra(a)
            } else {
                if !raw.mul.is_empty() {
                    return Err(at(raw.mul[0].2, 1, "'mul' in a coalgebra file".into()));
                }
                let mut comult = vec![Vec::new(); n];
                for ([c, a, b], x, line, col) in &raw.delta {
                    comult[index(c, *line, col[0])?].push((index(a, *line, col[1])?, index(b, *line, col[2])?, x.clone()));
                }
                let c = DgCoalgebra::new(field, space, unit, comult, d, augmentation, truncation).map_err(|e| top(&e.to_string()))?;
                Structure::Coalgebra(c)
            }
        }
        _ => unreachable!(),
    };
    let structure = match raw.family {
        None => structure,
        Some((family, line, col)) => {
            let tagged = match structure {
                Structure::Algebra(a) => Structure::Algebra(a.with_family(family.clone())),
                Structure::Coalgebra(c) => Structure::Coalgebra(c.with_family(family.clone())),
                other => return Err(at(line, col, format!("'family' does not apply to kind {}", other.kind()))),
            };
            if let Some(expected) = crate::builtin::regenerate(&family, &tagged) {
                if write(&tagged, None) != write(&expected, None) {
                    return Err(at(line, col, format!("data does not match the family '{}'", family_words(&family))));
                }
            }
            tagged
        }
    };
    Ok(Parsed { structure, window: raw.window })
}

fn field_word(f: Field) -> String {
    match f {
        Field::Rational => "Q".into(),
        other => other.characteristic().to_string(),
    }
}

fn elem_lines(out: &mut String, space: &GradedSpace) {
    for e in space.elems() {
        let w = e.bidegree.weight.map_or("-".to_string(), |w| w.to_string());
        let _ = writeln!(out, "elem {} {} {}", e.name, e.bidegree.degree, w);
    }
}

fn truncation_words(t: Truncation) -> String {
    match t {
        Truncation::Exact => "exact".into(),
        Truncation::Weight(n) => format!("weight {n}"),
        Truncation::WordLength(n) => format!("word-length {n}"),
        Truncation::Filtered(n) => format!("filtered {n}"),
    }
}

/// Canonical text of a structure; parsing it back gives the same structure.
pub fn write(s: &Structure, window: Option<&Window>) -> String {
    let mut out = String::new();
    let header = |out: &mut String, field: Field, kind: &str| {
        let _ = writeln!(out, "field {}", field_word(field));
        let _ = writeln!(out, "kind {kind}");
    };
    let window_line = |out: &mut String| {
        if let Some(w) = window {
            let _ = match w.weights {
                Some((a, b)) => writeln!(out, "window {}..{} {a}..{b}", w.degrees.0, w.degrees.1),
                None => writeln!(out, "window {}..{}", w.degrees.0, w.degrees.1),
            };
        }
    };
    match s {
        Structure::Algebra(a) => {
            header(&mut out, a.field(), "algebra");
            if let Some(f) = a.family() {
                let _ = writeln!(out, "family {}", family_words(f));
            }
            let _ = writeln!(out, "truncation {}", truncation_words(a.truncation()));
            window_line(&mut out);
            elem_lines(&mut out, a.space());
            let _ = writeln!(out, "unit {}", a.name(a.unit()));
            for (i, x) in a.augmentation().iter() {
                let _ = writeln!(out, "augment {} {}", a.name(i), x.render());
            }
            let n = a.dim();
            for i in 0..n {
                for j in 0..n {
                    match a.product_entry(i, j) {
                        Some(v) => {
                            for (k, x) in v.iter() {
                                let _ = writeln!(out, "mul {} {} {} {}", a.name(i), a.name(j), a.name(k), x.render());
                            }
                        }
                        None => {
                            let _ = writeln!(out, "undefined {} {}", a.name(i), a.name(j));
                        }
                    }
                }
            }
            for i in 0..n {
                for (k, x) in a.d(i).iter() {
                    let _ = writeln!(out, "d {} {} {}", a.name(i), a.name(k), x.render());
                }
            }
        }
        Structure::Coalgebra(c) => {
            header(&mut out, c.field(), "coalgebra");
            if let Some(f) = c.family() {
                let _ = writeln!(out, "family {}", family_words(f));
            }
            let _ = writeln!(out, "truncation {}", truncation_words(c.truncation()));
            window_line(&mut out);
            elem_lines(&mut out, c.space());
            let _ = writeln!(out, "coaugmentation {}", c.name(c.coaugmentation()));
            for (i, x) in c.counit().iter() {
                let _ = writeln!(out, "counit {} {}", c.name(i), x.render());
            }
            for i in 0..c.dim() {
                for (p, q, x) in c.coproduct(i) {
                    let _ = writeln!(out, "delta {} {} {} {}", c.name(i), c.name(*p), c.name(*q), x.render());
                }
            }
            for i in 0..c.dim() {
                for (k, x) in c.d(i).iter() {
                    let _ = writeln!(out, "d {} {} {}", c.name(i), c.name(k), x.render());
                }
            }
        }
        Structure::Lie(g) => {
            header(&mut out, g.field, "lie");
            let _ = writeln!(out, "name {}", g.name);
            window_line(&mut out);
            for b in &g.basis {
                let _ = writeln!(out, "elem {b} -1 1");
            }
            for i in 0..g.dim() {
                for j in i + 1..g.dim() {
                    for (k, x) in g.bracket(i, j).iter() {
                        let _ = writeln!(out, "bracket {} {} {} {}", g.basis[i], g.basis[j], g.basis[k], x.render());
                    }
                }
            }
        }
        Structure::Tau(t) => {
            header(&mut out, t.field, "tau");
            window_line(&mut out);
            for (c, a, x) in &t.entries {
                let _ = writeln!(out, "tau {c} {a} {}", x.render());
            }
        }
    }
    out
}

/// Resolves a τ file against its coalgebra and algebra.
pub fn resolve_tau(t: &TauFile, c: &DgCoalgebra, a: &DgAlgebra) -> Result<Vec<SparseVec>, String> {
    if t.field != c.field() || t.field != a.field() {
        return Err("τ, coalgebra and algebra must share a field".into());
    }
    let mut cols = vec![Vec::new(); c.dim()];
    for (cn, an, x) in &t.entries {
        let i = c.space().index_of(cn).ok_or_else(|| format!("τ refers to unknown coalgebra element '{cn}'"))?;
        let j = a.space().index_of(an).ok_or_else(|| format!("τ refers to unknown algebra element '{an}'"))?;
        cols[i].push((j, x.clone()));
    }
    Ok(cols.into_iter().map(SparseVec::from_pairs).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_q(text: &str) -> Result<Parsed, ParseError> {
        parse(text, None)
    }

    #[test]
    fn positions_are_reported() {
        let e = parse_q("field Q\nkind algebra\nelem 1 0 zero\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 10));
        let e = parse_q("field Q\nkind algebra\nelem 1 0 0\nunit 1\nmul 1 y 1 1\n").unwrap_err();
        assert_eq!((e.line, e.col), (5, 7));
        assert!(e.message.contains("unknown basis element 'y'"));
        let e = parse_q("field 12\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 7));
    }

    #[test]
    fn windows() {
        assert_eq!(parse_window("0..2,-1..4").unwrap(), Window::new((0, 2), Some((-1, 4))));
        assert_eq!(parse_window("-3..0").unwrap(), Window::new((-3, 0), None));
        assert!(parse_window("2..1").is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# dual numbers\nfield Q\nkind algebra   # note\n\nelem 1 0 0\nelem x 0 1\nunit 1\naugment 1 1\nmul 1 1 1 1\nmul 1 x x 1\nmul x 1 x 1\n";
        let p = parse(text, None).unwrap();
        match p.structure {
            Structure::Algebra(a) => assert_eq!(a.dim(), 2),
            _ => panic!(),
        }
    }

    #[test]
    fn builtins_round_trip() {
        use crate::builtin::{build, Params, FAMILIES};
        let p = Params { dim: Some(2), max_weight: Some(3), lie: None, n: Some(2) };
        let window = Window::new((0, 1), Some((-1, 3)));
        for family in FAMILIES {
            for field in [Field::Rational, Field::prime(101).unwrap()] {
                let Ok(s) = build(family, field, &p) else { continue };
                let text = write(&s, Some(&window));
                let again = parse(&text, None).unwrap_or_else(|e| panic!("{family}: {e}\n{text}"));
                assert_eq!(again.window, Some(window));
                assert_eq!(write(&again.structure, again.window.as_ref()), text, "{family}");
            }
        }
    }
}
