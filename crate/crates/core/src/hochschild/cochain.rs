use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::dg::{DgAlgebra, DgCoalgebra, Family, Truncation};
use crate::error::{Error, Result};
use crate::linalg::{Field, Scalar};
use crate::sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// Maps `Ā^{⊗n} → A`.
    Algebra,
    /// Maps `C → C̄^{⊗n}`.
    Coalgebra,
}

/// One basis cochain. On the algebra side `word` lists the inputs and `conn` is the output;
/// on the coalgebra side `conn` is the input and `word` lists the outputs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub conn: usize,
    pub word: Vec<usize>,
}

/// A finite linear combination of basis cochains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub side: Side,
    terms: BTreeMap<Term, Scalar>,
}

impl Cochain {
    pub fn zero(side: Side) -> Cochain {
        Cochain { side, terms: BTreeMap::new() }
    }

    pub fn from_terms(side: Side, terms: impl IntoIterator<Item = (Term, Scalar)>) -> Cochain {
        let mut out = Cochain::zero(side);
        for (t, x) in terms {
            out.add_term(t, &x);
        }
        out
    }

    pub fn term(side: Side, conn: usize, word: Vec<usize>, coef: Scalar) -> Cochain {
        Cochain::from_terms(side, [(Term { conn, word }, coef)])
    }

    pub fn add_term(&mut self, t: Term, x: &Scalar) {
        if x.is_zero() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(v) => {
                *v = &*v + x;
                if v.is_zero() {
                    self.terms.remove(&t);
                }
            }
            None => {
                self.terms.insert(t, x.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, t: &Term) -> Option<&Scalar> {
        self.terms.get(t)
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.add_scaled(None, other)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        let minus = match other.terms.values().next() {
            Some(x) => -(x.field().one()),
            None => return Ok(self.clone()),
        };
        self.add_scaled(Some(&minus), other)
    }

    /// `self + c·other`, with `c = 1` when `None`.
    pub fn add_scaled(&self, c: Option<&Scalar>, other: &Cochain) -> Result<Cochain> {
        if self.side != other.side {
            return Err(Error::MixedSides);
        }
        let mut out = self.clone();
        for (t, x) in &other.terms {
            match c {
                Some(c) => out.add_term(t.clone(), &(c * x)),
                None => out.add_term(t.clone(), x),
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Cochain {
        Cochain::from_terms(self.side, self.terms.iter().map(|(t, x)| (t.clone(), c * x)))
    }

    pub fn neg_if(&self, negate: bool) -> Cochain {
        if !negate {
            return self.clone();
        }
        Cochain { side: self.side, terms: self.terms.iter().map(|(t, x)| (t.clone(), -x)).collect() }
    }
}

/// A dg algebra or coalgebra seen through its brace complex: letters, degrees, weights and `m = m1 + m2`.
#[derive(Clone, Debug)]
pub struct BraceStructure {
    pub side: Side,
    pub field: Field,
    names: Vec<String>,
    degrees: Vec<i32>,
    weights: Vec<Option<i32>>,
    unit: usize,
    m1: Cochain,
    m2: Cochain,
    /// Whether every basis element of the structure is materialized.
    pub complete: bool,
    /// Whether `m` preserves weight.
    pub weight_graded: bool,
    pub family: Option<Family>,
}

impl BraceStructure {
    /// `m1 = (a) ↦ −da`, `m2 = (a,b) ↦ (−1)^{|a|} ab`, over the full basis including the unit.
    pub fn from_algebra(a: &DgAlgebra) -> Result<BraceStructure> {
        let side = Side::Algebra;
        let n = a.dim();
        let mut m1 = Cochain::zero(side);
        let mut m2 = Cochain::zero(side);
        let mut complete = a.truncation() == Truncation::Exact;
        for x in 0..n {
            for (j, k) in a.d(x).iter() {
                m1.add_term(Term { conn: j, word: vec![x] }, &-k);
            }
            for y in 0..n {
                match a.product_entry(x, y) {
                    Some(p) => {
                        for (j, k) in p.iter() {
                            m2.add_term(Term { conn: j, word: vec![x, y] }, &k.clone().neg_if(sign::odd(a.degree(x))));
                        }
                    }
                    None => complete = false,
                }
            }
        }
        Ok(BraceStructure {
            side,
            field: a.field(),
            names: (0..n).map(|i| a.name(i).to_string()).collect(),
            degrees: (0..n).map(|i| a.degree(i)).collect(),
            weights: (0..n).map(|i| a.weight(i)).collect(),
            unit: a.unit(),
            m1,
            m2,
            complete,
            weight_graded: a.is_weight_graded(),
            family: a.family().cloned(),
        })
    }

    /// `m1 = c ↦ −[dc]`, `m2 = c ↦ −Σ (−1)^{|c'|} [c'|c'']` over the full coproduct.
    pub fn from_coalgebra(c: &DgCoalgebra) -> Result<BraceStructure> {
        let side = Side::Coalgebra;
        let n = c.dim();
        let mut m1 = Cochain::zero(side);
        let mut m2 = Cochain::zero(side);
        for x in 0..n {
            for (j, k) in c.d(x).iter() {
                m1.add_term(Term { conn: x, word: vec![j] }, &-k);
            }
            for (p, q, k) in c.coproduct(x) {
                m2.add_term(Term { conn: x, word: vec![*p, *q] }, &k.clone().neg_if(!sign::odd(c.degree(*p))));
            }
        }
        Ok(BraceStructure {
            side,
            field: c.field(),
            names: (0..n).map(|i| c.name(i).to_string()).collect(),
            degrees: (0..n).map(|i| c.degree(i)).collect(),
            weights: (0..n).map(|i| c.weight(i)).collect(),
            unit: c.coaugmentation(),
            m1,
            m2,
            complete: c.truncation() == Truncation::Exact,
            weight_graded: c.is_weight_graded(),
            family: c.family().cloned(),
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn weight(&self, i: usize) -> Option<i32> {
        self.weights[i]
    }

    pub fn m1(&self) -> &Cochain {
        &self.m1
    }

    pub fn m2(&self) -> &Cochain {
        &self.m2
    }

    pub fn m(&self) -> Cochain {
        self.m1.add(&self.m2).unwrap()
    }

    /// Degree of a letter after the suspension: `|a|−1` for algebras, `|c|+1` for coalgebras.
    pub fn shifted(&self, letter: usize) -> i32 {
        match self.side {
            Side::Algebra => self.degrees[letter] - 1,
            Side::Coalgebra => self.degrees[letter] + 1,
        }
    }

    /// Total degree `n + r` of a basis cochain.
    pub fn total_degree(&self, t: &Term) -> i32 {
        let inner: i32 = t.word.iter().map(|&l| self.degrees[l]).sum();
        let raw = match self.side {
            Side::Algebra => self.degrees[t.conn] - inner,
            Side::Coalgebra => inner - self.degrees[t.conn],
        };
        t.word.len() as i32 + raw
    }

    /// Weight of the output minus weight of the input.
    pub fn term_weight(&self, t: &Term) -> Option<i32> {
        let mut inner = 0;
        for &l in &t.word {
            inner += self.weights[l]?;
        }
        let c = self.weights[t.conn]?;
        Some(match self.side {
            Side::Algebra => c - inner,
            Side::Coalgebra => inner - c,
        })
    }

    /// Total degree of a homogeneous cochain, `None` for zero.
    pub fn degree_of(&self, f: &Cochain) -> Option<i32> {
        f.terms().next().map(|(t, _)| self.total_degree(t))
    }

    /// Drops every term with the unit among its word letters.
    pub fn normalize(&self, f: &Cochain) -> Cochain {
        Cochain::from_terms(f.side, f.terms().filter(|(t, _)| !t.word.contains(&self.unit)).map(|(t, x)| (t.clone(), x.clone())))
    }

    pub fn render_term(&self, t: &Term) -> String {
        let word: Vec<&str> = t.word.iter().map(|&l| self.names[l].as_str()).collect();
        let word = format!("[{}]", word.join("|"));
        match self.side {
            Side::Algebra => format!("{word}↦{}", self.names[t.conn]),
            Side::Coalgebra => format!("{}↦{word}", self.names[t.conn]),
        }
    }

    pub fn render(&self, f: &Cochain) -> String {
        if f.is_zero() {
            return "0".into();
        }
        f.terms().map(|(t, x)| format!("{x}·{}", self.render_term(t))).collect::<Vec<_>>().join(" + ")
    }

    fn check(&self, f: &Cochain) -> Result<()> {
        if f.side != self.side {
            return Err(Error::MixedSides);
        }
        Ok(())
    }
}

/// `f{g1,…,gk}`: every order-preserving substitution of the `gj` into the letters of `f`
/// that match their connecting letter, with the Koszul sign of moving `gj` past the letters before it.
pub fn brace(s: &BraceStructure, f: &Cochain, gs: &[&Cochain]) -> Result<Cochain> {
    s.check(f)?;
    for g in gs {
        s.check(g)?;
    }
    if gs.is_empty() {
        return Ok(f.clone());
    }
    let index: Vec<HashMap<usize, Vec<(&Term, &Scalar, i32)>>> = gs
        .iter()
        .map(|g| {
            let mut m: HashMap<usize, Vec<(&Term, &Scalar, i32)>> = HashMap::new();
            for (t, x) in g.terms() {
                m.entry(t.conn).or_default().push((t, x, s.total_degree(t) - 1));
            }
            m
        })
        .collect();
    let mut out = Cochain::zero(s.side);
    let mut word = Vec::new();
    for (t, x) in f.terms() {
        word.clear();
        let mut st = Walk { s, f: t, index: &index, out: &mut out, word: &mut word };
        st.go(0, 0, 0, 0, false, x.clone());
    }
    Ok(out)
}

struct Walk<'a, 'b> {
    s: &'a BraceStructure,
    f: &'a Term,
    index: &'a [HashMap<usize, Vec<(&'b Term, &'b Scalar, i32)>>],
    out: &'a mut Cochain,
    word: &'a mut Vec<usize>,
}

impl Walk<'_, '_> {
    /// `pos`: next letter of `f`; `arg`: next argument; `emitted`/`original`: shifted degrees
    /// of the result letters so far and of `f`'s letters so far.
    fn go(&mut self, pos: usize, arg: usize, emitted: i32, original: i32, neg: bool, coef: Scalar) {
        let n = self.f.word.len();
        if arg == self.index.len() {
            let start = self.word.len();
            self.word.extend_from_slice(&self.f.word[pos..]);
            let t = Term { conn: self.f.conn, word: self.word.clone() };
            self.out.add_term(t, &coef.neg_if(neg));
            self.word.truncate(start);
            return;
        }
        if n - pos < self.index.len() - arg {
            return;
        }
        let letter = self.f.word[pos];
        let sl = self.s.shifted(letter);
        // keep the letter
        self.word.push(letter);
        self.go(pos + 1, arg, emitted + sl, original + sl, neg, coef.clone());
        self.word.pop();
        // substitute argument `arg` here
        if let Some(list) = self.index[arg].get(&letter) {
            let passed = match self.s.side {
                Side::Algebra => emitted,
                Side::Coalgebra => original,
            };
            for &(g, x, gdeg) in list {
                let start = self.word.len();
                self.word.extend_from_slice(&g.word);
                let block: i32 = g.word.iter().map(|&l| self.s.shifted(l)).sum();
                let sign = neg ^ sign::odd_pair(gdeg, passed);
                self.go(pos + 1, arg + 1, emitted + block, original + sl, sign, &coef * x);
                self.word.truncate(start);
            }
        }
    }
}

/// `δf = m{f} − (−1)^{‖f‖} f{m}`, normalized.
pub fn differential(s: &BraceStructure, f: &Cochain) -> Result<Cochain> {
    let deg = match s.degree_of(f) {
        Some(d) => d,
        None => return Ok(Cochain::zero(s.side)),
    };
    let m = s.m();
    let lhs = brace(s, &m, &[f])?;
    let rhs = brace(s, f, &[&m])?.neg_if(sign::odd(deg - 1));
    Ok(s.normalize(&lhs.sub(&rhs)?))
}

/// `f ∪ g = (−1)^{|f|} m2{f, g}`, normalized; the unit cocycle is a two-sided unit on both sides.
pub fn cup(s: &BraceStructure, f: &Cochain, g: &Cochain) -> Result<Cochain> {
    let deg = match s.degree_of(f) {
        Some(d) => d,
        None => return Ok(Cochain::zero(s.side)),
    };
    Ok(s.normalize(&brace(s, s.m2(), &[f, g])?.neg_if(sign::odd(deg))))
}

/// Defect of homotopy graded-commutativity,
/// `f∪g − (−1)^{|f||g|} g∪f − ε (−1)^{|f|} [(δf){g} − δ(f{g}) + (−1)^{|f|−1} f{δg}]`
/// with `ε = 1` on the algebra side and `ε = (−1)^{‖f‖‖g‖}` on the coalgebra side, where
/// composition runs the other way; zero on every input.
pub fn homotopy_defect(s: &BraceStructure, f: &Cochain, g: &Cochain) -> Result<Cochain> {
    let (pf, pg) = match (s.degree_of(f), s.degree_of(g)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(Cochain::zero(s.side)),
    };
    let lhs = cup(s, f, g)?.sub(&cup(s, g, f)?.neg_if(sign::odd_pair(pf, pg)))?;
    let fg = brace(s, f, &[g])?;
    let inner = brace(s, &differential(s, f)?, &[g])?
        .sub(&differential(s, &fg)?)?
        .add(&brace(s, f, &[&differential(s, g)?])?.neg_if(sign::odd(pf - 1)))?;
    let flip = s.side == Side::Coalgebra && sign::odd_pair(pf - 1, pg - 1);
    let rhs = s.normalize(&inner).neg_if(sign::odd(pf) ^ flip);
    lhs.sub(&rhs)
}

/// The unit cocycle: `[] ↦ 1` on the algebra side, `1 ↦ []` on the coalgebra side.
pub fn unit_cochain(s: &BraceStructure) -> Cochain {
    Cochain::term(s.side, s.unit(), vec![], s.field.one())
}

/// `[f, g] = f{g} − (−1)^{‖f‖‖g‖} g{f}`.
pub fn bracket(s: &BraceStructure, f: &Cochain, g: &Cochain) -> Result<Cochain> {
    let (df, dg) = match (s.degree_of(f), s.degree_of(g)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(Cochain::zero(s.side)),
    };
    let fg = brace(s, f, &[g])?;
    let gf = brace(s, g, &[f])?;
    fg.sub(&gf.neg_if(sign::odd_pair(df - 1, dg - 1)))
}
