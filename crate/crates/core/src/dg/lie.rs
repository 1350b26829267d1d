use crate::error::{Error, Result};
use crate::linalg::{Accum, Field, SparseVec};

/// A finite-dimensional Lie algebra by structure constants `[x_i, x_j] = Σ c_ij^k x_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiePresentation {
    pub name: String,
    pub field: Field,
    pub basis: Vec<String>,
    bracket: Vec<SparseVec>,
}

impl LiePresentation {
    /// `brackets` lists `(i, j, [x_i, x_j])` for `i < j`; the rest follows by antisymmetry.
    pub fn new(name: &str, field: Field, basis: Vec<String>, brackets: Vec<(usize, usize, SparseVec)>) -> Result<LiePresentation> {
        let n = basis.len();
        let mut bracket = vec![SparseVec::new(); n * n];
        for (i, j, v) in brackets {
            if i >= n || j >= n || v.entries().last().is_some_and(|(k, _)| *k >= n) {
                return Err(Error::Invalid("bracket refers to a missing basis element".into()));
            }
            if i == j {
                if !v.is_zero() {
                    return Err(Error::Invalid(format!("[{0},{0}] must vanish", basis[i])));
                }
                continue;
            }
            bracket[i * n + j] = v.clone();
            bracket[j * n + i] = v.scale(&field.from_i64(-1));
        }
        let lie = LiePresentation { name: name.into(), field, basis, bracket };
        lie.check_jacobi()?;
        Ok(lie)
    }

    /// Builds without checking Jacobi (perturbation tests need broken inputs).
    pub fn new_unchecked(name: &str, field: Field, basis: Vec<String>, table: Vec<SparseVec>) -> LiePresentation {
        LiePresentation { name: name.into(), field, basis, bracket: table }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn bracket(&self, i: usize, j: usize) -> &SparseVec {
        &self.bracket[i * self.dim() + j]
    }

    pub fn bracket_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc = Accum::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                acc.add_vec(&(x * y), self.bracket(i, j));
            }
        }
        acc.finish()
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().all(SparseVec::is_zero)
    }

    pub fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        let e = |i| SparseVec::unit(i, self.field);
        let one = self.field.one();
        for i in 0..n {
            for j in 0..n {
                if !self.bracket(i, j).add_scaled(&one, self.bracket(j, i)).is_zero() {
                    return Err(Error::Invalid(format!("bracket not antisymmetric on {}, {}", self.basis[i], self.basis[j])));
                }
                for k in 0..n {
                    let a = self.bracket_vec(&e(i), &self.bracket_vec(&e(j), &e(k)));
                    let b = self.bracket_vec(&e(j), &self.bracket_vec(&e(k), &e(i)));
                    let c = self.bracket_vec(&e(k), &self.bracket_vec(&e(i), &e(j)));
                    if !a.add_scaled(&one, &b).add_scaled(&one, &c).is_zero() {
                        return Err(Error::Invalid(format!(
                            "Jacobi fails on {}, {}, {}",
                            self.basis[i], self.basis[j], self.basis[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn abelian(n: usize, field: Field) -> LiePresentation {
        let basis = (1..=n).map(|i| format!("x{i}")).collect();
        LiePresentation::new(&format!("abelian{n}"), field, basis, vec![]).unwrap()
    }

    /// The 2-dimensional nonabelian algebra `[x, y] = y`.
    pub fn nonabelian2(field: Field) -> LiePresentation {
        let basis = vec!["x".into(), "y".into()];
        LiePresentation::new("nonabelian2", field, basis, vec![(0, 1, SparseVec::unit(1, field))]).unwrap()
    }

    /// `sl₂` in the basis `e, f, h` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn sl2(field: Field) -> LiePresentation {
        let basis = vec!["e".into(), "f".into(), "h".into()];
        let s = |i: usize, c: i64| SparseVec::unit(i, field).scale(&field.from_i64(c));
        LiePresentation::new("sl2", field, basis, vec![(0, 1, s(2, 1)), (0, 2, s(0, -2)), (1, 2, s(1, 2))]).unwrap()
    }

    pub fn by_name(name: &str, field: Field) -> Result<LiePresentation> {
        match name {
            "sl2" => Ok(LiePresentation::sl2(field)),
            "nonabelian2" => Ok(LiePresentation::nonabelian2(field)),
            _ => match name.strip_prefix("abelian").and_then(|n| n.parse().ok()) {
                Some(n) => Ok(LiePresentation::abelian(n, field)),
                None => Err(Error::Invalid(format!("unknown Lie algebra '{name}' (sl2, nonabelian2, abelianN)"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_satisfies_jacobi() {
        let g = LiePresentation::sl2(Field::Rational);
        assert!(g.check_jacobi().is_ok());
        assert_eq!(g.bracket(2, 0), &SparseVec::unit(0, Field::Rational).scale(&Field::Rational.from_i64(2)));
    }

    #[test]
    fn perturbed_constants_break_jacobi() {
        let f = Field::Rational;
        let s = |i: usize, c: i64| SparseVec::unit(i, f).scale(&f.from_i64(c));
        let broken = LiePresentation::new("bad", f, vec!["e".into(), "f".into(), "h".into()], vec![
            (0, 1, s(2, 1)),
            (0, 2, s(0, -3)),
            (1, 2, s(1, 2)),
        ]);
        assert!(broken.is_err());
    }
}
