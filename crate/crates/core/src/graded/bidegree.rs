use std::fmt;

use serde::{Deserialize, Serialize};

/// Cohomological degree plus an optional auxiliary weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub degree: i32,
    pub weight: Option<i32>,
}

impl Bidegree {
    pub fn new(degree: i32, weight: i32) -> Bidegree {
        Bidegree { degree, weight: Some(weight) }
    }

    pub fn unweighted(degree: i32) -> Bidegree {
        Bidegree { degree, weight: None }
    }

    /// Componentwise sum; the weight survives only if both carry one.
    pub fn add(self, other: Bidegree) -> Bidegree {
        Bidegree {
            degree: self.degree + other.degree,
            weight: self.weight.zip(other.weight).map(|(a, b)| a + b),
        }
    }

    pub fn shift(self, degree: i32, weight: Option<i32>) -> Bidegree {
        Bidegree {
            degree: self.degree + degree,
            weight: self.weight.zip(weight).map(|(a, b)| a + b).or(self.weight.filter(|_| weight.is_none())),
        }
    }

    pub fn forget_weight(self) -> Bidegree {
        Bidegree { degree: self.degree, weight: None }
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.weight {
            Some(w) => write!(f, "({},{})", self.degree, w),
            None => write!(f, "({},-)", self.degree),
        }
    }
}

/// An inclusive range of degrees and, optionally, weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub degrees: (i32, i32),
    pub weights: Option<(i32, i32)>,
}

impl Window {
    pub fn new(degrees: (i32, i32), weights: Option<(i32, i32)>) -> Window {
        Window { degrees, weights }
    }

    pub fn contains(&self, b: Bidegree) -> bool {
        let d_ok = self.degrees.0 <= b.degree && b.degree <= self.degrees.1;
        let w_ok = match (self.weights, b.weight) {
            (Some((lo, hi)), Some(w)) => lo <= w && w <= hi,
            (None, _) => true,
            (Some(_), None) => false,
        };
        d_ok && w_ok
    }

    /// Every bidegree of the window in lexicographic order.
    pub fn bidegrees(&self) -> Vec<Bidegree> {
        let mut out = Vec::new();
        for d in self.degrees.0..=self.degrees.1 {
            match self.weights {
                Some((lo, hi)) => out.extend((lo..=hi).map(|w| Bidegree::new(d, w))),
                None => out.push(Bidegree::unweighted(d)),
            }
        }
        out
    }

    /// True when `self` lies inside `outer`.
    pub fn within(&self, outer: &Window) -> bool {
        let d = outer.degrees.0 <= self.degrees.0 && self.degrees.1 <= outer.degrees.1;
        let w = match (self.weights, outer.weights) {
            (_, None) => true,
            (Some((a, b)), Some((lo, hi))) => lo <= a && b <= hi,
            (None, Some(_)) => false,
        };
        d && w
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg {}..{}", self.degrees.0, self.degrees.1)?;
        if let Some((lo, hi)) = self.weights {
            write!(f, ", wt {lo}..{hi}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Window {
    type Err = crate::Error;

    /// `"d0..d1"` or `"d0..d1:w0..w1"`.
    fn from_str(s: &str) -> crate::Result<Window> {
        let bad = || crate::Error::Invalid(format!("bad window '{s}', expected d0..d1[:w0..w1]"));
        let range = |r: &str| -> crate::Result<(i32, i32)> {
            let (a, b) = r.split_once("..").ok_or_else(bad)?;
            let a: i32 = a.trim().parse().map_err(|_| bad())?;
            let b: i32 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        };
        match s.split_once(':') {
            Some((d, w)) => Ok(Window::new(range(d)?, Some(range(w)?))),
            None => Ok(Window::new(range(s)?, None)),
        }
    }
}
