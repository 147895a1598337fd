//! The ring `R^{d×d}` of square matrices over a small commutative ring.
//!
//! A matrix is stored as an element of its additive group `R^{d²}`: entries
//! row-major, each entry occupying the coordinates of one `R` element
//! (one coordinate for `Z_r`, `m` coefficients for `GF(p^m)`).

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{structural, Error, Result};
use crate::field::FieldSpec;
use crate::group::{GroupElement, GroupSpec};

/// Commutative base ring of a matrix ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Cyclic(u64),
    Field(FieldSpec),
}

impl BaseRing {
    pub fn additive_group(&self) -> GroupSpec {
        match self {
            BaseRing::Cyclic(r) => GroupSpec::cyclic(*r).expect("validated modulus"),
            BaseRing::Field(f) => f.additive_group(),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            BaseRing::Cyclic(r) => *r as usize,
            BaseRing::Field(f) => f.order(),
        }
    }

    /// Coordinates per element.
    pub fn width(&self) -> usize {
        match self {
            BaseRing::Cyclic(_) => 1,
            BaseRing::Field(f) => f.degree(),
        }
    }

    fn add_into(&self, acc: &mut [u64], x: &[u64]) {
        let p = match self {
            BaseRing::Cyclic(r) => *r,
            BaseRing::Field(f) => f.characteristic(),
        };
        for (a, &b) in acc.iter_mut().zip(x) {
            *a = (*a + b) % p;
        }
    }

    fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        match self {
            BaseRing::Cyclic(r) => vec![x[0] * y[0] % r],
            BaseRing::Field(f) => f.mul_coeffs(x, y),
        }
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.width()];
        v[0] = 1;
        v
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Cyclic(r) => write!(f, "Z{r}"),
            BaseRing::Field(field) => write!(f, "GF({})", field.order()),
        }
    }
}

impl fmt::Debug for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixRingSpec {
    base: BaseRing,
    dim: usize,
    group: GroupSpec,
}

impl MatrixRingSpec {
    pub fn new(base: BaseRing, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(structural("matrix dimension must be at least 1"));
        }
        if let BaseRing::Cyclic(r) = base {
            if r < 2 {
                return Err(structural(format!("base ring Z{r} is trivial")));
            }
        }
        let base_group = base.additive_group();
        let moduli = base_group
            .moduli()
            .iter()
            .copied()
            .cycle()
            .take(base_group.rank() * dim * dim)
            .collect();
        let group = GroupSpec::new(moduli)?;
        Ok(MatrixRingSpec { base, dim, group })
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The additive group `R^{d²}`.
    pub fn additive_group(&self) -> &GroupSpec {
        &self.group
    }

    fn entry_range(&self, i: usize, j: usize) -> std::ops::Range<usize> {
        let w = self.base.width();
        let start = (i * self.dim + j) * w;
        start..start + w
    }

    /// Coordinates of entry `(i, j)`.
    pub fn entry<'a>(&self, x: &'a GroupElement, i: usize, j: usize) -> &'a [u64] {
        &x.coords()[self.entry_range(i, j)]
    }

    /// Builds a matrix from row-major entries, each given by its coordinates.
    pub fn matrix(&self, entries: &[Vec<u64>]) -> Result<GroupElement> {
        if entries.len() != self.dim * self.dim {
            return Err(structural(format!(
                "a {d}x{d} matrix needs {} entries",
                self.dim * self.dim,
                d = self.dim
            )));
        }
        let w = self.base.width();
        let mut coords = Vec::with_capacity(self.group.rank());
        for e in entries {
            if e.len() > w {
                return Err(structural("matrix entry has too many coordinates"));
            }
            coords.extend(e.iter().copied());
            coords.extend(std::iter::repeat(0).take(w - e.len()));
        }
        self.group.element(&coords)
    }

    pub fn zero(&self) -> GroupElement {
        self.group.zero()
    }

    pub fn identity(&self) -> GroupElement {
        let mut coords = vec![0; self.group.rank()];
        let one = self.base.one();
        for i in 0..self.dim {
            coords[self.entry_range(i, i)].copy_from_slice(&one);
        }
        GroupElement::from_coords_unchecked(coords)
    }

    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let d = self.dim;
        let w = self.base.width();
        let mut coords = vec![0; self.group.rank()];
        for i in 0..d {
            for j in 0..d {
                let mut acc = vec![0; w];
                for k in 0..d {
                    let prod = self.base.mul(self.entry(x, i, k), self.entry(y, k, j));
                    self.base.add_into(&mut acc, &prod);
                }
                coords[self.entry_range(i, j)].copy_from_slice(&acc);
            }
        }
        GroupElement::from_coords_unchecked(coords)
    }

    pub fn random_matrix<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        let coords: Vec<u64> = self
            .group
            .moduli()
            .iter()
            .map(|&m| rng.gen_range(0..m))
            .collect();
        GroupElement::from_coords_unchecked(coords)
    }
}

impl fmt::Display for MatrixRingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}({})", self.dim, self.base)
    }
}

impl fmt::Debug for MatrixRingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixRingSpec({self})")
    }
}

/// Parses `M2(Z3)` or `M2(GF(4))`.
impl FromStr for MatrixRingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let lead = s.len() - s.trim_start().len();
        let err = |position: usize, message: String| Error::Parse { position, message };
        let rest = t
            .strip_prefix(['M', 'm'])
            .ok_or_else(|| err(lead, format!("expected M<d>(<ring>), found {t:?}")))?;
        let open = rest
            .find('(')
            .ok_or_else(|| err(lead + 1, "expected '(' after the dimension".into()))?;
        let dim: usize = rest[..open]
            .parse()
            .map_err(|_| err(lead + 1, format!("expected a dimension, found {:?}", &rest[..open])))?;
        let inner = rest[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| err(lead + t.len(), "expected a closing ')'".into()))?;
        let inner_pos = lead + 2 + open;
        let base = if inner.trim_start().get(..2).is_some_and(|h| h.eq_ignore_ascii_case("GF")) {
            BaseRing::Field(inner.parse::<FieldSpec>().map_err(|e| shift(e, inner_pos))?)
        } else {
            let g: GroupSpec = inner.parse().map_err(|e| shift(e, inner_pos))?;
            if g.rank() != 1 {
                return Err(err(inner_pos, "matrix base ring must be Z<r> or GF(q)".into()));
            }
            BaseRing::Cyclic(g.moduli()[0])
        };
        MatrixRingSpec::new(base, dim)
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { position, message } => Error::Parse {
            position: position + by,
            message,
        },
        other => other,
    }
}
