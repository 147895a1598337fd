//! Finite abelian groups presented as products of cyclic groups.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};

/// `Z_{m_1} × … × Z_{m_k}` with every `m_j ≥ 2`.
///
/// Elements are encoded as mixed-radix integers with the last coordinate
/// varying fastest, which fixes the row/column order of every dense operator
/// and makes the transform of a product group literally a Kronecker product.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpecRepr", into = "GroupSpecRepr")]
pub struct GroupSpec {
    moduli: Vec<u64>,
    order: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpecRepr {
    moduli: Vec<u64>,
}

impl TryFrom<GroupSpecRepr> for GroupSpec {
    type Error = Error;

    fn try_from(repr: GroupSpecRepr) -> Result<Self> {
        GroupSpec::new(repr.moduli)
    }
}

impl From<GroupSpec> for GroupSpecRepr {
    fn from(spec: GroupSpec) -> Self {
        GroupSpecRepr {
            moduli: spec.moduli,
        }
    }
}

/// Coordinates `(x_1, …, x_k)` with `0 ≤ x_j < m_j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupSpec {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(structural("a group needs at least one cyclic factor"));
        }
        if let Some(&m) = moduli.iter().find(|&&m| m < 2) {
            return Err(structural(format!("cyclic modulus {m} is below 2")));
        }
        let order = moduli
            .iter()
            .try_fold(1usize, |acc, &m| {
                usize::try_from(m).ok().and_then(|m| acc.checked_mul(m))
            })
            .ok_or_else(|| structural("group order overflows usize"))?;
        Ok(GroupSpec { moduli, order })
    }

    /// The cyclic group `Z_m`.
    pub fn cyclic(m: u64) -> Result<Self> {
        GroupSpec::new(vec![m])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_cyclic_prime(&self) -> bool {
        self.moduli.len() == 1 && is_prime(self.moduli[0])
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    /// Builds an element, reducing every coordinate modulo its modulus.
    pub fn element(&self, coords: &[u64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(structural(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &m)| c % m)
                .collect(),
        })
    }

    /// Builds an element from signed coordinates, reducing modulo each factor.
    pub fn element_signed(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(structural(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &m)| c.rem_euclid(m as i64) as u64)
                .collect(),
        })
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.coords.len() == self.rank() && x.coords.iter().zip(&self.moduli).all(|(c, m)| c < m)
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(structural(format!("{x:?} is not an element of {self}")))
        }
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, y))
    }

    pub fn neg(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        Ok(self.neg_unchecked(x))
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, &self.neg_unchecked(y)))
    }

    pub(crate) fn add_unchecked(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement {
            coords: x
                .coords
                .iter()
                .zip(&y.coords)
                .zip(&self.moduli)
                .map(|((&a, &b), &m)| (a + b) % m)
                .collect(),
        }
    }

    pub(crate) fn neg_unchecked(&self, x: &GroupElement) -> GroupElement {
        GroupElement {
            coords: x
                .coords
                .iter()
                .zip(&self.moduli)
                .map(|(&a, &m)| (m - a) % m)
                .collect(),
        }
    }

    /// Mixed-radix decoding, last coordinate fastest.
    pub fn element_of(&self, index: usize) -> Result<GroupElement> {
        if index >= self.order {
            return Err(Error::Range {
                index,
                size: self.order,
            });
        }
        Ok(self.element_of_unchecked(index))
    }

    pub(crate) fn element_of_unchecked(&self, mut index: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        for (c, &m) in coords.iter_mut().zip(&self.moduli).rev() {
            *c = (index % m as usize) as u64;
            index /= m as usize;
        }
        GroupElement { coords }
    }

    pub fn index_of(&self, x: &GroupElement) -> Result<usize> {
        self.check(x)?;
        Ok(self.index_of_unchecked(x))
    }

    pub(crate) fn index_of_unchecked(&self, x: &GroupElement) -> usize {
        x.coords
            .iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&c, &m)| acc * m as usize + c as usize)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element_of_unchecked(i))
    }

    /// Lookup table of `x + y` indexed by `x * n + y`.
    pub(crate) fn addition_table(&self) -> Vec<usize> {
        let n = self.order;
        let elems: Vec<_> = self.elements().collect();
        let mut table = Vec::with_capacity(n * n);
        for x in &elems {
            for y in &elems {
                table.push(self.index_of_unchecked(&self.add_unchecked(x, y)));
            }
        }
        table
    }

    pub(crate) fn negation_table(&self) -> Vec<usize> {
        self.elements()
            .map(|x| self.index_of_unchecked(&self.neg_unchecked(&x)))
            .collect()
    }

    /// Least common multiple of the moduli, the exponent of the group.
    pub fn exponent(&self) -> u64 {
        self.moduli.iter().fold(1, |acc, &m| lcm(acc, m))
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub(crate) fn from_coords_unchecked(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({self})")
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.moduli.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "Z{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Parses the text form `Z4xZ2` (case-insensitive, `x`-separated factors).
impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut moduli = Vec::new();
        let mut offset = 0;
        for part in s.split(['x', 'X']) {
            let trimmed = part.trim();
            let lead = part.len() - part.trim_start().len();
            let pos = offset + lead;
            let digits = trimmed
                .strip_prefix('Z')
                .or_else(|| trimmed.strip_prefix('z'))
                .ok_or_else(|| Error::Parse {
                    position: pos,
                    message: format!("expected a cyclic factor like Z4, found {trimmed:?}"),
                })?;
            let m: u64 = digits.parse().map_err(|_| Error::Parse {
                position: pos + 1,
                message: format!("expected a modulus, found {digits:?}"),
            })?;
            if m < 2 {
                return Err(Error::Parse {
                    position: pos + 1,
                    message: format!("cyclic modulus {m} is below 2"),
                });
            }
            moduli.push(m);
            offset += part.len() + 1;
        }
        GroupSpec::new(moduli)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Inverse of `a` modulo a prime `p`, by Fermat.
pub(crate) fn inv_mod_prime(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    Some(pow_mod(a % p, p - 2, p))
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(moduli: &[u64]) -> GroupSpec {
        GroupSpec::new(moduli.to_vec()).unwrap()
    }

    #[test]
    fn addition_examples() {
        let g = z(&[4, 2]);
        let x = g.element(&[3, 1]).unwrap();
        let y = g.element(&[2, 1]).unwrap();
        assert_eq!(g.add(&x, &y).unwrap().coords(), &[1, 0]);
        assert_eq!(g.add(&x, &g.zero()).unwrap(), x);

        let z5 = z(&[5]);
        let sum = z5
            .add(&z5.element(&[2]).unwrap(), &z5.element(&[3]).unwrap())
            .unwrap();
        assert_eq!(sum, z5.zero());
    }

    #[test]
    fn add_rejects_foreign_elements() {
        let g = z(&[4, 2]);
        let other = z(&[3]).element(&[1]).unwrap();
        assert!(matches!(
            g.add(&g.zero(), &other),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn mixed_radix_examples() {
        assert_eq!(z(&[4, 2]).element_of(5).unwrap().coords(), &[2, 1]);
        assert_eq!(z(&[4, 2]).element_of(0).unwrap(), z(&[4, 2]).zero());
        let g = z(&[3, 3]);
        assert_eq!(g.index_of(&g.element(&[2, 1]).unwrap()).unwrap(), 7);
        assert_eq!(
            g.element_of(9),
            Err(Error::Range { index: 9, size: 9 })
        );
    }

    #[test]
    fn rejects_trivial_factors() {
        assert!(GroupSpec::new(vec![1]).is_err());
        assert!(GroupSpec::new(vec![]).is_err());
        assert!("Z1".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn parses_text_form() {
        let g: GroupSpec = "z4XZ2".parse().unwrap();
        assert_eq!(g.moduli(), &[4, 2]);
        assert_eq!(g.order(), 8);
        assert_eq!(g.to_string(), "Z4xZ2");
        match "Z4xQ2".parse::<GroupSpec>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn json_form() {
        let g: GroupSpec = serde_json::from_str(r#"{"moduli":[4,2]}"#).unwrap();
        assert_eq!(g, z(&[4, 2]));
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"moduli":[4,2]}"#);
        assert!(serde_json::from_str::<GroupSpec>(r#"{"moduli":[1]}"#).is_err());
        assert!(serde_json::from_str::<GroupSpec>(r#"{"moduli":[2],"x":1}"#).is_err());
    }

    #[test]
    fn group_axioms_exhaustive() {
        for g in [z(&[4, 2]), z(&[6]), z(&[2, 3, 2])] {
            let elems: Vec<_> = g.elements().collect();
            for a in &elems {
                assert_eq!(g.add(a, &g.zero()).unwrap(), *a);
                assert_eq!(g.add(a, &g.neg(a).unwrap()).unwrap(), g.zero());
                for b in &elems {
                    for c in &elems {
                        let left = g.add(&g.add(a, b).unwrap(), c).unwrap();
                        let right = g.add(a, &g.add(b, c).unwrap()).unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn primes_and_inverses() {
        assert!(is_prime(2) && is_prime(257) && !is_prime(1) && !is_prime(91));
        for a in 1..13 {
            assert_eq!(a * inv_mod_prime(a, 13).unwrap() % 13, 1);
        }
        assert_eq!(inv_mod_prime(0, 13), None);
    }

    proptest::proptest! {
        #[test]
        fn index_round_trip(moduli in proptest::collection::vec(2u64..7, 1..4), seed in 0usize..10_000) {
            let g = GroupSpec::new(moduli).unwrap();
            let i = seed % g.order();
            let x = g.element_of(i).unwrap();
            proptest::prop_assert_eq!(g.index_of(&x).unwrap(), i);
        }
    }
}
