//! The three kinds of structure the tools operate on, with their text and
//! JSON forms.
//!
//! | kind | text | JSON |
//! |---|---|---|
//! | group | `Z4xZ2` | `{"moduli":[4,2]}` |
//! | field | `GF(9)`, `GF(9);f=Z^2+1` | `{"p":3,"m":2,"f_plus_coeffs":[1,0,1]}` |
//! | matrix ring | `M2(Z3)`, `M2(GF(4))` | none |

use std::fmt;
use std::str::FromStr;

use crate::character::CharacterBasis;
use crate::error::{structural, Error, Result};
use crate::field::FieldSpec;
use crate::group::{GroupElement, GroupSpec};
use crate::hom::Homomorphism;
use crate::matrix_ring::{BaseRing, MatrixRingSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Group(GroupSpec),
    Field(FieldSpec),
    MatrixRing(MatrixRingSpec),
}

impl Target {
    /// The additive group everything acts on.
    pub fn group(&self) -> GroupSpec {
        match self {
            Target::Group(g) => g.clone(),
            Target::Field(f) => f.additive_group(),
            Target::MatrixRing(r) => r.additive_group().clone(),
        }
    }

    /// The default characters: product, `e^{2πi tr(xy)/p}`, or `∏ χ_{y_ij}(z_ji)`.
    pub fn basis(&self) -> CharacterBasis {
        match self {
            Target::Group(g) => CharacterBasis::product(g),
            Target::Field(f) => CharacterBasis::field_default(f),
            Target::MatrixRing(r) => CharacterBasis::matrix(r),
        }
    }

    /// The multiplier-type maps built from `s`: `ψ_s` on groups, `x ↦ s·x`
    /// on fields, and the pair `(X ↦ SX, Y ↦ YS)` on matrix rings.
    pub fn structured_pair(&self, s: &GroupElement) -> Result<(Homomorphism, Homomorphism)> {
        match self {
            Target::Group(g) => {
                let psi = Homomorphism::diagonal(g, s)?;
                Ok((psi.clone(), psi))
            }
            Target::Field(f) => {
                let psi = Homomorphism::field_mul(f, &f.from_group_element(s)?)?;
                Ok((psi.clone(), psi))
            }
            Target::MatrixRing(r) => Ok((Homomorphism::matrix_left(r, s)?, Homomorphism::matrix_right(r, s)?)),
        }
    }

    /// Parses an element: `3`, `(3,1)` or `3,1` as coordinates, and for
    /// fields also a polynomial in `Z` such as `Z^2+1`.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let g = self.group();
        if let Target::Field(f) = self {
            let x = f.parse_element(text)?;
            return Ok(f.to_group_element(&x));
        }
        let trimmed = text.trim();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(trimmed);
        let mut coords = Vec::new();
        let mut offset = trimmed.len() - inner.len();
        if offset > 0 {
            offset = 1;
        }
        for part in inner.split(',') {
            let value = part.trim().parse::<i64>().map_err(|_| Error::Parse {
                position: offset + part.len() - part.trim_start().len(),
                message: format!("expected an integer coordinate, found {:?}", part.trim()),
            })?;
            coords.push(value);
            offset += part.len() + 1;
        }
        if coords.len() != g.rank() {
            return Err(structural(format!(
                "{text:?} has {} coordinates but {g} has rank {}",
                coords.len(),
                g.rank()
            )));
        }
        g.element_signed(&coords)
    }

    /// Element formatting that round-trips through [`parse_element`](Self::parse_element).
    pub fn format_element(&self, x: &GroupElement) -> String {
        match self {
            Target::Field(f) => match f.from_group_element(x) {
                Ok(e) => f.format_element(&e),
                Err(_) => x.to_string(),
            },
            _ => x.to_string(),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Group(g) => write!(f, "{g}"),
            Target::Field(field) => write!(f, "{field}"),
            Target::MatrixRing(r) => {
                write!(f, "M{}(", r.dim())?;
                match r.base() {
                    BaseRing::Cyclic(m) => write!(f, "Z{m}")?,
                    BaseRing::Field(field) => write!(f, "{field}")?,
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let lead = s.len() - s.trim_start().len();
        let shift = |e: Error| match e {
            Error::Parse { position, message } => Error::Parse {
                position: position + lead,
                message,
            },
            other => other,
        };
        if trimmed.starts_with('{') {
            return parse_json(trimmed);
        }
        let upper = trimmed.to_ascii_uppercase();
        if upper.starts_with("GF") {
            trimmed.parse().map(Target::Field).map_err(shift)
        } else if upper.starts_with('M') {
            trimmed.parse().map(Target::MatrixRing).map_err(shift)
        } else {
            trimmed.parse().map(Target::Group).map_err(shift)
        }
    }
}

fn parse_json(text: &str) -> Result<Target> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        position: e.column().saturating_sub(1),
        message: e.to_string(),
    })?;
    let invalid = |e: serde_json::Error| Error::Parse {
        position: 0,
        message: e.to_string(),
    };
    if value.get("moduli").is_some() {
        serde_json::from_value(value).map(Target::Group).map_err(invalid)
    } else if value.get("p").is_some() {
        serde_json::from_value(value).map(Target::Field).map_err(invalid)
    } else {
        Err(Error::Parse {
            position: 0,
            message: "expected a JSON object with \"moduli\" or \"p\"".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::check_pair_compatibility;
    use crate::Limits;

    #[test]
    fn parses_every_form() {
        let t: Target = "Z4xZ2".parse().unwrap();
        assert_eq!(t, Target::Group(GroupSpec::new(vec![4, 2]).unwrap()));
        assert_eq!(t, r#"{"moduli":[4,2]}"#.parse().unwrap());

        let f: Target = "GF(9);f=Z^2+1".parse().unwrap();
        assert_eq!(f, r#"{"p":3,"m":2,"f_plus_coeffs":[1,0,1]}"#.parse().unwrap());
        assert_eq!(f.group().moduli(), &[3, 3]);

        let m: Target = "M2(Z3)".parse().unwrap();
        assert_eq!(m.group().order(), 81);
        assert_eq!(m.to_string(), "M2(Z3)");
        let m4: Target = "M2(GF(4))".parse().unwrap();
        assert_eq!(m4.group().order(), 256);
    }

    #[test]
    fn display_round_trips() {
        for text in ["Z4xZ2", "Z7", "GF(9);f=Z^2+1", "GF(8);f=Z^3+Z+1", "M2(Z2)"] {
            let t: Target = text.parse().unwrap();
            assert_eq!(t.to_string(), text);
            assert_eq!(t.to_string().parse::<Target>().unwrap(), t);
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        match "Z1".parse::<Target>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 1),
            other => panic!("{other:?}"),
        }
        match "  Z4xQ2".parse::<Target>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("{other:?}"),
        }
        assert!(r#"{"moduli":[4,1]}"#.parse::<Target>().is_err());
        assert!(r#"{"moduli":[4],"extra":1}"#.parse::<Target>().is_err());
        assert!(r#"{"q":4}"#.parse::<Target>().is_err());
    }

    #[test]
    fn elements() {
        let t: Target = "Z4xZ2".parse().unwrap();
        assert_eq!(t.parse_element("(3,1)").unwrap().coords(), &[3, 1]);
        assert_eq!(t.parse_element("3, 1").unwrap().coords(), &[3, 1]);
        assert_eq!(t.parse_element("-1,3").unwrap().coords(), &[3, 1]);
        assert!(t.parse_element("3").is_err());
        assert!(matches!(t.parse_element("3,x"), Err(Error::Parse { position: 2, .. })));

        let f: Target = "GF(9)".parse().unwrap();
        let x = f.parse_element("Z+2").unwrap();
        assert_eq!(x.coords(), &[2, 1]);
        assert_eq!(f.format_element(&x), "Z+2");
        assert_eq!(f.parse_element(&f.format_element(&x)).unwrap(), x);
    }

    #[test]
    fn structured_pairs_are_compatible() {
        let limits = Limits::default();
        for text in ["Z4xZ2", "GF(4)", "M2(Z2)"] {
            let t: Target = text.parse().unwrap();
            let basis = t.basis();
            for s in t.group().elements() {
                let (psi, phi) = t.structured_pair(&s).unwrap();
                assert!(check_pair_compatibility(&basis, &psi, &phi, &limits).unwrap().holds, "{text} {s:?}");
            }
        }
    }
}
