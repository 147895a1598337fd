//! Arithmetic in `GF(p^m) = GF(p)[Z] / ⟨f⟩`.
//!
//! The reduction polynomial is stored in the form `f(Z) = Z^m − Σ a_i Z^i`,
//! so reducing `Z^m` is a direct substitution by `Σ a_i Z^i`. Text and JSON
//! inputs use the conventional plus form `f(Z) = Σ c_i Z^i` (ascending, monic)
//! and are converted with `a_i = −c_i mod p`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::group::{is_prime, GroupElement, GroupSpec};

/// Largest characteristic accepted by [`FieldSpec`].
pub const MAX_CHARACTERISTIC: u64 = 10_000;

/// Largest number of candidate divisors scanned by [`is_irreducible`].
pub const MAX_TRIAL_DIVISORS: u64 = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecRepr", into = "FieldSpecRepr")]
pub struct FieldSpec {
    p: u64,
    m: usize,
    /// `a_0 … a_{m−1}` of `f(Z) = Z^m − Σ a_i Z^i`.
    reduction: Vec<u64>,
    q: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldSpecRepr {
    p: u64,
    m: usize,
    f_plus_coeffs: Vec<u64>,
}

impl TryFrom<FieldSpecRepr> for FieldSpec {
    type Error = Error;

    fn try_from(repr: FieldSpecRepr) -> Result<Self> {
        if repr.f_plus_coeffs.len() != repr.m + 1 {
            return Err(structural(format!(
                "degree {} needs {} plus-form coefficients, got {}",
                repr.m,
                repr.m + 1,
                repr.f_plus_coeffs.len()
            )));
        }
        FieldSpec::from_plus_coeffs(repr.p, &repr.f_plus_coeffs)
    }
}

impl From<FieldSpec> for FieldSpecRepr {
    fn from(spec: FieldSpec) -> Self {
        FieldSpecRepr {
            p: spec.p,
            m: spec.m,
            f_plus_coeffs: spec.plus_coeffs(),
        }
    }
}

/// Residue class `c_0 + c_1 Z + … + c_{m−1} Z^{m−1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

impl FieldSpec {
    /// Builds `GF(p^m)` from `Z^m = a_0 + a_1 Z + … + a_{m−1} Z^{m−1}`, given as `a_0 … a_{m−1}`.
    pub fn new(p: u64, reduction: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_CHARACTERISTIC {
            return Err(structural(format!(
                "characteristic {p} exceeds the supported maximum {MAX_CHARACTERISTIC}"
            )));
        }
        let m = reduction.len();
        if m == 0 {
            return Err(structural("field extension degree must be at least 1"));
        }
        if reduction.iter().any(|&a| a >= p) {
            return Err(structural("reduction coefficients must lie in [0, p)"));
        }
        let q = (p as usize)
            .checked_pow(m as u32)
            .ok_or_else(|| structural("field order overflows usize"))?;
        let spec = FieldSpec {
            p,
            m,
            reduction,
            q,
        };
        if !is_irreducible(p, &spec.plus_coeffs())? {
            return Err(structural(format!(
                "{} is reducible over GF({p})",
                format_plus_poly(&spec.plus_coeffs())
            )));
        }
        Ok(spec)
    }

    /// Builds the field from a monic polynomial in ascending plus form.
    pub fn from_plus_coeffs(p: u64, plus: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let (lead, rest) = plus
            .split_last()
            .ok_or_else(|| structural("empty polynomial"))?;
        if lead % p != 1 {
            return Err(structural("reduction polynomial must be monic"));
        }
        FieldSpec::new(p, rest.iter().map(|&c| (p - c % p) % p).collect())
    }

    /// `GF(q)` with the first irreducible monic polynomial found by
    /// [`first_irreducible`].
    pub fn builtin(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q).ok_or_else(|| {
            structural(format!("{q} is not a prime power, no field of that order"))
        })?;
        let plus = first_irreducible(p, m)?;
        FieldSpec::from_plus_coeffs(p, &plus)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn reduction_coeffs(&self) -> &[u64] {
        &self.reduction
    }

    /// Ascending plus-form coefficients `c_0 … c_m` of `f`, with `c_m = 1`.
    pub fn plus_coeffs(&self) -> Vec<u64> {
        let mut plus: Vec<u64> = self.reduction.iter().map(|&a| (self.p - a) % self.p).collect();
        plus.push(1);
        plus
    }

    /// The additive group `(GF(q), +) ≅ Z_p^m`, coordinates are coefficients.
    pub fn additive_group(&self) -> GroupSpec {
        GroupSpec::new(vec![self.p; self.m]).expect("p ≥ 2 and m ≥ 1")
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.m {
            return Err(structural(format!(
                "GF({}) elements have {} coefficients, got {}",
                self.q,
                self.m,
                coeffs.len()
            )));
        }
        let mut c: Vec<u64> = coeffs.iter().map(|&v| v % self.p).collect();
        c.resize(self.m, 0);
        Ok(FieldElement { coeffs: c })
    }

    /// The constant `c` (reduced mod p).
    pub fn constant(&self, c: u64) -> FieldElement {
        let mut coeffs = vec![0; self.m];
        coeffs[0] = c % self.p;
        FieldElement { coeffs }
    }

    pub fn zero(&self) -> FieldElement {
        self.constant(0)
    }

    pub fn one(&self) -> FieldElement {
        self.constant(1)
    }

    /// The class of `Z` (or of the constant `a_0` when `m = 1`).
    pub fn generator(&self) -> FieldElement {
        if self.m == 1 {
            return self.constant(self.reduction[0]);
        }
        let mut coeffs = vec![0; self.m];
        coeffs[1] = 1;
        FieldElement { coeffs }
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        x.coeffs.len() == self.m && x.coeffs.iter().all(|&c| c < self.p)
    }

    pub fn to_group_element(&self, x: &FieldElement) -> GroupElement {
        GroupElement::from_coords_unchecked(x.coeffs.clone())
    }

    pub fn from_group_element(&self, x: &GroupElement) -> Result<FieldElement> {
        if !self.additive_group().contains(x) {
            return Err(structural(format!("{x:?} is not a GF({}) element", self.q)));
        }
        Ok(FieldElement {
            coeffs: x.coords().to_vec(),
        })
    }

    pub fn element_of(&self, index: usize) -> Result<FieldElement> {
        let g = self.additive_group().element_of(index)?;
        Ok(FieldElement {
            coeffs: g.coords().to_vec(),
        })
    }

    pub fn index_of(&self, x: &FieldElement) -> Result<usize> {
        self.additive_group().index_of(&self.to_group_element(x))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|i| self.element_of(i).expect("index in range"))
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: add_coeffs(self.p, &x.coeffs, &y.coeffs),
        }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: x.coeffs.iter().map(|&c| (self.p - c) % self.p).collect(),
        }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: self.mul_coeffs(&x.coeffs, &y.coeffs),
        }
    }

    /// Polynomial product reduced by substituting `Z^m → Σ a_i Z^i` from the
    /// top degree down.
    pub(crate) fn mul_coeffs(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let (p, m) = (self.p, self.m);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        for d in (m..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &a) in self.reduction.iter().enumerate() {
                let k = d - m + i;
                prod[k] = (prod[k] + c * a) % p;
            }
        }
        prod.truncate(m);
        prod
    }

    /// Multiplicative inverse found by scanning the field.
    pub fn inverse(&self, x: &FieldElement) -> Option<FieldElement> {
        let one = self.one();
        self.elements().find(|y| self.mul(x, y) == one)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement {
            coeffs: (0..self.m).map(|_| rng.gen_range(0..self.p)).collect(),
        }
    }

    /// Parses an element written as a polynomial in `Z` (`"Z+1"`, `"2Z^2+1"`)
    /// or as comma-separated coefficients `c_0,c_1,…`.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let coeffs = if text.contains(['z', 'Z']) {
            parse_poly(text, self.p)?
        } else {
            parse_coeff_list(text)?
        };
        if coeffs.len() > self.m {
            // Only reject when the overflow part is nonzero; "0Z^3" is harmless.
            if coeffs[self.m..].iter().any(|&c| c % self.p != 0) {
                return Err(structural(format!(
                    "{text:?} has degree ≥ {} in GF({})",
                    self.m, self.q
                )));
            }
            return self.element(&coeffs[..self.m]);
        }
        self.element(&coeffs)
    }

    pub fn format_element(&self, x: &FieldElement) -> String {
        format_poly(&x.coeffs)
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({self})")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({});f={}", self.q, format_plus_poly(&self.plus_coeffs()))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(&self.coeffs))
    }
}

/// Parses `GF(q)` (built-in polynomial) or `GF(q);f=<plus-form polynomial>`.
impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |position: usize, message: String| Error::Parse { position, message };
        let (head, poly) = match s.split_once(';') {
            Some((h, rest)) => (h, Some((h.len() + 1, rest))),
            None => (s, None),
        };
        let lead = head.len() - head.trim_start().len();
        let h = head.trim();
        let inner = h
            .get(..3)
            .filter(|p| p.eq_ignore_ascii_case("GF("))
            .and_then(|_| h[3..].strip_suffix(')'))
            .ok_or_else(|| parse_err(lead, format!("expected GF(q), found {h:?}")))?;
        let q: u64 = inner
            .trim()
            .parse()
            .map_err(|_| parse_err(lead + 3, format!("expected a field order, found {inner:?}")))?;
        let (p, m) = prime_power(q)
            .ok_or_else(|| parse_err(lead + 3, format!("{q} is not a prime power")))?;
        let Some((offset, rest)) = poly else {
            return FieldSpec::builtin(q);
        };
        let rest_lead = rest.len() - rest.trim_start().len();
        let body = rest
            .trim()
            .strip_prefix("f=")
            .or_else(|| rest.trim().strip_prefix("F="))
            .ok_or_else(|| parse_err(offset + rest_lead, "expected f=<polynomial>".into()))?;
        let plus = parse_poly(body, p).map_err(|e| match e {
            Error::Parse { position, message } => {
                parse_err(offset + rest_lead + 2 + position, message)
            }
            other => other,
        })?;
        if plus.len() != m + 1 {
            return Err(parse_err(
                offset + rest_lead + 2,
                format!("GF({q}) needs a degree-{m} polynomial, got degree {}", plus.len().saturating_sub(1)),
            ));
        }
        FieldSpec::from_plus_coeffs(p, &plus)
    }
}

/// Nonzero `GF(p)`-linear map `φ(x) = Σ w_i x_i mod p`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearFunctional {
    p: u64,
    weights: Vec<u64>,
}

impl LinearFunctional {
    pub fn new(field: &FieldSpec, weights: &[u64]) -> Result<Self> {
        if weights.len() != field.degree() {
            return Err(structural(format!(
                "functional on GF({}) needs {} weights, got {}",
                field.order(),
                field.degree(),
                weights.len()
            )));
        }
        let weights: Vec<u64> = weights.iter().map(|&w| w % field.p).collect();
        if weights.iter().all(|&w| w == 0) {
            return Err(Error::Precondition(
                "the linear functional must be nonzero".into(),
            ));
        }
        Ok(LinearFunctional {
            p: field.p,
            weights,
        })
    }

    /// Coefficient extraction `φ(x) = x_0`.
    pub fn constant_term(field: &FieldSpec) -> Self {
        let mut weights = vec![0; field.degree()];
        weights[0] = 1;
        LinearFunctional {
            p: field.p,
            weights,
        }
    }

    /// A uniformly random nonzero functional.
    pub fn random<R: Rng + ?Sized>(field: &FieldSpec, rng: &mut R) -> Self {
        loop {
            let weights: Vec<u64> = (0..field.degree())
                .map(|_| rng.gen_range(0..field.p))
                .collect();
            if weights.iter().any(|&w| w != 0) {
                return LinearFunctional {
                    p: field.p,
                    weights,
                };
            }
        }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        self.weights
            .iter()
            .zip(x)
            .fold(0, |acc, (&w, &c)| (acc + w * c) % self.p)
    }
}

impl fmt::Debug for LinearFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "φ{:?}", self.weights)
    }
}

fn add_coeffs(p: u64, x: &[u64], y: &[u64]) -> Vec<u64> {
    x.iter().zip(y).map(|(&a, &b)| (a + b) % p).collect()
}

/// `(p, m)` with `q = p^m`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// Irreducibility of a monic polynomial (ascending plus form) over `GF(p)` by
/// trial division with every monic polynomial of degree `1 ..= m/2`.
pub fn is_irreducible(p: u64, plus: &[u64]) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let f: Vec<u64> = plus.iter().map(|&c| c % p).collect();
    match f.last() {
        Some(1) => {}
        _ => return Err(structural("irreducibility test needs a monic polynomial")),
    }
    let m = f.len() - 1;
    if m == 0 {
        return Err(structural("constant polynomials are not irreducible candidates"));
    }
    let half = m / 2;
    let mut candidates: u64 = 0;
    for d in 1..=half {
        candidates = p
            .checked_pow(d as u32)
            .and_then(|c| candidates.checked_add(c))
            .filter(|&c| c <= MAX_TRIAL_DIVISORS)
            .ok_or_else(|| {
                structural(format!(
                    "trial division over GF({p}) at degree {m} exceeds {MAX_TRIAL_DIVISORS} candidates"
                ))
            })?;
    }
    for d in 1..=half {
        let count = p.pow(d as u32);
        for t in 0..count {
            let mut g = digits(t, p, d);
            g.push(1);
            if poly_rem_monic(&f, &g, p).iter().all(|&c| c == 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// First irreducible monic polynomial of degree `m` over `GF(p)`, scanning
/// `c_0 … c_{m−1}` as the base-`p` digits of `0, 1, 2, …` (`c_0` least
/// significant).
pub fn first_irreducible(p: u64, m: usize) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let count = p
        .checked_pow(m as u32)
        .ok_or_else(|| structural("search space overflows"))?;
    for t in 0..count {
        let mut plus = digits(t, p, m);
        plus.push(1);
        if is_irreducible(p, &plus)? {
            return Ok(plus);
        }
    }
    Err(structural(format!("no irreducible polynomial of degree {m} over GF({p})")))
}

fn digits(mut t: u64, base: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = t % base;
            t /= base;
            d
        })
        .collect()
}

/// Remainder of `f` divided by the monic `g`, both ascending.
fn poly_rem_monic(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let dg = g.len() - 1;
    let mut r = f.to_vec();
    while r.len() > dg {
        let lead = r.pop().unwrap_or(0);
        if lead != 0 {
            let shift = r.len() - dg;
            for (i, &gc) in g[..dg].iter().enumerate() {
                let k = shift + i;
                r[k] = (r[k] + (p - lead) * gc % p) % p;
            }
        }
    }
    r
}

/// Parses a polynomial in `Z` with integer coefficients (reduced mod `p`,
/// minus signs allowed) into ascending coefficients.
pub fn parse_poly(text: &str, p: u64) -> Result<Vec<u64>> {
    let bytes = text.as_bytes();
    let mut coeffs: Vec<i64> = Vec::new();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    let number = |i: &mut usize| -> Option<i64> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        text[start..*i].parse().ok()
    };
    let err = |position: usize, message: &str| Error::Parse {
        position,
        message: message.to_string(),
    };
    let mut first = true;
    skip_ws(&mut i);
    if i == bytes.len() {
        return Err(err(0, "empty polynomial"));
    }
    while i < bytes.len() {
        skip_ws(&mut i);
        let mut sign = 1i64;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            if bytes[i] == b'-' {
                sign = -1;
            }
            i += 1;
            skip_ws(&mut i);
        } else if !first {
            return Err(err(i, "expected '+' or '-' between terms"));
        }
        first = false;
        let term_start = i;
        let coef = number(&mut i);
        skip_ws(&mut i);
        if coef.is_some() && i < bytes.len() && bytes[i] == b'*' {
            i += 1;
            skip_ws(&mut i);
        }
        let exp = if i < bytes.len() && (bytes[i] == b'Z' || bytes[i] == b'z') {
            i += 1;
            skip_ws(&mut i);
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                skip_ws(&mut i);
                number(&mut i).ok_or_else(|| err(i, "expected an exponent"))? as usize
            } else {
                1
            }
        } else {
            if coef.is_none() {
                return Err(err(term_start, "expected a coefficient or Z"));
            }
            0
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        coeffs[exp] += sign * coef.unwrap_or(1);
        skip_ws(&mut i);
    }
    Ok(coeffs
        .into_iter()
        .map(|c| c.rem_euclid(p as i64) as u64)
        .collect())
}

fn parse_coeff_list(text: &str) -> Result<Vec<u64>> {
    let trimmed = text.trim().trim_start_matches('(').trim_end_matches(')');
    trimmed
        .split(',')
        .map(|part| {
            part.trim().parse::<u64>().map_err(|_| Error::Parse {
                position: 0,
                message: format!("expected a coefficient, found {part:?}"),
            })
        })
        .collect()
}

/// Ascending coefficients as `c_k Z^k + … + c_0`, `0` for the zero element.
pub fn format_poly(coeffs: &[u64]) -> String {
    let mut terms = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        terms.push(match (k, c) {
            (0, c) => c.to_string(),
            (1, 1) => "Z".to_string(),
            (1, c) => format!("{c}Z"),
            (k, 1) => format!("Z^{k}"),
            (k, c) => format!("{c}Z^{k}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn format_plus_poly(plus: &[u64]) -> String {
    format_poly(plus)
}
