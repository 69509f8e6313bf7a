use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::monomial::{Monomial, MonomialOrder};
use super::scalar::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// A polynomial ring `k[x_1, ..., x_n]`: variable names and coefficient field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    names: Vec<String>,
    field: FieldSpec,
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(names: &[S], field: FieldSpec) -> Result<Arc<Self>> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().trim().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidArgument(format!("bad variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidArgument(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Arc::new(PolyRing { names, field }))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A sparse polynomial. Terms are kept in strictly descending
/// degree-reverse-lexicographic order with no zero coefficients.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

fn drl_desc(a: &Monomial, b: &Monomial) -> Ordering {
    MonomialOrder::DegRevLex.cmp(b, a)
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Scalar) -> Self {
        Self::from_terms(ring, vec![(Monomial::one(ring.nvars()), c)])
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::from_terms(ring, vec![(Monomial::variable(ring.nvars(), i), ring.field().one())])
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: Scalar) -> Self {
        Self::from_terms(ring, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: Vec<(Monomial, Scalar)>) -> Self {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars());
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| drl_desc(&a.0, &b.0));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Trusted constructor: terms already sorted and non-zero.
    pub(crate) fn from_sorted(ring: &Arc<PolyRing>, terms: Vec<(Monomial, Scalar)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| drl_desc(&w[0].0, &w[1].0) == Ordering::Less));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.iter().find(|(t, _)| t == m).map(|(_, c)| c)
    }

    /// The constant term, zero if absent.
    pub fn constant_term(&self) -> Scalar {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.field().zero(),
        }
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<&(Monomial, Scalar)> {
        match order {
            MonomialOrder::DegRevLex => self.terms.first(),
            _ => self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0)),
        }
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<&Monomial> {
        self.leading_term(order).map(|t| &t.0)
    }

    /// Maximal total degree; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// The common degree of all terms. `Ok(None)` for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        let Some(first) = self.terms.first() else {
            return Ok(None);
        };
        let d = first.0.degree();
        if self.terms.iter().all(|(m, _)| m.degree() == d) {
            Ok(Some(d))
        } else {
            Err(Error::NotHomogeneous(self.to_string()))
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_ok()
    }

    /// Terms of exactly degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect();
        Polynomial::from_sorted(&self.ring, terms)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.add_scaled_shifted(&other.field().one(), None, other))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.add_scaled_shifted(&-other.field().one(), None, other))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.len() * other.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let m = a.mul(b);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| drl_desc(&a.0, &b.0));
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, c: &Scalar, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// `self + c * m * other`, by a single merge (monomial multiplication
    /// preserves every monomial order).
    pub fn add_scaled_shifted(&self, c: &Scalar, m: Option<&Monomial>, other: &Polynomial) -> Polynomial {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.len() + other.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |k: usize| -> Monomial {
            match m {
                Some(m) => other.terms[k].0.mul(m),
                None => other.terms[k].0.clone(),
            }
        };
        let mut pending: Option<Monomial> = None;
        while i < self.terms.len() || j < other.terms.len() {
            if j < other.terms.len() && pending.is_none() {
                pending = Some(shifted(j));
            }
            match (self.terms.get(i), pending.as_ref()) {
                (Some((a, ca)), Some(b)) => match drl_desc(a, b) {
                    Ordering::Less => {
                        out.push((a.clone(), ca.clone()));
                        i += 1;
                    }
                    Ordering::Greater => {
                        out.push((pending.take().unwrap(), c * &other.terms[j].1));
                        j += 1;
                    }
                    Ordering::Equal => {
                        let s = ca + &(c * &other.terms[j].1);
                        let b = pending.take().unwrap();
                        if !s.is_zero() {
                            out.push((b, s));
                        }
                        i += 1;
                        j += 1;
                    }
                },
                (Some((a, ca)), None) => {
                    out.push((a.clone(), ca.clone()));
                    i += 1;
                }
                (None, Some(_)) => {
                    out.push((pending.take().unwrap(), c * &other.terms[j].1));
                    j += 1;
                }
                (None, None) => break,
            }
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let f = self.field();
        let terms = self.terms.iter().filter_map(|(m, c)| m.derivative(i).map(|(e, dm)| (dm, c * &f.from_i64(e as i64)))).collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Substitutes `images[i]` for variable `i`.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::InvalidArgument("substitution arity".into()));
        }
        let target = images.first().map(|p| p.ring.clone()).unwrap_or_else(|| self.ring.clone());
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = t.try_mul(&images[i])?;
                }
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// Moves the polynomial into a ring with the same variables and field.
    pub fn with_ring(&self, ring: &Arc<PolyRing>) -> Result<Polynomial> {
        if ring.nvars() != self.ring.nvars() || ring.field() != self.field() {
            return Err(Error::AmbientMismatch);
        }
        Ok(Polynomial { ring: ring.clone(), terms: self.terms.clone() })
    }

    /// Divides by the leading coefficient (degrevlex).
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            Some((_, c)) => self.scale(&c.inv().expect("non-zero")),
            None => self.clone(),
        }
    }

    /// Canonical total order on polynomials of one ring, used for tie-breaks.
    pub fn canonical_cmp(&self, other: &Polynomial) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let o = drl_desc(&a.0, &b.0).then_with(|| a.1.canonical_cmp(&b.1));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("ambient mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("ambient mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("ambient mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }
}

pub(crate) fn write_monomial(f: &mut impl fmt::Write, names: &[String], m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        f.write_str(&names[i])?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Writes a signed linear combination `c1*b1 + c2*b2 ...` where each basis
/// label is produced by `label`; empty labels denote the unit.
pub(crate) fn write_combination<T>(
    f: &mut impl fmt::Write,
    terms: &[(T, Scalar)],
    mut label: impl FnMut(&mut String, &T) -> fmt::Result,
) -> fmt::Result {
    if terms.is_empty() {
        return f.write_char('0');
    }
    for (k, (t, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -c } else { c.clone() };
        if k == 0 {
            if neg {
                f.write_char('-')?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        let mut lab = String::new();
        label(&mut lab, t)?;
        if lab.is_empty() {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            f.write_str(&lab)?;
        } else {
            write!(f, "{abs}*{lab}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, &self.terms, |s, m| write_monomial(s, &self.ring.names, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_poly;

    fn ring(field: FieldSpec) -> Arc<PolyRing> {
        PolyRing::new(&["x", "y"], field).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(FieldSpec::Rationals);
        let a = parse_poly(&r, "x+y").unwrap();
        let b = parse_poly(&r, "x-y").unwrap();
        assert_eq!(&a * &b, parse_poly(&r, "x^2-y^2").unwrap());
        assert!((&a * &Polynomial::zero(&r)).is_zero());
    }

    #[test]
    fn product_over_f5() {
        let r = ring(FieldSpec::new_prime(5).unwrap());
        let a = parse_poly(&r, "x+2").unwrap();
        let b = parse_poly(&r, "x+3").unwrap();
        // 6 = 1 mod 5 for both the linear coefficient (2+3 = 5 = 0) and constant
        let p = &a * &b;
        assert_eq!(p, parse_poly(&r, "x^2+1").unwrap());
    }

    #[test]
    fn ambient_mismatch_is_reported() {
        let r = ring(FieldSpec::Rationals);
        let s = PolyRing::new(&["x", "y", "z"], FieldSpec::Rationals).unwrap();
        let a = Polynomial::var(&r, 0);
        let b = Polynomial::var(&s, 0);
        assert_eq!(a.try_mul(&b), Err(Error::AmbientMismatch));
    }

    #[test]
    fn homogeneous_degree_query() {
        let r = ring(FieldSpec::Rationals);
        assert_eq!(parse_poly(&r, "x^2 - x*y").unwrap().homogeneous_degree(), Ok(Some(2)));
        assert!(parse_poly(&r, "x^2 + y").unwrap().homogeneous_degree().is_err());
        assert_eq!(Polynomial::zero(&r).homogeneous_degree(), Ok(None));
    }

    #[test]
    fn display_format() {
        let r = ring(FieldSpec::Rationals);
        let p = parse_poly(&r, "3/2*x^2*y - y^3 + 1").unwrap();
        assert_eq!(p.to_string(), "3/2*x^2*y - y^3 + 1");
        assert_eq!(Polynomial::zero(&r).to_string(), "0");
    }
}
