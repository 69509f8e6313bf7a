//! Free strictly graded-commutative algebras `R[X]` with a differential.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exactalg::{write_combination, write_monomial, Monomial, PolyRing, Polynomial, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgVariable {
    pub name: String,
    pub hdeg: u32,
    pub intdeg: u32,
}

impl DgVariable {
    pub fn is_odd(&self) -> bool {
        self.hdeg % 2 == 1
    }
}

/// Product of dg variables: `(index, exponent)` pairs sorted by index, odd
/// variables with exponent one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DgMonomial(SmallVec<[(u32, u16); 4]>);

impl DgMonomial {
    pub fn one() -> Self {
        DgMonomial(SmallVec::new())
    }

    pub fn var(v: usize) -> Self {
        DgMonomial(SmallVec::from_slice(&[(v as u32, 1)]))
    }

    pub fn from_pairs(pairs: &[(u32, u16)]) -> Self {
        DgMonomial(SmallVec::from_slice(pairs))
    }

    pub fn factors(&self) -> &[(u32, u16)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of variable factors counted with multiplicity.
    pub fn length(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn max_var(&self) -> Option<u32> {
        self.0.last().map(|f| f.0)
    }

    pub fn min_var(&self) -> Option<u32> {
        self.0.first().map(|f| f.0)
    }
}

pub type DgKey = (Monomial, DgMonomial);

/// An element of `R[X]` in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DgElement {
    terms: BTreeMap<DgKey, Scalar>,
}

impl DgElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<DgKey, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: DgKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (DgKey, Scalar)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn add(&self, other: &DgElement) -> DgElement {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> DgElement {
        if c.is_zero() {
            return Self::zero();
        }
        DgElement { terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect() }
    }

    pub fn neg(&self) -> DgElement {
        DgElement { terms: self.terms.iter().map(|(k, x)| (k.clone(), -x)).collect() }
    }

    pub fn sub(&self, other: &DgElement) -> DgElement {
        self.add(&other.neg())
    }

    /// Multiplies every ring coefficient by the monomial `m`.
    pub fn shift_ring(&self, m: &Monomial) -> DgElement {
        DgElement { terms: self.terms.iter().map(|((r, x), c)| ((r.mul(m), x.clone()), c.clone())).collect() }
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial, &DgMonomial) -> bool) -> DgElement {
        DgElement { terms: self.terms.iter().filter(|((r, x), _)| keep(r, x)).map(|(k, c)| (k.clone(), c.clone())).collect() }
    }
}

/// An `R`-linear derivation of `R[X]`: its degree and values on the dg
/// variables (ring variables are sent to `ring_values`, usually zero).
#[derive(Debug, Clone)]
pub struct DgDerivation {
    pub degree: i32,
    pub values: Vec<DgElement>,
    pub ring_values: Vec<DgElement>,
}

impl DgDerivation {
    pub fn r_linear(degree: i32, values: Vec<DgElement>, nvars: usize) -> Self {
        DgDerivation { degree, values, ring_values: vec![DgElement::zero(); nvars] }
    }
}

/// `R[X]` with differential `diff[v] = ∂(v)`. Variables are kept sorted by
/// homological degree.
#[derive(Debug, Clone)]
pub struct DgAlgebra {
    ring: Arc<PolyRing>,
    vars: Vec<DgVariable>,
    diff: Vec<DgElement>,
}

impl DgAlgebra {
    pub fn new(ring: &Arc<PolyRing>) -> Self {
        DgAlgebra { ring: ring.clone(), vars: Vec::new(), diff: Vec::new() }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn vars(&self) -> &[DgVariable] {
        &self.vars
    }

    pub fn diff(&self, v: usize) -> &DgElement {
        &self.diff[v]
    }

    pub fn differentials(&self) -> &[DgElement] {
        &self.diff
    }

    pub fn add_variable(&mut self, var: DgVariable, diff: DgElement) -> usize {
        assert!(self.vars.last().is_none_or(|l| l.hdeg <= var.hdeg), "variables must be added by degree");
        self.vars.push(var);
        self.diff.push(diff);
        self.vars.len() - 1
    }

    pub fn field_one(&self) -> Scalar {
        self.ring.field().one()
    }

    pub fn hdeg(&self, m: &DgMonomial) -> u32 {
        m.0.iter().map(|&(v, e)| self.vars[v as usize].hdeg * e as u32).sum()
    }

    pub fn intdeg(&self, m: &DgMonomial) -> u32 {
        m.0.iter().map(|&(v, e)| self.vars[v as usize].intdeg * e as u32).sum()
    }

    fn odd(&self, v: u32) -> bool {
        self.vars[v as usize].is_odd()
    }

    pub fn var_element(&self, v: usize) -> DgElement {
        let n = self.ring.nvars();
        DgElement::from_terms([((Monomial::one(n), DgMonomial::var(v)), self.field_one())])
    }

    pub fn ring_element(&self, p: &Polynomial) -> DgElement {
        DgElement::from_terms(p.terms().iter().map(|(m, c)| ((m.clone(), DgMonomial::one()), c.clone())))
    }

    pub fn one(&self) -> DgElement {
        self.ring_element(&Polynomial::one(&self.ring))
    }

    /// `a * b = sign * c`; `None` when an odd variable repeats.
    pub fn mul_monomials(&self, a: &DgMonomial, b: &DgMonomial) -> Option<(bool, DgMonomial)> {
        let mut out: SmallVec<[(u32, u16); 4]> = SmallVec::with_capacity(a.0.len() + b.0.len());
        let mut negative = false;
        // odd factors of `a` not yet passed by the merge
        let mut odd_a_remaining = a.0.iter().filter(|f| self.odd(f.0)).count();
        let (mut i, mut j) = (0, 0);
        while i < a.0.len() || j < b.0.len() {
            let take_a = j == b.0.len() || (i < a.0.len() && a.0[i].0 < b.0[j].0);
            if take_a {
                if self.odd(a.0[i].0) {
                    odd_a_remaining -= 1;
                }
                out.push(a.0[i]);
                i += 1;
            } else if i < a.0.len() && a.0[i].0 == b.0[j].0 {
                let v = a.0[i].0;
                if self.odd(v) {
                    return None;
                }
                out.push((v, a.0[i].1 + b.0[j].1));
                i += 1;
                j += 1;
            } else {
                if self.odd(b.0[j].0) && odd_a_remaining % 2 == 1 {
                    negative = !negative;
                }
                out.push(b.0[j]);
                j += 1;
            }
        }
        Some((negative, DgMonomial(out)))
    }

    pub fn multiply(&self, a: &DgElement, b: &DgElement) -> DgElement {
        let mut out = DgElement::zero();
        for ((ra, xa), ca) in &a.terms {
            for ((rb, xb), cb) in &b.terms {
                if let Some((neg, x)) = self.mul_monomials(xa, xb) {
                    let c = ca * cb;
                    out.add_term((ra.mul(rb), x), if neg { -c } else { c });
                }
            }
        }
        out
    }

    fn monomial_element(&self, r: &Monomial, x: DgMonomial, c: Scalar) -> DgElement {
        DgElement::from_terms([((r.clone(), x), c)])
    }

    /// Graded Leibniz extension of `theta` applied to `a`.
    pub fn apply_derivation(&self, theta: &DgDerivation, a: &DgElement) -> DgElement {
        let odd_theta = theta.degree.rem_euclid(2) == 1;
        let mut out = DgElement::zero();
        for ((r, x), c) in &a.terms {
            // θ(r) x
            for (i, &e) in r.exponents().iter().enumerate() {
                if e == 0 || theta.ring_values[i].is_zero() {
                    continue;
                }
                let (_, rest) = r.derivative(i).unwrap();
                let coef = c.mul_int(e as i64);
                let left = self.monomial_element(&rest, DgMonomial::one(), coef);
                let right = self.monomial_element(&Monomial::one(r.nvars()), x.clone(), self.field_one());
                out = out.add(&self.multiply(&self.multiply(&left, &theta.ring_values[i]), &right));
            }
            // r θ(x)
            let mut prefix_hdeg = 0u32;
            for k in 0..x.0.len() {
                let (v, e) = x.0[k];
                let val = &theta.values[v as usize];
                if !val.is_zero() {
                    let prefix = DgMonomial(SmallVec::from_slice(&x.0[..k]));
                    let suffix = DgMonomial(SmallVec::from_slice(&x.0[k + 1..]));
                    let mut coef = c.mul_int(e as i64);
                    if odd_theta && prefix_hdeg % 2 == 1 {
                        coef = -coef;
                    }
                    let mut mid_x = SmallVec::new();
                    if e > 1 {
                        mid_x.push((v, e - 1));
                    }
                    let left = self.monomial_element(r, prefix, coef);
                    let mid = self.multiply(&self.monomial_element(&Monomial::one(r.nvars()), DgMonomial(mid_x), self.field_one()), val);
                    let right = self.monomial_element(&Monomial::one(r.nvars()), suffix, self.field_one());
                    out = out.add(&self.multiply(&self.multiply(&left, &mid), &right));
                }
                prefix_hdeg += self.vars[v as usize].hdeg * e as u32;
            }
        }
        out
    }

    pub fn differential_derivation(&self) -> DgDerivation {
        DgDerivation::r_linear(-1, self.diff.clone(), self.ring.nvars())
    }

    pub fn differential(&self, a: &DgElement) -> DgElement {
        self.apply_derivation(&self.differential_derivation(), a)
    }

    /// `∂∂v = 0` for every variable.
    pub fn check_square_zero(&self) -> Result<()> {
        let d = self.differential_derivation();
        for (v, dv) in self.diff.iter().enumerate() {
            if !self.apply_derivation(&d, dv).is_zero() {
                return Err(Error::InvariantViolation(format!("∂∂ {} != 0", self.vars[v].name)));
            }
        }
        Ok(())
    }

    /// `∂θ - (-1)^{|θ|} θ∂` vanishes on every variable and ring variable.
    pub fn is_chain_derivation(&self, theta: &DgDerivation) -> bool {
        let d = self.differential_derivation();
        let sign_neg = theta.degree.rem_euclid(2) == 0;
        let n = self.ring.nvars();
        let mut gens: Vec<DgElement> = (0..self.vars.len()).map(|v| self.var_element(v)).collect();
        gens.extend((0..n).map(|i| self.ring_element(&Polynomial::var(&self.ring, i))));
        gens.iter().all(|g| {
            let a = self.apply_derivation(&d, &self.apply_derivation(theta, g));
            let b = self.apply_derivation(theta, &self.apply_derivation(&d, g));
            let comm = if sign_neg { a.sub(&b) } else { a.add(&b) };
            comm.is_zero()
        })
    }

    pub fn write_dg_monomial(&self, f: &mut impl fmt::Write, x: &DgMonomial) -> fmt::Result {
        for (k, &(v, e)) in x.0.iter().enumerate() {
            if k > 0 {
                f.write_char('*')?;
            }
            f.write_str(&self.vars[v as usize].name)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }

    pub fn format(&self, a: &DgElement) -> String {
        let terms: Vec<(DgKey, Scalar)> = a.terms.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        let mut s = String::new();
        write_combination(&mut s, &terms, |out, (r, x)| {
            write_monomial(out, self.ring.names(), r)?;
            if !r.is_one() && !x.is_one() {
                out.push('*');
            }
            self.write_dg_monomial(out, x)
        })
        .unwrap();
        s
    }

    /// Sub-algebra on the variables `keep` (a prefix by degree), with the
    /// differential restricted.
    pub fn restrict_to_prefix(&self, count: usize) -> DgAlgebra {
        DgAlgebra { ring: self.ring.clone(), vars: self.vars[..count].to_vec(), diff: self.diff[..count].to_vec() }
    }

    /// Quotient by `𝔪_R` and the variables below `first`: an algebra over
    /// `k` on the remaining variables, renumbered from zero.
    pub fn fibre_from(&self, first: usize) -> Result<DgAlgebra> {
        let k = PolyRing::new::<&str>(&[], self.ring.field())?;
        let one = Monomial::one(0);
        let mut out = DgAlgebra::new(&k);
        for (v, var) in self.vars.iter().enumerate().skip(first) {
            let d = &self.diff[v];
            let mut e = DgElement::zero();
            for ((r, x), c) in &d.terms {
                if r.is_one() && x.min_var().is_none_or(|m| m as usize >= first) {
                    let shifted = DgMonomial(x.0.iter().map(|&(w, p)| (w - first as u32, p)).collect());
                    e.add_term((one.clone(), shifted), c.clone());
                }
            }
            out.add_variable(var.clone(), e);
        }
        Ok(out)
    }
}
