use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::{same_ring, Monomial, MonomialOrder, PolyRing, Polynomial};

/// A homogeneous ideal given by generators. Zero generators are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    gens: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<Polynomial>) -> Result<Self> {
        let mut kept = Vec::with_capacity(gens.len());
        for g in gens {
            if !same_ring(ring, g.ring()) {
                return Err(Error::AmbientMismatch);
            }
            g.homogeneous_degree()?;
            if !g.is_zero() {
                kept.push(g);
            }
        }
        Ok(Ideal { ring: ring.clone(), gens: kept })
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Ideal { ring: ring.clone(), gens: Vec::new() }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.gens.iter().map(|g| g.total_degree().unwrap()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees().into_iter().max().unwrap_or(0)
    }
}

/// A Gröbner basis with respect to `order`.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    elements: Vec<Polynomial>,
    order: MonomialOrder,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|g| g.leading_monomial(self.order).unwrap().clone()).collect()
    }

    /// Canonical representative of `f` modulo the ideal.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if !same_ring(&self.ring, f.ring()) {
            return Err(Error::AmbientMismatch);
        }
        Ok(reduce(f, &self.elements, self.order))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elements.iter().any(|g| g.total_degree() == Some(0))
    }

    /// Buchberger's criterion, checked from scratch: every S-polynomial of
    /// the stored elements reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let g = &self.elements;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| reduce(&s_polynomial(&g[i], &g[j], self.order), g, self.order).is_zero()))
    }

    /// True when the monomial is not divisible by any leading monomial.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.elements.iter().all(|g| !g.leading_monomial(self.order).unwrap().divides(m))
    }
}

/// Full reduction of `f` by `basis`.
pub(crate) fn reduce(f: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let ring = f.ring();
    let leads: Vec<_> = basis.iter().map(|g| g.leading_term(order).unwrap().clone()).collect();
    let mut rem = Vec::new();
    let mut p = f.clone();
    while let Some((lm, lc)) = p.leading_term(order).cloned() {
        match leads.iter().position(|(m, _)| m.divides(&lm)) {
            Some(i) => {
                let (gm, gc) = &leads[i];
                let t = gm.quotient_of(&lm).unwrap();
                let c = -(&lc * &gc.inv().unwrap());
                p = p.add_scaled_shifted(&c, Some(&t), &basis[i]);
            }
            None => {
                let one = ring.field().one();
                p = p.add_scaled_shifted(&-&lc, None, &Polynomial::monomial(ring, lm.clone(), one));
                rem.push((lm, lc));
            }
        }
    }
    Polynomial::from_terms(ring, rem)
}

fn monic(p: &Polynomial, order: MonomialOrder) -> Polynomial {
    let c = &p.leading_term(order).unwrap().1;
    p.scale(&c.inv().unwrap())
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let (fm, fc) = f.leading_term(order).unwrap();
    let (gm, gc) = g.leading_term(order).unwrap();
    let l = fm.lcm(gm);
    let a = fm.quotient_of(&l).unwrap();
    let b = gm.quotient_of(&l).unwrap();
    let left = f.mul_term(&fc.inv().unwrap(), &a);
    left.add_scaled_shifted(&-&gc.inv().unwrap(), Some(&b), g)
}

/// Buchberger's algorithm; returns the reduced Gröbner basis.
pub fn buchberger(ideal: &Ideal, order: MonomialOrder) -> GroebnerBasis {
    let ring = ideal.ring().clone();
    let mut basis: Vec<Polynomial> = Vec::new();
    // pairs keyed by (lcm degree, j, i) so the processing order is deterministic
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let add = |basis: &mut Vec<Polynomial>, pairs: &mut BTreeSet<(u32, usize, usize)>, p: Polynomial| {
        let p = monic(&p, order);
        let j = basis.len();
        let pm = p.leading_monomial(order).unwrap().clone();
        for (i, g) in basis.iter().enumerate() {
            let gm = g.leading_monomial(order).unwrap();
            if !gm.is_coprime(&pm) {
                pairs.insert((gm.lcm(&pm).degree(), j, i));
            }
        }
        basis.push(p);
    };
    let mut gens: Vec<_> = ideal.generators().to_vec();
    gens.sort_by_key(|g| g.total_degree());
    for g in gens {
        let r = reduce(&g, &basis, order);
        if !r.is_zero() {
            add(&mut basis, &mut pairs, r);
        }
    }
    while let Some(&key) = pairs.iter().next() {
        pairs.remove(&key);
        let (_, j, i) = key;
        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = reduce(&s, &basis, order);
        if !r.is_zero() {
            add(&mut basis, &mut pairs, r);
        }
    }
    // minimise then inter-reduce
    let leads: Vec<Monomial> = basis.iter().map(|g| g.leading_monomial(order).unwrap().clone()).collect();
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..basis.len() {
        let redundant = (0..basis.len()).any(|j| j != i && leads[j].divides(&leads[i]) && (leads[j] != leads[i] || j < i));
        if !redundant {
            keep.push(i);
        }
    }
    let minimal: Vec<Polynomial> = keep.iter().map(|&i| basis[i].clone()).collect();
    let mut reduced: Vec<Polynomial> = (0..minimal.len())
        .map(|i| {
            let others: Vec<Polynomial> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            let lt = minimal[i].leading_term(order).unwrap().clone();
            let tail = minimal[i].add_scaled_shifted(&-&lt.1, None, &Polynomial::monomial(&ring, lt.0.clone(), ring.field().one()));
            let tail = reduce(&tail, &others, order);
            monic(&(&Polynomial::monomial(&ring, lt.0, lt.1) + &tail), order)
        })
        .collect();
    reduced.sort_by(|a, b| order.cmp(a.leading_monomial(order).unwrap(), b.leading_monomial(order).unwrap()));
    GroebnerBasis { ring, elements: reduced, order, reduced: true }
}

/// Krull dimension of `R/I` read off the leading monomials: the largest set
/// of variables containing the support of no leading monomial.
pub fn krull_dimension(gb: &GroebnerBasis) -> usize {
    let n = gb.ring().nvars();
    let leads = gb.leading_monomials();
    if leads.iter().any(|m| m.is_one()) {
        return 0;
    }
    let supports: Vec<u64> = leads.iter().map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i))).collect();
    let mut best = 0;
    for set in 0u64..(1u64 << n) {
        let size = set.count_ones() as usize;
        if size > best && supports.iter().all(|s| s & !set != 0) {
            best = size;
        }
    }
    best
}

/// Codimension of a proper homogeneous ideal.
pub fn height(ideal: &Ideal) -> Result<usize> {
    let gb = buchberger(ideal, MonomialOrder::DegRevLex);
    if gb.is_unit_ideal() {
        return Err(Error::UnitIdeal);
    }
    Ok(ideal.ring().nvars() - krull_dimension(&gb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly_list, FieldSpec};

    fn ideal(vars: &[&str], gens: &str) -> Ideal {
        let r = PolyRing::new(vars, FieldSpec::Rationals).unwrap();
        Ideal::new(&r, parse_poly_list(&r, gens).unwrap()).unwrap()
    }

    /// Oracle: every S-polynomial of every pair reduces to zero.
    fn assert_groebner(gb: &GroebnerBasis) {
        let e = gb.elements();
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                let s = s_polynomial(&e[i], &e[j], gb.order());
                assert!(reduce(&s, e, gb.order()).is_zero());
            }
        }
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let i = ideal(&["x", "y"], "x, y");
        let gb = buchberger(&i, MonomialOrder::DegRevLex);
        assert_eq!(gb.elements().len(), 2);
        assert_groebner(&gb);
    }

    #[test]
    fn single_pair_reduces_to_zero() {
        let i = ideal(&["x", "y"], "x^2, x*y");
        let gb = buchberger(&i, MonomialOrder::DegRevLex);
        let shown: Vec<String> = gb.elements().iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, vec!["x*y", "x^2"]);
        assert_groebner(&gb);
    }

    #[test]
    fn s_pair_closure_adds_y2z() {
        let i = ideal(&["x", "y", "z"], "x^2 - y*z, x*y");
        let gb = buchberger(&i, MonomialOrder::DegRevLex);
        assert_groebner(&gb);
        let r = i.ring();
        let y2z = crate::exactalg::parse_poly(r, "y^2*z").unwrap();
        assert!(gb.elements().contains(&y2z));
        for order in [MonomialOrder::Lex, MonomialOrder::DegLex] {
            let gb = buchberger(&i, order);
            assert_groebner(&gb);
            assert!(gb.contains(&y2z).unwrap());
        }
    }

    #[test]
    fn normal_forms() {
        let i = ideal(&["x", "y"], "x^2");
        let gb = buchberger(&i, MonomialOrder::DegRevLex);
        let r = i.ring();
        assert!(gb.normal_form(&i.generators()[0]).unwrap().is_zero());
        assert_eq!(gb.normal_form(&Polynomial::one(r)).unwrap(), Polynomial::one(r));
        assert!(gb.contains(&crate::exactalg::parse_poly(r, "x^3").unwrap()).unwrap());
    }

    #[test]
    fn heights() {
        assert_eq!(height(&ideal(&["x", "y"], "x")).unwrap(), 1);
        assert_eq!(height(&ideal(&["x", "y"], "x^2, x*y, y^2")).unwrap(), 2);
        assert_eq!(height(&ideal(&["x", "y", "z"], "x^2 - y*z")).unwrap(), 1);
        assert_eq!(height(&ideal(&["x", "y"], "x^2, x*y")).unwrap(), 1);
        assert_eq!(height(&ideal(&["x", "y"], "")).unwrap(), 0);
        assert_eq!(height(&ideal(&["x", "y"], "1")), Err(Error::UnitIdeal));
    }

    #[test]
    fn inhomogeneous_generators_rejected() {
        let r = PolyRing::new(&["x"], FieldSpec::Rationals).unwrap();
        let g = parse_poly_list(&r, "x^2 + x").unwrap();
        assert!(matches!(Ideal::new(&r, g), Err(Error::NotHomogeneous(_))));
    }
}
