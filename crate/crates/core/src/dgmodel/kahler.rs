//! The dg module of Kähler differentials of a model and its reduction
//! `S ⊗_A Ω`.

use std::collections::BTreeMap;

use super::algebra::{DgElement, DgMonomial};
use super::build::DgModel;
use crate::error::{Error, Result};
use crate::exactalg::{Monomial, Polynomial};
use crate::groebner::{FreeModule, GradedMap};

/// `Relative` is `Ω_{A/R}` (basis `dX`); `Absolute` is `Ω_{A/K}`, which
/// adds `dx_i` for the ring variables in degree 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KahlerBase {
    Relative,
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum KahlerBasis {
    Ring(usize),
    Var(usize),
}

/// An element of `Ω`: coefficients in `A` on the basis.
pub type KahlerElement = BTreeMap<KahlerBasis, DgElement>;

#[derive(Debug, Clone)]
pub struct KahlerDgModule {
    pub base: KahlerBase,
    /// `∂(db)` for each basis element, expanded over `A`.
    pub differentials: BTreeMap<KahlerBasis, KahlerElement>,
    /// `(S ⊗ Ω)_h` for `h = 0..=H`.
    pub components: Vec<FreeModule>,
    /// `reduced[h - 1]`: `(S ⊗ Ω)_h -> (S ⊗ Ω)_{h-1}`.
    pub reduced: Vec<GradedMap>,
}

fn add_into(out: &mut KahlerElement, b: KahlerBasis, e: DgElement) {
    if e.is_zero() {
        return;
    }
    let cur = out.remove(&b).unwrap_or_default().add(&e);
    if !cur.is_zero() {
        out.insert(b, cur);
    }
}

/// The universal derivation `d`, with coefficients written on the left.
pub fn universal_derivation(model: &DgModel, base: KahlerBase, a: &DgElement) -> KahlerElement {
    let alg = &model.algebra;
    let mut out = KahlerElement::new();
    for ((r, x), c) in a.terms() {
        if base == KahlerBase::Absolute {
            for i in 0..r.nvars() {
                if let Some((e, rest)) = r.derivative(i) {
                    let t = DgElement::from_terms([((rest, x.clone()), c.mul_int(e as i64))]);
                    add_into(&mut out, KahlerBasis::Ring(i), t);
                }
            }
        }
        let f = x.factors();
        for k in 0..f.len() {
            let (v, e) = f[k];
            let later: u32 = f[k + 1..].iter().map(|&(w, p)| alg.vars()[w as usize].hdeg * p as u32).sum();
            let mut coef = c.mul_int(e as i64);
            if alg.vars()[v as usize].is_odd() && later % 2 == 1 {
                coef = -coef;
            }
            let mut rest: Vec<(u32, u16)> = f.to_vec();
            if e > 1 {
                rest[k].1 -= 1;
            } else {
                rest.remove(k);
            }
            let t = DgElement::from_terms([((r.clone(), DgMonomial::from_pairs(&rest)), coef)]);
            add_into(&mut out, KahlerBasis::Var(v as usize), t);
        }
    }
    out
}

impl KahlerDgModule {
    /// `∂_Ω(Σ a_b db) = Σ ∂(a_b) db + (-1)^{|a_b|} a_b ∂(db)`.
    pub fn differential(&self, model: &DgModel, w: &KahlerElement) -> KahlerElement {
        let alg = &model.algebra;
        let mut out = KahlerElement::new();
        for (b, a) in w {
            add_into(&mut out, *b, alg.differential(a));
            for (term, coef) in a.terms() {
                let single = DgElement::from_terms([(term.clone(), coef.clone())]);
                let neg = alg.hdeg(&term.1) % 2 == 1;
                for (b2, a2) in &self.differentials[b] {
                    let prod = alg.multiply(&single, a2);
                    add_into(&mut out, *b2, if neg { prod.neg() } else { prod });
                }
            }
        }
        out
    }

    pub fn check_square_zero(&self, model: &DgModel) -> Result<()> {
        for (b, d) in &self.differentials {
            if !self.differential(model, d).is_empty() {
                return Err(Error::InvariantViolation(format!("∂∂ d{b:?} != 0 in Ω")));
            }
        }
        for (h, w) in self.reduced.windows(2).enumerate() {
            if !w[0].compose(&w[1])?.is_zero() {
                return Err(Error::InvariantViolation(format!("reduced Kähler complex: d{} d{} != 0", h + 1, h + 2)));
            }
        }
        Ok(())
    }

    /// Entries of the reduced complex lie in `𝔪_S`.
    pub fn check_minimal(&self) -> Result<()> {
        match self.reduced.iter().position(|m| !m.is_minimal()) {
            Some(h) => Err(Error::InvariantViolation(format!("reduced Kähler map in degree {} has a unit entry", h + 1))),
            None => Ok(()),
        }
    }
}

/// Builds `Ω` for the model and its reduction to `S`, which keeps only
/// coefficients free of dg variables and reduces them modulo `I`.
pub fn kahler_module(model: &DgModel, base: KahlerBase) -> KahlerDgModule {
    let alg = &model.algebra;
    let s = &model.quotient;
    let n = alg.ring().nvars();
    let mut differentials = BTreeMap::new();
    if base == KahlerBase::Absolute {
        for i in 0..n {
            differentials.insert(KahlerBasis::Ring(i), KahlerElement::new());
        }
    }
    for v in 0..alg.vars().len() {
        differentials.insert(KahlerBasis::Var(v), universal_derivation(model, base, alg.diff(v)));
    }
    let mut components = Vec::new();
    let mut members: Vec<Vec<KahlerBasis>> = Vec::new();
    let zero_basis: Vec<KahlerBasis> = if base == KahlerBase::Absolute { (0..n).map(KahlerBasis::Ring).collect() } else { Vec::new() };
    components.push(FreeModule::new(s, vec![1; zero_basis.len()]));
    members.push(zero_basis);
    for h in 1..=model.hdeg_bound {
        let range = model.variables_of_degree(h);
        components.push(FreeModule::new(s, range.clone().map(|v| alg.vars()[v].intdeg as i32).collect()));
        members.push(range.map(KahlerBasis::Var).collect());
    }
    let mut reduced = Vec::new();
    for h in 1..components.len() {
        let cols: Vec<Vec<Polynomial>> = members[h]
            .iter()
            .map(|b| {
                let mut col = components[h - 1].zero_vector();
                for (b2, a) in &differentials[b] {
                    let row = members[h - 1].iter().position(|x| x == b2);
                    let ring_part: Vec<(Monomial, _)> =
                        a.terms().iter().filter(|((_, x), _)| x.is_one()).map(|((r, _), c)| (r.clone(), c.clone())).collect();
                    if ring_part.is_empty() {
                        continue;
                    }
                    let row = row.expect("ring-coefficient terms sit one degree lower");
                    col[row] = &col[row] + &Polynomial::from_terms(alg.ring(), ring_part);
                }
                col
            })
            .collect();
        reduced.push(GradedMap::new(components[h].clone(), components[h - 1].clone(), cols).expect("reduced Kähler map is homogeneous"));
    }
    KahlerDgModule { base, differentials, components, reduced }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgmodel::build_minimal_model;
    use crate::exactalg::{parse_poly_list, FieldSpec, PolyRing};
    use crate::groebner::Ideal;

    fn model(vars: &[&str], gens: &str, h: u32, d: u32) -> DgModel {
        let r = PolyRing::new(vars, FieldSpec::Rationals).unwrap();
        build_minimal_model(&Ideal::new(&r, parse_poly_list(&r, gens).unwrap()).unwrap(), h, d).unwrap()
    }

    #[test]
    fn absolute_reduction_of_x_squared() {
        let m = model(&["x"], "x^2", 3, 6);
        let k = kahler_module(&m, KahlerBase::Absolute);
        assert_eq!(k.reduced[0].columns, vec![vec![parse_poly_list(m.algebra.ring(), "2*x").unwrap()[0].clone()]]);
        k.check_square_zero(&m).unwrap();
        k.check_minimal().unwrap();
    }

    #[test]
    fn relative_complex_is_minimal_and_square_zero() {
        for gens in ["x^2, x*y", "x^2, x*y, y^2", "x^2, y^2"] {
            let m = model(&["x", "y"], gens, 4, 8);
            let k = kahler_module(&m, KahlerBase::Relative);
            k.check_square_zero(&m).unwrap();
            k.check_minimal().unwrap();
            assert_eq!(k.components[1].rank(), m.deviations()[0]);
        }
    }
}
