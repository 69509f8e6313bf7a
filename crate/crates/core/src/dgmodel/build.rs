//! Degree-by-degree construction of the minimal model `R[X] -> S` and
//! slice-wise homology of dg algebras over a polynomial ring.

use std::collections::HashMap;
use std::sync::Arc;

use super::algebra::{DgAlgebra, DgElement, DgMonomial, DgVariable};
use crate::error::{Error, Result};
use crate::exactalg::{Monomial, Polynomial};
use crate::groebner::{GradedRing, Ideal};
use crate::koszul::minimal_ideal_generators;
use crate::linalg::{kernel_with_one, normalize, Echelon, SparseVec};

/// One bidegree `(h, d)` of a dg algebra: pairs (ring monomial, dg
/// monomial) with total internal degree `d` and homological degree `h`.
pub struct ModelSlice {
    pub monos: Vec<DgMonomial>,
    offsets: Vec<u32>,
    index: HashMap<DgMonomial, usize>,
    ring_degrees: Vec<u32>,
    pub dim: usize,
}

/// Slice machinery for a fixed dg algebra; caches differentials of dg
/// monomials.
pub struct SliceEngine<'a> {
    alg: &'a DgAlgebra,
    ring: Arc<GradedRing>,
    diff_cache: HashMap<DgMonomial, DgElement>,
}

impl<'a> SliceEngine<'a> {
    pub fn new(alg: &'a DgAlgebra) -> Self {
        SliceEngine { alg, ring: GradedRing::polynomial(alg.ring()), diff_cache: HashMap::new() }
    }

    /// Dg monomials of homological degree `h` and internal degree `<= d`.
    pub fn dg_monomials(&self, h: u32, d: u32) -> Vec<DgMonomial> {
        fn rec(alg: &DgAlgebra, start: usize, h: u32, d: u32, cur: &mut Vec<(u32, u16)>, out: &mut Vec<DgMonomial>) {
            if h == 0 {
                out.push(DgMonomial::from_pairs(cur));
                return;
            }
            for v in start..alg.vars().len() {
                let var = &alg.vars()[v];
                if var.hdeg > h {
                    break;
                }
                if var.intdeg > d {
                    continue;
                }
                let max_e = if var.is_odd() { 1 } else { (h / var.hdeg).min(d / var.intdeg.max(1)) };
                for e in 1..=max_e {
                    cur.push((v as u32, e as u16));
                    rec(alg, v + 1, h - var.hdeg * e, d - var.intdeg * e, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(self.alg, 0, h, d, &mut Vec::new(), &mut out);
        out
    }

    pub fn slice(&self, h: u32, d: u32) -> ModelSlice {
        let monos = self.dg_monomials(h, d);
        let mut offsets = Vec::with_capacity(monos.len());
        let mut ring_degrees = Vec::with_capacity(monos.len());
        let mut index = HashMap::with_capacity(monos.len());
        let mut total = 0u32;
        for (k, m) in monos.iter().enumerate() {
            let rd = d - self.alg.intdeg(m);
            offsets.push(total);
            ring_degrees.push(rd);
            index.insert(m.clone(), k);
            total += self.ring.dim(rd as i32) as u32;
        }
        ModelSlice { monos, offsets, index, ring_degrees, dim: total as usize }
    }

    fn diff_of(&mut self, m: &DgMonomial) -> DgElement {
        if let Some(e) = self.diff_cache.get(m) {
            return e.clone();
        }
        let n = self.alg.ring().nvars();
        let one = DgElement::from_terms([((Monomial::one(n), m.clone()), self.alg.field_one())]);
        let e = self.alg.differential(&one);
        self.diff_cache.insert(m.clone(), e.clone());
        e
    }

    /// Coordinates of a homogeneous element lying in `slice`.
    pub fn coords(&self, slice: &ModelSlice, e: &DgElement) -> SparseVec {
        let entries = e
            .terms()
            .iter()
            .map(|((r, x), c)| {
                let k = slice.index[x];
                let i = self.ring.monomial_coords(r)[0].0;
                (slice.offsets[k] + i, c.clone())
            })
            .collect();
        normalize(entries)
    }

    pub fn element(&self, slice: &ModelSlice, v: &[(u32, crate::exactalg::Scalar)]) -> DgElement {
        DgElement::from_terms(v.iter().map(|(idx, c)| {
            let k = slice.offsets.partition_point(|&o| o <= *idx) - 1;
            let rs = self.ring.slice(slice.ring_degrees[k]);
            let r = rs.basis()[(*idx - slice.offsets[k]) as usize].clone();
            ((r, slice.monos[k].clone()), c.clone())
        }))
    }

    /// Columns of `∂: (h, d) -> (h - 1, d)` in the coordinates of `target`.
    pub fn differential_columns(&mut self, source: &ModelSlice, target: &ModelSlice) -> Vec<SparseVec> {
        let mut cols = Vec::with_capacity(source.dim);
        for (k, m) in source.monos.iter().enumerate() {
            let dm = self.diff_of(m);
            let rs = self.ring.slice(source.ring_degrees[k]);
            for r in rs.basis() {
                cols.push(self.coords(target, &dm.shift_ring(r)));
            }
        }
        cols
    }

    pub fn differential_rank(&mut self, h: u32, d: u32) -> usize {
        if h == 0 {
            return 0;
        }
        let src = self.slice(h, d);
        let tgt = self.slice(h - 1, d);
        crate::linalg::rank(self.differential_columns(&src, &tgt))
    }

    /// `dim H_h` in internal degree `d`.
    pub fn homology_dim(&mut self, h: u32, d: u32) -> usize {
        let dim = self.slice(h, d).dim;
        dim - self.differential_rank(h, d) - self.differential_rank(h + 1, d)
    }
}

/// The minimal model truncated at homological degree `hdeg_bound` and
/// internal degree `intdeg_bound`.
#[derive(Debug, Clone)]
pub struct DgModel {
    pub algebra: DgAlgebra,
    pub ideal: Ideal,
    pub quotient: Arc<GradedRing>,
    pub hdeg_bound: u32,
    pub intdeg_bound: u32,
}

impl DgModel {
    /// `ε_i = |X_i|` for `i = 1..=hdeg_bound`.
    pub fn deviations(&self) -> Vec<usize> {
        (1..=self.hdeg_bound).map(|i| self.algebra.vars().iter().filter(|v| v.hdeg == i).count()).collect()
    }

    pub fn variables_of_degree(&self, h: u32) -> std::ops::Range<usize> {
        let vars = self.algebra.vars();
        let lo = vars.partition_point(|v| v.hdeg < h);
        let hi = vars.partition_point(|v| v.hdeg <= h);
        lo..hi
    }

    /// `A_(n) = R[X_{<n}]`.
    pub fn stage(&self, n: u32) -> DgAlgebra {
        self.algebra.restrict_to_prefix(self.variables_of_degree(n).start)
    }

    /// `A^(n) = k[X_{>=n}]`.
    pub fn fibre(&self, n: u32) -> DgAlgebra {
        self.algebra.fibre_from(self.variables_of_degree(n).start).expect("empty ring is valid")
    }

    /// `name : hdeg intdeg : differential`, one line per variable.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (v, var) in self.algebra.vars().iter().enumerate() {
            s.push_str(&format!("{} : {} {} : {}\n", var.name, var.hdeg, var.intdeg, self.algebra.format(self.algebra.diff(v))));
        }
        s
    }

    /// `∂x ∈ 𝔪_R A + 𝔪_A²`: no term is a unit multiple of a single
    /// variable or a nonzero constant.
    pub fn check_minimality(&self) -> Result<()> {
        for (v, d) in self.algebra.differentials().iter().enumerate() {
            for (r, x) in d.terms().keys() {
                if r.is_one() && (x.is_one() || x.length() == 1) {
                    return Err(Error::InvariantViolation(format!("differential of {} has a linear term", self.algebra.vars()[v].name)));
                }
            }
        }
        Ok(())
    }

    /// `H_0(A) ≅ S` and `H_i(A) = 0` for `0 < i < hdeg_bound`, slice-wise
    /// for internal degrees up to the bound.
    pub fn check_acyclic(&self) -> Result<()> {
        let mut eng = SliceEngine::new(&self.algebra);
        for d in 0..=self.intdeg_bound {
            let h0 = eng.homology_dim(0, d);
            let s = self.quotient.dim(d as i32);
            if h0 != s {
                return Err(Error::InvariantViolation(format!("dim H_0 = {h0} but dim S = {s} in degree {d}")));
            }
            for i in 1..self.hdeg_bound {
                let h = eng.homology_dim(i, d);
                if h != 0 {
                    return Err(Error::InvariantViolation(format!("H_{i} has dimension {h} in internal degree {d}")));
                }
            }
        }
        Ok(())
    }

    pub fn check_all(&self) -> Result<()> {
        self.algebra.check_square_zero()?;
        self.check_minimality()?;
        self.check_acyclic()
    }
}

/// Builds `X_1, ..., X_H`: `X_1` maps to minimal generators of `I` and
/// `X_n` kills a minimal generating set of `H_{n-1}(A_(n))`, slice by
/// slice in increasing internal degree up to `D`.
pub fn build_minimal_model(ideal: &Ideal, hdeg_bound: u32, intdeg_bound: u32) -> Result<DgModel> {
    if hdeg_bound < 2 {
        return Err(Error::InvalidArgument("the homological bound must be at least 2".into()));
    }
    let p = ideal.ring().field().characteristic();
    if p != 0 && p as usize <= hdeg_bound as usize {
        return Err(Error::CharacteristicTooSmall { p, bound: hdeg_bound as usize });
    }
    let quotient = GradedRing::quotient(ideal)?;
    let maxdeg = ideal.max_degree();
    if intdeg_bound < maxdeg * hdeg_bound {
        log::warn!("internal degree bound {intdeg_bound} is below {maxdeg} * {hdeg_bound}; model variables may be missed");
    }
    let ring = ideal.ring();
    let mut alg = DgAlgebra::new(ring);
    let gens: Vec<Polynomial> = minimal_ideal_generators(ideal);
    for (k, f) in gens.iter().enumerate() {
        let var = DgVariable { name: format!("y1_{}", k + 1), hdeg: 1, intdeg: f.total_degree().unwrap() };
        let d = alg.ring_element(f);
        alg.add_variable(var, d);
    }
    for n in 2..=hdeg_bound {
        let mut count = 0;
        for d in 0..=intdeg_bound {
            let new = {
                let mut eng = SliceEngine::new(&alg);
                let cyc = eng.slice(n - 1, d);
                if cyc.dim == 0 {
                    continue;
                }
                let below = eng.slice(n - 2, d);
                let cols = eng.differential_columns(&cyc, &below);
                let z = kernel_with_one(&cols, &alg.field_one());
                if z.is_empty() {
                    continue;
                }
                let top = eng.slice(n, d);
                let mut ech = Echelon::new();
                for b in eng.differential_columns(&top, &cyc) {
                    ech.insert(b);
                }
                let mut new = Vec::new();
                for v in z {
                    if ech.insert(v.clone()) {
                        new.push(eng.element(&cyc, &v));
                    }
                }
                new
            };
            for e in new {
                count += 1;
                let var = DgVariable { name: format!("y{n}_{count}"), hdeg: n, intdeg: d };
                alg.add_variable(var, e);
            }
        }
    }
    Ok(DgModel { algebra: alg, ideal: ideal.clone(), quotient, hdeg_bound, intdeg_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly_list, FieldSpec, PolyRing};

    fn model(vars: &[&str], gens: &str, h: u32, d: u32) -> DgModel {
        let r = PolyRing::new(vars, FieldSpec::Rationals).unwrap();
        build_minimal_model(&Ideal::new(&r, parse_poly_list(&r, gens).unwrap()).unwrap(), h, d).unwrap()
    }

    #[test]
    fn complete_intersection_stops_at_koszul() {
        let m = model(&["x", "y"], "x^2, y^2", 4, 8);
        assert_eq!(m.deviations(), vec![2, 0, 0, 0]);
        assert_eq!(m.dump(), "y1_1 : 1 2 : x^2\ny1_2 : 1 2 : y^2\n");
        m.check_all().unwrap();
    }

    #[test]
    fn x2_xy_has_one_quadratic_relation() {
        let m = model(&["x", "y"], "x^2, x*y", 3, 6);
        assert_eq!(m.deviations()[..2], [2, 1]);
        let t = m.variables_of_degree(2).start;
        let dt = m.algebra.format(m.algebra.diff(t));
        assert!(dt == "y*y1_1 - x*y1_2" || dt == "-y*y1_1 + x*y1_2", "{dt}");
        m.check_all().unwrap();
    }

    #[test]
    fn max_ideal_square_in_two_variables() {
        let m = model(&["x", "y"], "x^2, x*y, y^2", 4, 8);
        assert_eq!(m.deviations()[..2], [3, 2]);
        m.check_all().unwrap();
        let f2 = m.fibre(2);
        assert_eq!(f2.vars().iter().filter(|v| v.hdeg == 2).count(), 2);
    }

    #[test]
    fn zero_ideal_has_no_variables() {
        let m = model(&["x", "y"], "", 3, 4);
        assert_eq!(m.deviations(), vec![0, 0, 0]);
        m.check_all().unwrap();
    }

    #[test]
    fn small_characteristic_is_refused() {
        let r = PolyRing::new(&["x"], FieldSpec::new_prime(5).unwrap()).unwrap();
        let i = Ideal::new(&r, parse_poly_list(&r, "x^2").unwrap()).unwrap();
        assert_eq!(build_minimal_model(&i, 5, 10).unwrap_err(), Error::CharacteristicTooSmall { p: 5, bound: 5 });
        assert!(build_minimal_model(&i, 4, 10).is_ok());
    }

    #[test]
    fn stages_and_fibres() {
        let m = model(&["x", "y"], "x^2, y^2", 3, 6);
        assert_eq!(m.fibre(2).vars().len(), 0);
        assert_eq!(m.fibre(1).vars().len(), 2);
        assert_eq!(m.stage(2).vars().len(), 2);
    }
}
