//! Slice-wise linear algebra for graded modules over `R` or `S = R/I`.
//!
//! Every homogeneous component of a free module is a finite-dimensional
//! vector space with a basis of standard monomials, so generation,
//! Hilbert functions and kernels reduce to echelon computations one
//! degree at a time.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::ideal::{buchberger, GroebnerBasis, Ideal};
use crate::error::{Error, Result};
use crate::exactalg::{monomials_of_degree, same_ring, Monomial, MonomialOrder, PolyRing, Polynomial};
use crate::linalg::{normalize, Echelon, SparseVec, TrackedEchelon};

/// Standard-monomial basis of one degree of a graded ring, with normal
/// forms of the remaining monomials.
#[derive(Debug)]
pub struct RingSlice {
    basis: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
    nonstandard: HashMap<Monomial, SparseVec>,
}

impl RingSlice {
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `R` or a quotient `S = R/I` with a reduced DegRevLex Gröbner basis.
pub struct GradedRing {
    poly: Arc<PolyRing>,
    ideal: Ideal,
    gb: GroebnerBasis,
    slices: Mutex<HashMap<u32, Arc<RingSlice>>>,
}

impl fmt::Debug for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedRing").field("poly", &self.poly).field("ideal", &self.ideal).finish()
    }
}

impl GradedRing {
    pub fn quotient(ideal: &Ideal) -> Result<Arc<Self>> {
        let gb = buchberger(ideal, MonomialOrder::DegRevLex);
        if gb.is_unit_ideal() {
            return Err(Error::UnitIdeal);
        }
        Ok(Arc::new(GradedRing { poly: ideal.ring().clone(), ideal: ideal.clone(), gb, slices: Mutex::default() }))
    }

    pub fn polynomial(ring: &Arc<PolyRing>) -> Arc<Self> {
        Self::quotient(&Ideal::zero(ring)).unwrap()
    }

    pub fn poly_ring(&self) -> &Arc<PolyRing> {
        &self.poly
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn is_quotient(&self) -> bool {
        !self.gb.elements().is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn slice(&self, d: u32) -> Arc<RingSlice> {
        if let Some(s) = self.slices.lock().unwrap().get(&d) {
            return s.clone();
        }
        let n = self.poly.nvars();
        let all = monomials_of_degree(n, d);
        let basis: Vec<Monomial> = all.iter().filter(|m| self.gb.is_standard(m)).cloned().collect();
        let index: HashMap<Monomial, u32> = basis.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        let one = self.poly.field().one();
        let mut nonstandard = HashMap::new();
        for m in all.iter().filter(|m| !index.contains_key(*m)) {
            let nf = self.gb.normal_form(&Polynomial::monomial(&self.poly, m.clone(), one.clone())).unwrap();
            let v = normalize(nf.terms().iter().map(|(t, c)| (index[t], c.clone())).collect());
            nonstandard.insert(m.clone(), v);
        }
        let s = Arc::new(RingSlice { basis, index, nonstandard });
        self.slices.lock().unwrap().insert(d, s.clone());
        s
    }

    pub fn dim(&self, d: i32) -> usize {
        if d < 0 {
            0
        } else {
            self.slice(d as u32).dim()
        }
    }

    /// Coordinates of a monomial in its degree slice.
    pub fn monomial_coords(&self, m: &Monomial) -> SparseVec {
        let s = self.slice(m.degree());
        match s.index.get(m) {
            Some(&i) => vec![(i, self.poly.field().one())],
            None => s.nonstandard[m].clone(),
        }
    }

    /// Coordinates of a homogeneous polynomial of degree `d`.
    pub fn coords(&self, p: &Polynomial, d: u32) -> SparseVec {
        let s = self.slice(d);
        let mut entries = Vec::new();
        for (m, c) in p.terms() {
            debug_assert_eq!(m.degree(), d);
            match s.index.get(m) {
                Some(&i) => entries.push((i, c.clone())),
                None => entries.extend(s.nonstandard[m].iter().map(|(k, x)| (*k, x * c))),
            }
        }
        normalize(entries)
    }

    pub fn from_coords(&self, d: u32, v: &[(u32, crate::exactalg::Scalar)]) -> Polynomial {
        let s = self.slice(d);
        Polynomial::from_terms(&self.poly, v.iter().map(|(k, c)| (s.basis[*k as usize].clone(), c.clone())).collect())
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        self.gb.normal_form(p).unwrap()
    }

    /// True when every variable has a pure power among the leading
    /// monomials, i.e. the quotient is finite-dimensional.
    pub fn is_artinian(&self) -> bool {
        let leads = self.gb.leading_monomials();
        (0..self.nvars()).all(|i| leads.iter().any(|m| m.support().all(|j| j == i) && !m.is_one()))
    }

    /// Top nonzero degree of an Artinian quotient.
    pub fn socle_degree(&self) -> Option<u32> {
        if !self.is_artinian() {
            return None;
        }
        let mut d = 0;
        while self.dim(d as i32 + 1) > 0 {
            d += 1;
        }
        Some(d)
    }

    /// `dim_k` of each degree `0..=bound`.
    pub fn hilbert_function(&self, bound: u32) -> Vec<usize> {
        (0..=bound).map(|d| self.dim(d as i32)).collect()
    }
}

/// A graded free module `⊕ ring(-degrees[j])`.
#[derive(Debug, Clone)]
pub struct FreeModule {
    pub ring: Arc<GradedRing>,
    pub degrees: Vec<i32>,
}

pub type PolyVec = Vec<Polynomial>;

impl FreeModule {
    pub fn new(ring: &Arc<GradedRing>, degrees: Vec<i32>) -> Self {
        FreeModule { ring: ring.clone(), degrees }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn zero_vector(&self) -> PolyVec {
        vec![Polynomial::zero(self.ring.poly_ring()); self.rank()]
    }

    pub fn unit_vector(&self, j: usize) -> PolyVec {
        let mut v = self.zero_vector();
        v[j] = Polynomial::one(self.ring.poly_ring());
        v
    }

    /// Offsets of each component in the degree-`d` slice, and its dimension.
    pub fn layout(&self, d: i32) -> (Vec<u32>, usize) {
        let mut offs = Vec::with_capacity(self.rank());
        let mut total = 0usize;
        for &e in &self.degrees {
            offs.push(total as u32);
            total += self.ring.dim(d - e);
        }
        (offs, total)
    }

    pub fn dim(&self, d: i32) -> usize {
        self.layout(d).1
    }

    /// The `(component, monomial)` basis of the degree-`d` slice.
    pub fn basis(&self, d: i32) -> Vec<(usize, Monomial)> {
        let mut out = Vec::new();
        for (j, &e) in self.degrees.iter().enumerate() {
            if d - e >= 0 {
                for m in self.ring.slice((d - e) as u32).basis() {
                    out.push((j, m.clone()));
                }
            }
        }
        out
    }

    /// Degree of a nonzero homogeneous vector.
    pub fn vector_degree(&self, v: &[Polynomial]) -> Result<Option<i32>> {
        let mut deg = None;
        for (j, p) in v.iter().enumerate() {
            if let Some(d) = p.homogeneous_degree()? {
                let d = d as i32 + self.degrees[j];
                match deg {
                    None => deg = Some(d),
                    Some(e) if e != d => return Err(Error::NotHomogeneous(format!("vector with components in degrees {e} and {d}"))),
                    _ => {}
                }
            }
        }
        Ok(deg)
    }

    /// Coordinates of `m * v` in degree `d`; `v` must be homogeneous of
    /// degree `d - deg(m)`.
    pub fn coords_shifted(&self, v: &[Polynomial], m: Option<&Monomial>, d: i32) -> SparseVec {
        let (offs, _) = self.layout(d);
        let mut entries = Vec::new();
        for (j, p) in v.iter().enumerate() {
            for (t, c) in p.terms() {
                let tm = match m {
                    Some(m) => t.mul(m),
                    None => t.clone(),
                };
                debug_assert_eq!(tm.degree() as i32 + self.degrees[j], d);
                entries.extend(self.ring.monomial_coords(&tm).into_iter().map(|(k, x)| (k + offs[j], &x * c)));
            }
        }
        normalize(entries)
    }

    pub fn coords(&self, v: &[Polynomial], d: i32) -> SparseVec {
        self.coords_shifted(v, None, d)
    }

    pub fn from_coords(&self, d: i32, v: &[(u32, crate::exactalg::Scalar)]) -> PolyVec {
        let (offs, _) = self.layout(d);
        let mut terms: Vec<Vec<_>> = vec![Vec::new(); self.rank()];
        for (k, c) in v {
            // empty components share an offset with the next one, so take the last
            let j = offs.partition_point(|&o| o <= *k) - 1;
            let s = self.ring.slice((d - self.degrees[j]) as u32);
            terms[j].push((s.basis()[(*k - offs[j]) as usize].clone(), c.clone()));
        }
        terms.into_iter().map(|t| Polynomial::from_terms(self.ring.poly_ring(), t)).collect()
    }

    /// Normal form of each component.
    pub fn reduce(&self, v: &[Polynomial]) -> PolyVec {
        v.iter().map(|p| self.ring.reduce(p)).collect()
    }
}

/// Spanning set of the degree-`d` part of the submodule generated by
/// `gens` (homogeneous, with the given degrees).
pub fn span_slice(free: &FreeModule, gens: &[(PolyVec, i32)], d: i32) -> Vec<SparseVec> {
    let mut out = Vec::new();
    for (g, e) in gens {
        if *e > d {
            continue;
        }
        let s = free.ring.slice((d - e) as u32);
        for m in s.basis() {
            let v = free.coords_shifted(g, Some(m), d);
            if !v.is_empty() {
                out.push(v);
            }
        }
    }
    out
}

fn degrees_of(gens: &[(PolyVec, i32)]) -> Vec<i32> {
    let mut ds: Vec<i32> = gens.iter().map(|g| g.1).collect();
    ds.sort();
    ds.dedup();
    ds
}

/// Greedy minimal generating subset of `cands` modulo `rels`: degree by
/// degree, a candidate is kept when it is not in the span of the relations
/// and multiples of the candidates already kept. Input order breaks ties.
pub fn minimal_subset(free: &FreeModule, cands: &[(PolyVec, i32)], rels: &[(PolyVec, i32)]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for d in degrees_of(cands) {
        let mut ech = Echelon::new();
        for v in span_slice(free, rels, d) {
            ech.insert(v);
        }
        let lower: Vec<(PolyVec, i32)> = chosen.iter().map(|&i| cands[i].clone()).collect();
        for v in span_slice(free, &lower, d) {
            ech.insert(v);
        }
        for (i, (g, e)) in cands.iter().enumerate() {
            if *e == d && ech.insert(free.coords(g, d)) {
                chosen.push(i);
            }
        }
    }
    chosen
}

/// Minimal generators, with degrees, of the kernel of
/// `source -> target/rels` sending the `j`-th basis vector to `images[j]`,
/// found in all degrees `<= max_degree`.
pub fn kernel_generators(
    source: &FreeModule,
    images: &[PolyVec],
    target: &FreeModule,
    rels: &[(PolyVec, i32)],
    max_degree: i32,
) -> Vec<(PolyVec, i32)> {
    let mut gens: Vec<(PolyVec, i32)> = Vec::new();
    let Some(&lo) = source.degrees.iter().min() else {
        return gens;
    };
    let one = source.ring.poly_ring().field().one();
    for d in lo..=max_degree {
        let basis = source.basis(d);
        if basis.is_empty() {
            continue;
        }
        let mut tracked = TrackedEchelon::new();
        for v in span_slice(target, rels, d) {
            tracked.insert(v, Vec::new());
        }
        let mut kernel = Vec::new();
        for (k, (j, m)) in basis.iter().enumerate() {
            let img = target.coords_shifted(&images[*j], Some(m), d);
            if let Some(c) = tracked.insert(img, vec![(k as u32, one.clone())]) {
                kernel.push(c);
            }
        }
        if kernel.is_empty() {
            continue;
        }
        let mut ech = Echelon::new();
        for v in span_slice(source, &gens, d) {
            ech.insert(v);
        }
        for v in kernel {
            if ech.insert(v.clone()) {
                gens.push((source.from_coords(d, &v), d));
            }
        }
    }
    gens
}

/// A homogeneous map of graded free modules over the same ring; column `j`
/// is the image of the `j`-th source basis vector.
#[derive(Debug, Clone)]
pub struct GradedMap {
    pub source: FreeModule,
    pub target: FreeModule,
    pub columns: Vec<PolyVec>,
}

impl GradedMap {
    pub fn new(source: FreeModule, target: FreeModule, columns: Vec<PolyVec>) -> Result<Self> {
        if !Arc::ptr_eq(&source.ring, &target.ring) && !same_ring(source.ring.poly_ring(), target.ring.poly_ring()) {
            return Err(Error::AmbientMismatch);
        }
        if columns.len() != source.rank() {
            return Err(Error::IllFormedMap(format!("{} columns for a source of rank {}", columns.len(), source.rank())));
        }
        let mut cols = Vec::with_capacity(columns.len());
        for (j, col) in columns.into_iter().enumerate() {
            if col.len() != target.rank() {
                return Err(Error::IllFormedMap(format!("column {j} has length {} not {}", col.len(), target.rank())));
            }
            let col = target.reduce(&col);
            for (i, p) in col.iter().enumerate() {
                if !same_ring(p.ring(), target.ring.poly_ring()) {
                    return Err(Error::AmbientMismatch);
                }
                if let Some(e) = p.homogeneous_degree()? {
                    if e as i32 != source.degrees[j] - target.degrees[i] {
                        return Err(Error::IllFormedMap(format!(
                            "entry ({i}, {j}) has degree {e}, expected {}",
                            source.degrees[j] - target.degrees[i]
                        )));
                    }
                }
            }
            cols.push(col);
        }
        Ok(GradedMap { source, target, columns: cols })
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.target.ring
    }

    /// No entry is a nonzero constant.
    pub fn is_minimal(&self) -> bool {
        self.columns.iter().flatten().all(|p| p.total_degree().is_none_or(|d| d > 0))
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().flatten().all(|p| p.is_zero())
    }

    pub fn apply(&self, v: &[Polynomial]) -> PolyVec {
        let mut out = self.target.zero_vector();
        for (c, col) in v.iter().zip(&self.columns) {
            if c.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(col) {
                *o = &*o + &(c * e);
            }
        }
        self.target.reduce(&out)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GradedMap) -> Result<GradedMap> {
        if first.target.degrees != self.source.degrees {
            return Err(Error::IllFormedMap("composition of incompatible maps".into()));
        }
        let cols = first.columns.iter().map(|c| self.apply(c)).collect();
        GradedMap::new(first.source.clone(), self.target.clone(), cols)
    }

    pub fn rank_in_degree(&self, d: i32) -> usize {
        crate::linalg::rank(self.image_slice(d))
    }

    pub fn image_slice(&self, d: i32) -> Vec<SparseVec> {
        let gens: Vec<(PolyVec, i32)> = self.columns.iter().cloned().zip(self.source.degrees.iter().copied()).collect();
        span_slice(&self.target, &gens, d)
    }
}

/// A graded module given as the cokernel of a map of free modules.
#[derive(Debug, Clone)]
pub struct ModulePresentation {
    pub map: GradedMap,
}

impl ModulePresentation {
    pub fn new(map: GradedMap) -> Self {
        ModulePresentation { map }
    }

    /// The free module `F` itself (no relations).
    pub fn free(module: FreeModule) -> Self {
        let src = FreeModule::new(&module.ring, Vec::new());
        ModulePresentation { map: GradedMap::new(src, module, Vec::new()).unwrap() }
    }

    /// The residue field `k = S/𝔪`.
    pub fn residue_field(ring: &Arc<GradedRing>) -> Self {
        let n = ring.nvars();
        let target = FreeModule::new(ring, vec![0]);
        let source = FreeModule::new(ring, vec![1; n]);
        let cols = (0..n).map(|i| vec![Polynomial::var(ring.poly_ring(), i)]).collect();
        ModulePresentation { map: GradedMap::new(source, target, cols).unwrap() }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        self.map.ring()
    }

    pub fn generators(&self) -> &FreeModule {
        &self.map.target
    }

    pub fn hilbert_function(&self, d: i32) -> usize {
        self.map.target.dim(d) - self.map.rank_in_degree(d)
    }

    pub fn as_subquotient(&self) -> Subquotient {
        let t = &self.map.target;
        Subquotient {
            ambient: t.clone(),
            gens: (0..t.rank()).map(|j| (t.unit_vector(j), t.degrees[j])).collect(),
            rels: self.map.columns.iter().cloned().zip(self.map.source.degrees.iter().copied()).collect(),
        }
    }

    /// Minimal presentation, with relations searched up to `bound`.
    pub fn minimize(&self, bound: i32) -> ModulePresentation {
        self.as_subquotient().presentation(self.ring(), bound)
    }
}

/// A subquotient `⟨gens⟩ + ⟨rels⟩ / ⟨rels⟩` of a free module.
#[derive(Debug, Clone)]
pub struct Subquotient {
    pub ambient: FreeModule,
    pub gens: Vec<(PolyVec, i32)>,
    pub rels: Vec<(PolyVec, i32)>,
}

impl Subquotient {
    pub fn hilbert_function(&self, d: i32) -> usize {
        let mut ech = Echelon::new();
        for v in span_slice(&self.ambient, &self.rels, d) {
            ech.insert(v);
        }
        let r = ech.rank();
        for v in span_slice(&self.ambient, &self.gens, d) {
            ech.insert(v);
        }
        ech.rank() - r
    }

    /// Indices of a minimal generating subset of `gens`.
    pub fn minimal_generators(&self) -> Vec<usize> {
        minimal_subset(&self.ambient, &self.gens, &self.rels)
    }

    pub fn minimal_generator_degrees(&self) -> Vec<i32> {
        self.minimal_generators().into_iter().map(|i| self.gens[i].1).collect()
    }

    /// Minimal presentation over `over` (the ring acting on the module),
    /// with relations searched up to degree `bound`.
    pub fn presentation(&self, over: &Arc<GradedRing>, bound: i32) -> ModulePresentation {
        let chosen = self.minimal_generators();
        let f0 = FreeModule::new(over, chosen.iter().map(|&i| self.gens[i].1).collect());
        let images: Vec<PolyVec> = chosen.iter().map(|&i| self.gens[i].0.clone()).collect();
        let rels = kernel_generators(&f0, &images, &self.ambient, &self.rels, bound);
        let f1 = FreeModule::new(over, rels.iter().map(|r| r.1).collect());
        let cols = rels.into_iter().map(|r| r.0).collect();
        ModulePresentation::new(GradedMap::new(f1, f0, cols).expect("kernel generators are homogeneous"))
    }
}

/// Hilbert function of `R/I` by counting standard monomials.
pub fn hilbert_by_standard_monomials(ring: &GradedRing, bound: u32) -> Vec<usize> {
    ring.hilbert_function(bound)
}

/// Hilbert function of `R/I` as `dim R_d - rank I_d`, with `I_d` spanned
/// by monomial multiples of the generators in `R`.
pub fn hilbert_by_slice_rank(ideal: &Ideal, bound: u32) -> Vec<usize> {
    let r = GradedRing::polynomial(ideal.ring());
    let free = FreeModule::new(&r, vec![0]);
    let gens: Vec<(PolyVec, i32)> = ideal.generators().iter().map(|g| (vec![g.clone()], g.total_degree().unwrap() as i32)).collect();
    (0..=bound as i32).map(|d| free.dim(d) - crate::linalg::rank(span_slice(&free, &gens, d))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly_list, FieldSpec};

    fn quotient(vars: &[&str], gens: &str) -> Arc<GradedRing> {
        let r = PolyRing::new(vars, FieldSpec::Rationals).unwrap();
        GradedRing::quotient(&Ideal::new(&r, parse_poly_list(&r, gens).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn slices_of_quotient() {
        let s = quotient(&["x", "y"], "x^2, x*y");
        assert_eq!(s.hilbert_function(4), vec![1, 2, 1, 1, 1]);
        assert!(!s.is_artinian());
        let t = quotient(&["x", "y"], "x^2, y^2");
        assert_eq!(t.socle_degree(), Some(2));
    }

    #[test]
    fn from_coords_round_trip_with_empty_components() {
        let s = quotient(&["x", "y"], "x^2, y^2");
        let f = FreeModule::new(&s, vec![0, 5, 1]);
        let d = 2;
        let b = f.basis(d);
        for k in 0..b.len() {
            let e = f.from_coords(d, &[(k as u32, FieldSpec::Rationals.one())]);
            assert_eq!(f.coords(&e, d), vec![(k as u32, FieldSpec::Rationals.one())]);
        }
    }

    #[test]
    fn kernel_of_multiplication_by_x() {
        // x : S(-1) -> S over k[x,y]/(x^2) has kernel generated by x
        let s = quotient(&["x", "y"], "x^2");
        let src = FreeModule::new(&s, vec![1]);
        let tgt = FreeModule::new(&s, vec![0]);
        let x = Polynomial::var(s.poly_ring(), 0);
        let k = kernel_generators(&src, &[vec![x.clone()]], &tgt, &[], 6);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], (vec![x], 2));
    }

    #[test]
    fn residue_field_presentation_is_minimal() {
        let s = quotient(&["x", "y"], "x^2, x*y, y^2");
        let k = ModulePresentation::residue_field(&s);
        assert_eq!(k.hilbert_function(0), 1);
        assert_eq!(k.hilbert_function(1), 0);
        let m = k.minimize(4);
        assert_eq!(m.map.source.degrees, vec![1, 1]);
    }

    #[test]
    fn hilbert_two_ways() {
        let r = PolyRing::new(&["x", "y", "z"], FieldSpec::Rationals).unwrap();
        let i = Ideal::new(&r, parse_poly_list(&r, "x^2 - y*z, x*y").unwrap()).unwrap();
        let s = GradedRing::quotient(&i).unwrap();
        assert_eq!(hilbert_by_standard_monomials(&s, 6), hilbert_by_slice_rank(&i, 6));
    }
}
