//! The conormal module `I/I²` by two routes, `Ω_{S/K}`, the
//! Jacobi–Zariski sequence, the evolution criterion and a checker for the
//! hypotheses of the injective-map freeness criterion.

use std::sync::Arc;

use crate::dgmodel::{build_minimal_model, kahler_module, DgModel, KahlerBase};
use crate::error::{Error, Result};
use crate::exactalg::Polynomial;
use crate::groebner::{height, span_slice, FreeModule, GradedMap, GradedRing, Ideal, ModulePresentation, PolyVec, Subquotient};
use crate::koszul::{koszul_h1, minimal_ideal_generators, KoszulH1};
use crate::linalg::{kernel_with_one, rank, Echelon, SparseVec};
use crate::resolve::{projdim_probe, ProjDim};

/// `I/I²` presented over `S`, once directly and once from the model.
#[derive(Debug, Clone)]
pub struct ConormalModule {
    /// Minimal generators of `I`; route A's generators are their classes.
    pub generators: Vec<Polynomial>,
    pub route_a: ModulePresentation,
    pub route_b: ModulePresentation,
    /// Hilbert function for `d = 0..=degree_bound`, equal on both routes.
    pub hilbert: Vec<usize>,
    pub degree_bound: i32,
}

impl ConormalModule {
    pub fn minimal_generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Free, as far as the presentation shows: no relations up to the bound.
    pub fn has_no_relations(&self) -> bool {
        self.route_a.map.source.rank() == 0
    }
}

fn ideal_subquotient(ideal: &Ideal, gens: &[Polynomial]) -> Subquotient {
    let r = GradedRing::polynomial(ideal.ring());
    let deg = |p: &Polynomial| p.total_degree().unwrap() as i32;
    let mut rels = Vec::new();
    for i in 0..gens.len() {
        for j in i..gens.len() {
            rels.push((vec![&gens[i] * &gens[j]], deg(&gens[i]) + deg(&gens[j])));
        }
    }
    Subquotient { ambient: FreeModule::new(&r, vec![0]), gens: gens.iter().map(|g| (vec![g.clone()], deg(g))).collect(), rels }
}

/// Route A only: generators of `I` modulo products of generators.
pub fn conormal_direct(ideal: &Ideal, s: &Arc<GradedRing>, degree_bound: i32) -> (Vec<Polynomial>, Subquotient, ModulePresentation) {
    let gens = minimal_ideal_generators(ideal);
    let sq = ideal_subquotient(ideal, &gens);
    let p = sq.presentation(s, degree_bound);
    (gens, sq, p)
}

/// Both routes with an agreement check on Hilbert function and `μ`.
pub fn conormal(ideal: &Ideal, degree_bound: i32) -> Result<ConormalModule> {
    let model = build_minimal_model(ideal, 2, degree_bound.max(0) as u32)?;
    conormal_from_model(&model)
}

pub fn conormal_from_model(model: &DgModel) -> Result<ConormalModule> {
    let bound = model.intdeg_bound as i32;
    let (generators, sq, route_a) = conormal_direct(&model.ideal, &model.quotient, bound);
    let kahler = kahler_module(model, KahlerBase::Relative);
    let d2 = kahler.reduced.get(1).cloned().ok_or_else(|| Error::InvalidArgument("route B needs a model through X_2".into()))?;
    if !d2.is_minimal() {
        return Err(Error::RouteDisagreement("route B presentation is not minimal".into()));
    }
    let route_b = ModulePresentation::new(d2);
    if route_b.generators().rank() != generators.len() {
        return Err(Error::RouteDisagreement(format!(
            "μ differs: {} directly, {} from the model",
            generators.len(),
            route_b.generators().rank()
        )));
    }
    let mut hilbert = Vec::new();
    for d in 0..=bound {
        let (a, a2, b) = (sq.hilbert_function(d), route_a.hilbert_function(d), route_b.hilbert_function(d));
        if a != b || a != a2 {
            return Err(Error::RouteDisagreement(format!("Hilbert function in degree {d}: {a} / {a2} directly, {b} from the model")));
        }
        hilbert.push(a);
    }
    Ok(ConormalModule { generators, route_a, route_b, hilbert, degree_bound: bound })
}

/// `μ` and Hilbert functions of `coker((S⊗Ω)_3 -> (S⊗Ω)_2)` against `H_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Comparison {
    pub mu_model: usize,
    pub mu_koszul: usize,
    /// `(d, from the model, from Koszul homology)`.
    pub hilbert: Vec<(i32, usize, usize)>,
}

impl H1Comparison {
    pub fn agrees(&self) -> bool {
        self.mu_model == self.mu_koszul && self.hilbert.iter().all(|h| h.1 == h.2)
    }
}

pub fn h1_presentation_crosscheck(model: &DgModel, h1: &KoszulH1) -> Result<H1Comparison> {
    let kahler = kahler_module(model, KahlerBase::Relative);
    let d3 = kahler.reduced.get(2).cloned().ok_or_else(|| Error::InvalidArgument("needs a model through X_3".into()))?;
    let p = ModulePresentation::new(d3);
    let hilbert = (0..=model.intdeg_bound as i32).map(|d| (d, p.hilbert_function(d), h1.hilbert_function(d))).collect();
    Ok(H1Comparison { mu_model: p.generators().rank(), mu_koszul: h1.minimal_generator_count(), hilbert })
}

/// Columns `Σ (∂f/∂x_i) dx_i` of the Jacobian over `S`, `dx_i` in degree 1.
fn jacobian_map(gens: &[Polynomial], s: &Arc<GradedRing>) -> GradedMap {
    let n = s.nvars();
    let target = FreeModule::new(s, vec![1; n]);
    let source = FreeModule::new(s, gens.iter().map(|g| g.total_degree().unwrap() as i32).collect());
    let cols = gens
        .iter()
        .map(|g| {
            (0..n)
                .map(|i| {
                    let p = g.derivative(i);
                    if p.is_zero() && g.terms().iter().any(|(m, _)| m.exponents()[i] > 0) {
                        log::warn!("∂({g})/∂x_{i} vanishes identically in characteristic {}", g.field().characteristic());
                    }
                    p
                })
                .collect()
        })
        .collect();
    GradedMap::new(source, target, cols).expect("Jacobian columns are homogeneous")
}

/// `Ω_{S/K}` as the cokernel of the Jacobian.
pub fn kahler_s_over_k(ideal: &Ideal) -> Result<ModulePresentation> {
    let s = GradedRing::quotient(ideal)?;
    Ok(ModulePresentation::new(jacobian_map(&minimal_ideal_generators(ideal), &s)))
}

/// Slice data of `I` in the polynomial ring.
struct IdealSlices {
    s: Arc<GradedRing>,
    free: FreeModule,
    gens: Vec<(PolyVec, i32)>,
    squares: Vec<(PolyVec, i32)>,
    max_times: Vec<(PolyVec, i32)>,
}

impl IdealSlices {
    fn new(ideal: &Ideal) -> Result<Self> {
        let s = GradedRing::quotient(ideal)?;
        let gens_p = minimal_ideal_generators(ideal);
        let sq = ideal_subquotient(ideal, &gens_p);
        let ring = ideal.ring();
        let mut max_times = Vec::new();
        for (g, e) in &sq.gens {
            for i in 0..ring.nvars() {
                max_times.push((vec![&g[0] * &Polynomial::var(ring, i)], e + 1));
            }
        }
        Ok(IdealSlices { s, free: sq.ambient, gens: sq.gens, squares: sq.rels, max_times })
    }

    fn basis(&self, gens: &[(PolyVec, i32)], d: i32) -> Echelon {
        let mut e = Echelon::new();
        for v in span_slice(&self.free, gens, d) {
            e.insert(v);
        }
        e
    }

    /// `d f` in coordinates of `⊕_i S_{d-1} dx_i`.
    fn differential(&self, f: &Polynomial, d: i32) -> SparseVec {
        let n = self.s.nvars();
        let step = self.s.dim(d - 1) as u32;
        let mut out = Vec::new();
        for i in 0..n {
            if d >= 1 {
                for (k, c) in self.s.coords(&f.derivative(i), (d - 1) as u32) {
                    out.push((k + i as u32 * step, c));
                }
            }
        }
        out
    }

    /// A basis of `ker(d) ⊆ I_d`, as polynomials.
    fn kernel(&self, d: i32) -> Vec<Polynomial> {
        let basis: Vec<Polynomial> = self.basis(&self.gens, d).rows().iter().map(|r| self.free.from_coords(d, r).remove(0)).collect();
        let cols: Vec<SparseVec> = basis.iter().map(|f| self.differential(f, d)).collect();
        let one = self.s.poly_ring().field().one();
        kernel_with_one(&cols, &one)
            .into_iter()
            .map(|v| {
                let mut f = Polynomial::zero(self.s.poly_ring());
                for (k, c) in v {
                    f = &f + &basis[k as usize].scale(&c);
                }
                f
            })
            .collect()
    }
}

/// One degree of `0 -> D_1 -> I/I² -> S⊗Ω_R -> Ω_S -> 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JacobiZariskiSlice {
    pub degree: i32,
    pub d1: usize,
    pub conormal: usize,
    pub omega_r: usize,
    pub omega_s: usize,
}

impl JacobiZariskiSlice {
    pub fn alternating_sum(&self) -> i64 {
        self.d1 as i64 - self.conormal as i64 + self.omega_r as i64 - self.omega_s as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiZariskiReport {
    pub slices: Vec<JacobiZariskiSlice>,
}

impl JacobiZariskiReport {
    pub fn is_exact(&self) -> bool {
        self.slices.iter().all(|s| s.alternating_sum() == 0)
    }
}

/// `D_1(S/K, S) = ker(d: I/I² -> S⊗Ω_R)` slice by slice; `Ω_{S/K}` comes
/// from the Jacobian presentation, so exactness compares two independent
/// rank computations.
pub fn jacobi_zariski_check(ideal: &Ideal, degree_bound: i32) -> Result<JacobiZariskiReport> {
    let sl = IdealSlices::new(ideal)?;
    let omega = ModulePresentation::new(jacobian_map(&minimal_ideal_generators(ideal), &sl.s));
    let n = sl.s.nvars();
    let mut slices = Vec::new();
    for d in 0..=degree_bound {
        let i_d = sl.basis(&sl.gens, d).rank();
        let sq_d = sl.basis(&sl.squares, d).rank();
        let ker_d = sl.kernel(d).len();
        slices.push(JacobiZariskiSlice {
            degree: d,
            d1: ker_d - sq_d,
            conormal: i_d - sq_d,
            omega_r: n * sl.s.dim(d - 1),
            omega_s: omega.hilbert_function(d),
        });
    }
    Ok(JacobiZariskiReport { slices })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvolutionVerdict {
    TrivialEvolutionsOnly,
    /// A class in `ker(d)` outside `𝔪(I/I²)`.
    NontrivialEvolutionPossible {
        witness: Polynomial,
    },
}

/// Checks `ker(d) ⊆ 𝔪_S (I/I²)` in the degrees of the minimal generators.
pub fn lenstra_evolution_check(ideal: &Ideal) -> Result<EvolutionVerdict> {
    let p = ideal.ring().field().characteristic();
    if p != 0 {
        return Err(Error::UnsupportedCharacteristic(p));
    }
    let sl = IdealSlices::new(ideal)?;
    let mut degrees: Vec<i32> = sl.gens.iter().map(|g| g.1).collect();
    degrees.dedup();
    for e in degrees {
        let mi = sl.basis(&sl.max_times, e);
        for f in sl.kernel(e) {
            if !mi.contains(&sl.free.coords(std::slice::from_ref(&f), e)) {
                return Ok(EvolutionVerdict::NontrivialEvolutionPossible { witness: f });
            }
        }
    }
    Ok(EvolutionVerdict::TrivialEvolutionsOnly)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpVcReport {
    pub injective_mod_m: bool,
    pub target_projdim: ProjDim,
    /// `Some(true)` when both hypotheses hold and `I` was confirmed a
    /// complete intersection; `None` when no assertion was made.
    pub ci_asserted: Option<bool>,
}

/// Hypotheses of the criterion "`α: I/I² -> N` with `α⊗k` injective and
/// `pd N < ∞` forces a complete intersection". `alpha[j]` is the image of
/// the `j`-th generator of `conormal.route_a` in the generators of `n`.
pub fn sharpvc_hypothesis_check(
    ideal: &Ideal,
    conormal: &ConormalModule,
    alpha: Vec<PolyVec>,
    n: &ModulePresentation,
    length_bound: usize,
    degree_bound: i32,
) -> Result<SharpVcReport> {
    let f0 = conormal.route_a.generators().clone();
    if alpha.len() != f0.rank() || alpha.iter().any(|c| c.len() != n.generators().rank()) {
        return Err(Error::IllFormedMap("matrix shape does not match the presentations".into()));
    }
    let map = GradedMap::new(f0.clone(), n.generators().clone(), alpha).map_err(|e| Error::IllFormedMap(e.to_string()))?;
    for (r, e) in conormal.route_a.map.columns.iter().zip(&conormal.route_a.map.source.degrees) {
        let img = map.apply(r);
        let mut ech = Echelon::new();
        for v in n.map.image_slice(*e) {
            ech.insert(v);
        }
        if !ech.contains(&n.generators().coords(&img, *e)) {
            return Err(Error::IllFormedMap(format!("a relation in degree {e} does not map into the relations of N")));
        }
    }
    let consts: Vec<SparseVec> = map
        .columns
        .iter()
        .enumerate()
        .map(|(j, col)| {
            col.iter()
                .enumerate()
                .filter(|(i, _)| n.generators().degrees[*i] == f0.degrees[j])
                .map(|(i, p)| (i as u32, p.constant_term()))
                .filter(|(_, c)| !c.is_zero())
                .collect()
        })
        .collect();
    let injective_mod_m = rank(consts) == f0.rank();
    let target_projdim = projdim_probe(n, length_bound, degree_bound).verdict;
    let mut ci_asserted = None;
    if injective_mod_m && matches!(target_projdim, ProjDim::Finite(_)) {
        let h1_zero = koszul_h1(ideal, degree_bound)?.is_zero();
        let mu_eq_height = ideal.is_zero() || conormal.generators.len() == height(ideal)?;
        if !(h1_zero && mu_eq_height) {
            return Err(Error::InvariantViolation("hypotheses hold but the ideal is not a complete intersection".into()));
        }
        ci_asserted = Some(true);
    }
    Ok(SharpVcReport { injective_mod_m, target_projdim, ci_asserted })
}
