//! Koszul complexes on minimal generators and the first Koszul homology
//! as a module over `S = R/I`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::Polynomial;
use crate::groebner::{
    kernel_generators, minimal_subset, FreeModule, GradedMap, GradedRing, Ideal, ModulePresentation, PolyVec, Subquotient,
};
use crate::linalg::{normalize, Echelon};

/// Minimal generators of `I`, in input order.
pub fn minimal_ideal_generators(ideal: &Ideal) -> Vec<Polynomial> {
    let r = GradedRing::polynomial(ideal.ring());
    let free = FreeModule::new(&r, vec![0]);
    let cands: Vec<(PolyVec, i32)> = ideal.generators().iter().map(|g| (vec![g.clone()], g.total_degree().unwrap() as i32)).collect();
    minimal_subset(&free, &cands, &[]).into_iter().map(|i| ideal.generators()[i].clone()).collect()
}

fn subsets(c: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, c: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..c {
            cur.push(i);
            rec(i + 1, c, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, c, p, &mut Vec::new(), &mut out);
    out
}

/// `K(f_1..f_c; R)`: basis `e_J` of `K_p` indexed by increasing subsets.
#[derive(Debug, Clone)]
pub struct KoszulComplex {
    pub generators: Vec<Polynomial>,
    pub bases: Vec<Vec<Vec<usize>>>,
    pub modules: Vec<FreeModule>,
    /// `maps[p-1]`: `K_p -> K_{p-1}`.
    pub maps: Vec<GradedMap>,
}

impl KoszulComplex {
    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.rank()).collect()
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for (p, w) in self.maps.windows(2).enumerate() {
            if !w[0].compose(&w[1])?.is_zero() {
                return Err(Error::InvariantViolation(format!("Koszul d{} d{} != 0", p + 1, p + 2)));
            }
        }
        Ok(())
    }
}

/// The Koszul complex on a minimal generating set of `ideal`. The sign of
/// removing the `j`-th factor (1-based) is `(-1)^(j+1)`.
pub fn koszul_complex(ideal: &Ideal) -> KoszulComplex {
    let f = minimal_ideal_generators(ideal);
    let ring = GradedRing::polynomial(ideal.ring());
    let c = f.len();
    let deg: Vec<i32> = f.iter().map(|g| g.total_degree().unwrap() as i32).collect();
    let bases: Vec<Vec<Vec<usize>>> = (0..=c).map(|p| subsets(c, p)).collect();
    let modules: Vec<FreeModule> =
        bases.iter().map(|b| FreeModule::new(&ring, b.iter().map(|s| s.iter().map(|&i| deg[i]).sum()).collect())).collect();
    let mut maps = Vec::new();
    for p in 1..=c {
        let target_index = |s: &[usize]| bases[p - 1].iter().position(|t| t == s).unwrap();
        let cols = bases[p]
            .iter()
            .map(|s| {
                let mut col = modules[p - 1].zero_vector();
                for k in 0..s.len() {
                    let mut rest = s.clone();
                    rest.remove(k);
                    let term = if k % 2 == 0 { f[s[k]].clone() } else { -&f[s[k]] };
                    col[target_index(&rest)] = term;
                }
                col
            })
            .collect();
        maps.push(GradedMap::new(modules[p].clone(), modules[p - 1].clone(), cols).expect("Koszul maps are homogeneous"));
    }
    KoszulComplex { generators: f, bases, modules, maps }
}

/// `H_1(I; R)` as an `S`-module.
#[derive(Debug, Clone)]
pub struct KoszulH1 {
    pub ring: Arc<GradedRing>,
    /// Cycle representatives in `R^c` of the minimal generators.
    pub cycles: Vec<(PolyVec, i32)>,
    pub presentation: ModulePresentation,
    pub subquotient: Subquotient,
}

impl KoszulH1 {
    pub fn is_zero(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn minimal_generator_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn hilbert_function(&self, d: i32) -> usize {
        self.subquotient.hilbert_function(d)
    }
}

/// Syzygies of the minimal generators modulo Koszul boundaries, with all
/// computations done up to internal degree `degree_bound`.
pub fn koszul_h1(ideal: &Ideal, degree_bound: i32) -> Result<KoszulH1> {
    let s = GradedRing::quotient(ideal)?;
    Ok(h1_from_complex(&koszul_complex(ideal), &s, degree_bound))
}

pub(crate) fn h1_from_complex(k: &KoszulComplex, s: &Arc<GradedRing>, degree_bound: i32) -> KoszulH1 {
    let k1 = k.modules.get(1).cloned().unwrap_or_else(|| FreeModule::new(&k.modules[0].ring, Vec::new()));
    let cycles: Vec<(PolyVec, i32)> = match k.maps.first() {
        Some(d1) => kernel_generators(&d1.source, &d1.columns, &d1.target, &[], degree_bound),
        None => Vec::new(),
    };
    let boundaries: Vec<(PolyVec, i32)> = match k.maps.get(1) {
        Some(d2) => d2.columns.iter().cloned().zip(d2.source.degrees.iter().copied()).collect(),
        None => Vec::new(),
    };
    let sq = Subquotient { ambient: k1, gens: cycles, rels: boundaries };
    let presentation = sq.presentation(s, degree_bound);
    let chosen = sq.minimal_generators();
    let cycles = chosen.iter().map(|&i| sq.gens[i].clone()).collect();
    KoszulH1 { ring: s.clone(), cycles, presentation, subquotient: sq }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SummandVerdict {
    /// The indexed generator splits off as a free summand.
    FreeSummand(usize),
    NoneFoundWithinBound(i32),
}

/// Looks for a generator `g_i` and a homogeneous map `M -> S` sending it
/// to 1 and vanishing on the known relations (up to the presentation's
/// degree bound).
pub fn free_summand_probe(m: &ModulePresentation, degree_bound: i32) -> SummandVerdict {
    let f0 = &m.map.target;
    let ring = m.ring();
    for i in 0..f0.rank() {
        let e = f0.degrees[i];
        // unknowns: coordinates of a_j in S_{e_j - e}, j != i
        let mut unknowns: Vec<(usize, crate::exactalg::Monomial)> = Vec::new();
        for (j, &ej) in f0.degrees.iter().enumerate() {
            if j != i && ej - e >= 0 {
                for mono in ring.slice((ej - e) as u32).basis() {
                    unknowns.push((j, mono.clone()));
                }
            }
        }
        // each relation column contributes the coordinates of Σ a_j φ_j
        let cols = &m.map.columns;
        let col_deg = &m.map.source.degrees;
        let mut offsets = Vec::with_capacity(cols.len());
        let mut total = 0u32;
        for &cd in col_deg {
            offsets.push(total);
            total += ring.dim(cd - e) as u32;
        }
        let image = |j: usize, mono: Option<&crate::exactalg::Monomial>| -> Vec<(u32, crate::exactalg::Scalar)> {
            let mut entries = Vec::new();
            for (k, col) in cols.iter().enumerate() {
                if col_deg[k] - e < 0 || col[j].is_zero() {
                    continue;
                }
                for (t, c) in col[j].terms() {
                    let tm = match mono {
                        Some(mm) => t.mul(mm),
                        None => t.clone(),
                    };
                    for (idx, x) in ring.monomial_coords(&tm) {
                        entries.push((idx + offsets[k], &x * c));
                    }
                }
            }
            normalize(entries)
        };
        let mut ech = Echelon::new();
        for (j, mono) in &unknowns {
            ech.insert(image(*j, Some(mono)));
        }
        let b = image(i, None);
        if ech.contains(&b) {
            return SummandVerdict::FreeSummand(i);
        }
    }
    SummandVerdict::NoneFoundWithinBound(degree_bound)
}

pub fn h1_free_summand_probe(h1: &KoszulH1, degree_bound: i32) -> SummandVerdict {
    free_summand_probe(&h1.presentation, degree_bound)
}
