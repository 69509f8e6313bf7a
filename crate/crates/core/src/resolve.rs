//! Minimal graded free resolutions, Betti tables and projective-dimension
//! probes.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{kernel_generators, syzygy_map, FreeModule, GradedMap, GradedRing, ModulePresentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionStatus {
    /// `F_{d+1} = 0` within the degree bound.
    TerminatedAt(usize),
    /// The length bound was reached with `F_L` nonzero.
    TruncatedAt(usize),
}

/// `F_0 <- F_1 <- ... <- F_k`, minimal, computed up to an internal degree
/// bound. `maps[i]` is `F_{i+1} -> F_i`.
#[derive(Debug, Clone)]
pub struct FreeResolution {
    pub modules: Vec<FreeModule>,
    pub maps: Vec<GradedMap>,
    pub status: ResolutionStatus,
    pub degree_bound: i32,
}

impl FreeResolution {
    pub fn length(&self) -> usize {
        self.modules.len().saturating_sub(1)
    }

    /// Bigraded Betti numbers `b_{i,j}` as a sorted map.
    pub fn betti(&self) -> BTreeMap<(usize, i32), usize> {
        let mut out = BTreeMap::new();
        for (i, f) in self.modules.iter().enumerate() {
            for &d in &f.degrees {
                *out.entry((i, d)).or_insert(0) += 1;
            }
        }
        out
    }

    pub fn betti_triples(&self) -> Vec<(usize, i32, usize)> {
        self.betti().into_iter().map(|((i, j), b)| (i, j, b)).collect()
    }

    pub fn total_betti(&self) -> Vec<usize> {
        self.modules.iter().map(|f| f.rank()).collect()
    }

    /// Consecutive maps compose to zero, exactly.
    pub fn check_complex(&self) -> Result<()> {
        for (i, w) in self.maps.windows(2).enumerate() {
            if !w[0].compose(&w[1])?.is_zero() {
                return Err(Error::InvariantViolation(format!("d{} d{} is not zero", i + 1, i + 2)));
            }
        }
        Ok(())
    }

    /// No map has a nonzero constant entry.
    pub fn check_minimal(&self) -> Result<()> {
        match self.maps.iter().position(|m| !m.is_minimal()) {
            Some(i) => Err(Error::InvariantViolation(format!("d{} has a unit entry", i + 1))),
            None => Ok(()),
        }
    }

    /// Degrees in which the truncated resolution is exact: every degree
    /// below the first possible generator of `F_{k+1}`.
    pub fn exact_range(&self) -> i32 {
        let lo = self.modules.first().and_then(|f| f.degrees.iter().min().copied()).unwrap_or(0);
        match self.status {
            ResolutionStatus::TerminatedAt(_) => self.degree_bound,
            ResolutionStatus::TruncatedAt(l) => self.degree_bound.min(lo + l as i32),
        }
    }

    /// Euler characteristic check: `Σ (-1)^i dim (F_i)_d = dim M_d`.
    pub fn check_euler(&self, module: &ModulePresentation) -> Result<()> {
        for d in 0..=self.exact_range() {
            let alt: i64 =
                self.modules.iter().enumerate().map(|(i, f)| if i % 2 == 0 { f.dim(d) as i64 } else { -(f.dim(d) as i64) }).sum();
            let h = module.hilbert_function(d) as i64;
            if alt != h {
                return Err(Error::InvariantViolation(format!("Euler characteristic {alt} != {h} in degree {d}")));
            }
        }
        Ok(())
    }

    pub fn check_all(&self, module: &ModulePresentation) -> Result<()> {
        self.check_complex()?;
        self.check_minimal()?;
        self.check_euler(module)
    }
}

/// Minimal resolution of `m` up to `length_bound` steps and internal degree
/// `degree_bound`.
pub fn minimal_free_resolution(m: &ModulePresentation, length_bound: usize, degree_bound: i32) -> FreeResolution {
    let p = m.minimize(degree_bound);
    let ring = p.ring().clone();
    let mut modules = vec![p.map.target.clone()];
    let mut maps: Vec<GradedMap> = Vec::new();
    if p.map.target.rank() == 0 {
        return FreeResolution { modules, maps, status: ResolutionStatus::TerminatedAt(0), degree_bound };
    }
    if length_bound == 0 {
        let status = if p.map.source.rank() == 0 { ResolutionStatus::TerminatedAt(0) } else { ResolutionStatus::TruncatedAt(0) };
        return FreeResolution { modules, maps, status, degree_bound };
    }
    let mut next = p.map;
    loop {
        if next.source.rank() == 0 {
            let status = ResolutionStatus::TerminatedAt(modules.len() - 1);
            return FreeResolution { modules, maps, status, degree_bound };
        }
        modules.push(next.source.clone());
        maps.push(next);
        if modules.len() - 1 == length_bound {
            let last = maps.last().unwrap();
            let k = kernel_generators(&last.source, &last.columns, &last.target, &[], degree_bound);
            let status =
                if k.is_empty() { ResolutionStatus::TerminatedAt(length_bound) } else { ResolutionStatus::TruncatedAt(length_bound) };
            return FreeResolution { modules, maps, status, degree_bound };
        }
        next = step(&ring, maps.last().unwrap(), degree_bound);
    }
}

fn step(ring: &Arc<GradedRing>, last: &GradedMap, degree_bound: i32) -> GradedMap {
    let k = kernel_generators(&last.source, &last.columns, &last.target, &[], degree_bound);
    let src = FreeModule::new(ring, k.iter().map(|g| g.1).collect());
    GradedMap::new(src, last.source.clone(), k.into_iter().map(|g| g.0).collect()).expect("kernel generators are homogeneous")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjDim {
    Finite(usize),
    NotTerminatedWithin(usize),
}

/// How a `Finite` verdict was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreenessProof {
    /// The ring is Artinian and the bound exceeds the top degree of the
    /// last free module, so the slice computation saw the whole kernel.
    SocleDegreeBound,
    /// An exact syzygy computation found no syzygies of the last map.
    SyzygyModuleZero,
    /// The module is zero or free.
    Trivial,
}

#[derive(Debug, Clone)]
pub struct ProjDimCertificate {
    pub verdict: ProjDim,
    pub proof: Option<FreenessProof>,
    pub resolution: FreeResolution,
}

/// Probes finiteness of projective dimension. `Finite(d)` is returned only
/// with a freeness proof of the `d`-th syzygy.
pub fn projdim_probe(m: &ModulePresentation, length_bound: usize, degree_bound: i32) -> ProjDimCertificate {
    let res = minimal_free_resolution(m, length_bound, degree_bound);
    let (verdict, proof) = match res.status {
        ResolutionStatus::TruncatedAt(l) => (ProjDim::NotTerminatedWithin(l), None),
        ResolutionStatus::TerminatedAt(d) => match certify(&res, d) {
            Some(p) => (ProjDim::Finite(d), Some(p)),
            None => (ProjDim::NotTerminatedWithin(length_bound), None),
        },
    };
    ProjDimCertificate { verdict, proof, resolution: res }
}

fn certify(res: &FreeResolution, d: usize) -> Option<FreenessProof> {
    if d == 0 {
        return Some(FreenessProof::Trivial);
    }
    let last = &res.maps[d - 1];
    let ring = last.ring();
    if let Some(top) = ring.socle_degree() {
        let maxdeg = last.source.degrees.iter().copied().max().unwrap_or(0);
        if res.degree_bound >= maxdeg + top as i32 {
            return Some(FreenessProof::SocleDegreeBound);
        }
    }
    if syzygy_map(last).source.rank() == 0 {
        return Some(FreenessProof::SyzygyModuleZero);
    }
    None
}

/// Bigraded Betti numbers of the residue field over `ring`, homological
/// degree `<= n`, internal degree `<= degree_bound`.
pub fn ext_betti(ring: &Arc<GradedRing>, n: usize, degree_bound: i32) -> FreeResolution {
    minimal_free_resolution(&ModulePresentation::residue_field(ring), n, degree_bound)
}
