//! The homotopy Lie algebra `π*(φ)` read off a minimal model: bracket
//! table, `ad` matrices, the derivations `θ_z`, radical probes and the
//! comparison with `Ext_S(k, k)`.

use std::collections::BTreeMap;

use crate::dgmodel::{DgDerivation, DgElement, DgModel};
use crate::error::{Error, Result};
use crate::exactalg::{FieldSpec, Polynomial, Scalar};
use crate::resolve::ext_betti;

/// A vector in `π*`: coefficients on duals of model variables.
pub type PiVector = BTreeMap<usize, Scalar>;

fn add_to(v: &mut PiVector, k: usize, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let s = match v.remove(&k) {
        Some(x) => &x + &c,
        None => c,
    };
    if !s.is_zero() {
        v.insert(k, s);
    }
}

/// `π^i` for `2 <= i <= N`, with `π^i` dual to `X_{i-1}`, and the bracket
/// on basis pairs of total degree at most `N`.
#[derive(Debug, Clone)]
pub struct HomotopyLieTruncation {
    pub bound: u32,
    pub field: FieldSpec,
    /// `degree[x]`: the π-degree of `x*`, i.e. `hdeg(x) + 1`.
    pub degree: Vec<u32>,
    pub names: Vec<String>,
    /// `[x*, y*]` for every basis pair within the bound (zeros omitted).
    pub bracket: BTreeMap<(usize, usize), PiVector>,
}

impl HomotopyLieTruncation {
    pub fn dim(&self, i: u32) -> usize {
        self.degree.iter().filter(|&&d| d == i).count()
    }

    pub fn basis(&self, i: u32) -> Vec<usize> {
        (0..self.degree.len()).filter(|&x| self.degree[x] == i).collect()
    }

    pub fn bracket_basis(&self, u: usize, v: usize) -> PiVector {
        self.bracket.get(&(u, v)).cloned().unwrap_or_default()
    }

    /// Bilinear extension; inputs must be homogeneous.
    pub fn bracket_vectors(&self, a: &PiVector, b: &PiVector) -> PiVector {
        let mut out = PiVector::new();
        for (u, cu) in a {
            for (v, cv) in b {
                for (w, c) in self.bracket_basis(*u, *v) {
                    add_to(&mut out, w, &(cu * cv) * &c);
                }
            }
        }
        out
    }

    /// `[v, u] = -(-1)^{ij} [u, v]` on every basis pair.
    pub fn check_antisymmetry(&self) -> Result<()> {
        let n = self.degree.len();
        for u in 0..n {
            for v in 0..n {
                let (i, j) = (self.degree[u], self.degree[v]);
                if i + j > self.bound {
                    continue;
                }
                let uv = self.bracket_basis(u, v);
                let vu = self.bracket_basis(v, u);
                let sign = if (i * j) % 2 == 0 { -self.field.one() } else { self.field.one() };
                let expect: PiVector = uv.iter().map(|(k, c)| (*k, c * &sign)).collect();
                if vu != expect {
                    return Err(Error::InvariantViolation(format!("antisymmetry fails for [{}, {}]", self.names[u], self.names[v])));
                }
            }
        }
        Ok(())
    }

    /// `(-1)^{ik}[u,[v,w]] + (-1)^{ji}[v,[w,u]] + (-1)^{kj}[w,[u,v]] = 0`.
    pub fn check_jacobi(&self) -> Result<()> {
        let n = self.degree.len();
        let unit = |k: usize| -> PiVector { [(k, self.field.one())].into_iter().collect() };
        let sgn = |e: u32| if e.is_multiple_of(2) { self.field.one() } else { -self.field.one() };
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    let (i, j, k) = (self.degree[u], self.degree[v], self.degree[w]);
                    if i + j + k > self.bound {
                        continue;
                    }
                    let t1 = self.bracket_vectors(&unit(u), &self.bracket_basis(v, w));
                    let t2 = self.bracket_vectors(&unit(v), &self.bracket_basis(w, u));
                    let t3 = self.bracket_vectors(&unit(w), &self.bracket_basis(u, v));
                    let mut sum = PiVector::new();
                    for (t, s) in [(t1, sgn(i * k)), (t2, sgn(j * i)), (t3, sgn(k * j))] {
                        for (x, c) in t {
                            add_to(&mut sum, x, &c * &s);
                        }
                    }
                    if !sum.is_empty() {
                        return Err(Error::InvariantViolation(format!(
                            "Jacobi fails on ({}, {}, {})",
                            self.names[u], self.names[v], self.names[w]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.is_empty()
    }

    /// `[u*, v*] = combination`, canonical order, one line per nonzero pair.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for ((u, v), val) in &self.bracket {
            let terms: Vec<(usize, Scalar)> = val.iter().map(|(k, c)| (*k, c.clone())).collect();
            let mut rhs = String::new();
            crate::exactalg::write_combination(&mut rhs, &terms, |out, k| {
                out.push_str(&self.names[*k]);
                out.push('*');
                Ok(())
            })
            .unwrap();
            s.push_str(&format!("[{}*, {}*] = {}\n", self.names[*u], self.names[*v], rhs));
        }
        s
    }

    /// `ad(z)` as blocks `π^i -> π^{i+2}` for `2 <= i <= N - 2`; `blocks[i]`
    /// maps each basis element of `π^i` to its image.
    pub fn ad(&self, z: &PiVector) -> AdMatrix {
        let mut blocks = BTreeMap::new();
        for i in 2..=self.bound.saturating_sub(2) {
            let cols: Vec<(usize, PiVector)> =
                self.basis(i).into_iter().map(|w| (w, self.bracket_vectors(z, &[(w, self.field.one())].into_iter().collect()))).collect();
            blocks.insert(i, cols);
        }
        AdMatrix { blocks }
    }
}

/// Blocks of a degree-2 endomorphism of `π*`, keyed by source degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdMatrix {
    pub blocks: BTreeMap<u32, Vec<(usize, PiVector)>>,
}

impl AdMatrix {
    pub fn neg(&self) -> AdMatrix {
        AdMatrix {
            blocks: self
                .blocks
                .iter()
                .map(|(i, cols)| (*i, cols.iter().map(|(w, v)| (*w, v.iter().map(|(k, c)| (*k, -c)).collect())).collect()))
                .collect(),
        }
    }

    pub fn is_zero_on(&self, i: u32) -> bool {
        self.blocks.get(&i).is_none_or(|cols| cols.iter().all(|(_, v)| v.is_empty()))
    }
}

/// Pairs the quadratic part of `∂` on the fibre `A^(1)` with the basis.
pub fn compute_pi(model: &DgModel, bound: u32) -> Result<HomotopyLieTruncation> {
    if bound > model.hdeg_bound + 1 {
        return Err(Error::InvalidArgument(format!("π is available up to degree {} for this model", model.hdeg_bound + 1)));
    }
    let fibre = model.fibre(1);
    let field = model.algebra.ring().field();
    let vars = fibre.vars();
    let degree: Vec<u32> = vars.iter().map(|v| v.hdeg + 1).collect();
    let names: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
    let sgn = |e: u32| if e.is_multiple_of(2) { field.one() } else { -field.one() };
    let mut bracket: BTreeMap<(usize, usize), PiVector> = BTreeMap::new();
    let mut put = |u: usize, v: usize, x: usize, c: Scalar| {
        let e = bracket.entry((u, v)).or_default();
        add_to(e, x, c);
        if e.is_empty() {
            bracket.remove(&(u, v));
        }
    };
    for (x, var) in vars.iter().enumerate() {
        if var.hdeg + 1 > bound {
            continue;
        }
        for ((_, m), c) in fibre.diff(x).terms() {
            if m.length() != 2 {
                continue;
            }
            let f = m.factors();
            if f.len() == 1 {
                // x_p^2, p even: the pairing with u = v = p* is 2
                let p = f[0].0 as usize;
                put(p, p, x, &(c * &sgn(degree[p])) * &field.from_i64(2));
            } else {
                let (p, q) = (f[0].0 as usize, f[1].0 as usize);
                let (dp, dq) = (degree[p], degree[q]);
                // ⟨q* ⊗ p*, x_p x_q⟩ = 1
                put(q, p, x, c * &sgn(dp));
                // ⟨p* ⊗ q*, x_p x_q⟩ = (-1)^{(i+1)(j+1)}
                put(p, q, x, c * &sgn(dq + (dp + 1) * (dq + 1)));
            }
        }
    }
    Ok(HomotopyLieTruncation { bound, field, degree, names, bracket })
}

/// `θ_z = [∂, ∂/∂z]` together with the lift used for `∂/∂z`.
#[derive(Debug, Clone)]
pub struct ThetaDerivation {
    pub z: PiVector,
    /// `z̃` on `X_1`, as ring elements.
    pub lift: Vec<Polynomial>,
    pub derivation: DgDerivation,
}

/// The default lift sends each `X_1` variable to its coefficient in `z`.
pub fn default_lift(model: &DgModel, z: &PiVector) -> Vec<Polynomial> {
    let ring = model.algebra.ring();
    model
        .variables_of_degree(1)
        .map(|y| match z.get(&y) {
            Some(c) => Polynomial::constant(ring, c.clone()),
            None => Polynomial::zero(ring),
        })
        .collect()
}

pub fn theta(model: &DgModel, z: &PiVector, lift: Option<Vec<Polynomial>>) -> Result<ThetaDerivation> {
    let alg = &model.algebra;
    let x1 = model.variables_of_degree(1);
    if z.keys().any(|k| !x1.contains(k)) {
        return Err(Error::InvalidArgument("z must lie in π^2".into()));
    }
    let lift = lift.unwrap_or_else(|| default_lift(model, z));
    if lift.len() != x1.len() {
        return Err(Error::InvalidArgument("the lift needs one value per X_1 variable".into()));
    }
    let n = alg.ring().nvars();
    let mut dz_values = vec![DgElement::zero(); alg.vars().len()];
    for (k, y) in x1.clone().enumerate() {
        dz_values[y] = alg.ring_element(&lift[k]);
    }
    let dz = DgDerivation::r_linear(-1, dz_values, n);
    let d = alg.differential_derivation();
    let values = (0..alg.vars().len())
        .map(|v| {
            let x = alg.var_element(v);
            alg.apply_derivation(&d, &alg.apply_derivation(&dz, &x)).add(&alg.apply_derivation(&dz, &alg.diff(v).clone()))
        })
        .collect();
    Ok(ThetaDerivation { z: z.clone(), lift, derivation: DgDerivation::r_linear(-2, values, n) })
}

impl ThetaDerivation {
    pub fn is_chain(&self, model: &DgModel) -> bool {
        model.algebra.is_chain_derivation(&self.derivation)
    }

    /// No value has a nonzero constant term.
    pub fn lands_in_maximal_ideal(&self) -> bool {
        self.derivation.values.iter().all(|v| v.terms().keys().all(|(r, x)| !(r.is_one() && x.is_one())))
    }
}

/// The map `π* -> π*` induced by `θ^(1)` on indecomposables, compared with
/// `-ad(z)`; returns the induced matrix.
pub fn induced_ad(model: &DgModel, th: &ThetaDerivation, pi: &HomotopyLieTruncation) -> Result<AdMatrix> {
    let mut induced: BTreeMap<u32, Vec<(usize, PiVector)>> = BTreeMap::new();
    // c[x][w]: coefficient of w in the linear part of θ^(1)(x)
    let mut linear: BTreeMap<usize, PiVector> = BTreeMap::new();
    for (x, val) in th.derivation.values.iter().enumerate() {
        for ((r, m), c) in val.terms() {
            if r.is_one() && m.length() == 1 && m.factors()[0].1 == 1 {
                let w = m.factors()[0].0 as usize;
                add_to(linear.entry(w).or_default(), x, c.clone());
            }
        }
    }
    let _ = model;
    for i in 2..=pi.bound.saturating_sub(2) {
        let cols = pi
            .basis(i)
            .into_iter()
            .map(|w| {
                let img: PiVector = linear
                    .get(&w)
                    .map(|v| v.iter().filter(|(x, _)| pi.degree[**x] == i + 2).map(|(x, c)| (*x, c.clone())).collect())
                    .unwrap_or_default();
                (w, img)
            })
            .collect();
        induced.insert(i, cols);
    }
    let induced = AdMatrix { blocks: induced };
    let expected = pi.ad(&th.z).neg();
    if induced != expected {
        return Err(Error::MismatchWithBracket(format!("θ induces {induced:?}, -ad(z) is {expected:?}")));
    }
    Ok(induced)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RadicalVerdict {
    /// `ad(z)` vanishes on `π^i` for `n < i <= N - 2`.
    RadicalWitness {
        n: u32,
        truncation: u32,
    },
    /// Degrees `i` where `ad(z): π^i -> π^{i+2}` is nonzero, including `N - 2`.
    NonRadicalEvidence {
        degrees: Vec<u32>,
        truncation: u32,
    },
    Inconclusive(u32),
}

pub fn radical_probe(z: &PiVector, pi: &HomotopyLieTruncation) -> RadicalVerdict {
    let n = pi.bound;
    if n < 4 {
        return RadicalVerdict::Inconclusive(n);
    }
    let ad = pi.ad(z);
    let nonzero: Vec<u32> = (2..=n - 2).filter(|&i| !ad.is_zero_on(i)).collect();
    match nonzero.last() {
        None => RadicalVerdict::RadicalWitness { n: 1, truncation: n },
        Some(&top) if top == n - 2 => RadicalVerdict::NonRadicalEvidence { degrees: nonzero, truncation: n },
        Some(&top) => RadicalVerdict::RadicalWitness { n: top, truncation: n },
    }
}

/// Bigraded comparison of `Ext_S(k, k)` with the enveloping algebra of `π`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtCrosscheck {
    /// `(i, j, from resolution, from deviations)` over the checked range.
    pub table: Vec<(usize, i32, i64, i64)>,
    pub totals_resolution: Vec<i64>,
    pub totals_deviations: Vec<i64>,
}

impl ExtCrosscheck {
    pub fn agrees(&self) -> bool {
        self.table.iter().all(|t| t.2 == t.3)
    }
}

/// Coefficients of the Poincaré series of `k` over `S` predicted by the
/// deviations: `(1 + st)^{n-ℓ}` times `(1 + s^{h+1} t^e)` for each model
/// variable of even degree `h` and `1/(1 - s^{h+1} t^e)` for odd `h`; the
/// `ℓ` linear `X_1` variables are dropped with the variables they cancel.
pub fn poincare_from_model(model: &DgModel, max_i: usize, max_j: i32) -> Vec<Vec<i64>> {
    let (ni, nj) = (max_i + 1, max_j as usize + 1);
    let mut series = vec![vec![0i64; nj]; ni];
    series[0][0] = 1;
    let mul_exterior = |s: &mut Vec<Vec<i64>>, a: usize, b: usize| {
        for i in (0..ni).rev() {
            for j in (0..nj).rev() {
                if i >= a && j >= b {
                    s[i][j] += s[i - a][j - b];
                }
            }
        }
    };
    let mul_polynomial = |s: &mut Vec<Vec<i64>>, a: usize, b: usize| {
        for i in 0..ni {
            for j in 0..nj {
                if i >= a && j >= b {
                    s[i][j] += s[i - a][j - b];
                }
            }
        }
    };
    let vars = model.algebra.vars();
    let linear = vars.iter().filter(|v| v.hdeg == 1 && v.intdeg == 1).count();
    for _ in 0..model.algebra.ring().nvars() - linear {
        mul_exterior(&mut series, 1, 1);
    }
    for v in vars {
        if v.hdeg == 1 && v.intdeg == 1 {
            continue;
        }
        let (a, b) = (v.hdeg as usize + 1, v.intdeg as usize);
        if a >= ni || b >= nj {
            continue;
        }
        if v.hdeg % 2 == 0 {
            mul_exterior(&mut series, a, b);
        } else {
            mul_polynomial(&mut series, a, b);
        }
    }
    series
}

/// Compares Betti numbers of `k` over `S` with the deviation product for
/// homological degree `<= max_i` and internal degree `<= D`.
pub fn ext_crosscheck(model: &DgModel, max_i: usize) -> Result<ExtCrosscheck> {
    let d = model.intdeg_bound as i32;
    if max_i as u32 > model.hdeg_bound {
        return Err(Error::InvalidArgument(format!("need X_{max_i} for Ext^{max_i}; the model stops at X_{}", model.hdeg_bound)));
    }
    let res = ext_betti(&model.quotient, max_i, d);
    let betti = res.betti();
    let predicted = poincare_from_model(model, max_i, d);
    let mut table = Vec::new();
    let mut totals_resolution = vec![0i64; max_i + 1];
    let mut totals_deviations = vec![0i64; max_i + 1];
    for i in 0..=max_i {
        for j in 0..=d {
            let b = *betti.get(&(i, j)).unwrap_or(&0) as i64;
            let p = predicted[i][j as usize];
            totals_resolution[i] += b;
            totals_deviations[i] += p;
            if b != 0 || p != 0 {
                table.push((i, j, b, p));
            }
        }
    }
    let report = ExtCrosscheck { table, totals_resolution, totals_deviations };
    if !report.agrees() {
        return Err(Error::DimensionMismatch(format!("{:?}", report.table.iter().filter(|t| t.2 != t.3).collect::<Vec<_>>())));
    }
    Ok(report)
}
