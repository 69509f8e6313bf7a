//! Sparse exact linear algebra over a field: the engine behind every
//! slice-wise computation (Hilbert functions, kernels, homology).

use std::collections::HashMap;

use crate::exactalg::Scalar;

/// Sparse vector: strictly increasing indices, no zero entries.
pub type SparseVec = Vec<(u32, Scalar)>;

/// `v + c*w`.
pub fn axpy(v: &[(u32, Scalar)], c: &Scalar, w: &[(u32, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() && j < w.len() {
        let (a, b) = (v[i].0, w[j].0);
        if a < b {
            out.push(v[i].clone());
            i += 1;
        } else if b < a {
            out.push((b, c * &w[j].1));
            j += 1;
        } else {
            let s = &v[i].1 + &(c * &w[j].1);
            if !s.is_zero() {
                out.push((a, s));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&v[i..]);
    out.extend(w[j..].iter().map(|(k, x)| (*k, c * x)));
    out
}

pub fn scale(v: &[(u32, Scalar)], c: &Scalar) -> SparseVec {
    v.iter().map(|(k, x)| (*k, x * c)).collect()
}

/// Sorts and combines an unordered list of entries.
pub fn normalize(mut entries: Vec<(u32, Scalar)>) -> SparseVec {
    entries.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(entries.len());
    for (k, x) in entries {
        match out.last_mut() {
            Some((j, y)) if *j == k => *y = &*y + &x,
            _ => out.push((k, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// Incremental row echelon basis. Each stored row has a distinct leading
/// index and leading coefficient one.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivots: HashMap<u32, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Eliminates leading entries until the lead is not a pivot.
    fn reduce_lead(&self, mut v: SparseVec) -> SparseVec {
        while let Some((k, c)) = v.first() {
            match self.pivots.get(k) {
                Some(&r) => {
                    let c = -c;
                    v = axpy(&v, &c, &self.rows[r]);
                }
                None => break,
            }
        }
        v
    }

    /// Canonical remainder: no entry sits on a pivot index.
    pub fn reduce_full(&self, mut v: SparseVec) -> SparseVec {
        let mut k = 0;
        while k < v.len() {
            match self.pivots.get(&v[k].0) {
                Some(&r) => {
                    let c = -&v[k].1;
                    v = axpy(&v, &c, &self.rows[r]);
                }
                None => k += 1,
            }
        }
        v
    }

    pub fn contains(&self, v: &[(u32, Scalar)]) -> bool {
        self.reduce_lead(v.to_vec()).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce_lead(v);
        let Some((k, c)) = v.first() else {
            return false;
        };
        let k = *k;
        let inv = c.inv().unwrap();
        self.pivots.insert(k, self.rows.len());
        self.rows.push(scale(&v, &inv));
        true
    }
}

/// Echelon basis that also records, for each row, which input
/// combination produced it. Used for kernels.
#[derive(Debug, Default)]
pub struct TrackedEchelon {
    rows: Vec<(SparseVec, SparseVec)>,
    pivots: HashMap<u32, usize>,
}

impl TrackedEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `(v, combo)`; returns `Some(combo)` if `v` reduces to zero,
    /// otherwise stores the row and returns `None`.
    pub fn insert(&mut self, mut v: SparseVec, mut combo: SparseVec) -> Option<SparseVec> {
        while let Some((k, c)) = v.first() {
            match self.pivots.get(k) {
                Some(&r) => {
                    let c = -c;
                    let (rv, rc) = &self.rows[r];
                    v = axpy(&v, &c, rv);
                    combo = axpy(&combo, &c, rc);
                }
                None => break,
            }
        }
        match v.first() {
            None => Some(combo),
            Some((k, c)) => {
                let k = *k;
                let inv = c.inv().unwrap();
                self.pivots.insert(k, self.rows.len());
                self.rows.push((scale(&v, &inv), scale(&combo, &inv)));
                None
            }
        }
    }
}

/// Basis of the kernel of the linear map sending basis vector `j` to
/// `columns[j]`. Every returned vector has its largest index entry equal
/// to one and these indices are distinct.
pub fn kernel(columns: &[SparseVec]) -> Vec<SparseVec> {
    let field_one = columns.iter().flat_map(|c| c.first()).map(|(_, x)| x.field().one()).next();
    let Some(one) = field_one else {
        // all columns zero: the kernel is everything, but the field is unknown
        // here; callers handle the all-zero case via `kernel_with_one`.
        return Vec::new();
    };
    kernel_with_one(columns, &one)
}

/// As [`kernel`], with the field's unit supplied (needed when every column
/// is zero).
pub fn kernel_with_one(columns: &[SparseVec], one: &Scalar) -> Vec<SparseVec> {
    let mut ech = TrackedEchelon::new();
    let mut out = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        if let Some(combo) = ech.insert(col.clone(), vec![(j as u32, one.clone())]) {
            out.push(combo);
        }
    }
    out
}

pub fn rank(vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::FieldSpec;

    fn v(f: FieldSpec, entries: &[(u32, i64)]) -> SparseVec {
        normalize(entries.iter().map(|&(k, x)| (k, f.from_i64(x))).collect())
    }

    #[test]
    fn rank_and_kernel_of_small_matrix() {
        let q = FieldSpec::Rationals;
        // columns (1,2), (2,4), (0,1)
        let cols = vec![v(q, &[(0, 1), (1, 2)]), v(q, &[(0, 2), (1, 4)]), v(q, &[(1, 1)])];
        assert_eq!(rank(cols.clone()), 2);
        let k = kernel_with_one(&cols, &q.one());
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], v(q, &[(0, -2), (1, 1)]));
    }

    #[test]
    fn full_reduction_is_canonical() {
        let q = FieldSpec::Rationals;
        let mut e = Echelon::new();
        e.insert(v(q, &[(0, 1), (2, 1)]));
        e.insert(v(q, &[(1, 1), (2, 1)]));
        let a = e.reduce_full(v(q, &[(0, 1), (1, 1)]));
        let b = e.reduce_full(v(q, &[(2, -2)]));
        assert_eq!(a, b);
        assert!(e.contains(&v(q, &[(0, 1), (1, -1)])));
        assert!(!e.contains(&v(q, &[(2, 1)])));
    }
}
