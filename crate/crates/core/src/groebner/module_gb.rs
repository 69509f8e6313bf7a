//! Gröbner bases of submodules of free modules (position-over-term) and
//! the syzygy computation built on them.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::graded::{FreeModule, GradedMap};
use super::ideal::GroebnerBasis;
use crate::exactalg::{Monomial, MonomialOrder, PolyRing, Polynomial, Scalar};

const ORDER: MonomialOrder = MonomialOrder::DegRevLex;

type Lead = (usize, Monomial, Scalar);

fn lead(v: &[Polynomial]) -> Option<Lead> {
    v.iter().enumerate().find(|(_, p)| !p.is_zero()).map(|(i, p)| {
        let (m, c) = p.leading_term(ORDER).unwrap().clone();
        (i, m, c)
    })
}

fn add_scaled(v: &[Polynomial], c: &Scalar, t: &Monomial, w: &[Polynomial]) -> Vec<Polynomial> {
    v.iter().zip(w).map(|(a, b)| if b.is_zero() { a.clone() } else { a.add_scaled_shifted(c, Some(t), b) }).collect()
}

/// Reduces the leading term until it is not divisible by any basis lead.
fn top_reduce(mut v: Vec<Polynomial>, basis: &[(Vec<Polynomial>, Lead)]) -> Vec<Polynomial> {
    while let Some((p, m, c)) = lead(&v) {
        let hit = basis.iter().find(|(_, (q, gm, _))| *q == p && gm.divides(&m));
        match hit {
            Some((g, (_, gm, gc))) => {
                let t = gm.quotient_of(&m).unwrap();
                let k = -(&c * &gc.inv().unwrap());
                v = add_scaled(&v, &k, &t, g);
            }
            None => break,
        }
    }
    v
}

/// Gröbner basis (not reduced) of the submodule generated by `gens`, which
/// must be homogeneous with respect to the component `shifts`.
pub fn module_groebner(gens: &[Vec<Polynomial>], shifts: &[i32]) -> Vec<Vec<Polynomial>> {
    let mut basis: Vec<(Vec<Polynomial>, Lead)> = Vec::new();
    let mut pairs: BTreeSet<(i64, usize, usize)> = BTreeSet::new();
    let push = |basis: &mut Vec<(Vec<Polynomial>, Lead)>, pairs: &mut BTreeSet<(i64, usize, usize)>, v: Vec<Polynomial>| {
        let l = lead(&v).unwrap();
        let inv = l.2.inv().unwrap();
        let v: Vec<Polynomial> = v.iter().map(|p| p.scale(&inv)).collect();
        let l = lead(&v).unwrap();
        let j = basis.len();
        for (i, (_, (q, gm, _))) in basis.iter().enumerate() {
            if *q == l.0 {
                let deg = gm.lcm(&l.1).degree() as i64 + shifts[q.to_owned()] as i64;
                pairs.insert((deg, j, i));
            }
        }
        basis.push((v, l));
    };
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by_key(|&i| lead(&gens[i]).map(|(p, m, _)| m.degree() as i64 + shifts[p] as i64).unwrap_or(i64::MAX));
    for i in order {
        let r = top_reduce(gens[i].clone(), &basis);
        if lead(&r).is_some() {
            push(&mut basis, &mut pairs, r);
        }
    }
    while let Some(&key) = pairs.iter().next() {
        pairs.remove(&key);
        let (_, j, i) = key;
        let (f, (_, fm, _)) = &basis[i];
        let (g, (_, gm, _)) = &basis[j];
        let l = fm.lcm(gm);
        let a = fm.quotient_of(&l).unwrap();
        let b = gm.quotient_of(&l).unwrap();
        let one = f[0].field().one();
        let zero: Vec<Polynomial> = f.iter().map(|p| Polynomial::zero(p.ring())).collect();
        let s = add_scaled(&add_scaled(&zero, &one, &a, f), &-&one, &b, g);
        let r = top_reduce(s, &basis);
        if lead(&r).is_some() {
            push(&mut basis, &mut pairs, r);
        }
    }
    basis.into_iter().map(|(v, _)| v).collect()
}

/// Generators of the syzygy module of `columns` (vectors in a free module
/// with component degrees `row_degrees`). When `quotient` is given the
/// syzygies are taken over `R/I` and returned in normal form.
pub fn syzygies(
    ring: &Arc<PolyRing>,
    columns: &[Vec<Polynomial>],
    col_degrees: &[i32],
    row_degrees: &[i32],
    quotient: Option<&GroebnerBasis>,
) -> Vec<Vec<Polynomial>> {
    let r = row_degrees.len();
    let mut cols: Vec<Vec<Polynomial>> = columns.to_vec();
    let mut cdeg: Vec<i32> = col_degrees.to_vec();
    if let Some(gb) = quotient {
        for (i, &rd) in row_degrees.iter().enumerate() {
            for f in gb.elements() {
                let mut v = vec![Polynomial::zero(ring); r];
                v[i] = f.clone();
                cols.push(v);
                cdeg.push(rd + f.total_degree().unwrap() as i32);
            }
        }
    }
    let m = cols.len();
    let mut shifts = row_degrees.to_vec();
    shifts.extend_from_slice(&cdeg);
    let aug: Vec<Vec<Polynomial>> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let mut v = c.clone();
            v.resize(r, Polynomial::zero(ring));
            let mut tail = vec![Polynomial::zero(ring); m];
            tail[j] = Polynomial::one(ring);
            v.extend(tail);
            v
        })
        .collect();
    let gb = module_groebner(&aug, &shifts);
    let keep = columns.len();
    let mut out = Vec::new();
    for v in gb {
        if v[..r].iter().all(|p| p.is_zero()) {
            let s: Vec<Polynomial> = v[r..r + keep]
                .iter()
                .map(|p| match quotient {
                    Some(gb) => gb.normal_form(p).unwrap(),
                    None => p.clone(),
                })
                .collect();
            if s.iter().any(|p| !p.is_zero()) {
                out.push(s);
            }
        }
    }
    out
}

/// The map `F2 -> F1` whose columns generate the syzygies of the columns
/// of `map` (over the map's ring, quotient included).
pub fn syzygy_map(map: &GradedMap) -> GradedMap {
    let ring = map.ring();
    let quotient = ring.is_quotient().then(|| ring.gb());
    let syz = syzygies(ring.poly_ring(), &map.columns, &map.source.degrees, &map.target.degrees, quotient);
    let degrees = syz.iter().map(|v| map.source.vector_degree(v).unwrap().unwrap()).collect();
    GradedMap::new(FreeModule::new(ring, degrees), map.source.clone(), syz).expect("syzygies are homogeneous")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, FieldSpec};
    use crate::groebner::{buchberger, Ideal};

    #[test]
    fn koszul_syzygy_of_two_variables() {
        let r = PolyRing::new(&["x", "y"], FieldSpec::Rationals).unwrap();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let s = syzygies(&r, &[vec![x.clone()], vec![y.clone()]], &[1, 1], &[0], None);
        assert_eq!(s.len(), 1);
        // oracle: the syzygy is a multiple of (y, -x)
        let v = &s[0];
        assert!((&(&v[0] * &x) + &(&v[1] * &y)).is_zero());
        assert_eq!(v[0].total_degree(), Some(1));
    }

    #[test]
    fn syzygies_over_quotient() {
        let r = PolyRing::new(&["x", "y"], FieldSpec::Rationals).unwrap();
        let i = Ideal::new(&r, vec![parse_poly(&r, "x^2").unwrap()]).unwrap();
        let gb = buchberger(&i, MonomialOrder::DegRevLex);
        let x = Polynomial::var(&r, 0);
        // annihilator of x in k[x,y]/(x^2) is (x)
        let s = syzygies(&r, &[vec![x.clone()]], &[1], &[0], Some(&gb));
        assert_eq!(s.len(), 1);
        assert_eq!(s[0][0], x);
    }
}
