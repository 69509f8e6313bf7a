//! Exact fields and sparse multivariate polynomials.

mod monomial;
mod parse;
mod polynomial;
mod scalar;

pub use monomial::{monomials_of_degree, Monomial, MonomialOrder};
pub use parse::{parse_poly, parse_poly_list};
pub(crate) use polynomial::same_ring;
#[allow(unused_imports)]
pub(crate) use polynomial::{write_combination, write_monomial};
pub use polynomial::{PolyRing, Polynomial};
pub use scalar::{FieldSpec, Scalar};

use crate::error::{Error, Result};

/// Multivariate division: `f = Σ q_i d_i + r` with no term of `r`
/// divisible by a leading monomial of any `d_i`.
pub fn multivariate_divide(f: &Polynomial, divisors: &[Polynomial], order: MonomialOrder) -> Result<(Vec<Polynomial>, Polynomial)> {
    let ring = f.ring();
    for d in divisors {
        if !same_ring(ring, d.ring()) {
            return Err(Error::AmbientMismatch);
        }
        if d.is_zero() {
            return Err(Error::InvalidArgument("zero divisor".into()));
        }
    }
    let leads: Vec<_> = divisors.iter().map(|d| d.leading_term(order).unwrap().clone()).collect();
    let mut quotients: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); divisors.len()];
    let mut rem_terms = Vec::new();
    let mut p = f.clone();
    while let Some((lm, lc)) = p.leading_term(order).cloned() {
        let hit = leads.iter().position(|(m, _)| m.divides(&lm));
        match hit {
            Some(i) => {
                let (dm, dc) = &leads[i];
                let t = dm.quotient_of(&lm).unwrap();
                let c = &lc * &dc.inv().unwrap();
                p = p.add_scaled_shifted(&-&c, Some(&t), &divisors[i]);
                quotients[i].push((t, c));
            }
            None => {
                rem_terms.push((lm.clone(), lc.clone()));
                p = p.add_scaled_shifted(&-&lc, None, &Polynomial::monomial(ring, lm, ring.field().one()));
            }
        }
    }
    let qs = quotients.into_iter().map(|t| Polynomial::from_terms(ring, t)).collect();
    Ok((qs, Polynomial::from_terms(ring, rem_terms)))
}
