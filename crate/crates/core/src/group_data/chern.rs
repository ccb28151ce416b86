use num_bigint::BigInt;
use num_traits::One;

use super::group::{borel_fiber, rep_ring, CompactGroupDesc, RepRingDesc, VirtualCharacter};
use super::poly::Poly;
use super::GroupError;
use crate::linalg::Rational;

/// Coefficient-level Chern character `R(K) -> S(k*)`, truncated to total
/// degree `max_degree` (generators in degree 2).
///
/// A torus character of weight `λ` goes to `exp(λ·u)`; the finite part of a
/// character only contributes through its dimension.
pub fn chern_of_rep(k: &CompactGroupDesc, tau: &VirtualCharacter, max_degree: u32) -> Result<Poly, GroupError> {
    if !max_degree.is_multiple_of(2) {
        return Err(GroupError::OddTruncation(max_degree));
    }
    let ring = borel_fiber(k);
    let weights = ring.weights();
    let rep = rep_ring(k);
    let mut out = Poly::zero(ring.rank());
    match &rep {
        RepRingDesc::Abelian { torus_rank, .. } => {
            for (c, n) in tau.terms() {
                let c = rep.normalize(c)?;
                let weight: Vec<Rational> = c.0[..*torus_rank].iter().map(|&w| Rational::from_integer(w.into())).collect();
                out = out.add(&exp_truncated(&weight, max_degree).scale(&Rational::from_integer(n.into())));
            }
        }
        RepRingDesc::Formal(f) => {
            if f.chern.len() != f.basis.len() {
                return Err(GroupError::BadFormal("formal group has no Chern images".into()));
            }
            for (c, n) in tau.terms() {
                let c = rep.normalize(c)?;
                let img = f.chern[c.0[0] as usize].truncate(&weights, max_degree);
                out = out.add(&img.scale(&Rational::from_integer(n.into())));
            }
        }
    }
    Ok(out)
}

/// `sum_{2k <= max} (λ·u)^k / k!`
fn exp_truncated(weight: &[Rational], max_degree: u32) -> Poly {
    let n = weight.len();
    let lin = if n == 0 { Poly::zero(0) } else { Poly::linear(weight) };
    let mut out = Poly::one(n);
    let mut power = Poly::one(n);
    let mut fact = BigInt::one();
    for k in 1..=max_degree / 2 {
        power = power.mul(&lin);
        fact *= k;
        out = out.add(&power.scale(&Rational::new(BigInt::one(), fact.clone())));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_data::group::Character;
    use crate::linalg::{rat, rat_frac};

    fn t(n: i64) -> VirtualCharacter {
        VirtualCharacter::single(Character(vec![n]))
    }

    #[test]
    fn trivial_character_is_one() {
        let k = CompactGroupDesc::torus(1);
        for d in [0, 2, 8] {
            assert_eq!(chern_of_rep(&k, &t(0), d).unwrap(), Poly::one(1));
        }
    }

    #[test]
    fn weight_one_to_degree_four() {
        // oracle: term-by-term exponential 1 + u + u^2/2
        let k = CompactGroupDesc::torus(1);
        let ch = chern_of_rep(&k, &t(1), 4).unwrap();
        let mut expected = Poly::one(1);
        expected.add_term(vec![1], rat(1));
        expected.add_term(vec![2], rat_frac(1, 2));
        assert_eq!(ch, expected);
    }

    #[test]
    fn ring_map_on_monomials() {
        // ch(t) ch(t^2) = ch(t^3) up to degree 6, both sides expanded independently
        let k = CompactGroupDesc::torus(1);
        let w = [2];
        let lhs = chern_of_rep(&k, &t(1), 6).unwrap().mul(&chern_of_rep(&k, &t(2), 6).unwrap()).truncate(&w, 6);
        let mut rhs = Poly::zero(1);
        // exp(3u) = 1 + 3u + 9u^2/2 + 27u^3/6
        rhs.add_term(vec![0], rat(1));
        rhs.add_term(vec![1], rat(3));
        rhs.add_term(vec![2], rat_frac(9, 2));
        rhs.add_term(vec![3], rat_frac(27, 6));
        assert_eq!(lhs, rhs);
        assert_eq!(chern_of_rep(&k, &t(3), 6).unwrap(), rhs);
    }

    #[test]
    fn finite_part_contributes_dimension() {
        let k = CompactGroupDesc { torus_rank: 1, finite_part: vec![2], formal: None };
        let tau = VirtualCharacter::single(Character(vec![0, 1]));
        assert_eq!(chern_of_rep(&k, &tau, 6).unwrap(), Poly::one(1));
    }

    #[test]
    fn odd_truncation_rejected() {
        assert!(matches!(chern_of_rep(&CompactGroupDesc::torus(1), &t(1), 3), Err(GroupError::OddTruncation(3))));
    }
}
