//! Homogeneous ternary forms with exact coefficient arithmetic.
//!
//! A degree-d form is a vector of (d+1)(d+2)/2 coefficients in graded-lex
//! monomial order with x > y > z, always stored in canonical primitive form
//! (integer entries, content 1, first nonzero coefficient positive). The
//! order for small degrees:
//!
//! - d=1: `x, y, z`
//! - d=2: `x², xy, xz, y², yz, z²`
//! - d=3: `x³, x²y, x²z, xy², xyz, xz², y³, y²z, yz², z³`
//! - d=4: `x⁴, x³y, x³z, x²y², x²yz, x²z², xy³, xy²z, xyz², xz³, y⁴, y³z, y²z², yz³, z⁴`
//! - d=5: `x⁵, x⁴y, x⁴z, x³y², x³yz, x³z², x²y³, x²y²z, x²yz², x²z³, xy⁴, xy³z, xy²z², xyz³, xz⁴, y⁵, y⁴z, y³z², y²z³, yz⁴, z⁵`
//!
//! Division is implemented as an exact linear solve on the quotient
//! coefficients rather than monomial long division.

use num::bigint::BigInt;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{solve_exact, RatMatrix};
use crate::rat::{ints_to_rats, primitive_from_ints, primitive_from_rats, Rat};

/// Number of degree-d monomials in three variables.
pub fn monomial_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Exponent triples (a, b, c), a+b+c = d, in graded-lex order with x > y > z.
pub fn monomials(d: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(monomial_count(d));
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push((a, b, d - a - b));
        }
    }
    out
}

/// Index of the monomial x^a y^b z^c among the degree-(a+b+c) monomials.
pub fn monomial_index(a: usize, b: usize, c: usize) -> usize {
    let d = a + b + c;
    let s = d - a;
    s * (s + 1) / 2 + (s - b)
}

/// A nonzero homogeneous ternary form in canonical primitive form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomoPoly {
    degree: usize,
    coeffs: Vec<BigInt>,
}

impl HomoPoly {
    /// Canonicalizes an integer coefficient vector; None when all zero.
    pub fn from_ints(degree: usize, coeffs: Vec<BigInt>) -> Option<Self> {
        assert_eq!(coeffs.len(), monomial_count(degree), "coefficient count");
        if coeffs.iter().all(|c| c.is_zero()) {
            return None;
        }
        Some(HomoPoly { degree, coeffs: primitive_from_ints(coeffs) })
    }

    /// Canonicalizes a rational coefficient vector; None when all zero.
    pub fn from_rats(degree: usize, coeffs: &[Rat]) -> Option<Self> {
        assert_eq!(coeffs.len(), monomial_count(degree), "coefficient count");
        if coeffs.iter().all(|c| c.is_zero()) {
            return None;
        }
        Some(HomoPoly { degree, coeffs: primitive_from_rats(coeffs) })
    }

    pub fn from_i64(degree: usize, coeffs: &[i64]) -> Option<Self> {
        Self::from_ints(degree, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeffs_rat(&self) -> Vec<Rat> {
        ints_to_rats(&self.coeffs)
    }

    /// Exact coefficient convolution; the product of nonzero forms over an
    /// integral domain is nonzero.
    pub fn mul(&self, other: &HomoPoly) -> HomoPoly {
        let d = self.degree + other.degree;
        let mut out = vec![BigInt::zero(); monomial_count(d)];
        let ma = monomials(self.degree);
        let mb = monomials(other.degree);
        for (i, &(a1, b1, c1)) in ma.iter().enumerate() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for (j, &(a2, b2, c2)) in mb.iter().enumerate() {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let idx = monomial_index(a1 + a2, b1 + b2, c1 + c2);
                out[idx] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        HomoPoly::from_ints(d, out).expect("product of nonzero forms is nonzero")
    }

    /// Exact quotient Q with self = divisor·Q, found as a linear solve on
    /// Q's coefficients. NotDivisible when no exact quotient exists.
    pub fn divide_exact(&self, divisor: &HomoPoly) -> Result<HomoPoly> {
        if self.degree <= divisor.degree {
            return Err(Error::DegreeMismatch { expected: divisor.degree + 1, got: self.degree });
        }
        let dq = self.degree - divisor.degree;
        let a = multiplication_matrix(divisor, dq);
        let b: Vec<Rat> = ints_to_rats(&self.coeffs);
        let x = solve_exact(&a, &b).ok_or(Error::NotDivisible)?;
        let q = HomoPoly::from_rats(dq, &x).ok_or(Error::NotDivisible)?;
        // Gauss's lemma: quotient of primitive by primitive is primitive and
        // sign-consistent, so the canonical form satisfies the identity.
        if &divisor.mul(&q) != self {
            return Err(Error::NotDivisible);
        }
        Ok(q)
    }

    /// Exact evaluation at integer homogeneous coordinates.
    pub fn eval_ints(&self, p: &[BigInt; 3]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, &(a, b, c)) in monomials(self.degree).iter().enumerate() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            acc += &self.coeffs[i] * p[0].pow(a as u32) * p[1].pow(b as u32) * p[2].pow(c as u32);
        }
        acc
    }

    /// Exact evaluation at rational homogeneous coordinates.
    pub fn eval_rats(&self, p: &[Rat; 3]) -> Rat {
        let mut acc = Rat::zero();
        for (i, &(a, b, c)) in monomials(self.degree).iter().enumerate() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            let term = Rat::from_integer(self.coeffs[i].clone())
                * pow_rat(&p[0], a)
                * pow_rat(&p[1], b)
                * pow_rat(&p[2], c);
            acc += term;
        }
        acc
    }

    /// Gradient ∂F/∂x, ∂F/∂y, ∂F/∂z evaluated at integer coordinates.
    pub fn gradient_at(&self, p: &[BigInt; 3]) -> [BigInt; 3] {
        let mut g = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for (i, &(a, b, c)) in monomials(self.degree).iter().enumerate() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            let coef = &self.coeffs[i];
            if a > 0 {
                g[0] += coef * BigInt::from(a)
                    * p[0].pow(a as u32 - 1) * p[1].pow(b as u32) * p[2].pow(c as u32);
            }
            if b > 0 {
                g[1] += coef * BigInt::from(b)
                    * p[0].pow(a as u32) * p[1].pow(b as u32 - 1) * p[2].pow(c as u32);
            }
            if c > 0 {
                g[2] += coef * BigInt::from(c)
                    * p[0].pow(a as u32) * p[1].pow(b as u32) * p[2].pow(c as u32 - 1);
            }
        }
        g
    }

    /// λ·self + μ·other as an exact rational vector (not canonicalized).
    pub fn lin_comb_raw(lambda: &Rat, f: &HomoPoly, mu: &Rat, g: &HomoPoly) -> Vec<Rat> {
        assert_eq!(f.degree, g.degree);
        f.coeffs
            .iter()
            .zip(&g.coeffs)
            .map(|(a, b)| lambda * Rat::from_integer(a.clone()) + mu * Rat::from_integer(b.clone()))
            .collect()
    }

    /// Serialized coefficient strings ("p/q" with q omitted when 1).
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

fn pow_rat(q: &Rat, e: usize) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

/// Matrix of "multiply by g" from degree-dq coefficient space into
/// degree-(dq + deg g) coefficient space, columns indexed by quotient
/// monomials.
pub(crate) fn multiplication_matrix(g: &HomoPoly, dq: usize) -> RatMatrix {
    let dtot = g.degree + dq;
    let rows = monomial_count(dtot);
    let cols = monomial_count(dq);
    let mut m = RatMatrix::zero(rows, cols);
    let mq = monomials(dq);
    let mg = monomials(g.degree);
    for (j, &(a2, b2, c2)) in mq.iter().enumerate() {
        for (i, &(a1, b1, c1)) in mg.iter().enumerate() {
            if g.coeffs()[i].is_zero() {
                continue;
            }
            let idx = monomial_index(a1 + a2, b1 + b2, c1 + c2);
            *m.at_mut(idx, j) += Rat::from_integer(g.coeffs()[i].clone());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use proptest::prelude::*;

    fn lin(a: i64, b: i64, c: i64) -> HomoPoly {
        HomoPoly::from_i64(1, &[a, b, c]).unwrap()
    }

    fn circle() -> HomoPoly {
        HomoPoly::from_i64(2, &[1, 0, 0, 1, 0, -1]).unwrap()
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        assert_eq!(monomials(1), vec![(1, 0, 0), (0, 1, 0), (0, 0, 1)]);
        assert_eq!(
            monomials(2),
            vec![(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]
        );
        for d in 1..=5 {
            let ms = monomials(d);
            assert_eq!(ms.len(), monomial_count(d));
            for (i, &(a, b, c)) in ms.iter().enumerate() {
                assert_eq!(monomial_index(a, b, c), i);
            }
            // strictly decreasing in lex order on (a, b)
            for w in ms.windows(2) {
                assert!(w[0].0 > w[1].0 || (w[0].0 == w[1].0 && w[0].1 > w[1].1));
            }
        }
    }

    #[test]
    fn small_products() {
        let x = lin(1, 0, 0);
        let y = lin(0, 1, 0);
        let xy = x.mul(&y);
        assert_eq!(xy.coeffs()[monomial_index(1, 1, 0)], BigInt::one());
        assert_eq!(xy.coeffs().iter().filter(|c| !c.is_zero()).count(), 1);

        let xpz = lin(1, 0, 1);
        let xmz = lin(1, 0, -1);
        let prod = xpz.mul(&xmz);
        assert_eq!(prod, HomoPoly::from_i64(2, &[1, 0, 0, 0, 0, -1]).unwrap());
    }

    #[test]
    fn product_matches_pointwise_evaluation() {
        // three chords of the unit circle as a cubic, against factor-wise
        // evaluation at 20 points
        let l1 = lin(3, 4, -5);
        let l2 = lin(1, -2, 7);
        let l3 = lin(-6, 1, 2);
        let cubic = l1.mul(&l2).mul(&l3);
        let mut s = 12345u64;
        for _ in 0..20 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let p = [
                BigInt::from((s >> 33) as i64 % 19 - 9),
                BigInt::from((s >> 17) as i64 % 17 - 8),
                BigInt::from((s >> 5) as i64 % 13 - 6),
            ];
            let lhs = cubic.eval_ints(&p);
            let rhs = l1.eval_ints(&p) * l2.eval_ints(&p) * l3.eval_ints(&p);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn exact_division() {
        let f = HomoPoly::from_i64(2, &[1, 0, 0, 0, 0, -1]).unwrap(); // x^2 - z^2
        let g = lin(1, 0, -1);
        assert_eq!(f.divide_exact(&g).unwrap(), lin(1, 0, 1));

        let c = circle();
        let l = lin(2, -3, 5);
        let prod = c.mul(&l);
        assert_eq!(prod.divide_exact(&c).unwrap(), l);

        let x3 = HomoPoly::from_i64(3, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        let y = lin(0, 1, 0);
        assert_eq!(x3.divide_exact(&y), Err(Error::NotDivisible));
    }

    #[test]
    fn circle_evaluations() {
        let c = circle();
        assert!(c.eval_ints(&[3.into(), 4.into(), 5.into()]).is_zero());
        let x = lin(1, 0, 0);
        assert!(x.eval_ints(&[0.into(), 1.into(), 0.into()]).is_zero());
        assert_eq!(c.eval_ints(&[1.into(), 1.into(), 1.into()]), BigInt::one());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn divide_undoes_mul(fa in prop::array::uniform3(-9i64..=9), fb in prop::array::uniform6(-9i64..=9), ga in prop::array::uniform3(-9i64..=9)) {
            let f = HomoPoly::from_i64(1, &fa);
            let g2 = HomoPoly::from_i64(2, &fb);
            let g1 = HomoPoly::from_i64(1, &ga);
            if let (Some(f), Some(g2), Some(g1)) = (f, g2, g1) {
                let prod = f.mul(&g2).mul(&g1);
                let quot = prod.divide_exact(&g2).unwrap();
                prop_assert_eq!(quot, f.mul(&g1));
            }
        }
    }
}
