//! Lie-algebra data over an explicit basis and Lie-valued polynomials.

use num_traits::{One, Zero};

use super::poly::{qi, Poly, Q};
use crate::error::AlgebraError;

/// Structure constants `f^a_{bc}` and an invariant pairing `kappa_{ab}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    pub name: String,
    pub dim: usize,
    f: Vec<Q>,
    kappa: Vec<Q>,
}

impl LieAlgebraData {
    /// Build and validate. `f[a][b][c]` is `f^a_{bc}`.
    pub fn new(name: &str, dim: usize, f: Vec<Q>, kappa: Vec<Q>) -> Result<Self, AlgebraError> {
        assert_eq!(f.len(), dim * dim * dim);
        assert_eq!(kappa.len(), dim * dim);
        let l = LieAlgebraData { name: name.to_string(), dim, f, kappa };
        l.validate()?;
        Ok(l)
    }

    pub fn abelian(name: &str, dim: usize) -> Self {
        let mut kappa = vec![Q::zero(); dim * dim];
        for a in 0..dim {
            kappa[a * dim + a] = Q::one();
        }
        LieAlgebraData { name: name.to_string(), dim, f: vec![Q::zero(); dim * dim * dim], kappa }
    }

    /// `su(2)` with `f^a_{bc} = eps_{abc}` and `kappa = delta`.
    pub fn su2() -> Self {
        let mut f = vec![Q::zero(); 27];
        for (a, b, c, s) in [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1), (0, 2, 1, -1), (2, 1, 0, -1), (1, 0, 2, -1)] {
            f[a * 9 + b * 3 + c] = qi(s);
        }
        let mut kappa = vec![Q::zero(); 9];
        for a in 0..3 {
            kappa[a * 3 + a] = Q::one();
        }
        LieAlgebraData { name: "su2".into(), dim: 3, f, kappa }
    }

    pub fn f(&self, a: usize, b: usize, c: usize) -> &Q {
        &self.f[a * self.dim * self.dim + b * self.dim + c]
    }

    pub fn kappa(&self, a: usize, b: usize) -> &Q {
        &self.kappa[a * self.dim + b]
    }

    pub fn is_abelian(&self) -> bool {
        self.f.iter().all(|x| x.is_zero())
    }

    /// Antisymmetry defect: the list of `(a,b,c)` with `f^a_{bc} != -f^a_{cb}`.
    pub fn antisymmetry_defects(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in b..n {
                    if *self.f(a, b, c) != -self.f(a, c, b).clone() {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    /// Jacobiator components `sum_d f^d_{bc} f^e_{ad} + cyclic(a,b,c)`.
    pub fn jacobiator(&self, a: usize, b: usize, c: usize, e: usize) -> Q {
        let n = self.dim;
        let mut s = Q::zero();
        for d in 0..n {
            s += self.f(d, b, c) * self.f(e, a, d);
            s += self.f(d, c, a) * self.f(e, b, d);
            s += self.f(d, a, b) * self.f(e, c, d);
        }
        s
    }

    /// `kappa_{ad} f^d_{bc} + kappa_{bd} f^d_{ac}`.
    pub fn invariance_defect(&self, a: usize, b: usize, c: usize) -> Q {
        let mut s = Q::zero();
        for d in 0..self.dim {
            s += self.kappa(a, d) * self.f(d, b, c);
            s += self.kappa(b, d) * self.f(d, a, c);
        }
        s
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.dim;
        if let Some((a, b, c)) = self.antisymmetry_defects().first() {
            return Err(AlgebraError::NotAntisymmetric(format!("f[{}][{}][{}]", a + 1, b + 1, c + 1)));
        }
        for a in 0..n {
            for b in 0..n {
                if self.kappa(a, b) != self.kappa(b, a) {
                    return Err(AlgebraError::InvalidPairing(format!("kappa not symmetric at ({}, {})", a + 1, b + 1)));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        if !self.jacobiator(a, b, c, e).is_zero() {
                            return Err(AlgebraError::Jacobi(format!("({}, {}, {}; {})", a + 1, b + 1, c + 1, e + 1)));
                        }
                    }
                    if !self.invariance_defect(a, b, c).is_zero() {
                        return Err(AlgebraError::InvalidPairing(format!("kappa not ad-invariant at ({}, {}, {})", a + 1, b + 1, c + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Fill `f^a_{cb} := -f^a_{bc}` wherever only one of the pair was set.
    pub fn complete_antisymmetric(dim: usize, f: &mut [Q]) {
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let i = a * dim * dim + b * dim + c;
                    let j = a * dim * dim + c * dim + b;
                    if f[j].is_zero() && !f[i].is_zero() {
                        f[j] = -f[i].clone();
                    }
                }
            }
        }
    }

    pub fn structure_constants(&self) -> &[Q] {
        &self.f
    }

    pub fn pairing(&self) -> &[Q] {
        &self.kappa
    }
}

/// An element with one free Lie index, stored componentwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieValued(pub Vec<Poly>);

impl LieValued {
    pub fn zero(dim: usize) -> Self {
        LieValued(vec![Poly::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|p| p.is_zero())
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> LieValued {
        LieValued(self.0.iter().map(f).collect())
    }

    pub fn add(&self, o: &LieValued) -> LieValued {
        LieValued(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &LieValued) -> LieValued {
        LieValued(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Q) -> LieValued {
        self.map(|p| p.scale(c))
    }

    /// Multiply every component by a scalar poly on the left.
    pub fn left_mul(&self, p: &Poly) -> LieValued {
        self.map(|x| p * x)
    }

    pub fn right_mul(&self, p: &Poly) -> LieValued {
        self.map(|x| x * p)
    }
}

/// `[a,b]^a = f^a_{bc} a^b b^c`.
pub fn lie_bracket(lie: &LieAlgebraData, a: &LieValued, b: &LieValued) -> Result<LieValued, AlgebraError> {
    if a.dim() != lie.dim || b.dim() != lie.dim {
        return Err(AlgebraError::LieMismatch(format!("{} vs {}/{}", lie.dim, a.dim(), b.dim())));
    }
    let n = lie.dim;
    let mut out = vec![Poly::zero(); n];
    for bi in 0..n {
        if a.0[bi].is_zero() {
            continue;
        }
        for ci in 0..n {
            if b.0[ci].is_zero() {
                continue;
            }
            let prod = &a.0[bi] * &b.0[ci];
            if prod.is_zero() {
                continue;
            }
            for (ai, slot) in out.iter_mut().enumerate() {
                let k = lie.f(ai, bi, ci);
                if !k.is_zero() {
                    *slot += prod.scale(k);
                }
            }
        }
    }
    Ok(LieValued(out))
}

/// `Tr(XY) = kappa_{ab} X^a Y^b`.
pub fn trace_pair(lie: &LieAlgebraData, a: &LieValued, b: &LieValued) -> Result<Poly, AlgebraError> {
    if a.dim() != lie.dim || b.dim() != lie.dim {
        return Err(AlgebraError::LieMismatch(format!("{} vs {}/{}", lie.dim, a.dim(), b.dim())));
    }
    let mut out = Poly::zero();
    for i in 0..lie.dim {
        for j in 0..lie.dim {
            let k = lie.kappa(i, j);
            if !k.is_zero() {
                out += (&a.0[i] * &b.0[j]).scale(k);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::generator::{Generator, Role};

    fn ghost(dim: usize) -> LieValued {
        LieValued((0..dim).map(|a| Poly::gen(&Generator::coordinate(Role::Fiber, "C", vec![], Some(a as u16), 1))).collect())
    }

    fn even(name: &str, dim: usize) -> LieValued {
        LieValued((0..dim).map(|a| Poly::gen(&Generator::coordinate(Role::Fiber, name, vec![], Some(a as u16), 0))).collect())
    }

    #[test]
    fn su2_validates() {
        LieAlgebraData::su2().validate().unwrap();
    }

    #[test]
    fn abelian_bracket_vanishes() {
        let l = LieAlgebraData::abelian("u1", 2);
        assert!(lie_bracket(&l, &ghost(2), &ghost(2)).unwrap().is_zero());
    }

    #[test]
    fn su2_ghost_bracket() {
        let l = LieAlgebraData::su2();
        let c = ghost(3);
        let b = lie_bracket(&l, &c, &c).unwrap();
        // [C,C]^1 = eps_{123} C^2 C^3 + eps_{132} C^3 C^2 = 2 C^2 C^3
        assert_eq!(b.0[0], (&c.0[1] * &c.0[2]).scale(&qi(2)));
    }

    #[test]
    fn su2_even_odd_bracket_antisymmetric() {
        let l = LieAlgebraData::su2();
        let f = even("F", 3);
        let c = ghost(3);
        let fc = lie_bracket(&l, &f, &c).unwrap();
        let cf = lie_bracket(&l, &c, &f).unwrap();
        assert_eq!(fc, cf.scale(&qi(-1)));
        assert_eq!(fc.0[0], &(&f.0[1] * &c.0[2]) - &(&f.0[2] * &c.0[1]));
    }

    #[test]
    fn trace_examples() {
        let l = LieAlgebraData::su2();
        let c = ghost(3);
        let cc = lie_bracket(&l, &c, &c).unwrap();
        let t = trace_pair(&l, &cc, &c).unwrap();
        // brute force: Tr([C,C]C) = sum_a 2 eps_{abc} C^b C^c C^a restricted = 6 C^1C^2C^3
        let c123 = &(&c.0[0] * &c.0[1]) * &c.0[2];
        assert_eq!(t, c123.scale(&qi(6)));
        let f = even("F", 3);
        assert!(trace_pair(&l, &f, &lie_bracket(&l, &f, &f).unwrap()).unwrap().is_zero());
        assert!(lie_bracket(&l, &f, &f).unwrap().is_zero());
    }

    #[test]
    fn broken_jacobi_rejected() {
        let mut f = vec![Q::zero(); 8];
        // dim 2, f^1_{12} = 1, f^2_{12} = 1 is a valid 2d algebra; kappa must fail invariance
        f[1] = qi(1);
        f[2] = qi(-1);
        let kappa = vec![qi(1), Q::zero(), Q::zero(), qi(1)];
        assert!(LieAlgebraData::new("b", 2, f, kappa).is_err());
    }
}
