//! Sparse graded-commutative polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::generator::{Generator, GhostDegree, Role};
use crate::error::AlgebraError;

/// Exact rational coefficient.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// A product of generators, sorted by the global generator order. Odd
/// generators appear with exponent 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Generator, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn single(g: Generator) -> Self {
        Monomial(vec![(g, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.0
    }

    /// Build from an unsorted list of factors; `None` if an odd generator repeats.
    pub fn from_factors(factors: &[(Generator, u32)]) -> Option<(Monomial, bool)> {
        let mut acc = Monomial::one();
        let mut neg = false;
        for (g, e) in factors {
            if *e == 0 {
                continue;
            }
            if g.is_odd() && *e > 1 {
                return None;
            }
            let (m, n) = acc.mul(&Monomial(vec![(g.clone(), *e)]))?;
            acc = m;
            neg ^= n;
        }
        Some((acc, neg))
    }

    pub fn is_odd(&self) -> bool {
        self.0.iter().filter(|(g, e)| g.is_odd() && e % 2 == 1).count() % 2 == 1
    }

    pub fn gh(&self) -> GhostDegree {
        self.0.iter().map(|(g, e)| g.gh() * *e as i32).sum()
    }

    pub fn fdeg(&self) -> u32 {
        self.0.iter().map(|(g, e)| g.fdeg() as u32 * e).sum()
    }

    pub fn degree_in(&self, pred: impl Fn(&Generator) -> bool) -> u32 {
        self.0.iter().filter(|(g, _)| pred(g)).map(|(_, e)| *e).sum()
    }

    pub fn contains(&self, pred: impl Fn(&Generator) -> bool) -> bool {
        self.0.iter().any(|(g, _)| pred(g))
    }

    pub fn exponent_of(&self, g: &Generator) -> u32 {
        self.0.iter().find(|(h, _)| h == g).map(|(_, e)| *e).unwrap_or(0)
    }

    /// Koszul product. Returns the product and whether a sign flip occurred,
    /// or `None` if an odd generator would appear twice.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        if other.0.is_empty() {
            return Some((self.clone(), false));
        }
        if self.0.is_empty() {
            return Some((other.clone(), false));
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let mut odd_left: usize = self.0.iter().filter(|(g, _)| g.is_odd()).count();
        let mut neg = false;
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = &self.0[i];
            let (b, eb) = &other.0[j];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    if a.is_odd() {
                        odd_left -= 1;
                    }
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    if b.is_odd() && odd_left % 2 == 1 {
                        neg = !neg;
                    }
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if a.is_odd() {
                        return None;
                    }
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Some((Monomial(out), neg))
    }

    /// Split into the factors satisfying `pred` (moved to the left, keeping
    /// order) and the rest. Returns the sign of the reordering.
    pub fn split(&self, pred: impl Fn(&Generator) -> bool) -> (Monomial, Monomial, bool) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut neg = false;
        let mut odd_right = 0usize;
        for (g, e) in &self.0 {
            if pred(g) {
                if g.is_odd() && e % 2 == 1 && odd_right % 2 == 1 {
                    neg = !neg;
                }
                left.push((g.clone(), *e));
            } else {
                if g.is_odd() && e % 2 == 1 {
                    odd_right += 1;
                }
                right.push((g.clone(), *e));
            }
        }
        (Monomial(left), Monomial(right), neg)
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.0.iter().map(|(g, _)| g)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|(g, e)| if *e == 1 { g.to_string() } else { format!("{}^{}", g, e) }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Canonical sparse polynomial (also used for differential forms).
#[derive(Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(qi(n))
    }

    pub fn gen(g: &Generator) -> Self {
        Poly::term(Monomial::single(g.clone()), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Q)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// The constant term.
    pub fn constant_part(&self) -> Q {
        self.coefficient(&Monomial::one())
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    /// Koszul parity; `None` for parity-inhomogeneous polys.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|m| m.is_odd());
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Parity, treating zero as even. Panics on inhomogeneous input.
    pub fn is_odd(&self) -> bool {
        match self.parity() {
            Some(p) => p,
            None if self.is_zero() => false,
            None => panic!("parity of an inhomogeneous element: {}", self),
        }
    }

    /// Ghost degree if homogeneous.
    pub fn gh(&self) -> Option<GhostDegree> {
        let mut it = self.terms.keys().map(|m| m.gh());
        let first = it.next()?;
        it.all(|g| g == first).then_some(first)
    }

    pub fn fdeg(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.fdeg());
        let first = it.next()?;
        it.all(|g| g == first).then_some(first)
    }

    pub fn filter(&self, pred: impl Fn(&Monomial) -> bool) -> Poly {
        Poly { terms: self.terms.iter().filter(|(m, _)| pred(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn generators(&self) -> std::collections::BTreeSet<Generator> {
        self.terms.keys().flat_map(|m| m.generators().cloned()).collect()
    }

    /// Product that rejects generators from two different models.
    pub fn try_mul(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        let scopes: std::collections::BTreeSet<u64> =
            self.generators().into_iter().chain(other.generators()).map(|g| g.scope()).filter(|s| *s != 0).collect();
        if scopes.len() > 1 {
            return Err(AlgebraError::ForeignGenerator(format!("{:?}", scopes)));
        }
        Ok(self * other)
    }

    /// Apply the algebra morphism determined by `map` on generators
    /// (generators mapped to `None` are kept). The images must have the
    /// parity of their preimages.
    pub fn substitute(&self, map: &dyn Fn(&Generator) -> Option<Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for (g, e) in m.factors() {
                let img = map(g).unwrap_or_else(|| Poly::gen(g));
                for _ in 0..*e {
                    acc = &acc * &img;
                    if acc.is_zero() {
                        break;
                    }
                }
                if acc.is_zero() {
                    break;
                }
            }
            out += acc;
        }
        out
    }

    /// Apply a derivation of the given parity which acts on generators by
    /// `on_gen` (returning `None` for zero). Leibniz rule with Koszul signs,
    /// acting from the left.
    pub fn derive(&self, odd: bool, on_gen: &dyn Fn(&Generator) -> Option<Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let f = m.factors();
            for i in 0..f.len() {
                let (g, e) = &f[i];
                let Some(img) = on_gen(g) else { continue };
                if img.is_zero() {
                    continue;
                }
                let prefix = Monomial(f[..i].to_vec());
                let sign_neg = odd && prefix.is_odd();
                let mut rest: Vec<(Generator, u32)> = Vec::with_capacity(f.len());
                if *e > 1 {
                    rest.push((g.clone(), e - 1));
                }
                rest.extend_from_slice(&f[i + 1..]);
                let mut coeff = c * qi(*e as i64);
                if sign_neg {
                    coeff = -coeff;
                }
                let left = Poly::term(prefix, coeff);
                let right = Poly::term(Monomial(rest), Q::one());
                out += &(&left * &img) * &right;
            }
        }
        out
    }

    /// Terms containing a base differential `dx^a` or `dtheta^a`.
    pub fn base_differential_part(&self) -> Poly {
        self.filter(|m| m.contains(|g| g.is_base_differential()))
    }

    pub fn max_abs_coefficient(&self) -> Q {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Q::zero)
    }

    /// `Some(lambda)` with `self == lambda * other`, when both are nonzero and proportional.
    pub fn proportionality(&self, other: &Poly) -> Option<Q> {
        let (m, c) = other.terms.iter().next()?;
        let lambda = self.coefficient(m) / c;
        if lambda.is_zero() {
            return None;
        }
        (*self == other.scale(&lambda)).then_some(lambda)
    }

    pub fn latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let coeff = if a.is_one() && !m.is_one() {
                String::new()
            } else if a.denom().is_one() {
                a.numer().to_string()
            } else {
                format!("\\tfrac{{{}}}{{{}}}", a.numer(), a.denom())
            };
            s.push_str(&coeff);
            if !m.is_one() {
                let f: Vec<String> =
                    m.factors().iter().map(|(g, e)| if *e == 1 { g.latex() } else { format!("({})^{{{}}}", g.latex(), e) }).collect();
                if !coeff.is_empty() {
                    s.push_str("\\,");
                }
                s.push_str(&f.join("\\,"));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", a, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl AddAssign<Poly> for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        if self.terms.is_empty() {
            self.terms = rhs.terms;
            return;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        p += rhs;
        p
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += rhs;
        self
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        p -= rhs;
        p
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                if let Some((m, neg)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        let mut acc = Poly::zero();
        for p in iter {
            acc += p;
        }
        acc
    }
}

/// An unevaluated term tree; `normal_form` reduces it to a canonical `Poly`.
#[derive(Clone, Debug)]
pub enum Expr {
    Gen(Generator),
    Const(Q),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Scale(Q, Box<Expr>),
}

/// Canonical form of a term tree. Fails if generators of two models mix.
pub fn normal_form(e: &Expr) -> Result<Poly, AlgebraError> {
    Ok(match e {
        Expr::Gen(g) => Poly::gen(g),
        Expr::Const(c) => Poly::constant(c.clone()),
        Expr::Sum(v) => {
            let mut acc = Poly::zero();
            for x in v {
                acc += normal_form(x)?;
            }
            acc
        }
        Expr::Product(v) => {
            let mut acc = Poly::one();
            for x in v {
                acc = acc.try_mul(&normal_form(x)?)?;
            }
            acc
        }
        Expr::Scale(c, x) => normal_form(x)?.scale(c),
    })
}

/// Generators of the base `T[1]X`: `x^a` (gh 0) and `theta^a` (gh 1).
pub fn base_x(a: u8) -> Generator {
    Generator::coordinate(Role::BaseX, "x", vec![a], None, 0)
}

pub fn base_theta(a: u8) -> Generator {
    Generator::coordinate(Role::BaseTheta, "theta", vec![a], None, 1)
}
