//! Vector fields, the de Rham differential, interior products and Lie
//! derivatives on graded differential forms.
//!
//! Conventions: a differential `dc` has the ghost degree of `c` and form
//! degree 1, so its parity is `gh(c) + 1`. `d` is an odd derivation acting
//! from the left. `i_V` has parity `p(V) + 1` and sends `dc` to `V(c)`. The
//! Lie derivative is the graded commutator `L_V = [i_V, d]`, so that
//! `L_V f = V f` on functions. Every other identity (`[L_V, d] = 0`,
//! `[L_V, i_W] = i_{[V,W]}`, `[L_V, L_W] = L_{[V,W]}`) follows and is
//! checked by the property suite.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Generator, GhostDegree, Poly, Q};

/// A derivation given by its values on coordinates; unlisted coordinates
/// are annihilated.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct VectorField {
    pub gh: GhostDegree,
    coeffs: BTreeMap<Generator, Poly>,
}

impl VectorField {
    pub fn new(gh: GhostDegree) -> Self {
        VectorField { gh, coeffs: BTreeMap::new() }
    }

    pub fn from_map(gh: GhostDegree, coeffs: BTreeMap<Generator, Poly>) -> Self {
        let mut v = VectorField::new(gh);
        for (g, p) in coeffs {
            v.set(g, p);
        }
        v
    }

    pub fn is_odd(&self) -> bool {
        self.gh.rem_euclid(2) == 1
    }

    /// Assign the component along coordinate `c`.
    pub fn set(&mut self, c: Generator, p: Poly) {
        debug_assert!(!c.is_differential());
        if p.is_zero() {
            self.coeffs.remove(&c);
        } else {
            self.coeffs.insert(c, p);
        }
    }

    pub fn get(&self, c: &Generator) -> Option<&Poly> {
        self.coeffs.get(c)
    }

    pub fn component(&self, c: &Generator) -> Poly {
        self.coeffs.get(c).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Generator, &Poly)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Q) -> VectorField {
        VectorField::from_map(self.gh, self.coeffs.iter().map(|(g, p)| (g.clone(), p.scale(c))).collect())
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        let mut out = self.clone();
        for (g, p) in &other.coeffs {
            let sum = &out.component(g) + p;
            out.set(g.clone(), sum);
        }
        out
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        let mut out = self.clone();
        for (g, p) in &other.coeffs {
            let diff = &out.component(g) - p;
            out.set(g.clone(), diff);
        }
        out
    }

    /// Components violating `gh(V c) = gh(V) + gh(c)`.
    pub fn degree_defects(&self) -> Vec<Generator> {
        self.coeffs.iter().filter(|(c, p)| p.terms().any(|(m, _)| m.gh() != self.gh + c.gh())).map(|(c, _)| c.clone()).collect()
    }

    /// Act on a function. Differentials in `f` are treated as constants;
    /// use [`lie_derivative`] for forms.
    pub fn apply(&self, f: &Poly) -> Poly {
        f.derive(self.is_odd(), &|g| if g.is_differential() { None } else { self.coeffs.get(g).cloned() })
    }

    /// Map each component through `f` (same gh).
    pub fn map_components(&self, f: impl Fn(&Poly) -> Poly) -> VectorField {
        VectorField::from_map(self.gh, self.coeffs.iter().map(|(g, p)| (g.clone(), f(p))).collect())
    }

    /// Keep only components along coordinates satisfying `pred`.
    pub fn restrict(&self, pred: impl Fn(&Generator) -> bool) -> VectorField {
        VectorField::from_map(self.gh, self.coeffs.iter().filter(|(g, _)| pred(g)).map(|(g, p)| (g.clone(), p.clone())).collect())
    }

    /// Total number of terms over all components.
    pub fn term_count(&self) -> usize {
        self.coeffs.values().map(|p| p.len()).sum()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (g, p)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{} -> {}", g, p)?;
        }
        Ok(())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField(gh {}) {{{}}}", self.gh, self)
    }
}

/// The Euler field `sum_A c^A d/dc^A` over the given coordinates.
pub fn euler_field(coords: impl IntoIterator<Item = Generator>) -> VectorField {
    let mut e = VectorField::new(0);
    for c in coords {
        let p = Poly::gen(&c);
        e.set(c, p);
    }
    e
}

/// de Rham differential.
pub fn d(f: &Poly) -> Poly {
    f.derive(true, &|g| if g.is_differential() { None } else { Some(Poly::gen(&g.differential())) })
}

/// Interior product `i_V`.
pub fn interior(v: &VectorField, f: &Poly) -> Poly {
    f.derive(!v.is_odd(), &|g| if g.is_differential() { v.get(&g.coordinate_of()).cloned() } else { None })
}

/// Lie derivative `L_V = [i_V, d] = i_V d - (-1)^{p(i_V)} d i_V`.
pub fn lie_derivative(v: &VectorField, f: &Poly) -> Poly {
    let idf = interior(v, &d(f));
    let dif = d(&interior(v, f));
    // parity of i_V is p(V) + 1
    if v.is_odd() {
        idf - dif
    } else {
        idf + dif
    }
}

/// Graded commutator `[V, W] = V W - (-1)^{p(V)p(W)} W V`.
pub fn vf_commutator(v: &VectorField, w: &VectorField) -> VectorField {
    let mut keys: Vec<Generator> = v.coeffs.keys().cloned().collect();
    keys.extend(w.coeffs.keys().cloned());
    keys.sort();
    keys.dedup();
    let sign_neg = v.is_odd() && w.is_odd();
    let mut out = VectorField::new(v.gh + w.gh);
    for c in keys {
        let vw = v.apply(&w.component(&c));
        let wv = w.apply(&v.component(&c));
        let val = if sign_neg { vw + wv } else { vw - wv };
        out.set(c, val);
    }
    out
}

/// Membership in the ideal generated by `dx^a`, `dtheta^a`. Returns the
/// residual of terms free of base differentials.
pub fn in_ideal(f: &Poly) -> (bool, Poly) {
    let residual = f.filter(|m| !m.contains(|g| g.is_base_differential()));
    (residual.is_zero(), residual)
}

/// Graded commutator of two operators on forms with given parities.
pub fn op_commutator(a: &dyn Fn(&Poly) -> Poly, a_odd: bool, b: &dyn Fn(&Poly) -> Poly, b_odd: bool, f: &Poly) -> Poly {
    let ab = a(&b(f));
    let ba = b(&a(f));
    if a_odd && b_odd {
        ab + ba
    } else {
        ab - ba
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{base_theta, base_x, qi, Role};

    fn x(a: u8) -> Poly {
        Poly::gen(&base_x(a))
    }
    fn th(a: u8) -> Poly {
        Poly::gen(&base_theta(a))
    }

    fn dx_field() -> VectorField {
        // d_X = theta^a d/dx^a in n = 2
        let mut q = VectorField::new(1);
        for a in 0..2 {
            q.set(base_x(a), th(a));
        }
        q
    }

    #[test]
    fn d_of_product_and_nilpotency() {
        let f = &x(0) * &th(0);
        let df = d(&f);
        let dx0 = Poly::gen(&base_x(0).differential());
        let dth0 = Poly::gen(&base_theta(0).differential());
        // d(x0 theta0) = dx0 theta0 + x0 dtheta0  (x0 even, no sign)
        assert_eq!(df, &(&dx0 * &th(0)) + &(&x(0) * &dth0));
        assert!(d(&df).is_zero());
        let c = Generator::coordinate(Role::Fiber, "C", vec![], Some(0), 1);
        assert!(d(&d(&Poly::gen(&c))).is_zero());
    }

    #[test]
    fn interior_and_lie_on_base() {
        let q = dx_field();
        let dx0 = Poly::gen(&base_x(0).differential());
        assert_eq!(interior(&q, &dx0), th(0));
        assert!(interior(&q, &x(0)).is_zero());
        let dth0 = Poly::gen(&base_theta(0).differential());
        // odd V: L_V dc = -d(V c)
        assert_eq!(lie_derivative(&q, &dx0), -dth0);
        assert_eq!(lie_derivative(&q, &x(1)), th(1));
    }

    #[test]
    fn ideal_membership() {
        let dx0 = Poly::gen(&base_x(0).differential());
        let c = Generator::coordinate(Role::Fiber, "C", vec![], Some(0), 1);
        let (ok, r) = in_ideal(&(&dx0 * &Poly::gen(&c)));
        assert!(ok && r.is_zero());
        let dc = Poly::gen(&c.differential());
        let (ok, r) = in_ideal(&dc);
        assert!(!ok);
        assert_eq!(r, dc);
    }

    #[test]
    fn even_field_self_commutator_vanishes() {
        let mut v = VectorField::new(0);
        v.set(base_x(0), &x(0) * &x(1));
        v.set(base_x(1), x(0));
        assert!(vf_commutator(&v, &v).is_zero());
        let e = euler_field([base_x(0)]);
        assert_eq!(e.apply(&(&x(0) * &x(0))), (&x(0) * &x(0)).scale(&qi(2)));
    }
}
