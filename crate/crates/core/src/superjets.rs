//! Truncated super-jets: jet coordinates `psi_{I|J}`, the horizontal
//! differential `D = theta^a D_a`, the vertical part `s` of the prolonged
//! `Q`, lifted forms, the descent tower and the BV identities.
//!
//! A supersection is expanded as `psi(theta) = sum_J theta^J psi_{|J}` over
//! strictly increasing `J`, with `theta^J` in increasing order. `s` and `D`
//! are computed exactly on demand; jets of order above `N` are only
//! separated out when residuals are reported. Anything requiring jets of
//! order above `N + 2` is refused.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::One;

use crate::algebra::{base_theta, Generator, GhostDegree, Monomial, Poly, Role, Q};
use crate::cartan::{d, in_ideal};
use crate::error::{Error, Result};
use crate::gauge_pde::{solve_hamiltonian, subsets, Model};
use crate::report::Check;

/// `psi_{I|J}` with `I` sorted and `J` strictly increasing (caller's duty).
pub fn jet(psi: &Generator, i: &[u8], j: &[u8]) -> Generator {
    let mut i = i.to_vec();
    i.sort_unstable();
    psi.coordinate_of().with_jet(Role::Jet, i, j.to_vec(), psi.gh() - j.len() as GhostDegree)
}

fn is_jet(g: &Generator) -> bool {
    g.role() == Role::Jet
}

/// Order `|I|` of a jet coordinate or its differential.
pub fn jet_order(g: &Generator) -> usize {
    if is_jet(g) {
        g.dx().len()
    } else {
        0
    }
}

/// Highest jet order occurring in `p`.
pub fn max_order(p: &Poly) -> usize {
    p.generators().iter().map(jet_order).max().unwrap_or(0)
}

fn theta_degree(m: &Monomial) -> usize {
    m.factors().iter().filter(|(g, _)| g.role() == Role::BaseTheta && !g.is_differential()).count()
}

/// Split by the number of theta factors.
pub fn theta_components(f: &Poly) -> BTreeMap<usize, Poly> {
    let mut out: BTreeMap<usize, Poly> = BTreeMap::new();
    for (m, c) in f.terms() {
        out.entry(theta_degree(m)).or_default().add_term(m.clone(), c.clone());
    }
    out
}

/// Drop every term containing `dx` or `dtheta`.
pub fn vertical_part(f: &Poly) -> Poly {
    in_ideal(f).1
}

/// Vertical differential.
pub fn d_v(f: &Poly) -> Poly {
    vertical_part(&d(f))
}

/// Total derivative `D_a` (even).
pub fn total_derivative(a: u8, p: &Poly) -> Poly {
    p.derive(false, &|g| {
        if g.is_differential() {
            return None;
        }
        match g.role() {
            Role::Jet => {
                let mut i = g.dx().to_vec();
                i.push(a);
                Some(Poly::gen(&g.with_jet(Role::Jet, sorted(i), g.dth().to_vec(), g.gh())))
            }
            Role::BaseX if g.slots() == [a] => Some(Poly::one()),
            _ => None,
        }
    })
}

fn sorted(mut v: Vec<u8>) -> Vec<u8> {
    v.sort_unstable();
    v
}

fn theta_mono(j: &[u8]) -> Poly {
    j.iter().fold(Poly::one(), |acc, &a| &acc * &Poly::gen(&base_theta(a)))
}

pub struct JetModel {
    pub model: Model,
    pub order: usize,
    s0: BTreeMap<Generator, Poly>,
    cache: Mutex<HashMap<Generator, Poly>>,
    lift_map: BTreeMap<Generator, Poly>,
    pub chi_bar: Option<Poly>,
    pub omega_bar: Option<Poly>,
    pub l_bar: Option<Poly>,
}

/// Build the order-`N` super-jet model.
pub fn prolong(m: &Model, order: usize) -> Result<JetModel> {
    if order == 0 {
        return Err(Error::InvalidOrder(order));
    }
    let dirs = &m.dirs;
    let js = subsets(dirs);
    let mut lift_map = BTreeMap::new();
    for f in &m.fibers {
        let u: Poly = js.iter().map(|j| &theta_mono(j) * &Poly::gen(&jet(f, &[], j))).sum();
        lift_map.insert(f.differential(), d(&u));
        lift_map.insert(f.clone(), u);
    }
    let mut jm = JetModel {
        model: m.clone(),
        order,
        s0: BTreeMap::new(),
        cache: Mutex::new(HashMap::new()),
        lift_map,
        chi_bar: None,
        omega_bar: None,
        l_bar: None,
    };
    for f in &m.fibers {
        let qa = jm.lift(&m.q.component(f));
        let mut hor = Poly::zero();
        for &a in dirs {
            let du: Poly = js.iter().map(|j| &theta_mono(j) * &Poly::gen(&jet(f, &[a], j))).sum();
            hor += &Poly::gen(&base_theta(a)) * &du;
        }
        let r = qa - hor;
        let mut by_j: BTreeMap<Vec<u8>, Poly> = BTreeMap::new();
        for (mono, c) in r.terms() {
            let (th, rest, neg) = mono.split(|g| g.role() == Role::BaseTheta && !g.is_differential());
            let j: Vec<u8> = th.generators().map(|g| g.slots()[0]).collect();
            let mut c = c.clone();
            if neg ^ (j.len() % 2 == 1) {
                c = -c;
            }
            by_j.entry(j).or_default().add_term(rest, c);
        }
        for j in &js {
            let v = by_j.remove(j).unwrap_or_default();
            jm.s0.insert(jet(f, &[], j), v);
        }
    }
    if let Some(chi) = &m.chi {
        let cb = jm.lift(chi);
        jm.omega_bar = Some(d(&cb));
        jm.chi_bar = Some(cb);
        jm.l_bar = Some(jm.lift(&solve_hamiltonian(m)?));
    }
    Ok(jm)
}

impl JetModel {
    pub fn dirs(&self) -> &[u8] {
        &self.model.dirs
    }

    pub fn cap(&self) -> usize {
        self.order + 2
    }

    /// `Pi^*`: fibers to their theta-expansions.
    pub fn lift(&self, f: &Poly) -> Poly {
        f.substitute(&|g| self.lift_map.get(g).cloned())
    }

    /// Jet coordinates of order at most `N` (for reporting).
    pub fn coordinates(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        for f in &self.model.fibers {
            for i in multi_indices(self.dirs(), self.order) {
                for j in subsets(self.dirs()) {
                    out.push(jet(f, &i, &j));
                }
            }
        }
        out
    }

    fn guard(&self, p: &Poly, extra: usize) -> Result<()> {
        let needed = max_order(p) + extra;
        if needed > self.cap() {
            return Err(Error::TruncationOverflow { order: self.order, needed });
        }
        Ok(())
    }

    /// `s` on a jet coordinate.
    pub fn s_of(&self, g: &Generator) -> Poly {
        if !is_jet(g) {
            return Poly::zero();
        }
        if g.dx().is_empty() {
            return self.s0.get(g).cloned().unwrap_or_default();
        }
        if let Some(p) = self.cache.lock().expect("cache").get(g) {
            return p.clone();
        }
        let base = g.with_jet(Role::Jet, Vec::new(), g.dth().to_vec(), g.gh());
        let mut p = self.s0.get(&base).cloned().unwrap_or_default();
        for &a in g.dx() {
            p = total_derivative(a, &p);
        }
        self.cache.lock().expect("cache").insert(g.clone(), p.clone());
        p
    }

    /// `D psi_{I|J} = theta^a psi_{aI|J}`, `D x^a = theta^a`.
    pub fn d_of(&self, g: &Generator) -> Option<Poly> {
        match g.role() {
            Role::Jet => Some(self.dirs().iter().map(|&a| &Poly::gen(&base_theta(a)) * &total_derivative(a, &Poly::gen(g))).sum()),
            Role::BaseX => Some(Poly::gen(&base_theta(g.slots()[0]))),
            _ => None,
        }
    }

    pub fn apply_s(&self, p: &Poly) -> Result<Poly> {
        self.guard(p, 1)?;
        Ok(p.derive(true, &|g| if g.is_differential() { None } else { Some(self.s_of(g)) }))
    }

    pub fn apply_d(&self, p: &Poly) -> Result<Poly> {
        self.guard(p, 1)?;
        Ok(p.derive(true, &|g| if g.is_differential() { None } else { self.d_of(g) }))
    }

    /// `L_D` on vertical forms: `D` on coefficients, `d psi_{I|J} -> theta^a d psi_{aI|J}`.
    pub fn lie_d(&self, f: &Poly) -> Result<Poly> {
        self.guard(f, 1)?;
        Ok(vertical_part(&f.derive(true, &|g| {
            if !g.is_differential() {
                return self.d_of(g);
            }
            let c = g.coordinate_of();
            if !is_jet(&c) {
                return None;
            }
            Some(self.dirs().iter().map(|&a| &Poly::gen(&base_theta(a)) * &d(&total_derivative(a, &Poly::gen(&c)))).sum())
        })))
    }

    /// `L_s` on vertical forms: `s` on coefficients, `d psi -> -d_v(s psi)`.
    pub fn lie_s(&self, f: &Poly) -> Result<Poly> {
        self.guard(f, 1)?;
        Ok(vertical_part(&f.derive(true, &|g| {
            if !g.is_differential() {
                return Some(self.s_of(g));
            }
            let c = g.coordinate_of();
            is_jet(&c).then(|| -d_v(&self.s_of(&c)))
        })))
    }

    /// `i_s`: `d psi -> s psi`.
    pub fn interior_s(&self, f: &Poly) -> Result<Poly> {
        self.guard(f, 1)?;
        Ok(f.derive(false, &|g| if g.is_differential() && is_jet(g) { Some(self.s_of(&g.coordinate_of())) } else { None }))
    }

    /// `i_D`: `dx^a -> theta^a`, `d psi -> D psi`, `dtheta -> 0`.
    pub fn interior_d(&self, f: &Poly) -> Result<Poly> {
        self.guard(f, 1)?;
        Ok(f.derive(false, &|g| if g.is_differential() { self.d_of(&g.coordinate_of()) } else { None }))
    }

    fn window(&self, name: String, residual: Poly) -> Check {
        let n = self.order;
        Check::windowed(name, residual, |m| m.generators().any(|g| jet_order(g) > n))
    }

    /// `(D + s)^2 = 0` and `[D, s] = 0` on the order-0 jet coordinates.
    pub fn check_structure(&self) -> Result<Vec<Check>> {
        let mut comm = Poly::zero();
        let mut ss = Poly::zero();
        for f in &self.model.fibers {
            for j in subsets(self.dirs()) {
                let g = Poly::gen(&jet(f, &[], &j));
                comm += self.apply_d(&self.apply_s(&g)?)? + self.apply_s(&self.apply_d(&g)?)?;
                ss += self.apply_s(&self.apply_s(&g)?)?;
            }
        }
        let c = self.window("s^2 = 0".into(), ss);
        Ok(vec![self.window("[D, s] = 0".into(), comm), if self.model.weak { c.informational() } else { c }])
    }

    fn omega_v(&self) -> Result<Poly> {
        self.omega_bar.as_ref().map(vertical_part).ok_or(Error::NoPresymplecticPotential)
    }

    /// `L_s omega^(k) + L_D omega^(k-1) = 0` for every theta-degree `k`.
    pub fn check_descent(&self) -> Result<Vec<Check>> {
        let comps = theta_components(&self.omega_v()?);
        let top = self.dirs().len();
        let mut out = Vec::new();
        for k in 0..=top + 1 {
            let mut r = match comps.get(&k) {
                Some(w) => self.lie_s(w)?,
                None => Poly::zero(),
            };
            if k > 0 {
                if let Some(w) = comps.get(&(k - 1)) {
                    r += self.lie_d(w)?;
                }
            }
            out.push(self.window(format!("descent k = {k}"), r));
        }
        Ok(out)
    }

    fn hamiltonian_density(&self) -> Result<Poly> {
        let chi = self.chi_bar.as_ref().ok_or(Error::NoPresymplecticPotential)?;
        let l = self.l_bar.as_ref().ok_or(Error::MissingHamiltonian)?;
        Ok(&self.interior_d(chi)? + l)
    }

    /// (i) `i_s omega^v = -d_v(L + i_D chi) - L_D chi^v` and (ii) `1/2 i_s i_s omega = D(i_D chi + L)`.
    pub fn check_bv_identities(&self) -> Result<Vec<Check>> {
        let omega = self.omega_bar.as_ref().ok_or(Error::NoPresymplecticPotential)?;
        let chi_v = vertical_part(self.chi_bar.as_ref().ok_or(Error::NoPresymplecticPotential)?);
        let h = self.hamiltonian_density()?;
        let r1 = &(&self.interior_s(&self.omega_v()?)? + &d_v(&h)) + &self.lie_d(&chi_v)?;
        let half = Q::one() / Q::from_integer(2.into());
        let r2 = self.interior_s(&self.interior_s(omega)?)?.scale(&half) - self.apply_d(&h)?;
        Ok(vec![self.window("i_s omega^v = -d_v(L + i_D chi) - L_D chi^v".into(), r1), self.window("1/2 i_s i_s omega = D(i_D chi + L)".into(), r2)])
    }

    /// Top theta-component of `L + i_D chi`.
    pub fn bv_lagrangian(&self) -> Result<Poly> {
        let h = self.hamiltonian_density()?;
        Ok(theta_components(&h).remove(&self.dirs().len()).unwrap_or_default())
    }
}

/// Sorted multi-indices over `dirs` of length at most `max`.
pub fn multi_indices(dirs: &[u8], max: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for i in &layer {
            for &a in dirs {
                if i.last().is_none_or(|&l| l <= a) {
                    let mut v = i.clone();
                    v.push(a);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_and_vertical() {
        let t0 = Poly::gen(&base_theta(0));
        let t1 = Poly::gen(&base_theta(1));
        let f = &(&t0 * &t1) + &t0;
        let c = theta_components(&f);
        assert_eq!(c[&1], t0);
        assert_eq!(c[&2], &t0 * &t1);
        assert_eq!(theta_components(&Poly::int(3))[&0], Poly::int(3));
        let dx = Poly::gen(&crate::algebra::base_x(0).differential());
        assert!(vertical_part(&(&dx * &t0)).is_zero());
        let v = vertical_part(&f);
        assert_eq!(vertical_part(&v), v);
    }

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(&[0, 1], 2), vec![vec![], vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn order_zero_rejected() {
        let m = Model::empty("e", 1);
        assert!(matches!(prolong(&m, 0), Err(Error::InvalidOrder(0))));
    }
}
