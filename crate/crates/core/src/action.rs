//! Action densities on sections, restriction to a submanifold of the base,
//! ghost sectors, equivalence up to total derivatives, and the boundary
//! pipeline producing the symplectic quotient and its charge.

use std::collections::BTreeSet;

use crate::algebra::{base_theta, Generator, Poly, Role, Q};
use crate::error::{Error, Result};
use crate::gauge_pde::{d_x, partial, solve_hamiltonian, Model, Section};
use crate::reduction::{reduce, PresymplecticMatrix, ReducedModel};
use crate::report::Check;
use crate::superjets::{jet_order, prolong, theta_components, vertical_part, JetModel};

/// Set `x^a`, `theta^a` and their differentials to zero for `a` in `kill`.
pub fn restrict_to_submanifold(m: &Model, kill: &[u8]) -> Result<(Model, Vec<Check>)> {
    let mut seen = BTreeSet::new();
    for &a in kill {
        if !m.dirs.contains(&a) || !seen.insert(a) {
            return Err(Error::InvalidSubmanifold(format!("direction {a} is repeated or not a base direction")));
        }
    }
    let killed = |g: &Generator| matches!(g.role(), Role::BaseX | Role::BaseTheta) && kill.contains(&g.slots()[0]);
    let restrict = |p: &Poly| p.substitute(&|g| killed(g).then(Poly::zero));
    let mut r = m.clone();
    r.dirs.retain(|a| !kill.contains(a));
    let mut checks = Vec::new();
    let mut q = crate::cartan::VectorField::new(m.q.gh);
    for (g, v) in m.q.components() {
        let v = restrict(v);
        if killed(g) {
            checks.push(Check::zero(format!("Q {g} vanishes on the locus"), v));
        } else {
            q.set(g.clone(), v);
        }
    }
    r.q = q;
    r.chi = m.chi.as_ref().map(restrict);
    if !kill.is_empty() {
        let k: Vec<String> = kill.iter().map(|a| a.to_string()).collect();
        r.name = format!("{}|{}", m.name, k.join(","));
    }
    Ok((r, checks))
}

/// Coefficient of `theta^{dirs}` (increasing order, thetas moved left).
pub fn theta_top(dirs: &[u8], f: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in f.terms() {
        let (th, rest, neg) = m.split(|g| g.role() == Role::BaseTheta && !g.is_differential());
        let idx: Vec<u8> = th.generators().map(|g| g.slots()[0]).collect();
        if idx == dirs {
            out.add_term(rest, if neg { -c.clone() } else { c.clone() });
        }
    }
    out
}

/// `sigma^*(chi)(d_X) + sigma^*(L)`, top theta coefficient. Uses the full
/// supersection when `s` is `None`.
pub fn action_density(m: &Model, s: Option<&Section>) -> Result<Poly> {
    let chi = m.chi.as_ref().ok_or(Error::NoPresymplecticPotential)?;
    let l = solve_hamiltonian(m)?;
    let full;
    let s = match s {
        Some(s) => s,
        None => {
            full = Section::supersection(m);
            &full
        }
    };
    let value = |g: &Generator| s.map.get(g).cloned().unwrap_or_default();
    let pulled = chi.substitute(&|g| {
        if g.is_differential() {
            let c = g.coordinate_of();
            return Some(match c.role() {
                Role::BaseX => Poly::gen(&base_theta(c.slots()[0])),
                Role::BaseTheta => Poly::zero(),
                _ => d_x(&m.dirs, &value(&c)),
            });
        }
        m.fibers.contains(g).then(|| value(g))
    });
    Ok(theta_top(&m.dirs, &(pulled + s.pullback(m, &l))))
}

/// Terms of total ghost degree `g`.
pub fn ghost_sector(density: &Poly, g: i32) -> Poly {
    density.filter(|m| m.gh() == g)
}

/// Terms built only from fields of ghost degree zero.
pub fn physical_part(density: &Poly) -> Poly {
    density.filter(|m| m.generators().all(|g| g.role() != Role::FieldSymbol || g.gh() == 0))
}

fn underived(g: &Generator) -> Generator {
    g.with_jet(Role::FieldSymbol, Vec::new(), g.dth().to_vec(), g.gh())
}

/// Euler-Lagrange expressions `sum_I (-D)_I d/d phi_I` per underived field.
pub fn euler_lagrange(f: &Poly) -> Vec<(Generator, Poly)> {
    let syms: BTreeSet<Generator> = f.generators().into_iter().filter(|g| g.role() == Role::FieldSymbol && !g.is_differential()).collect();
    let bases: BTreeSet<Generator> = syms.iter().map(underived).collect();
    bases
        .into_iter()
        .map(|phi| {
            let mut e = Poly::zero();
            for s in syms.iter().filter(|s| underived(s) == phi) {
                let mut t = f.derive(s.is_odd(), &|g| (g == s).then(Poly::one));
                for &a in s.dx() {
                    t = -partial(a, &t);
                }
                e += t;
            }
            (phi, e)
        })
        .collect()
}

/// Equal up to a total derivative.
pub fn el_equivalent(a: &Poly, b: &Poly) -> bool {
    euler_lagrange(&(a - b)).iter().all(|(_, e)| e.is_zero())
}

/// The scalar `lambda` with `a ~ lambda b` up to total derivatives.
pub fn el_proportional(a: &Poly, b: &Poly) -> Option<Q> {
    let ea = euler_lagrange(a);
    let eb = euler_lagrange(b);
    let (_, first) = eb.iter().find(|(_, e)| !e.is_zero())?;
    let (phi, _) = eb.iter().find(|(_, e)| e == first)?;
    let ref_a = ea.iter().find(|(p, _)| p == phi).map(|(_, e)| e.clone()).unwrap_or_default();
    let lambda = ref_a.proportionality(first)?;
    el_equivalent(a, &b.scale(&lambda)).then_some(lambda)
}

pub struct Boundary {
    pub restricted: Model,
    pub tangency: Vec<Check>,
    pub jets: JetModel,
    /// Top theta part of the vertical prolonged 2-form, thetas stripped.
    pub form: Poly,
    pub reduced: ReducedModel,
    pub charge: Poly,
}

/// Restrict, prolong, take the top vertical 2-form, reduce, and evaluate
/// the charge density on the restricted model.
pub fn boundary(m: &Model, kill: &[u8], order: usize) -> Result<Boundary> {
    let (restricted, tangency) = restrict_to_submanifold(m, kill)?;
    let jets = prolong(&restricted, order)?;
    let omega = jets.omega_bar.as_ref().ok_or(Error::NoPresymplecticPotential)?;
    let top = theta_components(&vertical_part(omega)).remove(&restricted.dim()).unwrap_or_default();
    let form = theta_top(&restricted.dirs, &top);
    let gens: Vec<Generator> = jets.coordinates().into_iter().filter(|g| jet_order(g) == 0).collect();
    let pm = PresymplecticMatrix::from_form(&form, gens);
    let reduced = reduce(&pm, None, None)?;
    let charge = action_density(&restricted, None)?;
    Ok(Boundary { restricted, tangency, jets, form, reduced, charge })
}
