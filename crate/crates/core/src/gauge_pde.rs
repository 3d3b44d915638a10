//! Gauge PDEs over `T[1]X`: the model type, projection and nilpotency
//! checks, presymplectic compatibility, the covariant Hamiltonian, and the
//! action of `Q` on field configurations.

use std::collections::BTreeMap;

use num_traits::One;

use crate::algebra::{base_theta, base_x, BackgroundTensors, Generator, GhostDegree, LieAlgebraData, Poly, Role, Q};
use crate::cartan::{d, euler_field, in_ideal, interior, lie_derivative, vf_commutator, VectorField};
use crate::error::{Error, Result};
use crate::report::Check;

/// Declared shape of an indexed fiber coordinate family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordDecl {
    pub name: String,
    pub slots: usize,
    pub antisym: bool,
    pub gh: GhostDegree,
    pub lie: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    /// Dimension of the original base, which fixes `eps` and ghost degrees.
    pub n: usize,
    /// Base directions present (all of `0..n` unless restricted).
    pub dirs: Vec<u8>,
    pub decls: Vec<CoordDecl>,
    pub fibers: Vec<Generator>,
    pub q: VectorField,
    pub chi: Option<Poly>,
    pub lie: Option<LieAlgebraData>,
    pub tensors: BackgroundTensors,
    pub metric_declared: bool,
    pub weak: bool,
    pub scope: u64,
}

impl Model {
    /// A model with the de Rham part of `Q` filled in and no fibers.
    pub fn empty(name: &str, n: usize) -> Self {
        let mut q = VectorField::new(1);
        for a in 0..n as u8 {
            q.set(base_x(a), Poly::gen(&base_theta(a)));
        }
        Model {
            name: name.to_string(),
            n,
            dirs: (0..n as u8).collect(),
            decls: Vec::new(),
            fibers: Vec::new(),
            q,
            chi: None,
            lie: None,
            tensors: BackgroundTensors::euclidean(n),
            metric_declared: false,
            weak: false,
            scope: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    pub fn lie_dim(&self) -> usize {
        self.lie.as_ref().map_or(0, |l| l.dim)
    }

    /// Look up a fiber coordinate; `lie` is 0-based.
    pub fn coord(&self, name: &str, slots: &[u8], lie: Option<u16>) -> Option<Generator> {
        self.fibers.iter().find(|g| g.name() == name && g.slots() == slots && g.lie() == lie).cloned()
    }

    pub fn x(&self, a: u8) -> Generator {
        base_x(a)
    }

    pub fn theta(&self, a: u8) -> Generator {
        base_theta(a)
    }

    pub fn base_coords(&self) -> Vec<Generator> {
        self.dirs.iter().flat_map(|&a| [base_x(a), base_theta(a)]).collect()
    }

    /// `omega = d chi`.
    pub fn omega(&self) -> Result<Poly> {
        self.chi.as_ref().map(d).ok_or(Error::NoPresymplecticPotential)
    }
}

/// `Q x^a = theta^a`, `Q theta^a = 0`.
pub fn check_projection(m: &Model) -> Vec<Check> {
    let mut out = Vec::new();
    for &a in &m.dirs {
        let rx = &m.q.component(&base_x(a)) - &Poly::gen(&base_theta(a));
        out.push(Check::zero(format!("projection Q x[{a}] = theta[{a}]"), rx));
        out.push(Check::zero(format!("projection Q theta[{a}] = 0"), m.q.component(&base_theta(a))));
    }
    out
}

/// Components of `Q` whose ghost degree is not `gh(c) + 1`.
pub fn check_degrees(m: &Model) -> Check {
    let bad = m.q.degree_defects();
    Check::boolean("ghost degree of Q", bad.is_empty())
}

/// `1/2 [Q, Q]`.
pub fn q_square(m: &Model) -> VectorField {
    vf_commutator(&m.q, &m.q).scale(&(Q::one() / Q::from_integer(2.into())))
}

pub fn check_nilpotency(m: &Model) -> Check {
    let qq = q_square(m);
    let residual: Poly = qq.components().map(|(_, p)| p.clone()).sum();
    let c = Check { residual_terms: qq.term_count(), pass: qq.is_zero(), ..Check::zero("Q^2 = 0", residual) };
    if m.weak {
        c.informational()
    } else {
        c
    }
}

/// The compatibility conditions of a (weak) presymplectic structure.
pub fn check_presymplectic(m: &Model) -> Result<Vec<Check>> {
    let omega = m.omega()?;
    let lq = lie_derivative(&m.q, &omega);
    let iqiq = interior(&m.q, &interior(&m.q, &omega));
    let iqlq = interior(&m.q, &lq);
    let mut out = vec![
        Check::zero("d omega = 0", d(&omega)),
        Check::zero("L_Q omega in I", in_ideal(&lq).1),
        Check::zero("i_Q i_Q omega = 0", iqiq),
        Check::zero("i_Q L_Q omega in I", in_ideal(&iqlq).1),
    ];
    if m.weak {
        let qq = q_square(m);
        out.push(Check::zero("i_{Q^2} omega in I", in_ideal(&interior(&qq, &omega)).1));
    }
    Ok(out)
}

/// The fiber Euler field.
pub fn fiber_euler(m: &Model) -> VectorField {
    euler_field(m.fibers.iter().cloned())
}

fn fiber_degree(mono: &crate::algebra::Monomial) -> u32 {
    mono.factors().iter().filter(|(g, _)| !g.is_base()).map(|(_, e)| *e).sum()
}

/// Covariant Hamiltonian: `L` with `i_Q omega + dL in I`, no fiber-independent part.
pub fn solve_hamiltonian(m: &Model) -> Result<Poly> {
    let omega = m.omega()?;
    let alpha = in_ideal(&interior(&m.q, &omega)).1;
    let e = fiber_euler(m);
    let mut by_degree: BTreeMap<u32, Poly> = BTreeMap::new();
    for (mono, c) in alpha.terms() {
        by_degree.entry(fiber_degree(mono)).or_default().add_term(mono.clone(), c.clone());
    }
    let mut l = Poly::zero();
    for (k, part) in by_degree {
        if k == 0 {
            continue;
        }
        l -= &interior(&e, &part).scale(&(Q::one() / Q::from_integer((k as i64).into())));
    }
    let residual = in_ideal(&(&d(&l) + &alpha)).1;
    if !residual.is_zero() {
        return Err(Error::NotExact(residual.len()));
    }
    Ok(l)
}

/// `i_Q omega + dL in I` and `Q L = 0` for a given `L`.
pub fn check_hamiltonian(m: &Model, l: &Poly) -> Result<Vec<Check>> {
    let omega = m.omega()?;
    let rel = &interior(&m.q, &omega) + &d(l);
    Ok(vec![Check::zero("i_Q omega + dL in I", in_ideal(&rel).1), Check::zero("Q L = 0", m.q.apply(l))])
}

/// A component field with a symmetric derivative multi-index.
pub fn field_symbol(base: &Generator, dth: &[u8], dx: &[u8]) -> Generator {
    let mut dx = dx.to_vec();
    dx.sort_unstable();
    base.coordinate_of().with_jet(Role::FieldSymbol, dx, dth.to_vec(), base.gh() - dth.len() as GhostDegree)
}

/// A named scalar field symbol such as a gauge parameter.
pub fn named_field(name: &str, lie: Option<u16>, gh: GhostDegree) -> Generator {
    Generator::coordinate(Role::FieldSymbol, name, vec![], lie, gh)
}

/// `d/dx^a` on field symbols and base coordinates.
pub fn partial(a: u8, p: &Poly) -> Poly {
    p.derive(false, &|g| match g.role() {
        Role::FieldSymbol if !g.is_differential() => {
            let mut dx = g.dx().to_vec();
            dx.push(a);
            dx.sort_unstable();
            Some(Poly::gen(&g.with_jet(Role::FieldSymbol, dx, g.dth().to_vec(), g.gh())))
        }
        Role::BaseX if g.slots() == [a] && !g.is_differential() => Some(Poly::one()),
        _ => None,
    })
}

/// `d_X = theta^a d/dx^a`.
pub fn d_x(dirs: &[u8], p: &Poly) -> Poly {
    dirs.iter().map(|&a| &Poly::gen(&base_theta(a)) * &partial(a, p)).sum()
}

/// A field configuration: fiber coordinate to an expression in field
/// symbols and thetas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Section {
    pub map: BTreeMap<Generator, Poly>,
}

impl Section {
    pub fn new() -> Self {
        Section::default()
    }

    pub fn set(&mut self, c: Generator, p: Poly) {
        self.map.insert(c, p);
    }

    /// Every assigned expression has the ghost degree of its coordinate.
    pub fn validate(&self) -> Result<()> {
        for (c, p) in &self.map {
            if p.terms().any(|(m, _)| m.gh() != c.gh()) {
                return Err(Error::GhostMismatch(format!("section value for {c} is not of ghost degree {}", c.gh())));
            }
        }
        Ok(())
    }

    /// `sigma^*`: fibers replaced, base coordinates kept, unassigned fibers sent to 0.
    pub fn pullback(&self, m: &Model, f: &Poly) -> Poly {
        f.substitute(&|g| {
            if g.is_differential() || g.is_base() {
                None
            } else if m.fibers.contains(g) {
                Some(self.map.get(g).cloned().unwrap_or_default())
            } else {
                None
            }
        })
    }

    /// The full supersection `psi -> sum_J theta^J psi_{|J}` over `dirs`.
    pub fn supersection(m: &Model) -> Section {
        let mut s = Section::new();
        for f in &m.fibers {
            let mut val = Poly::zero();
            for j in subsets(&m.dirs) {
                let mut t = Poly::one();
                for &a in &j {
                    t = &t * &Poly::gen(&base_theta(a));
                }
                val += &t * &Poly::gen(&field_symbol(f, &j, &[]));
            }
            s.set(f.clone(), val);
        }
        s
    }
}

/// All strictly increasing subsets of `dirs`, by size then lexicographically.
pub fn subsets(dirs: &[u8]) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> =
        (0u32..(1 << dirs.len())).map(|mask| dirs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &a)| a).collect()).collect();
    out.sort_by(|a: &Vec<u8>, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// `d_X(sigma^* psi) - sigma^*(Q psi)` per fiber coordinate.
pub fn check_solution(m: &Model, s: &Section) -> Result<BTreeMap<Generator, Poly>> {
    s.validate()?;
    let mut out = BTreeMap::new();
    for f in &m.fibers {
        let lhs = d_x(&m.dirs, &s.pullback(m, &Poly::gen(f)));
        let rhs = s.pullback(m, &m.q.component(f));
        out.insert(f.clone(), lhs - rhs);
    }
    Ok(out)
}

/// A vertical vector field of ghost degree -1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeParameter {
    pub y: VectorField,
}

impl GaugeParameter {
    pub fn new(y: VectorField) -> Result<Self> {
        if y.gh != -1 {
            return Err(Error::GhostMismatch(format!("gauge parameter has ghost degree {}, expected -1", y.gh)));
        }
        if y.components().any(|(g, _)| g.is_base()) {
            return Err(Error::GhostMismatch("gauge parameter must annihilate base coordinates".into()));
        }
        Ok(GaugeParameter { y })
    }
}

/// `delta sigma^*(psi) = d_X(sigma^*(Y psi)) + sigma^*(Y Q psi)`.
pub fn gauge_variation(m: &Model, s: &Section, y: &GaugeParameter) -> Result<BTreeMap<Generator, Poly>> {
    s.validate()?;
    let mut out = BTreeMap::new();
    for f in &m.fibers {
        let a = d_x(&m.dirs, &s.pullback(m, &y.y.component(f)));
        let b = s.pullback(m, &y.y.apply(&m.q.component(f)));
        out.insert(f.clone(), a + b);
    }
    Ok(out)
}

/// Standard target-space report for a model.
pub fn check_model(m: &Model) -> Result<Vec<Check>> {
    let mut out = check_projection(m);
    out.push(check_degrees(m));
    out.push(check_nilpotency(m));
    if m.chi.is_some() {
        out.extend(check_presymplectic(m)?);
    }
    Ok(out)
}
