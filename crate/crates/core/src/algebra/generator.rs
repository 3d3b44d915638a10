//! Graded generators: coordinates, their differentials, jet coordinates and
//! field symbols.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Integer ghost degree.
pub type GhostDegree = i32;

/// What kind of symbol a generator stands for. The declaration order is the
/// primary sort key after form degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    BaseX,
    BaseTheta,
    Fiber,
    Jet,
    FieldSymbol,
    Survivor,
}

/// Index data shared by every generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenData {
    pub role: Role,
    pub name: Arc<str>,
    /// Spacetime index slots (e.g. the `a` of `theta^a`, the `ab` of `F^{ab}`).
    pub slots: Vec<u8>,
    /// Symmetric x-derivative multi-index (jets and field symbols), sorted.
    pub dx: Vec<u8>,
    /// Antisymmetric theta multi-index (jets and field symbols), strictly increasing.
    pub dth: Vec<u8>,
    pub lie: Option<u16>,
    pub gh: GhostDegree,
    /// 0 for a coordinate, 1 for its differential.
    pub fdeg: u8,
    /// Owning model; generators of different nonzero scopes never mix.
    pub scope: u64,
}

/// A reference-counted generator. Equality and order are by value.
#[derive(Clone)]
pub struct Generator(Arc<GenData>);

impl Generator {
    pub fn new(data: GenData) -> Self {
        debug_assert!(data.fdeg <= 1);
        Generator(Arc::new(data))
    }

    pub fn coordinate(role: Role, name: &str, slots: Vec<u8>, lie: Option<u16>, gh: GhostDegree) -> Self {
        Generator::new(GenData { role, name: Arc::from(name), slots, dx: Vec::new(), dth: Vec::new(), lie, gh, fdeg: 0, scope: 0 })
    }

    pub fn data(&self) -> &GenData {
        &self.0
    }

    pub fn role(&self) -> Role {
        self.0.role
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn slots(&self) -> &[u8] {
        &self.0.slots
    }

    pub fn lie(&self) -> Option<u16> {
        self.0.lie
    }

    pub fn gh(&self) -> GhostDegree {
        self.0.gh
    }

    pub fn fdeg(&self) -> u8 {
        self.0.fdeg
    }

    pub fn scope(&self) -> u64 {
        self.0.scope
    }

    pub fn dx(&self) -> &[u8] {
        &self.0.dx
    }

    pub fn dth(&self) -> &[u8] {
        &self.0.dth
    }

    /// Koszul parity `(gh + fdeg) mod 2`.
    pub fn is_odd(&self) -> bool {
        (self.0.gh + self.0.fdeg as i32).rem_euclid(2) == 1
    }

    pub fn is_differential(&self) -> bool {
        self.0.fdeg == 1
    }

    /// `dx^a` or `dtheta^a`.
    pub fn is_base_differential(&self) -> bool {
        self.0.fdeg == 1 && matches!(self.0.role, Role::BaseX | Role::BaseTheta)
    }

    pub fn is_base(&self) -> bool {
        matches!(self.0.role, Role::BaseX | Role::BaseTheta)
    }

    /// The differential `dc` of a coordinate `c`.
    ///
    /// # Panics
    /// If `self` is already a differential.
    pub fn differential(&self) -> Generator {
        assert_eq!(self.0.fdeg, 0, "differential of a differential");
        let mut d = (*self.0).clone();
        d.fdeg = 1;
        Generator::new(d)
    }

    /// The coordinate a differential refers to (identity on coordinates).
    pub fn coordinate_of(&self) -> Generator {
        if self.0.fdeg == 0 {
            return self.clone();
        }
        let mut d = (*self.0).clone();
        d.fdeg = 0;
        Generator::new(d)
    }

    pub fn with_scope(&self, scope: u64) -> Generator {
        let mut d = (*self.0).clone();
        d.scope = scope;
        Generator::new(d)
    }

    pub fn with_role(&self, role: Role) -> Generator {
        let mut d = (*self.0).clone();
        d.role = role;
        Generator::new(d)
    }

    /// Same symbol with jet/derivative multi-indices replaced and gh adjusted
    /// by the theta-index length.
    pub fn with_jet(&self, role: Role, dx: Vec<u8>, dth: Vec<u8>, gh: GhostDegree) -> Generator {
        let mut d = (*self.0).clone();
        d.role = role;
        d.dx = dx;
        d.dth = dth;
        d.gh = gh;
        Generator::new(d)
    }

    fn key_cmp(a: &GenData, b: &GenData) -> Ordering {
        a.fdeg
            .cmp(&b.fdeg)
            .then(a.role.cmp(&b.role))
            .then_with(|| a.name.cmp(&b.name))
            .then_with(|| a.slots.cmp(&b.slots))
            .then_with(|| a.dth.len().cmp(&b.dth.len()))
            .then_with(|| a.dth.cmp(&b.dth))
            .then_with(|| a.dx.len().cmp(&b.dx.len()))
            .then_with(|| a.dx.cmp(&b.dx))
            .then_with(|| a.lie.cmp(&b.lie))
            .then_with(|| a.gh.cmp(&b.gh))
            .then_with(|| a.scope.cmp(&b.scope))
    }
}

impl PartialEq for Generator {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Generator {}

impl Hash for Generator {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        Generator::key_cmp(&self.0, &other.0)
    }
}

fn join_digits(v: &[u8]) -> String {
    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.0;
        if d.fdeg == 1 {
            write!(f, "d")?;
        }
        match d.role {
            Role::BaseX => return write!(f, "x[{}]", join_digits(&d.slots)),
            Role::BaseTheta => return write!(f, "theta[{}]", join_digits(&d.slots)),
            _ => {}
        }
        let needs_parens = d.fdeg == 1 && (!d.dx.is_empty() || !d.dth.is_empty());
        if needs_parens {
            write!(f, "(")?;
        }
        write!(f, "{}", d.name)?;
        if !d.slots.is_empty() {
            write!(f, "[{}]", join_digits(&d.slots))?;
        }
        if let Some(l) = d.lie {
            write!(f, "{{{}}}", l + 1)?;
        }
        if !d.dx.is_empty() || !d.dth.is_empty() || d.role == Role::Jet {
            write!(f, "_[{}|{}]", join_digits(&d.dx), join_digits(&d.dth))?;
        }
        if needs_parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Generator {
    /// LaTeX rendering.
    pub fn latex(&self) -> String {
        let d = &self.0;
        let prefix = if d.fdeg == 1 { "d" } else { "" };
        let idx = |v: &[u8]| v.iter().map(|i| i.to_string()).collect::<String>();
        match d.role {
            Role::BaseX => return format!("{}x^{{{}}}", prefix, idx(&d.slots)),
            Role::BaseTheta => return format!("{}\\theta^{{{}}}", prefix, idx(&d.slots)),
            _ => {}
        }
        let mut sup = idx(&d.slots);
        if let Some(l) = d.lie {
            if !sup.is_empty() {
                sup.push(',');
            }
            sup.push_str(&(l + 1).to_string());
        }
        let mut s = format!("{}{}", prefix, d.name);
        if !sup.is_empty() {
            s.push_str(&format!("^{{{}}}", sup));
        }
        if !d.dx.is_empty() || !d.dth.is_empty() {
            s.push_str(&format!("_{{{}|{}}}", idx(&d.dx), idx(&d.dth)));
        }
        s
    }
}
