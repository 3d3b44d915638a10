//! Semantic pass: statements to a validated [`Model`].

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::diagnostics::{Diagnostic, Span};
use super::parser::{BinOp, Expr, ExprKind, Index, Kappa, LieBlock, Statement, Stmt};
use crate::algebra::{base_theta, base_x, lie_bracket, BackgroundTensors, Generator, LieAlgebraData, LieValued, Poly, Role, Q};
use crate::cartan::d;
use crate::gauge_pde::{CoordDecl, Model};

type EResult<T> = Result<T, Diagnostic>;

#[derive(Clone, Debug)]
enum Value {
    Scalar(Poly),
    Lie(Vec<Poly>),
    /// Outer product `X^a Y^b`, flattened row-major.
    Pair(Vec<Poly>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Lie(_) => "Lie-valued",
            Value::Pair(_) => "Lie tensor",
        }
    }

    fn is_zero_scalar(&self) -> bool {
        matches!(self, Value::Scalar(p) if p.is_zero())
    }

    fn map(&self, f: impl Fn(&Poly) -> Poly) -> Value {
        match self {
            Value::Scalar(p) => Value::Scalar(f(p)),
            Value::Lie(v) => Value::Lie(v.iter().map(f).collect()),
            Value::Pair(v) => Value::Pair(v.iter().map(f).collect()),
        }
    }
}

/// Stable model identifier used to keep generators of different models apart.
fn scope_of(name: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h | 1
}

struct Builder {
    model: Option<Model>,
    name: Option<String>,
    lie_name: Option<String>,
    families: BTreeMap<String, CoordDecl>,
}

pub fn build(stmts: &[Statement]) -> Result<Model, Vec<Diagnostic>> {
    let mut b = Builder { model: None, name: None, lie_name: None, families: BTreeMap::new() };
    let mut diags = Vec::new();
    for s in stmts {
        if let Err(e) = b.statement(s) {
            diags.push(e);
        }
    }
    if diags.is_empty() && b.model.is_none() {
        diags.push(Diagnostic::error("missing `base dim` declaration", Span::default()));
    }
    if diags.iter().any(Diagnostic::is_error) {
        return Err(diags);
    }
    Ok(b.model.take().expect("checked"))
}

fn constant(v: &Value, span: Span) -> EResult<Q> {
    match v {
        Value::Scalar(p) => p.as_constant().ok_or_else(|| Diagnostic::error("expected a constant", span)),
        other => Err(Diagnostic::error(format!("expected a constant, found a {} value", other.kind()), span)),
    }
}

impl Builder {
    fn m(&self, span: Span) -> EResult<&Model> {
        self.model.as_ref().ok_or_else(|| Diagnostic::error("`base dim` must be declared first", span))
    }

    fn m_mut(&mut self, span: Span) -> EResult<&mut Model> {
        self.model.as_mut().ok_or_else(|| Diagnostic::error("`base dim` must be declared first", span))
    }

    fn statement(&mut self, s: &Statement) -> EResult<()> {
        match &s.stmt {
            Stmt::Model(name) => {
                if self.name.is_some() {
                    return Err(Diagnostic::error("duplicate `model` declaration", s.span));
                }
                self.name = Some(name.clone());
            }
            Stmt::BaseDim(n) => {
                let unnamed = self.name.is_none();
                let name = self.name.get_or_insert_with(|| "unnamed".into()).clone();
                if self.model.is_some() {
                    return Err(Diagnostic::error("duplicate `base dim` declaration", s.span));
                }
                if *n > 16 {
                    return Err(Diagnostic::error("base dimension too large", s.span));
                }
                let mut m = Model::empty(&name, *n);
                m.scope = scope_of(&name);
                self.model = Some(m);
                if unnamed {
                    return Err(Diagnostic::error("expected `model <name>;` first", s.span));
                }
            }
            Stmt::Metric(vals) => {
                let mut diag = Vec::new();
                for e in vals {
                    diag.push(constant(&self.eval_sum(e, &BTreeMap::new())?, e.span)?);
                }
                let m = self.m_mut(s.span)?;
                if diag.len() != m.n {
                    return Err(Diagnostic::error(format!("metric has {} entries, base dim is {}", diag.len(), m.n), s.span));
                }
                m.tensors = BackgroundTensors::diagonal(&diag).map_err(|e| Diagnostic::error(e.to_string(), s.span))?;
                m.metric_declared = true;
            }
            Stmt::Lie(block) => self.lie(block)?,
            Stmt::Coord { name, indices, antisym, gh, lie } => self.coord(s.span, name, indices, *antisym, *gh, lie.as_deref())?,
            Stmt::Rule { name, indices, lie, rhs } => self.rule(s.span, name, indices, *lie, rhs)?,
            Stmt::Chi(e) => {
                let v = self.eval_sum(e, &BTreeMap::new())?;
                let Value::Scalar(p) = v else {
                    return Err(Diagnostic::error(format!("chi must be scalar, found a {} value", v.kind()), e.span)
                        .with_hint("wrap Lie-valued products in Tr(...)"));
                };
                let m = self.m_mut(s.span)?;
                let want = m.n as i32 - 1;
                if let Some((mono, _)) = p.terms().find(|(mono, _)| mono.gh() != want) {
                    return Err(Diagnostic::error(
                        format!("ghost degree mismatch: chi has a term of ghost degree {}, expected {}", mono.gh(), want),
                        e.span,
                    ));
                }
                if p.terms().any(|(mono, _)| mono.fdeg() != 1) {
                    return Err(Diagnostic::error("chi must be a 1-form", e.span));
                }
                m.chi = Some(p);
            }
            Stmt::Weak(w) => self.m_mut(s.span)?.weak = *w,
        }
        Ok(())
    }

    fn lie(&mut self, b: &LieBlock) -> EResult<()> {
        if self.lie_name.is_some() {
            return Err(Diagnostic::error("only one lie block is supported", b.span));
        }
        let dim = b.dim;
        if dim == 0 {
            return Err(Diagnostic::error("lie block needs `dim = <n>` with n >= 1", b.span));
        }
        let mut f = vec![Q::zero(); dim * dim * dim];
        let empty = BTreeMap::new();
        for (a, bb, c, e) in &b.f {
            if [*a, *bb, *c].iter().any(|&i| i == 0 || i > dim) {
                return Err(Diagnostic::error(format!("structure constant index out of range 1..{dim}"), e.span));
            }
            f[(a - 1) * dim * dim + (bb - 1) * dim + (c - 1)] = constant(&self.eval_sum(e, &empty)?, e.span)?;
        }
        if b.complete {
            LieAlgebraData::complete_antisymmetric(dim, &mut f);
        }
        let mut kappa = vec![Q::zero(); dim * dim];
        match &b.kappa {
            None | Some(Kappa::Delta) => (0..dim).for_each(|a| kappa[a * dim + a] = Q::one()),
            Some(Kappa::Entries(es)) => {
                for (a, c, e) in es {
                    if *a == 0 || *c == 0 || *a > dim || *c > dim {
                        return Err(Diagnostic::error(format!("kappa index out of range 1..{dim}"), e.span));
                    }
                    let v = constant(&self.eval_sum(e, &empty)?, e.span)?;
                    kappa[(a - 1) * dim + (c - 1)] = v.clone();
                    kappa[(c - 1) * dim + (a - 1)] = v;
                }
            }
        }
        let lie = LieAlgebraData::new(&b.name, dim, f, kappa).map_err(|e| {
            let d = Diagnostic::error(e.to_string(), b.span);
            if b.complete {
                d
            } else {
                d.with_hint("add `complete;` to fill in f[a][c][b] = -f[a][b][c]")
            }
        })?;
        self.m_mut(b.span)?.lie = Some(lie);
        self.lie_name = Some(b.name.clone());
        Ok(())
    }

    fn coord(&mut self, span: Span, name: &str, indices: &[String], antisym: bool, gh: i32, lie: Option<&str>) -> EResult<()> {
        if ["x", "theta", "eps", "eta", "Tr", "d", "Q", "chi"].contains(&name) || self.families.contains_key(name) {
            return Err(Diagnostic::error(format!("`{name}` is reserved or already declared"), span));
        }
        let lie_dim = match lie {
            Some(l) if Some(l) == self.lie_name.as_deref() => self.m(span)?.lie_dim(),
            Some(l) => return Err(Diagnostic::error(format!("undeclared Lie algebra `{l}`"), span)),
            None => 0,
        };
        if antisym && indices.len() < 2 {
            return Err(Diagnostic::error("antisym needs at least two indices", span));
        }
        let scope = self.m(span)?.scope;
        let dirs = self.m(span)?.dirs.clone();
        let decl = CoordDecl { name: name.to_string(), slots: indices.len(), antisym, gh, lie: lie.is_some() };
        let mut fibers = Vec::new();
        for t in tuples(&dirs, indices.len()) {
            if antisym && t.windows(2).any(|w| w[0] >= w[1]) {
                continue;
            }
            let comps: Vec<Option<u16>> = if lie.is_some() { (0..lie_dim as u16).map(Some).collect() } else { vec![None] };
            for l in comps {
                fibers.push(Generator::coordinate(Role::Fiber, name, t.clone(), l, gh).with_scope(scope));
            }
        }
        let m = self.m_mut(span)?;
        m.fibers.extend(fibers);
        m.decls.push(decl.clone());
        self.families.insert(name.to_string(), decl);
        Ok(())
    }

    fn rule(&mut self, span: Span, name: &str, indices: &[Index], lie: Option<u16>, rhs: &Expr) -> EResult<()> {
        let m = self.m(span)?;
        let n = m.n;
        let mut targets: Vec<(BTreeMap<String, u8>, Vec<Generator>, bool)> = Vec::new();
        if name == "x" || name == "theta" {
            if indices.len() != 1 || lie.is_some() {
                return Err(Diagnostic::error(format!("`Q {name}` takes exactly one index"), span));
            }
            for a in m.dirs.clone() {
                if let Some(env) = match_pattern(indices, &[a]) {
                    let g = if name == "x" { base_x(a) } else { base_theta(a) };
                    targets.push((env, vec![g], false));
                }
            }
            if let Index::Num(a) = indices[0] {
                if a as usize >= n {
                    return Err(Diagnostic::error(format!("index {a} out of range for base dim {n}"), span));
                }
            }
        } else {
            let decl = self.families.get(name).cloned().ok_or_else(|| Diagnostic::error(format!("undeclared symbol `{name}`"), span))?;
            if indices.len() != decl.slots {
                return Err(Diagnostic::error(format!("`{name}` has {} indices, found {}", decl.slots, indices.len()), span));
            }
            if indices.iter().any(|i| matches!(i, Index::Lowered(_))) {
                return Err(Diagnostic::error("lowered indices are not allowed on the left of a rule", span));
            }
            if lie.is_some() && !decl.lie {
                return Err(Diagnostic::error(format!("`{name}` has no Lie components"), span));
            }
            let mut by_slots: BTreeMap<Vec<u8>, Vec<Generator>> = BTreeMap::new();
            for g in m.fibers.iter().filter(|g| g.name() == name) {
                by_slots.entry(g.slots().to_vec()).or_default().push(g.clone());
            }
            let mut matched = false;
            for (slots, gens) in by_slots {
                if let Some(env) = match_pattern(indices, &slots) {
                    matched = true;
                    let gens: Vec<Generator> = match lie {
                        Some(l) => gens.into_iter().filter(|g| g.lie() == Some(l - 1)).collect(),
                        None => gens,
                    };
                    if gens.is_empty() {
                        return Err(Diagnostic::error(format!("Lie component {} out of range", lie.unwrap_or(0)), span));
                    }
                    targets.push((env, gens, decl.lie && lie.is_none()));
                }
            }
            if !matched {
                return Err(Diagnostic::error(format!("no component of `{name}` matches these indices"), span));
            }
        }
        let mut assignments = Vec::new();
        for (env, gens, lie_valued) in targets {
            let v = self.eval_sum(rhs, &env)?;
            let comps: Vec<Poly> = match (v, lie_valued) {
                (Value::Lie(c), true) => c,
                (v, true) if v.is_zero_scalar() => vec![Poly::zero(); gens.len()],
                (Value::Scalar(p), false) => vec![p],
                (v, _) => {
                    return Err(Diagnostic::error(
                        format!("expected a {} right-hand side, found a {} value", if lie_valued { "Lie-valued" } else { "scalar" }, v.kind()),
                        rhs.span,
                    ))
                }
            };
            for (g, p) in gens.into_iter().zip(comps) {
                if let Some((mono, _)) = p.terms().find(|(mono, _)| mono.gh() != g.gh() + 1) {
                    return Err(Diagnostic::error(
                        format!("ghost degree mismatch: Q {} has a term of ghost degree {}, expected {}", g, mono.gh(), g.gh() + 1),
                        rhs.span,
                    ));
                }
                if p.terms().any(|(mono, _)| mono.fdeg() != 0) {
                    return Err(Diagnostic::error("Q components cannot contain differentials", rhs.span));
                }
                assignments.push((g, p));
            }
        }
        let m = self.m_mut(span)?;
        for (g, p) in assignments {
            m.q.set(g, p);
        }
        Ok(())
    }

    fn eval_sum(&self, e: &Expr, env: &BTreeMap<String, u8>) -> EResult<Value> {
        let mut summands = Vec::new();
        flatten(e, false, &mut summands);
        let dirs = self.model.as_ref().map(|m| m.dirs.clone()).unwrap_or_default();
        let mut acc: Option<Value> = None;
        for (neg, t) in summands {
            let mut letters = BTreeSet::new();
            free_letters(t, &mut letters);
            let free: Vec<String> = letters.into_iter().filter(|l| !env.contains_key(l)).collect();
            for assign in tuples(&dirs, free.len()) {
                let mut env2 = env.clone();
                for (l, v) in free.iter().zip(&assign) {
                    env2.insert(l.clone(), *v);
                }
                let mut v = self.eval_term(t, &env2)?;
                if neg {
                    v = v.map(|p| -p);
                }
                acc = Some(match acc {
                    None => v,
                    Some(a) => add(a, v, t.span)?,
                });
            }
        }
        Ok(acc.unwrap_or(Value::Scalar(Poly::zero())))
    }

    fn eval_term(&self, e: &Expr, env: &BTreeMap<String, u8>) -> EResult<Value> {
        match &e.kind {
            ExprKind::Num(s) => {
                let n: BigInt = s.parse().map_err(|_| Diagnostic::error("bad number", e.span))?;
                Ok(Value::Scalar(Poly::constant(Q::from_integer(n))))
            }
            ExprKind::Neg(x) => Ok(self.eval_term(x, env)?.map(|p| -p)),
            ExprKind::Bin(BinOp::Add | BinOp::Sub, _, _) => self.eval_sum(e, env),
            ExprKind::Bin(BinOp::Mul, a, b) => mul(self.eval_term(a, env)?, self.eval_term(b, env)?, e.span),
            ExprKind::Bin(BinOp::Div, a, b) => {
                let den = constant(&self.eval_term(b, env)?, b.span)?;
                if den.is_zero() {
                    return Err(Diagnostic::error("division by zero", b.span));
                }
                let inv = Q::one() / den;
                Ok(self.eval_term(a, env)?.map(|p| p.scale(&inv)))
            }
            ExprKind::Bracket(a, b) => {
                let lie = self.lie_data(e.span)?;
                match (self.eval_sum(a, env)?, self.eval_sum(b, env)?) {
                    (Value::Lie(x), Value::Lie(y)) => {
                        let r = lie_bracket(lie, &LieValued(x), &LieValued(y)).map_err(|er| Diagnostic::error(er.to_string(), e.span))?;
                        Ok(Value::Lie(r.0))
                    }
                    (x, _) if x.is_zero_scalar() => Ok(Value::Lie(vec![Poly::zero(); lie.dim])),
                    (_, y) if y.is_zero_scalar() => Ok(Value::Lie(vec![Poly::zero(); lie.dim])),
                    (x, y) => Err(Diagnostic::error(format!("bracket of a {} and a {} value", x.kind(), y.kind()), e.span)
                        .with_hint("both arguments of [X, Y] must be Lie-valued")),
                }
            }
            ExprKind::Tr(x) => {
                let lie = self.lie_data(e.span)?;
                match self.eval_sum(x, env)? {
                    Value::Pair(p) => {
                        let dim = lie.dim;
                        let mut out = Poly::zero();
                        for a in 0..dim {
                            for b in 0..dim {
                                let k = lie.kappa(a, b);
                                if !k.is_zero() {
                                    out += p[a * dim + b].scale(k);
                                }
                            }
                        }
                        Ok(Value::Scalar(out))
                    }
                    v if v.is_zero_scalar() => Ok(v),
                    v => Err(Diagnostic::error(format!("Tr needs a product of two Lie-valued factors, found a {} value", v.kind()), e.span)),
                }
            }
            ExprKind::D(x) => Ok(self.eval_sum(x, env)?.map(d)),
            ExprKind::ThetaBasis(k, idx, ksp) => {
                let m = self.m(e.span)?;
                if *k as usize + idx.len() != m.n {
                    return Err(Diagnostic::error(
                        format!("theta({k}; ...) needs {} indices in base dim {}", m.n.saturating_sub(*k as usize), m.n),
                        *ksp,
                    ));
                }
                let mut acc = Poly::zero();
                for (c, t) in self.expand(idx, env, e.span)? {
                    let p = m.tensors.theta_basis(&t).map_err(|er| Diagnostic::error(er.to_string(), e.span))?;
                    acc += p.scale(&c);
                }
                Ok(Value::Scalar(acc))
            }
            ExprKind::Sym { name, indices, lie } => self.symbol(e.span, name, indices, *lie, env),
        }
    }

    fn lie_data(&self, span: Span) -> EResult<&LieAlgebraData> {
        self.m(span)?.lie.as_ref().ok_or_else(|| Diagnostic::error("no lie block declared", span))
    }

    /// Concrete index tuples with metric weights for lowered slots.
    fn expand(&self, idx: &[Index], env: &BTreeMap<String, u8>, span: Span) -> EResult<Vec<(Q, Vec<u8>)>> {
        let m = self.m(span)?;
        let mut out: Vec<(Q, Vec<u8>)> = vec![(Q::one(), Vec::new())];
        for i in idx {
            let opts: Vec<(Q, u8)> = match i {
                Index::Num(a) => {
                    if *a as usize >= m.n {
                        return Err(Diagnostic::error(format!("index {a} out of range for base dim {}", m.n), span));
                    }
                    vec![(Q::one(), *a)]
                }
                Index::Letter(l) => vec![(Q::one(), *env.get(l).ok_or_else(|| Diagnostic::error(format!("unbound index `{l}`"), span))?)],
                Index::Lowered(l) => {
                    if !m.metric_declared {
                        return Err(Diagnostic::error("lowered indices need a `metric` declaration", span));
                    }
                    let a = *env.get(l).ok_or_else(|| Diagnostic::error(format!("unbound index `{l}`"), span))?;
                    m.dirs.iter().map(|&c| (m.tensors.eta(a as usize, c as usize).clone(), c)).filter(|(w, _)| !w.is_zero()).collect()
                }
            };
            let mut next = Vec::new();
            for (w, t) in &out {
                for (w2, a) in &opts {
                    let mut t2 = t.clone();
                    t2.push(*a);
                    next.push((w * w2, t2));
                }
            }
            out = next;
        }
        Ok(out)
    }

    fn symbol(&self, span: Span, name: &str, indices: &[Index], lie: Option<u16>, env: &BTreeMap<String, u8>) -> EResult<Value> {
        let m = self.m(span)?;
        let tuples = self.expand(indices, env, span)?;
        let mut acc: Option<Value> = None;
        for (w, t) in tuples {
            let v = self.concrete(span, m, name, &t, lie)?.map(|p| p.scale(&w));
            acc = Some(match acc {
                None => v,
                Some(a) => add(a, v, span)?,
            });
        }
        acc.ok_or_else(|| Diagnostic::error("empty index expansion", span))
    }

    fn concrete(&self, span: Span, m: &Model, name: &str, t: &[u8], lie: Option<u16>) -> EResult<Value> {
        let no_lie = |v: Value| if lie.is_some() { Err(Diagnostic::error(format!("`{name}` has no Lie components"), span)) } else { Ok(v) };
        match name {
            "x" | "theta" => {
                if t.len() != 1 {
                    return Err(Diagnostic::error(format!("`{name}` takes one index"), span));
                }
                if !m.dirs.contains(&t[0]) {
                    return Ok(Value::Scalar(Poly::zero()));
                }
                let g = if name == "x" { base_x(t[0]) } else { base_theta(t[0]) };
                no_lie(Value::Scalar(Poly::gen(&g)))
            }
            "eps" => {
                if !m.metric_declared {
                    return Err(Diagnostic::error("`eps` needs a `metric` declaration", span));
                }
                no_lie(Value::Scalar(Poly::int(m.tensors.epsilon(t))))
            }
            "eta" => {
                if !m.metric_declared {
                    return Err(Diagnostic::error("`eta` needs a `metric` declaration", span));
                }
                if t.len() != 2 {
                    return Err(Diagnostic::error("`eta` takes two indices", span));
                }
                no_lie(Value::Scalar(Poly::constant(m.tensors.eta(t[0] as usize, t[1] as usize).clone())))
            }
            _ => {
                let decl = self
                    .families
                    .get(name)
                    .ok_or_else(|| Diagnostic::error(format!("undeclared symbol `{name}`"), span).with_hint("declare it with `coord`"))?;
                if t.len() != decl.slots {
                    return Err(Diagnostic::error(format!("`{name}` has {} indices, found {}", decl.slots, t.len()), span));
                }
                let mut slots = t.to_vec();
                let mut sign = 1;
                if decl.antisym {
                    sign = crate::algebra::permutation_sign(&slots);
                    slots.sort_unstable();
                }
                let dim = m.lie_dim();
                let gens: Vec<Option<Generator>> =
                    if decl.lie { (0..dim as u16).map(|l| m.coord(name, &slots, Some(l))).collect() } else { vec![m.coord(name, &slots, None)] };
                let val = |g: &Option<Generator>| match g {
                    Some(g) if sign != 0 => Poly::gen(g).scale(&Q::from_integer(sign.into())),
                    _ => Poly::zero(),
                };
                match (decl.lie, lie) {
                    (true, None) => Ok(Value::Lie(gens.iter().map(val).collect())),
                    (true, Some(l)) => {
                        let g =
                            gens.get(l as usize - 1).ok_or_else(|| Diagnostic::error(format!("Lie component {l} out of range 1..{dim}"), span))?;
                        Ok(Value::Scalar(val(g)))
                    }
                    (false, _) => no_lie(Value::Scalar(val(&gens[0]))),
                }
            }
        }
    }
}

fn add(a: Value, b: Value, span: Span) -> EResult<Value> {
    Ok(match (a, b) {
        (a, b) if b.is_zero_scalar() => a,
        (a, b) if a.is_zero_scalar() => b,
        (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x + y),
        (Value::Lie(x), Value::Lie(y)) => Value::Lie(x.iter().zip(&y).map(|(p, q)| p + q).collect()),
        (Value::Pair(x), Value::Pair(y)) => Value::Pair(x.iter().zip(&y).map(|(p, q)| p + q).collect()),
        (a, b) => return Err(Diagnostic::error(format!("cannot add a {} and a {} value", a.kind(), b.kind()), span)),
    })
}

fn mul(a: Value, b: Value, span: Span) -> EResult<Value> {
    Ok(match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
        (Value::Scalar(x), v) => v.map(|p| &x * p),
        (v, Value::Scalar(y)) => v.map(|p| p * &y),
        (Value::Lie(x), Value::Lie(y)) => {
            let mut out = Vec::with_capacity(x.len() * y.len());
            for p in &x {
                for q in &y {
                    out.push(p * q);
                }
            }
            Value::Pair(out)
        }
        (a, b) => {
            return Err(Diagnostic::error(format!("cannot multiply a {} and a {} value", a.kind(), b.kind()), span).with_hint("take a trace first"))
        }
    })
}

fn flatten<'a>(e: &'a Expr, neg: bool, out: &mut Vec<(bool, &'a Expr)>) {
    match &e.kind {
        ExprKind::Bin(BinOp::Add, a, b) => {
            flatten(a, neg, out);
            flatten(b, neg, out);
        }
        ExprKind::Bin(BinOp::Sub, a, b) => {
            flatten(a, neg, out);
            flatten(b, !neg, out);
        }
        _ => out.push((neg, e)),
    }
}

fn free_letters(e: &Expr, out: &mut BTreeSet<String>) {
    let idx = |v: &[Index], out: &mut BTreeSet<String>| {
        for i in v {
            if let Index::Letter(l) | Index::Lowered(l) = i {
                out.insert(l.clone());
            }
        }
    };
    match &e.kind {
        ExprKind::Num(_) => {}
        ExprKind::Neg(x) | ExprKind::Tr(x) | ExprKind::D(x) => free_letters(x, out),
        ExprKind::Bin(_, a, b) | ExprKind::Bracket(a, b) => {
            free_letters(a, out);
            free_letters(b, out);
        }
        ExprKind::ThetaBasis(_, v, _) => idx(v, out),
        ExprKind::Sym { indices, .. } => idx(indices, out),
    }
}

/// All tuples of length `k` over `dirs`.
fn tuples(dirs: &[u8], k: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| dirs.iter().map(move |&a| [t.clone(), vec![a]].concat())).collect();
    }
    out
}

/// Bind pattern letters to `slots`; `None` if a fixed index or a repeated letter disagrees.
fn match_pattern(pattern: &[Index], slots: &[u8]) -> Option<BTreeMap<String, u8>> {
    let mut env = BTreeMap::new();
    for (p, &s) in pattern.iter().zip(slots) {
        match p {
            Index::Num(a) if *a != s => return None,
            Index::Num(_) => {}
            Index::Letter(l) | Index::Lowered(l) => {
                if let Some(&prev) = env.get(l) {
                    if prev != s {
                        return None;
                    }
                }
                env.insert(l.clone(), s);
            }
        }
    }
    Some(env)
}
