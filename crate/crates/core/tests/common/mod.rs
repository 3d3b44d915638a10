#![allow(dead_code)]

use gpde::algebra::{base_theta, lie_bracket, trace_pair, LieValued, Poly, Q};
use gpde::cartan::d;
use gpde::gauge_pde::{field_symbol, partial, q_square, Model};
use gpde::superjets::jet;

pub const PROP_CASES: u32 = 1000;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Lie components of a target coordinate.
pub fn coord(m: &Model, name: &str, slots: &[u8]) -> LieValued {
    LieValued((0..m.lie_dim() as u16).map(|a| m.coord(name, slots, Some(a)).map_or(Poly::zero(), |g| Poly::gen(&g))).collect())
}

/// Lie components of a component field with theta-indices `dth`.
pub fn field(m: &Model, name: &str, slots: &[u8], dth: &[u8]) -> LieValued {
    coord(m, name, slots).map(|p| match p.generators().into_iter().next() {
        Some(g) => Poly::gen(&field_symbol(&g, dth, &[])),
        None => Poly::zero(),
    })
}

/// `F^{ab}` through antisymmetry, as a target coordinate or a field.
pub fn f_up(m: &Model, a: u8, b: u8, as_field: bool) -> LieValued {
    let get = |x: u8, y: u8| if as_field { field(m, "F", &[x, y], &[]) } else { coord(m, "F", &[x, y]) };
    match a.cmp(&b) {
        std::cmp::Ordering::Less => get(a, b),
        std::cmp::Ordering::Greater => get(b, a).scale(&q(-1, 1)),
        std::cmp::Ordering::Equal => LieValued::zero(m.lie_dim()),
    }
}

pub fn tr(m: &Model, a: &LieValued, b: &LieValued) -> Poly {
    trace_pair(m.lie.as_ref().unwrap(), a, b).unwrap()
}

pub fn br(m: &Model, a: &LieValued, b: &LieValued) -> LieValued {
    lie_bracket(m.lie.as_ref().unwrap(), a, b).unwrap()
}

pub fn d_lie(a: u8, v: &LieValued) -> LieValued {
    v.map(|p| partial(a, p))
}

fn eta(m: &Model, a: u8) -> Q {
    m.tensors.eta(a as usize, a as usize).clone()
}

/// `1/2 Tr(F^{ab}[C,C]) theta^{(n-2)}_{ab} - 1/2 Tr(F_{ab}F^{ab}) theta^{(n)}`.
pub fn ym_hamiltonian(m: &Model) -> Poly {
    let c = coord(m, "C", &[]);
    let cc = br(m, &c, &c);
    let mut l = Poly::zero();
    for a in 0..m.n as u8 {
        for b in 0..m.n as u8 {
            let f = f_up(m, a, b, false);
            let t = m.tensors.theta_basis(&[a, b]).unwrap();
            l += &tr(m, &f, &cc).scale(&q(1, 2)) * &t;
            let ff = tr(m, &f.scale(&(eta(m, a) * eta(m, b))), &f);
            l = l - &ff.scale(&q(1, 2)) * &m.tensors.theta_top();
        }
    }
    l
}

/// `F^{ab}(d_a A_b - d_b A_a + [A_a, A_b]) - 1/2 F_{ab} F^{ab}` with
/// `A_a` the theta-linear component of `C`.
pub fn first_order_ym(m: &Model) -> Poly {
    let a_ = |a: u8| field(m, "C", &[], &[a]);
    let mut s = Poly::zero();
    for a in 0..m.n as u8 {
        for b in 0..m.n as u8 {
            let f = f_up(m, a, b, true);
            let curv = d_lie(a, &a_(b)).sub(&d_lie(b, &a_(a))).add(&br(m, &a_(a), &a_(b)));
            s += tr(m, &f, &curv);
            s = s - tr(m, &f.scale(&(eta(m, a) * eta(m, b))), &f).scale(&q(1, 2));
        }
    }
    s
}

/// `Tr(pi^i(d_i C + [A_i, C]) - P[C, C])` over spatial `dirs`, with the
/// survivor fields of the boundary reduction. `P = p_sign * sum_i F^{0i}_{|i}`.
pub fn bfv_display(m: &Model, p_sign: Q) -> Poly {
    let c = field(m, "C", &[], &[]);
    let mut p = LieValued::zero(m.lie_dim());
    let mut out = Poly::zero();
    for &i in &m.dirs {
        let pi = field(m, "F", &[0, i], &[]);
        let a = field(m, "C", &[], &[i]);
        out += tr(m, &pi, &d_lie(i, &c).add(&br(m, &a, &c)));
        p = p.add(&field(m, "F", &[0, i], &[i]));
    }
    out - tr(m, &p.scale(&p_sign), &br(m, &c, &c))
}

/// `theta^a v(a)` summed over the base directions.
pub fn theta_a(m: &Model, v: impl Fn(u8) -> LieValued) -> LieValued {
    let mut out = LieValued::zero(m.lie_dim());
    for &a in &m.dirs {
        out = out.add(&v(a).left_mul(&Poly::gen(&base_theta(a))));
    }
    out
}

/// The single ratio between `Q^2 F^{ab}` and `[F^{ab}, theta^c theta^d F_{cd}]`,
/// or `None` if `Q^2` is not of that shape or leaks into `x`, `theta`, `C`.
pub fn q_square_ratio(m: &Model) -> Option<Q> {
    let q2 = q_square(m);
    let others = m.base_coords().into_iter().chain(m.fibers.iter().filter(|g| g.name() == "C").cloned());
    if others.into_iter().any(|g| !q2.component(&g).is_zero()) {
        return None;
    }
    let mut tf = LieValued::zero(m.lie_dim());
    for c in 0..m.n as u8 {
        for e in 0..m.n as u8 {
            let lowered = f_up(m, c, e, false).scale(&(eta(m, c) * eta(m, e)));
            tf = tf.add(&lowered.left_mul(&(&Poly::gen(&base_theta(c)) * &Poly::gen(&base_theta(e)))));
        }
    }
    let mut lambda: Option<Q> = None;
    for a in 0..m.n as u8 {
        for b in a + 1..m.n as u8 {
            let oracle = br(m, &f_up(m, a, b, false), &tf);
            for (c, o) in coord(m, "F", &[a, b]).0.iter().zip(&oracle.0) {
                let g = q2.component(&c.generators().into_iter().next().unwrap());
                if o.is_zero() {
                    if !g.is_zero() {
                        return None;
                    }
                    continue;
                }
                let l = g.proportionality(o)?;
                if *lambda.get_or_insert(l.clone()) != l {
                    return None;
                }
            }
        }
    }
    Some(lambda.unwrap_or_else(|| Q::from_integer(0.into())))
}

/// Hand-built boundary data for kill direction 0 at jet order 1.
pub struct BoundaryOracle {
    pub chi: Poly,
    /// `2Tr(dpi^i dA_i + dP dC)` with `P = -sum_i F^{0i}_{|i}`.
    pub vertical: Poly,
    /// The same form in survivor coordinates, pivot `F^{01}_{|1}` standing for `-P`.
    pub reduced: Poly,
    /// `C, A_i, pi^i, P` componentwise, sorted by display.
    pub survivors: Vec<Poly>,
    pub kernel_dim: usize,
}

pub fn boundary_oracle(m: &Model) -> BoundaryOracle {
    let spatial: Vec<u8> = (1..m.n as u8).collect();
    let mut chi = Poly::zero();
    for &i in &spatial {
        for &j in &spatial {
            for &k in &spatial {
                let e = m.tensors.epsilon(&[0, i, j, k]);
                if e == 0 {
                    continue;
                }
                let tt = &Poly::gen(&base_theta(j)) * &Poly::gen(&base_theta(k));
                let dc = coord(m, "C", &[]).map(d);
                chi += (&tr(m, &f_up(m, 0, i, false), &dc) * &tt).scale(&q(e, 1));
            }
        }
    }
    let jc = |name: &str, slots: &[u8], j: &[u8]| -> LieValued {
        coord(m, name, slots).map(|p| Poly::gen(&jet(&p.generators().into_iter().next().unwrap(), &[], j)))
    };
    let dl = |v: &LieValued| v.map(d);
    let mut p = LieValued::zero(m.lie_dim());
    for &i in &spatial {
        p = p.sub(&jc("F", &[0, i], &[i]));
    }
    let c0 = jc("C", &[], &[]);
    let p_red = jc("F", &[0, 1], &[1]).scale(&q(-1, 1));
    let mut vertical = tr(m, &dl(&p), &dl(&c0));
    let mut reduced = tr(m, &dl(&c0), &dl(&p_red));
    let mut survivors = Vec::new();
    for a in 0..m.lie_dim() {
        survivors.push(c0.0[a].clone());
        survivors.push(p.0[a].scale(&q(-1, 1)));
    }
    for &i in &spatial {
        let pi = jc("F", &[0, i], &[]);
        let a = jc("C", &[], &[i]);
        vertical += tr(m, &dl(&pi), &dl(&a));
        reduced += tr(m, &dl(&pi), &dl(&a));
        survivors.extend(a.0.iter().chain(&pi.0).cloned());
    }
    survivors.sort_by_key(|p| p.to_string());
    // C and the six F^{ab}, each with every theta-multi-index over the spatial directions
    let jets = 7 * (1 << spatial.len());
    BoundaryOracle { chi, vertical: vertical.scale(&q(2, 1)), reduced: reduced.scale(&q(2, 1)), survivors, kernel_dim: (jets - 8) * m.lie_dim() }
}
