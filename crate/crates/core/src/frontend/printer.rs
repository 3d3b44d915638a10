//! Model to `.gpde` source. Components are written out explicitly so that
//! reparsing reproduces the model exactly.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::algebra::{base_theta, base_x, Generator, Poly, Role};
use crate::gauge_pde::Model;

fn gen_source(g: &Generator) -> String {
    let c = g.coordinate_of();
    let mut s = match c.role() {
        Role::BaseX => format!("x[{}]", c.slots()[0]),
        Role::BaseTheta => format!("theta[{}]", c.slots()[0]),
        _ => {
            let mut s = c.name().to_string();
            if !c.slots().is_empty() {
                let idx: Vec<String> = c.slots().iter().map(|i| i.to_string()).collect();
                s.push_str(&format!("[{}]", idx.join(",")));
            }
            if let Some(l) = c.lie() {
                s.push_str(&format!("{{{}}}", l + 1));
            }
            s
        }
    };
    if g.is_differential() {
        s = format!("d({s})");
    }
    s
}

/// A polynomial in the surface syntax.
pub fn poly_source(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        let mut factors: Vec<String> = Vec::new();
        if !a.is_one() || m.is_one() {
            factors.push(if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) });
        }
        for (g, e) in m.factors() {
            for _ in 0..*e {
                factors.push(gen_source(g));
            }
        }
        s.push_str(&factors.join("*"));
    }
    s
}

pub fn model_source(m: &Model) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "model {};", m.name);
    let _ = writeln!(s, "base dim = {};", m.n);
    if m.metric_declared {
        let d: Vec<String> = m.tensors.diag().iter().map(|q| q.to_string()).collect();
        let _ = writeln!(s, "metric = diag({});", d.join(", "));
    }
    if let Some(l) = &m.lie {
        let _ = writeln!(s, "lie {} {{", l.name);
        let _ = writeln!(s, "  dim = {};", l.dim);
        for a in 0..l.dim {
            for b in 0..l.dim {
                for c in 0..l.dim {
                    let v = l.f(a, b, c);
                    if !v.is_zero() {
                        let _ = writeln!(s, "  f[{}][{}][{}] = {};", a + 1, b + 1, c + 1, v);
                    }
                }
            }
        }
        let delta = (0..l.dim).all(|a| (0..l.dim).all(|b| *l.kappa(a, b) == if a == b { One::one() } else { Zero::zero() }));
        if delta {
            s.push_str("  kappa = delta;\n");
        } else {
            for a in 0..l.dim {
                for b in a..l.dim {
                    let v = l.kappa(a, b);
                    if !v.is_zero() {
                        let _ = writeln!(s, "  kappa[{}][{}] = {};", a + 1, b + 1, v);
                    }
                }
            }
        }
        s.push_str("}\n");
    }
    const LETTERS: [&str; 8] = ["a", "b", "c", "e", "g", "h", "k", "l"];
    for d in &m.decls {
        let _ = write!(s, "coord {}", d.name);
        if d.slots > 0 {
            let _ = write!(s, "[{}]", LETTERS[..d.slots].join(","));
        }
        if d.antisym {
            s.push_str(" antisym");
        }
        let _ = write!(s, " : gh = {}", d.gh);
        if d.lie {
            let _ = write!(s, " in {}", m.lie.as_ref().map_or("", |l| l.name.as_str()));
        }
        s.push_str(";\n");
    }
    if m.weak {
        s.push_str("weak = true;\n");
    }
    for a in 0..m.n as u8 {
        for g in [base_x(a), base_theta(a)] {
            let v = m.q.component(&g);
            let default = if g.role() == Role::BaseX { Poly::gen(&base_theta(a)) } else { Poly::zero() };
            if v != default {
                let _ = writeln!(s, "Q {} = {};", gen_source(&g), poly_source(&v));
            }
        }
    }
    for f in &m.fibers {
        if let Some(v) = m.q.get(f) {
            let _ = writeln!(s, "Q {} = {};", gen_source(f), poly_source(v));
        }
    }
    if let Some(chi) = &m.chi {
        let _ = writeln!(s, "chi = {};", poly_source(chi));
    }
    s
}
