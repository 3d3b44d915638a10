//! Kernel of a presymplectic 2-form and the symplectic quotient it induces,
//! for constant-coefficient forms or at an evaluation point.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Generator, Poly, Q};
use crate::cartan::{interior, vf_commutator, VectorField};
use crate::error::{Error, Result};
use crate::report::Check;

pub type Point = BTreeMap<Generator, Q>;

/// Rows `i_{d/d psi^A} omega = sum_B M_AB d psi^B`.
#[derive(Clone, Debug)]
pub struct PresymplecticMatrix {
    pub gens: Vec<Generator>,
    pub m: Vec<Vec<Poly>>,
    pub form: Poly,
    /// Terms of the rows not along any listed differential.
    pub residual: Poly,
}

fn coordinate_field(g: &Generator) -> VectorField {
    let mut v = VectorField::new(-g.gh());
    v.set(g.clone(), Poly::one());
    v
}

impl PresymplecticMatrix {
    pub fn from_form(form: &Poly, gens: Vec<Generator>) -> Self {
        let index: BTreeMap<Generator, usize> = gens.iter().enumerate().map(|(k, g)| (g.differential(), k)).collect();
        let n = gens.len();
        let mut m = vec![vec![Poly::zero(); n]; n];
        let mut residual = Poly::zero();
        for (a, g) in gens.iter().enumerate() {
            let row = interior(&coordinate_field(g), form);
            for (mono, c) in row.terms() {
                let hit = mono.generators().find_map(|h| index.get(h).map(|&b| (h.clone(), b)));
                let Some((dh, b)) = hit else {
                    residual.add_term(mono.clone(), c.clone());
                    continue;
                };
                let (_, rest, neg) = mono.split(|h| *h == dh);
                let flip = neg ^ (dh.is_odd() && rest.is_odd());
                m[a][b].add_term(rest, if flip { -c.clone() } else { c.clone() });
            }
        }
        PresymplecticMatrix { gens, m, form: form.clone(), residual }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.m.iter().flatten().all(|p| p.as_constant().is_some())
    }

    /// Entries at `point`; only even generators can be assigned.
    pub fn evaluate(&self, point: &Point) -> Result<Vec<Vec<Q>>> {
        self.m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| p.substitute(&|g| point.get(g).map(|q| Poly::constant(q.clone()))).as_constant().ok_or(Error::EvaluationPointRequired))
                    .collect()
            })
            .collect()
    }

    fn variables(&self) -> Vec<Generator> {
        let mut vs: Vec<Generator> = self.m.iter().flatten().flat_map(|p| p.generators()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Three pseudo-random points with the ranks found there.
    pub fn sample_ranks(&self, seed: u64) -> Result<Vec<(Point, usize)>> {
        let vars = self.variables();
        if vars.iter().any(|g| g.is_odd()) {
            return Err(Error::EvaluationPointRequired);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..3)
            .map(|_| {
                let p: Point = vars.iter().map(|g| (g.clone(), Q::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=5).into()))).collect();
                let r = rank(&self.evaluate(&p)?);
                Ok((p, r))
            })
            .collect()
    }

    fn numeric(&self, point: Option<&Point>) -> Result<Vec<Vec<Q>>> {
        match point {
            Some(p) => self.evaluate(p),
            None if self.is_constant() => self.evaluate(&Point::new()),
            None => Err(Error::EvaluationPointRequired),
        }
    }
}

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn rref(mut rows: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Q::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x *= inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot = rows[r][c..].to_vec();
                for (x, v) in rows[i][c..].iter_mut().zip(pivot) {
                    *x -= v * f.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    rref(m.to_vec()).1.len()
}

/// Basis of `{v : rows . v = 0}`.
pub fn null_space(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(rows.to_vec());
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

fn transpose(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = m.first().map_or(0, |r| r.len());
    (0..n).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

fn as_field(gens: &[Generator], v: &[Q]) -> VectorField {
    let gh = gens.iter().zip(v).find(|(_, c)| !c.is_zero()).map_or(0, |(g, _)| -g.gh());
    let mut k = VectorField::new(gh);
    for (g, c) in gens.iter().zip(v) {
        if !c.is_zero() {
            k.set(g.clone(), Poly::constant(c.clone()));
        }
    }
    k
}

fn as_linear(gens: &[Generator], v: &[Q]) -> Poly {
    gens.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(g, c)| Poly::gen(g).scale(c)).sum()
}

fn homogeneous(gens: &[Generator], v: &[Q]) -> bool {
    let mut ghs = gens.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(g, _)| g.gh());
    let first = ghs.next();
    ghs.all(|g| Some(g) == first)
}

/// Exact null-space basis read as vertical vector fields.
pub fn kernel_basis(pm: &PresymplecticMatrix, point: Option<&Point>) -> Result<Vec<VectorField>> {
    let m = pm.numeric(point)?;
    Ok(null_space(&transpose(&m), pm.len()).iter().map(|v| as_field(&pm.gens, v)).collect())
}

#[derive(Clone, Debug)]
pub struct ReducedModel {
    /// Linear coordinates on the quotient, each identified with its pivot.
    pub survivors: Vec<(Generator, Poly)>,
    pub kernel: Vec<VectorField>,
    pub form: Poly,
    pub point: Option<Point>,
    pub checks: Vec<Check>,
    /// Projected vector field, when one was supplied.
    pub projected: Option<VectorField>,
}

impl ReducedModel {
    pub fn survivor_generators(&self) -> Vec<Generator> {
        self.survivors.iter().map(|(g, _)| g.clone()).collect()
    }
}

fn at_point(p: &Poly, point: Option<&Point>) -> Poly {
    match point {
        Some(pt) => p.substitute(&|g| pt.get(g).map(|q| Poly::constant(q.clone()))),
        None => p.clone(),
    }
}

/// Kernel, survivors and reduced form. A non-constant matrix without a
/// point is evaluated at a sampled point after a rank-agreement test.
pub fn reduce(pm: &PresymplecticMatrix, point: Option<&Point>, q: Option<&VectorField>) -> Result<ReducedModel> {
    let sampled;
    let point = match point {
        Some(p) => Some(p),
        None if pm.is_constant() => None,
        None => {
            let s = pm.sample_ranks(0x5eed)?;
            let ranks: Vec<usize> = s.iter().map(|(_, r)| *r).collect();
            if ranks.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::RankMismatch(ranks));
            }
            sampled = s.into_iter().next().map(|(p, _)| p);
            sampled.as_ref()
        }
    };
    let m = pm.numeric(point)?;
    let n = pm.len();
    let kvecs = null_space(&transpose(&m), n);
    let ann = if kvecs.is_empty() {
        (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
    } else {
        rref(null_space(&kvecs, n)).0
    };
    for v in kvecs.iter().chain(&ann) {
        if !homogeneous(&pm.gens, v) {
            return Err(Error::NonSplitKernel(as_linear(&pm.gens, v).to_string()));
        }
    }
    let (_, pivots) = rref(ann.clone());
    let survivors: Vec<(Generator, Poly)> = ann.iter().zip(&pivots).map(|(v, &p)| (pm.gens[p].clone(), as_linear(&pm.gens, v))).collect();
    let kernel: Vec<VectorField> = kvecs.iter().map(|v| as_field(&pm.gens, v)).collect();

    let form_pt = at_point(&pm.form, point);
    let dropped: Vec<Generator> = (0..n).filter(|c| !pivots.contains(c)).map(|c| pm.gens[c].differential()).collect();
    let form = form_pt.substitute(&|g| dropped.contains(g).then(Poly::zero));

    let mut checks = Vec::new();
    let mut annihilates = Poly::zero();
    for k in &kernel {
        annihilates += interior(k, &form_pt);
    }
    checks.push(Check::zero("i_K omega = 0", annihilates));
    checks.push(Check::boolean("rank + dim ker = dim", rank(&m) + kernel.len() == n));
    let sub: Vec<Vec<Q>> = pivots.iter().map(|&a| pivots.iter().map(|&b| m[a][b].clone()).collect()).collect();
    checks.push(Check::boolean("reduced form nondegenerate", rank(&sub) == pivots.len()));

    let mut projected = None;
    if let Some(q) = q {
        let mut closure = Poly::zero();
        for k in &kernel {
            let c = vf_commutator(k, q);
            for (_, l) in &survivors {
                closure += at_point(&c.apply(l), point);
            }
        }
        checks.push(Check::zero("[K, Q] in K", closure));
        let elim: BTreeMap<Generator, Poly> = survivors.iter().map(|(g, l)| (g.clone(), Poly::gen(g) + Poly::gen(g) - l.clone())).collect();
        let others: Vec<Generator> = (0..n).filter(|c| !pivots.contains(c)).map(|c| pm.gens[c].clone()).collect();
        let mut qp = VectorField::new(q.gh);
        let mut leak = Poly::zero();
        for (g, l) in &survivors {
            let v = at_point(&q.apply(l), point).substitute(&|h| elim.get(h).cloned());
            leak += v.filter(|mono| mono.generators().any(|h| others.contains(h)));
            qp.set(g.clone(), v);
        }
        checks.push(Check::zero("Q projects to survivors", leak));
        let strict_up = interior(q, &interior(q, &form_pt)).is_zero();
        let ii = interior(&qp, &interior(&qp, &form));
        let c = Check::zero("i_Q' i_Q' omega' = 0", ii);
        checks.push(if strict_up { c } else { c.informational() });
        projected = Some(qp);
    }
    Ok(ReducedModel { survivors, kernel, form, point: point.cloned(), checks, projected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{qi, Role};

    fn g(name: &str, gh: i32) -> Generator {
        Generator::coordinate(Role::Fiber, name, vec![], None, gh)
    }

    #[test]
    fn rref_and_null_space() {
        let m = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert_eq!(rank(&m), 1);
        let ns = null_space(&m, 2);
        assert_eq!(ns, vec![vec![qi(-2), qi(1)]]);
    }

    #[test]
    fn nondegenerate_and_zero_forms() {
        let (p, q) = (g("p", 0), g("q", 0));
        let w = &Poly::gen(&p.differential()) * &Poly::gen(&q.differential());
        let pm = PresymplecticMatrix::from_form(&w, vec![p.clone(), q.clone()]);
        assert!(kernel_basis(&pm, None).unwrap().is_empty());
        let r = reduce(&pm, None, None).unwrap();
        assert_eq!(r.survivors.len(), 2);
        assert!(r.checks.iter().all(|c| c.ok()));
        let pm0 = PresymplecticMatrix::from_form(&Poly::zero(), vec![p, q]);
        assert_eq!(kernel_basis(&pm0, None).unwrap().len(), 2);
    }

    #[test]
    fn non_constant_needs_point() {
        let (p, q) = (g("p", 0), g("q", 0));
        let w = &(&Poly::gen(&p) * &Poly::gen(&p.differential())) * &Poly::gen(&q.differential());
        let pm = PresymplecticMatrix::from_form(&w, vec![p.clone(), q]);
        assert!(matches!(kernel_basis(&pm, None), Err(Error::EvaluationPointRequired)));
        let pt: Point = [(p, qi(3))].into_iter().collect();
        assert!(kernel_basis(&pm, Some(&pt)).unwrap().is_empty());
        let ranks: Vec<usize> = pm.sample_ranks(1).unwrap().into_iter().map(|(_, r)| r).collect();
        assert_eq!(ranks, vec![2, 2, 2]);
    }

    #[test]
    fn mixed_degree_kernel_is_not_split() {
        let (a, b, c) = (g("a", 0), g("b", 2), g("c", 0));
        let w = &Poly::gen(&a.differential()) * &(Poly::gen(&b.differential()) + Poly::gen(&c.differential()));
        let pm = PresymplecticMatrix::from_form(&w, vec![a, b, c]);
        assert!(matches!(reduce(&pm, None, None), Err(Error::NonSplitKernel(_))));
    }
}
