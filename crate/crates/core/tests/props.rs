mod common;

use gpde::action::{el_equivalent, euler_lagrange};
use gpde::algebra::{base_theta, base_x, lie_bracket, Generator, LieAlgebraData, LieValued, Poly, Role, Q};
use gpde::cartan::{d, interior, lie_derivative, op_commutator, vf_commutator, VectorField};
use gpde::frontend::{model_source, parse_model};
use gpde::gauge_pde::{named_field, partial};
use gpde::reduction::{kernel_basis, rank, PresymplecticMatrix};
use proptest::prelude::*;

fn fiber(name: &str, gh: i32) -> Generator {
    Generator::coordinate(Role::Fiber, name, vec![], None, gh)
}

fn coords() -> Vec<Generator> {
    vec![base_x(0), base_x(1), base_theta(0), base_theta(1), fiber("u", 0), fiber("c", 1), fiber("b", -1), fiber("w", 2)]
}

fn alphabet(forms: bool) -> Vec<Generator> {
    let mut a = coords();
    if forms {
        a.extend(coords().iter().map(Generator::differential));
    }
    a
}

fn build(gens: &[Generator], terms: &[(i64, Vec<usize>)]) -> Poly {
    terms.iter().map(|(c, idx)| idx.iter().fold(Poly::int(*c), |acc, &i| &acc * &Poly::gen(&gens[i % gens.len()]))).sum()
}

fn terms(max_terms: usize) -> impl Strategy<Value = Vec<(i64, Vec<usize>)>> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(0usize..64, 0..=3)), 0..=max_terms)
}

fn poly(forms: bool) -> impl Strategy<Value = Poly> {
    terms(4).prop_map(move |t| build(&alphabet(forms), &t))
}

fn monomial(forms: bool) -> impl Strategy<Value = Poly> {
    (1i64..=3, prop::collection::vec(0usize..64, 0..=3)).prop_map(move |(c, idx)| build(&alphabet(forms), &[(c, idx)]))
}

fn parity_part(p: &Poly, odd: bool) -> Poly {
    p.filter(|m| m.is_odd() == odd)
}

/// Vector field of ghost degree `gh` with components of matching parity.
fn field(gh: i32, comps: Vec<Poly>) -> VectorField {
    let mut v = VectorField::new(gh);
    for (c, p) in coords().into_iter().zip(comps) {
        let odd = (gh + c.gh()).rem_euclid(2) == 1;
        v.set(c, parity_part(&p, odd));
    }
    v
}

fn vector_field() -> impl Strategy<Value = VectorField> {
    (-1i32..=1, prop::collection::vec(terms(2), 8)).prop_map(|(gh, ts)| field(gh, ts.iter().map(|t| build(&coords(), t)).collect()))
}

fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(common::PROP_CASES)
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn graded_commutativity(a in monomial(true), b in monomial(true)) {
        let sign = if a.is_odd() && b.is_odd() { -1 } else { 1 };
        prop_assert_eq!(&a * &b, (&b * &a).scale(&Q::from_integer(sign.into())));
    }

    #[test]
    fn associativity(a in poly(true), b in poly(true), c in poly(true)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn canonical_form(ts in terms(5), seed in any::<u64>()) {
        let gens = alphabet(true);
        let mut shuffled = ts.clone();
        let n = shuffled.len().max(1);
        shuffled.rotate_left((seed as usize) % n);
        prop_assert_eq!(build(&gens, &ts), build(&gens, &shuffled));
        let p = build(&gens, &ts);
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &Poly::one(), p.clone());
        prop_assert!(p.terms().all(|(_, c)| *c != Q::from_integer(0.into())));
    }

    #[test]
    fn d_squared_vanishes(a in poly(true)) {
        prop_assert!(d(&d(&a)).is_zero());
    }

    #[test]
    fn d_is_odd_derivation(a in monomial(true), b in poly(true)) {
        let sign = if a.is_odd() { -1 } else { 1 };
        let rhs = &(&d(&a) * &b) + &(&a * &d(&b)).scale(&Q::from_integer(sign.into()));
        prop_assert_eq!(d(&(&a * &b)), rhs);
    }

    #[test]
    fn cartan_coherence(v in vector_field(), w in vector_field(), f in poly(true)) {
        let vw = vf_commutator(&v, &w);
        let lv = |p: &Poly| lie_derivative(&v, p);
        let lw = |p: &Poly| lie_derivative(&w, p);
        let iw = |p: &Poly| interior(&w, p);
        prop_assert_eq!(op_commutator(&lv, v.is_odd(), &iw, !w.is_odd(), &f), interior(&vw, &f));
        prop_assert_eq!(op_commutator(&lv, v.is_odd(), &lw, w.is_odd(), &f), lie_derivative(&vw, &f));
        prop_assert_eq!(op_commutator(&lv, v.is_odd(), &d, true, &f), Poly::zero());
    }

    #[test]
    fn lie_jacobi(
        comps in prop::collection::vec(terms(2), 9),
        parities in prop::collection::vec(any::<bool>(), 3),
    ) {
        let lie = LieAlgebraData::su2();
        let gens = coords();
        let v: Vec<LieValued> = (0..3)
            .map(|k| LieValued((0..3).map(|a| parity_part(&build(&gens, &comps[3 * k + a]), parities[k])).collect()))
            .collect();
        let br = |x: &LieValued, y: &LieValued| lie_bracket(&lie, x, y).unwrap();
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        let sign = if parities[0] && parities[1] { -1 } else { 1 };
        let lhs = br(a, &br(b, c));
        let rhs = br(&br(a, b), c).add(&br(b, &br(a, c)).scale(&Q::from_integer(sign.into())));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn el_invariant_under_total_derivatives(
        at in terms(3),
        bt in terms(3),
        dirs in prop::collection::vec(0u8..2, 0..=2),
        k in 0u8..2,
    ) {
        let base = vec![named_field("phi", None, 0), named_field("psi", None, 0), named_field("eta", None, 1), named_field("zeta", None, -1)];
        let mut syms = base.clone();
        for g in &base {
            for &a in &dirs {
                let p = partial(a, &Poly::gen(g));
                syms.extend(p.generators());
            }
        }
        let a = build(&syms, &at);
        let b = build(&syms, &bt);
        let exact = partial(k, &b);
        prop_assert!(el_equivalent(&a, &(&a + &exact)));
        prop_assert!(el_equivalent(&exact, &Poly::zero()));
        prop_assert!(el_equivalent(&a, &a));
        prop_assert_eq!(el_equivalent(&a, &b), el_equivalent(&b, &a));
        let ea = euler_lagrange(&a);
        let same = euler_lagrange(&(&a + &exact))
            .iter()
            .all(|(phi, e)| ea.iter().find(|(p, _)| p == phi).map_or(e.is_zero(), |(_, x)| x == e));
        prop_assert!(same);
    }

    #[test]
    fn kernel_annihilates_form(coeffs in prop::collection::vec(-2i64..=2, 6), odd in any::<bool>()) {
        let gh = if odd { 1 } else { 0 };
        let gens: Vec<Generator> = (0..4).map(|i| fiber(&format!("y{i}"), gh)).collect();
        let mut form = Poly::zero();
        let mut k = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                form += (&Poly::gen(&gens[i].differential()) * &Poly::gen(&gens[j].differential())).scale(&Q::from_integer(coeffs[k].into()));
                k += 1;
            }
        }
        let pm = PresymplecticMatrix::from_form(&form, gens);
        let ker = kernel_basis(&pm, None).unwrap();
        for v in &ker {
            prop_assert!(interior(v, &form).is_zero());
        }
        let m = pm.evaluate(&Default::default()).unwrap();
        prop_assert_eq!(rank(&m) + ker.len(), 4);
    }

    #[test]
    fn print_parse_fixpoint(a in -4i64..=4, b in 1i64..=4, c in -3i64..=3) {
        let src = format!(
            "model r;\nbase dim = 2;\ncoord c : gh = 1;\ncoord w : gh = 2;\ncoord u : gh = 0;\nQ c = {a}/{b}*w + {c}*theta[0]*c*u;\nQ w = {c}*theta[1]*w - theta[0]*theta[1]*c;\n"
        );
        let m = parse_model(&src).unwrap();
        let again = parse_model(&model_source(&m)).unwrap();
        prop_assert_eq!(model_source(&again), model_source(&m));
        prop_assert_eq!(again, m);
    }
}
