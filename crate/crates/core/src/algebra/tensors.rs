//! Constant background tensors: the metric `eta`, the Levi-Civita symbol and
//! the theta-densities built from it.

use num_traits::{One, Zero};

use super::poly::{base_theta, qi, Poly, Q};
use crate::error::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackgroundTensors {
    pub n: usize,
    eta: Vec<Q>,
    eta_inv: Vec<Q>,
}

/// Sign of the permutation sorting `idx`, or 0 if an index repeats.
pub fn permutation_sign(idx: &[u8]) -> i64 {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - i - 1 {
            if v[j] == v[j + 1] {
                return 0;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

impl BackgroundTensors {
    pub fn euclidean(n: usize) -> Self {
        BackgroundTensors::diagonal(&vec![Q::one(); n]).expect("identity metric")
    }

    /// `eta = diag(d_0, ..., d_{n-1})`.
    pub fn diagonal(diag: &[Q]) -> Result<Self, AlgebraError> {
        let n = diag.len();
        let mut eta = vec![Q::zero(); n * n];
        let mut inv = vec![Q::zero(); n * n];
        for (a, d) in diag.iter().enumerate() {
            if d.is_zero() {
                return Err(AlgebraError::DegenerateMetric);
            }
            eta[a * n + a] = d.clone();
            inv[a * n + a] = Q::one() / d;
        }
        Ok(BackgroundTensors { n, eta, eta_inv: inv })
    }

    pub fn minkowski(n: usize) -> Self {
        let mut d = vec![Q::one(); n];
        if n > 0 {
            d[0] = qi(-1);
        }
        BackgroundTensors::diagonal(&d).expect("nondegenerate")
    }

    pub fn eta(&self, a: usize, b: usize) -> &Q {
        &self.eta[a * self.n + b]
    }

    pub fn eta_inv(&self, a: usize, b: usize) -> &Q {
        &self.eta_inv[a * self.n + b]
    }

    pub fn diag(&self) -> Vec<Q> {
        (0..self.n).map(|a| self.eta(a, a).clone()).collect()
    }

    /// `eta * eta^{-1} - 1`, all zero for a valid metric.
    pub fn inverse_defect(&self) -> Vec<Q> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mut s = Q::zero();
                for c in 0..n {
                    s += self.eta(a, c) * self.eta_inv(c, b);
                }
                if a == b {
                    s -= Q::one();
                }
                out.push(s);
            }
        }
        out
    }

    /// `eps_{i_1...i_n}` with `eps_{0...n-1} = 1`.
    pub fn epsilon(&self, idx: &[u8]) -> i64 {
        if idx.len() != self.n || idx.iter().any(|&i| i as usize >= self.n) {
            return 0;
        }
        permutation_sign(idx)
    }

    /// `theta^{(n-k)}_{a_1...a_k} = 1/(n-k)! eps_{a_1..a_k b_1..b_{n-k}} theta^{b_1}...theta^{b_{n-k}}`.
    /// The `(n-k)!` orderings of each complement coincide, so the result is
    /// a single theta-monomial.
    pub fn theta_basis(&self, indices: &[u8]) -> Result<Poly, AlgebraError> {
        if indices.len() > self.n || indices.iter().any(|&i| i as usize >= self.n) {
            return Err(AlgebraError::IndexOutOfRange(format!("{:?} for n = {}", indices, self.n)));
        }
        let complement: Vec<u8> = (0..self.n as u8).filter(|b| !indices.contains(b)).collect();
        if complement.len() != self.n - indices.len() {
            return Ok(Poly::zero());
        }
        let mut all = indices.to_vec();
        all.extend_from_slice(&complement);
        let sign = self.epsilon(&all);
        let mut p = Poly::int(sign);
        for b in complement {
            p = &p * &Poly::gen(&base_theta(b));
        }
        Ok(p)
    }

    /// The top theta-monomial `theta^0 ... theta^{n-1}`.
    pub fn theta_top(&self) -> Poly {
        self.theta_basis(&[]).expect("in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(a: u8) -> Poly {
        Poly::gen(&base_theta(a))
    }

    // independent oracle: literal sum over all ordered tuples with the 1/(n-k)! prefactor
    fn theta_basis_bruteforce(n: usize, idx: &[u8]) -> Poly {
        let t = BackgroundTensors::euclidean(n);
        let m = n - idx.len();
        let mut acc = Poly::zero();
        let mut tuple = vec![0u8; m];
        fn rec(t: &BackgroundTensors, idx: &[u8], tuple: &mut Vec<u8>, pos: usize, acc: &mut Poly) {
            if pos == tuple.len() {
                let mut all = idx.to_vec();
                all.extend_from_slice(tuple);
                let e = t.epsilon(&all);
                if e != 0 {
                    let mut p = Poly::int(e);
                    for &b in tuple.iter() {
                        p = &p * &Poly::gen(&base_theta(b));
                    }
                    *acc += p;
                }
                return;
            }
            for b in 0..t.n as u8 {
                tuple[pos] = b;
                rec(t, idx, tuple, pos + 1, acc);
            }
        }
        rec(&t, idx, &mut tuple, 0, &mut acc);
        let fact: i64 = (1..=m as i64).product();
        acc.scale(&(Q::one() / qi(fact)))
    }

    #[test]
    fn theta_basis_matches_bruteforce() {
        let t = BackgroundTensors::euclidean(4);
        for idx in [vec![], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 1, 2, 3], vec![3], vec![2, 0, 3]] {
            assert_eq!(t.theta_basis(&idx).unwrap(), theta_basis_bruteforce(4, &idx), "{:?}", idx);
        }
    }

    #[test]
    fn theta_basis_examples() {
        let t = BackgroundTensors::euclidean(4);
        assert_eq!(t.theta_basis(&[]).unwrap(), &(&(&th(0) * &th(1)) * &th(2)) * &th(3));
        assert_eq!(t.theta_basis(&[0, 1, 2, 3]).unwrap(), Poly::one());
        assert_eq!(t.theta_basis(&[0, 1]).unwrap(), &th(2) * &th(3));
        assert!(t.theta_basis(&[1, 1]).unwrap().is_zero());
    }

    #[test]
    fn metric_inverse_and_epsilon() {
        let t = BackgroundTensors::minkowski(4);
        assert!(t.inverse_defect().iter().all(|x| x.is_zero()));
        assert_eq!(t.epsilon(&[0, 1, 2, 3]), 1);
        assert_eq!(t.epsilon(&[1, 0, 2, 3]), -1);
        assert_eq!(t.epsilon(&[1, 1, 2, 3]), 0);
    }
}
