//! Elementary symmetric polynomials of principal curvatures and the
//! normalized higher-order mean curvatures built from them.

use crate::curvature::CurvatureError;
use crate::{binomial, Real};

/// Principal curvatures `κ₁..κ_n` at a point of an `n`-dimensional
/// hypersurface.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTuple<T> {
    kappa: Vec<T>,
}

impl<T: Real> CurvatureTuple<T> {
    pub fn new(kappa: Vec<T>) -> Result<Self, CurvatureError> {
        if kappa.is_empty() {
            return Err(CurvatureError::EmptyTuple);
        }
        Ok(Self { kappa })
    }

    pub fn dim(&self) -> usize {
        self.kappa.len()
    }

    pub fn kappa(&self) -> &[T] {
        &self.kappa
    }

    /// All of `e_0..e_n` at once.
    pub fn elem_sym_all(&self) -> Vec<T> {
        elem_sym_upto(&self.kappa, self.kappa.len())
    }

    /// `e_k(κ)`, the `k`-th elementary symmetric polynomial.
    pub fn elem_sym(&self, k: usize) -> Result<T, CurvatureError> {
        let n = self.dim();
        if k > n {
            return Err(CurvatureError::OrderOutOfRange { k, max: n });
        }
        Ok(elem_sym_upto(&self.kappa, k)[k])
    }

    /// `H_k = e_k / C(n, k)` with `H_0 = 1` and `H_{n+1} = 0`.
    pub fn normalized_hk(&self, k: usize) -> Result<T, CurvatureError> {
        let n = self.dim();
        match k {
            0 => Ok(T::one()),
            k if k == n + 1 => Ok(T::zero()),
            k if k > n + 1 => Err(CurvatureError::OrderOutOfRange { k, max: n + 1 }),
            k => Ok(self.elem_sym(k)? / binomial::<T>(n, k)),
        }
    }

    /// Checks `H_k^{1/k} ≤ H_{k-1}^{1/(k-1)} ≤ … ≤ H₁` under the hypothesis
    /// `H_k > 0`.
    pub fn maclaurin_chain(&self, k: usize) -> Result<MaclaurinOutcome<T>, CurvatureError> {
        let n = self.dim();
        if k == 0 || k > n {
            return Err(CurvatureError::OrderOutOfRange { k, max: n });
        }
        let e = elem_sym_upto(&self.kappa, k);
        let hk = e[k] / binomial::<T>(n, k);
        if !(hk > T::zero()) {
            return Ok(MaclaurinOutcome::HypothesisViolated { hk });
        }
        let values: Vec<T> = (1..=k)
            .map(|j| {
                let h = e[j] / binomial::<T>(n, j);
                h.powf(T::one() / T::from_count(j))
            })
            .collect();
        let slack = T::lit(1e-12);
        let monotone = values
            .windows(2)
            .all(|w| w[1] <= w[0] + slack * w[0].abs().max(T::one()));
        Ok(MaclaurinOutcome::Chain { values, monotone })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MaclaurinOutcome<T> {
    /// `values[j-1] = H_j^{1/j}` for `j = 1..=k`.
    Chain { values: Vec<T>, monotone: bool },
    /// `H_k ≤ 0`, so the chain is not defined.
    HypothesisViolated { hk: T },
}

impl<T> MaclaurinOutcome<T> {
    pub fn is_monotone(&self) -> bool {
        matches!(self, MaclaurinOutcome::Chain { monotone: true, .. })
    }
}

/// Coefficients `e_0..e_k` of `Π(1 + κ_i x)` truncated at degree `k`;
/// `O(n·k)` work. The factors are multiplied in sorted order, so the result
/// is bitwise independent of the input order.
pub fn elem_sym_upto<T: Real>(kappa: &[T], k: usize) -> Vec<T> {
    let mut sorted = kappa.to_vec();
    sorted.sort_by(|a, b| a.to_f64_lossy().total_cmp(&b.to_f64_lossy()));
    let mut e = vec![T::zero(); k + 1];
    e[0] = T::one();
    for (i, &x) in sorted.iter().enumerate() {
        let top = (i + 1).min(k);
        for j in (1..=top).rev() {
            let prev = e[j - 1];
            e[j] += x * prev;
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(k: &[f64]) -> CurvatureTuple<f64> {
        CurvatureTuple::new(k.to_vec()).unwrap()
    }

    /// Sum over all k-subsets, by bitmask enumeration.
    fn enumerate_e(kappa: &[f64], k: usize) -> f64 {
        let n = kappa.len();
        (0u32..(1 << n))
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|i| m & (1 << i) != 0).map(|i| kappa[i]).product::<f64>())
            .sum()
    }

    #[test]
    fn e2_of_123() {
        assert_eq!(enumerate_e(&[1.0, 2.0, 3.0], 2), 11.0);
        assert_eq!(tuple(&[1.0, 2.0, 3.0]).elem_sym(2).unwrap(), 11.0);
    }

    #[test]
    fn matches_enumeration() {
        let kappa = [0.3, -1.2, 2.5, 0.7, -0.4, 1.9, 1.1];
        let t = tuple(&kappa);
        for k in 0..=kappa.len() {
            let want = enumerate_e(&kappa, k);
            let got = t.elem_sym(k).unwrap();
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "k={k}: {got} vs {want}");
        }
    }

    #[test]
    fn constant_tuple_gives_binomials() {
        let c = 1.7;
        let t = tuple(&[c; 6]);
        for k in 0..=6 {
            let want = binomial::<f64>(6, k) * c.powi(k as i32);
            assert!((t.elem_sym(k).unwrap() - want).abs() < 1e-12 * want);
            // round sphere of radius 1/c: H_k = c^k
            assert!((t.normalized_hk(k).unwrap() - c.powi(k as i32)).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn conventions_and_ranges() {
        let t = tuple(&[1.0, 2.0]);
        assert_eq!(t.elem_sym(0).unwrap(), 1.0);
        assert_eq!(t.normalized_hk(0).unwrap(), 1.0);
        assert_eq!(t.normalized_hk(2).unwrap(), 2.0);
        assert_eq!(t.normalized_hk(3).unwrap(), 0.0);
        assert!(t.elem_sym(3).is_err());
        assert!(t.normalized_hk(4).is_err());
        assert!(CurvatureTuple::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn maclaurin_examples() {
        match tuple(&[1.0, 4.0]).maclaurin_chain(2).unwrap() {
            MaclaurinOutcome::Chain { values, monotone } => {
                assert_eq!(values[0], 2.5);
                assert_eq!(values[1], 2.0);
                assert!(monotone);
            }
            other => panic!("{other:?}"),
        }
        match tuple(&[0.8; 5]).maclaurin_chain(5).unwrap() {
            MaclaurinOutcome::Chain { values, monotone } => {
                assert!(monotone);
                assert!(values.iter().all(|v| (v - 0.8).abs() < 1e-14));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            tuple(&[1.0, -2.0]).maclaurin_chain(2).unwrap(),
            MaclaurinOutcome::HypothesisViolated { hk: -2.0 }
        );
        assert!(tuple(&[1.0]).maclaurin_chain(0).is_err());
    }
}
