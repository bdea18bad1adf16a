//! Chebyshev polynomials of the first kind and the `Λ*` Möbius conjecture:
//! `μ(a^i, c^j)` over `Λ = {a, b < c}` is the coefficient of `x^{j-i}` in
//! `T_{i+j}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::mobius_recurrence;
use crate::poset::Poset;
use crate::words::Word;

/// Largest `i + j` the conjecture checker will enumerate.
pub const MAX_LAMBDA_SIZE: usize = 8;

/// `T_n` as its coefficient vector, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChebyshevPoly {
    pub coeffs: Vec<i64>,
}

impl ChebyshevPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn eval(&self, x: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * x + c)
    }
}

/// `T_0 = 1`, `T_1 = x`, `T_n = 2x T_{n-1} - T_{n-2}`.
pub fn chebyshev_coeffs(n: usize) -> ChebyshevPoly {
    let mut prev = vec![1i64];
    if n == 0 {
        return ChebyshevPoly { coeffs: prev };
    }
    let mut cur = vec![0i64, 1];
    for _ in 1..n {
        let mut next = vec![0i64; cur.len() + 1];
        for (k, &c) in cur.iter().enumerate() {
            next[k + 1] += 2 * c;
        }
        for (k, &c) in prev.iter().enumerate() {
            next[k] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    ChebyshevPoly { coeffs: cur }
}

/// One grid point of the conjecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LambdaCheck {
    pub i: usize,
    pub j: usize,
    pub mu: i64,
    pub coeff: i64,
    pub equal: bool,
}

/// Compares `μ(a^i, c^j)`, computed by the interval recurrence, with the
/// Chebyshev coefficient. Reports the outcome either way.
pub fn check_lambda_conjecture(i: usize, j: usize) -> Result<LambdaCheck> {
    if i == 0 || i > j || i + j > MAX_LAMBDA_SIZE {
        return Err(Error::OutOfRange(format!(
            "need 1 <= i <= j and i + j <= {MAX_LAMBDA_SIZE}, got ({i},{j})"
        )));
    }
    let p = Poset::lambda();
    let a = p.elem("a")?;
    let c = p.elem("c")?;
    let mu = mobius_recurrence(&Word(vec![a; i]), &Word(vec![c; j]), &p)?;
    let coeff = chebyshev_coeffs(i + j).coeff(j - i);
    Ok(LambdaCheck {
        i,
        j,
        mu,
        coeff,
        equal: mu == coeff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_polynomials() {
        assert_eq!(chebyshev_coeffs(0).coeffs, vec![1]);
        assert_eq!(chebyshev_coeffs(1).coeffs, vec![0, 1]);
        assert_eq!(chebyshev_coeffs(2).coeffs, vec![-1, 0, 2]);
        assert_eq!(chebyshev_coeffs(3).coeffs, vec![0, -3, 0, 4]);
        assert_eq!(chebyshev_coeffs(4).coeffs, vec![1, 0, -8, 0, 8]);
    }

    #[test]
    fn values_at_unit() {
        for n in 0..20 {
            let t = chebyshev_coeffs(n);
            assert_eq!(t.degree(), n);
            assert_eq!(t.eval(1), 1);
            assert_eq!(t.eval(-1), if n % 2 == 0 { 1 } else { -1 });
            if n >= 1 {
                assert_eq!(t.coeffs[n], 1 << (n - 1));
            }
        }
    }

    #[test]
    fn cos_multiple_angle() {
        for n in 0..12 {
            let t = chebyshev_coeffs(n);
            for k in 0..7 {
                let theta = 0.37 * k as f64;
                let x = theta.cos();
                let v: f64 = t
                    .coeffs
                    .iter()
                    .rev()
                    .fold(0.0, |acc, &c| acc * x + c as f64);
                assert!((v - (n as f64 * theta).cos()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn lambda_grid_points() {
        assert_eq!(
            check_lambda_conjecture(1, 2).unwrap(),
            LambdaCheck {
                i: 1,
                j: 2,
                mu: -3,
                coeff: -3,
                equal: true
            }
        );
        let c = check_lambda_conjecture(1, 1).unwrap();
        assert_eq!((c.mu, c.coeff), (-1, -1));
        let c = check_lambda_conjecture(2, 2).unwrap();
        assert_eq!((c.mu, c.coeff), (1, 1));
        assert!(matches!(
            check_lambda_conjecture(2, 1),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            check_lambda_conjecture(0, 3),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            check_lambda_conjecture(4, 5),
            Err(Error::OutOfRange(_))
        ));
    }
}
