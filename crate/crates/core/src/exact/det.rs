use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::bigfloat::BigFloat;
use super::matrix::Matrix;
use super::rational::BigRational;
use crate::{Error, Result};

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Each row is first scaled to integers by the lcm of its denominators, so
/// the elimination itself runs over `BigInt` and every division is exact.
pub fn det_exact(m: &Matrix<BigRational>) -> BigRational {
    let n = m.n();
    if n == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let mut a = Matrix::from_fn(n, |_, _| BigInt::zero());
    for i in 0..n {
        let lcm = m
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        for j in 0..n {
            a[(i, j)] = (m[(i, j)].numer() * &lcm) / m[(i, j)].denom();
        }
        scale *= lcm;
    }
    BigRational::new(bareiss(a), scale)
}

fn bareiss(mut a: Matrix<BigInt>) -> BigInt {
    let n = a.n();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = v / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant by Laplace expansion along the first row.
///
/// Factorial cost; kept as an independent reference for small matrices.
pub fn det_cofactor(m: &Matrix<BigRational>) -> BigRational {
    let n = m.n();
    if n == 0 {
        return BigRational::one();
    }
    if n == 1 {
        return m[(0, 0)].clone();
    }
    let mut acc = BigRational::zero();
    for j in 0..n {
        if m[(0, j)].is_zero() {
            continue;
        }
        let term = &m[(0, j)] * det_cofactor(&m.minor(0, j));
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// A floating-point determinant with its first-order relative error bound.
#[derive(Clone, Debug)]
pub struct FloatDet {
    pub value: BigFloat,
    /// `log2` of the estimated relative error; `+inf` for a singular pivot.
    pub log2_rel_error: f64,
}

/// Relative error threshold above which [`det_float`] refuses the result.
const MAX_LOG2_REL_ERROR: f64 = -32.0;

/// Determinant by partial-pivoting LU at `precision` bits, with an error
/// estimate.
///
/// With `PA = LU` the computed factors satisfy `|δ(PA)| <= γ_n |L||U|`
/// entrywise, and `δ det / det = tr((PA)^-1 δ(PA))` to first order. The
/// estimate is therefore `γ_n Σ_ij |B_ji| (|L||U|)_ij + n u` with
/// `B = U^-1 L^-1` and `u = 2^-precision`.
pub fn det_float_estimate(m: &Matrix<BigFloat>, precision: u32) -> FloatDet {
    let n = m.n();
    let prec = precision.max(BigFloat::MIN_PRECISION);
    if n == 0 {
        return FloatDet {
            value: BigFloat::one(prec),
            log2_rel_error: f64::NEG_INFINITY,
        };
    }
    let mut a = m.map(|x| x.with_precision(prec));
    let mut negate = false;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| {
                a[(i, k)]
                    .abs()
                    .partial_cmp(&a[(j, k)].abs())
                    .unwrap()
            })
            .unwrap();
        if a[(pivot, k)].is_zero() {
            return FloatDet {
                value: BigFloat::zero(prec),
                log2_rel_error: f64::INFINITY,
            };
        }
        if pivot != k {
            a.swap_rows(pivot, k);
            negate = !negate;
        }
        for i in k + 1..n {
            let factor = &a[(i, k)] / &a[(k, k)];
            for j in k + 1..n {
                let v = &a[(i, j)] - &(&factor * &a[(k, j)]);
                a[(i, j)] = v;
            }
            a[(i, k)] = factor;
        }
    }
    let mut value = BigFloat::one(prec);
    for k in 0..n {
        value = &value * &a[(k, k)];
    }
    if negate {
        value = -value;
    }
    FloatDet {
        log2_rel_error: lu_error_log2(&a, prec),
        value,
    }
}

/// `log2` of the first-order error bound for the packed LU factors in `lu`.
fn lu_error_log2(lu: &Matrix<BigFloat>, prec: u32) -> f64 {
    let n = lu.n();
    let est = BigFloat::MIN_PRECISION;
    let l = |i: usize, j: usize| -> BigFloat {
        if i == j {
            BigFloat::one(prec)
        } else if i > j {
            lu[(i, j)].clone()
        } else {
            BigFloat::zero(prec)
        }
    };
    let u = |i: usize, j: usize| -> BigFloat {
        if i <= j {
            lu[(i, j)].clone()
        } else {
            BigFloat::zero(prec)
        }
    };
    // |L||U| at low precision
    let mut lu_abs = Matrix::from_fn(n, |_, _| BigFloat::zero(est));
    for i in 0..n {
        for j in 0..n {
            let mut acc = BigFloat::zero(est);
            for k in 0..=i.min(j) {
                let p = l(i, k).abs().with_precision(est) * u(k, j).abs().with_precision(est);
                acc = acc + p;
            }
            lu_abs[(i, j)] = acc;
        }
    }
    // L^-1: unit lower triangular, forward substitution per column
    let mut linv = Matrix::from_fn(n, |i, j| if i == j { BigFloat::one(prec) } else { BigFloat::zero(prec) });
    for c in 0..n {
        for i in c + 1..n {
            let mut acc = BigFloat::zero(prec);
            for k in c..i {
                acc = acc + &lu[(i, k)] * &linv[(k, c)];
            }
            linv[(i, c)] = -acc;
        }
    }
    // U^-1: upper triangular, back substitution per column
    let mut uinv = Matrix::from_fn(n, |_, _| BigFloat::zero(prec));
    for c in (0..n).rev() {
        uinv[(c, c)] = BigFloat::one(prec) / &lu[(c, c)];
        for i in (0..c).rev() {
            let mut acc = BigFloat::zero(prec);
            for k in i + 1..=c {
                acc = acc + &lu[(i, k)] * &uinv[(k, c)];
            }
            uinv[(i, c)] = -(acc / &lu[(i, i)]);
        }
    }
    // S = Σ_ij |B_ji| |L||U|_ij with B = U^-1 L^-1
    let mut sum = BigFloat::zero(est);
    for j in 0..n {
        for i in 0..n {
            let mut b = BigFloat::zero(prec);
            for k in j.max(i)..n {
                // B_ji = Σ_k (U^-1)_jk (L^-1)_ki, nonzero only for k >= j and k >= i
                b = b + &uinv[(j, k)] * &linv[(k, i)];
            }
            sum = sum + b.abs().with_precision(est) * &lu_abs[(i, j)];
        }
    }
    let nf = n as f64;
    let gamma_log2 = nf.log2() - f64::from(prec);
    let bound = sum.log2_abs() + gamma_log2;
    // add the n u from forming the product of the pivots
    let product = nf.log2() - f64::from(prec);
    let (hi, lo) = if bound > product { (bound, product) } else { (product, bound) };
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// Determinant at `precision` bits; fails when the estimated relative error
/// exceeds `2^-32`.
pub fn det_float(m: &Matrix<BigFloat>, precision: u32) -> Result<BigFloat> {
    let d = det_float_estimate(m, precision);
    if d.log2_rel_error > MAX_LOG2_REL_ERROR {
        return Err(Error::LossOfSignificance {
            log2_error: d.log2_rel_error,
        });
    }
    Ok(d.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn rat(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| ratio(x, 1)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn empty_matrix_has_unit_determinant() {
        let m: Matrix<BigRational> = Matrix::from_fn(0, |_, _| unreachable!());
        assert_eq!(det_exact(&m), ratio(1, 1));
        let f: Matrix<BigFloat> = Matrix::from_fn(0, |_, _| unreachable!());
        assert_eq!(det_float(&f, 64).unwrap().to_f64(), 1.0);
    }

    #[test]
    fn two_by_two() {
        assert_eq!(det_exact(&rat(&[&[1, 2], &[3, 4]])), ratio(-2, 1));
    }

    #[test]
    fn zero_leading_pivot_needs_swap() {
        let m = rat(&[&[0, 1, 2], &[3, 0, 1], &[1, 1, 0]]);
        assert_eq!(det_exact(&m), det_cofactor(&m));
        assert_eq!(det_exact(&m), ratio(7, 1));
    }

    #[test]
    fn singular_matrix() {
        let m = rat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(det_exact(&m), ratio(0, 1));
    }

    #[test]
    fn rational_entries_against_cofactor() {
        let m = Matrix::from_fn(5, |i, j| ratio((i * 7 + j * 3) as i64 % 11 - 5, (i + 2 * j + 1) as i64));
        assert_eq!(det_exact(&m), det_cofactor(&m));
    }

    #[test]
    fn identity_float() {
        let m = Matrix::from_fn(10, |i, j| BigFloat::from_i64((i == j) as i64, 128));
        let d = det_float(&m, 128).unwrap();
        assert_eq!(d.to_f64(), 1.0);
    }

    #[test]
    fn hilbert_twelve_at_64_bits_loses_significance() {
        let h = Matrix::from_fn(12, |i, j| BigFloat::from_rational(&ratio(1, (i + j + 1) as i64), 64));
        match det_float(&h, 64) {
            Err(Error::LossOfSignificance { log2_error }) => assert!(log2_error > -32.0),
            other => panic!("expected loss of significance, got {other:?}"),
        }
        // the same matrix is fine with enough bits
        let h = Matrix::from_fn(12, |i, j| BigFloat::from_rational(&ratio(1, (i + j + 1) as i64), 256));
        let exact = det_exact(&Matrix::from_fn(12, |i, j| ratio(1, (i + j + 1) as i64)));
        let d = det_float(&h, 256).unwrap();
        let rel = (d.to_rational() - &exact) / &exact;
        assert!(crate::exact::ln_abs(&rel) / std::f64::consts::LN_2 < -150.0);
    }
}
