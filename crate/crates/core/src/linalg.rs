//! Dense inverse of small complex matrices by LU with partial pivoting.

use num_complex::Complex64;

pub type Mat<const N: usize> = [[Complex64; N]; N];

pub fn zeros<const N: usize>() -> Mat<N> {
    [[Complex64::new(0.0, 0.0); N]; N]
}

/// Induced 1-norm (max absolute column sum).
pub fn norm_1<const N: usize>(a: &Mat<N>) -> f64 {
    (0..N)
        .map(|c| (0..N).map(|r| a[r][c].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverse of `a` together with its 1-norm condition number.
///
/// Returns `None` when a pivot is exactly zero.
pub fn inverse<const N: usize>(a: &Mat<N>) -> Option<(Mat<N>, f64)> {
    let mut lu = *a;
    let mut perm: [usize; N] = std::array::from_fn(|i| i);

    for k in 0..N {
        let p = (k..N)
            .max_by(|&x, &y| lu[x][k].norm().total_cmp(&lu[y][k].norm()))
            .unwrap();
        if lu[p][k].norm() == 0.0 {
            return None;
        }
        if p != k {
            lu.swap(p, k);
            perm.swap(p, k);
        }
        let pivot = lu[k][k];
        for r in k + 1..N {
            let f = lu[r][k] / pivot;
            lu[r][k] = f;
            for c in k + 1..N {
                let t = lu[k][c];
                lu[r][c] -= f * t;
            }
        }
    }

    let mut inv = zeros::<N>();
    for col in 0..N {
        // Solve L y = P e_col, then U x = y.
        let mut x = [Complex64::new(0.0, 0.0); N];
        for r in 0..N {
            let mut s = if perm[r] == col {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            for c in 0..r {
                s -= lu[r][c] * x[c];
            }
            x[r] = s;
        }
        for r in (0..N).rev() {
            let mut s = x[r];
            for c in r + 1..N {
                s -= lu[r][c] * x[c];
            }
            x[r] = s / lu[r][r];
        }
        for r in 0..N {
            inv[r][col] = x[r];
        }
    }

    let cond = norm_1(a) * norm_1(&inv);
    Some((inv, cond))
}

pub fn matmul<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> Mat<N> {
    let mut out = zeros::<N>();
    for r in 0..N {
        for c in 0..N {
            out[r][c] = (0..N).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}
