/// Golden-section search for the maximum of `f` on `[a, b]`.
///
/// Stops when the bracket is narrower than `tol` or after `max_evals`
/// evaluations, and returns the best point seen as `(x, f(x))`.
pub fn golden_section_max<F>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
    max_evals: usize,
) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2;
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };

    while (b - a).abs() > tol && evals < max_evals {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if f1 > best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if f2 > best.1 {
                best = (x2, f2);
            }
        }
        evals += 1;
    }
    best
}

/// Uniform grid from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|k| if k == n - 1 { hi } else { lo + step * k as f64 })
                .collect()
        }
    }
}

/// Indices of interior local maxima; a plateau reports its first sample.
pub fn interior_maxima(values: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let n = values.len();
    let mut i = 1;
    while i + 1 < n {
        if values[i] > values[i - 1] {
            let mut k = i;
            while k + 1 < n && values[k + 1] == values[i] {
                k += 1;
            }
            if k + 1 < n && values[k + 1] < values[i] {
                out.push(i);
            }
            i = k + 1;
        } else {
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3).powi(2) + 2.0, -1.0, 2.0, 1e-10, 500);
        assert!((x - 0.3).abs() < 1e-8);
        assert!((fx - 2.0).abs() < 1e-15);
    }

    #[test]
    fn finds_kink_peak() {
        let (x, _) = golden_section_max(|x| -(x - 1.25).abs(), 0.0, 3.0, 1e-12, 500);
        assert!((x - 1.25).abs() < 1e-11);
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(-1.0, 1.0, 2), vec![-1.0, 1.0]);
        let g = linspace(0.0, 1.0, 11);
        assert_eq!(g.len(), 11);
        assert_eq!(g[10], 1.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn maxima_skip_endpoints_and_plateaus() {
        assert_eq!(interior_maxima(&[3.0, 1.0, 2.0, 1.0, 5.0]), vec![2]);
        assert_eq!(interior_maxima(&[0.0, 1.0, 1.0, 0.0]), vec![1]);
        assert_eq!(interior_maxima(&[0.0, 0.0, 0.0]), Vec::<usize>::new());
        assert_eq!(interior_maxima(&[0.0, 1.0, 1.0]), Vec::<usize>::new());
    }
}
