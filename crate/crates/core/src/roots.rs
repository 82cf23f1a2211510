//! Scalar root location by scanning and bisection.

use crate::error::Result;

/// Roots of `f` on `[lo, hi)` (or `[lo, hi]` when `closed`), found in `cells`
/// equal subintervals. Sign changes are refined by bisection; exact zeros at
/// scan points are reported as they are. Roots without a sign change inside a
/// cell are missed.
pub fn bracket_roots<F>(
    f: &F,
    lo: f64,
    hi: f64,
    cells: usize,
    tol: f64,
    closed: bool,
) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let point = |i: usize| {
        if i == cells {
            hi
        } else {
            lo + (hi - lo) * (i as f64 / cells as f64)
        }
    };
    let xs: Vec<f64> = (0..=cells).map(point).collect();
    let vs = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    let mut roots = Vec::new();
    for i in 0..cells {
        if vs[i] == 0.0 {
            roots.push(xs[i]);
        } else if vs[i] * vs[i + 1] < 0.0 {
            roots.push(bisect(f, xs[i], xs[i + 1], vs[i], tol)?);
        }
    }
    if closed && vs[cells] == 0.0 {
        roots.push(hi);
    }
    Ok(roots)
}

/// Bisection on a sign-changing interval until its width is below
/// `tol·(1 + |x|)` or no midpoint is representable.
pub fn bisect<F>(f: &F, mut lo: f64, mut hi: f64, mut flo: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * (1.0 + mid.abs()) || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sine_roots() {
        let f = |x: f64| Ok(x.sin());
        let roots = bracket_roots(&f, 0.5, 10.0, 100, 1e-15, false).unwrap();
        assert_eq!(roots.len(), 3);
        for (k, r) in roots.iter().enumerate() {
            assert!((r - (k + 1) as f64 * std::f64::consts::PI).abs() < 1e-13);
        }
    }

    #[test]
    fn exact_zeros_and_closed_end() {
        let f = |x: f64| Ok(x * (x - 1.0));
        assert_eq!(
            bracket_roots(&f, 0.0, 1.0, 4, 1e-15, false).unwrap(),
            vec![0.0]
        );
        assert_eq!(
            bracket_roots(&f, 0.0, 1.0, 4, 1e-15, true).unwrap(),
            vec![0.0, 1.0]
        );
    }
}
