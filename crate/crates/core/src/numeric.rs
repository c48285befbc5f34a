//! Shared numeric machinery: angle wrapping, Gauss-Legendre quadrature,
//! Brent root finding and minimization, and small statistics helpers.

use std::f64::consts::PI;

/// Wrap an angle into `[-pi, pi)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = (theta + PI).rem_euclid(two_pi) - PI;
    if t >= PI {
        t = -PI;
    }
    t
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
///
/// Computed by Newton iteration on the Legendre polynomial with the usual
/// Chebyshev-like initial guesses; accurate to machine precision for the
/// orders used here (<= 128).
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let mut out = Vec::with_capacity(n);
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_n'(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((-x, w));
        if n - 1 - i != i {
            out.push((x, w));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Fixed-order Gauss-Legendre integral of `f` over `[a, b]`.
pub fn integrate_gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: &[(f64, f64)]) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    rule.iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// Adaptive Gauss-Legendre integration to absolute tolerance `abs_tol`.
///
/// Bisects panels until the 16- and 32-point estimates agree; robust to
/// algebraic endpoint singularities such as `x^{2/alpha}` at a ramp zero.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> f64 {
    let coarse = gauss_legendre(16);
    let fine = gauss_legendre(32);
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        tol: f64,
        depth: u32,
        coarse: &[(f64, f64)],
        fine: &[(f64, f64)],
    ) -> f64 {
        let i1 = integrate_gl(f, a, b, coarse);
        let i2 = integrate_gl(f, a, b, fine);
        if (i2 - i1).abs() <= tol || depth >= 40 {
            return i2;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, 0.5 * tol, depth + 1, coarse, fine)
            + recurse(f, m, b, 0.5 * tol, depth + 1, coarse, fine)
    }
    recurse(f, a, b, abs_tol, 0, &coarse, &fine)
}

/// Integrate over `[a, b]` split at the interior `breaks`, adaptively per panel.
pub fn integrate_adaptive_split<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
) -> f64 {
    let edges = panel_edges(a, b, breaks);
    let per = abs_tol / (edges.len() - 1) as f64;
    edges
        .windows(2)
        .map(|w| integrate_adaptive(f, w[0], w[1], per))
        .sum()
}

/// Sorted, deduplicated panel edges for `[a, b]` with the given interior breaks.
pub fn panel_edges(a: f64, b: f64, breaks: &[f64]) -> Vec<f64> {
    let mut edges = vec![a];
    let mut interior: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > a + 1e-14 && x < b - 1e-14)
        .collect();
    interior.sort_by(|p, q| p.total_cmp(q));
    for x in interior {
        if x - edges.last().unwrap() > 1e-14 {
            edges.push(x);
        }
    }
    edges.push(b);
    edges
}

#[derive(Debug, thiserror::Error)]
pub enum RootError {
    #[error("root is not bracketed: f({a}) = {fa}, f({b}) = {fb}")]
    NotBracketed { a: f64, fa: f64, b: f64, fb: f64 },
    #[error("root finding did not converge within {0} iterations")]
    NoConvergence(usize),
}

/// Brent's method for a root of `f` on `[a, b]`; `f(a)` and `f(b)` must differ
/// in sign. Converges to `x_tol` on the abscissa.
pub fn brent_root<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    x_tol: f64,
    max_iter: usize,
) -> Result<f64, RootError> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NotBracketed { a, fa, b, fb });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * x_tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    Err(RootError::NoConvergence(max_iter))
}

/// Golden-section minimization of `f` on `[a, b]` to abscissa tolerance `x_tol`.
/// Returns `(x_min, f(x_min))`.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, x_tol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    if fc < fx && fc < fd {
        (c, fc)
    } else if fd < fx {
        (d, fd)
    } else {
        (x, fx)
    }
}

/// 95% Wilson score interval for `successes` out of `n` Bernoulli trials.
pub fn wilson_interval_95(successes: u64, n: u64) -> (f64, f64) {
    // 97.5% standard normal quantile.
    const Z: f64 = 1.959_963_984_540_054;
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = Z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes == n {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// Least-squares line fit. Returns `(slope, intercept, r_squared)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    (slope, intercept, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_range() {
        for &t in &[0.0, 1.3, -1.3, PI, -PI, 3.5 * PI, -7.25 * PI, 123.456] {
            let w = wrap_angle(t);
            assert!((-PI..PI).contains(&w), "wrap({t}) = {w}");
            // wrapped value differs from input by a multiple of 2*pi
            let k = (t - w) / (2.0 * PI);
            assert!((k - k.round()).abs() < 1e-9, "t={t} w={w}");
        }
        assert_eq!(wrap_angle(PI), -PI);
    }

    #[test]
    fn gauss_legendre_matches_reference_nodes() {
        // 5-point rule, Abramowitz & Stegun table 25.4.
        let rule = gauss_legendre(5);
        let expect = [
            (-0.906_179_845_938_664, 0.236_926_885_056_189),
            (-0.538_469_310_105_683, 0.478_628_670_499_366),
            (0.0, 0.568_888_888_888_889),
            (0.538_469_310_105_683, 0.478_628_670_499_366),
            (0.906_179_845_938_664, 0.236_926_885_056_189),
        ];
        for ((x, w), (xe, we)) in rule.iter().zip(expect.iter()) {
            assert!((x - xe).abs() < 1e-14);
            assert!((w - we).abs() < 1e-14);
        }
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let rule = gauss_legendre(64);
        // degree 2n-1 polynomials integrate exactly; try x^10 on [0, 2]
        let v = integrate_gl(&|x: f64| x.powi(10), 0.0, 2.0, &rule);
        assert!((v - 2048.0 / 11.0).abs() < 1e-10);
    }

    #[test]
    fn adaptive_handles_algebraic_singularity() {
        // int_0^1 x^(2/3) dx = 3/5, infinite slope at 0
        let v = integrate_adaptive(&|x: f64| x.powf(2.0 / 3.0), 0.0, 1.0, 1e-12);
        assert!((v - 0.6).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn brent_root_finds_cos_zero() {
        let r = brent_root(|x: f64| x.cos(), 1.0, 2.0, 1e-14, 200).unwrap();
        assert!((r - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn brent_root_rejects_unbracketed() {
        assert!(matches!(
            brent_root(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12, 100),
            Err(RootError::NotBracketed { .. })
        ));
    }

    #[test]
    fn golden_min_quadratic() {
        // abscissa accuracy saturates near sqrt(eps) for a quadratic; the
        // minimum value itself is tight
        let (x, fx) = golden_min(|x: f64| (x - 1.25) * (x - 1.25) + 3.0, -4.0, 6.0, 1e-10);
        assert!((x - 1.25).abs() < 1e-6, "x = {x}");
        assert!((fx - 3.0).abs() < 1e-12);
    }

    #[test]
    fn wilson_interval_contains_point_estimate() {
        let (lo, hi) = wilson_interval_95(37, 100);
        assert!(lo < 0.37 && 0.37 < hi);
        assert!(lo > 0.27 && hi < 0.47);
        // degenerate edges stay in [0, 1]
        let (lo0, _) = wilson_interval_95(0, 50);
        let (_, hi1) = wilson_interval_95(50, 50);
        assert_eq!(lo0, 0.0);
        assert_eq!(hi1, 1.0);
    }

    #[test]
    fn linear_fit_recovers_line() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 7.0).collect();
        let (m, b, r2) = linear_fit(&xs, &ys);
        assert!((m - 2.5).abs() < 1e-12);
        assert!((b + 7.0).abs() < 1e-11);
        assert!((r2 - 1.0).abs() < 1e-12);
    }
}
