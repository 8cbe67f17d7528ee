//! Shared test oracles, deliberately independent of the library's own
//! numeric paths: the normal CDF here comes from adaptive quadrature of the
//! density, its inverse from bisection, and matrix inversion from
//! Gauss-Jordan elimination.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

/// Adaptive Simpson integration of `f` over `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(f, a, b, fa, fm, fb, whole, eps, 60)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        left + right + delta / 15.0
    } else {
        adaptive(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
            + adaptive(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
    }
}

fn density(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Upper tail P(Z > z) for z >= 0, by quadrature with relative accuracy.
pub fn normal_upper_tail(z: f64) -> f64 {
    assert!(z >= 0.0);
    // Mills-ratio style magnitude estimate to set a relative tolerance
    let magnitude = (density(z) / (z + 1.0)).max(1e-280);
    integrate(&density, z, z + 45.0, magnitude * 1e-13)
}

/// Oracle normal CDF.
pub fn oracle_normal_cdf(z: f64) -> f64 {
    if z < 0.0 {
        normal_upper_tail(-z)
    } else {
        1.0 - normal_upper_tail(z)
    }
}

/// Oracle normal quantile by bisection on the quadrature tail mass. Both
/// halves are solved in the lower tail (mirroring p > 1/2), where the tail
/// integral keeps relative accuracy, so the bisection sign stays reliable
/// for p as small as 1e-10 and as large as 1 − 1e-10.
pub fn oracle_normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    if p > 0.5 {
        -oracle_lower_quantile(1.0 - p)
    } else {
        oracle_lower_quantile(p)
    }
}

// Solves P(Z > t) = p for t >= 0 and returns z = -t.
fn oracle_lower_quantile(p: f64) -> f64 {
    let mut lo = 0.0f64;
    let mut hi = 45.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal_upper_tail(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    -(0.5 * (lo + hi))
}

/// Matrix inverse by Gauss-Jordan elimination with partial pivoting.
pub fn gauss_jordan_inverse(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut work: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut ext = row.clone();
            ext.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            ext
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| work[i][col].abs().total_cmp(&work[j][col].abs()))
            .unwrap();
        assert!(work[pivot][col].abs() > 1e-300, "singular matrix");
        work.swap(col, pivot);
        let scale = work[col][col];
        for v in &mut work[col] {
            *v /= scale;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = work[row][col];
            if factor == 0.0 {
                continue;
            }
            for k in 0..2 * n {
                work[row][k] -= factor * work[col][k];
            }
        }
    }
    work.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Small deterministic value sequence for building random-ish test inputs
/// without pulling in an RNG dependency.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
        lo + u * (hi - lo)
    }
}
