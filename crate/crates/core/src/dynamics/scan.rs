//! Zero detection for a continuous periodic function on `[0, 2π)`.

use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum ScanOutcome {
    /// A sign change (or an exact zero) refined to `param`.
    Root { param: f64 },
    /// No sign change but `|f|` drops below the band; `value` is the refined
    /// minimum of `|f|` at `param`.
    NearZero { param: f64, value: f64 },
    /// `|f| ≥ min_abs > band` at every sample.
    Clear { min_abs: f64 },
}

/// Samples `f` at `n` equally spaced points of `[0, 2π)`.
pub(crate) fn scan_closed(f: impl Fn(f64) -> f64, n: usize, band: f64) -> ScanOutcome {
    let h = TAU / n as f64;
    let vals: Vec<f64> = (0..n).map(|i| f(i as f64 * h)).collect();
    for i in 0..n {
        let (a, b) = (vals[i], vals[(i + 1) % n]);
        if a == 0.0 {
            return ScanOutcome::Root {
                param: i as f64 * h,
            };
        }
        if a * b < 0.0 {
            let lo = i as f64 * h;
            return ScanOutcome::Root {
                param: bisect(&f, lo, lo + h, a).rem_euclid(TAU),
            };
        }
    }
    // refine every small discrete minimum of |f|: a double zero can sit
    // between samples with |f| well above the band at the samples
    let vmax = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut best = (0.0, f64::INFINITY);
    for i in 0..n {
        let v = vals[i].abs();
        let left = vals[(i + n - 1) % n].abs();
        let right = vals[(i + 1) % n].abs();
        if v > left || v > right || v > 1e-3 * vmax.max(band) {
            continue;
        }
        let centre = i as f64 * h;
        let cand = golden_min(|s| f(s).abs(), centre - h, centre + h);
        if cand.1 < best.1 {
            best = cand;
        }
    }
    let sample_min = vals.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if best.1 < band {
        ScanOutcome::NearZero {
            param: best.0.rem_euclid(TAU),
            value: best.1,
        }
    } else {
        ScanOutcome::Clear {
            min_abs: best.1.min(sample_min),
        }
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimisation of a unimodal function on `[a, b]`.
pub(crate) fn golden_min(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, g(x))
}
