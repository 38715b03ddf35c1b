//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod estimate with the embedded 7-point Gauss error.
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Integrate over `[a, b]`, bisecting the interval with the largest error
/// estimate until the total estimate is below `tol` (absolute).
pub fn integrate<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    tol: f64,
    max_intervals: usize,
) -> Result<(f64, f64)> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let (v, e) = gk15(f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut err = e;
    while err > tol {
        if parts.len() >= max_intervals {
            return Err(Error::QuadratureDiverged { error: err, tol });
        }
        let (i, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = parts.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(Error::QuadratureDiverged { error: err, tol });
        }
        let left = gk15(f, lo, mid);
        let right = gk15(f, mid, hi);
        parts.push((lo, mid, left.0, left.1));
        parts.push((mid, hi, right.0, right.1));
        err = parts.iter().map(|p| p.3).sum();
    }
    Ok((parts.iter().map(|p| p.2).sum(), err))
}

/// Integrate over consecutive pieces `[p_0, p_1], [p_1, p_2], ...`, giving each
/// a share of `tol` proportional to its length.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(
    f: &mut F,
    points: &[f64],
    tol: f64,
    max_intervals: usize,
) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Ok((0.0, 0.0));
    }
    let total = points[points.len() - 1] - points[0];
    let mut val = 0.0;
    let mut err = 0.0;
    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let share = tol * (w[1] - w[0]) / total;
        let (v, e) = integrate(f, w[0], w[1], share.max(tol * 1e-6), max_intervals)?;
        val += v;
        err += e;
    }
    Ok((val, err))
}
