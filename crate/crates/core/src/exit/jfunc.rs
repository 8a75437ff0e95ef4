//! The J-function: mutual information between a bit and a consistent
//! Gaussian LLR `L ~ N(sigma^2 / 2, sigma^2)`,
//!
//! ```text
//! J(sigma) = 1 - E[log2(1 + exp(-L))]
//! ```
//!
//! evaluated by adaptive Gauss-Kronrod quadrature, and its inverse by a
//! bracketed root search.

use std::sync::OnceLock;

/// Largest mutual information the inverse resolves; larger inputs are clamped.
pub const MAX_MUTUAL_INFORMATION: f64 = 1.0 - 1e-9;

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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_41,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod estimate of `int_a^b f` and its difference to the
/// embedded 7-point Gauss rule.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, (k - g).abs() * h)
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        return k;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, 0.5 * tol, depth - 1) + adaptive(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss-Kronrod integral of `f` over `[a, b]` with absolute
/// tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    adaptive(&f, a, b, tol, 40)
}

/// `ln(1 + e^x)` without overflow.
#[inline]
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// J(sigma).
pub fn j(sigma: f64) -> f64 {
    let sigma = sigma.abs();
    if sigma == 0.0 {
        return 0.0;
    }
    let mean = 0.5 * sigma * sigma;
    // L = mean + sigma t with t standard normal; 12 standard deviations
    // leave a tail far below double precision
    let integrand =
        |t: f64| INV_SQRT_2PI * (-0.5 * t * t).exp() * softplus(-(mean + sigma * t));
    let loss = integrate(integrand, -12.0, 12.0, 1e-12) / std::f64::consts::LN_2;
    (1.0 - loss).clamp(0.0, 1.0)
}

const TABLE_STEP: f64 = 0.25;
const TABLE_LEN: usize = 241;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..TABLE_LEN).map(|i| j(i as f64 * TABLE_STEP)).collect())
}

/// J^-1(I): the `sigma` with `J(sigma) = I`. Inputs at or below 0 map to 0,
/// inputs above [`MAX_MUTUAL_INFORMATION`] are clamped to it.
pub fn j_inv(info: f64) -> f64 {
    if !(info > 0.0) {
        return 0.0;
    }
    let target = info.min(MAX_MUTUAL_INFORMATION);
    let t = table();
    let idx = t.partition_point(|&v| v < target);
    let (mut lo, mut hi) = if idx == 0 {
        (0.0, 0.0)
    } else if idx < t.len() {
        ((idx - 1) as f64 * TABLE_STEP, idx as f64 * TABLE_STEP)
    } else {
        let mut hi = (t.len() - 1) as f64 * TABLE_STEP;
        let lo = hi;
        while j(hi) < target {
            hi *= 2.0;
        }
        (lo, hi)
    };
    if lo == hi {
        return lo;
    }
    // Illinois regula falsi on g(s) = J(s) - target
    let mut g_lo = j(lo) - target;
    let mut g_hi = j(hi) - target;
    let mut side = 0i8;
    for _ in 0..100 {
        let s = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
        let s = if s.is_finite() && s > lo && s < hi { s } else { 0.5 * (lo + hi) };
        let g = j(s) - target;
        if g == 0.0 || hi - lo < 1e-13 {
            return s;
        }
        if g < 0.0 {
            lo = s;
            g_lo = g;
            if side == -1 {
                g_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = s;
            g_hi = g;
            if side == 1 {
                g_lo *= 0.5;
            }
            side = 1;
        }
        if g.abs() < 1e-15 {
            return s;
        }
    }
    0.5 * (lo + hi)
}
