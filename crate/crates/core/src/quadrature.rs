//! Globally adaptive 21-point Gauss–Kronrod quadrature with caller-supplied
//! breakpoints.
//!
//! The integrands handled here are piecewise analytic with known kink
//! locations, so the interval is first cut at every breakpoint and each
//! piece is refined by bisection of the panel with the largest error.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_traits::Float;

use crate::{Error, Result};

/// Panel budget for [`integrate`].
pub const DEFAULT_MAX_PANELS: usize = 20_000;

/// Pieces per breakpoint interval before adaptive refinement starts.
const INITIAL_SPLIT: usize = 4;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_528_236,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Weights of the embedded 10-point Gauss rule at XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Estimated absolute error (sum over panels).
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut abs = WGK[10] * fc.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let abs = abs * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs);
    }
    Panel { lo, hi, value, error, abs }
}

/// Integrates `f` over `[lo, hi]` to absolute tolerance `abs_tol`, splitting
/// at every breakpoint that falls strictly inside the interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, breakpoints: &[f64], abs_tol: f64) -> Result<Integral> {
    integrate_with_budget(f, lo, hi, breakpoints, abs_tol, DEFAULT_MAX_PANELS)
}

/// [`integrate`] with an explicit panel budget.
pub fn integrate_with_budget<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    abs_tol: f64,
    max_panels: usize,
) -> Result<Integral> {
    if !(abs_tol > 0.0) {
        return Err(Error::InvalidArgument("quadrature tolerance must be positive"));
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument("quadrature limits must be finite"));
    }
    if lo == hi {
        return Ok(Integral { value: 0.0, error: 0.0, panels: 0 });
    }
    let (lo, hi, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };
    let span = hi - lo;
    let min_width = 1e-13 * span;

    let mut cuts: Vec<f64> = Vec::with_capacity(breakpoints.len() + 2);
    cuts.push(lo);
    cuts.extend(breakpoints.iter().copied().filter(|&b| b > lo + min_width && b < hi - min_width));
    cuts.push(hi);
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup_by(|a, b| (*a - *b).abs() <= min_width);
    if let Some(last) = cuts.last_mut() {
        *last = hi;
    }

    let mut heap = BinaryHeap::new();
    let mut done: Vec<Panel> = Vec::new();
    for w in cuts.windows(2) {
        let step = (w[1] - w[0]) / INITIAL_SPLIT as f64;
        for k in 0..INITIAL_SPLIT {
            let a = w[0] + step * k as f64;
            let b = if k + 1 == INITIAL_SPLIT { w[1] } else { w[0] + step * (k + 1) as f64 };
            heap.push(kronrod(&f, a, b));
        }
    }

    let totals = |heap: &BinaryHeap<Panel>, done: &[Panel]| {
        let mut value = 0.0;
        let mut error = 0.0;
        let mut abs = 0.0;
        for p in heap.iter().chain(done.iter()) {
            value += p.value;
            error += p.error;
            abs += p.abs;
        }
        (value, error, abs)
    };

    loop {
        let (value, error, abs) = totals(&heap, &done);
        let panels = heap.len() + done.len();
        // Requests below the rounding floor are met at the floor.
        let target = abs_tol.max(50.0 * f64::EPSILON * abs);
        if error <= target {
            return Ok(Integral { value: sign * value, error, panels });
        }
        if panels >= max_panels {
            return Err(Error::QuadratureFailure { panels, error, tol: abs_tol });
        }
        let Some(worst) = heap.pop() else {
            // Every panel is at the width limit; report what was reached.
            return Err(Error::QuadratureFailure { panels, error, tol: abs_tol });
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if worst.hi - worst.lo <= min_width {
            done.push(worst);
            continue;
        }
        heap.push(kronrod(&f, worst.lo, mid));
        heap.push(kronrod(&f, mid, worst.hi));
    }
}
