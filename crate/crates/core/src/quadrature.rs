//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error falls below `max(abs, rel * |value|)`. Error estimates follow QUADPACK's
//! QK15 heuristic.

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Stopping rule: the summed error must not exceed `max(abs, rel * |value|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    fn bound(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn qk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Segment { a, b, value, error }
}

/// Integrates `f` over `[breakpoints[0], breakpoints[last]]`, starting from the
/// given subdivision. Breakpoints must be finite and strictly increasing.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    breakpoints: &[f64],
    tol: Tolerance,
    max_segments: usize,
) -> Result<Integral> {
    if breakpoints.len() < 2 {
        return Err(Error::InvalidArgument("quadrature needs at least two breakpoints".into()));
    }
    if breakpoints.iter().any(|x| !x.is_finite()) || breakpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("quadrature breakpoints must be finite and increasing".into()));
    }
    let mut segments: Vec<Segment> = breakpoints.windows(2).map(|w| qk15(&mut f, w[0], w[1])).collect();
    let mut evaluations = 15 * segments.len();
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= tol.bound(value) {
            return Ok(Integral { value, error, evaluations });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one segment");
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        let too_narrow = mid <= seg.a || mid >= seg.b || (seg.b - seg.a) < 1e-13 * seg.a.abs().max(seg.b.abs());
        if segments.len() >= max_segments || too_narrow {
            return Err(Error::QuadratureNonconvergence { estimate: value, error });
        }
        segments[worst] = qk15(&mut f, seg.a, mid);
        segments.push(qk15(&mut f, mid, seg.b));
        evaluations += 30;
    }
}

/// `∫_lo^hi f(x) dx` for `0 < lo < hi`, computed in `u = ln x` with the
/// u-range cut into pieces of at most `piece` width. Suited to integrands that
/// change character across many decades of `x`.
pub fn integrate_log_domain<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    piece: f64,
    tol: Tolerance,
    max_segments: usize,
) -> Result<Integral> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!("log-domain limits must satisfy 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let (ulo, uhi) = (lo.ln(), hi.ln());
    let pieces = ((uhi - ulo) / piece).ceil().max(1.0) as usize;
    let breakpoints: Vec<f64> = (0..=pieces).map(|i| ulo + (uhi - ulo) * i as f64 / pieces as f64).collect();
    integrate(
        |u| {
            let x = u.exp();
            f(x) * x
        },
        &breakpoints,
        tol,
        max_segments,
    )
}
