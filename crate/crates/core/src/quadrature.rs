//! Globally adaptive Gauss-Kronrod (7/15) integration of complex-valued
//! functions of a real variable, plus helpers for half-line integrals and
//! simple poles.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

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
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_subdivisions: usize,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::tol(1e-11),
            abs_tol: T::tol(1e-14),
            max_subdivisions: 4000,
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) || !(self.abs_tol > T::zero()) || self.max_subdivisions == 0
        {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: Cx<T>,
    pub error: T,
}

impl<T: Real> std::ops::Add for Estimate<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            error: self.error + o.error,
        }
    }
}

struct Segment<T> {
    lo: T,
    hi: T,
    value: Cx<T>,
    error: T,
}

fn kronrod<T: Real, F: FnMut(T) -> Cx<T>>(f: &mut F, lo: T, hi: T) -> Segment<T> {
    let two = T::lit(2.0);
    let center = (lo + hi) / two;
    let half = (hi - lo) / two;
    let fc = f(center);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let s = f(center - dx) + f(center + dx);
        k = k + s * T::lit(WGK[j]);
        if j % 2 == 1 {
            g = g + s * T::lit(WG[j / 2]);
        }
    }
    let value = k * half;
    let error = ((k - g) * half).norm();
    Segment {
        lo,
        hi,
        value,
        error,
    }
}

/// Integrates `f` over `[lo, hi]` by global adaptive bisection.
pub fn integrate<T, F>(mut f: F, lo: T, hi: T, spec: &QuadratureSpec<T>) -> Result<Estimate<T>>
where
    T: Real,
    F: FnMut(T) -> Cx<T>,
{
    spec.validate()?;
    if lo == hi {
        return Ok(Estimate {
            value: cx(T::zero()),
            error: T::zero(),
        });
    }
    let mut segs = vec![kronrod(&mut f, lo, hi)];
    let two = T::lit(2.0);
    loop {
        let total = segs.iter().fold(cx(T::zero()), |s, g| s + g.value);
        let err = segs.iter().fold(T::zero(), |s, g| s + g.error);
        let target = spec.abs_tol.max(spec.rel_tol * total.norm());
        if err <= target {
            return Ok(Estimate {
                value: total,
                error: err,
            });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|a, b| {
                a.1.error
                    .partial_cmp(&b.1.error)
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        let s = segs.swap_remove(worst);
        let mid = s.lo + (s.hi - s.lo) / two;
        let exhausted = segs.len() + 2 > spec.max_subdivisions;
        if exhausted
            || mid <= s.lo
            || mid >= s.hi
            || !s.value.re.is_finite()
            || !s.value.im.is_finite()
        {
            return Err(Error::QuadratureNonConvergence {
                lo: s.lo.as_f64(),
                hi: s.hi.as_f64(),
                error: s.error.as_f64(),
            });
        }
        segs.push(kronrod(&mut f, s.lo, mid));
        segs.push(kronrod(&mut f, mid, s.hi));
    }
}

/// Integrates over consecutive intervals between the sorted `points`.
pub fn integrate_pieces<T, F>(
    mut f: F,
    points: &[T],
    spec: &QuadratureSpec<T>,
) -> Result<Estimate<T>>
where
    T: Real,
    F: FnMut(T) -> Cx<T>,
{
    let mut acc = Estimate {
        value: cx(T::zero()),
        error: T::zero(),
    };
    for w in points.windows(2) {
        acc = acc + integrate(&mut f, w[0], w[1], spec)?;
    }
    Ok(acc)
}

/// `int_from^inf f`, via the substitution `q = from / t` on `(0, 1]`.
/// Requires `from > 0` and `f` decaying faster than `1/q`.
pub fn integrate_tail<T, F>(mut f: F, from: T, spec: &QuadratureSpec<T>) -> Result<Estimate<T>>
where
    T: Real,
    F: FnMut(T) -> Cx<T>,
{
    if !(from > T::zero()) {
        return Err(Error::InvalidParameter(
            "tail integral needs a positive start".into(),
        ));
    }
    integrate(
        |t: T| {
            if t == T::zero() {
                return cx(T::zero());
            }
            let q = from / t;
            f(q) * (from / (t * t))
        },
        T::zero(),
        T::one(),
        spec,
    )
}

/// `int_0^inf h(q) / (q - pole - i0) dq` for smooth `h`: principal value by
/// subtraction on `[0, 2 pole]` plus the `i pi h(pole)` residue.
///
/// `breaks` are extra interior points (beyond `2 pole`) for the finite part;
/// the last one starts the tail.
pub fn integrate_outgoing_pole<T, F>(
    mut h: F,
    pole: T,
    breaks: &[T],
    spec: &QuadratureSpec<T>,
) -> Result<Estimate<T>>
where
    T: Real,
    F: FnMut(T) -> Cx<T>,
{
    if !(pole > T::zero()) {
        return Err(Error::InvalidParameter("pole must be positive".into()));
    }
    let two = T::lit(2.0);
    let h0 = h(pole);
    let sub = |q: T, h: &mut F| (h(q) - h0) / (q - pole);
    let near = integrate(|q| sub(q, &mut h), T::zero(), pole, spec)?
        + integrate(|q| sub(q, &mut h), pole, two * pole, spec)?;
    let mut pts = vec![two * pole];
    pts.extend(breaks.iter().copied().filter(|&b| b > two * pole));
    let far = integrate_pieces(|q| h(q) / (q - pole), &pts, spec)?;
    let start = *pts.last().unwrap();
    let tail = integrate_tail(|q| h(q) / (q - pole), start, spec)?;
    let residue = Complex::new(T::zero(), T::PI()) * h0;
    Ok(near
        + far
        + tail
        + Estimate {
            value: residue,
            error: T::zero(),
        })
}

/// Breakpoints `0, s, 2s, ...` up to `extent` so oscillating integrands are
/// split into a few periods per piece.
pub fn uniform_breaks<T: Real>(step: T, extent: T) -> Vec<T> {
    let n = (extent / step)
        .ceil()
        .to_usize()
        .unwrap_or(1)
        .clamp(1, 4096);
    (0..=n).map(|i| step * T::lit(i as f64)).collect()
}
