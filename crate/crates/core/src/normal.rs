//! Standard normal density `φ`, distribution function `Φ`, its tail `Φ̄` and
//! quantile function `Q = Φ⁻¹`.
//!
//! `Φ` uses Cody's rational Chebyshev approximations (three ranges, with an
//! asymptotic-form branch for `|x| > √32`) and evaluates `exp(-x²/2)` split in
//! two factors so the tails keep full relative accuracy. `Q` starts from the
//! AS241 rational approximation and takes one Halley step against `Φ`.
//!
//! `Q` is antisymmetric by construction: arguments above one half are mapped
//! to `1 - u` (exact in that range) and the result negated.

#![allow(clippy::excessive_precision)]

use crate::{Error, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_677_94;
const SQRT_2PI: f64 = 2.506_628_274_631_000_502_4;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_78;
const SQRT_32: f64 = 5.656_854_249_492_380_195_2;

/// A probability strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(u: f64) -> Result<Self> {
        if u > 0.0 && u < 1.0 {
            Ok(Probability(u))
        } else {
            Err(Error::domain(alloc::format!("probability must lie in (0, 1), got {u}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn quantile(self) -> f64 {
        quantile_unchecked(self.0)
    }
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(alloc::format!("argument must be finite, got {x}")))
    }
}

/// `exp(-x²/2)` with `x²` split so that the large part is exact.
fn half_gauss_exp(x: f64) -> f64 {
    let head = libm::trunc(x * 16.0) / 16.0;
    let del = (x - head) * (x + head);
    libm::exp(-head * head * 0.5) * libm::exp(-del * 0.5)
}

pub(crate) fn density(x: f64) -> f64 {
    half_gauss_exp(x) * FRAC_1_SQRT_2PI
}

/// Standard normal density.
pub fn phi(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(density(x))
}

const A: [f64; 5] = [
    2.235_252_035_460_683_928_7,
    161.028_231_068_555_878_81,
    1_067.689_485_460_370_958_2,
    18_154.981_253_343_561_249,
    0.065_682_337_918_207_449_113,
];
const B: [f64; 4] =
    [47.202_581_904_688_241_87, 976.098_551_737_776_693_22, 10_260.932_208_618_978_205, 45_507.789_335_026_729_956];
const C: [f64; 9] = [
    0.398_941_512_088_134_667_64,
    8.883_149_794_388_375_941_2,
    93.506_656_132_177_855_979,
    597.270_276_394_800_262_26,
    2_494.537_585_290_372_671_1,
    6_848.190_450_536_282_332_6,
    11_602.651_437_647_350_124,
    9_842.714_838_383_978_021_8,
    1.076_557_677_372_019_231_7e-8,
];
const D: [f64; 8] = [
    22.266_688_044_328_115_691,
    235.387_901_782_624_998_61,
    1_519.377_599_407_554_805,
    6_485.558_298_266_760_755,
    18_615.571_640_885_098_091,
    34_900.952_721_145_977_266,
    38_912.003_286_093_271_411,
    19_685.429_676_859_990_727,
];
const P: [f64; 6] = [
    0.215_898_534_057_956_99,
    0.127_401_161_160_247_363_9,
    0.022_235_277_870_649_807,
    0.001_421_619_193_227_893_466,
    2.911_287_495_116_879_2e-5,
    0.023_073_441_764_940_173_03,
];
const Q: [f64; 5] = [
    1.284_260_096_144_911_21,
    0.468_238_212_480_865_118,
    0.065_988_137_868_928_551_5,
    0.003_782_396_332_027_582_44,
    7.297_515_550_839_662_05e-5,
];

/// The `s(y)` of the asymptotic branch: for `y > √32`,
/// `Φ̄(y) = e^{-y²/2} (1/√(2π) − s(y)) / y` with `s(y) > 0`.
fn tail_correction(y: f64) -> f64 {
    let xsq = 1.0 / (y * y);
    let mut xnum = P[5] * xsq;
    let mut xden = xsq;
    for i in 0..4 {
        xnum = (xnum + P[i]) * xsq;
        xden = (xden + Q[i]) * xsq;
    }
    xsq * (xnum + P[4]) / (xden + Q[4])
}

/// `(Φ(x), Φ̄(x))` for finite `x`.
pub(crate) fn cdf_pair(x: f64) -> (f64, f64) {
    let y = x.abs();
    if y <= 0.674_489_75 {
        let (xnum, xden) = if y > f64::EPSILON * 0.5 {
            let xsq = x * x;
            let mut xnum = A[4] * xsq;
            let mut xden = xsq;
            for i in 0..3 {
                xnum = (xnum + A[i]) * xsq;
                xden = (xden + B[i]) * xsq;
            }
            (xnum, xden)
        } else {
            (0.0, 0.0)
        };
        let temp = x * (xnum + A[3]) / (xden + B[3]);
        return (0.5 + temp, 0.5 - temp);
    }
    let small_tail = if y <= SQRT_32 {
        let mut xnum = C[8] * y;
        let mut xden = y;
        for i in 0..7 {
            xnum = (xnum + C[i]) * y;
            xden = (xden + D[i]) * y;
        }
        half_gauss_exp(y) * (xnum + C[7]) / (xden + D[7])
    } else {
        half_gauss_exp(y) * (FRAC_1_SQRT_2PI - tail_correction(y)) / y
    };
    if x > 0.0 {
        (1.0 - small_tail, small_tail)
    } else {
        (small_tail, 1.0 - small_tail)
    }
}

/// Standard normal distribution function.
pub fn cdf(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(cdf_pair(x).0)
}

/// Upper tail `Φ̄(x) = 1 − Φ(x)`, accurate in relative terms for large `x`.
pub fn sf(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(cdf_pair(x).1)
}

pub(crate) fn cdf_unchecked(x: f64) -> f64 {
    cdf_pair(x).0
}

/// AS241 (PPND16) for `u <= 1/2`.
fn as241_lower(u: f64) -> f64 {
    let q = u - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180_625 - q * q;
        return q
            * (((((((r * 2_509.080_928_730_122_672_7 + 33_430.575_583_588_128_105) * r
                + 67_265.770_927_008_700_853)
                * r
                + 45_921.953_931_549_871_457)
                * r
                + 13_731.693_765_509_461_125)
                * r
                + 1_971.590_950_306_551_442_7)
                * r
                + 133.141_667_891_784_377_45)
                * r
                + 3.387_132_872_796_366_608)
            / (((((((r * 5_226.495_278_852_545_925 + 28_729.085_735_721_942_674) * r + 39_307.895_800_092_710_61)
                * r
                + 21_213.794_301_586_595_867)
                * r
                + 5_394.196_021_424_751_107_7)
                * r
                + 687.187_007_492_057_908_3)
                * r
                + 42.313_330_701_600_911_252)
                * r
                + 1.0);
    }
    let mut r = libm::sqrt(-libm::log(u));
    let val = if r <= 5.0 {
        r -= 1.6;
        (((((((r * 7.745_450_142_783_414_076_4e-4 + 0.022_723_844_989_269_184_583_3) * r
            + 0.241_780_725_177_450_611_77)
            * r
            + 1.270_458_252_452_368_382_58)
            * r
            + 3.647_848_324_763_204_605_04)
            * r
            + 5.769_497_221_460_691_405_5)
            * r
            + 4.630_337_846_156_545_295_9)
            * r
            + 1.423_437_110_749_683_577_34)
            / (((((((r * 1.050_750_071_644_416_843_24e-9 + 5.475_938_084_995_344_946e-4) * r
                + 0.015_198_666_563_616_457_196_6)
                * r
                + 0.148_103_976_427_480_074_59)
                * r
                + 0.689_767_334_985_100_004_55)
                * r
                + 1.676_384_830_183_803_849_4)
                * r
                + 2.053_191_626_637_758_821_87)
                * r
                + 1.0)
    } else {
        r -= 5.0;
        (((((((r * 2.010_334_399_292_288_132_65e-7 + 2.711_555_568_743_487_578_15e-5) * r
            + 0.001_242_660_947_388_078_438_6)
            * r
            + 0.026_532_189_526_576_123_093)
            * r
            + 0.296_560_571_828_504_891_23)
            * r
            + 1.784_826_539_917_291_335_8)
            * r
            + 5.463_784_911_164_114_369_9)
            * r
            + 6.657_904_643_501_103_777_2)
            / (((((((r * 2.044_263_103_389_939_785_64e-15 + 1.421_511_758_316_445_888_7e-7) * r
                + 1.846_318_317_510_054_681_8e-5)
                * r
                + 7.868_691_311_456_132_591e-4)
                * r
                + 0.014_875_361_290_850_614_852_5)
                * r
                + 0.136_929_880_922_735_805_31)
                * r
                + 0.599_832_206_555_887_937_69)
                * r
                + 1.0)
    };
    -val
}

/// Below this the Halley step would work with subnormal residuals.
const REFINE_FLOOR: f64 = 1e-300;

fn lower_quantile(u: f64) -> f64 {
    let x = as241_lower(u);
    if u < REFINE_FLOOR || x == 0.0 {
        return x;
    }
    let dens = density(x);
    if dens == 0.0 {
        return x;
    }
    let h = (cdf_unchecked(x) - u) / dens;
    let refined = x - h / (1.0 + 0.5 * x * h);
    refined.min(0.0)
}

pub(crate) fn quantile_unchecked(u: f64) -> f64 {
    if u > 0.5 {
        -lower_quantile(1.0 - u)
    } else {
        lower_quantile(u)
    }
}

/// Standard normal quantile function.
///
/// `quantile(1 - u) == -quantile(u)` holds bit for bit whenever `1 - u` is
/// computed exactly, which covers every `u >= 1/2`.
pub fn quantile(u: f64) -> Result<f64> {
    Probability::new(u).map(Probability::quantile)
}

/// The Mills gap `φ(q)/q − Φ̄(q)` at `q > 0`, kept relative to `φ(q)` so its
/// sign survives where `φ(q)` itself underflows (`q ≳ 38`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MillsGap {
    pub q: f64,
    /// `1/q − Φ̄(q)/φ(q)`.
    pub relative: f64,
}

impl MillsGap {
    /// The gap as an `f64`; underflows to zero for large `q`.
    pub fn value(&self) -> f64 {
        if self.q <= SQRT_32 {
            density(self.q) / self.q - cdf_pair(self.q).1
        } else {
            self.relative * density(self.q)
        }
    }

    /// Natural log of the gap, finite for every `q > 0`.
    pub fn ln_value(&self) -> f64 {
        libm::log(self.relative) - 0.5 * self.q * self.q - LN_SQRT_2PI
    }

    pub fn is_positive(&self) -> bool {
        self.relative > 0.0
    }
}

pub fn mills_gap(q: f64) -> Result<MillsGap> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::domain(alloc::format!("mills_gap needs finite q > 0, got {q}")));
    }
    let relative = if q <= SQRT_32 { 1.0 / q - cdf_pair(q).1 / density(q) } else { SQRT_2PI * tail_correction(q) / q };
    Ok(MillsGap { q, relative })
}
