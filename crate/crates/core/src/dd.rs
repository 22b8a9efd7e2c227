//! Double-double floating point.
//!
//! A [`Dd`] is an unevaluated sum `hi + lo` of two `f64` with `|lo| <= ulp(hi)/2`,
//! giving roughly 106 bits of significand and the exponent range of `f64`.
//! Arithmetic follows the classical error-free transformations (two-sum,
//! fma-based two-product). The elementary functions are evaluated in
//! double-double throughout and are accurate to a few units of `2^-104`
//! for moderate arguments.

#![allow(clippy::approx_constant, clippy::excessive_precision)]

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::num::FpCategory;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};

/// Double-double real number.
#[derive(Clone, Copy, Default)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// Unit roundoff, 2^-104.
    pub const EPSILON: Dd = Dd { hi: 4.930380657631324e-32, lo: 0.0 };

    /// Builds a value from two parts, renormalising them.
    pub fn from_parts(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub const fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn is_special(self) -> bool {
        !self.hi.is_finite()
    }

    /// Multiplies by `2^k` exactly.
    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        if s.is_finite() && s != 0.0 {
            Dd { hi: self.hi * s, lo: self.lo * s }
        } else {
            // split the scaling to stay clear of overflow in the factor
            let h = k / 2;
            self.ldexp(h).ldexp(k - h)
        }
    }

    fn sqr(self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, self.hi);
        p2 += 2.0 * self.hi * self.lo;
        p2 += self.lo * self.lo;
        let (h, l) = quick_two_sum(p1, p2);
        Dd { hi: h, lo: l }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b);
        p2 += self.lo * b;
        let (h, l) = quick_two_sum(p1, p2);
        Dd { hi: h, lo: l }
    }

    fn dd_exp(self) -> Self {
        if self.hi.is_nan() {
            return self;
        }
        if self.hi > 709.782712893384 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = (self - Dd::LN_2().mul_f64(k)).ldexp(-10);
        // Taylor series of exp(r) - 1 for |r| < 3.4e-4
        let mut term = r;
        let mut sum = r;
        let mut i = 2.0;
        loop {
            term = term * r / Dd::new(i);
            sum += term;
            if term.hi.abs() < 1e-36 * sum.hi.abs().max(1e-300) || i > 30.0 {
                break;
            }
            i += 1.0;
        }
        // undo the 2^-10 argument scaling: (1+s)^2 - 1 = s (s + 2)
        for _ in 0..10 {
            sum = sum * (sum + Dd::new(2.0));
        }
        (sum + Dd::ONE).ldexp(k as i32)
    }

    fn dd_ln(self) -> Self {
        if self.hi.is_nan() || self.hi < 0.0 {
            return Dd::new(f64::NAN);
        }
        if self.hi == 0.0 {
            return Dd::new(f64::NEG_INFINITY);
        }
        if self.hi.is_infinite() {
            return self;
        }
        let mut y = Dd::new(self.hi.ln());
        // Newton on exp(y) = x, twice to absorb the f64 start
        for _ in 0..2 {
            y = y + self * (-y).dd_exp() - Dd::ONE;
        }
        y
    }

    /// sin and cos of a reduced argument `|r| <= pi/4`.
    fn sin_cos_reduced(r: Dd) -> (Dd, Dd) {
        let r2 = r.sqr();
        let mut s_term = r;
        let mut s = r;
        let mut c_term = Dd::ONE;
        let mut c = Dd::ONE;
        let mut k = 1.0;
        loop {
            s_term = -s_term * r2 / Dd::new((2.0 * k) * (2.0 * k + 1.0));
            c_term = -c_term * r2 / Dd::new((2.0 * k - 1.0) * (2.0 * k));
            s += s_term;
            c += c_term;
            if (s_term.hi.abs() < 1e-35 && c_term.hi.abs() < 1e-35) || k > 40.0 {
                break;
            }
            k += 1.0;
        }
        (s, c)
    }

    fn dd_sin_cos(self) -> (Dd, Dd) {
        if self.is_special() {
            return (Dd::new(f64::NAN), Dd::new(f64::NAN));
        }
        let q = (self.hi / std::f64::consts::FRAC_PI_2).round();
        // three-term reduction keeps |x| up to ~1e6 accurate
        let r = self - Dd::FRAC_PI_2().mul_f64(q) - Dd::new(PI_2_TAIL).mul_f64(q);
        let (s, c) = Dd::sin_cos_reduced(r);
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    fn dd_sqrt(self) -> Self {
        if self.hi < 0.0 {
            return Dd::new(f64::NAN);
        }
        if self.hi == 0.0 || self.is_special() {
            return Dd::new(self.hi.sqrt());
        }
        let y = Dd::new(self.hi.sqrt());
        y + (self - y.sqr()) / (y + y)
    }

    fn dd_atan2(y: Dd, x: Dd) -> Dd {
        if x.hi == 0.0 && y.hi == 0.0 {
            return Dd::new(y.hi.atan2(x.hi));
        }
        let t0 = Dd::new(y.hi.atan2(x.hi));
        let (s, c) = t0.dd_sin_cos();
        // tan(theta - t0) = (y c - x s) / (x c + y s)
        let v = (y * c - x * s) / (x * c + y * s);
        t0 + v - v * v * v / Dd::new(3.0)
    }
}

// pi/2 - Dd::FRAC_PI_2 rounded to f64, for three-term argument reduction.
const PI_2_TAIL: f64 = -1.4973849048591698e-33;

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.hi, f)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl PartialEq for Dd {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        if !s1.is_finite() {
            return Dd::new(s1);
        }
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (h, l) = quick_two_sum(s1, s2 + t2);
        Dd { hi: h, lo: l }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p1, mut p2) = two_prod(self.hi, b.hi);
        if !p1.is_finite() {
            return Dd::new(p1);
        }
        p2 += self.hi * b.lo + self.lo * b.hi;
        let (h, l) = quick_two_sum(p1, p2);
        Dd { hi: h, lo: l }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() {
            return Dd::new(q1);
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Dd { hi: h, lo: l } + Dd::new(q3)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, b: Dd) -> Dd {
        self - (self / b).trunc() * b
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for Dd {
            fn $m(&mut self, b: Dd) {
                *self = *self $op b;
            }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /, RemAssign rem_assign %);

impl Sum for Dd {
    fn sum<I: Iterator<Item = Dd>>(iter: I) -> Dd {
        iter.fold(Dd::ZERO, |a, b| a + b)
    }
}

impl Zero for Dd {
    fn zero() -> Self {
        Dd::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for Dd {
    fn one() -> Self {
        Dd::ONE
    }
}

impl Num for Dd {
    type FromStrRadixErr = num_traits::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        <f64 as Num>::from_str_radix(s, radix).map(Dd::new)
    }
}

impl ToPrimitive for Dd {
    fn to_i64(&self) -> Option<i64> {
        let t = self.trunc();
        (t.hi + t.lo).to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        let t = self.trunc();
        (t.hi + t.lo).to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl FromPrimitive for Dd {
    fn from_i64(n: i64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        Some(Dd::from_parts(hi, lo))
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Dd::from_parts(hi, lo))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(Dd::new(x))
    }
}

impl NumCast for Dd {
    fn from<T: ToPrimitive>(n: T) -> Option<Self> {
        n.to_f64().map(Dd::new)
    }
}

impl FloatConst for Dd {
    fn E() -> Self {
        Dd::from_parts(2.718281828459045, 1.4456468917292502e-16)
    }
    fn FRAC_1_PI() -> Self {
        Dd::from_parts(0.3183098861837907, -1.9678676675182486e-17)
    }
    fn FRAC_1_SQRT_2() -> Self {
        Dd::from_parts(0.7071067811865476, -4.833646656726457e-17)
    }
    fn FRAC_2_PI() -> Self {
        Dd::from_parts(0.6366197723675814, -3.935735335036497e-17)
    }
    fn FRAC_2_SQRT_PI() -> Self {
        Dd::from_parts(1.1283791670955126, 1.533545961316588e-17)
    }
    fn FRAC_PI_2() -> Self {
        Dd::from_parts(1.5707963267948966, 6.123233995736766e-17)
    }
    fn FRAC_PI_3() -> Self {
        Dd::from_parts(1.0471975511965979, -1.0720817664510912e-16)
    }
    fn FRAC_PI_4() -> Self {
        Dd::from_parts(0.7853981633974483, 3.061616997868383e-17)
    }
    fn FRAC_PI_6() -> Self {
        Dd::from_parts(0.5235987755982989, -5.360408832255456e-17)
    }
    fn FRAC_PI_8() -> Self {
        Dd::from_parts(0.39269908169872414, 1.5308084989341915e-17)
    }
    fn LN_10() -> Self {
        Dd::from_parts(2.302585092994046, -2.1707562233822494e-16)
    }
    fn LN_2() -> Self {
        Dd::from_parts(0.6931471805599453, 2.3190468138462996e-17)
    }
    fn LOG10_E() -> Self {
        Dd::from_parts(0.4342944819032518, 1.098319650216765e-17)
    }
    fn LOG2_E() -> Self {
        Dd::from_parts(1.4426950408889634, 2.0355273740931033e-17)
    }
    fn PI() -> Self {
        Dd::from_parts(3.141592653589793, 1.2246467991473532e-16)
    }
    fn SQRT_2() -> Self {
        Dd::from_parts(1.4142135623730951, -9.667293313452913e-17)
    }
    fn TAU() -> Self {
        Dd::from_parts(6.283185307179586, 2.4492935982947064e-16)
    }
    fn LOG10_2() -> Self {
        Dd::from_parts(0.3010299956639812, -2.8037281277851704e-18)
    }
    fn LOG2_10() -> Self {
        Dd::from_parts(3.321928094887362, 1.661617516973592e-16)
    }
}

impl Float for Dd {
    fn nan() -> Self {
        Dd::new(f64::NAN)
    }
    fn infinity() -> Self {
        Dd::new(f64::INFINITY)
    }
    fn neg_infinity() -> Self {
        Dd::new(f64::NEG_INFINITY)
    }
    fn neg_zero() -> Self {
        Dd::new(-0.0)
    }
    fn min_value() -> Self {
        Dd::new(f64::MIN)
    }
    fn min_positive_value() -> Self {
        Dd::new(f64::MIN_POSITIVE)
    }
    fn epsilon() -> Self {
        Dd::EPSILON
    }
    fn max_value() -> Self {
        Dd::new(f64::MAX)
    }
    fn is_nan(self) -> bool {
        self.hi.is_nan()
    }
    fn is_infinite(self) -> bool {
        self.hi.is_infinite()
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite()
    }
    fn is_normal(self) -> bool {
        self.hi.is_normal()
    }
    fn classify(self) -> FpCategory {
        self.hi.classify()
    }
    fn floor(self) -> Self {
        let h = self.hi.floor();
        if h == self.hi {
            Dd::from_parts(h, self.lo.floor())
        } else {
            Dd::new(h)
        }
    }
    fn ceil(self) -> Self {
        let h = self.hi.ceil();
        if h == self.hi {
            Dd::from_parts(h, self.lo.ceil())
        } else {
            Dd::new(h)
        }
    }
    fn round(self) -> Self {
        if self.hi >= 0.0 {
            (self + Dd::new(0.5)).floor()
        } else {
            (self - Dd::new(0.5)).ceil()
        }
    }
    fn trunc(self) -> Self {
        if self.hi >= 0.0 {
            self.floor()
        } else {
            self.ceil()
        }
    }
    fn fract(self) -> Self {
        self - self.trunc()
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.hi.is_sign_negative()) {
            -self
        } else {
            self
        }
    }
    fn signum(self) -> Self {
        Dd::new(self.hi.signum())
    }
    fn is_sign_positive(self) -> bool {
        self.hi.is_sign_positive()
    }
    fn is_sign_negative(self) -> bool {
        self.hi.is_sign_negative()
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }
    fn recip(self) -> Self {
        Dd::ONE / self
    }
    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            e >>= 1;
        }
        acc
    }
    fn powf(self, n: Self) -> Self {
        if n.is_zero() {
            return Dd::ONE;
        }
        if self.is_zero() {
            return if n.hi > 0.0 { Dd::ZERO } else { Dd::infinity() };
        }
        if n == n.trunc() && n.hi.abs() < 2f64.powi(31) {
            return self.powi(n.hi as i32);
        }
        (n * self.dd_ln()).dd_exp()
    }
    fn sqrt(self) -> Self {
        self.dd_sqrt()
    }
    fn exp(self) -> Self {
        self.dd_exp()
    }
    fn exp2(self) -> Self {
        (self * Dd::LN_2()).dd_exp()
    }
    fn ln(self) -> Self {
        self.dd_ln()
    }
    fn log(self, base: Self) -> Self {
        self.dd_ln() / base.dd_ln()
    }
    fn log2(self) -> Self {
        self.dd_ln() / Dd::LN_2()
    }
    fn log10(self) -> Self {
        self.dd_ln() / Dd::LN_10()
    }
    fn max(self, other: Self) -> Self {
        if self.is_nan() || other > self {
            other
        } else {
            self
        }
    }
    fn min(self, other: Self) -> Self {
        if self.is_nan() || other < self {
            other
        } else {
            self
        }
    }
    fn abs_sub(self, other: Self) -> Self {
        if self > other {
            self - other
        } else {
            Dd::ZERO
        }
    }
    fn cbrt(self) -> Self {
        if self.is_zero() || self.is_special() {
            return Dd::new(self.hi.cbrt());
        }
        let y = Dd::new(self.hi.cbrt());
        y - (y * y * y - self) / (Dd::new(3.0) * y * y)
    }
    fn hypot(self, other: Self) -> Self {
        let (a, b) = (self.abs(), other.abs());
        let m = a.max(b);
        if m.is_zero() || m.is_special() {
            return m;
        }
        let (x, y) = (a / m, b / m);
        m * (x.sqr() + y.sqr()).dd_sqrt()
    }
    fn sin(self) -> Self {
        self.dd_sin_cos().0
    }
    fn cos(self) -> Self {
        self.dd_sin_cos().1
    }
    fn tan(self) -> Self {
        let (s, c) = self.dd_sin_cos();
        s / c
    }
    fn asin(self) -> Self {
        Dd::dd_atan2(self, (Dd::ONE - self.sqr()).dd_sqrt())
    }
    fn acos(self) -> Self {
        Dd::dd_atan2((Dd::ONE - self.sqr()).dd_sqrt(), self)
    }
    fn atan(self) -> Self {
        Dd::dd_atan2(self, Dd::ONE)
    }
    fn atan2(self, other: Self) -> Self {
        Dd::dd_atan2(self, other)
    }
    fn sin_cos(self) -> (Self, Self) {
        self.dd_sin_cos()
    }
    fn exp_m1(self) -> Self {
        if self.hi.abs() < 1e-5 {
            // short series avoids cancellation near zero
            let mut term = self;
            let mut sum = self;
            for i in 2..12 {
                term = term * self / Dd::new(i as f64);
                sum += term;
            }
            sum
        } else {
            self.dd_exp() - Dd::ONE
        }
    }
    fn ln_1p(self) -> Self {
        let y = Dd::ONE + self;
        if y == Dd::ONE {
            return self;
        }
        // log1p(x) = ln(y) * x / (y - 1) corrects the rounding of 1 + x
        y.dd_ln() * self / (y - Dd::ONE)
    }
    fn sinh(self) -> Self {
        if self.hi.abs() < 0.5 {
            let e = self.exp_m1();
            let em = (-self).exp_m1();
            (e - em) * Dd::new(0.5)
        } else {
            let e = self.dd_exp();
            (e - e.recip()) * Dd::new(0.5)
        }
    }
    fn cosh(self) -> Self {
        let e = self.dd_exp();
        (e + e.recip()) * Dd::new(0.5)
    }
    fn tanh(self) -> Self {
        self.sinh() / self.cosh()
    }
    fn asinh(self) -> Self {
        let a = self.abs();
        let r = (a + (a.sqr() + Dd::ONE).dd_sqrt()).dd_ln();
        if self.hi < 0.0 {
            -r
        } else {
            r
        }
    }
    fn acosh(self) -> Self {
        (self + (self.sqr() - Dd::ONE).dd_sqrt()).dd_ln()
    }
    fn atanh(self) -> Self {
        ((Dd::ONE + self) / (Dd::ONE - self)).dd_ln() * Dd::new(0.5)
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        self.hi.integer_decode()
    }
    fn to_degrees(self) -> Self {
        self * Dd::new(180.0) / Dd::PI()
    }
    fn to_radians(self) -> Self {
        self * Dd::PI() / Dd::new(180.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, hi: f64, lo: f64, rel: f64) -> bool {
        let d = (a - Dd::from_parts(hi, lo)).abs();
        d.hi <= rel * hi.abs().max(1e-300)
    }

    // reference values are 106-bit roundings of 60-digit evaluations
    #[test]
    fn elementary_functions_match_high_precision_references() {
        let cases: &[(f64, [(f64, f64); 5])] = &[
            (
                0.3,
                [
                    (1.3498588075760032, -9.447314673432387e-17),
                    (0.29552020666133955, 1.8315357276792536e-17),
                    (0.955336489125606, 4.1935600297907467e-17),
                    (0.5477225575051661, 2.890126723719787e-17),
                    (-1.2039728043259361, 8.935521583403776e-17),
                ],
            ),
            (
                -2.9,
                [
                    (0.05502322005640723, 3.1789409867553756e-18),
                    (-0.23924932921398243, 1.1267666643498124e-17),
                    (-0.9709581651495905, 4.579633153232696e-17),
                    (1.70293863659264, 9.232259894565611e-17),
                    (1.0647107369924282, 7.091773787274429e-17),
                ],
            ),
            (
                37.5,
                [
                    (1.9321599304402836e+16, 0.20844227592091974),
                    (-0.19779879963646227, 1.1358525398136119e-17),
                    (0.9802426408101081, -1.8976222537523122e-17),
                    (6.123724356957945, 9.806491967574893e-17),
                    (3.624340932976365, -3.932410912927591e-17),
                ],
            ),
        ];
        for (x, refs) in cases {
            let d = Dd::new(*x);
            let got = [d.exp(), d.sin(), d.cos(), d.abs().sqrt(), d.abs().ln()];
            for (g, (hi, lo)) in got.iter().zip(refs.iter()) {
                assert!(close(*g, *hi, *lo, 1e-30), "x={x}: {g:?} vs {hi:e}+{lo:e}");
            }
        }
    }

    #[test]
    fn arithmetic_is_exact_beyond_f64() {
        let a = Dd::new(1.0) + Dd::new(1e-20);
        assert_eq!(a.hi(), 1.0);
        assert_eq!(a.lo(), 1e-20);
        let third = Dd::ONE / Dd::new(3.0);
        let back = third * Dd::new(3.0) - Dd::ONE;
        assert!(back.abs().hi() < 1e-31);
        let s = Dd::new(2.0).sqrt();
        assert!(close(s, 1.4142135623730951, -9.667293313452913e-17, 1e-31));
    }

    #[test]
    fn atan2_recovers_angle() {
        let t = Dd::new(1.234567);
        let (s, c) = t.sin_cos();
        let back = s.atan2(c);
        assert!((back - t).abs().hi() < 1e-30);
        let q = Dd::new(-2.5);
        let (s, c) = q.sin_cos();
        assert!((s.atan2(c) - q).abs().hi() < 1e-30);
    }
}
