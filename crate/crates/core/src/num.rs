//! Float helpers routed through `libm` so results do not depend on the
//! platform math library.

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn powi(x: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

#[inline]
pub fn signum(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `|t|^(p-2) t`, with the value 0 at `t = 0`.
#[inline]
pub fn psi(p: f64, t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        signum(t) * abs_pow(t, p - 1.0)
    }
}

/// `|t|^e`, with `0^e = 0` for `e > 0`.
#[inline]
pub fn abs_pow(t: f64, e: f64) -> f64 {
    let a = abs(t);
    if a == 0.0 {
        0.0
    } else if e == 2.0 {
        a * a
    } else if e == 1.0 {
        a
    } else {
        powf(a, e)
    }
}

pub fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, &x| if abs(x) > m { abs(x) } else { m })
}
