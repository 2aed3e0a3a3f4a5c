//! Thin wrappers over `libm` so the crate builds without `std`.

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
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
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// `∫_0^len e^{σx} dx`, accurate for small `σ·len`.
#[inline]
pub fn exp_integral(sigma: f64, len: f64) -> f64 {
    if sigma == 0.0 {
        len
    } else {
        expm1(sigma * len) / sigma
    }
}

/// `∫_0^len x·e^{σx} dx`.
pub fn exp_moment(sigma: f64, len: f64) -> f64 {
    let z = sigma * len;
    if abs(z) < 0.5 {
        // len² Σ z^k / (k! (k+2))
        let mut term = 1.0;
        let mut sum = 0.5;
        for k in 1..30 {
            term *= z / k as f64;
            sum += term / (k + 2) as f64;
        }
        len * len * sum
    } else {
        (len * exp(z) - expm1(z) / sigma) / sigma
    }
}

/// `Σ_{j=0}^{count-1} e^{x0 + j·step}` without intermediate overflow.
pub fn exp_geometric(x0: f64, step: f64, count: f64) -> f64 {
    if count <= 0.0 {
        return 0.0;
    }
    if step == 0.0 {
        return exp(x0) * count;
    }
    let total = step * count;
    if total <= 600.0 {
        exp(x0) * (expm1(total) / expm1(step))
    } else {
        let log_sum = total + ln(-expm1(-total)) - ln(expm1(step));
        exp(x0 + log_sum)
    }
}

/// Integer floor as `i64`, saturating at the type bounds.
#[inline]
pub fn floor_i64(x: f64) -> i64 {
    floor(x) as i64
}
