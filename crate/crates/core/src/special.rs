//! Sphere constants and normal distribution helpers.

/// Volume of the unit ball in `R^d`, by the recursion `V_d = 2 pi V_{d-2} / d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI * unit_ball_volume(d - 2) / d as f64,
    }
}

/// Surface measure of the unit sphere `S^{d-1}`, equal to `d` times the ball volume.
pub fn sphere_area(d: usize) -> f64 {
    d as f64 * unit_ball_volume(d)
}

/// Standard normal distribution function.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// `2 Phi(x) - 1`, computed without cancellation near zero.
pub fn std_normal_central_mass(x: f64) -> f64 {
    libm::erf(x / std::f64::consts::SQRT_2)
}

pub fn ln_factorial(k: usize) -> f64 {
    libm::lgamma(k as f64 + 1.0)
}
