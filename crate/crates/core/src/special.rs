//! Complex Gamma function in double precision (Lanczos, g = 7, n = 9).

use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Whether `z` is a pole of Γ (a non-positive integer).
pub fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// `ln Γ(z)` on some branch; only `exp` of the result is meaningful.
///
/// Returns `None` at poles.
pub fn ln_gamma(z: Complex64) -> Option<Complex64> {
    if is_gamma_pole(z) {
        return None;
    }
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        let s = (z * PI).sin();
        let rest = ln_gamma(Complex64::new(1.0, 0.0) - z)?;
        return Some(Complex64::new(PI.ln(), 0.0) - s.ln() - rest);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Some(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln())
}

/// `Γ(z)`; `None` at poles.
pub fn gamma(z: Complex64) -> Option<Complex64> {
    ln_gamma(z).map(|l| l.exp())
}

/// `1/Γ(z)`, entire: zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    match ln_gamma(z) {
        Some(l) => (-l).exp(),
        None => Complex64::new(0.0, 0.0),
    }
}
