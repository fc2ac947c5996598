//! Gauss–Kronrod 7/15 rule with QUADPACK error estimate.
//!
//! Nodes and weights are stored as double-double pairs so that the rule keeps
//! its accuracy when evaluated in extended precision.

use num_complex::Complex;

use crate::scalar::Real;

const XGK: [(f64, f64); 8] = [
    (0.9914553711208126, 2.7322067495382985e-17),
    (0.9491079123427585, 3.82579658786657e-17),
    (0.8648644233597691, -2.3887783447584197e-17),
    (0.7415311855993945, -2.0220134774069897e-17),
    (0.5860872354676911, -1.7466970798550533e-17),
    (0.4058451513773972, -1.72492754475471e-17),
    (0.20778495500789848, -1.322698778629045e-17),
    (0.0, 0.0),
];

const WGK: [(f64, f64); 8] = [
    (0.022935322010529224, 5.957180517223162e-19),
    (0.06309209262997856, -4.536585404360517e-18),
    (0.10479001032225019, -3.90658597958814e-18),
    (0.14065325971552592, -2.48416478796896e-19),
    (0.1690047266392679, -7.56643290985809e-18),
    (0.19035057806478542, -9.616513280901214e-18),
    (0.20443294007529889, 6.740401802865973e-18),
    (0.20948214108472782, 9.321252782204223e-18),
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre
const WG: [(f64, f64); 4] = [
    (0.1294849661688697, -9.625448970284404e-18),
    (0.27970539148927664, 2.3267180221717138e-17),
    (0.3818300505051189, 2.1862747923824822e-17),
    (0.4179591836734694, -1.5497807119257288e-17),
];

fn dd<F: Real>(pair: (f64, f64)) -> F {
    F::from_f64(pair.0) + F::from_f64(pair.1)
}

/// The 15 abscissae on `[a, b]`, ordered left to right.
pub fn nodes<F: Real>(a: F, b: F) -> [F; 15] {
    let two = F::from_f64(2.0);
    let centre = (a + b) / two;
    let half = (b - a) / two;
    let mut out = [centre; 15];
    for k in 0..7 {
        let x = dd::<F>(XGK[k]);
        out[k] = centre - half * x;
        out[14 - k] = centre + half * x;
    }
    out
}

/// Result of the rule on one interval.
#[derive(Clone, Copy, Debug)]
pub struct RuleResult<F> {
    pub value: Complex<F>,
    pub error: f64,
    /// Kronrod estimate of `∫|f|`.
    pub magnitude: f64,
}

/// Applies the rule to values at [`nodes`]. `extra` holds per-node error
/// magnitudes of the values themselves (from inner integrations); they are
/// integrated with the Kronrod weights and added to the estimate.
pub fn apply<F: Real>(a: F, b: F, values: &[Complex<F>; 15], extra: &[f64; 15]) -> RuleResult<F> {
    let half = (b - a) / F::from_f64(2.0);
    let mut kronrod = Complex::new(F::zero(), F::zero());
    let mut gauss = Complex::new(F::zero(), F::zero());
    let mut resabs = 0.0;
    let mut inner = 0.0;
    for i in 0..15 {
        let k = if i < 8 { i } else { 14 - i };
        let w = dd::<F>(WGK[k]);
        kronrod = kronrod + values[i] * w;
        resabs += WGK[k].0 * values[i].norm().to_f64();
        inner += WGK[k].0 * extra[i];
        if k % 2 == 1 || k == 7 {
            let g = dd::<F>(WG[k / 2]);
            gauss = gauss + values[i] * g;
        }
    }
    let mean = kronrod * F::from_f64(0.5);
    let mut resasc = 0.0;
    for i in 0..15 {
        let k = if i < 8 { i } else { 14 - i };
        resasc += WGK[k].0 * (values[i] - mean).norm().to_f64();
    }
    let h = half.abs().to_f64();
    let resabs = resabs * h;
    let resasc = resasc * h;
    let mut error = ((kronrod - gauss) * half).norm().to_f64();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let eps = F::epsilon().to_f64().max(1e-32);
    if resabs > f64::MIN_POSITIVE / (50.0 * eps) {
        error = error.max(50.0 * eps * resabs);
    }
    RuleResult {
        value: kronrod * half,
        error: error + inner * h,
        magnitude: resabs,
    }
}
