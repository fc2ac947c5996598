//! Continuation of arguments of multivalued factors along a leg.
//!
//! A table samples the leg densely enough that no tracked factor turns by
//! more than [`MAX_TURN`] between neighbouring samples. Arguments at other
//! points are the nearest sample's argument plus the wrapped principal
//! difference.

use std::f64::consts::PI;

use num_complex::Complex64;

pub(crate) const MAX_TURN: f64 = 0.3;
pub(crate) const VANISHING: f64 = 1e-12;

pub(crate) fn wrap(x: f64) -> f64 {
    x - 2.0 * PI * (x / (2.0 * PI)).round()
}

/// Continues `previous` (an argument of the factor near here) to the
/// argument of `value`.
pub(crate) fn continue_arg(previous: f64, value: Complex64) -> f64 {
    previous + wrap(value.arg() - previous)
}

#[derive(Debug)]
pub(crate) struct BranchTable {
    taus: Vec<f64>,
    args: Vec<Vec<f64>>,
}

/// Failure while building a table: factor index and parameter.
#[derive(Debug)]
pub(crate) enum TableError {
    Vanishing(usize, f64),
    Tracking(usize, f64),
}

impl BranchTable {
    /// Builds a table on `[lo, hi]` starting at `start` with arguments
    /// `start_args` there. `eval` returns the tracked factor values at a
    /// parameter. Factors may vanish only at `lo` or `hi`.
    pub(crate) fn build(
        lo: f64,
        hi: f64,
        start: f64,
        start_args: &[f64],
        eval: impl Fn(f64) -> Vec<Complex64>,
    ) -> Result<Self, TableError> {
        let span = hi - lo;
        let at_end = |tau: f64| (tau - lo).abs() <= 1e-14 * span || (hi - tau).abs() <= 1e-14 * span;
        let first_values = eval(start);
        let mut first_args = start_args.to_vec();
        for (i, v) in first_values.iter().enumerate() {
            if v.norm() < VANISHING {
                if !at_end(start) {
                    return Err(TableError::Vanishing(i, start));
                }
            } else {
                first_args[i] = continue_arg(start_args[i], *v);
            }
        }
        let mut forward = vec![(start, first_args.clone(), first_values.clone())];
        let mut backward = Vec::new();
        for (target, out) in [(hi, &mut forward), (lo, &mut backward)] {
            let direction = if target >= start { 1.0 } else { -1.0 };
            let mut tau = start;
            let mut args = first_args.clone();
            let mut values = first_values.clone();
            let mut step = span / 128.0;
            while (target - tau) * direction > 0.0 {
                let next = if (target - tau).abs() <= step {
                    target
                } else {
                    tau + direction * step
                };
                let next_values = eval(next);
                let mut next_args = args.clone();
                let mut ok = true;
                for (i, (v, old)) in next_values.iter().zip(&values).enumerate() {
                    if v.norm() < VANISHING {
                        if !at_end(next) {
                            return Err(TableError::Vanishing(i, next));
                        }
                        continue;
                    }
                    if old.norm() < VANISHING {
                        next_args[i] = continue_arg(args[i], *v);
                        continue;
                    }
                    let turn = wrap(v.arg() - old.arg());
                    if turn.abs() > MAX_TURN {
                        ok = false;
                        if step < 1e-14 * span.max(1.0) {
                            return Err(TableError::Tracking(i, next));
                        }
                        break;
                    }
                    next_args[i] = args[i] + turn;
                }
                if !ok {
                    step /= 2.0;
                    continue;
                }
                tau = next;
                args = next_args;
                values = next_values;
                out.push((tau, args.clone(), values.clone()));
                step = (step * 1.25).min(span / 16.0);
            }
        }
        backward.reverse();
        backward.extend(forward);
        let (taus, args) = backward.into_iter().map(|(t, a, _)| (t, a)).unzip();
        Ok(BranchTable { taus, args })
    }

    /// Continued arguments at `tau` given the factor values there.
    pub(crate) fn lookup(&self, tau: f64, values: &[Complex64]) -> Vec<f64> {
        let k = match self.taus.binary_search_by(|t| t.total_cmp(&tau)) {
            Ok(k) => k,
            Err(0) => 0,
            Err(k) if k >= self.taus.len() => self.taus.len() - 1,
            Err(k) => {
                if tau - self.taus[k - 1] <= self.taus[k] - tau {
                    k - 1
                } else {
                    k
                }
            }
        };
        self.args[k]
            .iter()
            .zip(values)
            .map(|(&a, v)| {
                if v.norm() == 0.0 {
                    a
                } else {
                    continue_arg(a, *v)
                }
            })
            .collect()
    }
}
