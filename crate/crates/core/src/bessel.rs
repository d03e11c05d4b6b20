//! Bessel functions of order one needed by the Hadamard parametrix.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 12.0;

/// Modified Bessel function `I_1(x)`.
///
/// The power series has only positive terms, so it is accurate for every
/// argument that does not overflow.
pub fn bessel_i1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_i1(-x);
    }
    let h = 0.5 * x;
    let h2 = h * h;
    let mut term = h;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= h2 / (k * (k + 1.0));
        sum += term;
        if term <= f64::EPSILON * 0.25 * sum {
            return sum;
        }
    }
}

/// Bessel function of the first kind `J_1(x)`.
pub fn bessel_j1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_j1(-x);
    }
    if x < SERIES_LIMIT {
        j1_series(x)
    } else {
        j1_hankel(x)
    }
}

fn j1_series(x: f64) -> f64 {
    let h = 0.5 * x;
    let h2 = h * h;
    let mut term = h;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -h2 / (k * (k + 1.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && k > h {
            return sum;
        }
    }
}

/// Hankel's asymptotic expansion, summed up to its smallest term.
fn j1_hankel(x: f64) -> f64 {
    let mu = 4.0;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..200u32 {
        if term.abs() > last {
            break;
        }
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        last = term.abs();
        if last < 1e-17 {
            break;
        }
        let j = (2 * k + 1) as f64;
        term *= (mu - j * j) / ((k + 1) as f64 * 8.0 * x);
    }
    let w = x - 0.75 * PI;
    (2.0 / (PI * x)).sqrt() * (p * w.cos() - q * w.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    // (x, I1(x), J1(x)) reference values from an independent library
    const TABLE: [(f64, f64, f64); 12] = [
        (0.1, 0.050062526047092694, 0.049937526036242),
        (0.5, 0.25789430539089636, 0.24226845767487387),
        (1.0, 0.5651591039924851, 0.44005058574493355),
        (2.5, 2.5167162452886984, 0.497094102464274),
        (5.0, 24.335642142450524, -0.3275791375914653),
        (8.0, 399.8731367825599, 0.2346363468539146),
        (11.9, 16479.060192397505, -0.22898324966192404),
        (12.5, 29345.74964207113, -0.16548380461475956),
        (15.0, 328124.92197020643, 0.20510403861352278),
        (20.0, 42454973.385127775, 0.0668331241758502),
        (30.0, 768532038938.9569, -0.11875106261662305),
        (50.0, 2.9030785901035566e20, -0.09751182812517509),
    ];

    #[test]
    fn i1_matches_reference() {
        for (x, i1, _) in TABLE {
            let v = bessel_i1(x);
            assert!((v - i1).abs() <= 1e-14 * i1, "x={x}: {v} vs {i1}");
            assert_eq!(bessel_i1(-x), -v);
        }
        assert_eq!(bessel_i1(0.0), 0.0);
    }

    #[test]
    fn j1_matches_reference() {
        for (x, _, j1) in TABLE {
            let v = bessel_j1(x);
            let tol = if x < 10.0 { 1e-14 } else { 1e-10 };
            assert!((v - j1).abs() <= tol, "x={x}: {v} vs {j1}");
        }
        assert_eq!(bessel_j1(0.0), 0.0);
    }

    #[test]
    fn j1_continuous_at_switch() {
        let lo = j1_series(SERIES_LIMIT);
        let hi = j1_hankel(SERIES_LIMIT);
        assert!((lo - hi).abs() < 1e-10, "{lo} vs {hi}");
    }

    #[test]
    fn small_argument_limits() {
        // I1(x) ~ x/2 and J1(x) ~ x/2 with opposite x^3/16 corrections
        let x = 1e-3;
        assert!((bessel_i1(x) - (x / 2.0 + x * x * x / 16.0)).abs() < 1e-16);
        assert!((bessel_j1(x) - (x / 2.0 - x * x * x / 16.0)).abs() < 1e-16);
    }
}
