//! Deterministic seeded test-vector generation for the numeric suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Draws `count` basis-vector coordinates in `[-window, window]^dim`,
/// skipping draws rejected by `accept`. The same `(seed, count, dim,
/// window)` always yields the same list.
pub fn seeded_coords(
    seed: u64,
    count: usize,
    dim: usize,
    window: i64,
    accept: impl Fn(&[i64]) -> bool,
) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let c: Vec<i64> = (0..dim).map(|_| rng.gen_range(-window..=window)).collect();
        if accept(&c) {
            out.push(c);
        }
    }
    out
}

/// Whether the modulus exponent `m` lies on an exceptional circle
/// `|q|^(-2k)`; the acceptance suites keep the central fibers of their test
/// vectors off these by default.
pub fn is_slow_exponent(m: i64) -> bool {
    m <= 0 && m % 2 == 0
}

/// Accepts `Z^6` coordinates whose central fibers under both pentagon
/// `F_q` factors (legs 1-2 and legs 2-3) avoid exceptional moduli, for the
/// `lambda` modulus exponents in use.
pub fn pentagon_filter(lambda_exponents: &[i64]) -> impl Fn(&[i64]) -> bool + '_ {
    |c: &[i64]| {
        let c3_12 = c[0] + c[3];
        let c3_23 = c[2] + c[5];
        lambda_exponents
            .iter()
            .all(|&ml| !is_slow_exponent(ml + c3_12 + 1) && !is_slow_exponent(ml + c3_23 + 1))
    }
}

/// Central-fiber filter for the slice identity on `Z^6`: avoids exceptional
/// moduli for the unit-lambda factors on legs 2-3, and — when `lambda` is
/// nonzero with modulus exponent `m` — for the scaled factor on legs 1-2 and
/// for the three-leg slice operator itself (fiber invariant `x0 - x4` after
/// the `Yhat_13` shift).
pub fn slice_filter(lambda_exponent: Option<i64>) -> impl Fn(&[i64]) -> bool {
    move |c: &[i64]| {
        if is_slow_exponent(c[2] + c[5] + 1) {
            return false;
        }
        match lambda_exponent {
            None => true,
            Some(m) => {
                !is_slow_exponent(m + c[0] + c[3] + 1) && !is_slow_exponent(m + c[0] - c[4] + 1)
            }
        }
    }
}

/// As [`pentagon_filter`], for the three `F_q` factors of the `Wtilde`
/// pentagon on `Z^9` (H_L coordinate pairs sit at offsets 1,2 within each
/// 3-coordinate block).
pub fn wtilde_pentagon_filter() -> impl Fn(&[i64]) -> bool {
    |c: &[i64]| {
        let pairs = [(1usize, 8usize), (1, 5), (4, 8)];
        pairs.iter().all(|&(i, l)| !is_slow_exponent(c[i] + c[l] + 1))
    }
}

/// Central-fiber filter for comultiplication checks on `Z^4` or boson checks
/// on `Z^6` (the `F_q` legs sit on the `H_L` pairs).
pub fn comult_filter(dim: usize) -> impl Fn(&[i64]) -> bool {
    move |c: &[i64]| {
        let c3 = match dim {
            4 => c[0] + c[3],
            6 => c[1] + c[5],
            _ => unreachable!("comult vectors live on Z^4 or Z^6"),
        };
        !is_slow_exponent(c3 + 1)
    }
}
