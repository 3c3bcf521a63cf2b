//! The quantum exponential `F_q` and its functional calculus.
//!
//! `F_q` is the unimodular function on the set of complex numbers whose
//! modulus is an integer power of `|q|` (plus zero), defined by the infinite
//! product of `(1 + |q|^{2k} conj(x)) / (1 + |q|^{2k} x)` factors, with value
//! `-1` on the exceptional set `{-|q|^{-2k}}`.
//!
//! Operators of the class `lambda * (A (x) D (x) B)` — the normal operator
//! `Xhat` and its diagonal-leg variants — act on each shift orbit ("fiber")
//! of the lattice as a gauge twist of a constant multiple of the bilateral
//! shift. Applying `F_q` of such an operator therefore reduces, per fiber, to
//! a convolution with the Fourier coefficients of the unimodular symbol
//! `theta -> F_q(mu e^(i theta))`, sampled on `fourier_samples` points.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::exact::QContext;
use crate::op::OpError;
use crate::vector::{BasisIndex, FiniteVector};

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum QexpError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("lambda = {lambda} lies outside the closed |q|-power spectrum")]
    Domain { lambda: Complex64 },
    #[error("oracle window {0} exceeds the supported maximum of 64")]
    WindowTooLarge(usize),
    #[error(transparent)]
    Op(#[from] OpError),
}

/// Numerical parameters of the quantum-exponential calculus.
#[derive(Debug, Clone)]
pub struct QexpParams {
    pub q: Complex64,
    /// Minimum number of product factors; extended per argument so the tail
    /// satisfies `|q|^(2K) max(|lambda|, 1) < 1e-16`.
    pub product_cutoff: usize,
    /// Fourier sample count `M` (a power of two, at least 64).
    pub fourier_samples: usize,
    /// Coefficient magnitude below which symbol taps and output entries are
    /// dropped.
    pub coeff_cutoff: f64,
}

impl QexpParams {
    pub fn new(q: Complex64) -> Result<Self, QexpError> {
        Self::with(q, 4096, 1e-12)
    }

    pub fn with(q: Complex64, fourier_samples: usize, coeff_cutoff: f64) -> Result<Self, QexpError> {
        let m = q.norm();
        if !(m > 0.0 && m < 1.0) {
            return Err(QexpError::BadParams(format!("need 0 < |q| < 1, got |q| = {m}")));
        }
        if fourier_samples < 64 || !fourier_samples.is_power_of_two() {
            return Err(QexpError::BadParams(format!(
                "fourier_samples must be a power of two >= 64, got {fourier_samples}"
            )));
        }
        if !coeff_cutoff.is_finite() || coeff_cutoff <= 0.0 {
            return Err(QexpError::BadParams(format!(
                "coeff_cutoff must be positive, got {coeff_cutoff}"
            )));
        }
        let product_cutoff = factors_needed(m, 1.0);
        Ok(QexpParams { q, product_cutoff, fourier_samples, coeff_cutoff })
    }

    pub fn context(&self) -> QContext {
        QContext::new(self.q).expect("validated q")
    }
}

fn factors_needed(abs_q: f64, abs_lambda: f64) -> usize {
    // |q|^(2K) * max(|lambda|, 1) < 1e-16
    let target = 1e-16f64.ln() - abs_lambda.max(1.0).ln();
    let k = target / (2.0 * abs_q.ln());
    (k.ceil().max(0.0) as usize) + 2
}

/// Integer `m` with `|lambda| = |q|^m`, or an error when the modulus is not a
/// power of `|q|` within relative tolerance `1e-9`. `lambda = 0` yields
/// `None`.
pub fn modulus_exponent(lambda: Complex64, abs_q: f64) -> Result<Option<i64>, QexpError> {
    let m = lambda.norm();
    if m == 0.0 {
        return Ok(None);
    }
    let e = m.ln() / abs_q.ln();
    let rounded = e.round();
    if ((e - rounded) * abs_q.ln().abs()).abs() > 1e-9 {
        return Err(QexpError::Domain { lambda });
    }
    Ok(Some(rounded as i64))
}

/// Scalar quantum exponential.
///
/// Factors with `|q|^(2k) |lambda| = 1` reduce to `conj(z)` for the
/// unimodular `z = |q|^(2k) lambda` — `(1 + conj z)/(1 + z) = conj z` on the
/// unit circle — which both removes the cancellation near the exceptional set
/// and returns exactly `-1` at its points.
pub fn fq_scalar(lambda: Complex64, params: &QexpParams) -> Result<Complex64, QexpError> {
    if lambda.re == 0.0 && lambda.im == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let abs_q = params.q.norm();
    modulus_exponent(lambda, abs_q)?;
    let kmax = params.product_cutoff.max(factors_needed(abs_q, lambda.norm()));
    let mut out = Complex64::new(1.0, 0.0);
    let mut scale = 1.0f64;
    for _ in 0..=kmax {
        let z = lambda * scale;
        let factor = if (z.norm() - 1.0).abs() < 1e-12 {
            z.conj()
        } else {
            (Complex64::new(1.0, 0.0) + z.conj()) / (Complex64::new(1.0, 0.0) + z)
        };
        out *= factor;
        scale *= abs_q * abs_q;
    }
    Ok(out)
}

/// One cached row of Fourier data: the taps of
/// `theta -> F_q(|q|^m e^(i theta))`.
#[derive(Debug, Clone)]
pub struct SymbolEntry {
    /// `(index, coefficient)` pairs with magnitude above the cutoff.
    pub taps: Vec<(i64, Complex64)>,
    /// l^2 difference against a run with doubled sample count.
    pub sampling_error: f64,
    /// Whether the modulus hits the exceptional circle `|q|^(-2k)`; such
    /// entries are built with quadrupled sample count.
    pub slow_decay: bool,
    /// Samples actually used.
    pub samples: usize,
}

/// Cache of symbol Fourier data, keyed by the modulus exponent of the fiber
/// constant. Phases rotate the taps at use sites, so one entry serves every
/// fiber in a modulus class. Built lazily; read-only afterwards.
pub struct SymbolTable {
    params: QexpParams,
    cache: Mutex<HashMap<i64, SymbolEntry>>,
}

impl SymbolTable {
    pub fn new(params: QexpParams) -> Self {
        SymbolTable { params, cache: Mutex::new(HashMap::new()) }
    }

    pub fn params(&self) -> &QexpParams {
        &self.params
    }

    /// Fourier coefficients for modulus exponent `m`, building on first use.
    pub fn entry(&self, m: i64) -> Result<SymbolEntry, QexpError> {
        if let Some(e) = self.cache.lock().expect("poisoned").get(&m) {
            return Ok(e.clone());
        }
        let slow = m <= 0 && m % 2 == 0;
        let base = if slow { self.params.fourier_samples * 4 } else { self.params.fourier_samples };
        let coarse = self.sample_coefficients(m, base)?;
        let fine = self.sample_coefficients(m, base * 2)?;
        let mut err_sq = 0.0;
        for (t, c) in coarse.iter().enumerate() {
            let tt = wrap_index(t, base);
            let c2 = fine[unwrap_index(tt, base * 2)];
            err_sq += (c - c2).norm_sqr();
        }
        let mut taps: Vec<(i64, Complex64)> = coarse
            .iter()
            .enumerate()
            .map(|(t, c)| (wrap_index(t, base), *c))
            .filter(|(_, c)| c.norm() >= self.params.coeff_cutoff)
            .collect();
        taps.sort_by_key(|(t, _)| *t);
        let parseval: f64 = coarse.iter().map(|c| c.norm_sqr()).sum();
        debug_assert!(parseval <= 1.0 + 1e-10, "Parseval sum {parseval} exceeds 1");
        let entry = SymbolEntry { taps, sampling_error: err_sq.sqrt(), slow_decay: slow, samples: base };
        self.cache.lock().expect("poisoned").insert(m, entry.clone());
        Ok(entry)
    }

    fn sample_coefficients(&self, m: i64, samples: usize) -> Result<Vec<Complex64>, QexpError> {
        let abs_q = self.params.q.norm();
        let radius = abs_q.powi(i32::try_from(m).expect("modulus exponent fits i32"));
        let mut buf: Vec<Complex64> = (0..samples)
            .map(|r| {
                let theta = 2.0 * PI * (r as f64) / (samples as f64);
                let lam = Complex64::from_polar(radius, theta);
                fq_scalar(lam, &self.params)
            })
            .collect::<Result<_, _>>()?;
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(samples).process(&mut buf);
        let scale = 1.0 / samples as f64;
        for c in &mut buf {
            *c *= scale;
        }
        Ok(buf)
    }
}

fn wrap_index(t: usize, samples: usize) -> i64 {
    if t < samples / 2 {
        t as i64
    } else {
        t as i64 - samples as i64
    }
}

fn unwrap_index(t: i64, samples: usize) -> usize {
    if t >= 0 {
        t as usize
    } else {
        (t + samples as i64) as usize
    }
}

/// Coordinate layout of an `Xhat`-class operator
/// `lambda * (A)_legA (x) (diagonal phases) (x) (B)_legB` inside `Z^dim`.
///
/// `a` holds the coordinates `(i, j)` carrying `P b^-1 q^(Ntilde/2)`, `b`
/// holds `(k, l)` carrying `q^(Ntilde/2) b`, and each `(coord, w)` in `diag`
/// contributes a constant fiber phase `zeta^(w x_coord)`.
#[derive(Debug, Clone)]
pub struct XhatLegs {
    pub dim: usize,
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub diag: Vec<(usize, i64)>,
}

impl XhatLegs {
    /// The plain two-leg operator `Xhat` on `H_L (x) H_L`.
    pub fn plain() -> Self {
        XhatLegs { dim: 4, a: (0, 1), b: (2, 3), diag: Vec::new() }
    }

    /// Shift orbit invariants of a lattice point: the moving coordinates
    /// `(i, j, k, l)` are replaced by `(c1, 0, c2, c3)` with `c1 = i - j`,
    /// `c2 = k - l`, `c3 = i + l`; inert coordinates pass through.
    pub fn fiber_key(&self, x: &[i64]) -> FiberDescriptor {
        let (ia, ja) = self.a;
        let (kb, lb) = self.b;
        let mut key: Vec<i64> = x.to_vec();
        key[ia] = x[ia] - x[ja];
        key[ja] = 0;
        key[kb] = x[kb] - x[lb];
        key[lb] = x[ia] + x[lb];
        let zeta_weight = self.diag.iter().map(|&(c, w)| w * x[c]).sum();
        FiberDescriptor { key: BasisIndex::new(&key), c3: x[ia] + x[lb], zeta_weight }
    }

    /// Lattice point of a fiber at orbit parameter `t`.
    pub fn point(&self, fiber: &FiberDescriptor, t: i64) -> Vec<i64> {
        let (ia, ja) = self.a;
        let (kb, lb) = self.b;
        let key = fiber.key.coords();
        let mut x = key.to_vec();
        let i = key[ia] + t;
        let l = key[lb] - i;
        x[ia] = i;
        x[ja] = t;
        x[lb] = l;
        x[kb] = key[kb] + l;
        x
    }

    pub fn orbit_parameter(&self, x: &[i64]) -> i64 {
        x[self.a.1]
    }
}

/// An orbit of the shift part of an `Xhat`-class operator, on which the
/// operator is gauge-equivalent to `mu` times the bilateral shift.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiberDescriptor {
    /// Orbit invariants, with inert coordinates embedded verbatim.
    pub key: BasisIndex,
    /// The invariant `i + l`; the fiber constant has modulus `|q|^(c3 + 1)`
    /// before the `lambda` factor.
    pub c3: i64,
    /// Exponent of the constant `zeta` phase from diagonal legs.
    pub zeta_weight: i64,
}

/// Fibers of a vector with their orbit-indexed entries.
pub type FiberData = Vec<(FiberDescriptor, Vec<(i64, Complex64)>)>;

/// Splits the support of a float-mode vector into fibers.
pub fn fiber_decompose(
    vec: &FiniteVector<Complex64>,
    legs: &XhatLegs,
) -> Result<FiberData, QexpError> {
    if vec.dim() != legs.dim {
        return Err(QexpError::Op(OpError::DimensionMismatch { op: legs.dim, operand: vec.dim() }));
    }
    let mut fibers: HashMap<FiberDescriptor, Vec<(i64, Complex64)>> = HashMap::new();
    for (idx, c) in vec.iter() {
        let fd = legs.fiber_key(idx.coords());
        let t = legs.orbit_parameter(idx.coords());
        fibers.entry(fd).or_default().push((t, *c));
    }
    let mut out: Vec<_> = fibers.into_iter().collect();
    out.sort_by(|a, b| a.0.key.cmp(&b.0.key));
    Ok(out)
}

/// Diagnostics accumulated by functional-calculus applications.
#[derive(Debug, Clone, Copy, Default)]
pub struct ApplyStats {
    /// Estimated truncation error: symbol sampling estimates plus dropped
    /// output mass.
    pub truncation_estimate: f64,
    /// Exceptional-modulus fibers encountered.
    pub slow_fibers: usize,
}

impl ApplyStats {
    pub fn merge(&mut self, other: ApplyStats) {
        self.truncation_estimate += other.truncation_estimate;
        self.slow_fibers += other.slow_fibers;
    }
}

/// Gauge phase making the fiber restriction a plain shift:
/// `d_t = zeta^(-t(t+1)/2)`.
fn gauge(ctx: &QContext, t: i64) -> Complex64 {
    ctx.zeta_power(-t * (t + 1) / 2)
}

/// Applies `F_q(lambda * Op)` (or its adjoint) to a finitely supported
/// vector, fiber by fiber.
pub fn apply_fq_shift_class(
    vec: &FiniteVector<Complex64>,
    legs: &XhatLegs,
    lambda: Complex64,
    adjoint: bool,
    table: &SymbolTable,
) -> Result<(FiniteVector<Complex64>, ApplyStats), QexpError> {
    let params = table.params();
    let ctx = params.context();
    let mut stats = ApplyStats::default();
    if lambda.re == 0.0 && lambda.im == 0.0 {
        // F_q(0) = 1: the operator is the identity.
        return Ok((vec.clone(), stats));
    }
    let m_lambda = modulus_exponent(lambda, params.q.norm())?.expect("nonzero lambda");
    let mut out = FiniteVector::zero(vec.dim());
    for (fiber, entries) in fiber_decompose(vec, legs)? {
        let m = m_lambda + fiber.c3 + 1;
        let entry = table.entry(m)?;
        if entry.slow_decay {
            stats.slow_fibers += 1;
        }
        // mu = lambda * zeta^w * q^(c3+1); |mu| = |q|^m by construction.
        let mu = lambda
            * ctx.zeta_power(fiber.zeta_weight)
            * ctx.half_power(2 * (fiber.c3 + 1), 0);
        let phase = mu.arg();
        let fiber_norm: f64 = entries.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt();
        stats.truncation_estimate += entry.sampling_error * fiber_norm;

        // BTreeMap keeps the accumulation order deterministic, so reports
        // are byte-identical across runs.
        let mut conv: std::collections::BTreeMap<i64, Complex64> = std::collections::BTreeMap::new();
        for &(t, c) in &entries {
            let g = gauge(&ctx, t).conj() * c;
            for &(dt, tap) in &entry.taps {
                // Taps of the conjugated symbol are conj(c_{-t}); the phase
                // rotation e^(i t phi) applies after the flip either way.
                let (idx, base) = if adjoint { (-dt, tap.conj()) } else { (dt, tap) };
                let rotated = base * Complex64::from_polar(1.0, phase * idx as f64);
                *conv.entry(t + idx).or_insert(Complex64::new(0.0, 0.0)) += rotated * g;
            }
        }
        let mut dropped_sq = 0.0;
        for (u, h) in conv {
            let val = gauge(&ctx, u) * h;
            if val.norm() < params.coeff_cutoff {
                dropped_sq += val.norm_sqr();
                continue;
            }
            out.insert_add(BasisIndex::new(&legs.point(&fiber, u)), val);
        }
        stats.truncation_estimate += dropped_sq.sqrt();
    }
    Ok((out, stats))
}

/// Dense verification oracle: the fiber operator on a periodically wrapped
/// window of size `2 * window`, diagonalized by a directly computed discrete
/// Fourier transform (independent of the FFT-convolution production path).
///
/// Row/column index `r` represents orbit parameter `t = t0 - window + r`;
/// `symbol` is the function applied to the spectrum (use [`fq_scalar`] for
/// `F_q`, or a constant closure for trivial checks).
pub fn dense_oracle_fq(
    window: usize,
    mu: Complex64,
    t0: i64,
    adjoint: bool,
    ctx: &QContext,
    symbol: &dyn Fn(Complex64) -> Complex64,
) -> Result<Vec<Vec<Complex64>>, QexpError> {
    if window > 64 {
        return Err(QexpError::WindowTooLarge(window));
    }
    let n = 2 * window;
    let omega = 2.0 * PI / n as f64;
    let values: Vec<Complex64> = (0..n)
        .map(|s| {
            let v = symbol(mu * Complex64::from_polar(1.0, omega * s as f64));
            if adjoint {
                v.conj()
            } else {
                v
            }
        })
        .collect();
    // Circulant coefficients a_k = (1/n) sum_s values_s w^{-ks}; entry (u, t)
    // of the gauged operator is d(t_u) a_{u - t} conj(d(t_t)).
    let a: Vec<Complex64> = (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (s, v) in values.iter().enumerate() {
                acc += v * Complex64::from_polar(1.0, -omega * (k as f64) * (s as f64));
            }
            acc / n as f64
        })
        .collect();
    let mut mat = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (u, row) in mat.iter_mut().enumerate() {
        let tu = t0 - window as i64 + u as i64;
        for (t, slot) in row.iter_mut().enumerate() {
            let tt = t0 - window as i64 + t as i64;
            let k = (u + n - t) % n;
            *slot = gauge(ctx, tu) * a[k] * gauge(ctx, tt).conj();
        }
    }
    Ok(mat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> QexpParams {
        QexpParams::new(Complex64::new(0.3, 0.4)).unwrap()
    }

    #[test]
    fn fq_at_zero_is_one() {
        let p = params();
        let v = fq_scalar(Complex64::new(0.0, 0.0), &p).unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn fq_at_minus_one_is_exactly_minus_one() {
        let p = params();
        let v = fq_scalar(Complex64::new(-1.0, 0.0), &p).unwrap();
        assert_eq!(v.re, -1.0);
        assert_eq!(v.im.abs(), 0.0);
    }

    #[test]
    fn fq_on_positive_reals_is_one() {
        let p = params();
        for m in -4..=4 {
            let lam = Complex64::new(0.5f64.powi(m), 0.0);
            let v = fq_scalar(lam, &p).unwrap();
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12, "m = {m}: {v}");
        }
    }

    #[test]
    fn fq_conjugation_symmetry_and_unimodularity() {
        let p = params();
        for m in -6..=6i32 {
            for step in 0..8 {
                let lam = Complex64::from_polar(0.5f64.powi(m), 0.1 + step as f64 * 0.7);
                let v = fq_scalar(lam, &p).unwrap();
                let vc = fq_scalar(lam.conj(), &p).unwrap();
                assert!((v.norm() - 1.0).abs() < 1e-12);
                assert!((vc - v.conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn fq_rejects_off_spectrum_modulus() {
        let p = params();
        let r = fq_scalar(Complex64::new(0.7, 0.0), &p);
        assert!(matches!(r, Err(QexpError::Domain { .. })));
    }

    #[test]
    fn params_validation() {
        assert!(QexpParams::with(Complex64::new(0.3, 0.4), 100, 1e-12).is_err());
        assert!(QexpParams::with(Complex64::new(0.3, 0.4), 4096, 0.0).is_err());
        assert!(QexpParams::with(Complex64::new(1.2, 0.0), 4096, 1e-12).is_err());
    }

    #[test]
    fn symbol_parseval_and_shapes() {
        let table = SymbolTable::new(params());
        for m in [-3i64, -1, 0, 1, 4] {
            let e = table.entry(m).unwrap();
            let sum: f64 = e.taps.iter().map(|(_, c)| c.norm_sqr()).sum();
            assert!(sum <= 1.0 + 1e-10);
            assert!(sum > 0.9, "taps capture the symbol mass");
            assert_eq!(e.slow_decay, m <= 0 && m % 2 == 0);
            assert!(e.sampling_error < 1e-10, "m = {m}: {}", e.sampling_error);
        }
    }

    #[test]
    fn fiber_decomposition_examples() {
        let legs = XhatLegs::plain();
        // Single basis vector at the origin: one fiber (0,0,0), t = 0.
        let v = FiniteVector::<Complex64>::basis(&[0, 0, 0, 0]);
        let fibers = fiber_decompose(&v, &legs).unwrap();
        assert_eq!(fibers.len(), 1);
        assert_eq!(fibers[0].0.c3, 0);
        assert_eq!(fibers[0].1, vec![(0, Complex64::new(1.0, 0.0))]);
        // The Xhat image of the origin lies on the same fiber at t = 1.
        let w = FiniteVector::<Complex64>::basis(&[1, 1, -1, -1]);
        let fw = fiber_decompose(&w, &legs).unwrap();
        assert_eq!(fw[0].0, fibers[0].0);
        assert_eq!(fw[0].1[0].0, 1);
        // Two separated points: two fibers with invariants (0,0,0) and (5,0,5).
        let two = v.add(&FiniteVector::basis(&[5, 0, 0, 0]));
        let ft = fiber_decompose(&two, &legs).unwrap();
        assert_eq!(ft.len(), 2);
        let c3s: Vec<i64> = ft.iter().map(|(f, _)| f.c3).collect();
        assert!(c3s.contains(&0) && c3s.contains(&5));
    }

    #[test]
    fn apply_preserves_norm_and_inverts() {
        let table = SymbolTable::new(params());
        let legs = XhatLegs::plain();
        let v = FiniteVector::<Complex64>::basis(&[0, 0, 0, 0]);
        let one = Complex64::new(1.0, 0.0);
        let (fv, _) = apply_fq_shift_class(&v, &legs, one, false, &table).unwrap();
        assert!((fv.norm() - 1.0).abs() < 1e-8);
        let (back, _) = apply_fq_shift_class(&fv, &legs, one, true, &table).unwrap();
        assert!(back.sub(&v).norm() < 1e-8);
    }

    #[test]
    fn apply_zero_vector_and_zero_lambda() {
        let table = SymbolTable::new(params());
        let legs = XhatLegs::plain();
        let z = FiniteVector::<Complex64>::zero(4);
        let (out, _) =
            apply_fq_shift_class(&z, &legs, Complex64::new(1.0, 0.0), false, &table).unwrap();
        assert!(out.is_zero());
        let v = FiniteVector::<Complex64>::basis(&[2, -1, 0, 3]);
        let (out, _) =
            apply_fq_shift_class(&v, &legs, Complex64::new(0.0, 0.0), false, &table).unwrap();
        assert_eq!(out, v);
    }

    #[test]
    fn fiber_support_is_preserved() {
        let table = SymbolTable::new(params());
        let legs = XhatLegs::plain();
        let v = FiniteVector::<Complex64>::basis(&[1, 0, -1, 2]);
        let fibers_in = fiber_decompose(&v, &legs).unwrap();
        let (out, _) =
            apply_fq_shift_class(&v, &legs, Complex64::new(1.0, 0.0), false, &table).unwrap();
        let fibers_out = fiber_decompose(&out, &legs).unwrap();
        assert_eq!(fibers_out.len(), 1);
        assert_eq!(fibers_out[0].0, fibers_in[0].0);
    }

    #[test]
    fn slow_fiber_is_flagged_and_still_accurate() {
        // c3 = -1 puts the fiber constant on the exceptional circle |q|^0;
        // the application must flag it, and the symbol stays smooth enough
        // for unitarity and invertibility to hold.
        let table = SymbolTable::new(params());
        let legs = XhatLegs::plain();
        let v = FiniteVector::<Complex64>::basis(&[-1, 0, 0, 0]);
        let one = Complex64::new(1.0, 0.0);
        let (fv, stats) = apply_fq_shift_class(&v, &legs, one, false, &table).unwrap();
        assert_eq!(stats.slow_fibers, 1);
        assert!(stats.truncation_estimate < 1e-9);
        assert!((fv.norm() - 1.0).abs() < 1e-8);
        let (back, _) = apply_fq_shift_class(&fv, &legs, one, true, &table).unwrap();
        assert!(back.sub(&v).norm() < 1e-8);
    }

    #[test]
    fn commutes_with_total_number_operator() {
        // i+j+k+l = c1 + c2 + 2 c3 is constant on every fiber, so the
        // functional calculus commutes with multiplication by it. The
        // comparison needs a cutoff below the target accuracy: entries at the
        // drop threshold scale differently on the two sides.
        let table = SymbolTable::new(
            QexpParams::with(Complex64::new(0.3, 0.4), 4096, 1e-15).unwrap(),
        );
        let legs = XhatLegs::plain();
        let n_tot = |v: &FiniteVector<Complex64>| {
            let mut out = FiniteVector::zero(4);
            for (idx, c) in v.iter() {
                let s: i64 = idx.coords().iter().sum();
                out.insert_add(idx.clone(), c * s as f64);
            }
            out
        };
        let one = Complex64::new(1.0, 0.0);
        let v = FiniteVector::<Complex64>::basis(&[1, 0, -1, 2])
            .add(&FiniteVector::basis(&[0, 1, 1, 0]).scale(Complex64::new(0.3, -0.2)));
        let (a, _) = apply_fq_shift_class(&n_tot(&v), &legs, one, false, &table).unwrap();
        let (b, _) = apply_fq_shift_class(&v, &legs, one, false, &table).unwrap();
        assert!(a.sub(&n_tot(&b)).norm() < 1e-12);
    }

    #[test]
    fn oracle_with_constant_symbol_is_identity() {
        let ctx = QContext::new(Complex64::new(0.3, 0.4)).unwrap();
        let mat = dense_oracle_fq(8, Complex64::new(0.5, 0.0), 0, false, &ctx, &|_| {
            Complex64::new(1.0, 0.0)
        })
        .unwrap();
        for (u, row) in mat.iter().enumerate() {
            for (t, v) in row.iter().enumerate() {
                let expect = if u == t { 1.0 } else { 0.0 };
                assert!((v - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn oracle_matrix_is_unitary() {
        let p = params();
        let ctx = p.context();
        let mu = p.q; // modulus |q|^1
        let n = 32;
        let mat =
            dense_oracle_fq(n / 2, mu, 0, false, &ctx, &|lam| fq_scalar(lam, &p).unwrap()).unwrap();
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for row in mat.iter() {
                    acc += row[r].conj() * row[c];
                }
                let expect = if r == c { 1.0 } else { 0.0 };
                assert!(
                    (acc - Complex64::new(expect, 0.0)).norm() < 1e-12,
                    "entry ({r},{c}) = {acc}"
                );
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let table = SymbolTable::new(params());
        let legs = XhatLegs::plain(); // dim 4
        let v = FiniteVector::<Complex64>::basis(&[0, 0, 0, 0, 0, 0]);
        let r = apply_fq_shift_class(&v, &legs, Complex64::new(1.0, 0.0), false, &table);
        assert!(matches!(r, Err(QexpError::Op(_))));
    }

    #[test]
    fn oracle_window_limit() {
        let ctx = QContext::new(Complex64::new(0.3, 0.4)).unwrap();
        let r = dense_oracle_fq(100, Complex64::new(0.5, 0.0), 0, false, &ctx, &|_| {
            Complex64::new(1.0, 0.0)
        });
        assert!(matches!(r, Err(QexpError::WindowTooLarge(100))));
    }
}
