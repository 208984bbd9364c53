//! Rademacher series `c(mu, nu)`: Bessel kernels, coefficients, q-expansions, shadows, dualities.

use crate::arith::{frac, Rat};
use crate::error::{Error, Result};
use crate::kloosterman::{kloosterman_table, SpectralIndex};
use crate::modgroup::GroupSpec;
use crate::multiplier::MultiplierSystem;
use crate::special::{bessel_i, e_of, gamma_real, hyp0f1, real_principal_power, rgamma, ComplexSum};
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::f64::consts::TAU;

pub type Weight = Rat;

#[inline]
pub(crate) fn rat_f64(x: Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Relative size of the tail below which a series counts as converged.
pub const CONVERGED_TAIL: f64 = 0.05;

/// `B_{gamma,w}(mu, nu)` for lower-left entry `c > 0`.
///
/// Both branches are written as `prefactor * 0F1(b; X)` with `X = (2 pi/c)^2 (-mu) nu`.
pub fn b_kernel(c: i64, w: Weight, mu: SpectralIndex, nu: SpectralIndex) -> Result<Complex64> {
    if c <= 0 {
        return Err(Error::InvalidInput(format!("b_kernel needs c > 0, got {c}")));
    }
    let one = Rat::from_integer(1);
    if w < one && mu.value.is_positive() {
        return Err(Error::Branch { weight: w.to_string(), mu: mu.value.to_string() });
    }
    let wf = rat_f64(w);
    let (m, n) = (mu.to_f64(), nu.to_f64());
    let r = TAU / c as f64;
    let x = r * r * (-m) * n;
    let rot = e_of(Complex64::new(-wf / 4.0, 0.0));
    if w >= one {
        let p = real_principal_power(n, wf - 1.0);
        if p.is_zero() {
            return Ok(Complex64::zero());
        }
        Ok(rot * p * (r.powf(wf) * rgamma(wf) * hyp0f1(wf, x)?))
    } else {
        let p = real_principal_power(-m, 1.0 - wf);
        if p.is_zero() {
            return Ok(Complex64::zero());
        }
        Ok(rot * p * (r.powf(2.0 - wf) * rgamma(2.0 - wf) * hyp0f1(2.0 - wf, x)?))
    }
}

/// Bessel form `e(-w/4) (-mu)^{(1-w)/2} nu^{(w-1)/2} (2 pi/c) I_{|w-1|}((4 pi/c) sqrt(-mu nu))`
/// for `mu < 0 < nu`.
pub fn b_kernel_bessel(c: i64, w: Weight, mu: SpectralIndex, nu: SpectralIndex) -> Result<Complex64> {
    let (m, n) = (mu.to_f64(), nu.to_f64());
    if !(m < 0.0 && n > 0.0) {
        return Err(Error::InvalidInput("Bessel form of B needs mu < 0 < nu".into()));
    }
    let wf = rat_f64(w);
    let z = 2.0 * TAU / c as f64 * (-m * n).sqrt();
    let v = (-m).powf((1.0 - wf) / 2.0) * n.powf((wf - 1.0) / 2.0) * TAU / c as f64 * bessel_i((wf - 1.0).abs(), z)?;
    Ok(e_of(Complex64::new(-wf / 4.0, 0.0)) * v)
}

/// Truncated Rademacher series with its partial-sum trace.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesResult {
    pub group: String,
    pub multiplier: String,
    pub weight: Weight,
    pub mu: SpectralIndex,
    pub nu: SpectralIndex,
    pub value: Complex64,
    pub partial_sums: Vec<(i64, Complex64)>,
    pub tail_estimate: f64,
    pub c_max: i64,
    pub window: usize,
    pub windowed: bool,
    pub converged_flag: bool,
}

impl SeriesResult {
    pub fn last_partial(&self) -> Complex64 {
        self.partial_sums.last().map(|p| p.1).unwrap_or_default()
    }

    pub fn to_json(&self) -> Value {
        let trace: Vec<Value> = self.partial_sums.iter().map(|(c, z)| json!([c, z.re, z.im])).collect();
        json!({
            "group": self.group,
            "multiplier": self.multiplier,
            "weight": self.weight.to_string(),
            "mu": self.mu.to_string(),
            "nu": self.nu.to_string(),
            "c_max": self.c_max,
            "window": self.window,
            "windowed": self.windowed,
            "value_re": self.value.re,
            "value_im": self.value.im,
            "tail_estimate": self.tail_estimate,
            "converged_flag": self.converged_flag,
            "partial_sums": trace,
        })
    }
}

/// Power-law fit `|increment| ~ A c^{-p}` over the last decade of moduli, summed to infinity.
///
/// If increments change sign often (measured along the current value) the tail is treated
/// as a random walk, `A C^{1/2-p} / sqrt(2p-1)`; otherwise as monotone, `A C^{1-p}/(p-1)`.
pub fn tail_estimate(increments: &[(i64, Complex64)], value: Complex64) -> f64 {
    let Some(&(c_last, _)) = increments.last() else { return 0.0 };
    let lo = (c_last / 10).max(1);
    // sums that vanish up to rounding would swamp the log fit
    let peak = increments.iter().filter(|(c, _)| *c > lo).map(|(_, z)| z.norm()).fold(0.0, f64::max);
    let floor = 1e-9 * peak;
    let pts: Vec<(f64, f64)> = increments
        .iter()
        .filter(|(c, z)| *c > lo && z.norm() > floor)
        .map(|(c, z)| ((*c as f64).ln(), z.norm().ln()))
        .collect();
    if pts.len() < 3 {
        return increments.iter().rev().find(|(_, z)| z.norm() > 0.0).map_or(0.0, |(_, z)| z.norm());
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return f64::INFINITY;
    }
    let p = -sxy / sxx;
    let log_a = my + p * mx;
    let big_c = c_last as f64;
    let dir = if value.norm() > 0.0 { value / value.norm() } else { Complex64::new(1.0, 0.0) };
    let signs: Vec<f64> = increments
        .iter()
        .filter(|(c, z)| *c > lo && z.norm() > floor)
        .map(|(_, z)| (z * dir.conj()).re.signum())
        .collect();
    let flips = signs.windows(2).filter(|w| w[0] != w[1]).count() as f64 / (signs.len() - 1) as f64;
    let est = if flips > 0.25 {
        if p > 0.5 {
            (log_a + (0.5 - p) * big_c.ln()).exp() / (2.0 * p - 1.0).sqrt()
        } else {
            f64::INFINITY
        }
    } else if p > 1.0 {
        (log_a + (1.0 - p) * big_c.ln()).exp() / (p - 1.0)
    } else {
        f64::INFINITY
    };
    if est.is_nan() {
        f64::INFINITY
    } else {
        est
    }
}

fn check_series_inputs(spec: &GroupSpec, sys: &MultiplierSystem, w: Weight, mu: SpectralIndex, nus: &[SpectralIndex]) -> Result<()> {
    mu.check_grid(sys, spec.width)?;
    for nu in nus {
        nu.check_grid(sys, spec.width)?;
    }
    if w < Rat::from_integer(1) && mu.value.is_positive() {
        return Err(Error::Branch { weight: w.to_string(), mu: mu.value.to_string() });
    }
    Ok(())
}

/// Per-modulus terms `K B / h` for several `nu` at once.
pub fn series_terms(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    nus: &[SpectralIndex],
    c_max: i64,
) -> Result<Vec<(i64, Vec<Complex64>)>> {
    check_series_inputs(spec, sys, w, mu, nus)?;
    let table = kloosterman_table(spec, sys, mu, nus, c_max)?;
    let h = spec.width as f64;
    table
        .into_iter()
        .map(|(c, sums)| {
            let row = sums
                .iter()
                .zip(nus)
                .map(|(k, nu)| Ok(k * b_kernel(c, w, mu, *nu)? / h))
                .collect::<Result<Vec<_>>>()?;
            Ok((c, row))
        })
        .collect()
}

fn assemble(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    nu: SpectralIndex,
    terms: &[(i64, Complex64)],
    c_max: i64,
    window: usize,
) -> SeriesResult {
    let mut acc = ComplexSum::new();
    let mut partial_sums = Vec::with_capacity(terms.len());
    for &(c, t) in terms {
        acc.add(t);
        partial_sums.push((c, acc.value()));
    }
    let last = acc.value();
    let windowed = window > 0 && !partial_sums.is_empty();
    let value = if windowed {
        let k = window.min(partial_sums.len());
        partial_sums[partial_sums.len() - k..].iter().map(|p| p.1).sum::<Complex64>() / k as f64
    } else {
        last
    };
    let tail = tail_estimate(terms, value);
    let finite = value.re.is_finite() && value.im.is_finite();
    SeriesResult {
        group: spec.name(),
        multiplier: sys.to_string(),
        weight: w,
        mu,
        nu,
        value,
        partial_sums,
        tail_estimate: tail,
        c_max,
        window,
        windowed,
        converged_flag: finite && tail <= CONVERGED_TAIL * value.norm().max(1.0),
    }
}

/// `c_{Gamma,psi,w}(mu, nu)` for several `nu`, sharing the Kloosterman walk.
pub fn coefficients(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    nus: &[SpectralIndex],
    c_max: i64,
    window: usize,
) -> Result<Vec<SeriesResult>> {
    let terms = series_terms(spec, sys, w, mu, nus, c_max)?;
    Ok(nus
        .iter()
        .enumerate()
        .map(|(j, nu)| {
            let col: Vec<(i64, Complex64)> = terms.iter().map(|(c, r)| (*c, r[j])).collect();
            assemble(spec, sys, w, mu, *nu, &col, c_max, window)
        })
        .collect())
}

/// `c_{Gamma,psi,w}(mu, nu)` truncated at `c <= c_max`; `window > 0` averages the last partial sums.
pub fn coefficient(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    nu: SpectralIndex,
    c_max: i64,
    window: usize,
) -> Result<SeriesResult> {
    Ok(coefficients(spec, sys, w, mu, &[nu], c_max, window)?.remove(0))
}

/// `c(mu, 0)` from its closed form in `c^{-(2-w)}`; requires `alpha = 0`, and is zero for `w >= 1`.
pub fn constant_term(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    c_max: i64,
) -> Result<SeriesResult> {
    let alpha = sys.alpha_at_infinity(spec.width).value();
    if !alpha.is_zero() {
        return Err(Error::AlphaNonZero(alpha.to_string()));
    }
    let zero = SpectralIndex::integer(0);
    if w >= Rat::from_integer(1) {
        mu.check_grid(sys, spec.width)?;
        return Ok(assemble(spec, sys, w, mu, zero, &[], c_max, 0));
    }
    check_series_inputs(spec, sys, w, mu, &[zero])?;
    let wf = rat_f64(w);
    let pref = e_of(Complex64::new(-wf / 4.0, 0.0))
        * real_principal_power(-mu.to_f64(), 1.0 - wf)
        * (TAU.powf(2.0 - wf) / gamma_real(2.0 - wf) / spec.width as f64);
    let table = kloosterman_table(spec, sys, mu, &[zero], c_max)?;
    let terms: Vec<(i64, Complex64)> =
        table.iter().map(|(c, s)| (*c, pref * s[0] * (*c as f64).powf(wf - 2.0))).collect();
    Ok(assemble(spec, sys, w, mu, zero, &terms, c_max, 0))
}

/// A truncated expansion `sum_k a_k q^{offset + k step}`, optionally plus `lead.1 q^{lead.0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion {
    pub offset: Rat,
    pub step: Rat,
    pub coefficients: Vec<Complex64>,
    pub leading_singular: Option<(Rat, Complex64)>,
}

impl QExpansion {
    pub fn exponent(&self, k: usize) -> Rat {
        self.offset + self.step * k as i64
    }

    /// The full coefficient of `q^e`, including the leading term.
    pub fn total_coefficient(&self, e: Rat) -> Complex64 {
        let mut v = Complex64::zero();
        if let Some((le, lc)) = self.leading_singular {
            if le == e {
                v += lc;
            }
        }
        let k = (e - self.offset) / self.step;
        if k.is_integer() && !k.is_negative() {
            if let Some(a) = self.coefficients.get(k.to_integer() as usize) {
                v += a;
            }
        }
        v
    }

    pub fn scaled(&self, s: Complex64) -> QExpansion {
        QExpansion {
            offset: self.offset,
            step: self.step,
            coefficients: self.coefficients.iter().map(|a| a * s).collect(),
            leading_singular: self.leading_singular.map(|(e, c)| (e, c * s)),
        }
    }

    pub fn zero_like(&self) -> QExpansion {
        self.scaled(Complex64::zero())
    }

    /// Direct evaluation of the truncated series at `tau`.
    pub fn eval(&self, tau: Complex64) -> Complex64 {
        let mut acc = ComplexSum::new();
        if let Some((e, c)) = self.leading_singular {
            acc.add(c * e_of(tau * rat_f64(e)));
        }
        for (k, a) in self.coefficients.iter().enumerate() {
            acc.add(a * e_of(tau * rat_f64(self.exponent(k))));
        }
        acc.value()
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, a)| json!([self.exponent(k).to_string(), a.re, a.im]))
            .collect();
        json!({
            "offset": self.offset.to_string(),
            "step": self.step.to_string(),
            "coefficients": coeffs,
            "leading": self.leading_singular.map(|(e, c)| json!([e.to_string(), c.re, c.im])),
        })
    }
}

/// The first `count` lattice exponents `nu >= 0` (or `> 0` when `strict`).
pub fn lattice_from(spec: &GroupSpec, sys: &MultiplierSystem, count: usize, strict: bool) -> Vec<SpectralIndex> {
    let h = spec.width;
    let alpha = sys.alpha_at_infinity(h).value();
    let mut first = frac(-alpha) / h;
    if strict && first.is_zero() {
        first += Rat::new(1, h);
    }
    (0..count).map(|k| SpectralIndex::new(first + Rat::new(k as i64, h))).collect()
}

/// `q^mu + sum_{nu >= 0} c(mu, nu) q^nu` over the first `nu_count` lattice points.
pub fn q_expansion_with_results(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    nu_count: usize,
    c_max: i64,
    window: usize,
) -> Result<(QExpansion, Vec<SeriesResult>)> {
    let nus = lattice_from(spec, sys, nu_count, false);
    let mut results = coefficients(spec, sys, w, mu, &nus, c_max, window)?;
    let alpha = sys.alpha_at_infinity(spec.width).value();
    if alpha.is_zero() && w < Rat::from_integer(1) && !results.is_empty() {
        results[0] = constant_term(spec, sys, w, mu, c_max)?;
    }
    let expansion = QExpansion {
        offset: nus.first().map_or(Rat::zero(), |n| n.value),
        step: Rat::new(1, spec.width),
        coefficients: results.iter().map(|r| r.value).collect(),
        leading_singular: Some((mu.value, Complex64::new(1.0, 0.0))),
    };
    Ok((expansion, results))
}

pub fn q_expansion(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    nu_count: usize,
    c_max: i64,
    window: usize,
) -> Result<QExpansion> {
    Ok(q_expansion_with_results(spec, sys, w, mu, nu_count, c_max, window)?.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Shadow {
    pub expansion: QExpansion,
    /// Set when `1/Gamma(1-w)` vanishes, making the shadow identically zero.
    pub gamma_pole: bool,
}

/// Shadow of `R^{[mu]}_{psi,w}`: `(-mu)^{1-w}/Gamma(1-w)` times the dual sum `R^{[-mu]}_{psi-bar,2-w}`.
pub fn shadow_expansion(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    nu_count: usize,
    c_max: i64,
    window: usize,
) -> Result<Shadow> {
    let wf = rat_f64(w);
    let rg = rgamma(1.0 - wf);
    let dual_mu = SpectralIndex::new(-mu.value);
    let dual_sys = sys.conj();
    let dual_w = Rat::from_integer(2) - w;
    if rg == 0.0 {
        dual_mu.check_grid(&dual_sys, spec.width)?;
        let nus = lattice_from(spec, &dual_sys, nu_count, false);
        let expansion = QExpansion {
            offset: nus.first().map_or(Rat::zero(), |n| n.value),
            step: Rat::new(1, spec.width),
            coefficients: vec![Complex64::zero(); nu_count],
            leading_singular: Some((dual_mu.value, Complex64::zero())),
        };
        return Ok(Shadow { expansion, gamma_pole: true });
    }
    let pref = real_principal_power(-mu.to_f64(), 1.0 - wf) * rg;
    let dual = q_expansion(spec, &dual_sys, dual_w, dual_mu, nu_count, c_max, window)?;
    Ok(Shadow { expansion: dual.scaled(pref), gamma_pole: false })
}

/// Outcome of a duality check: both sides, and residuals normalised by the larger scale.
#[derive(Clone, Debug, PartialEq)]
pub struct DualityReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Largest single-modulus residual, relative.
    pub per_modulus: f64,
    /// `|lhs - rhs|` relative to `max(|lhs|, |rhs|, largest term)`.
    pub residual: f64,
}

fn duality_report(pairs: &[(Complex64, Complex64)], gross: &[f64]) -> DualityReport {
    let (mut l, mut r) = (ComplexSum::new(), ComplexSum::new());
    let mut scale: f64 = 0.0;
    let mut worst: f64 = 0.0;
    for (&(a, b), &g) in pairs.iter().zip(gross) {
        l.add(a);
        r.add(b);
        // a vanishing Kloosterman sum leaves rounding noise of the size of its terms
        let s = a.norm().max(b.norm()).max(g);
        scale = scale.max(s);
        if s > 0.0 {
            worst = worst.max((a - b).norm() / s);
        }
    }
    let (lhs, rhs) = (l.value(), r.value());
    let denom = lhs.norm().max(rhs.norm()).max(scale);
    let residual = if denom == 0.0 { 0.0 } else { (lhs - rhs).norm() / denom };
    DualityReport { lhs, rhs, per_modulus: worst, residual }
}

/// Per modulus, the number of cosets times `|B_{c,w}(mu, nu)| |factor|`: the size of the summed terms.
fn gross_sizes(
    moduli: &[i64],
    w: Weight,
    mu: SpectralIndex,
    nu: SpectralIndex,
    factor: f64,
) -> Result<Vec<f64>> {
    moduli.iter().map(|&c| Ok(crate::arith::totient(c as u64) as f64 * b_kernel(c, w, mu, nu)?.norm() * factor)).collect()
}

/// `c_{psi-bar,2-w}(-nu,-mu)` against `-c_{psi,w}(mu,nu)`, modulus by modulus.
///
/// The kernel symmetry `B_{2-w}(-nu,-mu) = -e(w/2) B_w(mu,nu)` and the phase identity
/// `K_{psi-bar}(-nu,-mu) = e(-w/2) K_psi(mu,nu)` (via `gamma -> -gamma^{-1}`) leave a sign.
pub fn zagier_duality(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    nu: SpectralIndex,
    c_max: i64,
) -> Result<DualityReport> {
    let rhs = series_terms(spec, sys, w, mu, &[nu], c_max)?;
    let dual_w = Rat::from_integer(2) - w;
    let lhs = series_terms(spec, &sys.conj(), dual_w, SpectralIndex::new(-nu.value), &[SpectralIndex::new(-mu.value)], c_max)?;
    let pairs: Vec<(Complex64, Complex64)> = lhs.iter().zip(&rhs).map(|(a, b)| (a.1[0], -b.1[0])).collect();
    let moduli: Vec<i64> = rhs.iter().map(|t| t.0).collect();
    Ok(duality_report(&pairs, &gross_sizes(&moduli, w, mu, nu, 1.0)?))
}

pub fn zagier_duality_residual(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    nu: SpectralIndex,
    c_max: i64,
) -> Result<f64> {
    Ok(zagier_duality(spec, sys, w, mu, nu, c_max)?.residual)
}

/// `-conj(c_{psi-bar,2-w}(-mu,-nu) mu^{1-w})` against `c_{psi,w}(mu,nu) nu^{1-w}`, for `w >= 1`.
pub fn eichler_duality(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    nu: SpectralIndex,
    c_max: i64,
) -> Result<DualityReport> {
    if w < Rat::from_integer(1) {
        return Err(Error::InvalidInput(format!("Eichler duality is implemented for w >= 1, got {w}")));
    }
    if mu.value.is_zero() || nu.value.is_zero() {
        return Err(Error::InvalidInput("Eichler duality needs mu, nu != 0".into()));
    }
    let wf = rat_f64(w);
    let mu_pow = real_principal_power(mu.to_f64(), 1.0 - wf);
    let nu_pow = real_principal_power(nu.to_f64(), 1.0 - wf);
    let rhs = series_terms(spec, sys, w, mu, &[nu], c_max)?;
    let dual_w = Rat::from_integer(2) - w;
    let lhs = series_terms(spec, &sys.conj(), dual_w, SpectralIndex::new(-mu.value), &[SpectralIndex::new(-nu.value)], c_max)?;
    let pairs: Vec<(Complex64, Complex64)> =
        lhs.iter().zip(&rhs).map(|(a, b)| (-(a.1[0] * mu_pow).conj(), b.1[0] * nu_pow)).collect();
    let moduli: Vec<i64> = rhs.iter().map(|t| t.0).collect();
    Ok(duality_report(&pairs, &gross_sizes(&moduli, w, mu, nu, nu_pow.norm())?))
}

pub fn eichler_duality_residual(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    nu: SpectralIndex,
    c_max: i64,
) -> Result<f64> {
    Ok(eichler_duality(spec, sys, w, mu, nu, c_max)?.residual)
}

/// Eichler integral of `R^{[mu]}_{psi,w}` computed from the dual series:
/// `mu^{1-w} q^mu - conj(mu^{1-w}) sum_{nu > 0} conj(c_{psi-bar,2-w}(-mu,-nu)) q^nu`.
pub fn eichler_integral_with_results(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    nu_count: usize,
    c_max: i64,
    window: usize,
) -> Result<(QExpansion, Vec<SeriesResult>)> {
    if w < Rat::from_integer(1) {
        return Err(Error::InvalidInput(format!("Eichler integral is implemented for w >= 1, got {w}")));
    }
    let wf = rat_f64(w);
    let mu_pow = real_principal_power(mu.to_f64(), 1.0 - wf);
    let nus = lattice_from(spec, sys, nu_count, true);
    let neg: Vec<SpectralIndex> = nus.iter().map(|n| SpectralIndex::new(-n.value)).collect();
    let dual = coefficients(spec, &sys.conj(), Rat::from_integer(2) - w, SpectralIndex::new(-mu.value), &neg, c_max, window)?;
    let expansion = QExpansion {
        offset: nus.first().map_or(Rat::zero(), |n| n.value),
        step: Rat::new(1, spec.width),
        coefficients: dual.iter().map(|r| -mu_pow.conj() * r.value.conj()).collect(),
        leading_singular: if mu.value.is_positive() { Some((mu.value, mu_pow)) } else { None },
    };
    Ok((expansion, dual))
}

pub fn eichler_integral(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    nu_count: usize,
    c_max: i64,
    window: usize,
) -> Result<QExpansion> {
    Ok(eichler_integral_with_results(spec, sys, w, mu, nu_count, c_max, window)?.0)
}

/// `max_n |(-m) c_{1,2}(-m,n) - n c_{1,0}(-m,n)|`, relative, over `n = 1..=nu_count`, per modulus.
pub fn derivative_relation_residual(spec: &GroupSpec, m: i64, nu_count: usize, c_max: i64) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidInput(format!("m must be positive, got {m}")));
    }
    let sys = MultiplierSystem::trivial();
    let mu = SpectralIndex::integer(-m);
    let nus: Vec<SpectralIndex> = (1..=nu_count as i64).map(SpectralIndex::integer).collect();
    let t2 = series_terms(spec, &sys, Rat::from_integer(2), mu, &nus, c_max)?;
    let t0 = series_terms(spec, &sys, Rat::zero(), mu, &nus, c_max)?;
    let mut worst: f64 = 0.0;
    for (j, nu) in nus.iter().enumerate() {
        let n = nu.to_f64();
        let pairs: Vec<(Complex64, Complex64)> =
            t2.iter().zip(&t0).map(|(a, b)| (a.1[j] * (-m as f64), b.1[j] * n)).collect();
        let moduli: Vec<i64> = t0.iter().map(|t| t.0).collect();
        let gross = gross_sizes(&moduli, Rat::zero(), mu, *nu, n)?;
        worst = worst.max(duality_report(&pairs, &gross).residual);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_rat, partition_count, sigma};
    use std::f64::consts::PI;

    fn si(s: &str) -> SpectralIndex {
        SpectralIndex::parse(s).unwrap()
    }
    fn w(s: &str) -> Weight {
        parse_rat(s).unwrap()
    }
    fn sl2() -> GroupSpec {
        GroupSpec::gamma0(1).unwrap()
    }

    #[test]
    fn b_kernel_examples() {
        for c in [1, 2, 7] {
            for n in [1, 3] {
                let b = b_kernel(c, w("0"), si("-1"), SpectralIndex::integer(n)).unwrap();
                let r = TAU / c as f64;
                let z = 2.0 * r * (n as f64).sqrt();
                let closed = (n as f64).powf(-0.5) * r * bessel_i(1.0, z).unwrap();
                assert!((b.re - closed).abs() < 1e-12 * closed && b.im.abs() < 1e-12 * closed);
            }
        }
        assert_eq!(b_kernel(3, w("3/2"), si("1/8"), si("0")).unwrap(), Complex64::zero());
        let b = b_kernel(1, w("1/2"), si("-1/8"), si("7/8")).unwrap();
        let z = 2.0 * TAU * (7.0f64 / 64.0).sqrt();
        let closed = e_of(Complex64::new(-0.125, 0.0))
            * (TAU * (0.125f64).powf(0.25) * (0.875f64).powf(-0.25) * bessel_i(0.5, z).unwrap());
        assert!((b - closed).norm() < 1e-12 * closed.norm());
        // I_{1/2}(z) = sqrt(2/(pi z)) sinh z
        let half = (2.0 / (PI * z)).sqrt() * z.sinh();
        assert!((bessel_i(0.5, z).unwrap() - half).abs() < 1e-12 * half);
        assert!(matches!(b_kernel(1, w("1/2"), si("1/8"), si("7/8")), Err(Error::Branch { .. })));
    }

    #[test]
    fn branches_agree_at_weight_one() {
        // at w = 1 both prefactors reduce to (2 pi/c) and both series to 0F1(1; X)
        for (c, m, n) in [(1, -1.0, 2.0), (5, -0.5, 0.25), (12, -3.0, -1.0)] {
            let mu = SpectralIndex::new(Rat::approximate_float(m).unwrap());
            let nu = SpectralIndex::new(Rat::approximate_float(n).unwrap());
            let b = b_kernel(c, w("1"), mu, nu).unwrap();
            let r = TAU / c as f64;
            let x = r * r * (-m) * n;
            let expect = e_of(Complex64::new(-0.25, 0.0)) * r * hyp0f1(1.0, x).unwrap();
            assert!((b - expect).norm() < 1e-12 * expect.norm().max(1e-300));
        }
    }

    #[test]
    fn partitions_from_the_series() {
        let sys = MultiplierSystem::eta_power(-1);
        let nus: Vec<SpectralIndex> = (1..=10).map(|n| SpectralIndex::new(Rat::new(24 * n - 1, 24))).collect();
        let res = coefficients(&sl2(), &sys, w("-1/2"), si("-1/24"), &nus, 100, 0).unwrap();
        for (n, r) in (1..=10u64).zip(&res) {
            let p = partition_count(n).unwrap().to_f64().unwrap();
            assert!((r.value.re - p).abs() < 0.1, "p({n}): {} vs {p}", r.value.re);
            assert!(r.value.im.abs() < 1e-6 * p);
        }
    }

    #[test]
    fn eisenstein_weight_four() {
        let sys = MultiplierSystem::trivial();
        let nus: Vec<SpectralIndex> = (1..=3).map(SpectralIndex::integer).collect();
        let res = coefficients(&sl2(), &sys, w("4"), si("0"), &nus, 2000, 0).unwrap();
        for (n, r) in (1..=3u64).zip(&res) {
            let exact = 240.0 * sigma(3, n) as f64;
            assert!((r.value.re - exact).abs() < 1e-5 * exact);
            assert!(r.converged_flag);
        }
    }

    #[test]
    fn constant_term_examples() {
        let t = MultiplierSystem::trivial();
        let ct = constant_term(&sl2(), &t, w("0"), si("-1"), 2000).unwrap();
        assert!((ct.value.re - 24.0).abs() < 0.05);
        assert_eq!(constant_term(&sl2(), &t, w("3/2"), si("-1"), 100).unwrap().value, Complex64::zero());
        assert!(matches!(constant_term(&sl2(), &MultiplierSystem::eta_power(-3), w("1/2"), si("-1/8"), 10), Err(Error::AlphaNonZero(_))));
        for level in [1, 2, 3] {
            let spec = GroupSpec::gamma0(level).unwrap();
            let a = constant_term(&spec, &t, w("0"), si("-1"), 300).unwrap();
            let b = coefficient(&spec, &t, w("0"), si("-1"), si("0"), 300, 0).unwrap();
            assert!((a.value - b.value).norm() < 1e-10 * a.value.norm());
        }
    }

    #[test]
    fn single_modulus_dualities_are_exact() {
        let spec = sl2();
        let r = zagier_duality_residual(&spec, &MultiplierSystem::trivial(), w("0"), si("-1"), si("1"), 1).unwrap();
        assert!(r < 1e-12, "{r}");
        let r = zagier_duality_residual(&spec, &MultiplierSystem::eta_power(-3), w("1/2"), si("-1/8"), si("7/8"), 1).unwrap();
        assert!(r < 1e-12, "{r}");
        let r = eichler_duality_residual(&spec, &MultiplierSystem::eta_power(3), w("3/2"), si("1/8"), si("9/8"), 1).unwrap();
        assert!(r < 1e-12, "{r}");
        assert!(eichler_duality_residual(&spec, &MultiplierSystem::eta_power(-3), w("1/2"), si("-1/8"), si("7/8"), 1).is_err());
    }

    #[test]
    fn derivative_relation() {
        let r = derivative_relation_residual(&sl2(), 1, 3, 200).unwrap();
        assert!(r < 1e-12, "{r}");
    }

    #[test]
    fn tail_estimate_shapes() {
        let mono: Vec<(i64, Complex64)> = (1..=1000).map(|c| (c, Complex64::new((c as f64).powi(-3), 0.0))).collect();
        let t = tail_estimate(&mono, Complex64::new(1.2, 0.0));
        // sum_{c > 1000} c^{-3} ~ 5e-7
        assert!((t / 5e-7 - 1.0).abs() < 0.05, "{t}");
        assert_eq!(tail_estimate(&[], Complex64::zero()), 0.0);
        let flat: Vec<(i64, Complex64)> = (1..=100).map(|c| (c, Complex64::new(1.0, 0.0))).collect();
        assert!(tail_estimate(&flat, Complex64::new(100.0, 0.0)).is_infinite());
    }

    #[test]
    fn lattice_points() {
        let l = lattice_from(&sl2(), &MultiplierSystem::eta_power(-3), 3, false);
        assert_eq!(l, vec![si("7/8"), si("15/8"), si("23/8")]);
        let l = lattice_from(&sl2(), &MultiplierSystem::eta_power(3), 2, false);
        assert_eq!(l, vec![si("1/8"), si("9/8")]);
        let l = lattice_from(&sl2(), &MultiplierSystem::trivial(), 2, true);
        assert_eq!(l, vec![si("1"), si("2")]);
    }
}
