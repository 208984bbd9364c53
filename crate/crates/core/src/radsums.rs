//! Pointwise Rademacher sums over the box `|c| < K`, `|d| < K^2`, q-expansion evaluation,
//! harmonic completion and invariance residuals.

use crate::arith::{sigma, unit_from_ratio, Rat};
use crate::error::{Error, Result};
use crate::kloosterman::SpectralIndex;
use crate::modgroup::{d_bound, moebius_and_j, GroupElement, GroupSpec};
use crate::multiplier::{automorphy, MultiplierSystem};
use crate::radseries::{constant_term, rat_f64, QExpansion, Weight};
use crate::special::{
    e_of, expm1_complex, gauss_legendre, lower_incomplete_gamma, principal_power_nz, real_principal_power, rgamma,
    ComplexSum,
};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::f64::consts::{PI, TAU};

/// Number of partial-sum checkpoints recorded by [`sum_eval`], at `K/8, 2K/8, ..., K`.
pub const CHECKPOINTS: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub k: f64,
    /// `(K_j, partial sum over the box K_j)`, increasing in `K_j`.
    pub trace: Vec<(f64, Complex64)>,
    /// The `(1/2) c(mu, 0)` correction included in every entry.
    pub constant: Complex64,
}

impl EvalResult {
    pub fn to_json(&self) -> Value {
        json!({
            "value": [self.value.re, self.value.im],
            "K": self.k,
            "constant": [self.constant.re, self.constant.im],
            "trace": self.trace.iter().map(|(k, v)| json!([k, v.re, v.im])).collect::<Vec<_>>(),
        })
    }
}

fn check_tau(tau: Complex64) -> Result<()> {
    if !(tau.im > 0.0) || !tau.re.is_finite() {
        return Err(Error::InvalidInput(format!("tau = {tau} is not in the upper half plane")));
    }
    Ok(())
}

fn check_branch(w: Weight, mu: SpectralIndex) -> Result<()> {
    if w < Rat::from_integer(1) && mu.value.is_positive() {
        return Err(Error::Branch { weight: w.to_string(), mu: mu.value.to_string() });
    }
    Ok(())
}

/// `r_w^{[mu]}(g, tau)`: one for `w >= 1` or upper-triangular `g`, else
/// `gamma(1-w, 2 pi i mu (g tau - g infinity)) / Gamma(1-w)`.
pub fn regularizer(w: Weight, mu: SpectralIndex, g: &GroupElement, tau: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    check_branch(w, mu)?;
    if w >= Rat::from_integer(1) || g.is_upper_triangular() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let s = 1.0 - rat_f64(w);
    let c = g.c as f64;
    // g tau - g infinity = -1 / (c (c tau + d))
    let x = Complex64::new(0.0, TAU * mu.to_f64()) * (-(g.cocycle(tau) * c).inv());
    Ok(lower_incomplete_gamma(s, x)? * rgamma(s))
}

/// The summand `e(mu g tau) r psi(g) j(g, tau)^{w/2}` evaluated literally.
pub fn sum_term(sys: &MultiplierSystem, w: Weight, mu: SpectralIndex, g: &GroupElement, tau: Complex64) -> Result<Complex64> {
    let (image, _) = moebius_and_j(g, tau);
    let r = regularizer(w, mu, g, tau)?;
    Ok(e_of(image * mu.to_f64()) * r * sys.phase(g)?.to_unit() * automorphy(g, tau, rat_f64(w)))
}

/// `g tau`-dependent part of the summand at `z = c tau + d`, with the phase `e(mu a/c) psi(g)` removed.
struct Kernel {
    w: f64,
    /// `w < 1`: coefficients `1/Gamma(2 - w + k)`.
    inv_gamma: Vec<f64>,
    below_one: bool,
    integer_weight: Option<i32>,
    mu: f64,
    /// `|x|^2` below which a degree `n + 1` Taylor polynomial is exact to about `1e-17`.
    horner_limit: [f64; HORNER_MAX],
}

const HORNER_MAX: usize = 8;

impl Kernel {
    fn new(w: Weight, mu: SpectralIndex) -> Self {
        let wf = rat_f64(w);
        let below_one = w < Rat::from_integer(1);
        let mut inv_gamma = Vec::new();
        if below_one {
            let mut g = rgamma(2.0 - wf);
            for k in 0..96 {
                inv_gamma.push(g);
                g /= 2.0 - wf + k as f64;
            }
        }
        let integer_weight = if w.is_integer() { Some(*w.numer() as i32) } else { None };
        let mut horner_limit = [0.0; HORNER_MAX];
        if below_one {
            for (i, t) in horner_limit.iter_mut().enumerate() {
                let n = i + 1;
                // first omitted term x^{n+1}/Gamma(3 - w + n) relative to the leading 1/Gamma(2 - w)
                let ratio = inv_gamma[n + 1] / inv_gamma[0];
                *t = (1e-17 / ratio).powf(2.0 / (n + 1) as f64);
            }
        }
        Kernel { w: wf, inv_gamma, below_one, integer_weight, mu: mu.to_f64(), horner_limit }
    }

    /// Constant per modulus: `(2 pi (-mu)/c)^{1-w} e((1-w)/4)` when `w < 1`.
    fn scale(&self, c: f64) -> Complex64 {
        if self.below_one {
            real_principal_power(TAU * -self.mu / c, 1.0 - self.w) * e_of(Complex64::new((1.0 - self.w) / 4.0, 0.0))
        } else {
            Complex64::new(1.0, 0.0)
        }
    }

    #[inline]
    fn eval(&self, z: Complex64, c: f64, scale: Complex64) -> Complex64 {
        let zi = z.inv();
        // x = 2 pi i mu (g tau - g infinity)
        let x = Complex64::new(0.0, -TAU * self.mu / c) * zi;
        if self.below_one {
            if self.mu == 0.0 {
                return Complex64::zero();
            }
            // e^x gamma(s, x)/Gamma(s) z^{-w} = scale/z sum_k x^k/Gamma(2 - w + k)
            let x2 = x.norm_sqr();
            if x2 < self.horner_limit[HORNER_MAX - 1] {
                let n = self.horner_limit.iter().position(|&t| x2 < t).unwrap_or(HORNER_MAX - 1) + 1;
                let g = &self.inv_gamma;
                let mut acc = Complex64::new(g[n], 0.0);
                for k in (0..n).rev() {
                    acc = acc * x + g[k];
                }
                return scale * zi * acc;
            }
            let mut acc = Complex64::new(self.inv_gamma[0], 0.0);
            let mut pw = Complex64::new(1.0, 0.0);
            for &g in &self.inv_gamma[1..] {
                pw *= x;
                let t = pw * g;
                acc += t;
                if t.norm_sqr() < 1e-36 * acc.norm_sqr() {
                    break;
                }
            }
            scale * zi * acc
        } else {
            let ex = if self.mu == 0.0 { Complex64::new(1.0, 0.0) } else { expm1_complex(x) + 1.0 };
            let zw = match self.integer_weight {
                Some(n) => zi.powi(n),
                None => principal_power_nz(z, -self.w),
            };
            ex * zw
        }
    }
}

/// Index of the first checkpoint box `K_j = (j+1) K/8` containing `|d| = ad`, given `c` is in box `jc`.
fn bucket_bounds(k: f64) -> Vec<(f64, i64)> {
    (1..=CHECKPOINTS)
        .map(|j| {
            let kj = k * j as f64 / CHECKPOINTS as f64;
            (kj, d_bound(kj * kj))
        })
        .collect()
}

/// `R^{[mu]}_{Gamma,psi,w}(tau)` summed over the box `|c| < K`, `|d| < K^2`, plus the constant
/// correction `(1/2) c(mu, 0)` (computed to `c_max_for_const`) when `alpha = 0` and `w < 1`.
pub fn sum_eval(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    w: Weight,
    mu: SpectralIndex,
    tau: Complex64,
    k: f64,
    c_max_for_const: i64,
) -> Result<EvalResult> {
    check_tau(tau)?;
    check_branch(w, mu)?;
    if spec.level % sys.required_level() != 0 {
        return Err(Error::Membership(format!("multiplier {sys}"), spec.level));
    }
    mu.check_grid(sys, spec.width)?;
    if !(k >= 1.0) || !k.is_finite() {
        return Err(Error::InvalidInput(format!("K = {k} must be at least 1")));
    }
    let alpha = sys.alpha_at_infinity(spec.width).value();
    let constant = if alpha.is_zero() && w < Rat::from_integer(1) {
        constant_term(spec, sys, w, mu, c_max_for_const)?.value * 0.5
    } else {
        Complex64::zero()
    };
    let kernel = Kernel::new(w, mu);
    let bounds = bucket_bounds(k);
    // psi(T) = e(alpha_1); shifting d by c m multiplies the phase by psi(T)^m
    let alpha1 = sys.phase(&GroupElement::t_pow(1))?.value();
    let mods: Vec<i64> = (1..).map(|m| m * spec.level).take_while(|&c| (c as f64) < k).collect();
    let per_c: Vec<Vec<Complex64>> = mods
        .par_iter()
        .map(|&c| modulus_buckets(sys, &kernel, mu, tau, c, &bounds, alpha1))
        .collect::<Result<_>>()?;
    let mut buckets = vec![ComplexSum::new(); CHECKPOINTS];
    for row in &per_c {
        for (b, v) in buckets.iter_mut().zip(row) {
            b.add(*v);
        }
    }
    let base = constant + e_of(tau * mu.to_f64());
    let mut running = base;
    let mut trace = Vec::with_capacity(CHECKPOINTS);
    for (j, b) in buckets.iter().enumerate() {
        running += b.value();
        trace.push((bounds[j].0, running));
    }
    Ok(EvalResult { value: running, k, trace, constant })
}

/// Contributions of one modulus `c`, split by the first checkpoint box containing each term.
fn modulus_buckets(
    sys: &MultiplierSystem,
    kernel: &Kernel,
    mu: SpectralIndex,
    tau: Complex64,
    c: i64,
    bounds: &[(f64, i64)],
    alpha: Rat,
) -> Result<Vec<Complex64>> {
    let cf = c as f64;
    // phase of the representative with 0 <= d < c; shifting d by c m multiplies by psi(T)^m
    let mut base = vec![Complex64::zero(); c as usize];
    for d0 in 0..c {
        if d0.gcd(&c) != 1 {
            continue;
        }
        let a = crate::arith::mod_inverse(d0, c)?.rem_euclid(c);
        let g = GroupElement { a, b: (a * d0 - 1) / c, c, d: d0 };
        let phase = e_of(Complex64::new(rat_f64(mu.value * Rat::new(a, c)), 0.0)) * sys.phase(&g)?.to_unit();
        base[d0 as usize] = phase;
    }
    let scale = kernel.scale(cf);
    let ctau = tau * cf;
    let mut out = vec![Complex64::zero(); bounds.len()];
    let first = bounds.iter().position(|(kj, _)| cf < *kj).expect("c < K");
    let mut inner = -1i64;
    for (j, &(_, dj)) in bounds.iter().enumerate().skip(first) {
        let mut acc = ComplexSum::new();
        // d in (inner, dj] and [-dj, -inner)
        let lo = inner + 1;
        if lo <= dj {
            sum_range(&mut acc, kernel, &base, ctau, cf, c, lo, dj, alpha, scale);
            let neg_hi = if inner < 0 { -1 } else { -inner - 1 };
            if -dj <= neg_hi {
                sum_range(&mut acc, kernel, &base, ctau, cf, c, -dj, neg_hi, alpha, scale);
            }
        }
        out[j] = acc.value();
        inner = dj;
    }
    Ok(out)
}

/// Adds the terms with `lo <= d <= hi` to `acc`, one residue class `d = d0 + c m` at a time.
#[allow(clippy::too_many_arguments)]
fn sum_range(
    acc: &mut ComplexSum,
    kernel: &Kernel,
    base: &[Complex64],
    ctau: Complex64,
    cf: f64,
    c: i64,
    lo: i64,
    hi: i64,
    alpha: Rat,
    scale: Complex64,
) {
    let step = e_of(Complex64::new(rat_f64(alpha), 0.0));
    for (d0, &p) in base.iter().enumerate() {
        if p.re == 0.0 && p.im == 0.0 {
            continue;
        }
        let d0 = d0 as i64;
        let m_lo = -Integer::div_floor(&(d0 - lo), &c);
        let m_hi = Integer::div_floor(&(hi - d0), &c);
        if m_lo > m_hi {
            continue;
        }
        let mut inner = ComplexSum::new();
        let mut block = Complex64::zero();
        let mut count = 0u32;
        if alpha.is_zero() {
            for m in m_lo..=m_hi {
                let z = Complex64::new(ctau.re + (d0 + c * m) as f64, ctau.im);
                block += kernel.eval(z, cf, scale);
                count += 1;
                if count == 64 {
                    inner.add(block);
                    block = Complex64::zero();
                    count = 0;
                }
            }
        } else {
            // psi(T)^m, restarted from the exact phase every 1024 steps
            let exact = |m: i64| {
                let num = (*alpha.numer() as i128 * m as i128).rem_euclid(*alpha.denom() as i128) as i64;
                unit_from_ratio(num, *alpha.denom())
            };
            let mut shift = exact(m_lo);
            for m in m_lo..=m_hi {
                if (m - m_lo) % 1024 == 0 {
                    shift = exact(m);
                }
                let z = Complex64::new(ctau.re + (d0 + c * m) as f64, ctau.im);
                block += shift * kernel.eval(z, cf, scale);
                shift *= step;
                count += 1;
                if count == 64 {
                    inner.add(block);
                    block = Complex64::zero();
                    count = 0;
                }
            }
        }
        inner.add(block);
        acc.add(p * inner.value());
    }
}

/// Evaluation of a truncated q-expansion with a geometric bound on the neglected tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QEval {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// `sum a_k e(e_k tau)` plus the leading term, and an estimate of the first omitted terms.
pub fn qexp_eval(exp: &QExpansion, tau: Complex64) -> Result<QEval> {
    check_tau(tau)?;
    let value = exp.eval(tau);
    let n = exp.coefficients.len();
    let r = (-TAU * tau.im * rat_f64(exp.step)).exp();
    let tail_bound = if n == 0 {
        0.0
    } else {
        let last = exp.coefficients[n - 1].norm();
        let prev = if n >= 2 { exp.coefficients[n - 2].norm() } else { 0.0 };
        let growth = if prev > 0.0 { (last / prev).max(1.0) } else { 1.0 };
        let rho = r * growth;
        if rho >= 1.0 {
            f64::INFINITY
        } else {
            let scale = last.max(prev) * (-TAU * tau.im * rat_f64(exp.exponent(n - 1))).exp();
            scale * rho / (1.0 - rho)
        }
    };
    Ok(QEval { value, tail_bound })
}

/// [`qexp_eval`] that fails when the tail bound exceeds `tol`.
pub fn qexp_eval_checked(exp: &QExpansion, tau: Complex64, tol: f64) -> Result<Complex64> {
    let q = qexp_eval(exp, tau)?;
    if !(q.tail_bound <= tol) {
        return Err(Error::Bound(format!("q-expansion tail bound {:.3e} exceeds {tol:.1e} at tau = {tau}", q.tail_bound)));
    }
    Ok(q.value)
}

const GL_NODES: usize = 24;
const MAX_INTERVALS: usize = 400;
const ENVELOPE_EPS: f64 = 1e-14;

/// `(2 pi i)^{1-w} int_{-conj(tau)}^{i infinity} (z + tau)^{-w} conj(g(-conj(z))) dz`.
///
/// Along `z = -conj(tau) + i t` the integrand is `i (i (2y + t))^{-w} conj(g(tau + i t))`; the
/// half-line is cut at `t = 2^k t_0` and each piece gets Gauss-Legendre.
pub fn period_integral(shadow: &QExpansion, w: Weight, tau: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    let wf = rat_f64(w);
    let y = tau.im;
    let (nodes, weights) = gauss_legendre(GL_NODES);
    let rot = e_of(Complex64::new(-wf / 4.0, 0.0)) * Complex64::new(0.0, 1.0);
    let integrand = |t: f64| -> Complex64 {
        let g = shadow.eval(tau + Complex64::new(0.0, t)).conj();
        rot * (2.0 * y + t).powf(-wf) * g
    };
    let t0 = 0.125 * y.min(1.0);
    let mut acc = ComplexSum::new();
    let (mut a, mut b) = (0.0, t0);
    let mut converged = false;
    for _ in 0..MAX_INTERVALS {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut piece = Complex64::zero();
        for (x, wt) in nodes.iter().zip(&weights) {
            piece += integrand(mid + half * x) * (wt * half);
        }
        acc.add(piece);
        let envelope = integrand(b).norm() * b;
        if envelope < ENVELOPE_EPS * acc.value().norm().max(1.0) && piece.norm() < ENVELOPE_EPS * acc.value().norm().max(1.0) {
            converged = true;
            break;
        }
        a = b;
        b *= 2.0;
    }
    if !converged {
        return Err(Error::Numerical("period integral did not converge; the shadow must decay".into()));
    }
    let pref = principal_power_nz(Complex64::new(0.0, TAU), 1.0 - wf);
    Ok(pref * acc.value())
}

/// `f(tau)` minus the period integral of the shadow.
pub fn completion_eval(f: &QExpansion, shadow: &QExpansion, w: Weight, tau: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    let value = f.eval(tau);
    if shadow.coefficients.iter().all(|a| a.is_zero()) && shadow.leading_singular.is_none_or(|(_, c)| c.is_zero()) {
        return Ok(value);
    }
    Ok(value - period_integral(shadow, w, tau)?)
}

/// `|hat f(g tau) psi(g) j(g, tau)^{w/2} - hat f(tau)|`.
pub fn completion_invariance_residual(
    f: &QExpansion,
    shadow: &QExpansion,
    sys: &MultiplierSystem,
    w: Weight,
    g: &GroupElement,
    tau: Complex64,
) -> Result<f64> {
    let (image, _) = moebius_and_j(g, tau);
    let lhs = completion_eval(f, shadow, w, image)? * sys.phase(g)?.to_unit() * automorphy(g, tau, rat_f64(w));
    Ok((lhs - completion_eval(f, shadow, w, tau)?).norm())
}

/// `E_2 = 1 - 24 sum sigma_1(n) q^n` with `terms` coefficients.
pub fn e2_expansion(terms: usize) -> QExpansion {
    let coefficients = (0..terms)
        .map(|n| if n == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(-24.0 * sigma(1, n as u64) as f64, 0.0) })
        .collect();
    QExpansion { offset: Rat::zero(), step: Rat::from_integer(1), coefficients, leading_singular: None }
}

/// Tail tolerance applied to the q-expansions in [`quasimodularity_residual_e2`].
pub const QUASIMOD_TAIL: f64 = 1e-9;

/// `|R(g tau) j(g, tau) + (6i/pi)/(tau - g^{-1} infinity) - R(tau)|` with `R` the truncated `E_2`.
pub fn quasimodularity_residual_e2(g: &GroupElement, tau: Complex64, terms: usize) -> Result<f64> {
    check_tau(tau)?;
    let e2 = e2_expansion(terms);
    let (image, j) = moebius_and_j(g, tau);
    let lhs = qexp_eval_checked(&e2, image, QUASIMOD_TAIL)? * j;
    let correction = if g.c == 0 {
        Complex64::zero()
    } else {
        // tau - g^{-1} infinity = (c tau + d)/c
        Complex64::new(0.0, 6.0 / PI) * (g.cocycle(tau) / g.c as f64).inv()
    };
    let rhs = qexp_eval_checked(&e2, tau, QUASIMOD_TAIL)?;
    Ok((lhs + correction - rhs).norm())
}
