//! Kloosterman sums over double cosets `Gamma_inf \ Gamma / Gamma_inf` with exact phases.

use crate::arith::{euclid_dedekind, parse_rat, sigma, unit_from_ratio, PhaseRational, Rat};
use crate::cache::KloostermanCache;
use crate::error::{Error, Result};
use crate::modgroup::{DoubleCosetRep, GroupElement, GroupSpec};
use crate::multiplier::MultiplierSystem;
use crate::special::{zeta, ComplexSum};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// A point `mu` or `nu` of the exponent lattice `(1/h)(Z - alpha)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpectralIndex {
    pub value: Rat,
}

impl SpectralIndex {
    pub fn new(value: Rat) -> Self {
        SpectralIndex { value }
    }

    pub fn integer(n: i64) -> Self {
        SpectralIndex { value: Rat::from_integer(n) }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(SpectralIndex { value: parse_rat(s)? })
    }

    pub fn to_f64(self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// `h * value + alpha` must be an integer, where `psi(T^h) = e(alpha)`.
    pub fn check_grid(&self, sys: &MultiplierSystem, h: i64) -> Result<()> {
        let alpha = sys.alpha_at_infinity(h).value();
        if (self.value * h + alpha).is_integer() {
            Ok(())
        } else {
            Err(Error::Grid { index: self.value.to_string(), alpha: alpha.to_string() })
        }
    }
}

impl Default for SpectralIndex {
    fn default() -> Self {
        SpectralIndex { value: Rat::zero() }
    }
}

impl fmt::Display for SpectralIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `e(mu a/c) e(nu d/c) psi(g)` for any `g` with `c != 0`, as an exact phase.
pub fn k_phase(g: &GroupElement, sys: &MultiplierSystem, mu: SpectralIndex, nu: SpectralIndex) -> Result<PhaseRational> {
    if g.c == 0 {
        return Err(Error::InvalidInput("k_term needs c != 0".into()));
    }
    let base = mu.value * Rat::new(g.a, g.c) + nu.value * Rat::new(g.d, g.c);
    Ok(PhaseRational::new(base) + sys.phase(g)?)
}

/// The term `K_{gamma,psi}(mu, nu)` for a double coset representative.
pub fn k_term(rep: &DoubleCosetRep, sys: &MultiplierSystem, mu: SpectralIndex, nu: SpectralIndex) -> Result<Complex64> {
    mu.check_grid(sys, 1)?;
    nu.check_grid(sys, 1)?;
    Ok(k_phase(&rep.element(), sys, mu, nu)?.to_unit())
}

fn check_inputs(spec: &GroupSpec, sys: &MultiplierSystem, mu: SpectralIndex, nus: &[SpectralIndex]) -> Result<()> {
    if spec.level % sys.required_level() != 0 {
        return Err(Error::Membership(format!("multiplier {sys}"), spec.level));
    }
    mu.check_grid(sys, spec.width)?;
    for nu in nus {
        nu.check_grid(sys, spec.width)?;
    }
    Ok(())
}

/// Kloosterman sums at modulus `c` for one `mu` and several `nu`, sharing the coset walk.
///
/// Phases are integers modulo a common denominator, so each coset costs one `sin_cos`; further
/// `nu` (which differ from the first by integers) reuse it through a table of `e(k/c)`.
/// Terms are added in the fixed order `d, c - d` for `d = 0, 1, ...` with compensated summation.
pub fn kloosterman_sums(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    mu: SpectralIndex,
    nus: &[SpectralIndex],
    c: i64,
) -> Result<Vec<Complex64>> {
    check_inputs(spec, sys, mu, nus)?;
    if c <= 0 || c % spec.level != 0 {
        return Err(Error::InvalidInput(format!("modulus {c} is not a positive multiple of {}", spec.level)));
    }
    Ok(sums_unchecked(sys, mu, nus, c))
}

fn sums_unchecked(sys: &MultiplierSystem, mu: SpectralIndex, nus: &[SpectralIndex], c: i64) -> Vec<Complex64> {
    let Some(&nu0) = nus.first() else { return vec![] };
    let den = sys.phase_denominator(c).lcm(&(mu.value.denom() * c)).lcm(&(nu0.value.denom() * c));
    let scale = |x: Rat| ((*x.numer() as i128 * (den / (x.denom() * c)) as i128).rem_euclid(den as i128)) as i64;
    let mu_scale = scale(mu.value);
    let nu_scale = scale(nu0.value);
    // the other nu differ from nu0 by integers k, contributing e(k d / c)
    let shifts: Vec<i64> = nus[1..]
        .iter()
        .map(|nu| (nu.value - nu0.value).to_integer().rem_euclid(c))
        .collect();
    let table: Vec<Complex64> = if shifts.is_empty() { vec![] } else { (0..c).map(|k| unit_from_ratio(k, c)).collect() };
    let mut acc = vec![ComplexSum::new(); nus.len()];
    let trivial = sys.is_trivial();
    // products of residues stay below den * c; use i64 unless that could overflow
    let narrow = (den as i128) * (c as i128) < (i64::MAX / 2) as i128;
    let mulmod = |x: i64, y: i64| -> i64 {
        if narrow {
            (x * y) % den
        } else {
            ((x as i128 * y as i128) % den as i128) as i64
        }
    };
    let mut term = |d: i64, a: i64, s12: i64| {
        let mut num = mulmod(mu_scale, a) + mulmod(nu_scale, d);
        if !trivial {
            num += sys.phase_scaled_rep(a, c, d, s12, den);
        }
        let z = unit_from_ratio(num % den, den);
        acc[0].add(z);
        for (j, k) in shifts.iter().enumerate() {
            acc[j + 1].add(z * table[((k * d) % c) as usize]);
        }
    };
    // (c - d)^{-1} = -d^{-1} and s(c - d, c) = -s(d, c): one Euclid pass serves both
    for d in 0..=c / 2 {
        let e = euclid_dedekind(d, c);
        if e.gcd != 1 {
            continue;
        }
        let a = e.inverse.rem_euclid(c);
        term(d, a, e.s12);
        let d2 = c - d;
        if d2 != d && d2 < c {
            term(d2, (c - a) % c, -e.s12);
        }
    }
    acc.iter().map(|s| s.value()).collect()
}

/// `S(mu, nu; c)`.
pub fn kloosterman_sum(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    mu: SpectralIndex,
    nu: SpectralIndex,
    c: i64,
) -> Result<Complex64> {
    Ok(kloosterman_sums(spec, sys, mu, &[nu], c)?[0])
}

/// Reference evaluation through [`k_term`] and the generic phase; `O(c log c)` with rationals.
pub fn kloosterman_sum_direct(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    mu: SpectralIndex,
    nu: SpectralIndex,
    c: i64,
) -> Result<Complex64> {
    check_inputs(spec, sys, mu, &[nu])?;
    let mut acc = ComplexSum::new();
    for rep in crate::modgroup::reps_at(spec, c)? {
        acc.add(k_term(&rep, sys, mu, nu)?);
    }
    Ok(acc.value())
}

type MemoKey = (i64, String, String, String);

/// Columns kept in memory across calls within one process.
const MEMO_COLUMNS: usize = 512;

fn memo() -> &'static Mutex<HashMap<MemoKey, Vec<Complex64>>> {
    static MEMO: OnceLock<Mutex<HashMap<MemoKey, Vec<Complex64>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn memo_load(key: &MemoKey) -> Vec<Complex64> {
    memo().lock().map(|m| m.get(key).cloned().unwrap_or_default()).unwrap_or_default()
}

fn memo_store(key: MemoKey, col: Vec<Complex64>) {
    if let Ok(mut m) = memo().lock() {
        if m.len() >= MEMO_COLUMNS {
            m.clear();
        }
        let longer = m.get(&key).is_none_or(|old| old.len() < col.len());
        if longer {
            m.insert(key, col);
        }
    }
}

/// Kloosterman sums for `c = level, 2 level, ..., <= c_max`, one row per modulus.
///
/// Moduli are distributed over the rayon pool; the ordered collect keeps the result
/// independent of the worker count. Columns are remembered for the life of the process, and
/// also kept on disk when `RADMACH_CACHE_DIR` is set.
pub fn kloosterman_table(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    mu: SpectralIndex,
    nus: &[SpectralIndex],
    c_max: i64,
) -> Result<Vec<(i64, Vec<Complex64>)>> {
    check_inputs(spec, sys, mu, nus)?;
    let n = spec.level;
    let count = if c_max >= n { (c_max / n) as usize } else { 0 };
    let cache = KloostermanCache::from_env();
    let key_sys = sys.to_string();
    let key_mu = mu.to_string();
    let keys: Vec<MemoKey> = nus.iter().map(|nu| (n, key_sys.clone(), key_mu.clone(), nu.to_string())).collect();
    let cached: Vec<Vec<Complex64>> = keys
        .iter()
        .map(|k| {
            let mem = memo_load(k);
            match &cache {
                Some(cache) if mem.len() < count => {
                    let disk = cache.load(k.0, &k.1, &k.2, &k.3);
                    if disk.len() > mem.len() { disk } else { mem }
                }
                _ => mem,
            }
        })
        .collect();
    let have = cached.iter().map(Vec::len).min().unwrap_or(0).min(count);
    let fresh: Vec<Vec<Complex64>> =
        (have..count).into_par_iter().map(|i| sums_unchecked(sys, mu, nus, n * (i as i64 + 1))).collect();
    let rows: Vec<(i64, Vec<Complex64>)> = (0..count)
        .map(|i| {
            let c = n * (i as i64 + 1);
            let row = if i < have { cached.iter().map(|v| v[i]).collect() } else { fresh[i - have].clone() };
            (c, row)
        })
        .collect();
    if count > have {
        for (j, k) in keys.iter().enumerate() {
            if cached[j].len() < count {
                let col: Vec<Complex64> = rows.iter().map(|(_, r)| r[j]).collect();
                if let Some(cache) = &cache {
                    cache.store(k.0, &k.1, &k.2, &k.3, &col)?;
                }
                memo_store(k.clone(), col);
            }
        }
    }
    Ok(rows)
}

/// Ramanujan sums against `c^{-s}` versus `n^{1-s} sigma_{s-1}(n) / zeta(s)`.
pub fn ramanujan_dirichlet_check(n: u64, s: f64, c_max: i64) -> Result<(f64, f64)> {
    if !(s > 1.0) {
        return Err(Error::InvalidInput(format!("ramanujan_dirichlet_check needs s > 1, got {s}")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let spec = GroupSpec::gamma0(1)?;
    let table = kloosterman_table(&spec, &MultiplierSystem::trivial(), SpectralIndex::integer(0), &[SpectralIndex::integer(n as i64)], c_max)?;
    let mut lhs = crate::special::CompensatedSum::new();
    for (c, row) in &table {
        lhs.add(row[0].re * (*c as f64).powf(-s));
    }
    let zeta_s = if s.fract() == 0.0 && s as u32 % 2 == 0 { crate::arith::zeta_even(s as u32 / 2) } else { zeta(s)? };
    let sig = if s.fract() == 0.0 && s >= 1.0 {
        sigma(s as u32 - 1, n) as f64
    } else {
        (1..=n).filter(|d| n % d == 0).map(|d| (d as f64).powf(s - 1.0)).sum()
    };
    Ok((lhs.value(), (n as f64).powf(1.0 - s) * sig / zeta_s))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZetaPartial {
    pub value: Complex64,
    pub partial_sums: Vec<(i64, Complex64)>,
}

/// Truncated `sum_{c <= c_max} S(mu, nu; c) c^{-2s}` with its partial sums.
pub fn kloosterman_zeta_partial(
    spec: &GroupSpec,
    sys: &MultiplierSystem,
    mu: SpectralIndex,
    nu: SpectralIndex,
    s: Complex64,
    c_max: i64,
) -> Result<ZetaPartial> {
    let table = kloosterman_table(spec, sys, mu, &[nu], c_max)?;
    let mut acc = ComplexSum::new();
    let mut partial_sums = Vec::with_capacity(table.len());
    for (c, row) in table {
        acc.add(row[0] * (-2.0 * s * (c as f64).ln()).exp());
        partial_sums.push((c, acc.value()));
    }
    Ok(ZetaPartial { value: acc.value(), partial_sums })
}
