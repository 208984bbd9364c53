//! Exact integer and rational utilities.
//!
//! Dedekind sums are evaluated through the Euclidean algorithm in `O(log c)`
//! integer steps; the definitional `O(c)` sum is kept as
//! [`dedekind_sum_direct`] for cross-checking.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Exact rational with arbitrary precision numerator and denominator.
pub type Rational = BigRational;

/// Small exact rational used for weights, spectral indices and phases.
pub type Rat = Ratio<i64>;

/// Default upper bound accepted by [`partition_count`].
pub const PARTITION_BOUND: u64 = 10_000;

/// A rational phase reduced to `[0, 1)`.
///
/// Phases have denominators dividing `24 c n h` times the index
/// denominators, so 64-bit components are ample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhaseRational(Rat);

impl PhaseRational {
    pub fn new(value: Rat) -> Self {
        PhaseRational(frac(value))
    }

    pub fn zero() -> Self {
        PhaseRational(Rat::zero())
    }

    pub fn value(&self) -> Rat {
        self.0
    }

    pub fn to_rational(&self) -> Rational {
        BigRational::new(BigInt::from(*self.0.numer()), BigInt::from(*self.0.denom()))
    }

    /// `e(value)` as a complex number of modulus one.
    pub fn to_unit(&self) -> num_complex::Complex64 {
        unit_from_ratio(*self.0.numer(), *self.0.denom())
    }
}

impl std::ops::Add for PhaseRational {
    type Output = PhaseRational;
    fn add(self, rhs: PhaseRational) -> PhaseRational {
        PhaseRational::new(self.0 + rhs.0)
    }
}

impl std::ops::Neg for PhaseRational {
    type Output = PhaseRational;
    fn neg(self) -> PhaseRational {
        PhaseRational::new(-self.0)
    }
}

impl fmt::Display for PhaseRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Fractional part `x - floor(x)` of a small rational.
pub fn frac(x: Rat) -> Rat {
    x - x.floor()
}

/// `e(num/den) = exp(2 pi i num/den)`, reducing the numerator first.
pub fn unit_from_ratio(num: i64, den: i64) -> num_complex::Complex64 {
    let r = num.rem_euclid(den);
    // fold into (-1/2, 1/2] so the argument stays small
    let centered = if 2 * r > den { r - den } else { r };
    let theta = std::f64::consts::TAU * (centered as f64 / den as f64);
    let (s, c) = theta.sin_cos();
    num_complex::Complex64::new(c, s)
}

/// Parses `p/q`, `p` or `+p/q` into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    let bad = || Error::Parse(format!("expected a rational p/q, got {s:?}"));
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: i64 = p.parse().map_err(|_| bad())?;
    let q: i64 = q.parse().map_err(|_| bad())?;
    if q == 0 {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

/// Extended Euclid: returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `a x + b y = g`.
pub fn gcd_ext(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    if a == 0 && b == 0 {
        return Err(Error::InvalidInput("gcd_ext(0, 0) is undefined".into()));
    }
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        r0 = -r0;
        x0 = -x0;
        y0 = -y0;
    }
    Ok((r0 as i64, x0 as i64, y0 as i64))
}

/// The inverse of `d` modulo `c`, in `[0, c)`.
pub fn mod_inverse(d: i64, c: i64) -> Result<i64> {
    if c <= 0 {
        return Err(Error::InvalidInput(format!("modulus must be positive, got {c}")));
    }
    let (g, x, _) = gcd_ext(d.rem_euclid(c), c)?;
    if g != 1 {
        return Err(Error::NotCoprime(d, c));
    }
    Ok(x.rem_euclid(c))
}

/// Output of [`euclid_dedekind`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EuclidData {
    pub gcd: i64,
    /// An inverse of `d` modulo `c` (not reduced) when `gcd = 1`.
    pub inverse: i64,
    /// `12 c s(d, c)`, exact, when `gcd = 1`.
    pub s12: i64,
}

/// One Euclidean run on `(c, d)`, `0 <= d < c`, giving the gcd, an inverse of
/// `d` and the scaled Dedekind sum `12 c s(d,c)`.
///
/// With remainders `r_0 = c, r_1 = d, ..., r_{k-1} = 1, r_k = 0`, quotients
/// `q_i` and cofactors `u_i = d^{-1} r_i (mod c)`, reciprocity telescopes to
/// `12 c s(d,c) = d + u_{k-1} + c * sum (-1)^{i+1} q_i - 3c [k-1 odd]`.
#[inline]
pub fn euclid_dedekind(d: i64, c: i64) -> EuclidData {
    debug_assert!(c > 0 && (0..c).contains(&d));
    if d == 0 {
        return EuclidData { gcd: c, inverse: 0, s12: 0 };
    }
    let (mut r_prev, mut r) = (c, d);
    let (mut u_prev, mut u) = (0i64, 1i64);
    let mut alt = 0i64;
    let mut odd = false;
    while r != 0 {
        // most partial quotients are 1 or 2; skip the hardware divide for those
        let q = if r_prev < 2 * r {
            1
        } else if r_prev < 3 * r {
            2
        } else {
            r_prev / r
        };
        alt += if odd { -q } else { q };
        odd = !odd;
        (r_prev, r) = (r, r_prev - q * r);
        (u_prev, u) = (u, u_prev - q * u);
    }
    let s12 = d + u_prev + c * alt - if odd { 3 * c } else { 0 };
    EuclidData { gcd: r_prev, inverse: u_prev, s12 }
}

/// The Dedekind sum `s(d, c)` as an exact rational.
pub fn dedekind_sum(d: i64, c: i64) -> Result<Rational> {
    if c <= 0 {
        return Err(Error::InvalidInput(format!("modulus must be positive, got {c}")));
    }
    let e = euclid_dedekind(d.rem_euclid(c), c);
    if e.gcd != 1 {
        return Err(Error::NotCoprime(d, c));
    }
    Ok(BigRational::new(BigInt::from(e.s12), BigInt::from(12 * c)))
}

/// Sawtooth `((x))`: `x - floor(x) - 1/2` off the integers, `0` on them.
fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        return Rational::zero();
    }
    x - x.floor() - Rational::new(BigInt::one(), BigInt::from(2))
}

/// Definitional `O(c)` evaluation of `s(d, c)`.
pub fn dedekind_sum_direct(d: i64, c: i64) -> Result<Rational> {
    if c <= 0 {
        return Err(Error::InvalidInput(format!("modulus must be positive, got {c}")));
    }
    if d.gcd(&c) != 1 {
        return Err(Error::NotCoprime(d, c));
    }
    let cb = BigInt::from(c);
    let mut acc = Rational::zero();
    for m in 1..c {
        let x = Rational::new(BigInt::from(m), cb.clone());
        let y = Rational::new(BigInt::from(m) * BigInt::from(d), cb.clone());
        acc += sawtooth(&x) * sawtooth(&y);
    }
    Ok(acc)
}

/// Bernoulli numbers `B_0 .. B_m` with `B_1 = -1/2`.
pub fn bernoulli_table(m: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(m + 1);
    b.push(Rational::one());
    for n in 1..=m {
        // sum_{k=0}^{n} C(n+1, k) B_k = 0
        let mut binom = BigInt::one();
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += bk * Rational::from_integer(binom.clone());
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / Rational::from_integer(BigInt::from(n + 1)));
    }
    b
}

/// The Bernoulli number `B_m`.
pub fn bernoulli(m: usize) -> Rational {
    bernoulli_table(m).pop().expect("table is non-empty")
}

/// `zeta(2k)` from `|B_{2k}| (2 pi)^{2k} / (2 (2k)!)`.
pub fn zeta_even(k: u32) -> f64 {
    assert!(k >= 1, "zeta_even needs k >= 1");
    let b = bernoulli(2 * k as usize).abs().to_f64().expect("finite");
    let mut fact = 1.0;
    for i in 1..=(2 * k) {
        fact *= i as f64;
    }
    b * std::f64::consts::TAU.powi(2 * k as i32) / (2.0 * fact)
}

/// Divisor power sum `sigma_p(n)`.
pub fn sigma(p: u32, n: u64) -> u128 {
    assert!(n >= 1, "sigma needs n >= 1");
    let mut total = 0u128;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += (d as u128).pow(p);
            let e = n / d;
            if e != d {
                total += (e as u128).pow(p);
            }
        }
        d += 1;
    }
    total
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

/// `p(n)` by Euler's pentagonal recurrence, refusing `n` above [`PARTITION_BOUND`].
pub fn partition_count(n: u64) -> Result<BigUint> {
    partition_count_bounded(n, PARTITION_BOUND)
}

pub fn partition_count_bounded(n: u64, bound: u64) -> Result<BigUint> {
    if n > bound {
        return Err(Error::Bound(format!("partition_count({n}) exceeds bound {bound}")));
    }
    Ok(partition_table(n as usize).pop().expect("non-empty").to_biguint().expect("non-negative"))
}

/// `p(0) .. p(n)`.
pub fn partition_table(n: usize) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::one();
    for m in 1..=n {
        let mut acc = BigInt::zero();
        let mut k: usize = 1;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let mut term = p[m - g1].clone();
            if g2 <= m {
                term += &p[m - g2];
            }
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
            k += 1;
        }
        p[m] = acc;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn gcd_ext_examples() {
        assert_eq!(gcd_ext(12, 18).unwrap().0, 6);
        assert_eq!(gcd_ext(1, 0).unwrap(), (1, 1, 0));
        let (g, x, y) = gcd_ext(240, 46).unwrap();
        assert_eq!(g, 2);
        assert_eq!(240 * x + 46 * y, 2);
        assert!(gcd_ext(0, 0).is_err());
        let (g, x, y) = gcd_ext(-12, 18).unwrap();
        assert_eq!((g, -12 * x + 18 * y), (6, 6));
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(3, 7).unwrap(), 5);
        assert_eq!(mod_inverse(5, 12).unwrap(), 5);
        for c in 2..30 {
            assert_eq!(mod_inverse(1, c).unwrap(), 1);
        }
        assert_eq!(mod_inverse(-1, 7).unwrap(), 6);
        assert!(matches!(mod_inverse(4, 12), Err(Error::NotCoprime(4, 12))));
    }

    #[test]
    fn mod_inverse_matches_residue_scan() {
        for c in 1..60i64 {
            for d in 0..c {
                if d.gcd(&c) != 1 {
                    continue;
                }
                let scan = (0..c).find(|a| (a * d - 1).rem_euclid(c) == 0).unwrap();
                assert_eq!(mod_inverse(d, c).unwrap(), scan);
            }
        }
    }

    #[test]
    fn dedekind_examples() {
        assert_eq!(dedekind_sum(5, 1).unwrap(), Rational::zero());
        assert_eq!(dedekind_sum(1, 3).unwrap(), q(1, 18));
        assert_eq!(dedekind_sum(1, 2).unwrap(), Rational::zero());
        assert!(dedekind_sum(2, 4).is_err());
    }

    #[test]
    fn dedekind_fast_path_matches_direct_sum() {
        for c in 1..80i64 {
            for d in -c..2 * c {
                if d.gcd(&c) != 1 {
                    continue;
                }
                assert_eq!(
                    dedekind_sum(d, c).unwrap(),
                    dedekind_sum_direct(d, c).unwrap(),
                    "s({d},{c})"
                );
            }
        }
    }

    #[test]
    fn euclid_inverse_is_an_inverse() {
        for c in 1..200i64 {
            for d in 0..c {
                let e = euclid_dedekind(d, c);
                assert_eq!(e.gcd, d.gcd(&c));
                if e.gcd == 1 {
                    assert_eq!((e.inverse * d - 1).rem_euclid(c), 0);
                }
            }
        }
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), Rational::one());
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn zeta_even_against_direct_summation() {
        use std::f64::consts::PI;
        assert!((zeta_even(1) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta_even(2) - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta_even(3) - PI.powi(6) / 945.0).abs() < 1e-14);
        for k in 1..=3u32 {
            let s = 2.0 * k as f64;
            let n = 200_000;
            let direct: f64 = (1..=n).rev().map(|m| (m as f64).powf(-s)).sum();
            // Euler-Maclaurin tail
            let tail = (n as f64).powf(1.0 - s) / (s - 1.0) - 0.5 * (n as f64).powf(-s);
            assert!((zeta_even(k) - (direct + tail)).abs() < 1e-10);
        }
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(1, 6), 12);
        assert_eq!(sigma(0, 12), 6);
        assert_eq!(sigma(3, 2), 9);
        assert_eq!(sigma(3, 1), 1);
    }

    #[test]
    fn partitions_examples() {
        assert_eq!(partition_count(0).unwrap(), BigUint::from(1u32));
        assert_eq!(partition_count(5).unwrap(), BigUint::from(7u32));
        assert_eq!(partition_count(30).unwrap(), BigUint::from(5604u32));
        assert_eq!(
            partition_count(100).unwrap(),
            "190569292".parse::<BigUint>().unwrap()
        );
        assert!(matches!(partition_count(10_001), Err(Error::Bound(_))));
    }

    #[test]
    fn phase_rational_is_reduced() {
        let p = PhaseRational::new(Rat::new(-1, 24));
        assert_eq!(p.value(), Rat::new(23, 24));
        assert_eq!((p + PhaseRational::new(Rat::new(1, 24))).value(), Rat::zero());
    }

    #[test]
    fn parse_rat_forms() {
        assert_eq!(parse_rat("3/2").unwrap(), Rat::new(3, 2));
        assert_eq!(parse_rat("-1/8").unwrap(), Rat::new(-1, 8));
        assert_eq!(parse_rat("+4").unwrap(), Rat::from_integer(4));
        assert!(parse_rat("0.5").is_err());
        assert!(parse_rat("1/0").is_err());
    }
}
