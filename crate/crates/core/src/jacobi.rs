//! Exact rational q-series: eta, Jacobi thetas and the Appell-Lerch sum at `z = 1/2`,
//! the K3 elliptic genus, the Mathieu mock modular form `H`, unary thetas, Eisenstein series and `j`.

use crate::arith::{bernoulli, sigma, Rat, Rational};
use crate::error::{Error, Result};
use crate::radseries::QExpansion;
use num_complex::Complex64;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::fmt;

/// `q^offset * sum_k coeffs[k] q^{k/den}`, exact for exponents below `offset + len/den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactQSeries {
    offset: Rat,
    den: i64,
    coeffs: Vec<Rational>,
}

impl ExactQSeries {
    /// Builds a series from its leading exponent, lattice step `1/den` and the known coefficients.
    pub fn new(offset: Rat, den: i64, coeffs: Vec<Rational>) -> Self {
        assert!(den > 0, "lattice denominator must be positive");
        ExactQSeries { offset, den, coeffs }
    }

    /// An integer-coefficient series with exponents `offset + k`.
    pub fn from_integers(offset: Rat, coeffs: &[i64]) -> Self {
        ExactQSeries::new(offset, 1, coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    /// `c q^e` known below the exponent `order`.
    pub fn monomial(e: Rat, c: Rational, order: Rat, den: i64) -> Self {
        let len = ((order - e) * den).ceil().to_integer().max(0) as usize;
        let mut coeffs = vec![Rational::zero(); len];
        if len > 0 {
            coeffs[0] = c;
        }
        ExactQSeries::new(e, den, coeffs)
    }

    pub fn one(order: Rat) -> Self {
        Self::monomial(Rat::zero(), Rational::one(), order, 1)
    }

    pub fn offset(&self) -> Rat {
        self.offset
    }

    pub fn step(&self) -> Rat {
        Rat::new(1, self.den)
    }

    /// Exclusive exponent bound of the known terms.
    pub fn order(&self) -> Rat {
        self.offset + Rat::new(self.coeffs.len() as i64, self.den)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficient of `q^e`; zero off the lattice, `None` at or beyond the order.
    pub fn coefficient(&self, e: Rat) -> Option<Rational> {
        if e >= self.order() {
            return None;
        }
        let k = (e - self.offset) * self.den;
        if !k.is_integer() || k.is_negative() {
            return Some(Rational::zero());
        }
        Some(self.coeffs[k.to_integer() as usize].clone())
    }

    /// Nonzero terms `(exponent, coefficient)` in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (Rat, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.offset + Rat::new(k as i64, self.den), c))
    }

    /// Re-expresses the series on the finer lattice `1/den` (a multiple of the current one).
    fn on_lattice(&self, den: i64) -> Self {
        if den == self.den {
            return self.clone();
        }
        assert!(den % self.den == 0);
        let r = (den / self.den) as usize;
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() * r];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * r] = c.clone();
        }
        ExactQSeries::new(self.offset, den, coeffs)
    }

    /// Moves the leading exponent down to `offset` (a lattice point below the current one).
    fn rebased(&self, offset: Rat) -> Self {
        let shift = ((self.offset - offset) * self.den).to_integer() as usize;
        let mut coeffs = vec![Rational::zero(); shift];
        coeffs.extend(self.coeffs.iter().cloned());
        ExactQSeries::new(offset, self.den, coeffs)
    }

    /// Drops terms at exponents `>= order`.
    pub fn truncate(&self, order: Rat) -> Self {
        let len = ((order - self.offset) * self.den).ceil().to_integer().clamp(0, self.coeffs.len() as i64);
        ExactQSeries::new(self.offset, self.den, self.coeffs[..len as usize].to_vec())
    }

    fn common_lattice(&self, other: &Self) -> i64 {
        let diff = self.offset - other.offset;
        self.den.lcm(&other.den).lcm(diff.denom())
    }

    pub fn add(&self, other: &Self) -> Self {
        let den = self.common_lattice(other);
        let offset = self.offset.min(other.offset);
        let order = self.order().min(other.order());
        let a = self.on_lattice(den).rebased(offset).truncate(order);
        let b = other.on_lattice(den).rebased(offset).truncate(order);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        ExactQSeries::new(offset, den, coeffs)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        ExactQSeries::new(self.offset, self.den, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: Rat) -> Self {
        ExactQSeries::new(self.offset + e, self.den, self.coeffs.clone())
    }

    /// Strips leading zeros, so the first coefficient is the leading one.
    pub fn normalized(&self) -> Self {
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        ExactQSeries::new(self.offset + Rat::new(lead as i64, self.den), self.den, self.coeffs[lead..].to_vec())
    }

    /// Product; the relative precision is the smaller of the two.
    pub fn mul(&self, other: &Self) -> Self {
        let den = self.den.lcm(&other.den);
        let a = self.normalized().on_lattice(den);
        let b = other.normalized().on_lattice(den);
        let len = a.coeffs.len().min(b.coeffs.len());
        let mut out = vec![Rational::zero(); len];
        for (i, x) in a.coeffs.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        ExactQSeries::new(a.offset + b.offset, den, out)
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let a = self.normalized();
        let Some(a0) = a.coeffs.first().cloned() else {
            return Err(Error::Numerical("cannot invert a series with no known nonzero term".into()));
        };
        let inv0 = a0.recip();
        let n = a.coeffs.len();
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut s = Rational::zero();
            for j in 1..=k {
                if !a.coeffs[j].is_zero() && !out[k - j].is_zero() {
                    s += &a.coeffs[j] * &out[k - j];
                }
            }
            out.push(-s * &inv0);
        }
        Ok(ExactQSeries::new(-a.offset, a.den, out))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, p: i64) -> Result<Self> {
        let base = if p < 0 { self.inverse()? } else { self.normalized() };
        let mut unit = vec![Rational::zero(); base.coeffs.len()];
        if let Some(u) = unit.first_mut() {
            *u = Rational::one();
        }
        let mut out = ExactQSeries::new(Rat::zero(), base.den, unit);
        for _ in 0..p.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Substitutes `q -> q^k`.
    pub fn dilate(&self, k: i64) -> Self {
        assert!(k > 0);
        let n = self.coeffs.len() * k as usize;
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        ExactQSeries::new(self.offset * k, self.den, coeffs)
    }

    /// `[numerator, denominator, exponent numerator, exponent denominator]` per nonzero term.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .terms()
            .map(|(e, c)| json!([c.numer().to_string(), c.denom().to_string(), e.numer(), e.denom()]))
            .collect();
        json!({ "order": [self.order().numer(), self.order().denom()], "terms": rows })
    }
}

impl fmt::Display for ExactQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})q^({e})")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^({}))", self.order())
    }
}

/// Integer power series `prod_{n >= 1} (1 - q^n)` to `len` terms, from the pentagonal number theorem.
fn euler_product(len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = (kk * (3 * kk - 1) / 2) as usize;
            if e < len {
                out[e] += if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                any = true;
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    out
}

/// Number of lattice steps needed to reach the exponent `order` from `offset`.
fn span(offset: Rat, order: Rat, den: i64) -> usize {
    ((order - offset) * den).ceil().to_integer().max(0) as usize
}

/// `eta(tau) = q^{1/24} prod (1 - q^n)`, exact below the exponent `order`.
pub fn eta_series(order: Rat) -> ExactQSeries {
    let off = Rat::new(1, 24);
    ExactQSeries::from_integers(off, &euler_product(span(off, order, 1)))
}

/// `eta^p`; negative powers by series inversion.
pub fn eta_power(p: i64, order: Rat) -> Result<ExactQSeries> {
    let off = Rat::new(p, 24);
    let len = span(off, order, 1);
    let base = ExactQSeries::from_integers(Rat::zero(), &euler_product(len));
    Ok(base.pow(p)?.shift(off).truncate(order))
}

/// `prod_{n >= 1} (1 + s q^{n - shift})^m` on the lattice `1/den`, to `len` steps.
fn product_series(len: usize, den: i64, sign: i64, start_num: i64, m: u32) -> ExactQSeries {
    // factors (1 + sign q^{(start_num + den j)/den}) for j >= 0
    let mut acc = ExactQSeries::new(Rat::zero(), den, {
        let mut v = vec![Rational::zero(); len];
        if len > 0 {
            v[0] = Rational::one();
        }
        v
    });
    let mut e = start_num;
    while (e as usize) < len {
        let mut f = vec![Rational::zero(); len];
        f[0] = Rational::one();
        f[e as usize] += Rational::from_integer(BigInt::from(sign));
        let factor = ExactQSeries::new(Rat::zero(), den, f);
        for _ in 0..m {
            acc = acc.mul(&factor);
        }
        e += den;
    }
    acc
}

fn unit_product(len: usize, den: i64) -> ExactQSeries {
    // prod (1 - q^n) on the lattice 1/den
    ExactQSeries::from_integers(Rat::zero(), &euler_product(len.div_ceil(den as usize))).on_lattice(den).truncate(Rat::new(len as i64, den))
}

/// Which specialisation of the elliptic variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaPoint {
    /// `z = 0`.
    Zero,
    /// `z = 1/2`, i.e. `y = -1`.
    Half,
}

/// `theta_i(tau, z)` at `z = 0` or `z = 1/2`, exact below `order`.
pub fn theta_series(i: u8, at: ThetaPoint, order: Rat) -> Result<ExactQSeries> {
    let eighth = Rat::new(1, 8);
    let two = Rational::from_integer(BigInt::from(2));
    match (i, at) {
        (1, ThetaPoint::Zero) | (2, ThetaPoint::Half) => Ok(ExactQSeries::new(eighth, 1, vec![Rational::zero(); span(eighth, order, 1)])),
        // 2 q^{1/8} prod (1-q^n)(1+q^n)^2
        (1, ThetaPoint::Half) | (2, ThetaPoint::Zero) => {
            let len = span(eighth, order, 1);
            let p = unit_product(len, 1).mul(&product_series(len, 1, 1, 1, 2));
            Ok(p.scale(&two).shift(eighth))
        }
        // prod (1-q^n)(1+q^{n-1/2})^2
        (3, ThetaPoint::Zero) | (4, ThetaPoint::Half) => {
            let len = span(Rat::zero(), order, 2);
            Ok(unit_product(len, 2).mul(&product_series(len, 2, 1, 1, 2)))
        }
        // prod (1-q^n)(1-q^{n-1/2})^2
        (4, ThetaPoint::Zero) | (3, ThetaPoint::Half) => {
            let len = span(Rat::zero(), order, 2);
            Ok(unit_product(len, 2).mul(&product_series(len, 2, -1, 1, 2)))
        }
        _ => Err(Error::InvalidInput(format!("theta_{i} is not defined"))),
    }
}

/// Minimal `ell` range for the Appell-Lerch sum below `order`.
pub fn appell_ell_max(order: Rat) -> i64 {
    let o = order.ceil().to_integer().max(0) as f64;
    (2.0 * o).sqrt().ceil() as i64 + 2
}

/// `sum_{|l| <= ell_max} q^{l(l+1)/2} / (1 + q^l)`, each quotient expanded geometrically.
fn appell_numerator(order: Rat, ell_max: i64) -> Result<ExactQSeries> {
    let len = span(Rat::zero(), order, 1);
    let mut acc = vec![Rational::zero(); len];
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    if len > 0 {
        acc[0] += half;
    }
    for l in 1..=ell_max {
        // l > 0: q^{l(l+1)/2} sum_j (-1)^j q^{l j};  l < 0 (as -l): q^{l(l-1)/2} q^l / (1 + q^l)
        for start in [l * (l + 1) / 2, l * (l - 1) / 2 + l] {
            let mut e = start;
            let mut sgn = 1i64;
            while (e as usize) < len {
                acc[e as usize] += Rational::from_integer(BigInt::from(sgn));
                e += l;
                sgn = -sgn;
            }
        }
    }
    // audit: the first dropped term must lie beyond the order
    let next = ell_max + 1;
    if ((next * (next - 1) / 2 + next) as usize) < len {
        return Err(Error::Bound(format!("ell range {ell_max} too small for order {order}")));
    }
    Ok(ExactQSeries::new(Rat::zero(), 1, acc))
}

/// `mu(tau, 1/2)` below `order`, summing over `|l| <= ell_max`.
pub fn appell_mu_series(order: Rat, ell_max: i64) -> Result<ExactQSeries> {
    // dividing by theta_1 ~ 2 q^{1/8} costs 1/8 of exponent range
    let inner = order + Rat::new(1, 8);
    let num = appell_numerator(inner, ell_max)?;
    let th1 = theta_series(1, ThetaPoint::Half, inner)?;
    Ok(num.div(&th1)?.truncate(order))
}

/// `Z_K3(tau, 1/2) = 8[(theta_2(1/2)/theta_2(0))^2 + (theta_3(1/2)/theta_3(0))^2 + (theta_4(1/2)/theta_4(0))^2]`.
pub fn zk3_series(order: Rat) -> Result<ExactQSeries> {
    let mut total: Option<ExactQSeries> = None;
    for i in [2u8, 3, 4] {
        let num = theta_series(i, ThetaPoint::Half, order)?;
        let term = if num.is_zero() {
            ExactQSeries::new(Rat::zero(), 2, vec![Rational::zero(); span(Rat::zero(), order, 2)])
        } else {
            let den = theta_series(i, ThetaPoint::Zero, order)?;
            let r = num.div(&den)?;
            r.mul(&r)
        };
        total = Some(match total {
            None => term,
            Some(t) => t.add(&term),
        });
    }
    Ok(total.expect("three terms").scale(&Rational::from_integer(BigInt::from(8))).truncate(order))
}

/// `H = Z_K3 eta^3 / theta_1^2 - 24 mu` at `z = 1/2`, below `order`.
pub fn mathieu_h_series(order: Rat) -> Result<ExactQSeries> {
    // theta_1^2 ~ 4 q^{1/4}; eta^3 ~ q^{1/8}: work 1/4 higher
    let inner = order + Rat::new(1, 4);
    let z = zk3_series(inner)?;
    let e3 = eta_power(3, inner)?;
    let th1 = theta_series(1, ThetaPoint::Half, inner)?;
    let first = z.mul(&e3).div(&th1.mul(&th1))?;
    let mu = appell_mu_series(inner, appell_ell_max(inner))?;
    Ok(first.sub(&mu.scale(&Rational::from_integer(BigInt::from(24)))).truncate(order))
}

/// `t_1 .. t_n` from `H = q^{-1/8}(-2 + sum t_n q^n)`; checks the leading `-2` and integrality.
pub fn mathieu_h_oracle(n: usize) -> Result<Vec<BigInt>> {
    let order = Rat::new(8 * n as i64 + 7, 8) + Rat::new(1, 8);
    let h = mathieu_h_series(order)?;
    let lead = h.coefficient(Rat::new(-1, 8)).unwrap_or_default();
    if lead != Rational::from_integer(BigInt::from(-2)) {
        return Err(Error::Numerical(format!("leading coefficient of H is {lead}, expected -2")));
    }
    (1..=n as i64)
        .map(|k| {
            let c = h.coefficient(Rat::new(8 * k - 1, 8)).unwrap_or_default();
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::Numerical(format!("t_{k} = {c} is not an integer")))
            }
        })
        .collect()
}

/// `S^{(ell)}_r = sum_k (2 ell k + r) q^{(2 ell k + r)^2 / (4 ell)}`.
pub fn unary_theta(ell: i64, r: i64, order: Rat) -> Result<ExactQSeries> {
    if ell < 2 || !(1..ell).contains(&r) {
        return Err(Error::InvalidInput(format!("unary theta needs ell >= 2, 1 <= r < ell; got ({ell}, {r})")));
    }
    let offset = Rat::new(r * r, 4 * ell);
    let len = span(offset, order, 1);
    let mut coeffs = vec![Rational::zero(); len];
    let kmax = ((order.ceil().to_integer().max(0) as f64).sqrt() as i64) + 2;
    for k in -kmax..=kmax {
        let m = 2 * ell * k + r;
        // exponent offset + k(ell k + r)
        let e = k * (ell * k + r);
        if e >= 0 && (e as usize) < len {
            coeffs[e as usize] += Rational::from_integer(BigInt::from(m));
        }
    }
    Ok(ExactQSeries::new(offset, 1, coeffs))
}

/// `E_w = 1 - (2w / B_w) sum sigma_{w-1}(n) q^n` for even `w >= 4` (also valid for `w = 2`).
pub fn eisenstein_series(w: u32, order: Rat) -> Result<ExactQSeries> {
    if w < 2 || w % 2 == 1 {
        return Err(Error::InvalidInput(format!("Eisenstein weight must be even and >= 2, got {w}")));
    }
    let factor = -Rational::from_integer(BigInt::from(2 * w)) / bernoulli(w as usize);
    let len = span(Rat::zero(), order, 1);
    let mut coeffs = Vec::with_capacity(len);
    for n in 0..len {
        coeffs.push(if n == 0 { Rational::one() } else { &factor * Rational::from_integer(BigInt::from(sigma(w - 1, n as u64))) });
    }
    Ok(ExactQSeries::new(Rat::zero(), 1, coeffs))
}

/// `j = E_4^3 / eta^24 = q^{-1} + 744 + 196884 q + ...`.
pub fn j_oracle(order: Rat) -> Result<ExactQSeries> {
    let inner = order + Rat::from_integer(2);
    let e4 = eisenstein_series(4, inner)?;
    let e43 = e4.mul(&e4).mul(&e4);
    Ok(e43.div(&eta_power(24, inner)?)?.truncate(order))
}

/// `(eta(tau)/eta(2 tau))^24`.
pub fn eta_quotient_level2(order: Rat) -> Result<ExactQSeries> {
    let inner = order + Rat::from_integer(2);
    let num = eta_power(24, inner)?;
    let den = eta_power(24, inner)?.dilate(2);
    Ok(num.div(&den)?.truncate(order))
}

/// Converts exact coefficients to floats, for comparisons with numerical series.
pub fn to_f64_terms(s: &ExactQSeries) -> Vec<(Rat, f64)> {
    s.terms().map(|(e, c)| (e, c.to_f64().unwrap_or(f64::NAN))).collect()
}

/// The same series as a floating-point [`QExpansion`].
pub fn to_qexpansion(s: &ExactQSeries) -> QExpansion {
    QExpansion {
        offset: s.offset(),
        step: s.step(),
        coefficients: s.coefficients().iter().map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)).collect(),
        leading_singular: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::partition_count;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }
    fn int(x: i64) -> Rational {
        Rational::from_integer(BigInt::from(x))
    }

    #[test]
    fn euler_product_matches_direct_product() {
        let len = 60;
        let mut direct = vec![0i64; len];
        direct[0] = 1;
        for n in 1..len {
            for k in (n..len).rev() {
                direct[k] -= direct[k - n];
            }
        }
        assert_eq!(euler_product(len), direct);
    }

    #[test]
    fn eta_cube_and_inverse() {
        let e3 = eta_power(3, r(13, 1)).unwrap();
        assert_eq!(e3.offset(), r(1, 8));
        let expect = [(0, 1), (1, -3), (3, 5), (6, -7), (10, 9)];
        for k in 0..12 {
            let c = e3.coefficient(r(1, 8) + k).unwrap();
            let want = expect.iter().find(|p| p.0 == k).map_or(0, |p| p.1);
            assert_eq!(c, int(want), "k = {k}");
        }
        let inv = eta_power(-1, r(101, 1)).unwrap();
        for n in 0..=100u64 {
            let p = partition_count(n).unwrap();
            let c = inv.coefficient(r(-1, 24) + n as i64).unwrap();
            assert_eq!(c, Rational::from_integer(BigInt::from(p)), "p({n})");
        }
        let one = eta_series(r(20, 1)).mul(&eta_power(-1, r(20, 1)).unwrap());
        assert_eq!(one.normalized().coefficients()[0], int(1));
        assert!(one.normalized().coefficients()[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn theta_identities() {
        let order = r(50, 1);
        let t3 = theta_series(3, ThetaPoint::Zero, order).unwrap();
        for k in 0..40i64 {
            let e = r(k, 2);
            let square = (0..10).any(|n| n * n == k);
            let want = if k == 0 { 1 } else if square { 2 } else { 0 };
            assert_eq!(t3.coefficient(e).unwrap(), int(want), "exp {e}");
        }
        assert!(theta_series(1, ThetaPoint::Zero, order).unwrap().is_zero());
        assert!(theta_series(2, ThetaPoint::Half, order).unwrap().is_zero());
        let t2 = theta_series(2, ThetaPoint::Zero, order).unwrap();
        let t4 = theta_series(4, ThetaPoint::Zero, order).unwrap();
        let prod = t2.mul(&t3).mul(&t4);
        let two_eta3 = eta_power(3, order).unwrap().scale(&int(2));
        let diff = prod.sub(&two_eta3);
        assert!(diff.is_zero());
        assert!(diff.order() >= r(49, 1));
    }

    #[test]
    fn appell_sum_is_stable_under_wider_ell_range() {
        let order = r(30, 1);
        let a = appell_mu_series(order, appell_ell_max(order)).unwrap();
        let b = appell_mu_series(order, 2 * appell_ell_max(order)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coefficient(r(-1, 8)).unwrap(), Rational::new(BigInt::from(1), BigInt::from(4)));
        assert!(appell_mu_series(order, 2).is_err());
        // (1 + q^l) times its geometric expansion is one
        let geo = ExactQSeries::from_integers(Rat::zero(), &[1, 0, 0, -1, 0, 0, 1, 0, 0, -1]);
        let lin = ExactQSeries::from_integers(Rat::zero(), &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0]);
        let one = geo.mul(&lin);
        assert_eq!(one.coefficients()[0], int(1));
        assert!(one.coefficients()[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn mathieu_numbers() {
        let t = mathieu_h_oracle(5).unwrap();
        let want = [90, 462, 1540, 4554, 11592];
        assert_eq!(t, want.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        let z = zk3_series(r(5, 1)).unwrap();
        assert_eq!(z.coefficient(Rat::zero()).unwrap(), int(16));
    }

    #[test]
    fn unary_theta_examples() {
        let s = unary_theta(2, 1, r(30, 1)).unwrap();
        let e3 = eta_power(3, r(30, 1)).unwrap();
        assert_eq!(s.sub(&e3).truncate(r(30, 1)).is_zero(), true);
        for (ell, rr) in [(3, 1), (4, 3), (6, 5)] {
            let s = unary_theta(ell, rr, r(20, 1)).unwrap();
            assert_eq!(s.normalized().offset(), r(rr * rr, 4 * ell));
            assert_eq!(s.normalized().coefficients()[0], int(rr));
            // k -> -k-1 sends 2 ell k + r to -(2 ell k + (2 ell - r))
            let t = unary_theta(ell, ell - rr, r(20, 1)).unwrap();
            let flipped = unary_theta(ell, rr, r(20, 1)).unwrap();
            assert_eq!(t.offset() - flipped.offset(), Rat::new((ell - rr) * (ell - rr) - rr * rr, 4 * ell));
        }
        assert!(unary_theta(1, 1, r(5, 1)).is_err());
    }

    #[test]
    fn eisenstein_and_j() {
        let e4 = eisenstein_series(4, r(5, 1)).unwrap();
        assert_eq!(e4.coefficients()[..3].to_vec(), vec![int(1), int(240), int(2160)]);
        let j = j_oracle(r(4, 1)).unwrap();
        for (e, c) in [(-1, 1i64), (0, 744), (1, 196884), (2, 21493760), (3, 864299970)] {
            assert_eq!(j.coefficient(Rat::from_integer(e)).unwrap(), int(c));
        }
        let e4 = eisenstein_series(4, r(12, 1)).unwrap();
        let e43 = e4.mul(&e4).mul(&e4);
        let back = j_oracle(r(10, 1)).unwrap().mul(&eta_power(24, r(12, 1)).unwrap());
        assert!(back.sub(&e43).is_zero());
    }

    #[test]
    fn level_two_quotient() {
        let t = eta_quotient_level2(r(4, 1)).unwrap();
        for (e, c) in [(-1, 1i64), (0, -24), (1, 276), (2, -2048), (3, 11202)] {
            assert_eq!(t.coefficient(Rat::from_integer(e)).unwrap(), int(c));
        }
    }
}
